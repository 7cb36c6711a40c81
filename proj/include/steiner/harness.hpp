#pragma once

#include <chrono>
#include <functional>

#include "steiner/dp.hpp"
#include "steiner/gen.hpp"
#include "steiner/io.hpp"
#include "steiner/oracle.hpp"
#include "steiner/reduce.hpp"

namespace steiner::harness {

enum class VerdictKind { Agree, Disagree, OracleBudgetExceeded };

inline const char* to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::Agree: return "agree";
        case VerdictKind::Disagree: return "disagree";
        case VerdictKind::OracleBudgetExceeded: return "oracle_budget_exceeded";
    }
    return "?";
}

struct Record {
    std::string suite;
    std::uint64_t seed = 0;
    std::string digest;
    VerdictKind verdict = VerdictKind::Agree;
    SolveOutcome subject = SolveOutcome::fail();
    SolveOutcome oracle = SolveOutcome::fail();
    std::string note;
    std::optional<ProblemInstance> witness;  // embedded whenever the verdict is Disagree
    double seconds = 0;
};

struct SuiteSummary {
    std::vector<Record> records;

    int count(VerdictKind v) const {
        int c = 0;
        for (auto& r : records)
            if (r.verdict == v) ++c;
        return c;
    }
    int agrees() const { return count(VerdictKind::Agree); }
    int disagrees() const { return count(VerdictKind::Disagree); }
    int budget_misses() const { return count(VerdictKind::OracleBudgetExceeded); }
    bool all_agree() const { return agrees() == static_cast<int>(records.size()); }
    double agreement_rate() const {
        int decided = agrees() + disagrees();
        return decided == 0 ? 1.0 : static_cast<double>(agrees()) / decided;
    }
};

namespace detail {

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline bool outcomes_match(const SolveOutcome& a, const SolveOutcome& b) {
    if (a.status != b.status) return false;
    return !a.is_optimal() || a.weight == b.weight;
}

template <typename SubjectFn>
Record compare_with_oracle(const std::string& suite, std::uint64_t seed, const ProblemInstance& inst,
                           SubjectFn&& subject_fn, const oracle::EnumerationBudget& budget) {
    Record rec;
    rec.suite = suite;
    rec.seed = seed;
    rec.digest = io::digest(inst);
    Timer timer;
    rec.subject = subject_fn(inst);
    try {
        rec.oracle = oracle::brute_solve(inst, budget);
    } catch (const BudgetExceeded& e) {
        rec.verdict = VerdictKind::OracleBudgetExceeded;
        rec.note = e.what();
        rec.seconds = timer.seconds();
        return rec;
    }
    if (outcomes_match(rec.subject, rec.oracle)) {
        rec.verdict = VerdictKind::Agree;
    } else {
        rec.verdict = VerdictKind::Disagree;
        rec.witness = inst;
        rec.note = "subject " + std::string(rec.subject.is_optimal() ? "optimal" : "fail") +
                   (rec.subject.is_optimal() ? "(" + std::to_string(rec.subject.weight) + ")" : "") +
                   " vs oracle " + std::string(rec.oracle.is_optimal() ? "optimal" : "fail") +
                   (rec.oracle.is_optimal() ? "(" + std::to_string(rec.oracle.weight) + ")" : "");
    }
    rec.seconds = timer.seconds();
    return rec;
}

}  // namespace detail

// Rooted depth-bounded instances: the subset dynamic program against the
// tree-enumeration oracle.
inline SuiteSummary run_ddcst(int seeds, const oracle::EnumerationBudget& budget = {}) {
    SuiteSummary sum;
    for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = static_cast<std::uint64_t>(k);
        int n = 3 + k % 4;
        int t = 1 + k % 3;
        if (t >= n) t = n - 1;
        gen::GenParams params;
        params.value_min = 1;
        params.value_max = 5;
        ProblemInstance inst =
            gen::gen_random(seed, n, t, true, ConstraintKind::Diameter, params);
        sum.records.push_back(detail::compare_with_oracle(
            "ddcst", seed, inst, [](const ProblemInstance& i) { return dp::solve_ddcst(i); },
            budget));
    }
    return sum;
}

// Big-M relaxation conformance across all four problem kinds: solve the
// relaxed (complete) instance, reinterpret weights >= M as infeasible, and
// compare with the oracle run directly on the sparse original.
inline SuiteSummary run_relax(int seeds, const oracle::EnumerationBudget& budget = {}) {
    SuiteSummary sum;
    for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(k);
        gen::GenParams params;
        params.absent_prob = 0.3;
        ProblemInstance inst;
        std::function<SolveOutcome(const ProblemInstance&)> subject_fn;
        switch (k % 4) {
            case 0: {  // rooted depth: the dynamic program is the solver
                int n = 3 + k % 4, t = std::min(1 + k % 3, n - 1);
                params.value_max = 5;
                inst = gen::gen_random(seed, n, t, true, ConstraintKind::Diameter, params);
                subject_fn = [](const ProblemInstance& i) { return dp::solve_ddcst(i); };
                break;
            }
            case 1: {  // undirected diameter, exhaustive inner solver
                int n = 3 + k % 4, t = std::min(1 + k % 4, n);
                params.value_max = 4;
                inst = gen::gen_random(seed, n, t, false, ConstraintKind::Diameter, params);
                break;
            }
            case 2: {  // min-degree, exhaustive inner solver
                int n = 3 + k % 4, t = std::min(1 + k % 3, n);
                params.value_max = 3;
                inst = gen::gen_random(seed, n, t, false, ConstraintKind::MinDegree, params);
                break;
            }
            default: {  // size, exhaustive inner solver
                int n = 3 + k % 4, t = std::min(1 + k % 3, n);
                params.value_max = 5;
                inst = gen::gen_random(seed, n, t, false, ConstraintKind::Size, params);
                break;
            }
        }
        if (!subject_fn)
            subject_fn = [&budget](const ProblemInstance& i) {
                RelaxedInstance rel = relax(i);
                SolveOutcome inner = oracle::brute_solve(rel.instance, budget);
                if (!inner.is_optimal()) return SolveOutcome::fail();
                SolveOutcome out = interpret(inner.weight, rel.big_m);
                if (out.is_optimal()) out.tree = inner.tree;
                return out;
            };
        sum.records.push_back(detail::compare_with_oracle("relax", seed, inst, subject_fn, budget));
    }
    return sum;
}

// The fixed probe instance for the diameter reduction's weak spot: a
// triangle with weights 1, 1, 10, all vertices terminal, diameter bound 1.
inline ProblemInstance k3_probe() {
    ProblemInstance inst;
    inst.directed = false;
    inst.graph = WeightMatrix(3, true);
    inst.graph.set(0, 1, 1);
    inst.graph.set(0, 2, 1);
    inst.graph.set(1, 2, 10);
    inst.terminals = {0, 1, 2};
    inst.constraint = {ConstraintKind::Diameter, 1};
    inst.validate();
    return inst;
}

// Undirected diameter pipeline (relax, add root, solve rooted, lift) against
// the oracle. The first record is always the fixed probe instance.
inline SuiteSummary run_dcst(int seeds, const oracle::EnumerationBudget& budget = {}) {
    SuiteSummary sum;
    auto subject_fn = [](const ProblemInstance& i) { return reduce::solve_dcst(i); };
    Record probe = detail::compare_with_oracle("dcst", 0, k3_probe(), subject_fn, budget);
    probe.note = "fixed probe (triangle 1/1/10, bound 1): " + probe.note;
    sum.records.push_back(std::move(probe));
    for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = 2000 + static_cast<std::uint64_t>(k);
        int n = 3 + k % 4;
        int t = std::min(1 + k % 4, n);
        gen::GenParams params;
        params.value_max = 4;
        ProblemInstance inst = gen::gen_random(seed, n, t, false, ConstraintKind::Diameter, params);
        sum.records.push_back(detail::compare_with_oracle("dcst", seed, inst, subject_fn, budget));
    }
    return sum;
}

// Witness mappings of the size-to-degree reduction: weight preservation,
// degree feasibility, the leaf-count inequality, and the round-trip back to
// the original witness.
inline SuiteSummary run_scst_witness(int seeds) {
    SuiteSummary sum;
    for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = 3000 + static_cast<std::uint64_t>(k);
        Record rec;
        rec.suite = "scst-witness";
        rec.seed = seed;
        detail::Timer timer;
        gen::WitnessCase wc = gen::gen_scst_witness(seed);
        rec.digest = io::digest(wc.instance);
        std::vector<std::string> failed;
        try {
            reduce::ScstReduction red = reduce::scst_to_mcst(wc.instance);
            SteinerTree hp = reduce::forward_witness(wc.witness, wc.instance, red);
            Weight w0 = tree_weight(wc.witness, wc.instance.graph);
            Weight w1 = tree_weight(hp, red.reduced.graph);
            rec.oracle = SolveOutcome::optimal(w0, wc.witness);
            rec.subject = SolveOutcome::optimal(w1, hp);
            if (w0 != w1) failed.push_back("weight_preserved");
            if (!check_solution(red.reduced, hp)) failed.push_back("min_degree_feasible");
            if (!reduce::lemma5_check(hp, 2 * wc.zeta)) failed.push_back("leaf_count_bound");
            reduce::BackwardWitness back = reduce::backward_witness(hp, wc.instance, red);
            SteinerTree expected = wc.witness;
            expected.normalize();
            if (!(back.tree == expected)) failed.push_back("round_trip_identity");
            if (!back.size_within_bound) failed.push_back("round_trip_size");
        } catch (const Error& e) {
            failed.push_back(std::string("exception: ") + e.what());
        }
        if (failed.empty()) {
            rec.verdict = VerdictKind::Agree;
        } else {
            rec.verdict = VerdictKind::Disagree;
            rec.witness = wc.instance;
            for (auto& f : failed) rec.note += (rec.note.empty() ? "" : ", ") + f;
        }
        rec.seconds = timer.seconds();
        sum.records.push_back(std::move(rec));
    }
    return sum;
}

// End-to-end size-constrained solving through the degree reduction versus
// the oracle on the original instance. With planted=true the instances are
// built around a known reduction-reachable optimum; otherwise they are
// unrestricted random instances.
inline SuiteSummary run_scst_e2e(int seeds, bool planted,
                                 const oracle::EnumerationBudget& budget = {}) {
    SuiteSummary sum;
    for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = (planted ? 5000 : 4000) + static_cast<std::uint64_t>(k);
        ProblemInstance inst;
        if (planted) {
            inst = gen::gen_planted_scst(seed).instance;
        } else {
            int n = 3 + k % 3;
            gen::GenParams params;
            params.value_min = 3;
            params.value_max = 4;
            inst = gen::gen_random(seed, n, 3, false, ConstraintKind::Size, params);
        }
        auto subject_fn = [&budget](const ProblemInstance& i) {
            reduce::ScstReduction red = reduce::scst_to_mcst(i);
            return oracle::pruned_mcst_solve(red.reduced, red, budget);
        };
        sum.records.push_back(detail::compare_with_oracle(
            planted ? "scst-e2e-planted" : "scst-e2e", seed, inst, subject_fn, budget));
    }
    return sum;
}

struct BenchCell {
    int t_count = 0;
    double best_seconds = 0;
    std::vector<double> rep_seconds;
};

struct BenchResult {
    int n = 0;
    std::int64_t depth_bound = 0;
    std::vector<BenchCell> cells;
    double slope = 0;  // least-squares slope of ln(best time) vs |T|
    double base = 0;   // exp(slope): fitted per-terminal growth factor
};

// Wall-times the table fill on complete rooted instances of fixed n while
// sweeping the terminal count, then fits the exponential growth base.
inline BenchResult bench_fill(int n, int t_lo, int t_hi, std::int64_t depth_bound, int reps,
                              std::uint64_t seed) {
    if (n < 2 || t_lo < 1 || t_hi < t_lo || t_hi >= n) throw InvariantViolation("bad bench shape");
    BenchResult result;
    result.n = n;
    result.depth_bound = depth_bound;
    gen::Rng rng(seed);

    for (int t = t_lo; t <= t_hi; ++t) {
        ProblemInstance inst;
        inst.directed = true;
        inst.graph = WeightMatrix(n, false);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) inst.graph.set(i, j, 1 + rng.below(9));
        for (int v = 1; v <= t; ++v) inst.terminals.push_back(v);
        inst.root = 0;
        inst.constraint = {ConstraintKind::Diameter, depth_bound};
        inst.validate();
        RelaxedInstance rel = relax(inst);

        BenchCell cell;
        cell.t_count = t;
        // Each cell repeats until both the requested count and a small wall
        // budget are spent (hard cap 40): cheap cells get many repetitions,
        // which pins down their minimum as tightly as the expensive ones.
        double spent = 0;
        for (int r = 0; r < 40; ++r) {
            if (r >= reps && spent >= 0.35) break;
            detail::Timer timer;
            dp::Table table = dp::fill(rel);
            double s = timer.seconds();
            (void)table;
            cell.rep_seconds.push_back(s);
            spent += s;
        }
        // Timing noise is one-sided (preemption, cache pollution), so the
        // fastest repetition is the robust estimate of the undisturbed time.
        cell.best_seconds = *std::min_element(cell.rep_seconds.begin(), cell.rep_seconds.end());
        result.cells.push_back(std::move(cell));
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(result.cells.size());
    for (auto& c : result.cells) {
        double x = c.t_count, y = std::log(std::max(c.best_seconds, 1e-9));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    result.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    result.base = std::exp(result.slope);
    return result;
}

}  // namespace steiner::harness
