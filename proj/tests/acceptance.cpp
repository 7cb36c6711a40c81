// Acceptance gates: eight checks, each printing one "criterion N: PASS|FAIL"
// line (criterion 6 adds a line per sub-part).  --criterion N runs a single
// gate; default runs all.  The exit code is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "steiner/harness.hpp"

namespace {

using namespace steiner;

// pinned tolerances
constexpr double kBaseLo = 2.55, kBaseHi = 3.45;  // criterion 4
constexpr double kFermatTol = 1e-9;               // criterion 7
constexpr double kSquareTol = 1e-6;
constexpr double kAngleTol = 1e-6;
constexpr double kGridRelTol = 0.05;              // criterion 8
constexpr double kC1Cap = 120.0, kC4Cap = 300.0, kC6Cap = 600.0;  // seconds

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void verdict_line(int crit, bool ok, const char* detail) {
    std::printf("criterion %d: %s — %s\n", crit, ok ? "PASS" : "FAIL", detail);
}

bool criterion1() {
    Timer t;
    harness::SuiteSummary s = harness::run_ddcst(500);
    const double secs = t.seconds();
    const bool ok = s.records.size() == 500 && s.all_agree() && secs < kC1Cap;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "rooted depth solver vs exhaustive oracle: %d/%zu agree in %.1fs (cap %.0fs)",
                  s.agrees(), s.records.size(), secs, kC1Cap);
    verdict_line(1, ok, buf);
    return ok;
}

bool criterion2() {
    std::uint64_t bad = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 4 + k % 6;
        const int t_count = 1 + k % std::min(n - 1, 7);
        gen::GenParams params;
        params.absent_prob = 0.25;
        params.value_min = 2;
        params.value_max = 8;
        ProblemInstance inst =
            gen::gen_random(7000 + k, n, t_count, true, ConstraintKind::Diameter, params);
        RelaxedInstance rel = relax(inst);
        dp::Table table = dp::fill(rel);
        bad += dp::recurrence_violations(table, rel);
        bad += dp::monotonicity_violations(table);
    }
    const bool ok = bad == 0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "split/extend and depth-monotonicity inequalities on 50 filled tables "
                  "(n 4..9, |T| up to 7): %llu cell violations",
                  static_cast<unsigned long long>(bad));
    verdict_line(2, ok, buf);
    return ok;
}

bool criterion3() {
    harness::SuiteSummary s = harness::run_relax(300);
    const bool ok = s.records.size() == 300 && s.all_agree();
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "relax->solve->interpret vs oracle on sparse instances of all four kinds: "
                  "%d/%zu agree",
                  s.agrees(), s.records.size());
    verdict_line(3, ok, buf);
    return ok;
}

bool criterion4() {
    Timer t;
    harness::BenchResult res = harness::bench_fill(20, 6, 12, 20, 3, 7);
    const double secs = t.seconds();
    const bool ok = res.base >= kBaseLo && res.base <= kBaseHi && secs < kC4Cap;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "fitted exponential base of fill time vs |T| (n=20, depth 20, |T| 6..12): "
                  "%.4f, required [%.2f, %.2f], %.0fs (cap %.0fs)",
                  res.base, kBaseLo, kBaseHi, secs, kC4Cap);
    verdict_line(4, ok, buf);
    return ok;
}

bool criterion5() {
    harness::SuiteSummary s = harness::run_dcst(300);
    int unsound = 0, unflagged = 0;
    for (const harness::Record& rec : s.records) {
        if (rec.oracle.is_optimal() &&
            (!rec.subject.is_optimal() || rec.subject.weight > rec.oracle.weight))
            ++unsound;  // pipeline may never lose to, or miss, a feasible optimum
        if (rec.verdict == harness::VerdictKind::Disagree && !rec.subject.discrepancy)
            ++unflagged;  // disagreements must carry the discrepancy flag
    }

    const harness::Record& probe = s.records.front();
    nlohmann::json j;
    j["fixture"] = "triangle w={1,1,10}, all terminals, diameter bound 1";
    j["digest"] = probe.digest;
    j["verdict"] = harness::to_string(probe.verdict);
    j["subject"] = io::outcome_to_json(probe.subject);
    j["oracle"] = io::outcome_to_json(probe.oracle);
    j["note"] = probe.note;
    io::write_text("acceptance_c5_k3_verdict.json", j.dump(2) + "\n");

    const bool ok = s.records.size() == 301 && unsound == 0 && unflagged == 0;
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "diameter pipeline over %zu records: %d unsound, %d unflagged; agreement "
                  "%.1f%% (%d agree / %d disagree); triangle fixture verdict \"%s\" written to "
                  "acceptance_c5_k3_verdict.json",
                  s.records.size(), unsound, unflagged, 100.0 * s.agreement_rate(), s.agrees(),
                  s.disagrees(), harness::to_string(probe.verdict));
    verdict_line(5, ok, buf);
    if (probe.verdict == harness::VerdictKind::Disagree)
        std::printf("  note: the bound-1 triangle lifts to a tree that exceeds its own diameter "
                    "bound; the pipeline flags the discrepancy instead of hiding it (see README)\n");
    return ok;
}

bool criterion6() {
    Timer t;

    std::uint64_t bad_a = 0;
    for (int k = 0; k < 50000; ++k) {
        const int delta = 3 + k % 4;
        const int n = delta + 1 + k % 7;
        SteinerTree tree = gen::gen_min_degree_tree(static_cast<std::uint64_t>(k), n, delta);
        if (!reduce::lemma5_check(tree, delta)) ++bad_a;
    }
    std::printf("  c6a: %s — leaf-count bound on 50000 random trees with degree floor 3..6: "
                "%llu violations\n",
                bad_a == 0 ? "PASS" : "FAIL", static_cast<unsigned long long>(bad_a));

    int bad_b = 0, bad_c = 0;
    for (int k = 0; k < 200; ++k) {
        try {
            gen::WitnessCase wc = gen::gen_scst_witness(3000 + k);
            reduce::ScstReduction red = reduce::scst_to_mcst(wc.instance);
            SteinerTree hp = reduce::forward_witness(wc.witness, wc.instance, red);
            const Weight w0 = tree_weight(wc.witness, wc.instance.graph);
            const Weight w1 = tree_weight(hp, red.reduced.graph);
            if (w0 != w1 || !check_solution(red.reduced, hp)) ++bad_b;
            reduce::BackwardWitness back = reduce::backward_witness(hp, wc.instance, red);
            const bool same = back.tree.vertices == wc.witness.vertices &&
                              back.tree.edges == wc.witness.edges && back.size_within_bound;
            if (!same) ++bad_c;
        } catch (const Error&) {
            ++bad_b;
            ++bad_c;
        }
    }
    std::printf("  c6b: %s — witness transform keeps the weight and meets degree bound 2*zeta "
                "on %d/200 witnesses\n",
                bad_b == 0 ? "PASS" : "FAIL", 200 - bad_b);
    std::printf("  c6c: %s — helper deletion restores the original witness on %d/200 round "
                "trips\n",
                bad_c == 0 ? "PASS" : "FAIL", 200 - bad_c);

    harness::SuiteSummary e2e = harness::run_scst_e2e(200, false);
    const int decided = e2e.agrees() + e2e.disagrees();
    const bool ok_d = decided > 0 && e2e.disagrees() == 0;
    std::printf("  c6d: %s — reduced-instance optimum equals the size oracle on %d/%d "
                "budget-completing cases (required 100%%)\n",
                ok_d ? "PASS" : "FAIL", e2e.agrees(), decided);
    if (!ok_d) {
        harness::SuiteSummary planted = harness::run_scst_e2e(40, true);
        std::printf(
            "  finding: helper terminals attach only to non-terminal vertices, so a size-optimal\n"
            "  tree whose internal nodes include terminals has no counterpart on the reduced side,\n"
            "  and zeta == |T| leaves no helpers to reach the degree bound 2*zeta at all.\n"
            "  Instances planted so the optimum keeps every terminal a leaf agree %d/%zu.\n"
            "  See the README findings section and the scst-e2e conformance suites.\n",
            planted.agrees(), planted.records.size());
    }

    const double secs = t.seconds();
    const bool time_ok = secs < kC6Cap;
    const bool ok = bad_a == 0 && bad_b == 0 && bad_c == 0 && ok_d && time_ok;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "degree-reduction chain: a %s, b %s, c %s, d %s in %.0fs (cap %.0fs)",
                  bad_a == 0 ? "pass" : "fail", bad_b == 0 ? "pass" : "fail",
                  bad_c == 0 ? "pass" : "fail", ok_d ? "pass" : "fail", secs, kC6Cap);
    verdict_line(6, ok, buf);
    return ok;
}

bool criterion7() {
    const double s3 = std::sqrt(3.0);
    euclid::FermatResult f = euclid::fermat_point({0, 0}, {1, 0}, {0.5, s3 / 2});
    const double fermat_err = std::abs(f.length - s3);

    euclid::GeometricTree sq = euclid::solve_est({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const double square_err = std::abs(sq.length - (1.0 + s3));
    euclid::GeometricTree tri = euclid::solve_est({{0, 0}, {1, 0}, {0.5, s3 / 2}});
    const double angle_err =
        std::max(sq.max_junction_angle_error(), tri.max_junction_angle_error());

    const bool counts_ok = euclid::count_full_topologies(3) == 1 &&
                           euclid::count_full_topologies(4) == 3 &&
                           euclid::count_full_topologies(5) == 15;

    const bool ok = fermat_err <= kFermatTol && square_err <= kSquareTol &&
                    angle_err <= kAngleTol && counts_ok;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "fermat length err %.2e (tol %.0e), unit-square tree err %.2e (tol %.0e), "
                  "junction angle err %.2e (tol %.0e), topology counts 3,4,5 -> 1,3,15 %s",
                  fermat_err, kFermatTol, square_err, kSquareTol, angle_err, kAngleTol,
                  counts_ok ? "correct" : "wrong");
    verdict_line(7, ok, buf);
    return ok;
}

bool criterion8() {
    const double s3 = std::sqrt(3.0);
    const std::vector<euclid::Point> tri = {{0, 0}, {1, 0}, {0.5, s3 / 2}};
    const std::vector<euclid::Point> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const double ex_tri = euclid::solve_est(tri).length;
    const double ex_sq = euclid::solve_est(sq).length;

    const double g16_tri = euclid::grid_approximate(tri, 16);
    const double g8_sq = euclid::grid_approximate(sq, 8);
    const double g16_sq = euclid::grid_approximate(sq, 16);
    const double g32_sq = euclid::grid_approximate(sq, 32);

    const double rel_tri = std::abs(g16_tri - ex_tri) / ex_tri;
    const double rel_sq = std::abs(g16_sq - ex_sq) / ex_sq;
    const double e8 = std::abs(g8_sq - ex_sq);
    const double e16 = std::abs(g16_sq - ex_sq);
    const double e32 = std::abs(g32_sq - ex_sq);

    const bool ok = rel_tri <= kGridRelTol && rel_sq <= kGridRelTol && e8 >= e16 && e16 >= e32;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "grid bridge at g=16 off by %.2f%% (triangle) and %.2f%% (square), tol %.0f%%; "
                  "square error %.4f >= %.4f >= %.4f over g in {8,16,32}",
                  100.0 * rel_tri, 100.0 * rel_sq, 100.0 * kGridRelTol, e8, e16, e32);
    verdict_line(8, ok, buf);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
            return 2;
        }
    }
    if (which < 0 || which > 8) {
        std::fprintf(stderr, "criterion must be between 1 and 8\n");
        return 2;
    }

    using Gate = bool (*)();
    const Gate gates[8] = {criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7, criterion8};
    int failures = 0;
    for (int c = 1; c <= 8; ++c) {
        if (which != 0 && which != c) continue;
        bool ok = false;
        try {
            ok = gates[c - 1]();
        } catch (const std::exception& e) {
            std::printf("criterion %d: FAIL — unhandled exception: %s\n", c, e.what());
        }
        if (!ok) ++failures;
    }
    if (which == 0) std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
    return failures;
}
