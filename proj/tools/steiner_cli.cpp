// Batch front door: parse instances, dispatch solvers / oracles / reductions,
// run the conformance harness and the scaling benchmark, emit NDJSON reports.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "steiner/harness.hpp"

namespace {

using steiner::ConstraintKind;
using steiner::ProblemInstance;
using steiner::SolveOutcome;
using steiner::Weight;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 2;       // solver reported infeasible
constexpr int kExitDisagree = 3;   // at least one Disagree verdict
constexpr int kExitInput = 4;      // unusable input

class ReportSink {
  public:
    explicit ReportSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw steiner::ParseError("cannot write " + path);
        }
    }
    void emit(const json& record) {
        std::string line = record.dump();
        std::cout << line << "\n";
        if (file_.is_open()) file_ << line << "\n";
    }

  private:
    std::ofstream file_;
};

json record_to_json(const steiner::harness::Record& rec) {
    json j;
    j["suite"] = rec.suite;
    j["seed"] = rec.seed;
    j["digest"] = rec.digest;
    j["verdict"] = steiner::harness::to_string(rec.verdict);
    j["subject"] = steiner::io::outcome_to_json(rec.subject);
    j["oracle"] = steiner::io::outcome_to_json(rec.oracle);
    if (!rec.note.empty()) j["note"] = rec.note;
    if (rec.witness) j["witness"] = steiner::io::instance_to_json(*rec.witness);
    j["seconds"] = rec.seconds;
    return j;
}

steiner::oracle::EnumerationBudget budget_from(std::uint64_t trees, double seconds, int vertices) {
    steiner::oracle::EnumerationBudget b;
    b.max_trees = trees;
    b.time_cap_seconds = seconds;
    b.max_vertices = vertices;
    return b;
}

int run_solve(const std::string& problem, const std::string& path, const std::string& report,
              const std::string& dot_path, const steiner::oracle::EnumerationBudget& budget) {
    ProblemInstance inst = steiner::io::parse_instance(path);
    steiner::harness::detail::Timer timer;
    SolveOutcome out = SolveOutcome::fail();
    std::string verdict;
    if (problem == "ddcst") {
        out = steiner::dp::solve_ddcst(inst);
    } else if (problem == "dcst") {
        out = steiner::reduce::solve_dcst(inst);
    } else {  // mcst-oracle / scst-oracle: exhaustive reference solver
        ConstraintKind want =
            problem == "mcst-oracle" ? ConstraintKind::MinDegree : ConstraintKind::Size;
        if (inst.constraint.kind != want)
            throw steiner::InvariantViolation("instance constraint does not match the subcommand");
        try {
            out = steiner::oracle::brute_solve(inst, budget);
        } catch (const steiner::BudgetExceeded& e) {
            verdict = std::string("oracle_budget_exceeded: ") + e.what();
        }
    }

    json j;
    j["command"] = "solve";
    j["problem"] = problem;
    j["digest"] = steiner::io::digest(inst);
    j["outcome"] = steiner::io::outcome_to_json(out);
    if (!verdict.empty()) j["verdict"] = verdict;
    j["seconds"] = timer.seconds();
    ReportSink sink(report);
    sink.emit(j);
    if (!dot_path.empty() && out.tree)
        steiner::io::write_text(dot_path, steiner::io::tree_to_dot(*out.tree, &inst));
    if (!verdict.empty()) return kExitOk;
    return out.is_optimal() ? kExitOk : kExitFail;
}

int run_reduce(const std::string& kind, const std::string& path, std::string out_path,
               std::string sidecar_path) {
    ProblemInstance inst = steiner::io::parse_instance(path);
    if (out_path.empty()) out_path = path + ".reduced.json";
    if (sidecar_path.empty()) sidecar_path = path + ".sidecar.json";

    json sidecar;
    ProblemInstance reduced;
    if (kind == "dcst-ddcst") {
        steiner::RelaxedInstance rel = steiner::relax(inst);
        steiner::reduce::DcstReduction red = steiner::reduce::dcst_to_ddcst(rel.instance);
        reduced = red.reduced;
        sidecar["offset"] = red.offset;
        sidecar["new_root"] = red.new_root;
        sidecar["big_m"] = rel.big_m;
    } else {  // scst-mcst
        steiner::reduce::ScstReduction red = steiner::reduce::scst_to_mcst(inst);
        reduced = red.reduced;
        sidecar["eta_ids"] = red.eta_ids;
        sidecar["alpha"] = red.alpha;
        sidecar["beta"] = red.beta;
    }
    steiner::io::write_text(out_path, steiner::io::instance_to_json(reduced).dump(2) + "\n");
    steiner::io::write_text(sidecar_path, sidecar.dump(2) + "\n");

    json j;
    j["command"] = "reduce";
    j["kind"] = kind;
    j["digest_in"] = steiner::io::digest(inst);
    j["digest_out"] = steiner::io::digest(reduced);
    j["out"] = out_path;
    j["sidecar"] = sidecar_path;
    ReportSink(std::string{}).emit(j);
    return kExitOk;
}

int run_oracle(const std::string& path, const std::string& report,
               const steiner::oracle::EnumerationBudget& budget) {
    ProblemInstance inst = steiner::io::parse_instance(path);
    steiner::harness::detail::Timer timer;
    json j;
    j["command"] = "oracle";
    j["digest"] = steiner::io::digest(inst);
    int code = kExitOk;
    try {
        SolveOutcome out = steiner::oracle::brute_solve(inst, budget);
        j["outcome"] = steiner::io::outcome_to_json(out);
        code = out.is_optimal() ? kExitOk : kExitFail;
    } catch (const steiner::BudgetExceeded& e) {
        j["verdict"] = std::string("oracle_budget_exceeded: ") + e.what();
    }
    j["seconds"] = timer.seconds();
    ReportSink sink(report);
    sink.emit(j);
    return code;
}

int run_conformance(const std::string& suite, int seeds, const std::string& report, bool summary,
                    const steiner::oracle::EnumerationBudget& budget) {
    std::vector<steiner::harness::SuiteSummary> parts;
    auto want = [&](const char* name) { return suite == name || suite == "all"; };
    if (want("ddcst")) parts.push_back(steiner::harness::run_ddcst(seeds, budget));
    if (want("relax")) parts.push_back(steiner::harness::run_relax(seeds, budget));
    if (want("dcst")) parts.push_back(steiner::harness::run_dcst(seeds, budget));
    if (want("scst-witness")) parts.push_back(steiner::harness::run_scst_witness(seeds));
    if (want("scst-e2e")) parts.push_back(steiner::harness::run_scst_e2e(seeds, false, budget));
    if (want("scst-e2e-planted")) parts.push_back(steiner::harness::run_scst_e2e(seeds, true, budget));
    if (parts.empty()) throw steiner::ParseError("unknown suite " + suite);

    ReportSink sink(report);
    int agree = 0, disagree = 0, budget_missed = 0;
    for (auto& part : parts) {
        for (auto& rec : part.records) {
            json j = record_to_json(rec);
            j["command"] = "conformance";
            sink.emit(j);
        }
        agree += part.agrees();
        disagree += part.disagrees();
        budget_missed += part.budget_misses();
    }
    if (summary) {
        json j;
        j["command"] = "conformance";
        j["summary"] = {{"agree", agree},
                        {"disagree", disagree},
                        {"oracle_budget_exceeded", budget_missed},
                        {"agreement_rate",
                         agree + disagree == 0 ? 1.0 : double(agree) / double(agree + disagree)}};
        sink.emit(j);
    }
    return disagree > 0 ? kExitDisagree : kExitOk;
}

int run_bench(int n, const std::string& t_range, std::int64_t depth, int reps, std::uint64_t seed,
              const std::string& report) {
    auto sep = t_range.find("..");
    if (sep == std::string::npos)
        throw steiner::ParseError("--t-range expects A..B, got " + t_range);
    int t_lo = std::stoi(t_range.substr(0, sep));
    int t_hi = std::stoi(t_range.substr(sep + 2));
    steiner::harness::BenchResult result =
        steiner::harness::bench_fill(n, t_lo, t_hi, depth, reps, seed);

    ReportSink sink(report);
    for (auto& cell : result.cells) {
        json j;
        j["command"] = "bench";
        j["n"] = n;
        j["depth_bound"] = depth;
        j["t_count"] = cell.t_count;
        j["best_seconds"] = cell.best_seconds;
        j["rep_seconds"] = cell.rep_seconds;
        sink.emit(j);
    }
    json j;
    j["command"] = "bench";
    j["slope"] = result.slope;
    j["base"] = result.base;
    sink.emit(j);
    return kExitOk;
}

int run_gen(std::uint64_t seed, int n, int t, bool directed, const std::string& kind,
            double absent_prob, std::int64_t value_min, std::int64_t value_max,
            const std::string& out_path) {
    ConstraintKind ck;
    if (kind == "diameter")
        ck = ConstraintKind::Diameter;
    else if (kind == "min_degree")
        ck = ConstraintKind::MinDegree;
    else if (kind == "size")
        ck = ConstraintKind::Size;
    else
        throw steiner::ParseError("unknown constraint kind " + kind);
    steiner::gen::GenParams params;
    params.absent_prob = absent_prob;
    params.value_min = value_min;
    params.value_max = value_max;
    ProblemInstance inst = steiner::gen::gen_random(seed, n, t, directed, ck, params);
    std::string text = steiner::io::instance_to_json(inst).dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        steiner::io::write_text(out_path, text);
    return kExitOk;
}

int run_euclid(const std::string& path, int grid, const std::string& svg_path,
               std::uint64_t op_limit) {
    std::vector<steiner::euclid::Point> points = steiner::io::parse_points(path);
    steiner::harness::detail::Timer timer;
    json j;
    j["command"] = "euclid";
    if (grid > 0) {
        double length = steiner::euclid::grid_approximate(points, grid, op_limit);
        j["mode"] = "grid";
        j["resolution"] = grid;
        j["length"] = length;
    } else {
        steiner::euclid::GeometricTree tree = steiner::euclid::solve_est(points);
        j["mode"] = "exact";
        j["length"] = tree.length;
        json junctions = json::array();
        for (size_t i = tree.terminal_count; i < tree.nodes.size(); ++i)
            junctions.push_back({tree.nodes[i].x, tree.nodes[i].y});
        j["junctions"] = std::move(junctions);
        json edges = json::array();
        for (auto& e : tree.edges) edges.push_back({e.first, e.second});
        j["edges"] = std::move(edges);
        if (!svg_path.empty())
            steiner::io::write_text(svg_path, steiner::io::geometric_tree_to_svg(tree));
    }
    j["seconds"] = timer.seconds();
    ReportSink(std::string{}).emit(j);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solvers, reductions, oracles, and harnesses for constrained Steiner trees"};
    app.require_subcommand(1);

    // oracle budgets, overridable through the environment
    std::uint64_t budget_trees = 5'000'000;
    double budget_seconds = 30.0;
    int budget_vertices = 8;
    std::uint64_t op_limit = 4'000'000'000ull;

    std::string solve_problem, solve_file, solve_report, solve_dot;
    CLI::App* solve = app.add_subcommand("solve", "Solve an instance file");
    solve->add_option("problem", solve_problem, "ddcst | dcst | mcst-oracle | scst-oracle")
        ->required()
        ->check(CLI::IsMember({"ddcst", "dcst", "mcst-oracle", "scst-oracle"}));
    solve->add_option("file", solve_file, "instance JSON path")->required();
    solve->add_option("--report", solve_report, "also append the NDJSON record to this file");
    solve->add_option("--dot", solve_dot, "write the solution tree as GraphViz DOT");

    std::string reduce_kind, reduce_file, reduce_out, reduce_sidecar;
    CLI::App* reduce_cmd = app.add_subcommand("reduce", "Transform an instance, emit sidecar metadata");
    reduce_cmd->add_option("kind", reduce_kind, "dcst-ddcst | scst-mcst")
        ->required()
        ->check(CLI::IsMember({"dcst-ddcst", "scst-mcst"}));
    reduce_cmd->add_option("file", reduce_file, "instance JSON path")->required();
    reduce_cmd->add_option("--out", reduce_out, "reduced instance path (default FILE.reduced.json)");
    reduce_cmd->add_option("--sidecar", reduce_sidecar, "metadata path (default FILE.sidecar.json)");

    std::string oracle_file, oracle_report;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exhaustive reference solver");
    oracle_cmd->add_option("file", oracle_file, "instance JSON path")->required();
    oracle_cmd->add_option("--report", oracle_report, "also append the NDJSON record to this file");

    std::string conf_suite = "all", conf_report;
    int conf_seeds = 100;
    bool conf_summary = false;
    CLI::App* conf = app.add_subcommand("conformance", "Subject-vs-oracle agreement suites");
    conf->add_option("--suite", conf_suite,
                     "ddcst | relax | dcst | scst-witness | scst-e2e | scst-e2e-planted | all");
    conf->add_option("--seeds", conf_seeds, "instances per suite")->check(CLI::PositiveNumber);
    conf->add_option("--out", conf_report, "also append NDJSON records to this file");
    conf->add_flag("--summary", conf_summary, "append an aggregate record");

    int bench_n = 20, bench_reps = 3;
    std::int64_t bench_depth = 20;
    std::uint64_t bench_seed = 7;
    std::string bench_trange = "6..12", bench_report;
    CLI::App* bench = app.add_subcommand("bench", "Time the table fill across terminal counts");
    bench->add_option("--n", bench_n, "vertex count")->check(CLI::Range(2, 24));
    bench->add_option("--t-range", bench_trange, "terminal sweep A..B");
    bench->add_option("--depth", bench_depth, "depth bound");
    bench->add_option("--reps", bench_reps, "repetitions per cell")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "weight seed");
    bench->add_option("--out", bench_report, "also append NDJSON records to this file");

    std::uint64_t gen_seed = 0;
    int gen_n = 5, gen_t = 2;
    bool gen_directed = false;
    std::string gen_kind = "diameter", gen_out;
    double gen_absent = 0.2;
    std::int64_t gen_vmin = 1, gen_vmax = 5;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Emit a seed-deterministic random instance");
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--n", gen_n, "vertex count")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--t", gen_t, "terminal count")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--directed", gen_directed, "rooted directed instance");
    gen_cmd->add_option("--kind", gen_kind, "diameter | min_degree | size")
        ->check(CLI::IsMember({"diameter", "min_degree", "size"}));
    gen_cmd->add_option("--absent-prob", gen_absent, "probability an edge is absent")
        ->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--value-min", gen_vmin, "constraint value lower bound");
    gen_cmd->add_option("--value-max", gen_vmax, "constraint value upper bound");
    gen_cmd->add_option("--out", gen_out, "write the instance here instead of stdout");

    std::string euclid_file, euclid_svg;
    int euclid_grid = 0;
    CLI::App* euclid_cmd = app.add_subcommand("euclid", "Euclidean Steiner tree on point sites");
    euclid_cmd->add_option("file", euclid_file, "JSON file with {\"points\": [[x, y], ...]}")
        ->required();
    CLI::Option* grid_opt =
        euclid_cmd->add_option("--grid", euclid_grid, "lattice resolution (approximate mode)")
            ->check(CLI::Range(2, 32));
    euclid_cmd->add_option("--svg", euclid_svg, "write an SVG drawing (exact mode only)")
        ->excludes(grid_opt);

    for (CLI::App* sub : {solve, oracle_cmd, conf}) {
        sub->add_option("--budget-trees", budget_trees, "oracle tree enumeration cap")
            ->envname("STEINER_BUDGET_TREES");
        sub->add_option("--budget-seconds", budget_seconds, "oracle wall-clock cap")
            ->envname("STEINER_BUDGET_SECONDS");
        sub->add_option("--budget-vertices", budget_vertices, "oracle vertex cap")
            ->envname("STEINER_BUDGET_VERTICES");
    }
    euclid_cmd->add_option("--op-limit", op_limit, "grid-mode table fill operation cap")
        ->envname("STEINER_OP_LIMIT");

    CLI11_PARSE(app, argc, argv);

    try {
        auto budget = budget_from(budget_trees, budget_seconds, budget_vertices);
        if (solve->parsed()) return run_solve(solve_problem, solve_file, solve_report, solve_dot, budget);
        if (reduce_cmd->parsed()) return run_reduce(reduce_kind, reduce_file, reduce_out, reduce_sidecar);
        if (oracle_cmd->parsed()) return run_oracle(oracle_file, oracle_report, budget);
        if (conf->parsed())
            return run_conformance(conf_suite, conf_seeds, conf_report, conf_summary, budget);
        if (bench->parsed())
            return run_bench(bench_n, bench_trange, bench_depth, bench_reps, bench_seed, bench_report);
        if (gen_cmd->parsed())
            return run_gen(gen_seed, gen_n, gen_t, gen_directed, gen_kind, gen_absent, gen_vmin,
                           gen_vmax, gen_out);
        if (euclid_cmd->parsed()) return run_euclid(euclid_file, euclid_grid, euclid_svg, op_limit);
    } catch (const steiner::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const steiner::InvariantViolation& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const steiner::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
