#include <catch_amalgamated.hpp>

#include "steiner/gen.hpp"
#include "steiner/oracle.hpp"

using namespace steiner;
using namespace steiner::gen;

namespace {

ProblemInstance complete_undirected(int n, std::vector<Vertex> terminals,
                                    Constraint c = {ConstraintKind::Diameter, 5}) {
    ProblemInstance inst;
    inst.directed = false;
    inst.graph = WeightMatrix(n, true);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) inst.graph.set(i, j, 1);
    inst.terminals = std::move(terminals);
    inst.constraint = c;
    return inst;
}

std::uint64_t count_candidates(const ProblemInstance& inst) {
    std::uint64_t count = 0;
    oracle::enumerate_candidate_trees(inst, oracle::EnumerationBudget{},
                                      [&](const SteinerTree&) {
                                          ++count;
                                          return true;
                                      });
    return count;
}

}  // namespace

TEST_CASE("candidate counts over complete graphs match the tree-counting formula") {
    // all vertices terminal: candidates are exactly the spanning trees,
    // n^(n-2) of them
    REQUIRE(count_candidates(complete_undirected(3, {0, 1, 2})) == 3);
    REQUIRE(count_candidates(complete_undirected(4, {0, 1, 2, 3})) == 16);
    REQUIRE(count_candidates(complete_undirected(5, {0, 1, 2, 3, 4})) == 125);
}

TEST_CASE("optional vertices widen the candidate pool subset by subset") {
    // K2 + two K3 supersets + the full K4: 1 + 3 + 3 + 16
    REQUIRE(count_candidates(complete_undirected(4, {0, 1})) == 23);
}

TEST_CASE("the visitor can stop the enumeration") {
    std::uint64_t visited = 0;
    oracle::enumerate_candidate_trees(complete_undirected(5, {0, 1, 2, 3, 4}),
                                      oracle::EnumerationBudget{},
                                      [&](const SteinerTree&) {
                                          ++visited;
                                          return false;
                                      });
    REQUIRE(visited == 1);
}

TEST_CASE("enumeration budgets are enforced") {
    SECTION("vertex cap") {
        ProblemInstance inst = complete_undirected(9, {0, 1});
        REQUIRE_THROWS_AS(count_candidates(inst), BudgetExceeded);
    }
    SECTION("tree count cap") {
        oracle::EnumerationBudget tight;
        tight.max_trees = 10;
        REQUIRE_THROWS_AS(
            oracle::enumerate_candidate_trees(complete_undirected(5, {0, 1, 2, 3, 4}),
                                              tight, [](const SteinerTree&) { return true; }),
            BudgetExceeded);
    }
}

TEST_CASE("a single required vertex is its own tree") {
    ProblemInstance inst;
    inst.directed = false;
    inst.graph = WeightMatrix(1, true);
    inst.terminals = {0};
    inst.constraint = {ConstraintKind::Diameter, 1};
    SolveOutcome out = oracle::brute_solve(inst);
    REQUIRE(out.is_optimal());
    REQUIRE(out.weight == 0);
    REQUIRE(out.tree->vertices == std::vector<Vertex>{0});
    REQUIRE(out.tree->edges.empty());
}

TEST_CASE("reference solve on the guarded triangle") {
    ProblemInstance inst;
    inst.directed = false;
    inst.graph = WeightMatrix(3, true);
    inst.graph.set(0, 1, 1);
    inst.graph.set(0, 2, 1);
    inst.graph.set(1, 2, 10);
    inst.terminals = {0, 1, 2};

    SECTION("diameter two admits the cheap star") {
        inst.constraint = {ConstraintKind::Diameter, 2};
        SolveOutcome out = oracle::brute_solve(inst);
        REQUIRE(out.is_optimal());
        REQUIRE(out.weight == 2);
        REQUIRE(out.tree->edges ==
                std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {0, 2}});
    }
    SECTION("diameter one fits no three-terminal tree") {
        inst.constraint = {ConstraintKind::Diameter, 1};
        REQUIRE_FALSE(oracle::brute_solve(inst).is_optimal());
    }
}

TEST_CASE("equal-weight optima resolve by the sorted edge list") {
    ProblemInstance inst;  // a 4-cycle of unit edges; two ways around
    inst.directed = false;
    inst.graph = WeightMatrix(4, true);
    inst.graph.set(0, 1, 1);
    inst.graph.set(1, 2, 1);
    inst.graph.set(2, 3, 1);
    inst.graph.set(0, 3, 1);
    inst.terminals = {0, 2};
    inst.constraint = {ConstraintKind::Diameter, 2};
    SolveOutcome out = oracle::brute_solve(inst);
    REQUIRE(out.is_optimal());
    REQUIRE(out.weight == 2);
    REQUIRE(out.tree->edges == std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}});
}

TEST_CASE("directed solves respect edge direction") {
    ProblemInstance inst;
    inst.directed = true;
    inst.graph = WeightMatrix(3, false);
    inst.graph.set(0, 1, 1);
    inst.graph.set(2, 1, 1);  // wrong way: 1 cannot reach 2
    inst.terminals = {1, 2};
    inst.root = 0;
    inst.constraint = {ConstraintKind::Diameter, 2};
    REQUIRE_FALSE(oracle::brute_solve(inst).is_optimal());

    inst.graph.set(1, 2, 3);
    SolveOutcome out = oracle::brute_solve(inst);
    REQUIRE(out.is_optimal());
    REQUIRE(out.weight == 4);
    REQUIRE(out.tree->root == 0);
    REQUIRE(rooted_depth(*out.tree) == 2);
}

TEST_CASE("degree-floored solves only accept compliant trees") {
    ProblemInstance inst = complete_undirected(4, {0, 1, 2, 3},
                                               {ConstraintKind::MinDegree, 3});
    SolveOutcome out = oracle::brute_solve(inst);
    REQUIRE(out.is_optimal());
    REQUIRE(out.weight == 3);  // only the four stars qualify; paths have a
                               // degree-2 internal vertex
    REQUIRE(out.tree->edges ==
            std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {0, 2}, {0, 3}});
}

TEST_CASE("structured degree solve recovers the planted optimum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        WitnessCase wc = gen_planted_scst(seed);
        reduce::ScstReduction red = reduce::scst_to_mcst(wc.instance);
        CAPTURE(seed);

        SolveOutcome out = oracle::pruned_mcst_solve(red.reduced, red);
        REQUIRE(out.is_optimal());
        REQUIRE(out.weight == tree_weight(wc.witness, wc.instance.graph));
        REQUIRE(out.tree.has_value());
        REQUIRE(check_solution(red.reduced, *out.tree));

        reduce::BackwardWitness back =
            reduce::backward_witness(*out.tree, wc.instance, red);
        REQUIRE(back.tree.vertices == wc.witness.vertices);
        REQUIRE(back.tree.edges == wc.witness.edges);
        REQUIRE(back.size_within_bound);
    }
}

TEST_CASE("structured degree solve guards its preconditions") {
    WitnessCase wc = gen_planted_scst(3);
    reduce::ScstReduction red = reduce::scst_to_mcst(wc.instance);
    SECTION("wrong constraint kind") {
        REQUIRE_THROWS_AS(oracle::pruned_mcst_solve(wc.instance, red), InvariantViolation);
    }
    SECTION("core vertex cap") {
        ProblemInstance big;
        big.directed = false;
        big.graph = WeightMatrix(9, true);
        for (int v = 1; v < 9; ++v) big.graph.set(0, v, 1);
        big.terminals = {1, 2, 3};
        big.constraint = {ConstraintKind::Size, 4};
        reduce::ScstReduction bigred = reduce::scst_to_mcst(big);
        REQUIRE_THROWS_AS(oracle::pruned_mcst_solve(bigred.reduced, bigred),
                          BudgetExceeded);
    }
}

TEST_CASE("a tight size bound with no spare vertices cannot host helpers") {
    // zeta equal to |T| leaves no room for internal nodes, and a terminal
    // that must sit inland can never reach the degree bound
    ProblemInstance inst;
    inst.directed = false;
    inst.graph = WeightMatrix(3, true);
    inst.graph.set(0, 1, 1);
    inst.graph.set(1, 2, 1);
    inst.terminals = {0, 1, 2};
    inst.constraint = {ConstraintKind::Size, 3};
    reduce::ScstReduction red = reduce::scst_to_mcst(inst);
    REQUIRE(red.alpha == 0);
    REQUIRE_FALSE(oracle::pruned_mcst_solve(red.reduced, red).is_optimal());
    REQUIRE_FALSE(oracle::brute_solve(red.reduced).is_optimal());
}
