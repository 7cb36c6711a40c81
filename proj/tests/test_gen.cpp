#include <catch_amalgamated.hpp>

#include "steiner/gen.hpp"
#include "steiner/io.hpp"

using namespace steiner;
using namespace steiner::gen;

TEST_CASE("random draws are reproducible from the seed") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
    REQUIRE(Rng(1).next() != Rng(2).next());
    REQUIRE(Rng(0).below(0) == 0);
    Rng c(3);
    REQUIRE_FALSE(c.chance(0.0));
    REQUIRE(c.chance(1.0));
}

TEST_CASE("generated instances are seed-deterministic") {
    for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
        ProblemInstance a = gen_random(seed, 6, 3, true, ConstraintKind::Diameter);
        ProblemInstance b = gen_random(seed, 6, 3, true, ConstraintKind::Diameter);
        REQUIRE(io::digest(a) == io::digest(b));
    }
    REQUIRE(io::digest(gen_random(1, 6, 3, true, ConstraintKind::Diameter)) !=
            io::digest(gen_random(2, 6, 3, true, ConstraintKind::Diameter)));
}

TEST_CASE("edge density follows the absence probability") {
    GenParams all_absent;
    all_absent.absent_prob = 1.0;
    ProblemInstance sparse = gen_random(3, 5, 2, false, ConstraintKind::Diameter, all_absent);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) REQUIRE_FALSE(sparse.graph.finite(i, j));

    GenParams none_absent;
    none_absent.absent_prob = 0.0;
    ProblemInstance dense = gen_random(3, 5, 2, false, ConstraintKind::Diameter, none_absent);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) {
                REQUIRE(dense.graph.finite(i, j));
                REQUIRE(dense.graph.at(i, j) <= none_absent.max_weight);
            }
}

TEST_CASE("generator shape guards") {
    REQUIRE_THROWS_AS(gen_random(0, 3, 4, false, ConstraintKind::Diameter),
                      InvariantViolation);
    REQUIRE_THROWS_AS(gen_random(0, 0, 1, false, ConstraintKind::Diameter),
                      InvariantViolation);
    REQUIRE_THROWS_AS(gen_random(0, 3, 3, true, ConstraintKind::Diameter),
                      InvariantViolation);
    REQUIRE_THROWS_AS(gen_random(0, 4, 2, true, ConstraintKind::MinDegree),
                      InvariantViolation);
}

TEST_CASE("directed instances get a non-terminal root") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ProblemInstance inst = gen_random(seed, 5, 3, true, ConstraintKind::Diameter);
        REQUIRE(inst.root.has_value());
        REQUIRE_FALSE(inst.is_terminal(*inst.root));
        REQUIRE_NOTHROW(inst.validate());
    }
}

TEST_CASE("size bounds clamp up to the terminal count") {
    GenParams tiny;
    tiny.value_min = 1;
    tiny.value_max = 1;
    ProblemInstance inst = gen_random(9, 6, 4, false, ConstraintKind::Size, tiny);
    REQUIRE(inst.constraint.value == 4);
}

TEST_CASE("degree-floored trees come out well-formed") {
    REQUIRE_THROWS_AS(gen_min_degree_tree(0, 8, 2), InvariantViolation);
    REQUIRE_THROWS_AS(gen_min_degree_tree(0, 3, 3), InvariantViolation);

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int delta = 3 + static_cast<int>(seed % 4);
        const int n = delta + 1 + static_cast<int>(seed % 7);
        SteinerTree t = gen_min_degree_tree(seed, n, delta);
        CAPTURE(seed, n, delta);

        REQUIRE(t.vertices.size() == static_cast<size_t>(n));
        REQUIRE(t.structurally_valid());
        for (int i = 0; i < n; ++i) REQUIRE(t.vertices[i] == i);  // a permutation of 0..n-1

        auto deg = t.degrees();
        int internals = 0;
        for (int d : deg) {
            if (d >= 2) {
                ++internals;
                REQUIRE(d >= delta);
            }
        }
        REQUIRE(internals >= 1);
    }
}

TEST_CASE("witness cases pair an instance with a matching feasible tree") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        WitnessCase wc = gen_scst_witness(seed);
        CAPTURE(seed);
        REQUIRE_NOTHROW(wc.instance.validate());
        REQUIRE(wc.instance.constraint.kind == ConstraintKind::Size);
        REQUIRE(wc.instance.constraint.value == wc.zeta);
        REQUIRE(wc.witness.structurally_valid());
        REQUIRE(check_solution(wc.instance, wc.witness));

        // leaves are exactly the terminals
        auto deg = wc.witness.degrees();
        std::vector<Vertex> leaves;
        for (size_t i = 0; i < wc.witness.vertices.size(); ++i)
            if (deg[i] == 1) leaves.push_back(wc.witness.vertices[i]);
        REQUIRE(leaves == wc.instance.terminals);

        for (auto& e : wc.witness.edges)
            REQUIRE(wc.instance.graph.finite(e.first, e.second));
    }
}

TEST_CASE("planted cases make the witness the unique cheap tree") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        WitnessCase wc = gen_planted_scst(seed);
        CAPTURE(seed);
        const int n = wc.instance.n();
        std::set<std::pair<Vertex, Vertex>> on_tree;
        for (auto& e : wc.witness.edges)
            on_tree.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                REQUIRE(wc.instance.graph.finite(i, j));  // complete graph
                Weight w = wc.instance.graph.at(i, j);
                if (on_tree.count({i, j})) {
                    REQUIRE(w >= 1);
                    REQUIRE(w <= 3);
                } else {
                    REQUIRE(w == 100);
                }
            }
    }
}
