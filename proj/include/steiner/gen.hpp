#pragma once

#include <random>

#include "steiner/core.hpp"

namespace steiner::gen {

// Thin deterministic wrapper: all draws go through the raw mt19937_64 stream
// so generated instances are reproducible from the seed alone.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    std::uint64_t below(std::uint64_t m) { return m == 0 ? 0 : eng_() % m; }

    bool chance(double p) {
        if (p <= 0) return false;
        if (p >= 1) return true;
        return below(1'000'000'000ull) < static_cast<std::uint64_t>(std::llround(p * 1e9));
    }

  private:
    std::mt19937_64 eng_;
};

struct GenParams {
    double absent_prob = 0.2;
    Weight max_weight = 9;
    std::int64_t value_min = 1;
    std::int64_t value_max = 5;
};

// Seed-deterministic random instance. Size constraints are clamped up to
// |T| so the instance always validates.
inline ProblemInstance gen_random(std::uint64_t seed, int n, int t_count, bool directed,
                                  ConstraintKind kind, const GenParams& params = {}) {
    if (n < 1 || t_count < 1 || t_count > n) throw InvariantViolation("bad generator shape");
    if (directed && t_count >= n) throw InvariantViolation("directed instances need a non-terminal root");
    if (directed && kind != ConstraintKind::Diameter)
        throw InvariantViolation("degree and size constraints are undirected");

    Rng rng(seed);
    ProblemInstance inst;
    inst.directed = directed;
    inst.graph = WeightMatrix(n, !directed);
    for (int i = 0; i < n; ++i)
        for (int j = directed ? 0 : i + 1; j < n; ++j) {
            if (i == j) continue;
            if (rng.chance(params.absent_prob)) continue;
            inst.graph.set(i, j, rng.below(params.max_weight + 1));
        }

    std::vector<Vertex> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    for (int k = 0; k < t_count; ++k)
        std::swap(ids[k], ids[k + rng.below(n - k)]);
    inst.terminals.assign(ids.begin(), ids.begin() + t_count);
    std::sort(inst.terminals.begin(), inst.terminals.end());
    if (directed) inst.root = ids[t_count + rng.below(n - t_count)];

    std::int64_t lo = params.value_min, hi = std::max(params.value_max, lo);
    std::int64_t value = lo + static_cast<std::int64_t>(rng.below(hi - lo + 1));
    if (kind == ConstraintKind::Size) value = std::max<std::int64_t>(value, t_count);
    inst.constraint = {kind, value};
    inst.validate();
    return inst;
}

// Random tree on n vertices in which every internal (degree >= 2) vertex in
// fact has degree >= delta: a random tree on a feasible number of internal
// vertices, each padded with enough leaves, remaining leaves sprinkled.
inline SteinerTree gen_min_degree_tree(std::uint64_t seed, int n, int delta) {
    if (delta < 3) throw InvariantViolation("min internal degree below 3 is unconstrained");
    if (n < delta + 1) throw InvariantViolation("tree too small for the degree floor");
    Rng rng(seed);

    const int p_max = (n - 2) / (delta - 1);
    int p = 1 + static_cast<int>(rng.below(p_max));
    std::vector<int> parent, need;
    for (;; --p) {
        parent.assign(p, -1);
        std::vector<int> deg(p, 0);
        for (int i = 1; i < p; ++i) {
            parent[i] = static_cast<int>(rng.below(i));
            ++deg[i];
            ++deg[parent[i]];
        }
        int required = 0;
        need.assign(p, 0);
        for (int i = 0; i < p; ++i) {
            need[i] = std::max(0, delta - deg[i]);
            required += need[i];
        }
        if (n - p >= required) {
            for (int extra = n - p - required; extra > 0; --extra) ++need[rng.below(p)];
            break;
        }
    }

    std::vector<Vertex> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = 0; i < n - 1; ++i)
        std::swap(perm[i], perm[i + rng.below(n - i)]);

    SteinerTree tree;
    tree.vertices = perm;
    for (int i = 1; i < p; ++i) tree.edges.push_back({perm[i], perm[parent[i]]});
    int next_leaf = p;
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < need[i]; ++k) tree.edges.push_back({perm[i], perm[next_leaf++]});
    tree.normalize();
    return tree;
}

struct WitnessCase {
    ProblemInstance instance;
    SteinerTree witness;
    std::int64_t zeta = 0;
};

namespace detail {

inline WitnessCase build_witness(Rng& rng, bool planted) {
    const int k = 4 + static_cast<int>(rng.below(4));  // witness tree size 4..7
    SteinerTree shape = gen_min_degree_tree(rng.next(), k, 3);

    const int extra = static_cast<int>(rng.below(planted ? 2 : 3));
    const int n = k + extra;
    std::vector<Vertex> map(n);
    for (int i = 0; i < n; ++i) map[i] = i;
    for (int i = 0; i < n - 1; ++i)
        std::swap(map[i], map[i + rng.below(n - i)]);

    SteinerTree witness;
    for (Vertex v : shape.vertices) witness.vertices.push_back(map[v]);
    for (auto& e : shape.edges) witness.edges.push_back({map[e.first], map[e.second]});
    witness.normalize();

    ProblemInstance inst;
    inst.directed = false;
    inst.graph = WeightMatrix(n, true);
    std::set<std::pair<Vertex, Vertex>> tree_edges;
    for (auto& e : witness.edges) tree_edges.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (tree_edges.count({i, j})) {
                inst.graph.set(i, j, planted ? 1 + rng.below(3) : rng.below(10));
            } else if (planted) {
                inst.graph.set(i, j, 100);
            } else if (!rng.chance(0.35)) {
                inst.graph.set(i, j, rng.below(10));
            }
        }

    std::vector<int> deg = witness.degrees();
    for (size_t i = 0; i < witness.vertices.size(); ++i)
        if (deg[i] == 1) inst.terminals.push_back(witness.vertices[i]);
    std::sort(inst.terminals.begin(), inst.terminals.end());

    std::int64_t zeta = k + static_cast<std::int64_t>(rng.below(planted ? 2 : 3));
    inst.constraint = {ConstraintKind::Size, zeta};
    inst.validate();
    return {std::move(inst), std::move(witness), zeta};
}

}  // namespace detail

// A random size-constrained instance together with a feasible tree whose
// leaves are exactly the terminal set (the shape the degree reduction's
// witness maps require).
inline WitnessCase gen_scst_witness(std::uint64_t seed) {
    Rng rng(seed);
    return detail::build_witness(rng, false);
}

// As above, but every edge off the witness tree is heavy (weight 100) and
// all edges are present, so the witness is the unique optimum of its
// instance and stays reachable through the degree reduction.
inline WitnessCase gen_planted_scst(std::uint64_t seed) {
    Rng rng(seed);
    return detail::build_witness(rng, true);
}

}  // namespace steiner::gen
