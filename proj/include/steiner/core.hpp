#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "steiner/errors.hpp"

namespace steiner {

using Vertex = int;
using Weight = std::uint64_t;

// Sentinel for a missing edge. Finite weights are strictly below it.
inline constexpr Weight kAbsent = std::numeric_limits<Weight>::max();

// Saturating addition keeps arithmetic on relaxed instances overflow-safe:
// any sum that would wrap sticks at the top value, which always compares
// as "worse than every finite candidate".
inline Weight add_sat(Weight a, Weight b) {
    return (a > kAbsent - b) ? kAbsent : a + b;
}

inline Weight mul_checked(Weight a, Weight b, const char* what) {
    if (a != 0 && b > kAbsent / a) throw OverflowError(what);
    return a * b;
}

// Dense square weight matrix over vertices 0..n-1. Diagonal is always 0,
// missing edges are kAbsent. A symmetric matrix mirrors every write.
class WeightMatrix {
  public:
    WeightMatrix() : WeightMatrix(0, true) {}
    WeightMatrix(int n, bool symmetric) : n_(n), symmetric_(symmetric), w_(static_cast<size_t>(n) * n, kAbsent) {
        for (int i = 0; i < n; ++i) w_[idx(i, i)] = 0;
    }

    int size() const { return n_; }
    bool symmetric() const { return symmetric_; }

    Weight at(Vertex i, Vertex j) const {
        check_range(i, j);
        return w_[idx(i, j)];
    }
    bool finite(Vertex i, Vertex j) const { return at(i, j) != kAbsent; }

    void set(Vertex i, Vertex j, Weight w) {
        check_range(i, j);
        if (i == j && w != 0) throw InvariantViolation("diagonal weights must be 0");
        w_[idx(i, j)] = w;
        if (symmetric_) w_[idx(j, i)] = w;
    }
    void set_absent(Vertex i, Vertex j) {
        check_range(i, j);
        if (i == j) throw InvariantViolation("diagonal weights must be 0");
        w_[idx(i, j)] = kAbsent;
        if (symmetric_) w_[idx(j, i)] = kAbsent;
    }

    void validate() const {
        for (int i = 0; i < n_; ++i) {
            if (w_[idx(i, i)] != 0) throw InvariantViolation("diagonal weights must be 0");
        }
        if (symmetric_) {
            for (int i = 0; i < n_; ++i)
                for (int j = i + 1; j < n_; ++j)
                    if (w_[idx(i, j)] != w_[idx(j, i)])
                        throw InvariantViolation("symmetric matrix has asymmetric entries");
        }
    }

    bool operator==(const WeightMatrix& o) const = default;

  private:
    size_t idx(Vertex i, Vertex j) const { return static_cast<size_t>(i) * n_ + j; }
    void check_range(Vertex i, Vertex j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_) throw InvariantViolation("vertex out of range");
    }

    int n_;
    bool symmetric_;
    std::vector<Weight> w_;
};

enum class ConstraintKind { Diameter, MinDegree, Size };

inline const char* to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::Diameter: return "diameter";
        case ConstraintKind::MinDegree: return "min_degree";
        case ConstraintKind::Size: return "size";
    }
    return "?";
}

struct Constraint {
    ConstraintKind kind = ConstraintKind::Diameter;
    std::int64_t value = 1;

    bool operator==(const Constraint&) const = default;
};

// A constrained Steiner tree problem over a dense vertex set.
//  - undirected: symmetric weights, no root, Diameter counts edges between leaves
//  - directed: rooted, Diameter bounds root-to-leaf depth
struct ProblemInstance {
    WeightMatrix graph;
    bool directed = false;
    std::vector<Vertex> terminals;  // sorted, unique, non-empty
    std::optional<Vertex> root;     // present iff directed
    Constraint constraint;

    int n() const { return graph.size(); }

    void validate() const {
        graph.validate();
        if (!directed && !graph.symmetric()) throw InvariantViolation("undirected instance needs a symmetric matrix");
        if (terminals.empty()) throw InvariantViolation("terminal set is empty");
        if (!std::is_sorted(terminals.begin(), terminals.end())) throw InvariantViolation("terminals not sorted");
        if (std::adjacent_find(terminals.begin(), terminals.end()) != terminals.end())
            throw InvariantViolation("duplicate terminal");
        for (Vertex t : terminals)
            if (t < 0 || t >= n()) throw InvariantViolation("terminal out of range");
        if (directed != root.has_value()) throw InvariantViolation("root present iff directed");
        if (root) {
            if (*root < 0 || *root >= n()) throw InvariantViolation("root out of range");
            if (std::binary_search(terminals.begin(), terminals.end(), *root))
                throw InvariantViolation("root must not be a terminal");
        }
        if (constraint.value < 1) throw InvariantViolation("constraint value must be positive");
        if (constraint.kind == ConstraintKind::Size &&
            constraint.value < static_cast<std::int64_t>(terminals.size()))
            throw InvariantViolation("size bound below terminal count");
        if (constraint.kind != ConstraintKind::Diameter && directed)
            throw InvariantViolation("degree/size constraints are undirected problems");
    }

    bool is_terminal(Vertex v) const {
        return std::binary_search(terminals.begin(), terminals.end(), v);
    }
};

// A tree over a subset of the instance's vertices. Rooted trees store edges
// as (parent, child); unrooted trees store normalized (min, max) pairs.
struct SteinerTree {
    std::vector<Vertex> vertices;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::optional<Vertex> root;

    void normalize() {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        if (!root) {
            for (auto& e : edges)
                if (e.first > e.second) std::swap(e.first, e.second);
        }
        std::sort(edges.begin(), edges.end());
    }

    bool contains_vertex(Vertex v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }

    // Degree in the underlying undirected tree.
    std::vector<int> degrees() const {
        std::vector<int> deg;
        if (vertices.empty()) return deg;
        deg.assign(vertices.size(), 0);
        for (auto& e : edges) {
            deg[index_of(e.first)]++;
            deg[index_of(e.second)]++;
        }
        return deg;
    }

    size_t index_of(Vertex v) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v) throw InvariantViolation("edge endpoint not a tree vertex");
        return static_cast<size_t>(it - vertices.begin());
    }

    // |E| = |V|-1, connected, endpoints in the vertex list, and for rooted
    // trees every non-root vertex has exactly one parent.
    bool structurally_valid() const {
        if (vertices.empty()) return false;
        if (edges.size() + 1 != vertices.size()) return false;
        std::vector<std::vector<int>> adj(vertices.size());
        std::vector<int> indeg(vertices.size(), 0);
        for (auto& e : edges) {
            if (e.first == e.second) return false;
            size_t a, b;
            try {
                a = index_of(e.first);
                b = index_of(e.second);
            } catch (const InvariantViolation&) {
                return false;
            }
            adj[a].push_back(static_cast<int>(b));
            adj[b].push_back(static_cast<int>(a));
            indeg[b]++;
        }
        if (root) {
            if (!contains_vertex(*root)) return false;
            for (size_t i = 0; i < vertices.size(); ++i) {
                int expect = (vertices[i] == *root) ? 0 : 1;
                if (indeg[i] != expect) return false;
            }
        }
        // connectivity
        std::vector<char> seen(vertices.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        size_t reached = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    q.push(v);
                }
        }
        return reached == vertices.size();
    }

    bool operator==(const SteinerTree&) const = default;
};

inline Weight tree_weight(const SteinerTree& tree, const WeightMatrix& g) {
    Weight total = 0;
    for (auto& e : tree.edges) {
        Weight w = g.at(e.first, e.second);
        if (w == kAbsent) {
            std::ostringstream os;
            os << "(" << e.first << "," << e.second << ")";
            throw AbsentEdgeError(os.str());
        }
        total = add_sat(total, w);
    }
    return total;
}

namespace detail {

inline std::vector<std::vector<int>> undirected_adjacency(const SteinerTree& tree) {
    std::vector<std::vector<int>> adj(tree.vertices.size());
    for (auto& e : tree.edges) {
        int a = static_cast<int>(tree.index_of(e.first));
        int b = static_cast<int>(tree.index_of(e.second));
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

inline std::pair<int, int> bfs_farthest(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    q.push(start);
    dist[start] = 0;
    int far = start;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (dist[u] > dist[far]) far = u;
        for (int v : adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return {far, dist[far]};
}

}  // namespace detail

// Maximum number of edges on a path between two leaves; 0 for one vertex.
inline int undirected_diameter(const SteinerTree& tree) {
    if (tree.vertices.size() <= 1) return 0;
    auto adj = detail::undirected_adjacency(tree);
    auto [far, d0] = detail::bfs_farthest(adj, 0);
    auto [far2, d] = detail::bfs_farthest(adj, far);
    (void)far2;
    (void)d0;
    return d;
}

// Maximum number of edges from the root to any leaf.
inline int rooted_depth(const SteinerTree& tree) {
    if (!tree.root) throw NotRootedError("rooted_depth needs a rooted tree");
    auto adj = detail::undirected_adjacency(tree);
    auto [far, d] = detail::bfs_farthest(adj, static_cast<int>(tree.index_of(*tree.root)));
    (void)far;
    return d;
}

struct CheckReport {
    bool ok = true;
    std::vector<std::string> reasons;

    void fail(std::string reason) {
        ok = false;
        reasons.push_back(std::move(reason));
    }
    explicit operator bool() const { return ok; }
};

// Ground-truth feasibility check: structure, membership, edge existence,
// rootedness and the instance's constraint. False covers all violations;
// the report carries reason codes for diagnostics.
inline CheckReport check_solution_detailed(const ProblemInstance& inst, const SteinerTree& tree) {
    CheckReport rep;
    for (Vertex v : tree.vertices)
        if (v < 0 || v >= inst.n()) {
            rep.fail("unknown_vertex");
            break;
        }
    if (!rep.ok) return rep;
    if (!tree.structurally_valid()) {
        rep.fail("not_a_tree");
        return rep;
    }
    if (inst.directed) {
        if (!tree.root || *tree.root != *inst.root) rep.fail("root_mismatch");
    } else if (tree.root) {
        rep.fail("root_mismatch");
    }
    for (Vertex t : inst.terminals)
        if (!tree.contains_vertex(t)) {
            rep.fail("missing_terminal");
            break;
        }
    for (auto& e : tree.edges)
        if (!inst.graph.finite(e.first, e.second)) {
            rep.fail("edge_absent");
            break;
        }
    if (!rep.ok) return rep;

    switch (inst.constraint.kind) {
        case ConstraintKind::Diameter: {
            if (inst.directed) {
                if (rooted_depth(tree) > inst.constraint.value) rep.fail("depth_exceeded");
            } else {
                if (undirected_diameter(tree) > inst.constraint.value) rep.fail("diameter_exceeded");
            }
            break;
        }
        case ConstraintKind::MinDegree: {
            auto deg = tree.degrees();
            for (int d : deg)
                if (d >= 2 && d < inst.constraint.value) {
                    rep.fail("min_degree_violated");
                    break;
                }
            break;
        }
        case ConstraintKind::Size: {
            if (static_cast<std::int64_t>(tree.vertices.size()) > inst.constraint.value)
                rep.fail("size_exceeded");
            break;
        }
    }
    return rep;
}

inline bool check_solution(const ProblemInstance& inst, const SteinerTree& tree) {
    return check_solution_detailed(inst, tree).ok;
}

struct SolveOutcome {
    enum class Status { Optimal, Fail };

    Status status = Status::Fail;
    Weight weight = 0;
    std::optional<SteinerTree> tree;
    // Set when the produced tree fails check_solution on the original
    // instance; value and violating tree are still reported.
    bool discrepancy = false;
    std::string discrepancy_note;

    static SolveOutcome fail() { return SolveOutcome{}; }
    static SolveOutcome optimal(Weight w, std::optional<SteinerTree> t = std::nullopt) {
        SolveOutcome o;
        o.status = Status::Optimal;
        o.weight = w;
        o.tree = std::move(t);
        return o;
    }

    bool is_optimal() const { return status == Status::Optimal; }
};

}  // namespace steiner
