#pragma once

#include <chrono>
#include <functional>

#include "steiner/core.hpp"
#include "steiner/reduce.hpp"

namespace steiner::oracle {

struct EnumerationBudget {
    int max_vertices = 8;
    std::uint64_t max_trees = 5'000'000;
    double time_cap_seconds = 30.0;
};

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

struct EnumState {
    const ProblemInstance& inst;
    const EnumerationBudget& budget;
    const std::function<bool(const SteinerTree&)>& visit;
    std::chrono::steady_clock::time_point start;
    std::uint64_t yielded = 0;
    bool stopped = false;

    void count_one() {
        if (++yielded > budget.max_trees) throw BudgetExceeded("tree count cap");
        if ((yielded & 1023) == 0) {
            auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
            if (elapsed.count() > budget.time_cap_seconds) throw BudgetExceeded("time cap");
        }
    }
};

// Orient a spanning tree away from the root; fails when a needed directed
// entry is missing.
inline bool orient_from_root(const ProblemInstance& inst, const std::vector<Vertex>& verts,
                             const std::vector<std::pair<Vertex, Vertex>>& chosen, Vertex root,
                             SteinerTree& out) {
    std::vector<std::vector<Vertex>> nbr(inst.n());
    for (auto& e : chosen) {
        nbr[e.first].push_back(e.second);
        nbr[e.second].push_back(e.first);
    }
    out.vertices = verts;
    out.edges.clear();
    out.root = root;
    std::vector<char> seen(inst.n(), 0);
    seen[root] = 1;
    std::queue<Vertex> q;
    q.push(root);
    while (!q.empty()) {
        Vertex a = q.front();
        q.pop();
        for (Vertex b : nbr[a]) {
            if (seen[b]) continue;
            if (!inst.graph.finite(a, b)) return false;
            seen[b] = 1;
            out.edges.push_back({a, b});
            q.push(b);
        }
    }
    out.normalize();
    return true;
}

inline void spanning_trees(EnumState& st, const std::vector<Vertex>& verts,
                           const std::vector<std::pair<Vertex, Vertex>>& all_edges, size_t next,
                           std::vector<std::pair<Vertex, Vertex>>& chosen, const Dsu& dsu) {
    if (st.stopped) return;
    const size_t need = verts.size() - 1;
    if (chosen.size() == need) {
        st.count_one();
        SteinerTree tree;
        if (st.inst.directed) {
            if (!orient_from_root(st.inst, verts, chosen, *st.inst.root, tree)) return;
        } else {
            tree.vertices = verts;
            tree.edges = chosen;
            tree.root = std::nullopt;
            tree.normalize();
        }
        if (!st.visit(tree)) st.stopped = true;
        return;
    }
    if (next >= all_edges.size()) return;
    if (all_edges.size() - next < need - chosen.size()) return;

    // connectivity pruning: the chosen forest plus all remaining edges must
    // still be able to connect the vertex set
    {
        Dsu probe = dsu;
        int components = static_cast<int>(verts.size()) - static_cast<int>(chosen.size());
        for (size_t k = next; k < all_edges.size() && components > 1; ++k)
            if (probe.unite(all_edges[k].first, all_edges[k].second)) --components;
        if (components > 1) return;
    }

    auto [a, b] = all_edges[next];
    Dsu with = dsu;
    if (with.unite(a, b)) {
        chosen.push_back(all_edges[next]);
        spanning_trees(st, verts, all_edges, next + 1, chosen, with);
        chosen.pop_back();
    }
    spanning_trees(st, verts, all_edges, next + 1, chosen, dsu);
}

}  // namespace detail

// Visits every subtree of the finite-edge graph whose vertex set contains
// all terminals (and the root, when directed); directed trees are oriented
// away from the root. The visitor returns false to stop early. Throws
// BudgetExceeded when a cap is hit.
inline void enumerate_candidate_trees(const ProblemInstance& inst, const EnumerationBudget& budget,
                                      const std::function<bool(const SteinerTree&)>& visit) {
    inst.validate();
    const int n = inst.n();
    if (n > budget.max_vertices) throw BudgetExceeded("vertex cap");

    std::vector<Vertex> required = inst.terminals;
    if (inst.root) required.push_back(*inst.root);
    std::sort(required.begin(), required.end());
    std::vector<Vertex> optional_v;
    for (Vertex v = 0; v < n; ++v)
        if (!std::binary_search(required.begin(), required.end(), v)) optional_v.push_back(v);

    detail::EnumState st{inst, budget, visit, std::chrono::steady_clock::now()};

    for (std::uint32_t pick = 0; pick < (1u << optional_v.size()); ++pick) {
        std::vector<Vertex> verts = required;
        for (size_t i = 0; i < optional_v.size(); ++i)
            if (pick & (1u << i)) verts.push_back(optional_v[i]);
        std::sort(verts.begin(), verts.end());

        if (verts.size() == 1) {
            st.count_one();
            SteinerTree tree;
            tree.vertices = verts;
            tree.root = inst.root;
            if (!st.visit(tree)) st.stopped = true;
            if (st.stopped) return;
            continue;
        }

        std::vector<std::pair<Vertex, Vertex>> edges;
        for (size_t i = 0; i < verts.size(); ++i)
            for (size_t j = i + 1; j < verts.size(); ++j) {
                Vertex a = verts[i], b = verts[j];
                if (inst.graph.finite(a, b) || (inst.directed && inst.graph.finite(b, a)))
                    edges.push_back({a, b});
            }
        std::vector<std::pair<Vertex, Vertex>> chosen;
        detail::spanning_trees(st, verts, edges, 0, chosen, detail::Dsu(n));
        if (st.stopped) return;
    }
}

namespace detail {

inline bool better(Weight w, const SteinerTree& t, Weight best_w, const SteinerTree& best_t) {
    if (w != best_w) return w < best_w;
    return t.edges < best_t.edges;
}

}  // namespace detail

// Reference solver: minimum-weight candidate passing check_solution, with a
// deterministic lexicographic tie-break on the sorted edge list.
inline SolveOutcome brute_solve(const ProblemInstance& inst, const EnumerationBudget& budget = {}) {
    bool found = false;
    Weight best_w = 0;
    SteinerTree best_t;
    enumerate_candidate_trees(inst, budget, [&](const SteinerTree& tree) {
        if (!check_solution(inst, tree)) return true;
        Weight w = tree_weight(tree, inst.graph);
        if (!found || detail::better(w, tree, best_w, best_t)) {
            found = true;
            best_w = w;
            best_t = tree;
        }
        return true;
    });
    if (!found) return SolveOutcome::fail();
    return SolveOutcome::optimal(best_w, best_t);
}

namespace detail {

// Whether all helper terminals can be attached to non-terminal vertices of
// the core tree so that every internal node of the final tree reaches the
// degree bound. Helpers only ever hang off non-terminals by weight-0 edges.
struct HelperPlan {
    bool feasible = false;
    std::vector<std::pair<Vertex, std::int64_t>> load;  // host -> helper count
};

inline HelperPlan plan_helpers(const ProblemInstance& original, const SteinerTree& core,
                               std::int64_t helper_count, std::int64_t bound) {
    HelperPlan plan;
    auto deg = core.degrees();
    std::vector<std::pair<Vertex, std::int64_t>> internal_hosts;  // non-terminal internals: needed top-up
    std::vector<Vertex> leaf_hosts;
    for (size_t i = 0; i < core.vertices.size(); ++i) {
        Vertex v = core.vertices[i];
        if (original.is_terminal(v)) {
            if (deg[i] >= 2 && deg[i] < bound) return plan;  // helpers cannot raise terminal degrees
        } else if (deg[i] >= 2) {
            internal_hosts.push_back({v, std::max<std::int64_t>(0, bound - deg[i])});
        } else {
            leaf_hosts.push_back(v);
        }
    }
    std::int64_t required = 0;
    for (auto& [v, need] : internal_hosts) required += need;
    if (required > helper_count) return plan;
    std::int64_t leftover = helper_count - required;

    plan.load.assign(internal_hosts.begin(), internal_hosts.end());
    if (leftover > 0) {
        if (!internal_hosts.empty()) {
            plan.load.front().second += leftover;
        } else if (!leaf_hosts.empty() && leftover >= bound - 1) {
            // a leaf host becomes internal, so it must reach the bound alone
            plan.load.push_back({leaf_hosts.front(), leftover});
        } else {
            return plan;
        }
    }
    plan.feasible = true;
    return plan;
}

}  // namespace detail

// Oracle for instances produced by scst_to_mcst. Exploits the reduction's
// structure: helper terminals can only be weight-0 leaves on original
// non-terminals, so it enumerates core trees over the original vertices and
// attaches helpers afterwards. Same contract and tie-break as brute_solve.
inline SolveOutcome pruned_mcst_solve(const ProblemInstance& reduced_inst,
                                      const reduce::ScstReduction& red,
                                      const EnumerationBudget& budget = {}) {
    reduced_inst.validate();
    if (reduced_inst.constraint.kind != ConstraintKind::MinDegree)
        throw InvariantViolation("pruned_mcst_solve needs a min-degree instance");
    const int orig_n = red.original_n();
    if (orig_n > budget.max_vertices) throw BudgetExceeded("vertex cap");

    // Core universe: the original vertices with the original terminal set.
    ProblemInstance core_inst;
    core_inst.graph = WeightMatrix(orig_n, true);
    for (int i = 0; i < orig_n; ++i)
        for (int j = i + 1; j < orig_n; ++j) {
            Weight w = reduced_inst.graph.at(i, j);
            if (w != kAbsent) core_inst.graph.set(i, j, w);
        }
    core_inst.directed = false;
    for (Vertex t : reduced_inst.terminals)
        if (t < orig_n) core_inst.terminals.push_back(t);
    core_inst.constraint = {ConstraintKind::MinDegree, reduced_inst.constraint.value};

    const std::int64_t helpers = static_cast<std::int64_t>(red.eta_ids.size());
    const std::int64_t bound = reduced_inst.constraint.value;

    bool found = false;
    Weight best_w = 0;
    SteinerTree best_core;
    detail::HelperPlan best_plan;
    enumerate_candidate_trees(core_inst, budget, [&](const SteinerTree& core) {
        detail::HelperPlan plan = detail::plan_helpers(core_inst, core, helpers, bound);
        if (!plan.feasible) return true;
        Weight w = tree_weight(core, core_inst.graph);
        if (!found || detail::better(w, core, best_w, best_core)) {
            found = true;
            best_w = w;
            best_core = core;
            best_plan = plan;
        }
        return true;
    });
    if (!found) return SolveOutcome::fail();

    SteinerTree full = best_core;
    size_t next = 0;
    for (auto& [host, count] : best_plan.load)
        for (std::int64_t k = 0; k < count; ++k) {
            full.vertices.push_back(red.eta_ids[next]);
            full.edges.push_back({host, red.eta_ids[next]});
            ++next;
        }
    if (next != red.eta_ids.size()) throw InternalInconsistency("helper assignment incomplete");
    full.normalize();
    if (!check_solution(reduced_inst, full))
        throw InternalInconsistency("assembled min-degree tree fails its own check");
    if (tree_weight(full, reduced_inst.graph) != best_w)
        throw InternalInconsistency("helper edges changed the core weight");
    return SolveOutcome::optimal(best_w, full);
}

}  // namespace steiner::oracle
