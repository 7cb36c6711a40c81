#pragma once

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <memory>
#include <set>

#include "steiner/core.hpp"
#include "steiner/relax.hpp"

namespace steiner::dp {

inline constexpr int kDefaultTerminalCap = 20;

// How a table cell's value was obtained.
//  BaseStar   - depth-1 star from u onto every terminal of the subset
//  Extend     - edge u->v plus the (d-1)-deep solution rooted at v
//  Split      - two same-depth solutions at u over a subset partition
struct Choice {
    enum class Kind : std::uint8_t { BaseStar, Extend, Split };
    Kind kind = Kind::BaseStar;
    std::uint32_t arg = 0;  // Extend: vertex v; Split: subset mask containing the lowest bit
};

struct FillOptions {
    int terminal_cap = kDefaultTerminalCap;
    // Stop once a depth layer equals the previous one; every later layer
    // would repeat it verbatim, so results are unchanged. Off by default so
    // the table shape follows the requested bound exactly.
    bool stop_at_fixpoint = false;
    // Abort with CapExceeded when the fill loop exceeds this many inner
    // operations (0 = unlimited).
    std::uint64_t op_limit = 0;
};

// Layered table for f(S, u, d): cheapest weight of a tree rooted at u that
// reaches every terminal of S within d edges, on a complete (relaxed) graph.
// Layers allocate lazily and uninitialized: the fill writes every cell of
// every pushed layer (push_layer itself zeroes the empty-subset row, whose
// value 0 and base-star backpointer never change).
class Table {
  public:
    Table(int n, int terminal_count, int d_eff)
        : n_(n), tcount_(terminal_count), d_eff_(d_eff), masks_(size_t(1) << terminal_count) {
        layers_.reserve(static_cast<size_t>(d_eff_));
    }

    int n() const { return n_; }
    int terminal_count() const { return tcount_; }
    int d_eff() const { return d_eff_; }
    size_t mask_count() const { return masks_; }
    int layers_stored() const { return static_cast<int>(layers_.size()); }
    size_t layer_cells() const { return masks_ * n_; }

    Weight value(std::uint32_t mask, Vertex u, int d) const {
        return layers_[layer(d)].val[cell(mask, u)];
    }
    Choice choice(std::uint32_t mask, Vertex u, int d) const {
        return layers_[layer(d)].back[cell(mask, u)];
    }

    Weight* push_layer() {
        Layer& l = layers_.emplace_back();
        l.val = std::make_unique_for_overwrite<Weight[]>(layer_cells());
        l.back = std::make_unique_for_overwrite<Choice[]>(layer_cells());
        for (int u = 0; u < n_; ++u) {
            l.val[u] = 0;
            l.back[u] = Choice{Choice::Kind::BaseStar, 0};
        }
        return l.val.get();
    }
    Choice* back_layer() { return layers_.back().back.get(); }
    const Weight* raw_layer(int d) const { return layers_[layer(d)].val.get(); }

  private:
    struct Layer {
        std::unique_ptr<Weight[]> val;
        std::unique_ptr<Choice[]> back;
    };

    size_t layer(int d) const {
        if (d < 1) throw InvariantViolation("depth must be >= 1");
        int clamped = std::min(d, layers_stored());
        return static_cast<size_t>(clamped - 1);
    }
    size_t cell(std::uint32_t mask, Vertex u) const { return static_cast<size_t>(mask) * n_ + u; }

    int n_, tcount_, d_eff_;
    size_t masks_;
    std::vector<Layer> layers_;
};

namespace detail {

inline std::uint32_t terminal_mask_without(const std::vector<int>& bit_of, std::uint32_t mask, Vertex u) {
    int b = bit_of[u];
    return b < 0 ? mask : (mask & ~(std::uint32_t(1) << b));
}

template <bool Sat, typename T>
inline T add2(T a, T b) {
    if constexpr (Sat) return add_sat(a, b);
    return static_cast<T>(a + b);
}

// Layers d >= 2. The extend minimum is evaluated lexicographically over
// (value, v), so the smallest attaining v is kept; candidates are visited in
// ascending edge-weight order per source vertex, which allows an exact
// cutoff: once w(u,v) plus the smallest entry of the predecessor row exceeds
// the best found, every remaining candidate is strictly worse. The first few
// candidates of every vertex are evaluated for all masks at once over a
// transposed copy of the previous layer (mask-contiguous inner loops); cells
// whose cutoff is not yet reached continue the sorted scan individually. A
// vertex inside the mask reads the same batch at its bit-dropped index, so
// both cell kinds share one result. Splits improve the finished extend
// values afterwards; masks run in ascending order, so both halves of every
// partition are already final when read. Ties resolve as in the plain
// per-cell form: extend wins over an equal split, and within each kind the
// smallest v or smallest subset mask is kept.
//
// TV is the staging value type. When the caller proves every candidate sum
// fits in 32 bits, the staging arrays narrow to uint32_t, whose compares the
// compiler vectorizes on baseline targets; the comparisons see the same
// integers either way, so values and tie-breaks are unchanged.
template <bool Sat, typename TV>
inline void fill_deep(Table& table, const std::vector<Weight>& w, const std::vector<int>& bit_of,
                      int d_eff, const FillOptions& opts) {
    const int n = table.n();
    const std::uint32_t masks = static_cast<std::uint32_t>(table.mask_count());
    const size_t cells = table.layer_cells();
    const int batch = std::min(n, 4);
    std::uint64_t ops = 0;

    // Per-vertex candidate order: v sorted by (w(u,v), v). Sorted weights are
    // kept alongside so scans read them contiguously.
    std::vector<std::uint32_t> order(static_cast<size_t>(n) * n);
    std::vector<TV> sorted_w(static_cast<size_t>(n) * n);
    for (Vertex u = 0; u < n; ++u) {
        std::uint32_t* ord = &order[static_cast<size_t>(u) * n];
        const Weight* wu = &w[static_cast<size_t>(u) * n];
        for (Vertex v = 0; v < n; ++v) ord[v] = static_cast<std::uint32_t>(v);
        std::sort(ord, ord + n, [&](std::uint32_t a, std::uint32_t b) {
            return wu[a] != wu[b] ? wu[a] < wu[b] : a < b;
        });
        for (int k = 0; k < n; ++k)
            sorted_w[static_cast<size_t>(u) * n + k] = static_cast<TV>(wu[ord[k]]);
    }

    std::vector<TV> prev_t(cells);                  // [v][mask]
    std::vector<TV> row_min(masks);
    std::vector<TV> ext_val(cells);                 // [u][mask]
    std::vector<std::uint32_t> ext_arg(cells);      // [u][mask]

    for (int d = 2; d <= d_eff; ++d) {
        Weight* val = table.push_layer();
        Choice* back = table.back_layer();
        const Weight* prev = table.raw_layer(d - 1);

        // Transpose the previous layer to mask-contiguous rows per vertex and
        // record each predecessor row's minimum (the scan cutoff's floor).
        for (std::uint32_t mask = 0; mask < masks; ++mask) {
            const Weight* prow = prev + static_cast<size_t>(mask) * n;
            TV m = static_cast<TV>(prow[0]);
            for (Vertex v = 0; v < n; ++v) {
                TV x = static_cast<TV>(prow[v]);
                prev_t[static_cast<size_t>(v) * masks + mask] = x;
                m = std::min(m, x);
            }
            row_min[mask] = m;
        }
        ops += static_cast<std::uint64_t>(masks) * n;

        // Batched pass: for every u, evaluate its `batch` cheapest edges
        // against every predecessor row at once, tracking (value, v)
        // lexicographically so the smallest attaining v survives.
        for (Vertex u = 0; u < n; ++u) {
            TV* bu = &ext_val[static_cast<size_t>(u) * masks];
            std::uint32_t* au = &ext_arg[static_cast<size_t>(u) * masks];
            const std::uint32_t* ord = &order[static_cast<size_t>(u) * n];
            const TV* sw = &sorted_w[static_cast<size_t>(u) * n];
            {
                const std::uint32_t v = ord[0];
                const TV wv = sw[0];
                const TV* pt = &prev_t[static_cast<size_t>(v) * masks];
                for (std::uint32_t mask = 0; mask < masks; ++mask) {
                    bu[mask] = add2<Sat>(wv, pt[mask]);
                    au[mask] = v;
                }
            }
            for (int k = 1; k < batch; ++k) {
                const std::uint32_t v = ord[k];
                const TV wv = sw[k];
                const TV* pt = &prev_t[static_cast<size_t>(v) * masks];
                for (std::uint32_t mask = 0; mask < masks; ++mask) {
                    TV cand = add2<Sat>(wv, pt[mask]);
                    if (cand < bu[mask] || (cand == bu[mask] && v < au[mask])) {
                        bu[mask] = cand;
                        au[mask] = v;
                    }
                }
            }
        }
        ops += static_cast<std::uint64_t>(n) * batch * masks;

        // Finish every entry whose cutoff was not reached inside the batch.
        // An entry here is keyed by the predecessor set itself; a terminal's
        // own bit never occurs in the sets it is asked for, so those entries
        // are skipped outright.
        if (batch < n) {
            for (Vertex u = 0; u < n; ++u) {
                TV* bu = &ext_val[static_cast<size_t>(u) * masks];
                std::uint32_t* au = &ext_arg[static_cast<size_t>(u) * masks];
                const std::uint32_t* ord = &order[static_cast<size_t>(u) * n];
                const TV* sw = &sorted_w[static_cast<size_t>(u) * n];
                const std::uint32_t own_bit =
                    bit_of[u] >= 0 ? (std::uint32_t(1) << bit_of[u]) : 0;
                const TV cut = sw[batch];
                for (std::uint32_t m = 0; m < masks; ++m) {
                    if (m & own_bit) continue;
                    TV best = bu[m];
                    if (add2<Sat>(cut, row_min[m]) > best) continue;
                    std::uint32_t best_v = au[m];
                    const Weight* prow = prev + static_cast<size_t>(m) * n;
                    const TV row_floor = row_min[m];
                    int k = batch;
                    for (; k < n; ++k) {
                        if (add2<Sat>(sw[k], row_floor) > best) break;
                        const std::uint32_t v = ord[k];
                        TV cand = add2<Sat>(sw[k], static_cast<TV>(prow[v]));
                        if (cand < best || (cand == best && v < best_v)) {
                            best = cand;
                            best_v = v;
                        }
                    }
                    ops += static_cast<std::uint64_t>(k - batch);
                    bu[m] = best;
                    au[m] = best_v;
                }
            }
        }

        // Scatter the per-vertex results into mask-major rows (a terminal
        // reads its bit-dropped entry), then improve each finished row with
        // same-depth splits; masks ascend, so both halves of every partition
        // are final when read. mask 0 rows stay as push_layer() initialized
        // them: weight 0, base-star backpointer.
        for (std::uint32_t mask = 1; mask < masks; ++mask) {
            Weight* vrow = val + static_cast<size_t>(mask) * n;
            Choice* brow = back + static_cast<size_t>(mask) * n;
            for (Vertex u = 0; u < n; ++u) {
                const std::uint32_t drop = terminal_mask_without(bit_of, mask, u);
                vrow[u] = static_cast<Weight>(ext_val[static_cast<size_t>(u) * masks + drop]);
                brow[u] = Choice{Choice::Kind::Extend, ext_arg[static_cast<size_t>(u) * masks + drop]};
            }

            const std::uint32_t low = mask & (~mask + 1);
            const std::uint32_t rest = mask ^ low;
            if (rest != 0) {
                for (Vertex u = 0; u < n; ++u) {
                    Weight cur = vrow[u];
                    Choice pick = brow[u];
                    // ascending enumeration of submasks of rest; skip
                    // sub == rest so both halves stay non-empty
                    std::uint32_t sub = 0;
                    do {
                        if (sub != rest) {
                            const std::uint32_t s1 = sub | low;
                            Weight cand = add2<Sat>(val[static_cast<size_t>(s1) * n + u],
                                                    val[static_cast<size_t>(mask ^ s1) * n + u]);
                            if (cand < cur) {
                                cur = cand;
                                pick = Choice{Choice::Kind::Split, s1};
                            }
                            ++ops;
                        }
                        sub = (sub - rest) & rest;
                    } while (sub != 0);
                    vrow[u] = cur;
                    brow[u] = pick;
                }
            }
            if (opts.op_limit && ops > opts.op_limit) throw CapExceeded("dp fill op limit");
        }
        if (opts.stop_at_fixpoint && std::memcmp(val, prev, cells * sizeof(Weight)) == 0) break;
    }
}

}  // namespace detail

// Fills f over d = 1..min(D, n). Base layer: f(S, u, 1) = sum of direct
// edges from u into S. Deeper layers take the better of
//   min over v of E(u, v) + f(S \ {u}, v, d-1)
//   min over proper non-empty S' of f(S', u, d) + f(S \ S', u, d)
// with ties resolved Extend before Split, then smallest v / smallest subset
// mask. Split subsets are halved to those containing the lowest bit of S;
// the complement pair gives the same sum, so no minimum is lost.
inline Table fill(const RelaxedInstance& rel, const FillOptions& opts = {}) {
    const ProblemInstance& inst = rel.instance;
    const int n = inst.n();
    const int tc = static_cast<int>(inst.terminals.size());
    if (tc > opts.terminal_cap) throw CapExceeded("terminal count above table cap");
    const std::int64_t bound =
        inst.constraint.kind == ConstraintKind::Diameter ? inst.constraint.value : n;
    const int d_eff = static_cast<int>(std::min<std::int64_t>(bound, n));

    std::vector<int> bit_of(n, -1);
    for (int b = 0; b < tc; ++b) bit_of[inst.terminals[b]] = b;

    // Flat copy of the weight matrix for tight inner loops.
    std::vector<Weight> w(static_cast<size_t>(n) * n);
    Weight maxw = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Weight x = inst.graph.at(i, j);
            w[static_cast<size_t>(i) * n + j] = x;
            maxw = std::max(maxw, x);
        }
    }
    // Every stored value is at most n * maxw (a depth-1 star already bounds
    // the minimum), so candidate sums stay below (2n + 2) * maxw. When that
    // provably fits, the inner adds skip saturation handling; when it even
    // fits a signed 32-bit range, the fill stages values in 32 bits.
    const Weight sum_cap = 2 * static_cast<Weight>(n) + 2;
    const bool plain_adds = maxw <= (kAbsent - 1) / sum_cap;
    const bool narrow_vals =
        maxw <= static_cast<Weight>(std::numeric_limits<std::int32_t>::max()) / sum_cap;

    Table table(n, tc, d_eff);
    const std::uint32_t masks = static_cast<std::uint32_t>(table.mask_count());

    {
        Weight* val = table.push_layer();
        Choice* back = table.back_layer();
        for (Vertex u = 0; u < n; ++u) {
            const Weight* wu = &w[static_cast<size_t>(u) * n];
            for (std::uint32_t mask = 1; mask < masks; ++mask) {
                std::uint32_t low = mask & (~mask + 1);
                int bit = std::countr_zero(low);
                size_t c = static_cast<size_t>(mask) * n + u;
                val[c] = add_sat(val[static_cast<size_t>(mask ^ low) * n + u], wu[inst.terminals[bit]]);
                back[c] = Choice{Choice::Kind::BaseStar, 0};
            }
        }
    }

    if (plain_adds && narrow_vals)
        detail::fill_deep<false, std::uint32_t>(table, w, bit_of, d_eff, opts);
    else if (plain_adds)
        detail::fill_deep<false, Weight>(table, w, bit_of, d_eff, opts);
    else
        detail::fill_deep<true, Weight>(table, w, bit_of, d_eff, opts);
    return table;
}

namespace detail {

inline void collect_edges(const Table& t, const std::vector<int>& bit_of,
                          const std::vector<Vertex>& terminals, std::uint32_t mask, Vertex u, int d,
                          std::set<std::pair<Vertex, Vertex>>& edges) {
    d = std::min(d, t.layers_stored());
    if (mask == 0) return;
    Choice ch = t.choice(mask, u, d);
    switch (ch.kind) {
        case Choice::Kind::BaseStar: {
            for (std::uint32_t m = mask; m != 0; m &= m - 1) {
                Vertex v = terminals[std::countr_zero(m)];
                if (v != u) edges.insert({u, v});
            }
            return;
        }
        case Choice::Kind::Extend: {
            Vertex v = static_cast<Vertex>(ch.arg);
            if (v != u) edges.insert({u, v});
            collect_edges(t, bit_of, terminals, terminal_mask_without(bit_of, mask, u), v, d - 1, edges);
            return;
        }
        case Choice::Kind::Split: {
            collect_edges(t, bit_of, terminals, ch.arg, u, d, edges);
            collect_edges(t, bit_of, terminals, mask ^ ch.arg, u, d, edges);
            return;
        }
    }
}

}  // namespace detail

// Walks the backpointers from (S, u, d) and prunes the collected edge union
// into a tree: every vertex keeps one incoming edge from a breadth-first
// shortest predecessor, so whenever two paths reach a vertex the longer
// one's final edge is dropped and no terminal gets deeper.
inline SteinerTree reconstruct(const Table& t, const ProblemInstance& inst, std::uint32_t mask,
                               Vertex u, int d) {
    std::vector<int> bit_of(inst.n(), -1);
    for (size_t b = 0; b < inst.terminals.size(); ++b) bit_of[inst.terminals[b]] = static_cast<int>(b);

    std::set<std::pair<Vertex, Vertex>> union_edges;
    detail::collect_edges(t, bit_of, inst.terminals, mask, u, d, union_edges);

    std::vector<std::vector<Vertex>> out(inst.n());
    for (auto& e : union_edges) out[e.first].push_back(e.second);

    SteinerTree tree;
    tree.root = u;
    tree.vertices.push_back(u);
    std::vector<char> seen(inst.n(), 0);
    seen[u] = 1;
    std::queue<Vertex> q;
    q.push(u);
    while (!q.empty()) {
        Vertex a = q.front();
        q.pop();
        for (Vertex b : out[a]) {
            if (seen[b]) continue;
            seen[b] = 1;
            tree.vertices.push_back(b);
            tree.edges.push_back({a, b});
            q.push(b);
        }
    }
    tree.normalize();
    return tree;
}

// Full-subset scan of both recurrence inequalities over every stored cell.
// Returns the number of violated cells (0 on a healthy table).
inline std::uint64_t recurrence_violations(const Table& t, const RelaxedInstance& rel) {
    const ProblemInstance& inst = rel.instance;
    const int n = inst.n();
    std::vector<int> bit_of(n, -1);
    for (size_t b = 0; b < inst.terminals.size(); ++b) bit_of[inst.terminals[b]] = static_cast<int>(b);
    std::uint64_t bad = 0;
    const std::uint32_t masks = static_cast<std::uint32_t>(t.mask_count());
    for (int d = 2; d <= t.layers_stored(); ++d) {
        for (std::uint32_t mask = 1; mask < masks; ++mask) {
            for (Vertex u = 0; u < n; ++u) {
                Weight f = t.value(mask, u, d);
                std::uint32_t drop = detail::terminal_mask_without(bit_of, mask, u);
                bool ok = true;
                for (Vertex v = 0; v < n && ok; ++v)
                    if (f > add_sat(inst.graph.at(u, v), t.value(drop, v, d - 1))) ok = false;
                for (std::uint32_t s1 = (mask - 1) & mask; s1 != 0 && ok; s1 = (s1 - 1) & mask)
                    if (f > add_sat(t.value(s1, u, d), t.value(mask ^ s1, u, d))) ok = false;
                if (!ok) ++bad;
            }
        }
    }
    return bad;
}

// Depth- and subset-monotonicity scan; returns violated cell count.
inline std::uint64_t monotonicity_violations(const Table& t) {
    std::uint64_t bad = 0;
    const std::uint32_t masks = static_cast<std::uint32_t>(t.mask_count());
    for (int d = 1; d <= t.layers_stored(); ++d) {
        for (std::uint32_t mask = 1; mask < masks; ++mask) {
            for (Vertex u = 0; u < t.n(); ++u) {
                Weight f = t.value(mask, u, d);
                if (d >= 2 && f > t.value(mask, u, d - 1)) ++bad;
                for (std::uint32_t m = mask; m != 0; m &= m - 1) {
                    std::uint32_t sub = mask ^ (m & (~m + 1));
                    if (t.value(sub, u, d) > f) {
                        ++bad;
                        break;
                    }
                }
            }
        }
    }
    return bad;
}

// Depth-bounded directed Steiner tree: relax, fill, read f(T, root, d_eff),
// threshold against big_m and reconstruct on success. The reconstructed
// tree is re-verified against the original instance.
inline SolveOutcome solve_ddcst(const ProblemInstance& inst, const FillOptions& opts = {}) {
    inst.validate();
    if (!inst.directed) throw InvariantViolation("solve_ddcst needs a directed instance");
    if (inst.constraint.kind != ConstraintKind::Diameter)
        throw InvariantViolation("solve_ddcst needs a diameter constraint");

    RelaxedInstance rel = relax(inst);
    Table table = fill(rel, opts);
    const std::uint32_t full = static_cast<std::uint32_t>(table.mask_count()) - 1;
    Weight x = table.value(full, *inst.root, table.d_eff());
    SolveOutcome out = interpret(x, rel.big_m);
    if (!out.is_optimal()) return out;

    SteinerTree tree = reconstruct(table, rel.instance, full, *inst.root, table.d_eff());
    for (auto& e : tree.edges)
        if (rel.instance.graph.at(e.first, e.second) >= rel.big_m)
            throw InternalInconsistency("optimal tree uses a placeholder edge below big_m");
    Weight check = tree_weight(tree, inst.graph);
    if (check != x) throw InternalInconsistency("reconstructed weight differs from table value");
    if (!check_solution(inst, tree)) throw InternalInconsistency("reconstructed tree fails feasibility");
    out.tree = std::move(tree);
    return out;
}

}  // namespace steiner::dp
