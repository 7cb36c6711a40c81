#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <map>

#include "steiner/core.hpp"
#include "steiner/reduce.hpp"

namespace steiner::euclid {

inline constexpr double kGeomEps = 1e-9;

struct Point {
    double x = 0, y = 0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

// The two apexes completing segment ab to an equilateral triangle, one per
// side of the line through a and b.
inline std::array<Point, 2> equilateral_third(Point a, Point b) {
    if (dist(a, b) == 0.0) throw DegenerateSegment("equilateral_third needs distinct endpoints");
    const double c60 = 0.5, s60 = std::sqrt(3.0) / 2.0;
    Point v = b - a;
    Point r1{c60 * v.x - s60 * v.y, s60 * v.x + c60 * v.y};
    Point r2{c60 * v.x + s60 * v.y, -s60 * v.x + c60 * v.y};
    return {a + r1, a + r2};
}

struct FermatResult {
    Point point;
    double length = 0;
};

namespace detail {

// Second intersection of the circumcircle of the equilateral triangle (a, b,
// apex) with the segment from the apex toward c, as a parameter t in [0, 1];
// the apex itself sits at t = 0.
inline double apex_segment_parameter(Point a, Point b, Point apex, Point c) {
    Point o = (1.0 / 3.0) * (a + b + apex);
    Point u = c - apex;
    double uu = dot(u, u);
    if (uu == 0.0) return -1.0;
    Point e = apex - o;
    return -2.0 * dot(e, u) / uu;
}

}  // namespace detail

// Point minimizing the summed distance to three sites. An angle of 120 degrees
// or more puts the minimizer on that vertex; otherwise it is the interior
// junction found through the equilateral apex and its circumcircle.
inline FermatResult fermat_point(Point a, Point b, Point c) {
    if (dist(a, b) == 0.0) return {a, dist(a, c)};
    if (dist(a, c) == 0.0) return {a, dist(a, b)};
    if (dist(b, c) == 0.0) return {b, dist(a, b)};

    const Point pts[3] = {a, b, c};
    for (int i = 0; i < 3; ++i) {
        Point v = pts[i], p = pts[(i + 1) % 3], q = pts[(i + 2) % 3];
        if (dot(p - v, q - v) <= -0.5 * dist(p, v) * dist(q, v))
            return {v, dist(v, p) + dist(v, q)};
    }

    auto apexes = equilateral_third(a, b);
    double side_c = cross(b - a, c - a);
    Point apex = (cross(b - a, apexes[0] - a) * side_c < 0) ? apexes[0] : apexes[1];
    double t = detail::apex_segment_parameter(a, b, apex, c);
    if (!(t > 0.0 && t < 1.0)) throw InternalInconsistency("fermat junction left the apex segment");
    Point f = apex + t * (c - apex);
    return {f, dist(f, a) + dist(f, b) + dist(f, c)};
}

// A tree shape on n >= 3 terminals (ids 0..n-1) where every terminal has
// degree 1 and every junction (ids n..2n-3) has degree 3.
struct FullTopology {
    int terminal_count = 0;
    std::vector<std::pair<int, int>> edges;

    int junction_count() const { return terminal_count - 2; }
};

// (2n-4)! / (2^(n-2) (n-2)!), the number of distinct full topologies.
inline std::uint64_t count_full_topologies(int n) {
    if (n < 3) throw InvariantViolation("full topologies need n >= 3");
    std::uint64_t c = 1;
    for (int k = 4; k <= n; ++k) c = mul_checked(c, static_cast<std::uint64_t>(2 * k - 5), "topology count");
    return c;
}

namespace detail {

inline std::vector<std::pair<int, int>> canonical_edges(const FullTopology& t) {
    const int n = t.terminal_count;
    const int s = t.junction_count();
    std::vector<int> perm(s);
    for (int i = 0; i < s; ++i) perm[i] = i;
    std::vector<std::pair<int, int>> best;
    do {
        std::vector<std::pair<int, int>> e = t.edges;
        for (auto& [x, y] : e) {
            if (x >= n) x = n + perm[x - n];
            if (y >= n) y = n + perm[y - n];
            if (x > y) std::swap(x, y);
        }
        std::sort(e.begin(), e.end());
        if (best.empty() || e < best) best = std::move(e);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline void insert_terminals(FullTopology& cur, int next, int n,
                             std::set<std::vector<std::pair<int, int>>>& seen,
                             std::vector<FullTopology>& out) {
    if (next == n) {
        FullTopology t = cur;
        std::sort(t.edges.begin(), t.edges.end());
        if (seen.insert(canonical_edges(t)).second) out.push_back(std::move(t));
        return;
    }
    const int junction = n + (next - 2);
    const size_t m = cur.edges.size();
    for (size_t i = 0; i < m; ++i) {
        auto [x, y] = cur.edges[i];
        cur.edges[i] = {x, junction};
        cur.edges.push_back({y, junction});
        cur.edges.push_back({next, junction});
        insert_terminals(cur, next + 1, n, seen, out);
        cur.edges.pop_back();
        cur.edges.pop_back();
        cur.edges[i] = {x, y};
    }
}

}  // namespace detail

inline constexpr int kMaxEuclidTerminals = 8;

// Every full topology exactly once, grown by subdividing edges with one new
// terminal at a time and deduplicated by canonical junction relabeling.
inline std::vector<FullTopology> enumerate_full_topologies(int n) {
    if (n < 3) throw InvariantViolation("full topologies need n >= 3");
    if (n > kMaxEuclidTerminals) throw CapExceeded("terminal cap for topology enumeration");
    FullTopology base;
    base.terminal_count = n;
    base.edges = {{0, n}, {1, n}, {2, n}};
    std::set<std::vector<std::pair<int, int>>> seen;
    std::vector<FullTopology> out;
    detail::insert_terminals(base, 3, n, seen, out);
    return out;
}

// An embedded tree: the first terminal_count nodes are the input sites, the
// rest are junction points placed by the solver.
struct GeometricTree {
    std::vector<Point> nodes;
    int terminal_count = 0;
    std::vector<std::pair<int, int>> edges;
    double length = 0;

    double recompute_length() const {
        double total = 0;
        for (auto& e : edges) total += dist(nodes[e.first], nodes[e.second]);
        return total;
    }

    // Largest deviation from 120 degrees over all degree-3 junction angles.
    double max_junction_angle_error() const {
        std::vector<std::vector<int>> adj(nodes.size());
        for (auto& e : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        double worst = 0;
        for (size_t v = terminal_count; v < nodes.size(); ++v) {
            if (adj[v].size() != 3) continue;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    Point p = nodes[adj[v][i]] - nodes[v];
                    Point q = nodes[adj[v][j]] - nodes[v];
                    double ang = std::atan2(std::abs(cross(p, q)), dot(p, q));
                    worst = std::max(worst, std::abs(ang - 2.0 * std::acos(-1.0) / 3.0));
                }
        }
        return worst;
    }
};

namespace detail {

struct MelzakProblem {
    std::vector<Point> pos;                  // by node id; junctions filled during unwinding
    std::vector<std::vector<int>> adj;       // remaining topology
    std::vector<char> active;                // terminal-status nodes
    int active_count = 0;
    double scale = 1;
};

struct MelzakSolution {
    std::vector<Point> pos;
    std::vector<std::pair<int, int>> edges;
};

inline std::optional<MelzakSolution> melzak_recurse(const MelzakProblem& prob) {
    if (prob.active_count == 2) {
        int u = -1, v = -1;
        for (size_t i = 0; i < prob.active.size(); ++i)
            if (prob.active[i]) (u < 0 ? u : v) = static_cast<int>(i);
        MelzakSolution sol{prob.pos, {{u, v}}};
        return sol;
    }

    // cherry: lowest junction with at least two active neighbors
    int s = -1, a = -1, b = -1, c = -1;
    for (size_t i = 0; i < prob.active.size() && s < 0; ++i) {
        if (prob.active[i] || prob.adj[i].empty()) continue;
        std::vector<int> act, rest;
        for (int w : prob.adj[i]) (prob.active[w] ? act : rest).push_back(w);
        if (act.size() >= 2) {
            std::sort(act.begin(), act.end());
            s = static_cast<int>(i);
            a = act[0];
            b = act[1];
            c = act.size() == 3 ? act[2] : rest[0];
        }
    }
    if (s < 0) throw InternalInconsistency("no cherry in a full topology");
    if (dist(prob.pos[a], prob.pos[b]) == 0.0) return std::nullopt;

    std::optional<MelzakSolution> best;
    double best_len = 0;
    for (Point apex : equilateral_third(prob.pos[a], prob.pos[b])) {
        MelzakProblem sub = prob;
        sub.pos[s] = apex;
        sub.active[s] = 1;
        sub.active[a] = sub.active[b] = 0;
        sub.active_count -= 1;
        sub.adj[s].clear();
        for (int w : prob.adj[s])
            if (w != a && w != b) sub.adj[s].push_back(w);
        sub.adj[a].clear();
        sub.adj[b].clear();

        auto rec = melzak_recurse(sub);
        if (!rec) continue;
        Point cpos = rec->pos[c];
        double t = apex_segment_parameter(prob.pos[a], prob.pos[b], apex, cpos);
        const double eps = kGeomEps;
        if (!(t > eps && t < 1.0 - eps)) continue;
        Point sp = apex + t * (cpos - apex);
        // the junction must see a and b under the wide arc, i.e. lie across
        // the chord ab from the apex
        Point ab = prob.pos[b] - prob.pos[a];
        if (cross(ab, sp - prob.pos[a]) * cross(ab, apex - prob.pos[a]) >= 0) continue;

        double spokes = dist(sp, prob.pos[a]) + dist(sp, prob.pos[b]) + dist(sp, cpos);
        if (std::abs(spokes - dist(apex, cpos)) > 1e-7 * (1.0 + prob.scale))
            throw InternalInconsistency("melzak length identity failed");

        MelzakSolution cand = std::move(*rec);
        cand.pos[s] = sp;
        cand.edges.push_back({a, s});
        cand.edges.push_back({b, s});
        double len = 0;
        for (auto& e : cand.edges) len += dist(cand.pos[e.first], cand.pos[e.second]);
        if (!best || len < best_len) {
            best = std::move(cand);
            best_len = len;
        }
    }
    return best;
}

}  // namespace detail

// Shortest embedding of one full topology, if it exists: pairs of terminals
// are merged into equilateral apexes down to a single segment, then junction
// positions are rebuilt through circumcircle intersections. Both apex
// choices are explored at every merge; a branch whose intersection does not
// lie properly between apex and attachment point is infeasible.
inline std::optional<GeometricTree> melzak_length(const std::vector<Point>& points,
                                                  const FullTopology& topo) {
    const int n = topo.terminal_count;
    if (static_cast<int>(points.size()) != n) throw InvariantViolation("point count mismatch");
    const int total = 2 * n - 2;

    detail::MelzakProblem prob;
    prob.pos.assign(total, Point{});
    prob.adj.assign(total, {});
    prob.active.assign(total, 0);
    prob.active_count = n;
    for (int i = 0; i < n; ++i) {
        prob.pos[i] = points[i];
        prob.active[i] = 1;
    }
    double scale = 0;
    for (auto& p : points) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    prob.scale = scale;
    for (auto& e : topo.edges) {
        prob.adj[e.first].push_back(e.second);
        prob.adj[e.second].push_back(e.first);
    }

    auto sol = detail::melzak_recurse(prob);
    if (!sol) return std::nullopt;
    GeometricTree tree;
    tree.nodes = sol->pos;
    tree.terminal_count = n;
    tree.edges = sol->edges;
    std::sort(tree.edges.begin(), tree.edges.end());
    tree.length = tree.recompute_length();
    return tree;
}

namespace detail {

struct SubSolution {
    double length = 0;
    std::vector<Point> junctions;
    std::vector<std::pair<int, int>> edges;  // ids < N terminals, >= N junctions (local)
};

}  // namespace detail

// Exact Euclidean Steiner minimal tree for 2..8 sites: the minimum over all
// full topologies of every terminal subset, combined across subsets that
// share a single terminal. Direct site-to-site edges are the 2-subsets, so
// any spanning tree of sites (including the MST) is covered.
inline GeometricTree solve_est(const std::vector<Point>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 2) throw InvariantViolation("solve_est needs at least 2 points");
    if (n > kMaxEuclidTerminals) throw CapExceeded("terminal cap for solve_est");

    const std::uint32_t full = (n == 32 ? ~0u : (1u << n) - 1);
    std::vector<std::optional<detail::SubSolution>> best(full + 1);

    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        int k = std::popcount(mask);
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) members.push_back(i);
        detail::SubSolution sol;
        if (k == 1) {
            best[mask] = sol;
            continue;
        }
        if (k == 2) {
            sol.length = dist(points[members[0]], points[members[1]]);
            sol.edges = {{members[0], members[1]}};
            best[mask] = sol;
            continue;
        }

        std::optional<detail::SubSolution> win;
        std::vector<Point> sub_pts;
        for (int i : members) sub_pts.push_back(points[i]);
        for (const FullTopology& topo : enumerate_full_topologies(k)) {
            auto emb = melzak_length(sub_pts, topo);
            if (!emb) continue;
            detail::SubSolution cand;
            cand.length = emb->length;
            for (int j = k; j < 2 * k - 2; ++j) cand.junctions.push_back(emb->nodes[j]);
            for (auto [x, y] : emb->edges) {
                int gx = x < k ? members[x] : n + (x - k);
                int gy = y < k ? members[y] : n + (y - k);
                cand.edges.push_back({gx, gy});
            }
            if (!win || cand.length < win->length) win = std::move(cand);
        }

        // components joined at one shared terminal
        for (int pivot : members) {
            std::uint32_t others = mask & ~(1u << pivot);
            for (std::uint32_t sub = (others - 1) & others; sub != 0; sub = (sub - 1) & others) {
                std::uint32_t m1 = sub | (1u << pivot);
                std::uint32_t m2 = (others ^ sub) | (1u << pivot);
                if (!best[m1] || !best[m2]) continue;
                const auto& s1 = *best[m1];
                const auto& s2 = *best[m2];
                if (win && s1.length + s2.length >= win->length) continue;
                detail::SubSolution cand;
                cand.length = s1.length + s2.length;
                cand.junctions = s1.junctions;
                cand.edges = s1.edges;
                int shift = static_cast<int>(s1.junctions.size());
                cand.junctions.insert(cand.junctions.end(), s2.junctions.begin(), s2.junctions.end());
                for (auto [x, y] : s2.edges)
                    cand.edges.push_back({x >= n ? x + shift : x, y >= n ? y + shift : y});
                win = std::move(cand);
            }
        }
        if (!win) throw InternalInconsistency("no embedding for a terminal subset");
        best[mask] = std::move(*win);
    }

    const detail::SubSolution& top = *best[full];
    GeometricTree tree;
    tree.nodes = points;
    tree.terminal_count = n;
    tree.nodes.insert(tree.nodes.end(), top.junctions.begin(), top.junctions.end());
    tree.edges = top.edges;
    std::sort(tree.edges.begin(), tree.edges.end());
    tree.length = tree.recompute_length();
    return tree;
}

// Discretized bridge to the combinatorial solver: sites normalized into the
// unit box join a g x g lattice, all pairwise distances become integers at a
// 1e6 scale, and the lattice graph is solved as an unconstrained (D = n)
// diameter instance. Returns the tree weight rescaled to real length.
inline double grid_approximate(const std::vector<Point>& points, int g,
                               std::uint64_t op_limit = 4'000'000'000ull) {
    const int n_pts = static_cast<int>(points.size());
    if (n_pts < 2 || n_pts > kMaxEuclidTerminals)
        throw InvariantViolation("grid_approximate needs 2..8 points");
    if (g < 2 || g > 32) throw CapExceeded("grid resolution out of range");

    double min_x = points[0].x, max_x = points[0].x, min_y = points[0].y, max_y = points[0].y;
    for (auto& p : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double scale = std::max(max_x - min_x, max_y - min_y);
    if (scale == 0.0) return 0.0;

    std::vector<Point> verts;
    for (int ix = 0; ix < g; ++ix)
        for (int iy = 0; iy < g; ++iy)
            verts.push_back({double(ix) / (g - 1), double(iy) / (g - 1)});

    std::vector<Vertex> term_ids;
    for (auto& p : points) {
        Point q{(p.x - min_x) / scale, (p.y - min_y) / scale};
        int found = -1;
        for (size_t i = 0; i < verts.size() && found < 0; ++i)
            if (dist(verts[i], q) <= kGeomEps) found = static_cast<int>(i);
        if (found < 0) {
            found = static_cast<int>(verts.size());
            verts.push_back(q);
        }
        term_ids.push_back(found);
    }
    std::sort(term_ids.begin(), term_ids.end());
    term_ids.erase(std::unique(term_ids.begin(), term_ids.end()), term_ids.end());

    const int n = static_cast<int>(verts.size());
    ProblemInstance inst;
    inst.graph = WeightMatrix(n, true);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            inst.graph.set(i, j, static_cast<Weight>(std::llround(1e6 * dist(verts[i], verts[j]))));
    inst.directed = false;
    inst.terminals = term_ids;
    inst.constraint = {ConstraintKind::Diameter, n};

    if (term_ids.size() == 1) return 0.0;
    dp::FillOptions opts;
    opts.stop_at_fixpoint = true;
    opts.op_limit = op_limit;
    SolveOutcome out = reduce::solve_dcst(inst, opts);
    if (!out.is_optimal()) throw InternalInconsistency("complete lattice instance reported infeasible");
    return static_cast<double>(out.weight) / 1e6 * scale;
}

}  // namespace steiner::euclid
