#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "steiner/core.hpp"
#include "steiner/euclid.hpp"

namespace steiner::io {

using nlohmann::json;

namespace detail {

inline const json& field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(std::string("missing field \"") + name + "\"");
    return *it;
}

inline std::int64_t int_field(const json& obj, const char* name) {
    const json& v = field(obj, name);
    if (!v.is_number_integer()) throw ParseError(std::string("field \"") + name + "\" must be an integer");
    return v.get<std::int64_t>();
}

}  // namespace detail

inline json instance_to_json(const ProblemInstance& inst) {
    json weights = json::array();
    const int n = inst.n();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) {
            Weight w = inst.graph.at(i, j);
            if (w == kAbsent)
                row.push_back(nullptr);
            else
                row.push_back(w);
        }
        weights.push_back(std::move(row));
    }
    json j;
    j["n"] = n;
    j["directed"] = inst.directed;
    j["weights"] = std::move(weights);
    j["terminals"] = inst.terminals;
    if (inst.root)
        j["root"] = *inst.root;
    else
        j["root"] = nullptr;
    j["constraint"] = {{"kind", to_string(inst.constraint.kind)}, {"value", inst.constraint.value}};
    return j;
}

inline ProblemInstance instance_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    std::int64_t n64 = detail::int_field(j, "n");
    if (n64 < 1 || n64 > 4096) throw ParseError("field \"n\" out of range");
    const int n = static_cast<int>(n64);

    const json& dir = detail::field(j, "directed");
    if (!dir.is_boolean()) throw ParseError("field \"directed\" must be a boolean");
    const bool directed = dir.get<bool>();

    ProblemInstance inst;
    inst.directed = directed;
    inst.graph = WeightMatrix(n, !directed);

    const json& weights = detail::field(j, "weights");
    if (!weights.is_array() || static_cast<int>(weights.size()) != n)
        throw ParseError("field \"weights\" must be an n x n array");
    for (int i = 0; i < n; ++i) {
        const json& row = weights[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError("weights row " + std::to_string(i) + " must have n entries");
        for (int jx = 0; jx < n; ++jx) {
            const json& cell = row[jx];
            if (cell.is_null()) {
                if (i == jx) throw InvariantViolation("diagonal weight must be 0, not absent");
                if (!directed) {
                    const json& mirror = weights[jx][i];
                    if (!mirror.is_null())
                        throw InvariantViolation("undirected weights must be symmetric (including absences)");
                }
                continue;
            }
            if (!cell.is_number_integer())
                throw ParseError("weights[" + std::to_string(i) + "][" + std::to_string(jx) +
                                 "] must be an integer or null");
            std::int64_t w = cell.get<std::int64_t>();
            if (w < 0) throw InvariantViolation("negative weights are not allowed");
            if (i == jx) {
                if (w != 0) throw InvariantViolation("diagonal weight must be 0");
                continue;
            }
            if (!directed) {
                const json& mirror = weights[jx][i];
                if (!mirror.is_number_integer() || mirror.get<std::int64_t>() != w)
                    throw InvariantViolation("undirected weights must be symmetric (including absences)");
                if (i < jx) inst.graph.set(i, jx, static_cast<Weight>(w));
            } else {
                inst.graph.set(i, jx, static_cast<Weight>(w));
            }
        }
    }

    const json& terms = detail::field(j, "terminals");
    if (!terms.is_array()) throw ParseError("field \"terminals\" must be an array");
    for (const json& t : terms) {
        if (!t.is_number_integer()) throw ParseError("terminals must be integers");
        inst.terminals.push_back(t.get<int>());
    }

    const json& root = detail::field(j, "root");
    if (root.is_null()) {
        inst.root = std::nullopt;
    } else if (root.is_number_integer()) {
        inst.root = root.get<int>();
    } else {
        throw ParseError("field \"root\" must be an integer or null");
    }

    const json& cons = detail::field(j, "constraint");
    if (!cons.is_object()) throw ParseError("field \"constraint\" must be an object");
    const json& kind = detail::field(cons, "kind");
    if (!kind.is_string()) throw ParseError("constraint \"kind\" must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "diameter")
        inst.constraint.kind = ConstraintKind::Diameter;
    else if (k == "min_degree")
        inst.constraint.kind = ConstraintKind::MinDegree;
    else if (k == "size")
        inst.constraint.kind = ConstraintKind::Size;
    else
        throw ParseError("constraint \"kind\" must be diameter, min_degree, or size");
    inst.constraint.value = detail::int_field(cons, "value");

    inst.validate();
    return inst;
}

inline ProblemInstance parse_instance_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        return instance_from_json(j);
    } catch (const ParseError& e) {
        std::string what = e.what();
        const std::string prefix = "parse error: ";
        if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
        throw ParseError(origin + ": " + what);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ProblemInstance parse_instance(const std::string& path) {
    return parse_instance_text(read_file(path), path);
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest(const ProblemInstance& inst) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(instance_to_json(inst).dump())));
    return buf;
}

inline json tree_to_json(const SteinerTree& tree) {
    json edges = json::array();
    for (auto& e : tree.edges) edges.push_back({e.first, e.second});
    json j;
    j["vertices"] = tree.vertices;
    j["edges"] = std::move(edges);
    if (tree.root)
        j["root"] = *tree.root;
    else
        j["root"] = nullptr;
    return j;
}

inline json outcome_to_json(const SolveOutcome& out) {
    json j;
    j["status"] = out.is_optimal() ? "optimal" : "fail";
    if (out.is_optimal()) j["weight"] = out.weight;
    if (out.tree) j["tree"] = tree_to_json(*out.tree);
    if (out.discrepancy) {
        j["discrepancy"] = true;
        j["discrepancy_note"] = out.discrepancy_note;
    }
    return j;
}

inline std::vector<euclid::Point> points_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("points file must be a JSON object");
    const json& pts = detail::field(j, "points");
    if (!pts.is_array() || pts.size() < 2) throw ParseError("\"points\" must list at least 2 points");
    std::vector<euclid::Point> out;
    for (const json& p : pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError("each point must be a [x, y] number pair");
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return out;
}

inline std::vector<euclid::Point> parse_points(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return points_from_json(j);
}

// GraphViz rendering of a combinatorial tree; pass the instance to mark
// terminals and label edge weights.
inline std::string tree_to_dot(const SteinerTree& tree, const ProblemInstance* inst = nullptr) {
    const bool directed = tree.root.has_value();
    std::ostringstream out;
    out << (directed ? "digraph" : "graph") << " steiner_tree {\n";
    for (Vertex v : tree.vertices) {
        out << "  v" << v << " [label=\"" << v << "\"";
        if (inst && inst->is_terminal(v)) out << ", shape=doublecircle";
        if (tree.root && *tree.root == v) out << ", penwidth=2";
        out << "];\n";
    }
    for (auto& e : tree.edges) {
        out << "  v" << e.first << (directed ? " -> " : " -- ") << "v" << e.second;
        if (inst && inst->graph.finite(e.first, e.second))
            out << " [label=\"" << inst->graph.at(e.first, e.second) << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

// Static SVG drawing of an embedded Euclidean tree: edges, terminal sites
// (solid), junctions (hollow), plus a length caption.
inline std::string geometric_tree_to_svg(const euclid::GeometricTree& tree) {
    const double w = 640, h = 640, margin = 48;
    double min_x = tree.nodes[0].x, max_x = min_x, min_y = tree.nodes[0].y, max_y = min_y;
    for (auto& p : tree.nodes) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
    auto sx = [&](double x) { return margin + (x - min_x) / span * (w - 2 * margin); };
    auto sy = [&](double y) { return h - margin - (y - min_y) / span * (h - 2 * margin); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (auto& e : tree.edges) {
        auto a = tree.nodes[e.first], b = tree.nodes[e.second];
        out << "  <line x1=\"" << num(sx(a.x)) << "\" y1=\"" << num(sy(a.y)) << "\" x2=\""
            << num(sx(b.x)) << "\" y2=\"" << num(sy(b.y))
            << "\" stroke=\"#2c3e50\" stroke-width=\"2\"/>\n";
    }
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        bool terminal = static_cast<int>(i) < tree.terminal_count;
        out << "  <circle cx=\"" << num(sx(tree.nodes[i].x)) << "\" cy=\"" << num(sy(tree.nodes[i].y))
            << "\" r=\"" << (terminal ? 6 : 4) << "\" fill=\"" << (terminal ? "#1f6f43" : "white")
            << "\" stroke=\"" << (terminal ? "#1f6f43" : "#c0392b") << "\" stroke-width=\"2\"/>\n";
    }
    out << "  <text x=\"" << margin << "\" y=\"" << margin / 2
        << "\" font-family=\"monospace\" font-size=\"14\">length = " << num(tree.length)
        << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace steiner::io
