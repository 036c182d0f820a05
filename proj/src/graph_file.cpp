#include "cibn/graph_file.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>

namespace cibn {

namespace {

std::optional<std::pair<EndMark, EndMark>> parse_mark_token(const std::string& tok) {
    static const std::map<std::string, std::pair<EndMark, EndMark>> kTokens = {
        {"->", {EndMark::tail, EndMark::arrow}},    {"<-", {EndMark::arrow, EndMark::tail}},
        {"<->", {EndMark::arrow, EndMark::arrow}},  {"o->", {EndMark::circle, EndMark::arrow}},
        {"<-o", {EndMark::arrow, EndMark::circle}}, {"o-o", {EndMark::circle, EndMark::circle}},
        {"-o", {EndMark::tail, EndMark::circle}},   {"o-", {EndMark::circle, EndMark::tail}},
        {"--", {EndMark::tail, EndMark::tail}},
    };
    auto it = kTokens.find(tok);
    if (it == kTokens.end()) return std::nullopt;
    return it->second;
}

bool valid_label(const std::string& s) {
    return !s.empty() && s.front() != '#' && !parse_mark_token(s) && s != "node" && s != "noncollider";
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

// Canonical printed form of one edge, choosing the orientation that reads left to right.
std::string edge_line(const std::string& la, const std::string& lb, EndMark at_a, EndMark at_b) {
    using M = EndMark;
    if (at_a == M::arrow && (at_b == M::tail || at_b == M::circle)) return edge_line(lb, la, at_b, at_a);
    if (at_a == M::tail && at_b == M::circle) return edge_line(lb, la, at_b, at_a);
    std::string tok;
    tok += at_a == M::arrow ? "<" : at_a == M::circle ? "o" : "";
    tok += "-";
    tok += at_b == M::arrow ? ">" : at_b == M::circle ? "o" : "";
    if (tok == "-") tok = "--";
    return la + " " + tok + " " + lb;
}

std::string dot_id(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

const char* dot_arrow(EndMark m) {
    switch (m) {
        case EndMark::tail: return "none";
        case EndMark::arrow: return "normal";
        case EndMark::circle: return "odot";
    }
    return "none";
}

}  // namespace

GraphFile parse_graph(std::istream& in) {
    GraphFile f;
    std::map<std::string, std::size_t> ids;
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    std::string line;
    std::size_t line_no = 0;

    auto node_id = [&](const std::string& label, bool declare, bool hidden) -> std::size_t {
        if (!valid_label(label)) throw GraphFileError("line " + std::to_string(line_no) + ": bad node label '" + label + "'", line_no);
        auto it = ids.find(label);
        if (it != ids.end()) {
            if (declare) throw GraphFileError("line " + std::to_string(line_no) + ": node '" + label + "' declared twice", line_no);
            return it->second;
        }
        ids.emplace(label, f.nodes.size());
        f.nodes.push_back({label, hidden});
        return f.nodes.size() - 1;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = tokenize(line);
        if (toks.empty() || toks.front().front() == '#') continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";

        if (toks[0] == "node" && (toks.size() == 2 || (toks.size() == 3 && !parse_mark_token(toks[1])))) {
            bool hidden = false;
            if (toks.size() == 3) {
                if (toks[2] == "hidden") hidden = true;
                else if (toks[2] != "observed") throw GraphFileError(where + "expected 'hidden' or 'observed'", line_no);
            }
            node_id(toks[1], true, hidden);
        } else if (toks[0] == "noncollider") {
            if (toks.size() != 4) throw GraphFileError(where + "noncollider needs three nodes", line_no);
            f.noncolliders.push_back({node_id(toks[1], false, false), node_id(toks[2], false, false),
                                      node_id(toks[3], false, false)});
        } else if (toks.size() == 3) {
            auto marks = parse_mark_token(toks[1]);
            if (!marks) throw GraphFileError(where + "unknown edge mark '" + toks[1] + "'", line_no);
            const std::size_t a = node_id(toks[0], false, false);
            const std::size_t b = node_id(toks[2], false, false);
            if (a == b) throw GraphFileError(where + "self-loop at '" + toks[0] + "'", line_no);
            if (!pairs.insert({std::min(a, b), std::max(a, b)}).second)
                throw GraphFileError(where + "duplicate edge " + toks[0] + " " + toks[2], line_no);
            f.edges.push_back({a, b, marks->first, marks->second});
        } else {
            throw GraphFileError(where + "cannot parse '" + line + "'", line_no);
        }
    }
    return f;
}

GraphFile parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphFileError("cannot open " + path, 0);
    return parse_graph(in);
}

Dag to_dag(const GraphFile& f) {
    Dag g;
    for (const auto& n : f.nodes) g.add_node(n.label, n.hidden);
    for (const auto& e : f.edges) {
        if (e.at_a == EndMark::tail && e.at_b == EndMark::arrow) g.add_edge(NodeId(e.a), NodeId(e.b));
        else if (e.at_a == EndMark::arrow && e.at_b == EndMark::tail) g.add_edge(NodeId(e.b), NodeId(e.a));
        else
            throw GraphError(GraphError::Kind::invalid,
                             "edge " + f.nodes[e.a].label + "-" + f.nodes[e.b].label + " is not a directed edge");
    }
    if (!f.noncolliders.empty()) throw GraphError(GraphError::Kind::invalid, "a DAG file cannot carry noncollider lines");
    return g;
}

MixedGraph to_mixed(const GraphFile& f) {
    MixedGraph g;
    for (const auto& n : f.nodes) {
        if (n.hidden) throw GraphError(GraphError::Kind::invalid, "mixed graphs have no hidden nodes ('" + n.label + "')");
        g.add_node(n.label);
    }
    for (const auto& e : f.edges) {
        if (e.at_a == EndMark::tail && e.at_b == EndMark::tail)
            throw GraphError(GraphError::Kind::invalid,
                             "tail/tail edge " + f.nodes[e.a].label + "-" + f.nodes[e.b].label + " is not allowed");
        g.add_edge(NodeId(e.a), NodeId(e.b), e.at_a, e.at_b);
    }
    for (const auto& t : f.noncolliders) g.add_noncollider(NodeId(t[0]), NodeId(t[1]), NodeId(t[2]));
    return g;
}

std::string print_graph(const Dag& g) {
    std::ostringstream out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        NodeId v(i);
        out << "node " << g.label(v) << (g.is_hidden(v) ? " hidden" : "") << '\n';
    }
    for (auto [p, c] : g.edges()) out << g.label(p) << " -> " << g.label(c) << '\n';
    return out.str();
}

std::string print_graph(const MixedGraph& g) {
    std::ostringstream out;
    for (std::size_t i = 0; i < g.size(); ++i) out << "node " << g.label(NodeId(i)) << '\n';
    for (const auto& e : g.edges()) out << edge_line(g.label(e.a), g.label(e.b), e.at_a, e.at_b) << '\n';
    for (const auto& [a, b, c] : g.noncolliders())
        out << "noncollider " << g.label(a) << ' ' << g.label(b) << ' ' << g.label(c) << '\n';
    return out.str();
}

std::string to_dot(const MixedGraph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << dot_id(name) << " {\n";
    for (std::size_t i = 0; i < g.size(); ++i) out << "  " << dot_id(g.label(NodeId(i))) << ";\n";
    for (const auto& e : g.edges()) {
        out << "  " << dot_id(g.label(e.a)) << " -> " << dot_id(g.label(e.b)) << " [dir=both, arrowtail="
            << dot_arrow(e.at_a) << ", arrowhead=" << dot_arrow(e.at_b) << "];\n";
    }
    for (const auto& [a, b, c] : g.noncolliders())
        out << "  // noncollider " << g.label(a) << ' ' << g.label(b) << ' ' << g.label(c) << '\n';
    out << "}\n";
    return out.str();
}

std::string to_dot(const Dag& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << dot_id(name) << " {\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        NodeId v(i);
        out << "  " << dot_id(g.label(v)) << (g.is_hidden(v) ? " [style=dashed]" : "") << ";\n";
    }
    for (auto [p, c] : g.edges()) out << "  " << dot_id(g.label(p)) << " -> " << dot_id(g.label(c)) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace cibn
