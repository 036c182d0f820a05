#include "test_support.hpp"

#include "cibn/graph_file.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace testsupport {

using namespace cibn;

Dag five_node_dag() {
    return make_dag({"A->B", "B->C", "C->D", "D->E", "A->E", "A->D", "A->C"});
}

Dag make_dag(const std::vector<std::string>& edges, const std::vector<std::string>& hidden,
             const std::vector<std::string>& order) {
    Dag g;
    auto node = [&](const std::string& label) {
        if (auto id = g.find(label)) return *id;
        return g.add_node(label, std::find(hidden.begin(), hidden.end(), label) != hidden.end());
    };
    for (const auto& l : order) node(l);
    for (const auto& e : edges) {
        auto arrow = e.find("->");
        if (arrow == std::string::npos) throw std::invalid_argument("bad edge " + e);
        NodeId p = node(e.substr(0, arrow));
        NodeId c = node(e.substr(arrow + 2));
        g.add_edge(p, c);
    }
    return g;
}

MixedGraph mixed(const std::string& text) {
    return to_mixed(parse_graph_text(text));
}

Dataset sample_chain(std::uint64_t seed, std::size_t rows, double copy) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5), keep(copy);
    std::vector<std::vector<std::uint16_t>> cols(3, std::vector<std::uint16_t>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::uint16_t a = coin(rng);
        const std::uint16_t b = keep(rng) ? a : 1 - a;
        const std::uint16_t c = keep(rng) ? b : 1 - b;
        cols[0][r] = a;
        cols[1][r] = b;
        cols[2][r] = c;
    }
    std::vector<Variable> vars = {{"A", {"0", "1"}}, {"B", {"0", "1"}}, {"C", {"0", "1"}}};
    return Dataset(std::move(vars), std::move(cols));
}

std::string dataset_csv(const Dataset& d) {
    std::ostringstream out;
    for (std::size_t v = 0; v < d.variable_count(); ++v) out << (v ? "," : "") << d.variable(v).name;
    out << '\n';
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        for (std::size_t v = 0; v < d.variable_count(); ++v)
            out << (v ? "," : "") << d.variable(v).categories[d.at(r, NodeId(v))];
        out << '\n';
    }
    return out.str();
}

Dataset independent_columns(std::uint64_t seed, std::size_t rows) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<std::vector<std::uint16_t>> cols(2, std::vector<std::uint16_t>(rows));
    for (auto& col : cols)
        for (auto& cell : col) cell = coin(rng);
    return Dataset({{"x", {"0", "1"}}, {"y", {"0", "1"}}}, std::move(cols));
}

std::vector<Dag> all_labeled_dags(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> forward;
    std::set<std::uint32_t> seen;  // adjacency matrix bits, i*n+j for edge i->j
    std::vector<Dag> out;
    do {
        forward.clear();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) forward.push_back({perm[i], perm[j]});
        for (std::uint32_t mask = 0; mask < (1u << forward.size()); ++mask) {
            std::uint32_t key = 0;
            for (std::size_t e = 0; e < forward.size(); ++e)
                if (mask >> e & 1) key |= 1u << (forward[e].first * n + forward[e].second);
            if (!seen.insert(key).second) continue;
            Dag g;
            for (std::size_t v = 0; v < n; ++v) g.add_node("N" + std::to_string(v));
            for (std::size_t e = 0; e < forward.size(); ++e)
                if (mask >> e & 1) g.add_edge(NodeId(forward[e].first), NodeId(forward[e].second));
            out.push_back(std::move(g));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

Dag random_small_dag(std::uint64_t seed, std::size_t n, double p) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution edge(p);
    Dag g;
    for (std::size_t v = 0; v < n; ++v) g.add_node("N" + std::to_string(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng)) g.add_edge(NodeId(order[i]), NodeId(order[j]));
    return g;
}

namespace {

struct DotLexer {
    const std::string& s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            } else if (s.compare(pos, 2, "//") == 0) {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    // Returns "" at end of input. Quoted strings keep their quotes.
    std::string next() {
        skip();
        if (pos >= s.size()) return "";
        const char c = s[pos];
        if (c == '"') {
            std::size_t start = pos++;
            while (pos < s.size() && s[pos] != '"') {
                if (s[pos] == '\\') ++pos;
                ++pos;
            }
            if (pos >= s.size()) throw std::runtime_error("unterminated string");
            ++pos;
            return s.substr(start, pos - start);
        }
        if (s.compare(pos, 2, "->") == 0) {
            pos += 2;
            return "->";
        }
        if (std::string("{}[]=,;").find(c) != std::string::npos) {
            ++pos;
            return std::string(1, c);
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '.'))
                ++pos;
            return s.substr(start, pos - start);
        }
        throw std::runtime_error(std::string("unexpected character '") + c + "'");
    }

    std::string peek() {
        const std::size_t saved = pos;
        std::string t = next();
        pos = saved;
        return t;
    }
};

bool is_id(const std::string& t) {
    if (t.empty()) return false;
    if (t.front() == '"') return true;
    return std::all_of(t.begin(), t.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }) &&
           t != "digraph" && t != "graph" && t != "node" && t != "edge";
}

void expect(DotLexer& lx, const std::string& want) {
    std::string got = lx.next();
    if (got != want) throw std::runtime_error("expected '" + want + "', got '" + got + "'");
}

void attr_list(DotLexer& lx) {
    expect(lx, "[");
    while (lx.peek() != "]") {
        std::string key = lx.next();
        if (!is_id(key)) throw std::runtime_error("bad attribute name '" + key + "'");
        expect(lx, "=");
        std::string val = lx.next();
        if (!is_id(val)) throw std::runtime_error("bad attribute value '" + val + "'");
        if (lx.peek() == ",") lx.next();
    }
    expect(lx, "]");
}

}  // namespace

bool valid_dot(const std::string& text, std::string* why) {
    DotLexer lx{text};
    try {
        expect(lx, "digraph");
        if (lx.peek() != "{") {
            if (!is_id(lx.next())) throw std::runtime_error("bad graph name");
        }
        expect(lx, "{");
        while (lx.peek() != "}") {
            std::string a = lx.next();
            if (!is_id(a)) throw std::runtime_error("expected node id, got '" + a + "'");
            if (lx.peek() == "->") {
                lx.next();
                std::string b = lx.next();
                if (!is_id(b)) throw std::runtime_error("expected edge target, got '" + b + "'");
            }
            if (lx.peek() == "[") attr_list(lx);
            expect(lx, ";");
        }
        expect(lx, "}");
        if (!lx.next().empty()) throw std::runtime_error("trailing input");
    } catch (const std::exception& e) {
        if (why) *why = e.what();
        return false;
    }
    return true;
}

}  // namespace testsupport
