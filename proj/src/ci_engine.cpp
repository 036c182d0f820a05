#include "cibn/ci_engine.hpp"

#include "cibn/dsep.hpp"

#include <ostream>
#include <sstream>

namespace cibn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Independence queries over variable indices 0..n-1, memoized per run.
class Queries {
public:
    explicit Queries(const IndependenceSource& src) : src_(src) {
        if (auto* o = std::get_if<OracleSource>(&src_)) observed_ = o->dag.observed();
    }

    std::size_t variable_count() const {
        return std::visit(overloaded{[&](const OracleSource&) { return observed_.size(); },
                                     [](const StatisticalSource& s) { return s.data.variable_count(); }},
                          src_);
    }

    bool is_oracle() const { return std::holds_alternative<OracleSource>(src_); }
    std::size_t max_condition_size() const {
        if (auto* s = std::get_if<StatisticalSource>(&src_)) return s->max_condition_size;
        return kUnlimited;
    }

    bool independent(NodeId x, NodeId y, const NodeSet& s) {
        if (y < x) std::swap(x, y);
        Key key{x, y, s.items()};
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const bool result = std::visit(
            overloaded{[&](const OracleSource& o) {
                           NodeSet z;
                           for (NodeId v : s) z.insert(observed_[v.index]);
                           return d_separated(o.dag, observed_[x.index], observed_[y.index], z);
                       },
                       [&](const StatisticalSource& st) {
                           const CiTestResult r = ci_test(st.data, x, y, s, st.alpha);
                           if (st.audit) audit(st, x, y, s, r);
                           return r.independent;
                       }},
            src_);
        cache_.emplace(std::move(key), result);
        return result;
    }

private:
    using Key = std::tuple<NodeId, NodeId, std::vector<NodeId>>;

    static void audit(const StatisticalSource& st, NodeId x, NodeId y, const NodeSet& s, const CiTestResult& r) {
        std::ostringstream line;
        line << st.data.variable(x.index).name << " ⫫ " << st.data.variable(y.index).name << " | {";
        bool first = true;
        for (NodeId v : s) {
            line << (first ? "" : ",") << st.data.variable(v.index).name;
            first = false;
        }
        line << "} : " << r.p_value << (r.low_power ? " (low power)" : "") << '\n';
        *st.audit << line.str();
    }

    const IndependenceSource& src_;
    std::vector<NodeId> observed_;
    std::map<Key, bool> cache_;
};

std::string triple_text(const MixedGraph& g, NodeId a, NodeId b, NodeId c) {
    return "(" + g.label(a) + ", " + g.label(b) + ", " + g.label(c) + ")";
}

std::string edge_text(const MixedGraph& g, NodeId a, NodeId b) { return g.label(a) + "-" + g.label(b); }

bool is_arrow(const MixedGraph& g, NodeId at, NodeId other) {
    auto m = g.mark(at, other);
    return m && *m == EndMark::arrow;
}

bool is_tail(const MixedGraph& g, NodeId at, NodeId other) {
    auto m = g.mark(at, other);
    return m && *m == EndMark::tail;
}

/// Applies new marks to the ends of x-y. Only circles may change. Returns false when the
/// requested marks are already present; logs one event otherwise.
bool orient_edge(PartialIPG& p, Rule rule, NodeId x, NodeId y, std::optional<EndMark> at_x,
                 std::optional<EndMark> at_y) {
    MixedGraph& g = p.graph;
    const EndMark old_x = g.mark_at(x, y);
    const EndMark old_y = g.mark_at(y, x);
    const EndMark new_x = at_x.value_or(old_x);
    const EndMark new_y = at_y.value_or(old_y);
    auto check = [&](NodeId end, EndMark before, EndMark after) {
        if (before != after && before != EndMark::circle)
            throw CiContradiction(std::string("rule ") + to_string(rule) + " wants '" + mark_symbol(after) + "' at " +
                                  g.label(end) + " on " + edge_text(g, x, y) + " which already has '" +
                                  mark_symbol(before) + "'");
    };
    check(x, old_x, new_x);
    check(y, old_y, new_y);
    if (new_x == old_x && new_y == old_y) return false;
    if (new_x == EndMark::tail && new_y == EndMark::tail)
        throw CiContradiction(std::string("rule ") + to_string(rule) + " would create a tail/tail edge " + edge_text(g, x, y));
    g.set_mark(x, y, new_x);
    g.set_mark(y, x, new_y);
    if (x < y) p.log.push_back({rule, x, y, old_x, old_y, new_x, new_y});
    else p.log.push_back({rule, y, x, old_y, old_x, new_y, new_x});
    return true;
}

void check_noncolliders(const MixedGraph& g) {
    for (const auto& [a, b, c] : g.noncolliders())
        if (is_arrow(g, b, a) && is_arrow(g, b, c))
            throw CiContradiction("non-collider " + triple_text(g, a, b, c) + " has arrowheads on both edges");
}

bool add_noncollider(PartialIPG& p, Rule rule, NodeId a, NodeId b, NodeId c) {
    if (p.graph.is_noncollider(a, b, c)) return false;
    p.graph.add_noncollider(a, b, c);
    p.noncollider_origin.emplace(canonical_triple(a, b, c), rule);
    check_noncolliders(p.graph);
    return true;
}

// A vertex is a definite non-collider on <prev, v, next> when an edge of the triple is out
// of v or the triple is marked.
bool definite_noncollider(const MixedGraph& g, NodeId prev, NodeId v, NodeId next) {
    return is_tail(g, v, prev) || is_tail(g, v, next) || g.is_noncollider(prev, v, next);
}

bool path_collider(const MixedGraph& g, NodeId prev, NodeId v, NodeId next) {
    return is_arrow(g, v, prev) && is_arrow(g, v, next);
}

class Engine {
public:
    Engine(PartialIPG& p, const IndependenceSource& src) : p_(p), g_(p.graph), queries_(src) {}

    bool fire_once() { return rule_dp() || rule_ds() || rule_dd() || rule_dc(); }

private:
    std::size_t n() const { return g_.size(); }

    bool rule_dp() {
        for (std::size_t ai = 0; ai < n(); ++ai) {
            NodeId a(ai);
            for (NodeId b : g_.neighbors(a)) {
                const EndMark at_b = g_.mark_at(b, a);
                if (at_b == EndMark::arrow) continue;
                if (!directed_path_exists(g_, a, b)) continue;
                if (orient_edge(p_, Rule::Dp, a, b, std::nullopt, EndMark::arrow)) return true;
            }
        }
        return false;
    }

    // A and C are not d-connected given D: some S containing D separates them.
    bool separable_through(NodeId a, NodeId c, NodeId d) {
        if (g_.adjacent(a, c)) return false;  // adjacency means no separating set was found
        std::vector<NodeId> pool;
        if (queries_.is_oracle()) {
            for (std::size_t v = 0; v < n(); ++v)
                if (NodeId(v) != a && NodeId(v) != c && NodeId(v) != d) pool.emplace_back(v);
        } else {
            NodeSet around;
            for (NodeId v : g_.neighbors(a)) around.insert(v);
            for (NodeId v : g_.neighbors(c)) around.insert(v);
            for (NodeId v : around)
                if (v != a && v != c && v != d) pool.push_back(v);
        }
        const std::size_t cap = queries_.max_condition_size();
        if (cap == 0) return false;
        return for_each_subset(pool, cap == kUnlimited ? kUnlimited : cap - 1, [&](const NodeSet& rest) {
            NodeSet s = rest;
            s.insert(d);
            return queries_.independent(a, c, s);
        });
    }

    bool rule_ds() {
        for (std::size_t bi = 0; bi < n(); ++bi) {
            NodeId b(bi);
            const auto nb = g_.neighbors(b);
            for (NodeId d : nb) {
                if (g_.mark_at(b, d) == EndMark::arrow) continue;
                for (NodeId a : nb) {
                    if (a == d || !is_arrow(g_, b, a)) continue;
                    for (NodeId c : nb) {
                        if (!(a < c) || c == d || !is_arrow(g_, b, c)) continue;
                        if (!separable_through(a, c, d)) continue;
                        if (orient_edge(p_, Rule::Ds, b, d, EndMark::arrow, std::nullopt)) return true;
                    }
                }
            }
        }
        return false;
    }

    bool rule_dd() {
        for (std::size_t mi = 0; mi < n(); ++mi) {
            NodeId m(mi);
            for (std::size_t xi = 0; xi < n(); ++xi) {
                for (std::size_t yi = xi + 1; yi < n(); ++yi) {
                    NodeId x(xi), y(yi);
                    if (x == m || y == m || g_.adjacent(x, y)) continue;
                    bool fired = false;
                    for_each_definite_discriminating_path(g_, x, y, m, [&](const std::vector<NodeId>& path) {
                        const auto pos = static_cast<std::size_t>(std::find(path.begin(), path.end(), m) - path.begin());
                        const NodeId pn = path[pos - 1], rn = path[pos + 1];
                        if (!g_.adjacent(pn, rn)) return false;
                        const NodeSet* sep = p_.sepsets.find(x, y);
                        if (!sep) throw std::logic_error("missing sepset for " + edge_text(g_, x, y));
                        if (sep->contains(m)) {
                            fired = add_noncollider(p_, Rule::Dd, pn, m, rn);
                        } else {
                            const bool left = orient_edge(p_, Rule::Dd, pn, m, std::nullopt, EndMark::arrow);
                            const bool right = orient_edge(p_, Rule::Dd, rn, m, std::nullopt, EndMark::arrow);
                            fired = left || right;
                        }
                        return fired;
                    });
                    if (fired) return true;
                }
            }
        }
        return false;
    }

    bool rule_dc() {
        for (const auto& [a, b, c] : std::set<Triple>(g_.noncolliders())) {
            for (auto [pn, rn] : {std::pair{a, c}, std::pair{c, a}}) {
                if (!is_arrow(g_, b, pn)) continue;
                if (orient_edge(p_, Rule::Dc, b, rn, EndMark::tail, EndMark::arrow)) return true;
            }
        }
        return false;
    }

    PartialIPG& p_;
    MixedGraph& g_;
    Queries queries_;
};

}  // namespace

std::vector<std::string> variable_names(const IndependenceSource& src) {
    return std::visit(overloaded{[](const OracleSource& o) {
                                     std::vector<std::string> out;
                                     for (NodeId v : o.dag.observed()) out.push_back(o.dag.label(v));
                                     return out;
                                 },
                                 [](const StatisticalSource& s) { return s.data.names(); }},
                      src);
}

const char* to_string(Rule r) {
    switch (r) {
        case Rule::C: return "C";
        case Rule::Dp: return "Dp";
        case Rule::Ds: return "Ds";
        case Rule::Dd: return "Dd";
        case Rule::Dc: return "Dc";
    }
    return "?";
}

void SepsetTable::record(NodeId a, NodeId b, NodeSet s) {
    if (a == b) throw std::invalid_argument("sepset needs two distinct nodes");
    if (b < a) std::swap(a, b);
    table_[{a, b}] = std::move(s);
}

const NodeSet* SepsetTable::find(NodeId a, NodeId b) const {
    if (b < a) std::swap(a, b);
    auto it = table_.find({a, b});
    return it == table_.end() ? nullptr : &it->second;
}

std::pair<MixedGraph, SepsetTable> skeleton(const IndependenceSource& src) {
    const auto names = variable_names(src);
    if (names.size() < 2) throw std::invalid_argument("skeleton search needs at least two variables");
    MixedGraph g(names);
    const std::size_t n = names.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(NodeId(i), NodeId(j), EndMark::circle, EndMark::circle);

    SepsetTable sepsets;
    Queries queries(src);
    if (queries.is_oracle()) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                NodeId a(i), b(j);
                std::vector<NodeId> pool;
                for (std::size_t v = 0; v < n; ++v)
                    if (v != i && v != j) pool.emplace_back(v);
                for_each_subset(pool, kUnlimited, [&](const NodeSet& s) {
                    if (!queries.independent(a, b, s)) return false;
                    g.remove_edge(a, b);
                    sepsets.record(a, b, s);
                    return true;
                });
            }
        }
        return {std::move(g), std::move(sepsets)};
    }

    // Data: PC-style levels over current neighborhoods.
    const std::size_t cap = queries.max_condition_size();
    for (std::size_t level = 0; level <= cap; ++level) {
        bool any_candidate = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                NodeId a(i), b(j);
                if (!g.adjacent(a, b)) continue;
                for (auto [from, other] : {std::pair{a, b}, std::pair{b, a}}) {
                    if (!g.adjacent(a, b)) break;
                    std::vector<NodeId> pool;
                    for (NodeId v : g.neighbors(from))
                        if (v != other) pool.push_back(v);
                    if (pool.size() < level) continue;
                    any_candidate = true;
                    // Only subsets of exactly `level` elements at this level.
                    for_each_subset(pool, level, [&](const NodeSet& s) {
                        if (s.size() != level) return false;
                        if (!queries.independent(a, b, s)) return false;
                        g.remove_edge(a, b);
                        sepsets.record(a, b, s);
                        return true;
                    });
                }
            }
        }
        if (!any_candidate) break;
    }
    return {std::move(g), std::move(sepsets)};
}

PartialIPG orient_colliders(PartialIPG p) {
    MixedGraph& g = p.graph;
    for (std::size_t bi = 0; bi < g.size(); ++bi) {
        NodeId b(bi);
        const auto nb = g.neighbors(b);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                NodeId a = nb[i], c = nb[j];
                if (g.adjacent(a, c)) continue;
                const NodeSet* sep = p.sepsets.find(a, c);
                if (!sep) throw std::logic_error("no sepset recorded for non-adjacent pair " + edge_text(g, a, c));
                if (sep->contains(b)) {
                    if (!g.is_noncollider(a, b, c)) {
                        g.add_noncollider(a, b, c);
                        p.noncollider_origin.emplace(canonical_triple(a, b, c), Rule::C);
                    }
                } else {
                    orient_edge(p, Rule::C, a, b, std::nullopt, EndMark::arrow);
                    orient_edge(p, Rule::C, c, b, std::nullopt, EndMark::arrow);
                }
            }
        }
    }
    check_noncolliders(g);
    return p;
}

void for_each_definite_discriminating_path(const MixedGraph& g, NodeId x, NodeId y, NodeId b,
                                           const std::function<bool(const std::vector<NodeId>&)>& visit) {
    g.check(x);
    g.check(y);
    g.check(b);
    if (x == y || b == x || b == y || g.adjacent(x, y)) return;

    std::vector<NodeId> path{x};
    std::vector<bool> on_path(g.size(), false);
    on_path[x.index] = true;
    std::size_t b_pos = 0;  // 0 while b is not yet on the path

    // Checks the interior vertex path[i] (not b) once both of its path neighbours are known.
    auto interior_ok = [&](std::size_t i) {
        const NodeId prev = path[i - 1], v = path[i], next = path[i + 1];
        const bool collider = path_collider(g, prev, v, next);
        if (!collider && !definite_noncollider(g, prev, v, next)) return false;
        const NodeId far_end = (b_pos == 0 || i < b_pos) ? y : x;
        if (collider) return is_directed(g, v, far_end);
        return is_arrow(g, v, far_end);
    };

    auto dfs = [&](auto&& self) -> bool {
        const NodeId v = path.back();
        for (NodeId w : g.neighbors(v)) {
            if (on_path[w.index]) continue;
            const bool before_b = b_pos == 0;
            if (before_b && w == y) continue;  // b must come first
            // Every edge points toward b, except the two edges touching b itself.
            if (before_b && w != b && !is_arrow(g, w, v)) continue;
            if (!before_b && v != b && !is_arrow(g, v, w)) continue;

            path.push_back(w);
            on_path[w.index] = true;
            if (w == b) b_pos = path.size() - 1;
            bool stop = false;
            const std::size_t i = path.size() - 2;  // v's position; its neighbours are now known
            if (i == 0 || path[i] == b || interior_ok(i)) {
                if (w == y) stop = visit(path);
                else stop = self(self);
            }
            if (w == b) b_pos = 0;
            on_path[w.index] = false;
            path.pop_back();
            if (stop) return true;
        }
        return false;
    };
    dfs(dfs);
}

std::optional<std::vector<NodeId>> find_definite_discriminating_path(const PartialIPG& p, NodeId x, NodeId y,
                                                                     NodeId b) {
    std::optional<std::vector<NodeId>> out;
    for_each_definite_discriminating_path(p.graph, x, y, b, [&](const std::vector<NodeId>& path) {
        out = path;
        return true;
    });
    return out;
}

PartialIPG orient_loop(PartialIPG p, const IndependenceSource& src) {
    Engine engine(p, src);
    while (engine.fire_once()) check_noncolliders(p.graph);
    return p;
}

PartialIPG run_ci(const IndependenceSource& src) {
    auto [graph, sepsets] = skeleton(src);
    PartialIPG p{std::move(graph), std::move(sepsets), {}, {}};
    p = orient_colliders(std::move(p));
    return orient_loop(std::move(p), src);
}

}  // namespace cibn
