#include "cibn/verify.hpp"

#include "cibn/dsep.hpp"
#include "cibn/graph_file.hpp"
#include "cibn/latent.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cibn {

namespace {

// Bit-level draws so results do not depend on the standard library's distributions.
class Draws {
public:
    Draws(std::uint64_t seed, std::uint64_t index)
        : engine_(make_seq(seed, index)) {}

    bool bernoulli(double p) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return u < p;
    }

    std::size_t below(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::size_t>(r % bound);
    }

private:
    static std::mt19937_64 make_seq(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        return std::mt19937_64(seq);
    }

    std::mt19937_64 engine_;
};

std::string hex(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << v;
    return out.str();
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

}  // namespace

void TrialConfig::validate() const {
    if (n_observed < 2) throw std::invalid_argument("n_observed must be at least 2");
    if (n_observed + n_hidden > node_budget)
        throw std::invalid_argument("n_observed + n_hidden exceeds the node budget of " + std::to_string(node_budget));
    if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
        throw std::invalid_argument("edge_probability must lie in [0, 1]");
    if (threads == 0) throw std::invalid_argument("threads must be at least 1");
}

std::size_t TrialConfig::effective_max_condition_size() const {
    if (max_condition_size) return *max_condition_size;
    return n_observed <= 7 ? kUnlimited : 4;
}

Dag random_dag(const TrialConfig& cfg, std::size_t trial_index) {
    cfg.validate();
    Draws draws(cfg.seed, trial_index);
    const std::size_t n = cfg.n_observed + cfg.n_hidden;
    Dag g;
    for (std::size_t i = 0; i < cfg.n_observed; ++i) g.add_node("X" + std::to_string(i));
    for (std::size_t i = 0; i < cfg.n_hidden; ++i) g.add_node("H" + std::to_string(i), true);

    std::vector<NodeId> order;
    for (std::size_t i = 0; i < n; ++i) order.emplace_back(i);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[draws.below(i)]);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (draws.bernoulli(cfg.edge_probability)) g.add_edge(order[i], order[j]);
    return g;
}

std::string Counterexample::describe() const {
    return x + " _||_ " + y + " | {" + join(conditioning, ",") + "}: truth=" +
           (separated_in_truth ? "separated" : "connected") + " bn=" + (separated_in_bn ? "separated" : "connected");
}

EquivalenceResult independence_equivalent(const Dag& truth, const BeliefNetwork& bn,
                                          const std::vector<std::string>& observed, std::size_t max_s,
                                          bool exhaustive) {
    std::vector<NodeId> in_truth, in_bn;
    for (const auto& label : observed) {
        in_truth.push_back(truth.require(label));
        in_bn.push_back(bn.dag.require(label));
    }
    auto sep = [&](const Dag& g, NodeId a, NodeId b, const NodeSet& s) {
        return exhaustive ? d_separated_exhaustive(g, a, b, s) : d_separated(g, a, b, s);
    };

    EquivalenceResult result;
    const std::size_t k = observed.size();
    for (std::size_t i = 0; i < k && result.equivalent; ++i) {
        for (std::size_t j = i + 1; j < k && result.equivalent; ++j) {
            std::vector<NodeId> pool;
            for (std::size_t v = 0; v < k; ++v)
                if (v != i && v != j) pool.emplace_back(v);
            for_each_subset(pool, max_s, [&](const NodeSet& s) {
                NodeSet st, sb;
                for (NodeId v : s) {
                    st.insert(in_truth[v.index]);
                    sb.insert(in_bn[v.index]);
                }
                ++result.queries;
                const bool a = sep(truth, in_truth[i], in_truth[j], st);
                const bool b = sep(bn.dag, in_bn[i], in_bn[j], sb);
                if (a == b) return false;
                Counterexample ce{observed[i], observed[j], {}, a, b};
                for (NodeId v : s) ce.conditioning.push_back(observed[v.index]);
                result.equivalent = false;
                result.counterexample = std::move(ce);
                return true;
            });
        }
    }
    return result;
}

std::uint64_t digest(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::optional<std::string> soundness_mismatch(const MixedGraph& pi, const MixedGraph& fhd) {
    if (pi.nodes().labels() != fhd.nodes().labels()) return "node sets differ";
    for (std::size_t i = 0; i < pi.size(); ++i) {
        for (std::size_t j = i + 1; j < pi.size(); ++j) {
            NodeId a(i), b(j);
            const std::string pair = pi.label(a) + "-" + pi.label(b);
            if (pi.adjacent(a, b) != fhd.adjacent(a, b))
                return "adjacency of " + pair + (pi.adjacent(a, b) ? " only in CI output" : " only in FHD");
            if (!pi.adjacent(a, b)) continue;
            for (auto [at, other] : {std::pair{a, b}, std::pair{b, a}}) {
                const EndMark m = pi.mark_at(at, other);
                if (m != EndMark::circle && m != fhd.mark_at(at, other))
                    return "mark at " + pi.label(at) + " on " + pair + ": CI '" + mark_symbol(m) + "' vs FHD '" +
                           mark_symbol(fhd.mark_at(at, other)) + "'";
            }
        }
    }
    return std::nullopt;
}

TrialRecord run_trial_on(const Dag& truth, std::size_t trial_index, std::size_t max_s, bool cross_check,
                         std::size_t node_budget) {
    TrialRecord rec;
    rec.index = trial_index;
    rec.observed = truth.observed().size();
    rec.hidden = truth.hidden().size();
    rec.truth_text = print_graph(truth);
    rec.truth_digest = digest(rec.truth_text);

    try {
        const MixedGraph fhd = build_fhd(truth, node_budget);
        rec.fhd_digest = digest(print_graph(fhd));
        rec.forbidden_chain_free = !find_forbidden_collider_chain(fhd).has_value();

        PartialIPG pi;
        try {
            pi = run_ci(OracleSource{truth});
        } catch (const CiContradiction& e) {
            rec.status = "contradiction";
            rec.detail = e.what();
            return rec;
        }
        rec.pipg_text = print_graph(pi.graph);
        rec.pipg_digest = digest(rec.pipg_text);
        const auto mismatch = soundness_mismatch(pi.graph, fhd);
        rec.ci_sound = !mismatch;
        if (mismatch) rec.detail = "ci-vs-fhd: " + *mismatch;

        BeliefNetwork bn;
        try {
            bn = run_ci_to_bn(pi, &rec.completion);
        } catch (const NoValidOrientation& e) {
            rec.status = "no-valid-orientation";
            rec.detail = e.what();
            return rec;
        }
        rec.bn_text = print_graph(bn.dag);
        rec.bn_digest = digest(rec.bn_text);
        rec.acyclic = bn.dag.topological_order().size() == bn.dag.size();

        std::vector<std::string> labels;
        for (NodeId v : truth.observed()) labels.push_back(truth.label(v));
        const EquivalenceResult eq = independence_equivalent(truth, bn, labels, max_s);
        rec.equivalent = eq.equivalent;
        rec.counterexample = eq.counterexample;
        if (cross_check) {
            rec.cross_checked = true;
            const EquivalenceResult slow = independence_equivalent(truth, bn, labels, max_s, true);
            rec.oracle_agrees = slow.equivalent == eq.equivalent && slow.queries == eq.queries;
        }
    } catch (const std::exception& e) {
        rec.status = "error";
        rec.detail = e.what();
    }
    return rec;
}

TrialRecord run_trial(const TrialConfig& cfg, std::size_t trial_index) {
    const Dag truth = random_dag(cfg, trial_index);
    return run_trial_on(truth, trial_index, cfg.effective_max_condition_size(), trial_index % 10 == 0,
                        cfg.node_budget);
}

TrialReport run_trials(const TrialConfig& cfg) {
    cfg.validate();
    TrialReport report;
    report.config = cfg;
    report.trials.resize(cfg.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.trials; i = next++) report.trials[i] = run_trial(cfg, i);
    };
    const std::size_t workers = std::min(cfg.threads, std::max<std::size_t>(cfg.trials, 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    return report;
}

std::size_t TrialReport::acyclic_count() const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.acyclic; }));
}
std::size_t TrialReport::equivalent_count() const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.equivalent; }));
}
std::size_t TrialReport::sound_count() const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.ci_sound; }));
}
std::size_t TrialReport::forbidden_chain_count() const {
    return static_cast<std::size_t>(
        std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.forbidden_chain_free; }));
}
std::size_t TrialReport::failure_count() const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.passed(); }));
}

std::string format_report(const TrialReport& report) {
    const TrialConfig& c = report.config;
    std::ostringstream out;
    const std::size_t max_s = c.effective_max_condition_size();
    out << "# cibn trial report v1\n";
    out << "config n_observed=" << c.n_observed << " n_hidden=" << c.n_hidden << " edge_probability=" << c.edge_probability
        << " seed=" << c.seed << " trials=" << c.trials
        << " max_condition_size=" << (max_s == kUnlimited ? std::string("unlimited") : std::to_string(max_s)) << '\n';
    for (const auto& t : report.trials) {
        out << "trial " << t.index << " status=" << t.status << " truth=" << hex(t.truth_digest)
            << " fhd=" << hex(t.fhd_digest) << " pipg=" << hex(t.pipg_digest) << " bn=" << hex(t.bn_digest)
            << " acyclic=" << t.acyclic << " equivalent=" << t.equivalent << " ci_sound=" << t.ci_sound
            << " forbidden_chain=" << !t.forbidden_chain_free << " cross_checked=" << t.cross_checked
            << " oracle_agrees=" << t.oracle_agrees << " cycle_rejections=" << t.completion.cycle_rejections
            << " counterexample=" << (t.counterexample ? "\"" + t.counterexample->describe() + "\"" : std::string("-"));
        if (!t.detail.empty()) out << " detail=\"" << t.detail << "\"";
        out << '\n';
    }
    out << "summary trials=" << report.trials.size() << " acyclic=" << report.acyclic_count()
        << " equivalent=" << report.equivalent_count() << " ci_sound=" << report.sound_count()
        << " forbidden_chain=" << report.forbidden_chain_count() << " failures=" << report.failure_count() << '\n';
    return out.str();
}

std::vector<std::string> write_counterexamples(const TrialReport& report, const std::string& dir) {
    std::vector<std::string> written;
    for (const auto& t : report.trials) {
        if (t.passed() && t.ci_sound && t.forbidden_chain_free) continue;
        std::filesystem::create_directories(dir);
        const std::string path = (std::filesystem::path(dir) / ("trial_" + std::to_string(t.index) + ".graph")).string();
        std::ofstream out(path);
        out << "# ground truth of failing trial " << t.index << " (status " << t.status << ")\n";
        if (t.counterexample) out << "# counterexample: " << t.counterexample->describe() << '\n';
        if (!t.detail.empty()) out << "# detail: " << t.detail << '\n';
        out << t.truth_text;
        written.push_back(path);
        auto side = [&](const std::string& suffix, const std::string& text) {
            if (text.empty()) return;
            const std::string p = (std::filesystem::path(dir) / ("trial_" + std::to_string(t.index) + suffix)).string();
            std::ofstream(p) << text;
            written.push_back(p);
        };
        side(".pipg.graph", t.pipg_text);
        side(".bn.graph", t.bn_text);
    }
    return written;
}

}  // namespace cibn
