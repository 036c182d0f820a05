#include "cibn/cli.hpp"

#include "cibn/ci_engine.hpp"
#include "cibn/ci_to_bn.hpp"
#include "cibn/graph_file.hpp"
#include "cibn/latent.hpp"
#include "cibn/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cibn {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
    if (!f) throw InputError("write failed: " + path);
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) out << text;
    else write_file(path, text);
}

struct DiscoverArgs {
    std::string data;
    std::string oracle;
    double alpha = 0.05;
    std::size_t max_cond = 3;
    std::string out_pipg;
    std::string out_bn;
    std::string dot;
    std::string audit;
};

int cmd_discover(const DiscoverArgs& a, std::ostream& out, std::ostream& err) {
    std::optional<std::ofstream> audit;
    IndependenceSource src;
    if (!a.oracle.empty()) {
        src = OracleSource{to_dag(read_graph_file(a.oracle))};
    } else {
        StatisticalSource s{load_csv(a.data), a.alpha, a.max_cond, nullptr};
        if (!a.audit.empty()) {
            audit.emplace(a.audit);
            if (!*audit) throw InputError("cannot write " + a.audit);
            s.audit = &*audit;
        }
        src = std::move(s);
    }

    PartialIPG pi;
    try {
        pi = run_ci(src);
    } catch (const CiContradiction& e) {
        err << "error: CI contradiction: " << e.what() << '\n';
        return kExitContradiction;
    }
    emit(a.out_pipg, print_graph(pi.graph), out);
    if (!a.dot.empty()) write_file(a.dot, to_dot(pi.graph, "pipg"));

    BeliefNetwork bn;
    try {
        bn = run_ci_to_bn(pi);
    } catch (const NoValidOrientation& e) {
        err << "error: no valid orientation: " << e.what() << '\n';
        for (const auto& c : e.constraints()) err << "error:   constraint noncollider " << c << '\n';
        return kExitNoOrientation;
    }
    if (!a.out_bn.empty()) write_file(a.out_bn, print_graph(bn.dag));
    return kExitOk;
}

struct VerifyArgs {
    TrialConfig cfg;
    std::string report;
    std::string counterexamples = "counterexamples";
    std::string debug_complete;
    std::string out_bn;
};

// Runs only the completion step on a hand-written partial graph.
int debug_complete(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    const MixedGraph pi = to_mixed(read_graph_file(a.debug_complete));
    CompletionStats stats;
    MixedGraph done;
    try {
        done = complete_orientation(pi, &stats);
    } catch (const NoValidOrientation& e) {
        err << "error: no valid orientation: " << e.what() << '\n';
        for (const auto& c : e.constraints()) err << "error:   constraint noncollider " << c << '\n';
        err << "error:   decisions=" << stats.decisions << " backtracks=" << stats.backtracks
            << " cycle_rejections=" << stats.cycle_rejections
            << " constraint_rejections=" << stats.constraint_rejections << '\n';
        return kExitNoOrientation;
    }
    emit(a.out_bn, print_graph(expand_bidirected(done).dag), out);
    return kExitOk;
}

int cmd_verify(VerifyArgs a, std::ostream& out, std::ostream& err) {
    if (!a.debug_complete.empty()) return debug_complete(a, out, err);
    try {
        a.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const TrialReport report = run_trials(a.cfg);
    emit(a.report, format_report(report), out);
    if (report.failure_count() == 0) return kExitOk;

    const auto files = write_counterexamples(report, a.counterexamples);
    err << "error: " << report.failure_count() << " of " << report.trials.size() << " trials failed\n";
    for (const auto& f : files) err << "error:   wrote " << f << '\n';
    return kExitTrialFailures;
}

struct FhdArgs {
    std::string in;
    std::string out;
    std::size_t budget = kDefaultNodeBudget;
};

int cmd_fhd(const FhdArgs& a, std::ostream& out) {
    const Dag g = to_dag(read_graph_file(a.in));
    emit(a.out, print_graph(build_fhd(g, a.budget)), out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal structure discovery with hidden variables"};
    app.set_config("--config", "", "TOML/INI file with option defaults");
    app.require_subcommand(1);

    DiscoverArgs da;
    auto* discover = app.add_subcommand("discover", "run CI and build a belief network");
    auto* data = discover->add_option("--data", da.data, "CSV sample file")->check(CLI::ExistingFile);
    auto* oracle = discover->add_option("--oracle", da.oracle, "ground-truth graph file")->check(CLI::ExistingFile);
    data->excludes(oracle);
    discover->add_option("--alpha", da.alpha, "significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    discover->add_option("--max-cond", da.max_cond, "largest conditioning set (data mode)")->capture_default_str();
    discover->add_option("--out-pipg", da.out_pipg, "partial graph output (default stdout)");
    discover->add_option("--out-bn", da.out_bn, "belief network output");
    discover->add_option("--dot", da.dot, "DOT rendering of the partial graph");
    discover->add_option("--audit", da.audit, "log every independence test here (data mode)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "random ground truths through the whole pipeline");
    verify->add_option("--n-observed", va.cfg.n_observed)->capture_default_str();
    verify->add_option("--n-hidden", va.cfg.n_hidden)->capture_default_str();
    verify->add_option("--edge-prob", va.cfg.edge_probability)->capture_default_str();
    verify->add_option("--seed", va.cfg.seed)->capture_default_str();
    verify->add_option("--trials", va.cfg.trials)->capture_default_str();
    verify->add_option("--max-cond", va.cfg.max_condition_size, "largest conditioning set in the equivalence check");
    verify->add_option("--budget", va.cfg.node_budget, "node limit for exhaustive path search")->capture_default_str();
    verify->add_option("--threads", va.cfg.threads)->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--report", va.report, "report file (default stdout)");
    verify->add_option("--counterexamples", va.counterexamples, "directory for failing trials")->capture_default_str();
    verify->add_option("--debug-complete", va.debug_complete, "only complete the given partial graph")
        ->check(CLI::ExistingFile);
    verify->add_option("--out-bn", va.out_bn, "belief network output for --debug-complete");

    FhdArgs fa;
    auto* fhd = app.add_subcommand("fhd", "including path graph of a DAG with hidden nodes");
    fhd->add_option("--in", fa.in, "graph file")->required()->check(CLI::ExistingFile);
    fhd->add_option("--out", fa.out, "output file (default stdout)");
    fhd->add_option("--budget", fa.budget, "node limit for exhaustive path search")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (discover->parsed() && da.data.empty() && da.oracle.empty())
            throw CLI::ValidationError("discover needs --data or --oracle");
        if (discover->parsed() && (da.alpha <= 0.0 || da.alpha >= 1.0))
            throw CLI::ValidationError("--alpha must lie strictly between 0 and 1");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (discover->parsed()) return cmd_discover(da, out, err);
        if (verify->parsed()) return cmd_verify(va, out, err);
        return cmd_fhd(fa, out);
    } catch (const GraphFileError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const CsvError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const GraphError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: unexpected failure: " << e.what() << '\n';
    }
    return kExitInput;
}

}  // namespace cibn
