#pragma once

#include "cibn/ci_to_bn.hpp"
#include "cibn/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cibn {

struct TrialConfig {
    std::size_t n_observed = 5;
    std::size_t n_hidden = 2;
    double edge_probability = 0.3;
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    /// Largest conditioning set in the equivalence check; nullopt picks the default
    /// (unlimited up to 7 observed nodes, 4 above).
    std::optional<std::size_t> max_condition_size;
    std::size_t node_budget = 16;
    /// Worker threads for run_trials. Output order never depends on it.
    std::size_t threads = 1;

    /// Throws std::invalid_argument on a bad configuration.
    void validate() const;
    std::size_t effective_max_condition_size() const;
};

/// Random DAG: observed nodes X0.. get ids first, hidden nodes H0.. follow. Edges run
/// forward in a shuffled order with the configured probability. Deterministic in
/// (seed, trial_index).
Dag random_dag(const TrialConfig& cfg, std::size_t trial_index);

struct Counterexample {
    std::string x;
    std::string y;
    std::vector<std::string> conditioning;
    bool separated_in_truth = false;
    bool separated_in_bn = false;

    std::string describe() const;
};

struct EquivalenceResult {
    bool equivalent = true;
    std::optional<Counterexample> counterexample;
    std::size_t queries = 0;
};

/// Compares d-separation in `truth` and `bn.dag` over every observed pair and every
/// conditioning set up to `max_s` (smallest sets first). Observed nodes are matched by
/// label. `exhaustive` selects the path-enumeration oracle.
EquivalenceResult independence_equivalent(const Dag& truth, const BeliefNetwork& bn,
                                          const std::vector<std::string>& observed, std::size_t max_s,
                                          bool exhaustive = false);

/// Stable 64-bit FNV-1a digest of a canonical serialization.
std::uint64_t digest(const std::string& canonical);

/// Compares a CI result with the including path graph: same adjacencies, and every
/// non-circle mark equal to the corresponding FHD mark. Returns a description of the
/// first mismatch.
std::optional<std::string> soundness_mismatch(const MixedGraph& pi, const MixedGraph& fhd);

struct TrialRecord {
    std::size_t index = 0;
    std::uint64_t truth_digest = 0;
    std::uint64_t fhd_digest = 0;
    std::uint64_t pipg_digest = 0;
    std::uint64_t bn_digest = 0;
    std::size_t observed = 0;
    std::size_t hidden = 0;
    bool acyclic = false;
    bool equivalent = false;
    bool ci_sound = false;
    bool forbidden_chain_free = false;
    bool cross_checked = false;
    bool oracle_agrees = true;
    /// "ok", "contradiction", "no-valid-orientation" or "error".
    std::string status = "ok";
    std::string detail;
    std::optional<Counterexample> counterexample;
    CompletionStats completion;

    // Kept for counterexample files.
    std::string truth_text;
    std::string pipg_text;
    std::string bn_text;

    bool passed() const { return status == "ok" && acyclic && equivalent && oracle_agrees; }
};

struct TrialReport {
    TrialConfig config;
    std::vector<TrialRecord> trials;

    std::size_t acyclic_count() const;
    std::size_t equivalent_count() const;
    std::size_t sound_count() const;
    std::size_t forbidden_chain_count() const;
    std::size_t failure_count() const;
};

/// Runs the whole pipeline on one generated instance. Failures are recorded, not thrown.
/// One trial in ten (index % 10 == 0) re-checks equivalence with the path oracle.
TrialRecord run_trial(const TrialConfig& cfg, std::size_t trial_index);
/// Same pipeline on a caller-supplied ground truth.
TrialRecord run_trial_on(const Dag& truth, std::size_t trial_index, std::size_t max_s, bool cross_check,
                         std::size_t node_budget = 16);

TrialReport run_trials(const TrialConfig& cfg);

/// Deterministic text: header, one line per trial, summary block.
std::string format_report(const TrialReport& report);

/// Writes one graph file per failing trial into `dir`; returns the paths written.
std::vector<std::string> write_counterexamples(const TrialReport& report, const std::string& dir);

}  // namespace cibn
