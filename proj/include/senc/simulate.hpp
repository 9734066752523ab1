#pragma once

#include <optional>
#include <string>
#include <vector>

#include "senc/metrics.hpp"
#include "senc/scenario.hpp"
#include "senc/serialize.hpp"

namespace senc {

/// Everything needed to reproduce a run. Defaults are the reference
/// operating point: 100 trees on subsamples of 200, min leaf size 10, at
/// most 300 nodes per tree, 3 classes per forest, 3 forests, buffer 250.
struct RunConfig {
    ForestParams forest;
    int max_forests = 3;
    long retire_window = 1000;
    std::optional<int> buffer_override; // unset: scenario's buffer size
    double label_q = 0.0;               // fraction of buffer labels revealed
    std::string scenario = "two-period";
    std::uint64_t seed = 1;
    int trials = 10;
    std::size_t window_size = 100;

    int effective_buffer(const StreamScenario& s) const {
        return buffer_override.value_or(s.buffer_size);
    }
};

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);

/// Factory lookup: two-period, two-period-base, control, long-stream,
/// multi-new. Throws std::invalid_argument for unknown names.
StreamScenario scenario_by_name(const std::string& name);

/// Snapshot of one forest for per-period traces.
struct ForestStats {
    int id = 0;
    int num_classes = 0;
    double avg_leaves = 0.0;
    double avg_anomaly_leaves = 0.0;
    // Mean threshold over trees that have one; unset when no tree does.
    std::optional<double> avg_threshold;
};

struct PeriodSnapshot {
    long end_index = 0; // first record index after the period
    int forest_count = 0;
    std::vector<ForestStats> forests;
};

struct TrialResult {
    std::vector<PredictionRecord> records;
    StreamEvaluation evaluation;
    std::vector<UpdateEvent> update_events;
    std::vector<RetireEvent> retire_events;
    std::vector<PeriodSnapshot> period_snapshots;
    ClassLabel final_classes = 0;
};

/// One full pass: generate scenario data, train on the training slice, run
/// the stream, evaluate. All randomness derives from `seed`.
TrialResult run_trial(const RunConfig& config, const StreamScenario& scenario,
                      std::uint64_t seed);

struct Aggregate {
    double mean = 0.0;
    double two_se = 0.0; // two standard errors of the mean; 0 for one trial
};

struct SimulationSummary {
    int trials = 0;
    Aggregate en_accuracy;
    std::vector<Aggregate> phase_f_measures; // one per period
    std::vector<double> mean_forest_counts;  // at each period end
};

struct SimulationResult {
    std::vector<TrialResult> trial_results;
    SimulationSummary summary;
};

/// Repeat run_trial with per-trial seeds derived from config.seed and
/// aggregate mean +- 2 standard errors across trials.
SimulationResult run_simulation(const RunConfig& config,
                                const StreamScenario& scenario);

ForestStats forest_stats(int id, const SencForest& forest);

} // namespace senc
