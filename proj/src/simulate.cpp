#include "senc/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace senc {

namespace {

using nlohmann::json;

} // namespace

std::string run_config_to_json(const RunConfig& config) {
    json j{{"num_trees", config.forest.num_trees},
           {"subsample", config.forest.subsample},
           {"min_size", config.forest.min_size},
           {"max_nodes", config.forest.max_nodes},
           {"class_cap", config.forest.class_cap},
           {"max_forests", config.max_forests},
           {"retire_window", config.retire_window},
           {"label_q", config.label_q},
           {"scenario", config.scenario},
           {"seed", config.seed},
           {"trials", config.trials},
           {"window_size", config.window_size}};
    if (config.buffer_override) j["buffer_size"] = *config.buffer_override;
    return j.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunConfig config;
    config.forest.num_trees = j.value("num_trees", config.forest.num_trees);
    config.forest.subsample = j.value("subsample", config.forest.subsample);
    config.forest.min_size = j.value("min_size", config.forest.min_size);
    config.forest.max_nodes = j.value("max_nodes", config.forest.max_nodes);
    config.forest.class_cap = j.value("class_cap", config.forest.class_cap);
    config.max_forests = j.value("max_forests", config.max_forests);
    config.retire_window = j.value("retire_window", config.retire_window);
    if (j.contains("buffer_size"))
        config.buffer_override = j.at("buffer_size").get<int>();
    config.label_q = j.value("label_q", config.label_q);
    config.scenario = j.value("scenario", config.scenario);
    config.seed = j.value("seed", config.seed);
    config.trials = j.value("trials", config.trials);
    config.window_size = j.value("window_size", config.window_size);
    return config;
}

StreamScenario scenario_by_name(const std::string& name) {
    if (name == "two-period") return two_period_scenario(false);
    if (name == "two-period-base") return two_period_scenario(true);
    if (name == "control") return single_period_control_scenario();
    if (name == "long-stream") return long_stream_scenario();
    if (name == "multi-new") return multi_new_scenario();
    throw std::invalid_argument("unknown scenario: " + name);
}

ForestStats forest_stats(int id, const SencForest& forest) {
    ForestStats stats;
    stats.id = id;
    stats.num_classes = static_cast<int>(forest.known_classes().size());
    long leaves = 0;
    long anomaly_leaves = 0;
    double threshold_sum = 0.0;
    int threshold_count = 0;
    for (const auto& tree : forest.trees()) {
        leaves += tree.leaf_count();
        anomaly_leaves += tree.anomaly_leaf_count();
        if (tree.has_anomaly_regions()) {
            threshold_sum += tree.path_threshold();
            threshold_count += 1;
        }
    }
    const double z = static_cast<double>(forest.trees().size());
    stats.avg_leaves = static_cast<double>(leaves) / z;
    stats.avg_anomaly_leaves = static_cast<double>(anomaly_leaves) / z;
    if (threshold_count > 0)
        stats.avg_threshold = threshold_sum / threshold_count;
    return stats;
}

TrialResult run_trial(const RunConfig& config, const StreamScenario& scenario,
                      std::uint64_t seed) {
    Rng root(seed);
    Rng data_rng = root.split();
    Rng model_rng = root.split();
    Rng inject_rng = root.split();

    const ScenarioStream stream = build_scenario_stream(scenario, data_rng);

    SencForest initial =
        SencForest::build(stream.training, config.forest, model_rng);
    ForestManager manager(std::move(initial),
                          {config.forest, config.max_forests,
                           config.retire_window});
    StreamEngine engine(std::move(manager),
                        {config.effective_buffer(scenario), config.label_q},
                        model_rng, inject_rng);

    TrialResult result;
    result.records.reserve(stream.items.size());

    std::size_t next_period = 0;
    auto snapshot_if_boundary = [&](std::size_t processed) {
        while (next_period < stream.period_starts.size() &&
               processed == (next_period + 1 < stream.period_starts.size()
                                 ? static_cast<std::size_t>(
                                       stream.period_starts[next_period + 1])
                                 : stream.items.size())) {
            PeriodSnapshot snap;
            snap.end_index = static_cast<long>(processed);
            snap.forest_count = engine.manager().forest_count();
            for (const auto& slot : engine.manager().slots())
                snap.forests.push_back(forest_stats(slot.id, slot.forest));
            result.period_snapshots.push_back(std::move(snap));
            next_period += 1;
        }
    };

    for (std::size_t i = 0; i < stream.items.size(); ++i) {
        result.records.push_back(
            engine.process(stream.items[i].features, stream.items[i].true_label));
        snapshot_if_boundary(i + 1);
    }

    result.evaluation =
        evaluate_stream(result.records, stream.period_starts, config.window_size);
    result.update_events = engine.update_events();
    result.retire_events = engine.retire_events();
    result.final_classes = engine.manager().total_classes();
    return result;
}

namespace {

Aggregate aggregate_of(const std::vector<double>& values) {
    Aggregate a;
    const double n = static_cast<double>(values.size());
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        const double sd = std::sqrt(ss / (n - 1.0));
        a.two_se = 2.0 * sd / std::sqrt(n);
    }
    return a;
}

} // namespace

SimulationResult run_simulation(const RunConfig& config,
                                const StreamScenario& scenario) {
    if (config.trials < 1)
        throw std::invalid_argument("run_simulation: trials must be >= 1");

    SimulationResult result;
    Rng master(config.seed);
    for (int t = 0; t < config.trials; ++t)
        result.trial_results.push_back(
            run_trial(config, scenario, master.next_u64()));

    result.summary.trials = config.trials;

    std::vector<double> en;
    for (const auto& trial : result.trial_results)
        en.push_back(trial.evaluation.overall.en_accuracy);
    result.summary.en_accuracy = aggregate_of(en);

    const std::size_t periods = scenario.periods.size();
    for (std::size_t p = 0; p < periods; ++p) {
        std::vector<double> fs;
        for (const auto& trial : result.trial_results)
            fs.push_back(trial.evaluation.detection_phases[p].f_measure);
        result.summary.phase_f_measures.push_back(aggregate_of(fs));

        double count_sum = 0.0;
        for (const auto& trial : result.trial_results)
            count_sum += trial.period_snapshots[p].forest_count;
        result.summary.mean_forest_counts.push_back(
            count_sum / static_cast<double>(config.trials));
    }
    return result;
}

} // namespace senc
