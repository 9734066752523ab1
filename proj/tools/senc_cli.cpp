#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "senc/csv.hpp"
#include "senc/simulate.hpp"

namespace {

using nlohmann::json;

json record_to_json(const senc::PredictionRecord& r) {
    json j{{"index", r.index},
           {"predicted", r.predicted},
           {"model_updated", r.model_updated},
           {"emerging", r.emerging}};
    if (r.true_label) j["true_label"] = *r.true_label;
    return j;
}

senc::PredictionRecord record_from_json(const json& j) {
    senc::PredictionRecord r;
    r.index = j.at("index").get<long>();
    r.predicted = j.at("predicted").get<senc::ClassLabel>();
    r.model_updated = j.at("model_updated").get<bool>();
    r.emerging = j.at("emerging").get<bool>();
    if (j.contains("true_label"))
        r.true_label = j.at("true_label").get<senc::ClassLabel>();
    return r;
}

void write_records(const std::string& path,
                   const std::vector<senc::PredictionRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

std::vector<senc::PredictionRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<senc::PredictionRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json(json::parse(line)));
    }
    return records;
}

json window_to_json(const senc::WindowMetrics& w) {
    return json{{"start", w.start},
                {"end", w.end},
                {"n", w.n},
                {"correct_emerging", w.correct_emerging},
                {"correct_known", w.correct_known},
                {"en_accuracy", w.en_accuracy}};
}

json detection_to_json(const senc::DetectionMetrics& d) {
    return json{{"start", d.start},
                {"end", d.end},
                {"true_positives", d.true_positives},
                {"false_positives", d.false_positives},
                {"false_negatives", d.false_negatives},
                {"precision", d.precision},
                {"recall", d.recall},
                {"f_measure", d.f_measure}};
}

json evaluation_to_json(const senc::StreamEvaluation& eval) {
    json windows = json::array();
    for (const auto& w : eval.windows) windows.push_back(window_to_json(w));
    json phases = json::array();
    for (const auto& p : eval.detection_phases)
        phases.push_back(detection_to_json(p));
    return json{{"overall", window_to_json(eval.overall)},
                {"windows", std::move(windows)},
                {"detection_phases", std::move(phases)}};
}

void write_windows_csv(const std::string& path,
                       const std::vector<senc::WindowMetrics>& windows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "start,end,n,correct_emerging,correct_known,en_accuracy\n";
    for (const auto& w : windows)
        out << w.start << ',' << w.end << ',' << w.n << ',' << w.correct_emerging
            << ',' << w.correct_known << ',' << w.en_accuracy << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

json forest_stats_to_json(const senc::ForestStats& s) {
    json j{{"id", s.id},
           {"classes", s.num_classes},
           {"avg_leaves", s.avg_leaves},
           {"avg_anomaly_leaves", s.avg_anomaly_leaves}};
    if (s.avg_threshold) j["avg_threshold"] = *s.avg_threshold;
    return j;
}

json trial_to_json(const senc::TrialResult& trial) {
    json updates = json::array();
    for (const auto& e : trial.update_events) {
        json retired = json::array();
        for (int id : e.report.retired_ids) retired.push_back(id);
        updates.push_back(json{{"index", e.index},
                               {"spawned", e.report.spawned},
                               {"retired", std::move(retired)},
                               {"new_class", e.report.new_class_id},
                               {"forest_count", e.report.forest_count}});
    }
    json retires = json::array();
    for (const auto& e : trial.retire_events) {
        json ids = json::array();
        for (int id : e.retired_ids) ids.push_back(id);
        retires.push_back(json{{"index", e.index}, {"retired", std::move(ids)}});
    }
    json snapshots = json::array();
    for (const auto& snap : trial.period_snapshots) {
        json forests = json::array();
        for (const auto& fs : snap.forests)
            forests.push_back(forest_stats_to_json(fs));
        snapshots.push_back(json{{"end_index", snap.end_index},
                                 {"forest_count", snap.forest_count},
                                 {"forests", std::move(forests)}});
    }
    return json{{"evaluation", evaluation_to_json(trial.evaluation)},
                {"updates", std::move(updates)},
                {"idle_retirements", std::move(retires)},
                {"period_snapshots", std::move(snapshots)},
                {"final_classes", trial.final_classes}};
}

json aggregate_to_json(const senc::Aggregate& a) {
    return json{{"mean", a.mean}, {"two_se", a.two_se}};
}

int cmd_train(const std::string& data_path, bool header,
              const senc::RunConfig& config, const std::string& out_path) {
    const senc::LabeledCsv csv = senc::read_labeled_csv_file(data_path, header);
    senc::Rng rng(config.seed);
    senc::SencForest forest =
        senc::SencForest::build(csv.data, config.forest, rng);
    senc::ForestManager manager(
        std::move(forest),
        {config.forest, config.max_forests, config.retire_window});
    senc::save_model_file(out_path, manager, csv.labels.names());

    const senc::ForestStats stats =
        senc::forest_stats(0, manager.slots().front().forest);
    std::cout << "trained forest on " << csv.data.size() << " instances, "
              << csv.labels.size() << " classes\n"
              << "trees: " << config.forest.num_trees << '\n'
              << "avg leaves per tree: " << stats.avg_leaves << '\n'
              << "avg anomaly leaves per tree: " << stats.avg_anomaly_leaves
              << '\n';
    if (stats.avg_threshold)
        std::cout << "avg path-length threshold: " << *stats.avg_threshold
                  << '\n';
    std::cout << "model written to " << out_path << '\n';
    return 0;
}

int cmd_stream(const std::string& model_path, const std::string& data_path,
               bool header, bool labeled, const senc::RunConfig& config,
               const std::string& records_path, const std::string& metrics_path,
               const std::string& windows_csv_path) {
    senc::SavedModel saved = senc::load_model_file(model_path);

    senc::StreamConfig stream_config;
    stream_config.buffer_size = config.buffer_override.value_or(250);
    stream_config.label_q = config.label_q;

    senc::Rng root(config.seed);
    senc::Rng model_rng = root.split();
    senc::Rng inject_rng = root.split();
    senc::StreamEngine engine(std::move(saved.manager), stream_config, model_rng,
                              inject_rng);

    std::vector<senc::PredictionRecord> records;
    if (labeled) {
        senc::LabelInterner labels;
        for (const auto& name : saved.label_names) labels.intern(name);
        const senc::LabeledCsv csv = senc::read_labeled_csv_file(data_path, header);
        for (std::size_t i = 0; i < csv.data.items.size(); ++i) {
            const auto& item = csv.data.items[i];
            const senc::ClassLabel id =
                labels.intern(csv.labels.name(item.label));
            records.push_back(engine.process(item.features, id));
        }
    } else {
        for (const auto& x : senc::read_unlabeled_csv_file(data_path, header))
            records.push_back(engine.process(x, std::nullopt));
    }

    write_records(records_path, records);
    std::cout << records.size() << " records written to " << records_path
              << "; model updates: " << engine.update_events().size() << '\n';

    if (labeled && !metrics_path.empty()) {
        const senc::StreamEvaluation eval = senc::evaluate_stream(
            records, {0}, config.window_size);
        write_text(metrics_path, evaluation_to_json(eval).dump(2) + "\n");
        std::cout << "overall joint accuracy: " << eval.overall.en_accuracy
                  << "; metrics written to " << metrics_path << '\n';
        if (!windows_csv_path.empty()) write_windows_csv(windows_csv_path, eval.windows);
    }
    return 0;
}

int cmd_simulate(const senc::RunConfig& config, const std::string& out_dir) {
    const senc::StreamScenario scenario = senc::scenario_by_name(config.scenario);
    std::filesystem::create_directories(out_dir);
    const auto path = [&](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    write_text(path("config.json"), senc::run_config_to_json(config));

    const senc::SimulationResult result = senc::run_simulation(config, scenario);

    json trials = json::array();
    for (int t = 0; t < config.trials; ++t) {
        const auto& trial = result.trial_results[static_cast<std::size_t>(t)];
        write_records(path("records_trial_" + std::to_string(t) + ".jsonl"),
                      trial.records);
        trials.push_back(trial_to_json(trial));
    }
    write_text(path("trials.json"), trials.dump(2) + "\n");

    json phases = json::array();
    for (const auto& a : result.summary.phase_f_measures)
        phases.push_back(aggregate_to_json(a));
    const json summary{{"scenario", scenario.name},
                       {"trials", result.summary.trials},
                       {"en_accuracy", aggregate_to_json(result.summary.en_accuracy)},
                       {"phase_f_measures", std::move(phases)},
                       {"mean_forest_counts", result.summary.mean_forest_counts}};
    write_text(path("summary.json"), summary.dump(2) + "\n");

    std::cout << "scenario " << scenario.name << ": " << config.trials
              << " trial(s)\n"
              << "joint accuracy mean " << result.summary.en_accuracy.mean
              << " +- " << result.summary.en_accuracy.two_se << '\n';
    for (std::size_t p = 0; p < result.summary.phase_f_measures.size(); ++p)
        std::cout << "period " << p + 1 << " detection F "
                  << result.summary.phase_f_measures[p].mean << " +- "
                  << result.summary.phase_f_measures[p].two_se << '\n';
    std::cout << "outputs in " << out_dir << '\n';
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& periods_arg,
               std::size_t window, const std::string& metrics_path,
               const std::string& windows_csv_path) {
    const std::vector<senc::PredictionRecord> records = read_records(records_path);

    std::vector<long> period_starts;
    std::stringstream ss(periods_arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) period_starts.push_back(std::stol(tok));
    if (period_starts.empty()) period_starts.push_back(0);

    const senc::StreamEvaluation eval =
        senc::evaluate_stream(records, period_starts, window);
    const std::string text = evaluation_to_json(eval).dump(2) + "\n";
    if (metrics_path.empty())
        std::cout << text;
    else
        write_text(metrics_path, text);
    if (!windows_csv_path.empty()) write_windows_csv(windows_csv_path, eval.windows);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SENCForest: stream classification with emerging-class detection"};
    app.require_subcommand(1);

    senc::RunConfig config;
    std::string config_path;
    int buffer_flag = 0;
    double q_percent = 0.0;

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        cmd->add_option("--seed", config.seed, "master random seed");
        cmd->add_option("--trees", config.forest.num_trees, "trees per forest");
        cmd->add_option("--subsample", config.forest.subsample,
                        "training subsample per tree");
        cmd->add_option("--min-size", config.forest.min_size,
                        "minimum instances to keep splitting");
        cmd->add_option("--max-nodes", config.forest.max_nodes,
                        "node budget per tree");
        cmd->add_option("--class-cap", config.forest.class_cap,
                        "classes one forest absorbs before spawning");
        cmd->add_option("--max-forests", config.max_forests,
                        "forest count ceiling");
        cmd->add_option("--retire-window", config.retire_window,
                        "predictions per idleness check");
        cmd->add_option("--buffer", buffer_flag,
                        "candidate buffer size (default: scenario's)");
        cmd->add_option("--q-labels", q_percent,
                        "percentage of buffered instances with labels revealed");
        cmd->add_option("--window", config.window_size,
                        "records per accuracy window");
    };

    // train
    auto* train = app.add_subcommand("train", "build a model from a labeled CSV");
    std::string data_path, out_path = "model.json";
    bool header = false;
    train->add_option("--data", data_path, "labeled CSV (label = last column)")
        ->required();
    train->add_flag("--header", header, "skip the first CSV row");
    train->add_option("--out", out_path, "model output path");
    add_model_flags(train);

    // stream
    auto* stream = app.add_subcommand("stream", "run a model over a CSV stream");
    std::string model_path, records_path = "records.jsonl", metrics_path,
                windows_csv;
    bool labeled = false;
    stream->add_option("--model", model_path, "model file from train")->required();
    stream->add_option("--data", data_path, "stream CSV")->required();
    stream->add_flag("--header", header, "skip the first CSV row");
    stream->add_flag("--labeled", labeled,
                     "stream CSV carries true labels (for evaluation)");
    stream->add_option("--out", records_path, "records output (JSON lines)");
    stream->add_option("--metrics", metrics_path, "metrics output (JSON)");
    stream->add_option("--windows-csv", windows_csv, "per-window accuracy CSV");
    add_model_flags(stream);

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "generate data, train, stream, and evaluate end to end");
    std::string out_dir = "simulate-out";
    simulate->add_option("--scenario", config.scenario,
                         "two-period | two-period-base | control | long-stream "
                         "| multi-new");
    simulate->add_option("--trials", config.trials, "independent trials");
    simulate->add_option("--out", out_dir, "output directory");
    add_model_flags(simulate);

    // report
    auto* report = app.add_subcommand("report", "recompute metrics from records");
    std::string periods_arg = "0";
    report->add_option("--records", records_path, "records JSON-lines file")
        ->required();
    report->add_option("--periods", periods_arg,
                       "comma-separated period start indices");
    report->add_option("--window", config.window_size,
                       "records per accuracy window");
    report->add_option("--metrics", metrics_path, "metrics output (stdout if unset)");
    report->add_option("--windows-csv", windows_csv, "per-window accuracy CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            senc::RunConfig from_file = senc::run_config_from_json(buf.str());
            // Flags the user actually passed override the file.
            for (CLI::App* cmd : {train, stream, simulate}) {
                if (!cmd->parsed()) continue;
                if (!cmd->count("--seed")) config.seed = from_file.seed;
                if (!cmd->count("--trees"))
                    config.forest.num_trees = from_file.forest.num_trees;
                if (!cmd->count("--subsample"))
                    config.forest.subsample = from_file.forest.subsample;
                if (!cmd->count("--min-size"))
                    config.forest.min_size = from_file.forest.min_size;
                if (!cmd->count("--max-nodes"))
                    config.forest.max_nodes = from_file.forest.max_nodes;
                if (!cmd->count("--class-cap"))
                    config.forest.class_cap = from_file.forest.class_cap;
                if (!cmd->count("--max-forests"))
                    config.max_forests = from_file.max_forests;
                if (!cmd->count("--retire-window"))
                    config.retire_window = from_file.retire_window;
                if (!cmd->count("--buffer"))
                    config.buffer_override = from_file.buffer_override;
                if (!cmd->count("--q-labels")) config.label_q = from_file.label_q;
                if (!cmd->count("--window"))
                    config.window_size = from_file.window_size;
                if (cmd == simulate) {
                    if (!cmd->count("--scenario"))
                        config.scenario = from_file.scenario;
                    if (!cmd->count("--trials")) config.trials = from_file.trials;
                }
            }
        }
        if (buffer_flag > 0) config.buffer_override = buffer_flag;
        if (q_percent > 0.0) config.label_q = q_percent / 100.0;
        if (config.label_q < 0.0 || config.label_q > 1.0)
            throw std::runtime_error("--q-labels must be in [0, 100]");

        if (train->parsed())
            return cmd_train(data_path, header, config, out_path);
        if (stream->parsed())
            return cmd_stream(model_path, data_path, header, labeled, config,
                              records_path, metrics_path, windows_csv);
        if (simulate->parsed()) return cmd_simulate(config, out_dir);
        if (report->parsed())
            return cmd_report(records_path, periods_arg, config.window_size,
                              metrics_path, windows_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
