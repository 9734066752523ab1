#include "senc/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace senc {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "sencforest-model";
constexpr int kVersion = 1;

json threshold_to_json(double t) {
    if (std::isfinite(t)) return t;
    return nullptr; // +infinity: "no anomaly regions"
}

double threshold_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

json tree_to_json(const SencTree& tree) {
    json nodes = json::array();
    for (int i = 0; i < tree.node_count(); ++i) {
        const TreeNode& n = tree.node(i);
        json jn;
        jn["a"] = n.split_attribute;
        if (n.is_leaf()) {
            jn["size"] = n.size;
            json freq = json::array();
            for (const auto& [label, count] : n.class_freq)
                freq.push_back(json::array({label, count}));
            jn["freq"] = std::move(freq);
            jn["c"] = n.center;
            jn["r"] = n.radius;
            jn["path"] = n.path_length;
        } else {
            jn["v"] = n.split_value;
            jn["l"] = n.left;
            jn["rt"] = n.right;
        }
        nodes.push_back(std::move(jn));
    }
    return json{{"threshold", threshold_to_json(tree.path_threshold())},
                {"nodes", std::move(nodes)}};
}

SencTree tree_from_json(const json& j, int min_size, int max_nodes,
                        std::size_t dimension) {
    std::vector<TreeNode> nodes;
    for (const json& jn : j.at("nodes")) {
        TreeNode n;
        n.split_attribute = jn.at("a").get<int>();
        if (n.split_attribute < 0) {
            n.size = jn.at("size").get<int>();
            for (const json& pair : jn.at("freq"))
                n.class_freq[pair.at(0).get<ClassLabel>()] = pair.at(1).get<int>();
            n.center = jn.at("c").get<Instance>();
            n.radius = jn.at("r").get<double>();
            n.path_length = jn.at("path").get<int>();
        } else {
            n.split_value = jn.at("v").get<double>();
            n.left = jn.at("l").get<int>();
            n.right = jn.at("rt").get<int>();
        }
        nodes.push_back(std::move(n));
    }
    return SencTree(std::move(nodes), threshold_from_json(j.at("threshold")),
                    min_size, max_nodes, dimension);
}

json forest_to_json(const SencForest& forest) {
    json trees = json::array();
    for (const auto& tree : forest.trees()) trees.push_back(tree_to_json(tree));
    return json{{"num_trees", forest.params().num_trees},
                {"subsample", forest.params().subsample},
                {"min_size", forest.params().min_size},
                {"max_nodes", forest.params().max_nodes},
                {"class_cap", forest.params().class_cap},
                {"dimension", forest.dimension()},
                {"known_classes", forest.known_classes()},
                {"trees", std::move(trees)}};
}

SencForest forest_from_json(const json& j) {
    ForestParams params;
    params.num_trees = j.at("num_trees").get<int>();
    params.subsample = j.at("subsample").get<int>();
    params.min_size = j.at("min_size").get<int>();
    params.max_nodes = j.at("max_nodes").get<int>();
    params.class_cap = j.at("class_cap").get<int>();
    const auto dimension = j.at("dimension").get<std::size_t>();
    std::set<ClassLabel> known;
    for (const json& c : j.at("known_classes")) known.insert(c.get<ClassLabel>());
    std::vector<SencTree> trees;
    for (const json& jt : j.at("trees"))
        trees.push_back(
            tree_from_json(jt, params.min_size, params.max_nodes, dimension));
    return SencForest(std::move(trees), params, std::move(known), dimension);
}

json manager_to_json(const ForestManager& manager) {
    json slots = json::array();
    for (const auto& slot : manager.slots())
        slots.push_back(json{{"id", slot.id},
                             {"window_known", slot.window_known},
                             {"period_known", slot.period_known},
                             {"forest", forest_to_json(slot.forest)}});
    return json{{"max_forests", manager.config().max_forests},
                {"retire_window", manager.config().retire_window},
                {"total_classes", manager.total_classes()},
                {"window_predictions", manager.window_predictions()},
                {"next_forest_id", manager.next_forest_id()},
                {"forests", std::move(slots)}};
}

ForestManager manager_from_json(const json& j) {
    std::vector<ForestManager::Slot> slots;
    for (const json& js : j.at("forests")) {
        ForestManager::Slot slot{js.at("id").get<int>(),
                                 forest_from_json(js.at("forest")),
                                 js.at("window_known").get<long>(),
                                 js.at("period_known").get<long>()};
        slots.push_back(std::move(slot));
    }
    if (slots.empty())
        throw std::runtime_error("model: no forests in file");
    ManagerConfig config;
    config.forest = slots.front().forest.params();
    config.max_forests = j.at("max_forests").get<int>();
    config.retire_window = j.at("retire_window").get<long>();
    return ForestManager(std::move(slots), config,
                         j.at("total_classes").get<ClassLabel>(),
                         j.at("window_predictions").get<long>(),
                         j.at("next_forest_id").get<int>());
}

std::string rng_to_string(const Rng& rng) {
    std::ostringstream out;
    rng.save_state(out);
    return out.str();
}

Rng rng_from_string(const std::string& s) {
    Rng rng(0);
    std::istringstream in(s);
    rng.load_state(in);
    return rng;
}

json header(const std::vector<std::string>& label_names) {
    return json{{"format", kFormat},
                {"version", kVersion},
                {"label_names", label_names}};
}

json parse_checked(std::istream& in) {
    json j = json::parse(in);
    if (!j.contains("format") || j.at("format") != kFormat)
        throw std::runtime_error("model: unrecognized format tag");
    if (!j.contains("version") || j.at("version").get<int>() != kVersion)
        throw std::runtime_error("model: unsupported version");
    return j;
}

std::vector<std::string> names_from(const json& j) {
    std::vector<std::string> names;
    for (const json& n : j.at("label_names")) names.push_back(n.get<std::string>());
    return names;
}

} // namespace

void save_model(std::ostream& out, const ForestManager& manager,
                const std::vector<std::string>& label_names) {
    json j = header(label_names);
    j["manager"] = manager_to_json(manager);
    out << j.dump(2) << '\n';
}

void save_model_file(const std::string& path, const ForestManager& manager,
                     const std::vector<std::string>& label_names) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("model: cannot write " + path);
    save_model(out, manager, label_names);
}

SavedModel load_model(std::istream& in) {
    const json j = parse_checked(in);
    return {manager_from_json(j.at("manager")), names_from(j)};
}

SavedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("model: cannot open " + path);
    return load_model(in);
}

void save_engine(std::ostream& out, const StreamEngine& engine,
                 const std::vector<std::string>& label_names) {
    json j = header(label_names);
    j["manager"] = manager_to_json(engine.manager());
    json buffer = json::array();
    for (const auto& candidate : engine.buffer()) {
        json jc{{"x", candidate.features}};
        if (candidate.true_label) jc["label"] = *candidate.true_label;
        buffer.push_back(std::move(jc));
    }
    j["stream"] = json{{"buffer_size", engine.config().buffer_size},
                       {"label_q", engine.config().label_q},
                       {"buffer", std::move(buffer)},
                       {"next_index", engine.processed()},
                       {"model_rng", rng_to_string(engine.model_rng())},
                       {"inject_rng", rng_to_string(engine.inject_rng())}};
    out << j.dump(2) << '\n';
}

SavedEngine load_engine(std::istream& in) {
    const json j = parse_checked(in);
    if (!j.contains("stream"))
        throw std::runtime_error("model: file has no stream state");
    const json& js = j.at("stream");

    StreamConfig config;
    config.buffer_size = js.at("buffer_size").get<int>();
    config.label_q = js.at("label_q").get<double>();

    std::vector<BufferedCandidate> buffer;
    for (const json& jc : js.at("buffer")) {
        BufferedCandidate candidate;
        candidate.features = jc.at("x").get<Instance>();
        if (jc.contains("label"))
            candidate.true_label = jc.at("label").get<ClassLabel>();
        buffer.push_back(std::move(candidate));
    }

    StreamEngine engine(manager_from_json(j.at("manager")), config,
                        rng_from_string(js.at("model_rng").get<std::string>()),
                        rng_from_string(js.at("inject_rng").get<std::string>()),
                        std::move(buffer), js.at("next_index").get<long>());
    return {std::move(engine), names_from(j)};
}

} // namespace senc
