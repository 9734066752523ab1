#include "senc/forest.hpp"

#include <map>
#include <stdexcept>

namespace senc {

SencForest::SencForest(std::vector<SencTree> trees, ForestParams params,
                       std::set<ClassLabel> known_classes, std::size_t dimension)
    : trees_(std::move(trees)),
      params_(params),
      known_classes_(std::move(known_classes)),
      dimension_(dimension) {}

SencForest SencForest::build(const Dataset& data, const ForestParams& params,
                             Rng& rng) {
    if (data.empty())
        throw std::invalid_argument("SencForest::build: empty dataset");
    if (params.num_trees < 1 || params.subsample < 1 || params.min_size < 1 ||
        params.max_nodes < 1 || params.class_cap < 1)
        throw std::invalid_argument("SencForest::build: parameters must be >= 1");

    SencForest forest;
    forest.params_ = params;
    forest.dimension_ = data.dimension;
    forest.trees_.reserve(static_cast<std::size_t>(params.num_trees));
    for (int i = 0; i < params.num_trees; ++i) {
        const Dataset sub =
            subsample(data, static_cast<std::size_t>(params.subsample), rng);
        forest.trees_.push_back(
            SencTree::build(sub, params.min_size, params.max_nodes, rng));
    }
    for (const auto& item : data.items) forest.known_classes_.insert(item.label);
    return forest;
}

ForestPrediction SencForest::predict(const Instance& x) const {
    std::map<ClassLabel, int> tally;
    for (const auto& tree : trees_) ++tally[tree.vote(x).label];

    ClassLabel best = kNewClass;
    int best_count = -1;
    for (const auto& [label, count] : tally) {
        // Ascending map order: on equal counts the smallest known id wins,
        // and any known class displaces NEW_CLASS.
        if (count > best_count ||
            (count == best_count && best == kNewClass && label != kNewClass)) {
            best = label;
            best_count = count;
        }
    }
    return {best,
            static_cast<double>(best_count) / static_cast<double>(trees_.size())};
}

void SencForest::update(const std::vector<Instance>& buffer,
                        ClassLabel new_label, Rng& rng) {
    if (!growing())
        throw std::logic_error("SencForest::update: forest is not growing");
    if (buffer.empty())
        throw std::invalid_argument("SencForest::update: empty buffer");

    for (auto& tree : trees_) {
        const std::vector<Instance> drawn = subsample_instances(
            buffer, static_cast<std::size_t>(params_.subsample), rng);

        // Group by destination leaf before any growth mutates the tree.
        std::map<int, Dataset> groups;
        for (const auto& x : drawn) {
            const int leaf = tree.route(x).leaf_id;
            Dataset& g = groups[leaf];
            g.dimension = dimension_;
            g.items.push_back({x, new_label});
        }
        for (auto& [leaf_id, batch] : groups) tree.grow_leaf(leaf_id, batch, rng);
        tree.recompute_threshold();
    }
    known_classes_.insert(new_label);
}

double SencForest::average_path_length(const Instance& x) const {
    long sum = 0;
    for (const auto& tree : trees_) sum += tree.route(x).path_length;
    return static_cast<double>(sum) / static_cast<double>(trees_.size());
}

} // namespace senc
