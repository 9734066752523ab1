#pragma once

// Shared builders for the test suite: Gaussian blob datasets and hand-crafted
// trees/forests with fixed voting behavior.

#include <senc/core.hpp>
#include <senc/forest.hpp>
#include <senc/tree.hpp>

#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace senc::test {

/// 2-D dataset: per_class unit-variance Gaussian points around each center,
/// labeled 1..k in center order.
inline Dataset make_blobs(int per_class,
                          const std::vector<std::pair<double, double>>& centers,
                          Rng& rng) {
    Dataset data;
    data.dimension = 2;
    for (std::size_t c = 0; c < centers.size(); ++c)
        for (int i = 0; i < per_class; ++i)
            data.items.push_back({{centers[c].first + rng.next_gaussian(),
                                   centers[c].second + rng.next_gaussian()},
                                  static_cast<ClassLabel>(c + 1)});
    return data;
}

/// Single-leaf tree with an explicit payload and threshold. With an infinite
/// threshold it always votes its majority class; with threshold 1 the root
/// leaf (path 0) is an anomaly region, so probes outside the ball vote NEW.
inline SencTree leaf_tree(std::map<ClassLabel, int> freq, Instance center,
                          double radius, double threshold) {
    TreeNode leaf;
    leaf.split_attribute = -1;
    for (const auto& [label, count] : freq) leaf.size += count;
    leaf.class_freq = std::move(freq);
    leaf.center = center;
    leaf.radius = radius;
    leaf.path_length = 0;
    std::size_t dim = center.size();
    return SencTree({leaf}, threshold, 1, 300, dim);
}

/// Tree that votes `label` for every instance.
inline SencTree vote_tree(ClassLabel label, std::size_t dim) {
    return leaf_tree({{label, 1}}, Instance(dim, 0.0), 0.0,
                     std::numeric_limits<double>::infinity());
}

/// Tree that votes NEW_CLASS for every instance except the remote point its
/// ball sits on.
inline SencTree new_vote_tree(std::size_t dim) {
    return leaf_tree({{1, 1}}, Instance(dim, 1e9), 0.0, 1.0);
}

/// Forest with a fixed tally: `votes` maps label -> tree count, where
/// kNewClass entries vote NEW on any ordinary probe.
inline SencForest mock_forest(const std::map<ClassLabel, int>& votes,
                              std::size_t dim = 2) {
    std::vector<SencTree> trees;
    std::set<ClassLabel> known;
    for (const auto& [label, count] : votes) {
        for (int i = 0; i < count; ++i)
            trees.push_back(label == kNewClass ? new_vote_tree(dim)
                                               : vote_tree(label, dim));
        if (label != kNewClass) known.insert(label);
    }
    ForestParams params;
    params.num_trees = static_cast<int>(trees.size());
    if (known.empty()) known.insert(1); // detector-only forest still knows one
    return SencForest(std::move(trees), params, std::move(known), dim);
}

} // namespace senc::test
