#pragma once

#include <set>
#include <vector>

#include "senc/core.hpp"
#include "senc/rng.hpp"
#include "senc/tree.hpp"

namespace senc {

struct ForestParams {
    int num_trees = 100; // z
    int subsample = 200; // psi
    int min_size = 10;
    int max_nodes = 300;
    int class_cap = 3; // rho: classes one forest absorbs before a new one spawns
};

struct ForestPrediction {
    ClassLabel label = kNewClass;
    double confidence = 0.0; // votes for label / num_trees
};

/// An ensemble of completely random trees over independent subsamples that
/// classifies known classes and detects emerging ones. A forest keeps
/// absorbing new classes in place until it holds class_cap of them; after
/// that it is frozen and the manager spawns a fresh forest.
class SencForest {
public:
    /// Build num_trees trees, each on an independent subsample of size
    /// params.subsample. The training data is not retained.
    static SencForest build(const Dataset& data, const ForestParams& params,
                            Rng& rng);

    /// Plurality vote over the trees. NEW_CLASS is a votable label; ties
    /// prefer known classes over NEW_CLASS, then the smallest class id.
    ForestPrediction predict(const Instance& x) const;

    /// Absorb the buffered instances as one new class: per tree, draw a
    /// subsample of the buffer (all of it when smaller than psi), route it,
    /// grow every leaf that received instances, then recompute the tree's
    /// path-length threshold. Throws std::logic_error when not growing.
    void update(const std::vector<Instance>& buffer, ClassLabel new_label,
                Rng& rng);

    /// Mean route path length over the trees; lower = more anomalous.
    /// Diagnostic only, not used by prediction.
    double average_path_length(const Instance& x) const;

    bool growing() const {
        return static_cast<int>(known_classes_.size()) < params_.class_cap;
    }
    const std::set<ClassLabel>& known_classes() const { return known_classes_; }
    const ForestParams& params() const { return params_; }
    const std::vector<SencTree>& trees() const { return trees_; }
    std::size_t dimension() const { return dimension_; }

    // serialize.cpp reconstructs forests directly.
    SencForest(std::vector<SencTree> trees, ForestParams params,
               std::set<ClassLabel> known_classes, std::size_t dimension);

private:
    SencForest() = default;

    std::vector<SencTree> trees_;
    ForestParams params_;
    std::set<ClassLabel> known_classes_;
    std::size_t dimension_ = 0;
};

} // namespace senc
