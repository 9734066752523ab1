#pragma once

#include <vector>

#include "senc/forest.hpp"

namespace senc {

struct ManagerConfig {
    ForestParams forest;
    int max_forests = 3;
    // Rule-1 horizon: a non-growing forest contributing zero known-class
    // predictions over this many consecutive ensemble predictions retires.
    long retire_window = 1000;
};

struct FinalPrediction {
    ClassLabel label = kNewClass;
};

/// Per-forest votes behind one final prediction, for instrumentation.
struct PredictionDetail {
    std::vector<int> forest_ids;
    std::vector<ForestPrediction> votes;
};

struct UpdateReport {
    bool spawned = false; // false: in-place update of the growing forest
    std::vector<int> retired_ids;
    ClassLabel new_class_id = kNewClass;
    int forest_count = 0;
};

/// Owns the ordered set of forests and the global class counter. Final
/// predictions are NEW_CLASS only when every forest votes NEW_CLASS;
/// otherwise the highest-confidence known vote wins. Bounded memory comes
/// from two retirement rules: forests idle for a whole window retire, and
/// when spawning at capacity the forest least used since the last update
/// retires first.
class ForestManager {
public:
    ForestManager(SencForest initial, ManagerConfig config);

    /// Ensemble prediction; updates per-forest usage counters. A forest
    /// counts as used when its own vote equals the returned known label.
    FinalPrediction predict(const Instance& x, PredictionDetail* detail = nullptr);

    /// Absorb a full buffer as class m+1: update the growing forest in place
    /// when one exists, otherwise spawn a single-class forest (retiring the
    /// least-used forest first when at max_forests). Increments m by one and
    /// starts a new usage period.
    UpdateReport on_buffer_full(const std::vector<Instance>& buffer, Rng& rng);

    /// Rule-1 check, to be called after each prediction: once retire_window
    /// predictions complete, retire every non-growing forest with zero
    /// known-class predictions in that window (never the last forest).
    /// Returns ids retired now.
    std::vector<int> maybe_retire();

    int forest_count() const { return static_cast<int>(forests_.size()); }
    /// Global class counter m: highest class id assigned so far.
    ClassLabel total_classes() const { return total_classes_; }
    std::size_t dimension() const;
    const ManagerConfig& config() const { return config_; }

    struct Slot {
        int id = 0;
        SencForest forest;
        long window_known = 0; // known-class uses in the current rule-1 window
        long period_known = 0; // known-class uses since the last model update
    };
    const std::vector<Slot>& slots() const { return forests_; }

    // serialize.cpp reconstructs managers directly.
    ForestManager(std::vector<Slot> slots, ManagerConfig config,
                  ClassLabel total_classes, long window_predictions,
                  int next_forest_id);
    long window_predictions() const { return window_predictions_; }
    int next_forest_id() const { return next_forest_id_; }

private:
    std::vector<Slot> forests_;
    ManagerConfig config_;
    ClassLabel total_classes_ = 0;
    long window_predictions_ = 0;
    int next_forest_id_ = 0;
};

} // namespace senc
