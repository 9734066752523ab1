#include "senc/manager.hpp"

#include <algorithm>
#include <stdexcept>

namespace senc {

ForestManager::ForestManager(SencForest initial, ManagerConfig config)
    : config_(config) {
    if (config_.max_forests < 1)
        throw std::invalid_argument("ForestManager: max_forests must be >= 1");
    if (config_.retire_window < 1)
        throw std::invalid_argument("ForestManager: retire_window must be >= 1");
    for (ClassLabel c : initial.known_classes())
        total_classes_ = std::max(total_classes_, c);
    forests_.push_back({next_forest_id_++, std::move(initial), 0, 0});
}

ForestManager::ForestManager(std::vector<Slot> slots, ManagerConfig config,
                             ClassLabel total_classes, long window_predictions,
                             int next_forest_id)
    : forests_(std::move(slots)),
      config_(config),
      total_classes_(total_classes),
      window_predictions_(window_predictions),
      next_forest_id_(next_forest_id) {
    if (forests_.empty())
        throw std::invalid_argument("ForestManager: no forests");
}

std::size_t ForestManager::dimension() const {
    return forests_.front().forest.dimension();
}

FinalPrediction ForestManager::predict(const Instance& x,
                                       PredictionDetail* detail) {
    std::vector<ForestPrediction> votes;
    votes.reserve(forests_.size());
    for (const auto& slot : forests_) votes.push_back(slot.forest.predict(x));

    if (detail) {
        detail->forest_ids.clear();
        detail->votes = votes;
        for (const auto& slot : forests_) detail->forest_ids.push_back(slot.id);
    }

    FinalPrediction result{kNewClass};
    double best_conf = -1.0;
    for (std::size_t i = 0; i < votes.size(); ++i) {
        if (votes[i].label == kNewClass) continue;
        if (votes[i].confidence > best_conf) { // strict: ties keep lowest index
            best_conf = votes[i].confidence;
            result.label = votes[i].label;
        }
    }

    if (result.label != kNewClass) {
        for (std::size_t i = 0; i < votes.size(); ++i) {
            if (votes[i].label == result.label) {
                forests_[i].window_known += 1;
                forests_[i].period_known += 1;
            }
        }
    }
    window_predictions_ += 1;
    return result;
}

UpdateReport ForestManager::on_buffer_full(const std::vector<Instance>& buffer,
                                           Rng& rng) {
    if (buffer.empty())
        throw std::invalid_argument("on_buffer_full: empty buffer");

    UpdateReport report;
    const ClassLabel new_label = total_classes_ + 1;
    report.new_class_id = new_label;

    auto growing_slot =
        std::find_if(forests_.begin(), forests_.end(),
                     [](const Slot& s) { return s.forest.growing(); });

    if (growing_slot != forests_.end()) {
        growing_slot->forest.update(buffer, new_label, rng);
    } else {
        if (forest_count() == config_.max_forests) {
            // Rule 2: drop the forest least used since the last update.
            auto victim = std::min_element(
                forests_.begin(), forests_.end(),
                [](const Slot& a, const Slot& b) {
                    return a.period_known < b.period_known; // ties keep lowest index
                });
            report.retired_ids.push_back(victim->id);
            forests_.erase(victim);
        }
        Dataset training;
        training.dimension = dimension();
        training.items.reserve(buffer.size());
        for (const auto& x : buffer) training.items.push_back({x, new_label});
        forests_.push_back(
            {next_forest_id_++, SencForest::build(training, config_.forest, rng),
             0, 0});
        report.spawned = true;
    }

    total_classes_ = new_label;
    for (auto& slot : forests_) slot.period_known = 0;
    report.forest_count = forest_count();
    return report;
}

std::vector<int> ForestManager::maybe_retire() {
    std::vector<int> retired;
    if (window_predictions_ < config_.retire_window) return retired;

    for (auto it = forests_.begin();
         it != forests_.end() && forests_.size() > 1;) {
        if (!it->forest.growing() && it->window_known == 0) {
            retired.push_back(it->id);
            it = forests_.erase(it);
        } else {
            ++it;
        }
    }
    window_predictions_ = 0;
    for (auto& slot : forests_) slot.window_known = 0;
    return retired;
}

} // namespace senc
