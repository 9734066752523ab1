#include "senc/stream.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace senc {

std::vector<BufferedCandidate> inject_labels(std::vector<BufferedCandidate> buffer,
                                             double q, ClassLabel known_max,
                                             Rng& rng) {
    if (q < 0.0 || q > 1.0)
        throw std::invalid_argument("inject_labels: q must be in [0, 1]");
    const std::size_t k =
        static_cast<std::size_t>(std::floor(q * static_cast<double>(buffer.size())));
    if (k == 0) return buffer;

    std::vector<bool> selected(buffer.size(), false);
    for (std::size_t idx : sample_indices(buffer.size(), k, rng))
        selected[idx] = true;

    std::vector<BufferedCandidate> survivors;
    survivors.reserve(buffer.size());
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const bool revealed_known = selected[i] && buffer[i].true_label &&
                                    *buffer[i].true_label <= known_max;
        if (!revealed_known) survivors.push_back(std::move(buffer[i]));
    }
    return survivors;
}

StreamEngine::StreamEngine(ForestManager manager, StreamConfig config,
                           Rng model_rng, Rng inject_rng)
    : manager_(std::move(manager)),
      config_(config),
      model_rng_(model_rng),
      inject_rng_(inject_rng) {
    if (config_.buffer_size < 1)
        throw std::invalid_argument("StreamEngine: buffer_size must be >= 1");
    if (config_.label_q < 0.0 || config_.label_q > 1.0)
        throw std::invalid_argument("StreamEngine: label_q must be in [0, 1]");
    buffer_.reserve(static_cast<std::size_t>(config_.buffer_size));
}

StreamEngine::StreamEngine(ForestManager manager, StreamConfig config,
                           Rng model_rng, Rng inject_rng,
                           std::vector<BufferedCandidate> buffer, long next_index)
    : manager_(std::move(manager)),
      config_(config),
      model_rng_(model_rng),
      inject_rng_(inject_rng),
      buffer_(std::move(buffer)),
      next_index_(next_index) {}

PredictionRecord StreamEngine::process(const Instance& x,
                                       std::optional<ClassLabel> true_label) {
    PredictionRecord record;
    record.index = next_index_++;
    record.true_label = true_label;

    const ClassLabel known_max = manager_.total_classes();
    record.emerging = true_label.has_value() && *true_label > known_max;

    record.predicted = manager_.predict(x).label;

    if (record.predicted == kNewClass) {
        buffer_.push_back({x, true_label});
        if (static_cast<int>(buffer_.size()) >= config_.buffer_size) {
            std::vector<BufferedCandidate> survivors = inject_labels(
                std::move(buffer_), config_.label_q, known_max, inject_rng_);
            buffer_.clear();
            if (!survivors.empty()) {
                std::vector<Instance> batch;
                batch.reserve(survivors.size());
                for (auto& c : survivors) batch.push_back(std::move(c.features));
                UpdateReport report = manager_.on_buffer_full(batch, model_rng_);
                record.model_updated = true;
                update_events_.push_back({record.index, std::move(report)});
            }
        }
    }

    std::vector<int> retired = manager_.maybe_retire();
    if (!retired.empty())
        retire_events_.push_back({record.index, std::move(retired)});

    if (observer_) observer_(record);
    return record;
}

std::vector<PredictionRecord> StreamEngine::run(StreamSource& source) {
    std::vector<PredictionRecord> records;
    while (auto item = source.next()) {
        const long failing_index = next_index_;
        try {
            records.push_back(process(item->features, item->true_label));
        } catch (const std::exception& e) {
            throw std::runtime_error("stream instance " +
                                     std::to_string(failing_index) + ": " +
                                     e.what());
        }
    }
    return records;
}

void StreamEngine::set_observer(
    std::function<void(const PredictionRecord&)> observer) {
    observer_ = std::move(observer);
}

} // namespace senc
