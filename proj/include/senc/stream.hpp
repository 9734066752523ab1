#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "senc/manager.hpp"

namespace senc {

struct StreamConfig {
    int buffer_size = 250; // s: NEW_CLASS candidates held before an update
    double label_q = 0.0;  // fraction of the buffer whose true labels are revealed
};

struct PredictionRecord {
    long index = 0; // 0-based position in the stream
    ClassLabel predicted = kNewClass;
    std::optional<ClassLabel> true_label; // evaluation only
    bool model_updated = false;           // this instance triggered an update
    bool emerging = false; // true label unknown to the model when predicted
};

struct StreamItem {
    Instance features;
    std::optional<ClassLabel> true_label;
};

/// Pull-based instance supplier; next() returns nothing at end of stream.
class StreamSource {
public:
    virtual ~StreamSource() = default;
    virtual std::optional<StreamItem> next() = 0;
};

/// A buffered NEW_CLASS candidate. The true label rides along solely for
/// label injection; the model never reads it otherwise.
struct BufferedCandidate {
    Instance features;
    std::optional<ClassLabel> true_label;
};

/// Reveal the true labels of floor(q * |buffer|) uniformly chosen candidates
/// and drop the revealed ones that belong to an already-known class (id <=
/// known_max); everything else survives in original order. q == 0 consumes
/// no randomness and returns the buffer unchanged.
std::vector<BufferedCandidate> inject_labels(std::vector<BufferedCandidate> buffer,
                                             double q, ClassLabel known_max,
                                             Rng& rng);

struct UpdateEvent {
    long index = 0; // record index that triggered the update
    UpdateReport report;
};

struct RetireEvent {
    long index = 0;
    std::vector<int> retired_ids;
};

/// The deployment loop: predict each instance immediately, buffer NEW_CLASS
/// candidates, and hand the buffer to the manager the moment it reaches
/// capacity. Holds at most buffer_size stream instances at any time.
///
/// Label injection draws from its own random stream so that runs differing
/// only in q stay comparable instance for instance.
class StreamEngine {
public:
    StreamEngine(ForestManager manager, StreamConfig config, Rng model_rng,
                 Rng inject_rng);

    /// Predict one instance, then run buffering/update/retirement.
    PredictionRecord process(const Instance& x,
                             std::optional<ClassLabel> true_label);

    /// Drain the source in order. Per-instance errors are rethrown with the
    /// failing index prepended.
    std::vector<PredictionRecord> run(StreamSource& source);

    /// Called with each record right after it is finalized.
    void set_observer(std::function<void(const PredictionRecord&)> observer);

    const ForestManager& manager() const { return manager_; }
    std::size_t buffered() const { return buffer_.size(); }
    const std::vector<UpdateEvent>& update_events() const { return update_events_; }
    const std::vector<RetireEvent>& retire_events() const { return retire_events_; }
    long processed() const { return next_index_; }

    // serialize.cpp reconstructs engines directly.
    StreamEngine(ForestManager manager, StreamConfig config, Rng model_rng,
                 Rng inject_rng, std::vector<BufferedCandidate> buffer,
                 long next_index);
    const std::vector<BufferedCandidate>& buffer() const { return buffer_; }
    const StreamConfig& config() const { return config_; }
    const Rng& model_rng() const { return model_rng_; }
    const Rng& inject_rng() const { return inject_rng_; }

private:
    ForestManager manager_;
    StreamConfig config_;
    Rng model_rng_;
    Rng inject_rng_;
    std::vector<BufferedCandidate> buffer_;
    long next_index_ = 0;
    std::vector<UpdateEvent> update_events_;
    std::vector<RetireEvent> retire_events_;
    std::function<void(const PredictionRecord&)> observer_;
};

} // namespace senc
