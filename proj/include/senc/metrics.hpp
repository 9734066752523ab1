#pragma once

#include <cstddef>
#include <vector>

#include "senc/stream.hpp"

namespace senc {

struct WindowMetrics {
    long start = 0; // index of the first record (inclusive)
    long end = 0;   // index one past the last record
    long n = 0;
    long correct_emerging = 0; // emerging instances predicted NEW_CLASS
    long correct_known = 0;    // known instances predicted with their own label
    double en_accuracy = 0.0;  // (correct_emerging + correct_known) / n
};

struct DetectionMetrics {
    long start = 0;
    long end = 0;
    long true_positives = 0;  // emerging predicted NEW_CLASS
    long false_positives = 0; // known predicted NEW_CLASS
    long false_negatives = 0; // emerging predicted as a known class
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

/// Joint accuracy over one record window: an emerging instance is correct
/// when flagged NEW_CLASS, a known instance when given exactly its own label.
/// Requires a nonempty window where every record carries a true label.
WindowMetrics en_accuracy(const std::vector<PredictionRecord>& records,
                          std::size_t first, std::size_t count);
WindowMetrics en_accuracy(const std::vector<PredictionRecord>& records);

/// Precision/recall/F1 of emerging-class detection over a record range
/// (positive = instance was emerging at prediction time). Precision is 0
/// when nothing was flagged; F is 0 when precision + recall is 0.
DetectionMetrics f_measure(const std::vector<PredictionRecord>& records,
                           std::size_t first, std::size_t count);
DetectionMetrics f_measure(const std::vector<PredictionRecord>& records);

struct StreamEvaluation {
    WindowMetrics overall;
    std::vector<WindowMetrics> windows; // consecutive fixed-size windows
    // One entry per stream period: from the period's first record to its
    // first model update (whole period when no update happened).
    std::vector<DetectionMetrics> detection_phases;
};

/// Evaluate a full run: overall joint accuracy, fixed windows of window_size
/// records, and per-period detection metrics. period_starts holds each
/// period's first record index, ascending, starting at 0.
StreamEvaluation evaluate_stream(const std::vector<PredictionRecord>& records,
                                 const std::vector<long>& period_starts,
                                 std::size_t window_size = 100);

} // namespace senc
