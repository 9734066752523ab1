#include "senc/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace senc {

namespace {

void check_range(const std::vector<PredictionRecord>& records, std::size_t first,
                 std::size_t count, const char* who) {
    if (count == 0) throw std::invalid_argument(std::string(who) + ": empty window");
    if (first + count > records.size())
        throw std::out_of_range(std::string(who) + ": window exceeds records");
}

} // namespace

WindowMetrics en_accuracy(const std::vector<PredictionRecord>& records,
                          std::size_t first, std::size_t count) {
    check_range(records, first, count, "en_accuracy");
    WindowMetrics m;
    m.start = records[first].index;
    m.end = records[first + count - 1].index + 1;
    m.n = static_cast<long>(count);
    for (std::size_t i = first; i < first + count; ++i) {
        const PredictionRecord& r = records[i];
        if (!r.true_label)
            throw std::invalid_argument("en_accuracy: record without true label");
        if (r.emerging) {
            if (r.predicted == kNewClass) m.correct_emerging += 1;
        } else {
            if (r.predicted == *r.true_label) m.correct_known += 1;
        }
    }
    m.en_accuracy = static_cast<double>(m.correct_emerging + m.correct_known) /
                    static_cast<double>(m.n);
    return m;
}

WindowMetrics en_accuracy(const std::vector<PredictionRecord>& records) {
    return en_accuracy(records, 0, records.size());
}

DetectionMetrics f_measure(const std::vector<PredictionRecord>& records,
                           std::size_t first, std::size_t count) {
    check_range(records, first, count, "f_measure");
    DetectionMetrics m;
    m.start = records[first].index;
    m.end = records[first + count - 1].index + 1;
    for (std::size_t i = first; i < first + count; ++i) {
        const PredictionRecord& r = records[i];
        const bool flagged = r.predicted == kNewClass;
        if (r.emerging && flagged) m.true_positives += 1;
        else if (!r.emerging && flagged) m.false_positives += 1;
        else if (r.emerging && !flagged) m.false_negatives += 1;
    }
    const long flagged_total = m.true_positives + m.false_positives;
    const long emerging_total = m.true_positives + m.false_negatives;
    m.precision = flagged_total > 0 ? static_cast<double>(m.true_positives) /
                                          static_cast<double>(flagged_total)
                                    : 0.0;
    m.recall = emerging_total > 0 ? static_cast<double>(m.true_positives) /
                                        static_cast<double>(emerging_total)
                                  : 0.0;
    m.f_measure = (m.precision + m.recall) > 0.0
                      ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                      : 0.0;
    return m;
}

DetectionMetrics f_measure(const std::vector<PredictionRecord>& records) {
    return f_measure(records, 0, records.size());
}

StreamEvaluation evaluate_stream(const std::vector<PredictionRecord>& records,
                                 const std::vector<long>& period_starts,
                                 std::size_t window_size) {
    if (records.empty())
        throw std::invalid_argument("evaluate_stream: no records");
    if (window_size == 0)
        throw std::invalid_argument("evaluate_stream: window_size must be >= 1");

    StreamEvaluation eval;
    eval.overall = en_accuracy(records);

    for (std::size_t first = 0; first < records.size(); first += window_size) {
        const std::size_t count = std::min(window_size, records.size() - first);
        eval.windows.push_back(en_accuracy(records, first, count));
    }

    for (std::size_t p = 0; p < period_starts.size(); ++p) {
        const std::size_t begin = static_cast<std::size_t>(period_starts[p]);
        const std::size_t end = p + 1 < period_starts.size()
                                    ? static_cast<std::size_t>(period_starts[p + 1])
                                    : records.size();
        if (begin >= end || end > records.size())
            throw std::invalid_argument("evaluate_stream: bad period boundaries");
        // Detection phase: up to and including the period's first update.
        std::size_t phase_end = end;
        for (std::size_t i = begin; i < end; ++i) {
            if (records[i].model_updated) {
                phase_end = i + 1;
                break;
            }
        }
        eval.detection_phases.push_back(f_measure(records, begin, phase_end - begin));
    }
    return eval;
}

} // namespace senc
