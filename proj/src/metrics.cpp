#include "dfb/classify/dataset.hpp"
#include "dfb/classify/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dfb {

std::size_t LabeledDataset::count(Label label) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [label](const LabeledRow& r) { return r.label == label; }));
}

FeatureMatrix FeatureMatrix::from(const LabeledDataset& data) {
    FeatureMatrix m;
    m.rows = data.rows.size();
    m.cols = kAcCount;
    m.values.reserve(m.rows * m.cols);
    m.targets.reserve(m.rows);
    for (const auto& r : data.rows) {
        m.values.insert(m.values.end(), r.features.values.begin(), r.features.values.end());
        m.targets.push_back(label_index(r.label));
    }
    return m;
}

long MetricsReport::accuracy_percent() const { return std::lround(accuracy * 100.0); }

MetricsReport metrics_from_confusion(const Confusion& confusion) {
    MetricsReport report;
    report.confusion = confusion;
    std::size_t correct = 0;
    for (int c = 0; c < 2; ++c) {
        const std::size_t tp = confusion[c][c];
        const std::size_t fn = confusion[c][1 - c];
        const std::size_t fp = confusion[1 - c][c];
        correct += tp;
        report.total += tp + fn;
        ClassMetrics& m = report.per_class[c];
        m.precision_defined = tp + fp > 0;
        m.recall_defined = tp + fn > 0;
        m.precision = m.precision_defined ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        m.recall = m.recall_defined ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    }
    report.accuracy = report.total > 0 ? static_cast<double>(correct) / static_cast<double>(report.total) : 0.0;
    return report;
}

} // namespace dfb
