#pragma once

#include "dfb/labels.hpp"

#include <array>
#include <cstddef>

namespace dfb {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// False when nothing was predicted as this class; precision then reads 0.
    bool precision_defined = true;
    /// False when the class has no rows in the evaluated split.
    bool recall_defined = true;
};

/// confusion[true][predicted], indexed by label_index().
using Confusion = std::array<std::array<std::size_t, 2>, 2>;

struct MetricsReport {
    std::array<ClassMetrics, 2> per_class{};
    double accuracy = 0.0;
    Confusion confusion{};
    std::size_t total = 0;

    const ClassMetrics& of(Label label) const { return per_class[static_cast<int>(label)]; }
    /// Accuracy as the integer percentage printed in reports.
    long accuracy_percent() const;
};

MetricsReport metrics_from_confusion(const Confusion& confusion);

} // namespace dfb
