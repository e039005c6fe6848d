#pragma once

#include "dfb/dct_features.hpp"
#include "dfb/labels.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dfb {

enum class Split { Train, Test };

struct LabeledRow {
    BetaVector features;
    Label label = Label::Deepfake2;
};

struct LabeledDataset {
    std::vector<LabeledRow> rows;
    Split split = Split::Train;

    std::size_t size() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }
    std::size_t count(Label label) const noexcept;
};

/// Dense row-major design matrix with 0/1 targets (1 = Deepfake-3).
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<int> targets;

    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    static FeatureMatrix from(const LabeledDataset& data);
};

inline int label_index(Label label) noexcept { return static_cast<int>(label); }
inline Label label_from_index(int index) noexcept {
    return index == 0 ? Label::Deepfake2 : Label::Deepfake3;
}

} // namespace dfb
