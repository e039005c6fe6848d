#pragma once

#include "dfb/classify/dataset.hpp"
#include "dfb/random.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace dfb {

/// Internal nodes send x to `left` when x[feature] <= threshold. Thresholds are
/// always observed training values, which makes every split (and therefore
/// every prediction) invariant under strictly increasing per-feature maps.
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    double evaluate(std::span<const double> x) const;
    std::size_t depth() const;
};

struct TreeGrowth {
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
    std::size_t min_samples_split = 2;
    /// Features examined per split; 0 means all of them in index order.
    std::size_t max_features = 0;
};

/// CART with Gini impurity on 0/1 targets. `samples` may repeat rows (bootstrap).
/// Leaf value is the fraction of class 1 among the leaf's samples. When
/// max_features > 0, `rng` must be non-null and drives per-node feature draws.
Tree grow_gini_tree(const FeatureMatrix& x, std::span<const std::size_t> samples,
                    const TreeGrowth& growth, Rng* rng = nullptr);

/// Least-squares regression tree on `targets` (one per matrix row). Leaf values
/// come from `leaf_value` applied to the samples reaching the leaf.
using LeafValueFn = std::function<double(std::span<const std::size_t>)>;
Tree grow_regression_tree(const FeatureMatrix& x, std::span<const double> targets,
                          std::span<const std::size_t> samples, const TreeGrowth& growth,
                          const LeafValueFn& leaf_value);

} // namespace dfb
