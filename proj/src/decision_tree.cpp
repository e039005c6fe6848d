#include "dfb/classify/classifier.hpp"
#include "dfb/classify/tree.hpp"
#include "dfb/error.hpp"

#include <algorithm>
#include <numeric>

namespace dfb {

double Tree::evaluate(std::span<const double> x) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& n = nodes[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[at].value;
}

std::size_t Tree::depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
};

enum class Criterion { Gini, LeastSquares };

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, Criterion criterion, std::span<const double> targets,
                const TreeGrowth& growth, Rng* rng, const LeafValueFn* leaf_value)
        : x_(x), criterion_(criterion), targets_(targets), growth_(growth), rng_(rng),
          leaf_value_(leaf_value) {
        if (growth.max_features > 0 && rng == nullptr) {
            throw Error(ErrorKind::InvalidArgument, "feature subsampling needs a random generator");
        }
        features_.resize(x.cols);
        std::iota(features_.begin(), features_.end(), 0);
    }

    Tree build(std::vector<std::size_t> samples) {
        if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "cannot grow a tree on no samples");
        grow(std::move(samples), 0);
        return std::move(tree_);
    }

private:
    double target(std::size_t i) const {
        return criterion_ == Criterion::Gini ? static_cast<double>(x_.targets[i]) : targets_[i];
    }

    bool is_pure(const std::vector<std::size_t>& samples) const {
        const double first = target(samples.front());
        return std::all_of(samples.begin(), samples.end(), [&](std::size_t i) { return target(i) == first; });
    }

    double leaf_value(const std::vector<std::size_t>& samples) const {
        if (criterion_ == Criterion::LeastSquares) return (*leaf_value_)(samples);
        double ones = 0.0;
        for (std::size_t i : samples) ones += x_.targets[i];
        return ones / static_cast<double>(samples.size());
    }

    // Best split of `samples` on one feature, or nullopt-like feature = -1.
    Split best_on_feature(const std::vector<std::size_t>& samples, std::size_t f,
                          std::vector<std::pair<double, double>>& scratch) const {
        scratch.clear();
        for (std::size_t i : samples) scratch.emplace_back(x_.at(i, f), target(i));
        std::stable_sort(scratch.begin(), scratch.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        Split best;
        const std::size_t n = scratch.size();
        if (scratch.front().first == scratch.back().first) return best;

        if (criterion_ == Criterion::Gini) {
            double total1 = 0.0;
            for (const auto& s : scratch) total1 += s.second;
            const double total0 = static_cast<double>(n) - total1;
            double l1 = 0.0;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                l1 += scratch[p].second;
                if (scratch[p].first == scratch[p + 1].first) continue;
                const double nl = static_cast<double>(p + 1);
                const double nr = static_cast<double>(n) - nl;
                const double l0 = nl - l1;
                const double r1 = total1 - l1;
                const double r0 = total0 - l0;
                const double score = (l0 * l0 + l1 * l1) / nl + (r0 * r0 + r1 * r1) / nr;
                if (best.feature < 0 || score > best.score) {
                    best = Split{static_cast<int>(f), scratch[p].first, score};
                }
            }
        } else {
            double total = 0.0;
            for (const auto& s : scratch) total += s.second;
            double left = 0.0;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                left += scratch[p].second;
                if (scratch[p].first == scratch[p + 1].first) continue;
                const double nl = static_cast<double>(p + 1);
                const double nr = static_cast<double>(n) - nl;
                const double right = total - left;
                const double score = left * left / nl + right * right / nr;
                if (best.feature < 0 || score > best.score) {
                    best = Split{static_cast<int>(f), scratch[p].first, score};
                }
            }
        }
        return best;
    }

    Split find_split(const std::vector<std::size_t>& samples) {
        std::vector<std::pair<double, double>> scratch;
        scratch.reserve(samples.size());
        Split best;
        auto consider = [&](std::size_t f) {
            const Split s = best_on_feature(samples, f, scratch);
            if (s.feature < 0) return;
            // Features arrive in ascending order within a batch, so strict '>'
            // keeps the lowest feature index (then lowest threshold) on ties.
            if (best.feature < 0 || s.score > best.score) best = s;
        };
        if (growth_.max_features == 0 || growth_.max_features >= x_.cols) {
            for (std::size_t f = 0; f < x_.cols; ++f) consider(f);
            return best;
        }
        // Random batches of max_features; a later batch is drawn only when no
        // feature in the earlier ones can split the node.
        for (std::size_t i = x_.cols - 1; i > 0; --i) {
            std::swap(features_[i], features_[uniform_index(*rng_, i + 1)]);
        }
        for (std::size_t start = 0; start < x_.cols && best.feature < 0; start += growth_.max_features) {
            const std::size_t stop = std::min(start + growth_.max_features, x_.cols);
            std::vector<std::size_t> batch(features_.begin() + static_cast<std::ptrdiff_t>(start),
                                           features_.begin() + static_cast<std::ptrdiff_t>(stop));
            std::sort(batch.begin(), batch.end());
            for (std::size_t f : batch) consider(f);
        }
        return best;
    }

    int grow(std::vector<std::size_t> samples, std::size_t depth) {
        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back(TreeNode{});
        auto make_leaf = [&] {
            tree_.nodes[static_cast<std::size_t>(index)].value = leaf_value(samples);
            return index;
        };
        if (samples.size() < growth_.min_samples_split || depth >= growth_.max_depth || is_pure(samples)) {
            return make_leaf();
        }
        const Split split = find_split(samples);
        if (split.feature < 0) return make_leaf();

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t i : samples) {
            (x_.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
        }
        const double value = leaf_value(samples);
        samples.clear();
        samples.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        node.value = value;
        return index;
    }

    const FeatureMatrix& x_;
    Criterion criterion_;
    std::span<const double> targets_;
    TreeGrowth growth_;
    Rng* rng_;
    const LeafValueFn* leaf_value_;
    std::vector<std::size_t> features_;
    Tree tree_;
};

} // namespace

Tree grow_gini_tree(const FeatureMatrix& x, std::span<const std::size_t> samples,
                    const TreeGrowth& growth, Rng* rng) {
    TreeBuilder builder(x, Criterion::Gini, {}, growth, rng, nullptr);
    return builder.build({samples.begin(), samples.end()});
}

Tree grow_regression_tree(const FeatureMatrix& x, std::span<const double> targets,
                          std::span<const std::size_t> samples, const TreeGrowth& growth,
                          const LeafValueFn& leaf_value) {
    if (targets.size() != x.rows) {
        throw Error(ErrorKind::InvalidArgument, "regression targets do not match the matrix rows");
    }
    TreeBuilder builder(x, Criterion::LeastSquares, targets, growth, nullptr, &leaf_value);
    return builder.build({samples.begin(), samples.end()});
}

TreeModel fit_decision_tree(const FeatureMatrix& x) {
    std::vector<std::size_t> all(x.rows);
    std::iota(all.begin(), all.end(), 0);
    return TreeModel{grow_gini_tree(x, all, TreeGrowth{})};
}

} // namespace dfb
