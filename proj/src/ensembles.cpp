#include "dfb/classify/classifier.hpp"
#include "dfb/error.hpp"

#include <cmath>
#include <numeric>

namespace dfb {

// Tree t draws from its own generator seeded with mix_seed(seed, t): first the
// n bootstrap rows, then the per-node feature batches while growing.
ForestModel fit_random_forest(const FeatureMatrix& x, const ForestParams& params, std::uint64_t seed) {
    if (params.trees == 0) throw Error(ErrorKind::InvalidArgument, "a forest needs at least one tree");
    ForestModel model;
    model.trees.reserve(params.trees);
    TreeGrowth growth;
    growth.max_features = params.max_features;
    std::vector<std::size_t> bootstrap(x.rows);
    for (std::size_t t = 0; t < params.trees; ++t) {
        Rng rng(mix_seed(seed, t));
        for (auto& b : bootstrap) b = uniform_index(rng, x.rows);
        model.trees.push_back(grow_gini_tree(x, bootstrap, growth, &rng));
    }
    return model;
}

int predict_forest(const ForestModel& model, std::span<const double> query) {
    std::size_t votes = 0;
    for (const auto& tree : model.trees) votes += tree.evaluate(query) > 0.5 ? 1 : 0;
    // a split vote goes to Deepfake-2
    return 2 * votes > model.trees.size() ? 1 : 0;
}

BoostModel fit_gboost(const FeatureMatrix& x, const BoostParams& params) {
    const std::size_t n = x.rows;
    const double positives = std::accumulate(x.targets.begin(), x.targets.end(), 0.0);
    if (positives == 0.0 || positives == static_cast<double>(n)) {
        throw Error(ErrorKind::DataValidation, "gradient boosting needs rows from both classes");
    }
    BoostModel model;
    model.learning_rate = params.learning_rate;
    const double prior = positives / static_cast<double>(n);
    model.initial_score = std::log(prior / (1.0 - prior));

    std::vector<double> score(n, model.initial_score);
    std::vector<double> prob(n);
    std::vector<double> residual(n);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);

    TreeGrowth growth;
    growth.max_depth = params.depth;
    // Newton step for the logistic loss: sum(residual) / sum(p (1 - p)).
    const LeafValueFn newton = [&](std::span<const std::size_t> samples) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i : samples) {
            num += residual[i];
            den += prob[i] * (1.0 - prob[i]);
        }
        return den > 1e-12 ? num / den : 0.0;
    };

    for (std::size_t round = 0; round < params.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            prob[i] = 1.0 / (1.0 + std::exp(-score[i]));
            residual[i] = static_cast<double>(x.targets[i]) - prob[i];
        }
        Tree tree = grow_regression_tree(x, residual, all, growth, newton);
        for (std::size_t i = 0; i < n; ++i) score[i] += params.learning_rate * tree.evaluate(x.row(i));
        model.trees.push_back(std::move(tree));
    }
    return model;
}

double gboost_score(const BoostModel& model, std::span<const double> query) {
    double s = model.initial_score;
    for (const auto& tree : model.trees) s += model.learning_rate * tree.evaluate(query);
    return s;
}

} // namespace dfb
