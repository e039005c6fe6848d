#pragma once

#include "dfb/classify/dataset.hpp"
#include "dfb/classify/metrics.hpp"
#include "dfb/classify/svm.hpp"
#include "dfb/classify/tree.hpp"
#include "dfb/random.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dfb {

enum class Family { Knn, Svm, Lda, DecisionTree, RandomForest, GBoost };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view text);

struct SvmParams {
    SvmKernel kernel = SvmKernel::Linear;
    double c = 1.0;
    double tolerance = 1e-3;
    std::size_t max_passes = 10000;
    int degree = 3;
    double coef0 = 0.0;
};

struct ForestParams {
    std::size_t trees = 100;
    std::size_t max_features = 8; // ceil(sqrt(63))
};

struct BoostParams {
    std::size_t rounds = 100;
    std::size_t depth = 3;
    double learning_rate = 0.1;
};

struct ClassifierConfig {
    Family family = Family::Knn;
    std::size_t k = 5;
    SvmParams svm;
    ForestParams forest;
    BoostParams boost;
    std::uint64_t seed = kDefaultSeed;

    static ClassifierConfig knn(std::size_t k);
    static ClassifierConfig svm_with(SvmKernel kernel);
    static ClassifierConfig lda();
    static ClassifierConfig decision_tree();
    static ClassifierConfig random_forest(std::uint64_t seed = kDefaultSeed);
    static ClassifierConfig gboost();

    /// Short row label, e.g. "k = 3", "rbf", or empty for single-row families.
    std::string variant_label() const;
    /// Every parameter as space-separated key=value pairs, in a fixed order.
    std::string describe() const;
};

struct KnnModel {
    std::size_t k = 1;
    std::vector<double> points; // row-major, n x dimension
    std::vector<int> targets;
};

struct SvmModel {
    KernelSpec kernel;
    std::vector<double> support; // row-major, m x dimension
    std::vector<double> coef;    // alpha_i * y_i
    double rho = 0.0;
};

struct LdaModel {
    std::vector<double> mean0;
    std::vector<double> mean1;
    std::vector<double> weights; // (S + eps I)^-1 (mean1 - mean0)
    double bias = 0.0;           // score = w.x + bias, class 1 when > 0
};

struct TreeModel {
    Tree tree;
};

struct ForestModel {
    std::vector<Tree> trees;
};

struct BoostModel {
    double initial_score = 0.0;
    double learning_rate = 0.1;
    std::vector<Tree> trees;
};

using ModelPayload = std::variant<KnnModel, SvmModel, LdaModel, TreeModel, ForestModel, BoostModel>;

struct TrainedModel {
    static constexpr int kSchemaVersion = 1;

    ClassifierConfig config;
    std::size_t dimension = kAcCount;
    ModelPayload payload;
};

/// Fits one classifier. Discriminative families need both classes present;
/// kNN only needs a non-empty set.
TrainedModel train(const ClassifierConfig& config, const LabeledDataset& data);

/// Throws DimensionMismatch when x does not match the training dimension.
Label predict(const TrainedModel& model, std::span<const double> x);
inline Label predict(const TrainedModel& model, const BetaVector& x) { return predict(model, x.span()); }

MetricsReport evaluate(const TrainedModel& model, const LabeledDataset& data);

/// Line-oriented text encoding; doubles use shortest round-trip decimals so
/// deserialize(serialize(m)) predicts identically to m.
std::string serialize(const TrainedModel& model);
TrainedModel deserialize(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Family entry points, exposed for focused tests.
KnnModel fit_knn(const FeatureMatrix& x, std::size_t k);
int predict_knn(const KnnModel& model, std::size_t dimension, std::span<const double> query);

/// gamma for non-linear kernels: 1 / (dimension * variance of all entries).
double default_gamma(const FeatureMatrix& x);
SvmModel fit_svm(const FeatureMatrix& x, const SvmParams& params, SvmSolution* solution_out = nullptr);
double svm_decision(const SvmModel& model, std::size_t dimension, std::span<const double> query);

LdaModel fit_lda(const FeatureMatrix& x);
double lda_score(const LdaModel& model, std::span<const double> query);

TreeModel fit_decision_tree(const FeatureMatrix& x);
ForestModel fit_random_forest(const FeatureMatrix& x, const ForestParams& params, std::uint64_t seed);
int predict_forest(const ForestModel& model, std::span<const double> query);
BoostModel fit_gboost(const FeatureMatrix& x, const BoostParams& params);
double gboost_score(const BoostModel& model, std::span<const double> query);

} // namespace dfb
