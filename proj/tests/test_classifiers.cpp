#include "dfb/classify/classifier.hpp"
#include "dfb/classify/metrics.hpp"
#include "dfb/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dfb {
namespace {

using testing::make_blobs;

std::vector<ClassifierConfig> all_families() {
    return {ClassifierConfig::knn(5),       ClassifierConfig::svm_with(SvmKernel::Linear),
            ClassifierConfig::svm_with(SvmKernel::Rbf), ClassifierConfig::lda(),
            ClassifierConfig::decision_tree(), ClassifierConfig::random_forest(),
            ClassifierConfig::gboost()};
}

LabeledDataset transformed(const LabeledDataset& data, const std::function<double(double, std::size_t)>& f) {
    LabeledDataset out = data;
    for (auto& row : out.rows) {
        for (std::size_t j = 0; j < kAcCount; ++j) row.features.values[j] = f(row.features.values[j], j);
    }
    return out;
}

std::vector<Label> predictions(const TrainedModel& model, const LabeledDataset& data) {
    std::vector<Label> out;
    for (const auto& row : data.rows) out.push_back(predict(model, row.features));
    return out;
}

/// Overlapping blobs so that decision boundaries carry real information.
LabeledDataset noisy_blobs(std::uint64_t seed, std::size_t per_class = 60) {
    return make_blobs(per_class, seed, 2.0);
}

TEST(Classifiers, AllFamiliesSeparateBlobs) {
    const auto train_set = make_blobs(100, 1);
    const auto test_set = make_blobs(50, 2, 0.1, Split::Test);
    for (const auto& cfg : all_families()) {
        const auto report = evaluate(train(cfg, train_set), test_set);
        EXPECT_GE(report.accuracy, 0.95) << cfg.describe();
    }
}

TEST(Classifiers, PredictsClassMeans) {
    const auto train_set = make_blobs(100, 3);
    BetaVector a, b;
    a.values.fill(-1.0);
    b.values.fill(1.0);
    for (const auto& cfg : all_families()) {
        const auto model = train(cfg, train_set);
        EXPECT_EQ(predict(model, a), Label::Deepfake2) << cfg.describe();
        EXPECT_EQ(predict(model, b), Label::Deepfake3) << cfg.describe();
    }
}

TEST(Knn, OneNeighbourMemorisesDistinctPoints) {
    const auto data = noisy_blobs(4);
    const auto report = evaluate(train(ClassifierConfig::knn(1), data), data);
    EXPECT_EQ(report.accuracy, 1.0);
}

TEST(Knn, InvariantUnderUniformScaleAndShift) {
    const auto data = noisy_blobs(5);
    const auto probe = noisy_blobs(6);
    auto affine = [](double v, std::size_t) { return 0.25 * v + 7.0; };
    const auto before = predictions(train(ClassifierConfig::knn(7), data), probe);
    const auto after = predictions(train(ClassifierConfig::knn(7), transformed(data, affine)), transformed(probe, affine));
    EXPECT_EQ(before, after);
}

TEST(Knn, RejectsWrongDimension) {
    const auto model = train(ClassifierConfig::knn(3), make_blobs(10, 7));
    const std::vector<double> short_query(10, 0.0);
    try {
        predict(model, short_query);
        FAIL() << "expected DimensionMismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(Lda, InvariantUnderInvertibleAffineMaps) {
    const auto data = noisy_blobs(8);
    const auto probe = noisy_blobs(9);
    auto affine = [](double v, std::size_t j) { return (1.0 + 0.1 * static_cast<double>(j)) * v - 3.0 + j; };
    const auto before = predictions(train(ClassifierConfig::lda(), data), probe);
    const auto after = predictions(train(ClassifierConfig::lda(), transformed(data, affine)), transformed(probe, affine));
    std::size_t agree = 0;
    for (std::size_t i = 0; i < before.size(); ++i) agree += before[i] == after[i];
    // The ridge term is scale-relative, so only points within ~1e-6 of the
    // boundary may flip.
    EXPECT_GE(agree, before.size() - 1);
}

TEST(Trees, InvariantUnderStrictlyIncreasingMaps) {
    const auto data = noisy_blobs(10);
    const auto probe = noisy_blobs(11);
    auto monotone = [](double v, std::size_t) { return std::exp(v / 3.0) + v * v * v; };
    for (const auto& cfg : {ClassifierConfig::decision_tree(), ClassifierConfig::random_forest(77)}) {
        const auto before = predictions(train(cfg, data), probe);
        const auto after = predictions(train(cfg, transformed(data, monotone)), transformed(probe, monotone));
        EXPECT_EQ(before, after) << cfg.describe();
    }
}

TEST(Trees, FullTreeFitsTrainingData) {
    const auto data = noisy_blobs(12);
    EXPECT_EQ(evaluate(train(ClassifierConfig::decision_tree(), data), data).accuracy, 1.0);
}

TEST(Trees, GiniSplitOnObviousFeature) {
    FeatureMatrix x;
    x.rows = 4;
    x.cols = 2;
    x.values = {5, 0, 6, 1, 5, 2, 6, 3}; // feature 1 separates
    x.targets = {0, 0, 1, 1};
    const std::vector<std::size_t> all{0, 1, 2, 3};
    const Tree t = grow_gini_tree(x, all, TreeGrowth{});
    ASSERT_FALSE(t.nodes.empty());
    EXPECT_EQ(t.nodes[0].feature, 1);
    EXPECT_EQ(t.nodes[0].threshold, 1.0);
    EXPECT_EQ(t.depth(), 1u);
}

TEST(Svm, LinearSolutionSatisfiesKkt) {
    const auto data = noisy_blobs(13, 40);
    const FeatureMatrix x = FeatureMatrix::from(data);
    SvmParams params;
    SvmSolution sol;
    fit_svm(x, params, &sol);
    ASSERT_TRUE(sol.converged);
    EXPECT_LE(sol.kkt_gap, params.tolerance);

    std::vector<double> y(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) y[i] = x.targets[i] == 1 ? 1.0 : -1.0;
    double balance = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        EXPECT_GE(sol.alpha[i], 0.0);
        EXPECT_LE(sol.alpha[i], params.c);
        balance += sol.alpha[i] * y[i];
        // Recompute the decision value directly and check the margin conditions.
        double f = -sol.rho;
        for (std::size_t j = 0; j < x.rows; ++j) {
            double dot = 0.0;
            for (std::size_t d = 0; d < x.cols; ++d) dot += x.at(i, d) * x.at(j, d);
            f += sol.alpha[j] * y[j] * dot;
        }
        const double margin = y[i] * f;
        if (sol.alpha[i] < 1e-12) {
            EXPECT_GE(margin, 1.0 - params.tolerance);
        } else if (sol.alpha[i] > params.c - 1e-12) {
            EXPECT_LE(margin, 1.0 + params.tolerance);
        } else {
            EXPECT_NEAR(margin, 1.0, params.tolerance);
        }
    }
    EXPECT_NEAR(balance, 0.0, 1e-9);
}

TEST(Svm, DefaultGammaUsesAllEntries) {
    FeatureMatrix x;
    x.rows = 2;
    x.cols = 2;
    x.values = {0, 2, 0, 2}; // variance 1
    x.targets = {0, 1};
    EXPECT_DOUBLE_EQ(default_gamma(x), 0.5);
}

TEST(Gboost, ScoresAreLogOdds) {
    LabeledDataset data = make_blobs(30, 14);
    data.rows.resize(40); // 20 / 20, still balanced
    const auto model = std::get<BoostModel>(train(ClassifierConfig::gboost(), data).payload);
    EXPECT_NEAR(model.initial_score, 0.0, 1e-12);
    EXPECT_EQ(model.trees.size(), 100u);
    for (const auto& t : model.trees) EXPECT_LE(t.depth(), 3u);
}

TEST(Forest, SameSeedSameModelDifferentSeedDifferentModel) {
    const auto data = noisy_blobs(15);
    const std::string a = serialize(train(ClassifierConfig::random_forest(1), data));
    EXPECT_EQ(a, serialize(train(ClassifierConfig::random_forest(1), data)));
    EXPECT_NE(a, serialize(train(ClassifierConfig::random_forest(2), data)));
}

TEST(Serialization, RoundTripPreservesPredictions) {
    const auto data = noisy_blobs(16);
    const auto probe = noisy_blobs(17);
    for (auto cfg : all_families()) {
        const auto model = train(cfg, data);
        const std::string text = serialize(model);
        const auto back = deserialize(text);
        EXPECT_EQ(serialize(back), text) << cfg.describe();
        EXPECT_EQ(predictions(back, probe), predictions(model, probe)) << cfg.describe();
    }
}

TEST(Serialization, RejectsCorruptModels) {
    EXPECT_THROW(deserialize("not a model"), Error);
    std::string text = serialize(train(ClassifierConfig::lda(), make_blobs(10, 18)));
    EXPECT_THROW(deserialize(text.substr(0, text.size() / 2)), Error);
}

TEST(Training, NeedsBothClassesExceptKnn) {
    LabeledDataset one_class = make_blobs(10, 19);
    std::erase_if(one_class.rows, [](const LabeledRow& r) { return r.label == Label::Deepfake3; });
    EXPECT_THROW(train(ClassifierConfig::lda(), one_class), Error);
    EXPECT_NO_THROW(train(ClassifierConfig::knn(3), one_class));
    EXPECT_THROW(train(ClassifierConfig::knn(3), LabeledDataset{}), Error);
}

TEST(Metrics, FromConfusion) {
    Confusion c{};
    c[0][0] = 8; // true class 2, predicted 2
    c[0][1] = 2;
    c[1][0] = 4;
    c[1][1] = 6;
    const auto m = metrics_from_confusion(c);
    EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
    EXPECT_EQ(m.accuracy_percent(), 70);
    EXPECT_DOUBLE_EQ(m.of(Label::Deepfake2).precision, 8.0 / 12.0);
    EXPECT_DOUBLE_EQ(m.of(Label::Deepfake2).recall, 0.8);
    EXPECT_DOUBLE_EQ(m.of(Label::Deepfake3).precision, 0.75);
    EXPECT_DOUBLE_EQ(m.of(Label::Deepfake3).f1, 2 * 0.75 * 0.6 / 1.35);
}

TEST(Metrics, NeverPredictedClassHasUndefinedPrecision) {
    Confusion c{};
    c[0][0] = 5;
    c[1][0] = 5;
    const auto m = metrics_from_confusion(c);
    EXPECT_FALSE(m.of(Label::Deepfake3).precision_defined);
    EXPECT_EQ(m.of(Label::Deepfake3).f1, 0.0);
    EXPECT_EQ(m.accuracy_percent(), 50);
}

} // namespace
} // namespace dfb
