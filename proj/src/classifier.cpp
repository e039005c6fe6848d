#include "dfb/classify/classifier.hpp"
#include "dfb/error.hpp"
#include "dfb/run_info.hpp"

#include <sstream>
#include <string>

namespace dfb {

std::string_view to_string(Family family) noexcept {
    switch (family) {
    case Family::Knn: return "kNN";
    case Family::Svm: return "SVM";
    case Family::Lda: return "LDA";
    case Family::DecisionTree: return "DecisionTree";
    case Family::RandomForest: return "RandomForest";
    case Family::GBoost: return "GBoost";
    }
    return "kNN";
}

Family parse_family(std::string_view text) {
    for (Family f : {Family::Knn, Family::Svm, Family::Lda, Family::DecisionTree, Family::RandomForest,
                     Family::GBoost}) {
        if (text == to_string(f)) return f;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown classifier family '" + std::string(text) + "'");
}

ClassifierConfig ClassifierConfig::knn(std::size_t k) {
    ClassifierConfig c;
    c.family = Family::Knn;
    c.k = k;
    return c;
}

ClassifierConfig ClassifierConfig::svm_with(SvmKernel kernel) {
    ClassifierConfig c;
    c.family = Family::Svm;
    c.svm.kernel = kernel;
    return c;
}

ClassifierConfig ClassifierConfig::lda() {
    ClassifierConfig c;
    c.family = Family::Lda;
    return c;
}

ClassifierConfig ClassifierConfig::decision_tree() {
    ClassifierConfig c;
    c.family = Family::DecisionTree;
    return c;
}

ClassifierConfig ClassifierConfig::random_forest(std::uint64_t seed) {
    ClassifierConfig c;
    c.family = Family::RandomForest;
    c.seed = seed;
    return c;
}

ClassifierConfig ClassifierConfig::gboost() {
    ClassifierConfig c;
    c.family = Family::GBoost;
    return c;
}

std::string ClassifierConfig::variant_label() const {
    switch (family) {
    case Family::Knn: return "k = " + std::to_string(k);
    case Family::Svm: return std::string(to_string(svm.kernel));
    default: return {};
    }
}

std::string ClassifierConfig::describe() const {
    std::ostringstream s;
    s << "family=" << to_string(family) << " k=" << k << " kernel=" << to_string(svm.kernel)
      << " c=" << format_double(svm.c) << " tol=" << format_double(svm.tolerance)
      << " max_passes=" << svm.max_passes << " degree=" << svm.degree
      << " coef0=" << format_double(svm.coef0) << " trees=" << forest.trees
      << " max_features=" << forest.max_features << " rounds=" << boost.rounds
      << " depth=" << boost.depth << " learning_rate=" << format_double(boost.learning_rate)
      << " seed=" << seed;
    return s.str();
}

TrainedModel train(const ClassifierConfig& config, const LabeledDataset& data) {
    if (data.empty()) throw Error(ErrorKind::InvalidArgument, "training set is empty");
    const FeatureMatrix x = FeatureMatrix::from(data);
    if (config.family != Family::Knn &&
        (data.count(Label::Deepfake2) == 0 || data.count(Label::Deepfake3) == 0)) {
        throw Error(ErrorKind::DataValidation,
                    std::string(to_string(config.family)) + " needs training rows from both classes");
    }
    TrainedModel model;
    model.config = config;
    model.dimension = x.cols;
    switch (config.family) {
    case Family::Knn: model.payload = fit_knn(x, config.k); break;
    case Family::Svm: model.payload = fit_svm(x, config.svm); break;
    case Family::Lda: model.payload = fit_lda(x); break;
    case Family::DecisionTree: model.payload = fit_decision_tree(x); break;
    case Family::RandomForest: model.payload = fit_random_forest(x, config.forest, config.seed); break;
    case Family::GBoost: model.payload = fit_gboost(x, config.boost); break;
    }
    return model;
}

Label predict(const TrainedModel& model, std::span<const double> x) {
    if (x.size() != model.dimension) {
        throw Error(ErrorKind::DimensionMismatch, "expected a " + std::to_string(model.dimension) +
                                                      "-value feature vector, got " +
                                                      std::to_string(x.size()));
    }
    const std::size_t d = model.dimension;
    struct Visitor {
        std::span<const double> x;
        std::size_t d;
        int operator()(const KnnModel& m) const { return predict_knn(m, d, x); }
        int operator()(const SvmModel& m) const { return svm_decision(m, d, x) > 0.0 ? 1 : 0; }
        int operator()(const LdaModel& m) const { return lda_score(m, x) > 0.0 ? 1 : 0; }
        int operator()(const TreeModel& m) const { return m.tree.evaluate(x) > 0.5 ? 1 : 0; }
        int operator()(const ForestModel& m) const { return predict_forest(m, x); }
        int operator()(const BoostModel& m) const { return gboost_score(m, x) > 0.0 ? 1 : 0; }
    };
    return label_from_index(std::visit(Visitor{x, d}, model.payload));
}

MetricsReport evaluate(const TrainedModel& model, const LabeledDataset& data) {
    Confusion confusion{};
    for (const auto& row : data.rows) {
        ++confusion[label_index(row.label)][label_index(predict(model, row.features))];
    }
    return metrics_from_confusion(confusion);
}

} // namespace dfb
