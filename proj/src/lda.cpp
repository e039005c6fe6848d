#include "dfb/classify/classifier.hpp"
#include "dfb/error.hpp"

#include <cmath>

namespace dfb {
namespace {

// In-place Cholesky of a symmetric positive definite d x d matrix (lower triangle).
void cholesky(std::vector<double>& a, std::size_t d) {
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
        if (!(diag > 0.0)) {
            throw Error(ErrorKind::DataValidation, "LDA covariance is not positive definite");
        }
        const double l = std::sqrt(diag);
        a[j * d + j] = l;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
            a[i * d + j] = v / l;
        }
    }
}

std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t d, std::vector<double> b) {
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= l[i * d + k] * b[k];
        b[i] /= l[i * d + i];
    }
    for (std::size_t ii = d; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < d; ++k) b[ii] -= l[k * d + ii] * b[k];
        b[ii] /= l[ii * d + ii];
    }
    return b;
}

} // namespace

LdaModel fit_lda(const FeatureMatrix& x) {
    const std::size_t d = x.cols;
    std::size_t counts[2] = {0, 0};
    LdaModel model;
    model.mean0.assign(d, 0.0);
    model.mean1.assign(d, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        auto& mean = x.targets[i] == 1 ? model.mean1 : model.mean0;
        ++counts[x.targets[i]];
        const auto r = x.row(i);
        for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
    }
    if (counts[0] == 0 || counts[1] == 0) {
        throw Error(ErrorKind::DataValidation, "LDA needs rows from both classes");
    }
    for (std::size_t j = 0; j < d; ++j) {
        model.mean0[j] /= static_cast<double>(counts[0]);
        model.mean1[j] /= static_cast<double>(counts[1]);
    }

    // pooled within-class covariance
    std::vector<double> cov(d * d, 0.0);
    std::vector<double> centred(d);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto& mean = x.targets[i] == 1 ? model.mean1 : model.mean0;
        const auto r = x.row(i);
        for (std::size_t j = 0; j < d; ++j) centred[j] = r[j] - mean[j];
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b <= a; ++b) cov[a * d + b] += centred[a] * centred[b];
        }
    }
    const double dof = x.rows > 2 ? static_cast<double>(x.rows - 2) : 1.0;
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            cov[a * d + b] /= dof;
            cov[b * d + a] = cov[a * d + b];
        }
        trace += cov[a * d + a];
    }
    double ridge = 1e-6 * trace / static_cast<double>(d);
    if (!(ridge > 0.0)) ridge = 1e-12;
    for (std::size_t a = 0; a < d; ++a) cov[a * d + a] += ridge;
    cholesky(cov, d);

    std::vector<double> diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = model.mean1[j] - model.mean0[j];
    model.weights = cholesky_solve(cov, d, diff);

    double mid = 0.0;
    for (std::size_t j = 0; j < d; ++j) mid += model.weights[j] * (model.mean0[j] + model.mean1[j]) / 2.0;
    const double n = static_cast<double>(x.rows);
    model.bias = -mid + std::log((static_cast<double>(counts[1]) / n) / (static_cast<double>(counts[0]) / n));
    return model;
}

double lda_score(const LdaModel& model, std::span<const double> query) {
    double s = model.bias;
    for (std::size_t j = 0; j < model.weights.size(); ++j) s += model.weights[j] * query[j];
    return s;
}

} // namespace dfb
