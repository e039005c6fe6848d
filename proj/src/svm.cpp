#include "dfb/classify/classifier.hpp"
#include "dfb/classify/svm.hpp"
#include "dfb/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dfb {
namespace {

constexpr double kTau = 1e-12;

bool is_upper(double a, double c) { return a >= c; }
bool is_lower(double a) { return a <= 0.0; }

} // namespace

std::string_view to_string(SvmKernel kernel) noexcept {
    switch (kernel) {
    case SvmKernel::Linear: return "linear";
    case SvmKernel::Poly: return "poly";
    case SvmKernel::Rbf: return "rbf";
    case SvmKernel::Sigmoid: return "sigmoid";
    }
    return "linear";
}

SvmKernel parse_kernel(std::string_view text) {
    if (text == "linear") return SvmKernel::Linear;
    if (text == "poly") return SvmKernel::Poly;
    if (text == "rbf") return SvmKernel::Rbf;
    if (text == "sigmoid") return SvmKernel::Sigmoid;
    throw Error(ErrorKind::InvalidArgument, "unknown SVM kernel '" + std::string(text) + "'");
}

double KernelSpec::operator()(std::span<const double> a, std::span<const double> b) const {
    if (kind == SvmKernel::Rbf) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            d2 += d * d;
        }
        return std::exp(-gamma * d2);
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    switch (kind) {
    case SvmKernel::Linear: return dot;
    case SvmKernel::Poly: return std::pow(gamma * dot + coef0, degree);
    case SvmKernel::Sigmoid: return std::tanh(gamma * dot + coef0);
    case SvmKernel::Rbf: break;
    }
    return dot;
}

SvmSolution solve_svm_dual(std::span<const double> kernel_matrix, std::span<const double> y, double c,
                           double tolerance, std::size_t max_passes) {
    const std::size_t n = y.size();
    if (kernel_matrix.size() != n * n) {
        throw Error(ErrorKind::InvalidArgument, "kernel matrix does not match label count");
    }
    auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * kernel_matrix[i * n + j]; };

    SvmSolution sol;
    sol.alpha.assign(n, 0.0);
    sol.gradient.assign(n, -1.0);
    auto& alpha = sol.alpha;
    auto& grad = sol.gradient;
    const std::size_t max_iterations = max_passes * std::max<std::size_t>(n, 1);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    while (true) {
        // i: maximal violator in I_up
        double gmax = -kInf;
        std::ptrdiff_t i = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (alpha[t] < c && -grad[t] > gmax) { gmax = -grad[t]; i = static_cast<std::ptrdiff_t>(t); }
            } else {
                if (alpha[t] > 0.0 && grad[t] > gmax) { gmax = grad[t]; i = static_cast<std::ptrdiff_t>(t); }
            }
        }
        // j: second-order choice in I_low
        double gmax2 = -kInf;
        double best_obj = kInf;
        std::ptrdiff_t j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (!(alpha[t] > 0.0)) continue;
                gmax2 = std::max(gmax2, grad[t]);
                const double diff = gmax + grad[t];
                if (i >= 0 && diff > 0.0) {
                    const auto ii = static_cast<std::size_t>(i);
                    double quad = q(ii, ii) + q(t, t) - 2.0 * y[ii] * q(ii, t);
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj < best_obj) { best_obj = obj; j = static_cast<std::ptrdiff_t>(t); }
                }
            } else {
                if (!(alpha[t] < c)) continue;
                gmax2 = std::max(gmax2, -grad[t]);
                const double diff = gmax - grad[t];
                if (i >= 0 && diff > 0.0) {
                    const auto ii = static_cast<std::size_t>(i);
                    double quad = q(ii, ii) + q(t, t) + 2.0 * y[ii] * q(ii, t);
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj < best_obj) { best_obj = obj; j = static_cast<std::ptrdiff_t>(t); }
                }
            }
        }
        sol.kkt_gap = gmax + gmax2;
        if (i < 0 || j < 0 || sol.kkt_gap < tolerance) {
            sol.converged = true;
            if (i < 0 || j < 0) sol.kkt_gap = std::max(sol.kkt_gap, 0.0);
            break;
        }
        if (sol.iterations >= max_iterations) break;
        ++sol.iterations;

        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        const double old_i = alpha[ui];
        const double old_j = alpha[uj];
        const double qij = q(ui, uj);
        if (y[ui] != y[uj]) {
            double quad = q(ui, ui) + q(uj, uj) + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[ui] - grad[uj]) / quad;
            const double diff = alpha[ui] - alpha[uj];
            alpha[ui] += delta;
            alpha[uj] += delta;
            if (diff > 0.0) {
                if (alpha[uj] < 0.0) { alpha[uj] = 0.0; alpha[ui] = diff; }
            } else {
                if (alpha[ui] < 0.0) { alpha[ui] = 0.0; alpha[uj] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[ui] > c) { alpha[ui] = c; alpha[uj] = c - diff; }
            } else {
                if (alpha[uj] > c) { alpha[uj] = c; alpha[ui] = c + diff; }
            }
        } else {
            double quad = q(ui, ui) + q(uj, uj) - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[ui] - grad[uj]) / quad;
            const double sum = alpha[ui] + alpha[uj];
            alpha[ui] -= delta;
            alpha[uj] += delta;
            if (sum > c) {
                if (alpha[ui] > c) { alpha[ui] = c; alpha[uj] = sum - c; }
            } else {
                if (alpha[uj] < 0.0) { alpha[uj] = 0.0; alpha[ui] = sum; }
            }
            if (sum > c) {
                if (alpha[uj] > c) { alpha[uj] = c; alpha[ui] = sum - c; }
            } else {
                if (alpha[ui] < 0.0) { alpha[ui] = 0.0; alpha[uj] = sum; }
            }
        }
        const double di = alpha[ui] - old_i;
        const double dj = alpha[uj] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += q(ui, t) * di + q(uj, t) * dj;
    }

    double ub = kInf;
    double lb = -kInf;
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (is_upper(alpha[t], c)) {
            if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (is_lower(alpha[t])) {
            if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    return sol;
}

double default_gamma(const FeatureMatrix& x) {
    const double count = static_cast<double>(x.values.size());
    if (count == 0.0) return 1.0;
    double mean = 0.0;
    for (double v : x.values) mean += v;
    mean /= count;
    double var = 0.0;
    for (double v : x.values) var += (v - mean) * (v - mean);
    var /= count;
    return var > 0.0 ? 1.0 / (static_cast<double>(x.cols) * var) : 1.0;
}

SvmModel fit_svm(const FeatureMatrix& x, const SvmParams& params, SvmSolution* solution_out) {
    const std::size_t n = x.rows;
    SvmModel model;
    model.kernel = KernelSpec{params.kernel, default_gamma(x), params.degree, params.coef0};

    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = model.kernel(x.row(i), x.row(j));
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x.targets[i] == 1 ? 1.0 : -1.0;

    SvmSolution sol = solve_svm_dual(k, y, params.c, params.tolerance, params.max_passes);
    for (std::size_t i = 0; i < n; ++i) {
        if (sol.alpha[i] > 0.0) {
            const auto r = x.row(i);
            model.support.insert(model.support.end(), r.begin(), r.end());
            model.coef.push_back(sol.alpha[i] * y[i]);
        }
    }
    model.rho = sol.rho;
    if (solution_out) *solution_out = std::move(sol);
    return model;
}

double svm_decision(const SvmModel& model, std::size_t dimension, std::span<const double> query) {
    double sum = 0.0;
    for (std::size_t s = 0; s < model.coef.size(); ++s) {
        sum += model.coef[s] * model.kernel({model.support.data() + s * dimension, dimension}, query);
    }
    return sum - model.rho;
}

} // namespace dfb
