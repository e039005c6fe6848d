#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dfb {

enum class SvmKernel { Linear, Poly, Rbf, Sigmoid };

std::string_view to_string(SvmKernel kernel) noexcept;
SvmKernel parse_kernel(std::string_view text);

struct KernelSpec {
    SvmKernel kind = SvmKernel::Linear;
    double gamma = 1.0;
    int degree = 3;
    double coef0 = 0.0;

    double operator()(std::span<const double> a, std::span<const double> b) const;
};

/// Outcome of the dual solve: min 1/2 a'Qa - e'a s.t. y'a = 0, 0 <= a <= C,
/// Q_ij = y_i y_j K_ij. Decision function: sum_i a_i y_i K(x_i, x) - rho.
struct SvmSolution {
    std::vector<double> alpha;
    std::vector<double> gradient; // Qa - e
    double rho = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Maximal KKT violation m(a) - M(a) at exit; below tolerance on convergence.
    double kkt_gap = 0.0;
};

/// SMO with second-order working-set selection over a precomputed n x n kernel
/// matrix (row-major). `y` holds +1/-1. Stops when the KKT gap drops below
/// `tolerance` or after `max_passes * n` pair updates.
SvmSolution solve_svm_dual(std::span<const double> kernel_matrix, std::span<const double> y, double c,
                           double tolerance, std::size_t max_passes);

} // namespace dfb
