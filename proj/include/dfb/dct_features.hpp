#pragma once

#include "dfb/imaging.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dfb {

/// Number of AC coefficients in an 8x8 block, i.e. the feature dimension.
inline constexpr std::size_t kAcCount = 63;

/// Frequency-domain 8x8 block, row-major with index u * 8 + v where u is the
/// vertical (row) frequency and v the horizontal (column) frequency.
struct CoeffBlock {
    std::array<double, 64> coefficients{};

    double at(std::size_t u, std::size_t v) const { return coefficients[u * 8 + v]; }
};

/// Zero-mean Laplacian fitted to one AC position.
struct LaplacianModel {
    double mu = 0.0;
    double beta = 0.0;
    std::size_t position = 0; // zigzag index, 1..63
};

/// The 63 Laplacian scales of an image, index 0 <-> zigzag AC index 1.
struct BetaVector {
    std::array<double, kAcCount> values{};
    std::string source_id;

    std::span<const double> span() const noexcept { return values; }
};

/// Orthonormal 2-D DCT-II of the block after subtracting 128 from each sample.
CoeffBlock dct2_8x8(const Block8& block);

/// Inverse of dct2_8x8, including the +128 level shift.
std::array<double, 64> idct2_8x8(const CoeffBlock& coeffs);

/// JPEG zigzag scan: kZigzagOrder[i] is the row-major block position that
/// lands at scan index i.
inline constexpr std::array<std::size_t, 64> kZigzagOrder = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

std::array<double, 64> zigzag(const CoeffBlock& coeffs);
CoeffBlock unzigzag(std::span<const double, 64> scan);

/// beta = sigma / sqrt(2) with sigma the population standard deviation about
/// the sample mean. Needs at least two samples.
LaplacianModel estimate_beta(std::span<const double> samples, std::size_t position);

/// Full feature pipeline: luminance, 8x8 tiling, DCT, zigzag, then one beta
/// per AC position pooled over all blocks.
BetaVector extract_features(const RasterImage& image, std::string source_id = {});

/// Component-wise mean of a non-empty set of feature vectors.
std::array<double, kAcCount> average_betas(std::span<const BetaVector> features);

} // namespace dfb
