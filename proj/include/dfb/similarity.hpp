#pragma once

#include "dfb/imaging.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dfb {

/// SSIM over luminance with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, L = 255. Only windows that fit entirely inside the image are
/// scored: map(row, col) belongs to the window centred on pixel
/// (col + kSsimRadius, row + kSsimRadius).
struct SsimResult {
    double mean_score = 0.0;
    std::size_t map_width = 0;
    std::size_t map_height = 0;
    std::vector<double> map;

    double at(std::size_t col, std::size_t row) const { return map[row * map_width + col]; }
};

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr std::size_t kSsimRadius = kSsimWindow / 2;
inline constexpr double kSsimSigma = 1.5;

/// Throws DimensionMismatch for differing sizes and InvalidArgument for images
/// smaller than the window.
SsimResult ssim(const RasterImage& a, const RasterImage& b);

/// Writes the map as 8-bit gray, mapping score s to round(255 (s + 1) / 2).
void save_ssim_map(const SsimResult& result, const std::filesystem::path& path);

/// Per-channel 256-bin histograms (R bins, then G, then B) normalised so that
/// all 768 bins together sum to one.
struct RgbHistogram {
    static constexpr std::size_t kBins = 256;
    static constexpr std::size_t kSize = 3 * kBins;

    std::array<double, kSize> bins{};
    std::size_t pixel_count = 0;

    double channel_bin(std::size_t channel, std::size_t value) const { return bins[channel * kBins + value]; }
};

RgbHistogram rgb_histogram(const RasterImage& image);

enum class HistogramMetric { Correlation, ChiSquare, Bhattacharyya };

std::string_view to_string(HistogramMetric metric) noexcept;

/// Histogram comparison on equal-length bin arrays:
///   Correlation   sum(d1 d2) / sqrt(sum(d1^2) sum(d2^2)), d = H - mean(H)
///   ChiSquare     sum over H1(i) > 0 of (H1(i) - H2(i))^2 / H1(i)
///   Bhattacharyya sqrt(1 - sum sqrt(H1 H2) / sqrt(mean(H1) mean(H2) N^2))
/// Returns nullopt when the correlation is undefined (a constant histogram).
/// Throws DimensionMismatch on differing lengths.
std::optional<double> compare_bins(std::span<const double> h1, std::span<const double> h2,
                                   HistogramMetric metric);

std::optional<double> compare(const RgbHistogram& h1, const RgbHistogram& h2, HistogramMetric metric);

} // namespace dfb
