#include "dfb/error.hpp"
#include "dfb/similarity.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace dfb {
namespace {

using testing::gentle_image;
using testing::random_image;

RasterImage add_noise(const RasterImage& img, double amplitude, std::uint64_t seed) {
    Rng rng(seed);
    RasterImage out = img;
    for (auto& v : out.data()) {
        const double n = uniform_real(rng, -amplitude, amplitude);
        v = static_cast<std::uint8_t>(std::clamp(std::lround(v + n), 0L, 255L));
    }
    return out;
}

TEST(Ssim, SelfSimilarityIsOne) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto img = random_image(40, 33, seed);
        const auto r = ssim(img, img);
        EXPECT_NEAR(r.mean_score, 1.0, 1e-12);
        EXPECT_EQ(r.map_width, 30u);
        EXPECT_EQ(r.map_height, 23u);
    }
}

TEST(Ssim, IsSymmetric) {
    const auto a = random_image(32, 32, 4), b = random_image(32, 32, 5);
    EXPECT_NEAR(ssim(a, b).mean_score, ssim(b, a).mean_score, 1e-12);
}

TEST(Ssim, InvertedImageScoresNegative) {
    const auto a = random_image(48, 48, 6);
    RasterImage inv = a;
    for (auto& v : inv.data()) v = static_cast<std::uint8_t>(255 - v);
    EXPECT_LT(ssim(a, inv).mean_score, 0.0);
}

TEST(Ssim, DecreasesWithNoiseAmplitude) {
    const auto base = gentle_image(96, 96, 0.3, 60.0, 100.0);
    double prev = 1.0;
    for (double amp : {5.0, 10.0, 20.0, 40.0}) {
        const double s = ssim(base, add_noise(base, amp, 7)).mean_score;
        EXPECT_LT(s, prev) << "amplitude " << amp;
        prev = s;
    }
}

TEST(Ssim, RejectsMismatchedOrTinyImages) {
    try {
        ssim(random_image(20, 20, 1), random_image(21, 20, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
    try {
        ssim(random_image(10, 20, 1), random_image(10, 20, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Histogram, NormalisedOverAllChannels) {
    const auto h = rgb_histogram(random_image(50, 40, 8));
    EXPECT_EQ(h.pixel_count, 2000u);
    EXPECT_NEAR(std::accumulate(h.bins.begin(), h.bins.end(), 0.0), 1.0, 1e-12);
    const auto red = rgb_histogram(RasterImage::filled(4, 4, 255, 0, 0));
    EXPECT_DOUBLE_EQ(red.channel_bin(0, 255), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(red.channel_bin(1, 0), 1.0 / 3.0);
}

TEST(Histogram, HandComputedFourBinCase) {
    const std::vector<double> h1{0.5, 0.3, 0.15, 0.05}, h2{0.4, 0.4, 0.15, 0.05};
    const double chi = 0.1 * 0.1 / 0.5 + 0.1 * 0.1 / 0.3;
    const double bhatt = std::sqrt(1.0 - (std::sqrt(0.20) + std::sqrt(0.12) + 0.15 + 0.05));
    EXPECT_NEAR(*compare_bins(h1, h2, HistogramMetric::ChiSquare), chi, 1e-12);
    EXPECT_NEAR(*compare_bins(h1, h2, HistogramMetric::ChiSquare), 0.0533333333333333, 1e-12);
    EXPECT_NEAR(*compare_bins(h1, h2, HistogramMetric::Bhattacharyya), bhatt, 1e-12);

    // Pearson correlation over the four bins, both means 0.25.
    const double num = 0.25 * 0.15 + 0.05 * 0.15 + 0.1 * 0.1 + 0.2 * 0.2;
    const double d1 = 0.25 * 0.25 + 0.05 * 0.05 + 0.1 * 0.1 + 0.2 * 0.2;
    const double d2 = 0.15 * 0.15 + 0.15 * 0.15 + 0.1 * 0.1 + 0.2 * 0.2;
    EXPECT_NEAR(*compare_bins(h1, h2, HistogramMetric::Correlation), num / std::sqrt(d1 * d2), 1e-12);
}

TEST(Histogram, SelfComparisonAnchors) {
    Rng rng(2022);
    for (int trial = 0; trial < 10'000; ++trial) {
        std::vector<double> h(16);
        for (auto& v : h) v = uniform_unit(rng);
        h[uniform_index(rng, h.size())] += 0.5; // never constant
        EXPECT_EQ(*compare_bins(h, h, HistogramMetric::Correlation), 1.0);
        EXPECT_EQ(*compare_bins(h, h, HistogramMetric::ChiSquare), 0.0);
        EXPECT_EQ(*compare_bins(h, h, HistogramMetric::Bhattacharyya), 0.0);
    }
}

TEST(Histogram, UndefinedCasesAreEmpty) {
    const std::vector<double> flat(4, 0.25), zero(4, 0.0), other{0.1, 0.2, 0.3, 0.4};
    EXPECT_FALSE(compare_bins(flat, other, HistogramMetric::Correlation).has_value());
    EXPECT_FALSE(compare_bins(zero, other, HistogramMetric::Bhattacharyya).has_value());
    // ChiSquare skips bins where the first histogram is empty.
    const std::vector<double> sparse{0.0, 0.5, 0.5, 0.0};
    EXPECT_NEAR(*compare_bins(sparse, other, HistogramMetric::ChiSquare),
                0.3 * 0.3 / 0.5 + 0.2 * 0.2 / 0.5, 1e-12);
    EXPECT_THROW(compare_bins(flat, std::vector<double>(3, 0.1), HistogramMetric::ChiSquare), Error);
}

} // namespace
} // namespace dfb
