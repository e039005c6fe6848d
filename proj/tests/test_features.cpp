#include "dfb/dct_features.hpp"
#include "dfb/error.hpp"
#include "dfb/feature_store.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace dfb {
namespace {

using testing::laplace_sample;
using testing::random_image;

TEST(Luminance, GrayPixelsMapToThemselves) {
    for (int v : {0, 1, 77, 128, 254, 255}) {
        const auto img = RasterImage::filled(3, 2, v, v, v);
        for (double y : to_luminance(img).data) EXPECT_EQ(y, static_cast<double>(v));
    }
}

TEST(Luminance, UsesBt601Weights) {
    const auto luma = to_luminance(RasterImage::filled(1, 1, 255, 0, 0));
    EXPECT_NEAR(luma.data[0], 0.299 * 255, 1e-9);
    EXPECT_NEAR(to_luminance(RasterImage::filled(1, 1, 0, 0, 255)).data[0], 0.114 * 255, 1e-9);
}

TEST(Blocks, CropsToWholeBlocksInRasterOrder) {
    const auto luma = to_luminance(random_image(20, 17, 1));
    const auto blocks = partition_blocks(luma);
    ASSERT_EQ(blocks.size(), 4u); // 2 x 2 after cropping
    EXPECT_EQ(blocks[1].block_row, 0u);
    EXPECT_EQ(blocks[1].block_col, 1u);
    EXPECT_EQ(blocks[3].samples[9], luma.at(8 + 1, 8 + 1));
}

TEST(Blocks, TooSmallImageIsRejected) {
    const auto luma = to_luminance(random_image(7, 30, 2));
    try {
        partition_blocks(luma);
        FAIL() << "expected InvalidArgument";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Beta, RecoversLaplaceScale) {
    Rng rng(2022);
    for (double beta : {0.5, 2.0, 10.0}) {
        std::vector<double> xs(1'000'000);
        for (auto& x : xs) x = laplace_sample(rng, beta);
        const auto model = estimate_beta(xs, 5);
        EXPECT_LT(std::abs(model.beta - beta) / beta, 0.01) << "beta " << beta;
        EXPECT_NEAR(model.mu, 0.0, 0.05 * beta);
        EXPECT_EQ(model.position, 5u);
    }
}

TEST(Beta, IsPopulationSigmaOverRootTwo) {
    const std::vector<double> xs{1.0, 3.0}; // mean 2, population sigma 1
    EXPECT_NEAR(estimate_beta(xs, 1).beta, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Beta, RejectsBadInput) {
    const std::vector<double> one{1.0}, two{1.0, 2.0};
    EXPECT_THROW(estimate_beta(one, 1), Error);
    EXPECT_THROW(estimate_beta(two, 0), Error);
    EXPECT_THROW(estimate_beta(two, 64), Error);
}

TEST(Features, ConstantImageGivesZeroVector) {
    const auto betas = extract_features(RasterImage::filled(64, 64, 90, 90, 90), "flat");
    EXPECT_EQ(betas.source_id, "flat");
    for (double b : betas.values) EXPECT_EQ(b, 0.0);
}

TEST(Features, MatchesBruteForceRecomputation) {
    const RasterImage img = random_image(64, 64, 99);
    const BetaVector got = extract_features(img);

    // Independent recomputation: luma, 64 blocks, separable cosine sums,
    // zigzag position looked up by walking anti-diagonals.
    std::vector<std::pair<int, int>> order;
    for (int s = 0; s <= 14; ++s) {
        std::vector<std::pair<int, int>> diag;
        for (int u = 0; u < 8; ++u) {
            const int v = s - u;
            if (v >= 0 && v < 8) diag.emplace_back(u, v);
        }
        if (s % 2 == 0) std::reverse(diag.begin(), diag.end()); // even diagonals run bottom-left to top-right
        order.insert(order.end(), diag.begin(), diag.end());
    }
    std::vector<std::vector<double>> samples(64);
    for (int by = 0; by < 8; ++by) {
        for (int bx = 0; bx < 8; ++bx) {
            for (int k = 1; k < 64; ++k) {
                const auto [u, v] = order[k];
                double sum = 0.0;
                for (int x = 0; x < 8; ++x) {
                    for (int y = 0; y < 8; ++y) {
                        const std::size_t px = bx * 8 + y, py = by * 8 + x;
                        const double luma = 0.299 * img.at(px, py, 0) + 0.587 * img.at(px, py, 1) +
                                            0.114 * img.at(px, py, 2) - 128.0;
                        sum += luma * std::cos((2 * x + 1) * u * M_PI / 16) * std::cos((2 * y + 1) * v * M_PI / 16);
                    }
                }
                const double cu = u == 0 ? std::sqrt(0.125) : 0.5, cv = v == 0 ? std::sqrt(0.125) : 0.5;
                samples[k].push_back(cu * cv * sum);
            }
        }
    }
    for (int k = 1; k < 64; ++k) {
        double mean = 0.0;
        for (double s : samples[k]) mean += s;
        mean /= 64.0;
        double var = 0.0;
        for (double s : samples[k]) var += (s - mean) * (s - mean);
        const double beta = std::sqrt(var / 64.0) / std::sqrt(2.0);
        EXPECT_NEAR(got.values[k - 1], beta, 1e-9 * std::max(1.0, beta)) << "position " << k;
    }
}

TEST(Features, NeedsAtLeastTwoBlocks) {
    EXPECT_THROW(extract_features(random_image(8, 8, 3)), Error);
    EXPECT_NO_THROW(extract_features(random_image(16, 8, 3)));
}

TEST(Features, AverageIsElementwiseMean) {
    BetaVector a, b;
    for (std::size_t i = 0; i < kAcCount; ++i) {
        a.values[i] = static_cast<double>(i);
        b.values[i] = 3.0 * static_cast<double>(i);
    }
    const std::vector<BetaVector> both{a, b};
    const auto mean = average_betas(both);
    for (std::size_t i = 0; i < kAcCount; ++i) EXPECT_DOUBLE_EQ(mean[i], 2.0 * static_cast<double>(i));
    EXPECT_THROW(average_betas(std::span<const BetaVector>{}), Error);
}

TEST(FeatureStore, CsvRoundTripIsExact) {
    std::vector<FeatureRow> rows(3);
    Rng rng(5);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].features.source_id = "img_" + std::to_string(r);
        for (auto& v : rows[r].features.values) v = uniform_real(rng, 0.0, 50.0);
    }
    rows[0].label = Label::Deepfake2;
    rows[1].label = Label::Deepfake3;

    std::stringstream buf;
    write_feature_csv(buf, rows, "# provenance line");
    const std::string text = buf.str();
    EXPECT_EQ(text.rfind("# provenance line\nsource_id,label,beta_1,", 0), 0u);

    const auto back = read_feature_csv(buf);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        EXPECT_EQ(back[r].features.source_id, rows[r].features.source_id);
        EXPECT_EQ(back[r].label, rows[r].label);
        EXPECT_EQ(back[r].features.values, rows[r].features.values);
    }
}

TEST(FeatureStore, RejectsMalformedRows) {
    std::stringstream bad("source_id,label,beta_1\nx,Deepfake-2,1.0\n");
    EXPECT_THROW(read_feature_csv(bad), Error);
}

} // namespace
} // namespace dfb
