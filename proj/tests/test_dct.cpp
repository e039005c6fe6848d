#include "dfb/dct_features.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace dfb {
namespace {

Block8 random_block(Rng& rng) {
    Block8 b;
    for (auto& s : b.samples) s = static_cast<double>(uniform_index(rng, 256));
    return b;
}

// Straight-line inverse DCT-II written from the textbook formula, with the
// level shift undone at the end.
std::array<double, 64> brute_force_inverse(const CoeffBlock& f) {
    std::array<double, 64> out{};
    for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
            double sum = 0.0;
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    const double cu = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
                    const double cv = v == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
                    sum += cu * cv * f.at(u, v) * std::cos((2 * x + 1) * u * M_PI / 16.0) *
                           std::cos((2 * y + 1) * v * M_PI / 16.0);
                }
            }
            out[x * 8 + y] = sum + 128.0;
        }
    }
    return out;
}

TEST(Dct, MatchesBruteForceInverse) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Block8 b = random_block(rng);
        const auto back = brute_force_inverse(dct2_8x8(b));
        for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(back[i], b.samples[i], 1e-9);
    }
}

TEST(Dct, RoundTripAndParseval) {
    Rng rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const Block8 b = random_block(rng);
        const CoeffBlock c = dct2_8x8(b);
        const auto back = idct2_8x8(c);
        double energy_in = 0.0, energy_out = 0.0;
        for (std::size_t i = 0; i < 64; ++i) {
            ASSERT_NEAR(back[i], b.samples[i], 1e-9);
            energy_in += (b.samples[i] - 128.0) * (b.samples[i] - 128.0);
            energy_out += c.coefficients[i] * c.coefficients[i];
        }
        if (energy_in > 0) {
            EXPECT_LT(std::abs(energy_out - energy_in) / energy_in, 1e-6);
        }
    }
}

TEST(Dct, ConstantBlockHasOnlyDc) {
    Block8 b;
    b.samples.fill(200.0);
    const CoeffBlock c = dct2_8x8(b);
    EXPECT_NEAR(c.at(0, 0), 8.0 * (200.0 - 128.0), 1e-9);
    for (std::size_t i = 1; i < 64; ++i) EXPECT_NEAR(c.coefficients[i], 0.0, 1e-9);

    b.samples.fill(128.0);
    for (double v : dct2_8x8(b).coefficients) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Zigzag, IsPermutationWithAnchors) {
    std::set<std::size_t> seen(kZigzagOrder.begin(), kZigzagOrder.end());
    EXPECT_EQ(seen.size(), 64u);
    EXPECT_EQ(*seen.begin(), 0u);
    EXPECT_EQ(*seen.rbegin(), 63u);
    // (row, col) -> raster index row*8+col
    EXPECT_EQ(kZigzagOrder[0], 0u * 8 + 0);
    EXPECT_EQ(kZigzagOrder[1], 0u * 8 + 1);
    EXPECT_EQ(kZigzagOrder[2], 1u * 8 + 0);
    EXPECT_EQ(kZigzagOrder[63], 7u * 8 + 7);
}

TEST(Zigzag, FollowsAntiDiagonals) {
    // Scan position must never decrease the anti-diagonal index u+v.
    for (std::size_t k = 1; k < 64; ++k) {
        const auto prev = kZigzagOrder[k - 1], cur = kZigzagOrder[k];
        EXPECT_LE(prev / 8 + prev % 8, cur / 8 + cur % 8);
    }
}

TEST(Zigzag, UnzigzagInvertsZigzag) {
    Rng rng(13);
    const CoeffBlock c = dct2_8x8(random_block(rng));
    const auto scan = zigzag(c);
    EXPECT_EQ(scan[0], c.at(0, 0));
    EXPECT_EQ(scan[1], c.at(0, 1));
    EXPECT_EQ(scan[2], c.at(1, 0));
    EXPECT_EQ(unzigzag(scan).coefficients, c.coefficients);
}

} // namespace
} // namespace dfb
