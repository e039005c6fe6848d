#include "dfb/dct_features.hpp"

#include "dfb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dfb {
namespace {

// basis[u][x] = alpha(u) * cos((2x + 1) u pi / 16)
struct DctBasis {
    std::array<std::array<double, 8>, 8> c{};

    DctBasis() {
        for (std::size_t u = 0; u < 8; ++u) {
            const double alpha = u == 0 ? 1.0 / (2.0 * std::numbers::sqrt2) : 0.5;
            for (std::size_t x = 0; x < 8; ++x) {
                c[u][x] = alpha * std::cos(static_cast<double>((2 * x + 1) * u) * std::numbers::pi / 16.0);
            }
        }
    }
};

const DctBasis& basis() {
    static const DctBasis b;
    return b;
}

} // namespace

CoeffBlock dct2_8x8(const Block8& block) {
    const auto& c = basis().c;
    // rows first: tmp[x][v] = sum_y f(x,y) c[v][y]
    std::array<double, 64> tmp{};
    for (std::size_t x = 0; x < 8; ++x) {
        for (std::size_t v = 0; v < 8; ++v) {
            double acc = 0.0;
            for (std::size_t y = 0; y < 8; ++y) acc += (block.samples[x * 8 + y] - 128.0) * c[v][y];
            tmp[x * 8 + v] = acc;
        }
    }
    CoeffBlock out;
    for (std::size_t u = 0; u < 8; ++u) {
        for (std::size_t v = 0; v < 8; ++v) {
            double acc = 0.0;
            for (std::size_t x = 0; x < 8; ++x) acc += c[u][x] * tmp[x * 8 + v];
            out.coefficients[u * 8 + v] = acc;
        }
    }
    return out;
}

std::array<double, 64> idct2_8x8(const CoeffBlock& coeffs) {
    const auto& c = basis().c;
    std::array<double, 64> tmp{};
    for (std::size_t u = 0; u < 8; ++u) {
        for (std::size_t y = 0; y < 8; ++y) {
            double acc = 0.0;
            for (std::size_t v = 0; v < 8; ++v) acc += coeffs.coefficients[u * 8 + v] * c[v][y];
            tmp[u * 8 + y] = acc;
        }
    }
    std::array<double, 64> out{};
    for (std::size_t x = 0; x < 8; ++x) {
        for (std::size_t y = 0; y < 8; ++y) {
            double acc = 0.0;
            for (std::size_t u = 0; u < 8; ++u) acc += c[u][x] * tmp[u * 8 + y];
            out[x * 8 + y] = acc + 128.0;
        }
    }
    return out;
}

std::array<double, 64> zigzag(const CoeffBlock& coeffs) {
    std::array<double, 64> scan{};
    for (std::size_t i = 0; i < 64; ++i) scan[i] = coeffs.coefficients[kZigzagOrder[i]];
    return scan;
}

CoeffBlock unzigzag(std::span<const double, 64> scan) {
    CoeffBlock out;
    for (std::size_t i = 0; i < 64; ++i) out.coefficients[kZigzagOrder[i]] = scan[i];
    return out;
}

LaplacianModel estimate_beta(std::span<const double> samples, std::size_t position) {
    if (samples.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "beta estimation needs at least two samples");
    }
    if (position < 1 || position > kAcCount) {
        throw Error(ErrorKind::InvalidArgument, "AC position must lie in 1..63");
    }
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    // Identical samples have zero spread; summation rounding must not leak in.
    if (std::all_of(samples.begin(), samples.end(), [&](double s) { return s == samples.front(); })) {
        return LaplacianModel{samples.front(), 0.0, position};
    }
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double sigma = std::sqrt(ss / n);
    return LaplacianModel{mean, sigma / std::numbers::sqrt2, position};
}

BetaVector extract_features(const RasterImage& image, std::string source_id) {
    const auto blocks = partition_blocks(to_luminance(image));
    if (blocks.size() < 2) {
        throw Error(ErrorKind::InvalidArgument,
                    "feature extraction needs at least two 8x8 blocks per image");
    }
    // coefficients[i][b]: zigzag AC index i+1 of block b
    std::vector<std::vector<double>> per_position(kAcCount, std::vector<double>(blocks.size()));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto scan = zigzag(dct2_8x8(blocks[b]));
        for (std::size_t i = 0; i < kAcCount; ++i) per_position[i][b] = scan[i + 1];
    }
    BetaVector features;
    features.source_id = std::move(source_id);
    for (std::size_t i = 0; i < kAcCount; ++i) {
        features.values[i] = estimate_beta(per_position[i], i + 1).beta;
    }
    return features;
}

std::array<double, kAcCount> average_betas(std::span<const BetaVector> features) {
    if (features.empty()) throw Error(ErrorKind::InvalidArgument, "cannot average an empty set");
    std::array<double, kAcCount> mean{};
    for (const auto& f : features) {
        for (std::size_t i = 0; i < kAcCount; ++i) mean[i] += f.values[i];
    }
    for (double& m : mean) m /= static_cast<double>(features.size());
    return mean;
}

} // namespace dfb
