#include "dfb/similarity.hpp"

#include "dfb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dfb {
namespace {

constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;
constexpr double kDynamicRange = 255.0;

std::array<double, kSsimWindow> gaussian_taps() {
    std::array<double, kSsimWindow> taps{};
    double sum = 0.0;
    for (std::size_t i = 0; i < kSsimWindow; ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(kSsimRadius);
        taps[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

// Separable "valid" Gaussian filter of a width x height plane.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t width, std::size_t height) {
    static const auto taps = gaussian_taps();
    const std::size_t ow = width - kSsimWindow + 1;
    const std::size_t oh = height - kSsimWindow + 1;
    std::vector<double> horizontal(ow * height);
    for (std::size_t y = 0; y < height; ++y) {
        const double* row = plane.data() + y * width;
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t t = 0; t < kSsimWindow; ++t) acc += taps[t] * row[x + t];
            horizontal[y * ow + x] = acc;
        }
    }
    std::vector<double> out(ow * oh);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t t = 0; t < kSsimWindow; ++t) acc += taps[t] * horizontal[(y + t) * ow + x];
            out[y * ow + x] = acc;
        }
    }
    return out;
}

} // namespace

SsimResult ssim(const RasterImage& a, const RasterImage& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "SSIM needs equal sizes, got " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                        " and " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
    if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
        throw Error(ErrorKind::InvalidArgument, "SSIM needs images of at least 11x11 pixels");
    }
    const LumaImage x = to_luminance(a);
    const LumaImage y = to_luminance(b);
    const std::size_t w = x.width;
    const std::size_t h = x.height;

    std::vector<double> xx(x.data.size());
    std::vector<double> yy(x.data.size());
    std::vector<double> xy(x.data.size());
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        xx[i] = x.data[i] * x.data[i];
        yy[i] = y.data[i] * y.data[i];
        xy[i] = x.data[i] * y.data[i];
    }
    const auto mu_x = filter_valid(x.data, w, h);
    const auto mu_y = filter_valid(y.data, w, h);
    const auto e_xx = filter_valid(xx, w, h);
    const auto e_yy = filter_valid(yy, w, h);
    const auto e_xy = filter_valid(xy, w, h);

    const double c1 = (kK1 * kDynamicRange) * (kK1 * kDynamicRange);
    const double c2 = (kK2 * kDynamicRange) * (kK2 * kDynamicRange);
    SsimResult result;
    result.map_width = w - kSsimWindow + 1;
    result.map_height = h - kSsimWindow + 1;
    result.map.resize(mu_x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mx = mu_x[i];
        const double my = mu_y[i];
        const double var_x = e_xx[i] - mx * mx;
        const double var_y = e_yy[i] - my * my;
        const double cov = e_xy[i] - mx * my;
        const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        const double den = (mx * mx + my * my + c1) * (var_x + var_y + c2);
        result.map[i] = num / den;
        sum += result.map[i];
    }
    result.mean_score = sum / static_cast<double>(result.map.size());
    return result;
}

void save_ssim_map(const SsimResult& result, const std::filesystem::path& path) {
    std::vector<std::uint8_t> gray(result.map.size());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const double level = std::round(255.0 * (result.map[i] + 1.0) / 2.0);
        gray[i] = static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
    }
    save_gray_png(result.map_width, result.map_height, gray, path);
}

RgbHistogram rgb_histogram(const RasterImage& image) {
    RgbHistogram hist;
    hist.pixel_count = image.pixel_count();
    if (hist.pixel_count == 0) return hist;
    std::array<std::size_t, RgbHistogram::kSize> counts{};
    const auto px = image.data();
    for (std::size_t i = 0; i < px.size(); i += 3) {
        ++counts[px[i]];
        ++counts[RgbHistogram::kBins + px[i + 1]];
        ++counts[2 * RgbHistogram::kBins + px[i + 2]];
    }
    const double total = 3.0 * static_cast<double>(hist.pixel_count);
    for (std::size_t i = 0; i < counts.size(); ++i) hist.bins[i] = static_cast<double>(counts[i]) / total;
    return hist;
}

std::string_view to_string(HistogramMetric metric) noexcept {
    switch (metric) {
    case HistogramMetric::Correlation: return "correlation";
    case HistogramMetric::ChiSquare: return "chi_square";
    case HistogramMetric::Bhattacharyya: return "bhattacharyya";
    }
    return "correlation";
}

std::optional<double> compare_bins(std::span<const double> h1, std::span<const double> h2,
                                   HistogramMetric metric) {
    if (h1.size() != h2.size() || h1.empty()) {
        throw Error(ErrorKind::DimensionMismatch, "histograms have different bin layouts");
    }
    const std::size_t n = h1.size();
    switch (metric) {
    case HistogramMetric::Correlation: {
        double mean1 = 0.0;
        double mean2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean1 += h1[i];
            mean2 += h2[i];
        }
        mean1 /= static_cast<double>(n);
        mean2 /= static_cast<double>(n);
        double num = 0.0;
        double ss1 = 0.0;
        double ss2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d1 = h1[i] - mean1;
            const double d2 = h2[i] - mean2;
            num += d1 * d2;
            ss1 += d1 * d1;
            ss2 += d2 * d2;
        }
        if (ss1 == 0.0 || ss2 == 0.0) return std::nullopt;
        // sqrt(x * x) == x exactly, so self-comparison yields exactly 1
        return std::clamp(num / std::sqrt(ss1 * ss2), -1.0, 1.0);
    }
    case HistogramMetric::ChiSquare: {
        double chi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (h1[i] > 0.0) chi += (h1[i] - h2[i]) * (h1[i] - h2[i]) / h1[i];
        }
        return chi;
    }
    case HistogramMetric::Bhattacharyya: {
        double sum1 = 0.0;
        double sum2 = 0.0;
        double overlap = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum1 += h1[i];
            sum2 += h2[i];
            overlap += std::sqrt(h1[i] * h2[i]);
        }
        // mean(H1) mean(H2) N^2 == sum(H1) sum(H2)
        const double norm = std::sqrt(sum1 * sum2);
        if (!(norm > 0.0)) return std::nullopt;
        return std::sqrt(std::max(0.0, 1.0 - overlap / norm));
    }
    }
    return std::nullopt;
}

std::optional<double> compare(const RgbHistogram& h1, const RgbHistogram& h2, HistogramMetric metric) {
    return compare_bins(h1.bins, h2.bins, metric);
}

} // namespace dfb
