#include "dfb/ballistics/corpus.hpp"

#include "dfb/error.hpp"
#include "dfb/random.hpp"
#include "dfb/run_info.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace dfb {
namespace fs = std::filesystem;

namespace {

using Rgb = std::array<double, 3>;

Rgb random_color(Rng& rng, Rgb lo, Rgb hi) {
    return {uniform_real(rng, lo[0], hi[0]), uniform_real(rng, lo[1], hi[1]), uniform_real(rng, lo[2], hi[2])};
}

// Soft coverage of an axis-aligned ellipse: ~1 inside, ~0 outside, with a
// logistic edge about `softness` pixels wide.
double ellipse_coverage(double x, double y, double cx, double cy, double rx, double ry, double softness) {
    const double dx = (x - cx) / rx;
    const double dy = (y - cy) / ry;
    const double r = std::sqrt(dx * dx + dy * dy);
    const double signed_px = (r - 1.0) * std::min(rx, ry);
    return 1.0 / (1.0 + std::exp(signed_px / softness));
}

void blend(Rgb& dst, const Rgb& src, double alpha) {
    for (std::size_t c = 0; c < 3; ++c) dst[c] += (src[c] - dst[c]) * alpha;
}

} // namespace

RasterImage synthetic_face(std::uint64_t seed, std::size_t width, std::size_t height) {
    Rng rng(seed);
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);

    const Rgb bg_a = random_color(rng, {20, 20, 20}, {235, 235, 235});
    const Rgb bg_b = random_color(rng, {20, 20, 20}, {235, 235, 235});
    const double bg_angle = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);

    const double cx = w * uniform_real(rng, 0.44, 0.56);
    const double cy = h * uniform_real(rng, 0.48, 0.58);
    const double rx = w * uniform_real(rng, 0.24, 0.32);
    const double ry = h * uniform_real(rng, 0.32, 0.40);
    const Rgb skin = random_color(rng, {120, 80, 60}, {245, 210, 190});
    const Rgb hair = random_color(rng, {15, 10, 5}, {200, 170, 120});
    const double hair_line = uniform_real(rng, 0.25, 0.55); // fraction of the head covered from the top
    const Rgb eye = random_color(rng, {10, 10, 10}, {90, 110, 120});
    const Rgb lips = random_color(rng, {140, 40, 50}, {220, 120, 130});
    const double eye_dx = rx * uniform_real(rng, 0.32, 0.45);
    const double eye_y = cy - ry * uniform_real(rng, 0.05, 0.20);
    const double eye_rx = rx * uniform_real(rng, 0.10, 0.16);
    const double eye_ry = ry * uniform_real(rng, 0.04, 0.08);
    const double mouth_y = cy + ry * uniform_real(rng, 0.45, 0.60);
    const double mouth_rx = rx * uniform_real(rng, 0.25, 0.40);
    const double mouth_ry = ry * uniform_real(rng, 0.05, 0.09);
    const double light_x = uniform_real(rng, -1.0, 1.0);
    const double light_y = uniform_real(rng, -1.0, 1.0);
    const double shading = uniform_real(rng, 0.10, 0.35);

    // low-frequency texture: a few random plane waves
    struct Wave {
        double fx, fy, phase, amplitude;
    };
    std::array<Wave, 4> waves{};
    for (auto& wave : waves) {
        const double period = uniform_real(rng, 12.0, 64.0);
        const double angle = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
        wave = {std::cos(angle) * 2.0 * std::numbers::pi / period, std::sin(angle) * 2.0 * std::numbers::pi / period,
                uniform_real(rng, 0.0, 2.0 * std::numbers::pi), uniform_real(rng, 1.0, 6.0)};
    }
    const double softness = uniform_real(rng, 0.8, 2.5);

    RasterImage image(width, height);
    for (std::size_t py = 0; py < height; ++py) {
        for (std::size_t px = 0; px < width; ++px) {
            const double x = static_cast<double>(px) + 0.5;
            const double y = static_cast<double>(py) + 0.5;
            const double t = 0.5 + 0.5 * ((x / w - 0.5) * std::cos(bg_angle) + (y / h - 0.5) * std::sin(bg_angle));
            Rgb color{};
            for (std::size_t c = 0; c < 3; ++c) color[c] = bg_a[c] + (bg_b[c] - bg_a[c]) * t;

            const double head = ellipse_coverage(x, y, cx, cy, rx, ry, softness);
            if (head > 1e-6) {
                const double nx = (x - cx) / rx;
                const double ny = (y - cy) / ry;
                const double lit = 1.0 + shading * (light_x * nx + light_y * ny) - 0.5 * shading * (nx * nx + ny * ny);
                Rgb face{skin[0] * lit, skin[1] * lit, skin[2] * lit};
                const double hair_edge = cy - ry + 2.0 * ry * hair_line;
                const double hair_cover = 1.0 / (1.0 + std::exp((y - hair_edge) / (softness * 2.0)));
                blend(face, hair, hair_cover);
                blend(face, eye, ellipse_coverage(x, y, cx - eye_dx, eye_y, eye_rx, eye_ry, softness * 0.6));
                blend(face, eye, ellipse_coverage(x, y, cx + eye_dx, eye_y, eye_rx, eye_ry, softness * 0.6));
                blend(face, lips, ellipse_coverage(x, y, cx, mouth_y, mouth_rx, mouth_ry, softness * 0.8));
                blend(color, face, head);
            }
            double texture = 0.0;
            for (const auto& wave : waves) texture += wave.amplitude * std::sin(wave.fx * x + wave.fy * y + wave.phase);
            for (std::size_t c = 0; c < 3; ++c) {
                image.at(px, py, c) = static_cast<std::uint8_t>(std::clamp(std::round(color[c] + texture), 0.0, 255.0));
            }
        }
    }
    return image;
}

std::vector<ImageSource> synthetic_corpus(const std::string& prefix, std::size_t count, std::uint64_t seed,
                                          std::size_t size) {
    if (size < 16) throw Error(ErrorKind::InvalidArgument, "synthetic images must be at least 16x16");
    std::vector<ImageSource> corpus;
    corpus.reserve(count);
    const std::uint64_t base = fnv1a64(prefix);
    for (std::size_t i = 0; i < count; ++i) {
        std::array<char, 32> digits{};
        std::snprintf(digits.data(), digits.size(), "%05zu", i);
        const std::uint64_t image_seed = mix_seed(seed, base + i);
        corpus.push_back({prefix + "_" + digits.data(), [image_seed, size] { return synthetic_face(image_seed, size, size); }});
    }
    return corpus;
}

std::vector<ImageSource> directory_corpus(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::FileNotFound, "no such image directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    std::vector<ImageSource> corpus;
    corpus.reserve(files.size());
    for (const auto& f : files) corpus.push_back({f.stem().string(), [f] { return load_image(f); }});
    return corpus;
}

} // namespace dfb
