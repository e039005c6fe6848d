#pragma once

#include "dfb/classify/dataset.hpp"
#include "dfb/imaging.hpp"
#include "dfb/random.hpp"

#include <cmath>
#include <filesystem>
#include <string>

namespace dfb::testing {

/// Draws one Laplace(0, beta) sample by inverting the CDF.
inline double laplace_sample(Rng& rng, double beta) {
    double u = uniform_unit(rng) - 0.5;
    while (u == -0.5) u = uniform_unit(rng) - 0.5;
    const double magnitude = -beta * std::log(1.0 - 2.0 * std::abs(u));
    return u < 0 ? -magnitude : magnitude;
}

inline double gaussian_sample(Rng& rng) {
    // Box-Muller on two open-interval uniforms.
    double u1 = uniform_unit(rng);
    while (u1 == 0.0) u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Two Gaussian blobs in 63-d centred on (-1,...,-1) and (+1,...,+1).
inline LabeledDataset make_blobs(std::size_t per_class, std::uint64_t seed, double sigma = 0.1,
                                 Split split = Split::Train) {
    Rng rng(seed);
    LabeledDataset data{{}, split};
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        LabeledRow row;
        row.label = (i % 2 == 0) ? Label::Deepfake2 : Label::Deepfake3;
        const double centre = row.label == Label::Deepfake2 ? -1.0 : 1.0;
        for (auto& v : row.features.values) v = centre + sigma * gaussian_sample(rng);
        row.features.source_id = "blob_" + std::to_string(i);
        data.rows.push_back(std::move(row));
    }
    return data;
}

inline RasterImage random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
    Rng rng(seed);
    RasterImage img(w, h);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(uniform_index(rng, 256));
    return img;
}

/// Smooth mid-range image whose values stay far from 0 and 255.
inline RasterImage gentle_image(std::size_t w, std::size_t h, double phase, double amplitude, double offset) {
    RasterImage img(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                const double v = offset + 10.0 * c +
                                 amplitude * std::sin(0.11 * x + phase + c) * std::cos(0.07 * y - phase);
                img.at(x, y, c) = static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return img;
}

/// Self-removing scratch directory.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        Rng rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("dfb_" + tag + "_" + std::to_string(uniform_index(rng, 1u << 30)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace dfb::testing
