#pragma once

#include "dfb/imaging.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace dfb {

/// A named image produced on demand, so corpora of thousands of images never
/// have to sit in memory at once.
struct ImageSource {
    std::string id;
    std::function<RasterImage()> load;
};

/// Smooth procedural portrait: gradient backdrop, shaded head ellipse, hair,
/// eyes and mouth with soft edges. Fully determined by (seed, size).
RasterImage synthetic_face(std::uint64_t seed, std::size_t width, std::size_t height);

/// `count` synthetic faces with ids "<prefix>_00000", ...; image i uses the
/// substream mix_seed(seed, hash(prefix) + i).
std::vector<ImageSource> synthetic_corpus(const std::string& prefix, std::size_t count, std::uint64_t seed,
                                          std::size_t size = 256);

/// Every .png/.jpg/.jpeg file directly inside `dir`, sorted by file name; the
/// id is the file stem.
std::vector<ImageSource> directory_corpus(const std::filesystem::path& dir);

} // namespace dfb
