#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dfb {

/// 8-bit interleaved RGB raster, row-major.
class RasterImage {
public:
    RasterImage() = default;
    /// Zero-filled image. Throws InvalidArgument on a zero dimension.
    RasterImage(std::size_t width, std::size_t height);
    /// Takes ownership of `data`; its length must be width * height * 3.
    RasterImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

    static constexpr std::size_t kChannels = 3;

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t at(std::size_t x, std::size_t y, std::size_t channel) const {
        return data_[(y * width_ + x) * kChannels + channel];
    }
    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t channel) {
        return data_[(y * width_ + x) * kChannels + channel];
    }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    /// Image filled with one color.
    static RasterImage filled(std::size_t width, std::size_t height, std::uint8_t r, std::uint8_t g,
                              std::uint8_t b);

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Single-channel real-valued luminance plane with samples in [0, 255].
struct LumaImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> data;

    double at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
};

/// One non-overlapping 8x8 tile. `block_row`/`block_col` index the tile grid,
/// so the pixel origin is (8 * block_col, 8 * block_row).
struct Block8 {
    std::array<double, 64> samples{};
    std::size_t block_row = 0;
    std::size_t block_col = 0;
};

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Decodes a PNG or JPEG into 8-bit RGB. Grayscale sources are replicated into
/// all three channels, 16-bit samples are reduced to 8 bits and alpha is
/// dropped. Errors: FileNotFound, DecodeFailed, UnsupportedFormat (CMYK/YCCK).
RasterImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG.
void save_png(const RasterImage& image, const std::filesystem::path& path);

/// Writes an 8-bit single-channel PNG from a width*height buffer.
void save_gray_png(std::size_t width, std::size_t height, std::span<const std::uint8_t> samples,
                   const std::filesystem::path& path);

/// Writes a baseline RGB JPEG (quality 1..100).
void save_jpeg(const RasterImage& image, const std::filesystem::path& path, int quality = 95);

/// BT.601 luma: Y = 0.299 R + 0.587 G + 0.114 B, unrounded.
LumaImage to_luminance(const RasterImage& image);

/// Splits into floor(w/8) x floor(h/8) blocks in row-major block order; the
/// right and bottom remainders are discarded. Throws InvalidArgument when the
/// image is smaller than 8x8.
std::vector<Block8> partition_blocks(const LumaImage& image);

} // namespace dfb
