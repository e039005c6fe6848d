#include "dfb/imaging.hpp"

#include "dfb/error.hpp"

#include <algorithm>
#include <string>

namespace dfb {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::FileNotFound: return "file not found";
    case ErrorKind::DecodeFailed: return "decode failed";
    case ErrorKind::UnsupportedFormat: return "unsupported format";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::DataValidation: return "data validation";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::OperatorFailed: return "operator failed";
    }
    return "unknown";
}

RasterImage::RasterImage(std::size_t width, std::size_t height)
    : RasterImage(width, height, std::vector<std::uint8_t>(width * height * kChannels, 0)) {}

RasterImage::RasterImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width == 0 || height == 0) {
        throw Error(ErrorKind::InvalidArgument, "image dimensions must be non-zero");
    }
    if (data_.size() != width * height * kChannels) {
        throw Error(ErrorKind::InvalidArgument,
                    "pixel buffer holds " + std::to_string(data_.size()) + " bytes, expected " +
                        std::to_string(width * height * kChannels));
    }
}

RasterImage RasterImage::filled(std::size_t width, std::size_t height, std::uint8_t r,
                                std::uint8_t g, std::uint8_t b) {
    RasterImage image(width, height);
    auto px = image.data();
    for (std::size_t i = 0; i < px.size(); i += kChannels) {
        px[i] = r;
        px[i + 1] = g;
        px[i + 2] = b;
    }
    return image;
}

LumaImage to_luminance(const RasterImage& image) {
    LumaImage luma{image.width(), image.height(), std::vector<double>(image.pixel_count())};
    const auto px = image.data();
    for (std::size_t i = 0; i < luma.data.size(); ++i) {
        const double r = px[3 * i];
        const double g = px[3 * i + 1];
        const double b = px[3 * i + 2];
        // Same weights, rearranged around G so that gray pixels map to themselves
        // exactly (the three weights sum to one).
        const double y = g + kLumaR * (r - g) + kLumaB * (b - g);
        luma.data[i] = std::clamp(y, 0.0, 255.0);
    }
    return luma;
}

std::vector<Block8> partition_blocks(const LumaImage& image) {
    if (image.width < 8 || image.height < 8) {
        throw Error(ErrorKind::InvalidArgument,
                    "image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                        " is smaller than one 8x8 block");
    }
    const std::size_t cols = image.width / 8;
    const std::size_t rows = image.height / 8;
    std::vector<Block8> blocks(rows * cols);
    for (std::size_t br = 0; br < rows; ++br) {
        for (std::size_t bc = 0; bc < cols; ++bc) {
            Block8& block = blocks[br * cols + bc];
            block.block_row = br;
            block.block_col = bc;
            for (std::size_t y = 0; y < 8; ++y) {
                const double* row = &image.data[(br * 8 + y) * image.width + bc * 8];
                std::copy(row, row + 8, block.samples.begin() + y * 8);
            }
        }
    }
    return blocks;
}

} // namespace dfb
