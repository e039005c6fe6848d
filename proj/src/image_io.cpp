#include "dfb/error.hpp"
#include "dfb/imaging.hpp"

#include <png.h>
// jpeglib.h needs FILE and size_t declared first.
#include <cstdio>
#include <jpeglib.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

namespace dfb {
namespace fs = std::filesystem;

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_read(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec) || fs::is_directory(path, ec)) {
        throw Error(ErrorKind::FileNotFound, "no such image file: " + path.string());
    }
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return f;
}

FilePtr open_for_write(const fs::path& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw Error(ErrorKind::Io, "cannot create " + path.string());
    return f;
}

enum class Container { Png, Jpeg, Unknown };

Container sniff(std::FILE* f) {
    unsigned char magic[8] = {};
    const std::size_t n = std::fread(magic, 1, sizeof magic, f);
    std::rewind(f);
    if (n >= 8 && png_sig_cmp(magic, 0, 8) == 0) return Container::Png;
    if (n >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) return Container::Jpeg;
    return Container::Unknown;
}

// ---------------------------------------------------------------------------
// PNG

struct PngReadState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadState() { png_destroy_read_struct(&png, &info, nullptr); }
};

void png_error_to_longjmp(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_quiet_warning(png_structp, png_const_charp) {}

RasterImage decode_png(std::FILE* f, const fs::path& path) {
    PngReadState st;
    st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                    png_quiet_warning);
    if (!st.png) throw Error(ErrorKind::Io, "libpng initialisation failed");
    st.info = png_create_info_struct(st.png);
    if (!st.info) throw Error(ErrorKind::Io, "libpng initialisation failed");

    // Nothing with a non-trivial destructor may be created between setjmp and
    // the last libpng call; the pixel buffer is allocated up front for that reason.
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;

    if (setjmp(png_jmpbuf(st.png))) {
        throw Error(ErrorKind::DecodeFailed, "corrupt PNG stream: " + path.string());
    }
    png_init_io(st.png, f);
    png_read_info(st.png, st.info);
    width = png_get_image_width(st.png, st.info);
    height = png_get_image_height(st.png, st.info);
    const int color_type = png_get_color_type(st.png, st.info);
    const int bit_depth = png_get_bit_depth(st.png, st.info);

    if (bit_depth == 16) png_set_strip_16(st.png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
    if (png_get_valid(st.png, st.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(st.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(st.png);
    }
    png_set_strip_alpha(st.png);
    png_read_update_info(st.png, st.info);

    if (png_get_channels(st.png, st.info) != 3 || png_get_bit_depth(st.png, st.info) != 8) {
        throw Error(ErrorKind::UnsupportedFormat, "PNG color model not reducible to 8-bit RGB: " +
                                                      path.string());
    }
    pixels.resize(std::size_t{width} * height * 3);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + std::size_t{y} * width * 3;
    png_read_image(st.png, rows.data());
    png_read_end(st.png, nullptr);

    return RasterImage(width, height, std::move(pixels));
}

// ---------------------------------------------------------------------------
// JPEG

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr, int) {}

RasterImage decode_jpeg(std::FILE* f, const fs::path& path) {
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    err.base.emit_message = jpeg_silent;

    std::vector<std::uint8_t> pixels;
    std::vector<JSAMPLE> line;
    bool unsupported = false;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorKind::DecodeFailed,
                    std::string("corrupt JPEG stream (") + err.message + "): " + path.string());
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);

    if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
        unsupported = true;
    } else {
        cinfo.out_color_space = cinfo.jpeg_color_space == JCS_GRAYSCALE ? JCS_GRAYSCALE : JCS_RGB;
        jpeg_start_decompress(&cinfo);
        const std::size_t w = cinfo.output_width;
        const std::size_t h = cinfo.output_height;
        const std::size_t comps = static_cast<std::size_t>(cinfo.output_components);
        pixels.resize(w * h * 3);
        line.resize(w * comps);
        while (cinfo.output_scanline < cinfo.output_height) {
            const std::size_t y = cinfo.output_scanline;
            JSAMPROW row = line.data();
            jpeg_read_scanlines(&cinfo, &row, 1);
            std::uint8_t* dst = pixels.data() + y * w * 3;
            if (comps == 1) {
                for (std::size_t x = 0; x < w; ++x) dst[3 * x] = dst[3 * x + 1] = dst[3 * x + 2] = line[x];
            } else {
                std::memcpy(dst, line.data(), w * 3);
            }
        }
        jpeg_finish_decompress(&cinfo);
    }
    const std::size_t w = cinfo.output_width;
    const std::size_t h = cinfo.output_height;
    jpeg_destroy_decompress(&cinfo);

    if (unsupported) {
        throw Error(ErrorKind::UnsupportedFormat, "CMYK/YCCK JPEG is not supported: " + path.string());
    }
    return RasterImage(w, h, std::move(pixels));
}

void write_png(std::size_t width, std::size_t height, int color_type, int channels,
               const std::uint8_t* samples, const fs::path& path) {
    auto f = open_for_write(path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                              png_quiet_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::Io, "libpng initialisation failed");
    }
    std::vector<png_bytep> rows(height);
    for (std::size_t y = 0; y < height; ++y) {
        rows[y] = const_cast<png_bytep>(samples + y * width * channels);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::Io, "PNG encoding failed: " + path.string());
    }
    png_init_io(png, f.get());
    // Fast deflate: datasets write thousands of files and size is not a concern.
    png_set_compression_level(png, 1);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(f.get()) != 0) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

} // namespace

RasterImage load_image(const fs::path& path) {
    auto f = open_for_read(path);
    switch (sniff(f.get())) {
    case Container::Png: return decode_png(f.get(), path);
    case Container::Jpeg: return decode_jpeg(f.get(), path);
    case Container::Unknown: break;
    }
    throw Error(ErrorKind::DecodeFailed, "not a PNG or JPEG stream: " + path.string());
}

void save_png(const RasterImage& image, const fs::path& path) {
    write_png(image.width(), image.height(), PNG_COLOR_TYPE_RGB, 3, image.data().data(), path);
}

void save_gray_png(std::size_t width, std::size_t height, std::span<const std::uint8_t> samples,
                   const fs::path& path) {
    if (samples.size() != width * height || width == 0 || height == 0) {
        throw Error(ErrorKind::InvalidArgument, "gray buffer does not match its dimensions");
    }
    write_png(width, height, PNG_COLOR_TYPE_GRAY, 1, samples.data(), path);
}

void save_jpeg(const RasterImage& image, const fs::path& path, int quality) {
    auto f = open_for_write(path);
    jpeg_compress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        throw Error(ErrorKind::Io, std::string("JPEG encoding failed (") + err.message + ")");
    }
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, f.get());
    cinfo.image_width = static_cast<JDIMENSION>(image.width());
    cinfo.image_height = static_cast<JDIMENSION>(image.height());
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    const auto px = image.data();
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(px.data() + std::size_t{cinfo.next_scanline} * image.width() * 3);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
}

} // namespace dfb
