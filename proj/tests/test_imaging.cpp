#include "dfb/error.hpp"
#include "dfb/imaging.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <jpeglib.h>

namespace dfb {
namespace {

using testing::random_image;
using testing::TempDir;

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no dfb::Error thrown";
    return ErrorKind::InvalidArgument;
}

void write_gray_png(const std::filesystem::path& path, std::size_t w, std::size_t h) {
    std::vector<std::uint8_t> px(w * h);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(i * 7);
    save_gray_png(w, h, px, path);
}

void write_cmyk_jpeg(const std::filesystem::path& path) {
    FILE* f = std::fopen(path.c_str(), "wb");
    ASSERT_NE(f, nullptr);
    jpeg_compress_struct cinfo;
    jpeg_error_mgr jerr;
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, f);
    cinfo.image_width = 8;
    cinfo.image_height = 8;
    cinfo.input_components = 4;
    cinfo.in_color_space = JCS_CMYK;
    jpeg_set_defaults(&cinfo);
    jpeg_start_compress(&cinfo, TRUE);
    std::vector<JSAMPLE> row(8 * 4, 100);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW r = row.data();
        jpeg_write_scanlines(&cinfo, &r, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(f);
}

TEST(RasterImage, ValidatesBufferSize) {
    EXPECT_THROW(RasterImage(2, 2, std::vector<std::uint8_t>(11)), Error);
    EXPECT_NO_THROW(RasterImage(2, 2, std::vector<std::uint8_t>(12)));
}

TEST(ImageIo, PngRoundTripIsLossless) {
    TempDir dir("png");
    const auto img = random_image(256, 256, 3);
    save_png(img, dir.path() / "a.png");
    const auto back = load_image(dir.path() / "a.png");
    EXPECT_EQ(back.width(), 256u);
    EXPECT_EQ(back.height(), 256u);
    EXPECT_EQ(back, img);
}

TEST(ImageIo, GrayPngIsReplicated) {
    TempDir dir("gray");
    write_gray_png(dir.path() / "g.png", 9, 5);
    const auto img = load_image(dir.path() / "g.png");
    ASSERT_EQ(img.pixel_count(), 45u);
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 0; x < 9; ++x) {
            EXPECT_EQ(img.at(x, y, 0), img.at(x, y, 1));
            EXPECT_EQ(img.at(x, y, 1), img.at(x, y, 2));
            EXPECT_EQ(img.at(x, y, 0), static_cast<std::uint8_t>((y * 9 + x) * 7));
        }
    }
}

TEST(ImageIo, JpegRoundTripIsClose) {
    TempDir dir("jpg");
    const auto img = RasterImage::filled(32, 24, 120, 60, 200);
    save_jpeg(img, dir.path() / "a.jpg", 95);
    const auto back = load_image(dir.path() / "a.jpg");
    ASSERT_EQ(back.width(), 32u);
    ASSERT_EQ(back.height(), 24u);
    for (std::size_t i = 0; i < back.data().size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 4);
}

TEST(ImageIo, ErrorKinds) {
    TempDir dir("err");
    EXPECT_EQ(kind_of([&] { load_image(dir.path() / "missing.png"); }), ErrorKind::FileNotFound);

    std::ofstream(dir.path() / "empty.png").close();
    EXPECT_EQ(kind_of([&] { load_image(dir.path() / "empty.png"); }), ErrorKind::DecodeFailed);

    std::ofstream(dir.path() / "text.png") << "definitely not an image";
    EXPECT_EQ(kind_of([&] { load_image(dir.path() / "text.png"); }), ErrorKind::DecodeFailed);

    // A PNG signature followed by garbage fails inside libpng.
    std::ofstream(dir.path() / "trunc.png", std::ios::binary) << "\x89PNG\r\n\x1a\n garbage";
    EXPECT_EQ(kind_of([&] { load_image(dir.path() / "trunc.png"); }), ErrorKind::DecodeFailed);

    write_cmyk_jpeg(dir.path() / "cmyk.jpg");
    EXPECT_EQ(kind_of([&] { load_image(dir.path() / "cmyk.jpg"); }), ErrorKind::UnsupportedFormat);
}

} // namespace
} // namespace dfb
