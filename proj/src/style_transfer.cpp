#include "dfb/ballistics/style_transfer.hpp"

#include "dfb/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>

namespace dfb {
namespace fs = std::filesystem;

namespace {

struct ChannelStats {
    std::array<double, 3> mean{};
    std::array<double, 3> stddev{};
};

ChannelStats channel_stats(const RasterImage& image) {
    ChannelStats s;
    const auto px = image.data();
    const double n = static_cast<double>(image.pixel_count());
    for (std::size_t i = 0; i < px.size(); i += 3) {
        for (std::size_t c = 0; c < 3; ++c) s.mean[c] += px[i + c];
    }
    for (double& m : s.mean) m /= n;
    std::array<double, 3> ss{};
    for (std::size_t i = 0; i < px.size(); i += 3) {
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = px[i + c] - s.mean[c];
            ss[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < 3; ++c) s.stddev[c] = std::sqrt(ss[c] / n);
    return s;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

} // namespace

RasterImage proxy_transfer(const RasterImage& source, const RasterImage& target) {
    if (source.empty() || target.empty()) {
        throw Error(ErrorKind::InvalidArgument, "style transfer needs non-empty images");
    }
    const ChannelStats src = channel_stats(source);
    const ChannelStats tgt = channel_stats(target);
    RasterImage out(source.width(), source.height());
    const auto in = source.data();
    auto dst = out.data();
    for (std::size_t c = 0; c < 3; ++c) {
        if (src.stddev[c] == 0.0) {
            const std::uint8_t v = to_byte(tgt.mean[c]);
            for (std::size_t i = c; i < dst.size(); i += 3) dst[i] = v;
            continue;
        }
        const double gain = tgt.stddev[c] / src.stddev[c];
        for (std::size_t i = c; i < dst.size(); i += 3) {
            dst[i] = to_byte((in[i] - src.mean[c]) * gain + tgt.mean[c]);
        }
    }
    return out;
}

std::string shell_quote(const std::string& text) {
    std::string out = "'";
    for (char ch : text) {
        if (ch == '\'') out += "'\\''";
        else out += ch;
    }
    out += '\'';
    return out;
}

ExternalTransfer::ExternalTransfer(std::string command_template, fs::path work_dir, std::string engine_id,
                                   std::optional<std::uint64_t> seed, std::size_t max_concurrent)
    : template_(std::move(command_template)), work_dir_(std::move(work_dir)), engine_id_(std::move(engine_id)),
      seed_(seed),
      slots_(std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(std::max<std::size_t>(max_concurrent, 1)))) {
    for (const char* key : {"{source}", "{target}", "{output}"}) {
        if (template_.find(key) == std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, std::string("operator command lacks the ") + key + " placeholder");
        }
    }
    std::error_code ec;
    fs::create_directories(work_dir_, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create operator work directory " + work_dir_.string());
}

std::string ExternalTransfer::id() const {
    std::string id = "external:" + engine_id_;
    if (seed_) id += ":seed=" + std::to_string(*seed_);
    return id;
}

std::string ExternalTransfer::render_command(const fs::path& source, const fs::path& target,
                                             const fs::path& output) const {
    std::string cmd = template_;
    auto replace_all = [&cmd](const std::string& key, const std::string& value) {
        for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size())) {
            cmd.replace(pos, key.size(), value);
        }
    };
    replace_all("{source}", shell_quote(source.string()));
    replace_all("{target}", shell_quote(target.string()));
    replace_all("{output}", shell_quote(output.string()));
    return cmd;
}

RasterImage ExternalTransfer::apply(const RasterImage& source, const RasterImage& target) const {
    const std::uint64_t n = counter_.fetch_add(1);
    const std::string stem = "op_" + std::to_string(::getpid()) + "_" + std::to_string(n);
    const fs::path src = work_dir_ / (stem + "_source.png");
    const fs::path tgt = work_dir_ / (stem + "_target.png");
    const fs::path out = work_dir_ / (stem + "_output.png");
    struct Cleanup {
        std::array<fs::path, 3> paths;
        ~Cleanup() {
            std::error_code ec;
            for (const auto& p : paths) fs::remove(p, ec);
        }
    } cleanup{{src, tgt, out}};

    save_png(source, src);
    save_png(target, tgt);
    int status = 0;
    {
        slots_->acquire();
        status = std::system(render_command(src, tgt, out).c_str());
        slots_->release();
    }
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw Error(ErrorKind::OperatorFailed, "engine '" + engine_id_ + "' failed (status " +
                                                   std::to_string(status) + ")");
    }
    RasterImage result;
    try {
        result = load_image(out);
    } catch (const Error& e) {
        throw Error(ErrorKind::OperatorFailed, "engine '" + engine_id_ + "' produced no usable output: " + e.what());
    }
    if (result.width() != source.width() || result.height() != source.height()) {
        throw Error(ErrorKind::OperatorFailed, "engine '" + engine_id_ + "' changed the image size");
    }
    return result;
}

} // namespace dfb
