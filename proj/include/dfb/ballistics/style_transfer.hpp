#pragma once

#include "dfb/imaging.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

namespace dfb {

/// The binary operation S(s, t) = s (+) t: attributes of `target` are carried
/// onto `source`. Implementations must return an image with the source's
/// dimensions and must be safe to call concurrently.
class StyleTransferOp {
public:
    virtual ~StyleTransferOp() = default;

    virtual RasterImage apply(const RasterImage& source, const RasterImage& target) const = 0;
    /// Recorded in manifests and reports.
    virtual std::string id() const = 0;
};

/// Per-channel statistics transfer:
///   out = clamp(round((src - mean_src) * std_tgt / std_src + mean_tgt), 0, 255)
/// with population statistics over all pixels of each image. A constant source
/// channel becomes the constant round(mean_tgt). Deterministic.
RasterImage proxy_transfer(const RasterImage& source, const RasterImage& target);

class ProxyTransfer final : public StyleTransferOp {
public:
    RasterImage apply(const RasterImage& source, const RasterImage& target) const override {
        return proxy_transfer(source, target);
    }
    std::string id() const override { return "proxy-stats-v1"; }
};

/// Runs a user-supplied engine through the shell. The command template may use
/// {source}, {target} and {output}; each is replaced by a quoted PNG path in
/// `work_dir`. A nonzero exit status, a missing output file or an output whose
/// size differs from the source raises OperatorFailed. At most
/// `max_concurrent` engine processes run at once.
class ExternalTransfer final : public StyleTransferOp {
public:
    ExternalTransfer(std::string command_template, std::filesystem::path work_dir, std::string engine_id,
                     std::optional<std::uint64_t> seed = std::nullopt, std::size_t max_concurrent = 1);

    RasterImage apply(const RasterImage& source, const RasterImage& target) const override;
    /// "external:<engine>" plus ":seed=<n>" when a seed was supplied.
    std::string id() const override;

    /// The command line that would run for the given paths.
    std::string render_command(const std::filesystem::path& source, const std::filesystem::path& target,
                               const std::filesystem::path& output) const;

private:
    std::string template_;
    std::filesystem::path work_dir_;
    std::string engine_id_;
    std::optional<std::uint64_t> seed_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
    mutable std::atomic<std::uint64_t> counter_{0};
};

/// Single-quotes a path for /bin/sh.
std::string shell_quote(const std::string& text);

} // namespace dfb
