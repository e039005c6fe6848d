#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dfb {

std::string_view toolkit_version() noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Hex digest of a resolved configuration string.
std::string config_hash(std::string_view resolved_config);

/// Provenance line prepended to CSV artifacts: "# dfb <version> config=<hash>".
std::string provenance_comment(std::string_view config_hash);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Decimal text with a fixed number of significant digits.
std::string format_double(double value, int significant_digits);

/// Strict decimal parse of the whole string; throws DataValidation on failure.
double parse_double(std::string_view text);

} // namespace dfb
