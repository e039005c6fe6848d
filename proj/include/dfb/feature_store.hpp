#pragma once

#include "dfb/dct_features.hpp"
#include "dfb/labels.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dfb {

/// One feature-store record. An empty label column reads back as nullopt.
struct FeatureRow {
    BetaVector features;
    std::optional<Label> label;
};

/// CSV layout: optional "# ..." provenance lines, a header
/// `source_id,label,beta_1,...,beta_63`, then one row per image with every
/// beta written to 17 significant digits.
void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows,
                       const std::string& provenance = {});
void write_feature_csv(const std::filesystem::path& path, std::span<const FeatureRow> rows,
                       const std::string& provenance = {});

std::vector<FeatureRow> read_feature_csv(std::istream& in);
std::vector<FeatureRow> read_feature_csv(const std::filesystem::path& path);

/// Class-mean curves for plotting: `ac_index,mean_beta_class2,mean_beta_class3`.
void write_fig4_csv(std::ostream& out, std::span<const double, kAcCount> class2,
                    std::span<const double, kAcCount> class3, const std::string& provenance = {});

} // namespace dfb
