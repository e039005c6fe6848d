#pragma once

#include "dfb/ballistics/corpus.hpp"
#include "dfb/ballistics/style_transfer.hpp"
#include "dfb/similarity.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dfb {

enum class Property { Neutral, Commutativity, Associativity };

std::string_view to_string(Property property) noexcept;

/// Histogram agreement between the two outputs of a property check.
/// Correlation or Bhattacharyya read nullopt when undefined (constant or empty histograms).
struct HistogramScores {
    std::optional<double> correlation;
    double chi_square = 0.0;
    std::optional<double> bhattacharyya;
};

struct PropertyReport {
    Property property = Property::Neutral;
    std::vector<std::string> operands;
    SsimResult ssim; // map may be dropped in batch mode
    std::optional<HistogramScores> histograms; // absent for Neutral
    std::string verdict;
};

/// SSIM threshold at or above which a candidate counts as a neutral element.
inline constexpr double kNeutralThreshold = 0.99;

struct NamedImage {
    std::string id;
    RasterImage image;
};

/// SSIM(a, op(a, phi)) for each candidate phi. Empty `candidates` means the
/// defaults: all-white, all-black and `a` itself.
std::vector<PropertyReport> check_neutral(const StyleTransferOp& op, const NamedImage& a,
                                          std::vector<NamedImage> candidates = {},
                                          double threshold = kNeutralThreshold);

/// x = op(a, b), y = op(b, a); SSIM(x, y) and the histogram comparisons of H(x), H(y).
PropertyReport check_commutativity(const StyleTransferOp& op, const NamedImage& a, const NamedImage& b,
                                   bool keep_map = true);

/// x = op(op(a, b), c), y = op(a, op(b, c)).
PropertyReport check_associativity(const StyleTransferOp& op, const NamedImage& a, const NamedImage& b,
                                   const NamedImage& c, bool keep_map = true);

/// Both outputs of a commutativity/associativity check compared in full.
PropertyReport compare_outputs(Property property, std::vector<std::string> operands, const RasterImage& x,
                               const RasterImage& y, bool keep_map);

struct MetricStats {
    double mean = 0.0;
    double variance = 0.0; // population
    std::size_t count = 0; // reports where the metric was defined
};

struct AggregateStats {
    std::size_t batch_size = 0;
    MetricStats ssim;
    MetricStats correlation;
    MetricStats chi_square;
    MetricStats bhattacharyya;
};

/// Per-metric population mean and variance. Throws InvalidArgument when empty.
AggregateStats aggregate(const std::vector<PropertyReport>& reports);

/// "Correlation: 0.863 (with variance = 0.0034)" style summary, one metric per line.
std::string render_aggregate(const AggregateStats& stats);

struct PropertyBatch {
    std::vector<PropertyReport> neutral;
    std::vector<PropertyReport> commutativity;
    std::vector<PropertyReport> associativity;
};

/// Draws `triples` (A, B, C) of distinct images uniformly from `corpus` with a
/// seeded generator and runs the commutativity (A, B) and associativity
/// (A, B, C) checks on each; the neutral check runs on the first A. Maps are
/// not retained.
PropertyBatch run_property_batch(const StyleTransferOp& op, const std::vector<ImageSource>& corpus,
                                 std::size_t triples, std::uint64_t seed, std::size_t workers = 0);

/// JSON array of reports (maps omitted, score only).
std::string reports_to_json(const std::vector<PropertyReport>& reports, const std::string& config_hash = {});

/// CSV: property,metric,mean,variance,count,batch_size
void write_summary_csv(std::ostream& out, const PropertyBatch& batch, const std::string& provenance = {});

} // namespace dfb
