#include "dfb/ballistics/properties.hpp"

#include "dfb/error.hpp"
#include "dfb/parallel.hpp"
#include "dfb/random.hpp"
#include "dfb/run_info.hpp"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace dfb {
using nlohmann::json;

std::string_view to_string(Property property) noexcept {
    switch (property) {
    case Property::Neutral: return "neutral";
    case Property::Commutativity: return "commutativity";
    case Property::Associativity: return "associativity";
    }
    return "neutral";
}

std::vector<PropertyReport> check_neutral(const StyleTransferOp& op, const NamedImage& a,
                                          std::vector<NamedImage> candidates, double threshold) {
    if (candidates.empty()) {
        const std::size_t w = a.image.width();
        const std::size_t h = a.image.height();
        candidates.push_back({"all-white", RasterImage::filled(w, h, 255, 255, 255)});
        candidates.push_back({"all-black", RasterImage::filled(w, h, 0, 0, 0)});
        candidates.push_back({a.id, a.image});
    }
    std::vector<PropertyReport> reports;
    for (const auto& phi : candidates) {
        PropertyReport r;
        r.property = Property::Neutral;
        r.operands = {a.id, phi.id};
        r.ssim = ssim(a.image, op.apply(a.image, phi.image));
        r.verdict = r.ssim.mean_score >= threshold ? "neutral" : "not neutral";
        reports.push_back(std::move(r));
    }
    return reports;
}

PropertyReport compare_outputs(Property property, std::vector<std::string> operands, const RasterImage& x,
                               const RasterImage& y, bool keep_map) {
    PropertyReport r;
    r.property = property;
    r.operands = std::move(operands);
    r.ssim = ssim(x, y);
    if (!keep_map) {
        r.ssim.map.clear();
        r.ssim.map.shrink_to_fit();
    }
    const RgbHistogram hx = rgb_histogram(x);
    const RgbHistogram hy = rgb_histogram(y);
    HistogramScores scores;
    scores.correlation = compare(hx, hy, HistogramMetric::Correlation);
    scores.chi_square = *compare(hx, hy, HistogramMetric::ChiSquare);
    scores.bhattacharyya = compare(hx, hy, HistogramMetric::Bhattacharyya);
    r.histograms = scores;
    const bool identical = x == y;
    r.verdict = identical ? "outputs identical" : "outputs differ";
    return r;
}

PropertyReport check_commutativity(const StyleTransferOp& op, const NamedImage& a, const NamedImage& b,
                                   bool keep_map) {
    const RasterImage x = op.apply(a.image, b.image);
    const RasterImage y = op.apply(b.image, a.image);
    return compare_outputs(Property::Commutativity, {a.id, b.id}, x, y, keep_map);
}

PropertyReport check_associativity(const StyleTransferOp& op, const NamedImage& a, const NamedImage& b,
                                   const NamedImage& c, bool keep_map) {
    const RasterImage x = op.apply(op.apply(a.image, b.image), c.image);
    const RasterImage y = op.apply(a.image, op.apply(b.image, c.image));
    return compare_outputs(Property::Associativity, {a.id, b.id, c.id}, x, y, keep_map);
}

namespace {

struct Accumulator {
    std::vector<double> values;

    MetricStats stats() const {
        MetricStats s;
        s.count = values.size();
        if (values.empty()) return s;
        for (double v : values) s.mean += v;
        s.mean /= static_cast<double>(values.size());
        for (double v : values) s.variance += (v - s.mean) * (v - s.mean);
        s.variance /= static_cast<double>(values.size());
        return s;
    }
};

std::string fixed(double v, int decimals) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return buf.data();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

AggregateStats aggregate(const std::vector<PropertyReport>& reports) {
    if (reports.empty()) throw Error(ErrorKind::InvalidArgument, "cannot aggregate an empty batch");
    Accumulator ssim_acc, corr, chi, bhat;
    for (const auto& r : reports) {
        ssim_acc.values.push_back(r.ssim.mean_score);
        if (!r.histograms) continue;
        if (r.histograms->correlation) corr.values.push_back(*r.histograms->correlation);
        chi.values.push_back(r.histograms->chi_square);
        if (r.histograms->bhattacharyya) bhat.values.push_back(*r.histograms->bhattacharyya);
    }
    return AggregateStats{reports.size(), ssim_acc.stats(), corr.stats(), chi.stats(), bhat.stats()};
}

std::string render_aggregate(const AggregateStats& stats) {
    std::ostringstream out;
    auto line = [&](const char* name, const MetricStats& m) {
        out << name << ": " << fixed(m.mean, 3) << " (with variance = " << fixed(m.variance, 4) << ")\n";
    };
    out << "Images: " << stats.batch_size << '\n';
    line("SSIM", stats.ssim);
    if (stats.chi_square.count > 0) {
        line("Correlation", stats.correlation);
        line("Chi-Square", stats.chi_square);
        line("Bhattacharyya distance", stats.bhattacharyya);
    }
    return out.str();
}

PropertyBatch run_property_batch(const StyleTransferOp& op, const std::vector<ImageSource>& corpus,
                                 std::size_t triples, std::uint64_t seed, std::size_t workers) {
    if (corpus.size() < 3) throw Error(ErrorKind::InvalidArgument, "property batches need at least three images");
    if (triples == 0) throw Error(ErrorKind::InvalidArgument, "property batches need at least one triple");
    Rng rng(mix_seed(seed, 0));
    std::vector<std::array<std::size_t, 3>> picks(triples);
    for (auto& p : picks) {
        p[0] = uniform_index(rng, corpus.size());
        do p[1] = uniform_index(rng, corpus.size()); while (p[1] == p[0]);
        do p[2] = uniform_index(rng, corpus.size()); while (p[2] == p[0] || p[2] == p[1]);
    }

    PropertyBatch batch;
    batch.commutativity.resize(triples);
    batch.associativity.resize(triples);
    parallel_for(
        triples,
        [&](std::size_t i) {
            const NamedImage a{corpus[picks[i][0]].id, corpus[picks[i][0]].load()};
            const NamedImage b{corpus[picks[i][1]].id, corpus[picks[i][1]].load()};
            const NamedImage c{corpus[picks[i][2]].id, corpus[picks[i][2]].load()};
            batch.commutativity[i] = check_commutativity(op, a, b, false);
            batch.associativity[i] = check_associativity(op, a, b, c, false);
        },
        workers);
    const NamedImage first{corpus[picks[0][0]].id, corpus[picks[0][0]].load()};
    batch.neutral = check_neutral(op, first);
    for (auto& r : batch.neutral) {
        r.ssim.map.clear();
        r.ssim.map.shrink_to_fit();
    }
    return batch;
}

std::string reports_to_json(const std::vector<PropertyReport>& reports, const std::string& config_hash) {
    json array = json::array();
    for (const auto& r : reports) {
        json j;
        j["property"] = std::string(to_string(r.property));
        j["operands"] = r.operands;
        j["ssim"] = r.ssim.mean_score;
        if (r.histograms) {
            j["correlation"] = optional_number(r.histograms->correlation);
            j["chi_square"] = r.histograms->chi_square;
            j["bhattacharyya"] = optional_number(r.histograms->bhattacharyya);
        }
        j["verdict"] = r.verdict;
        j["toolkit"] = std::string(toolkit_version());
        if (!config_hash.empty()) j["config_hash"] = config_hash;
        array.push_back(std::move(j));
    }
    return array.dump(2);
}

void write_summary_csv(std::ostream& out, const PropertyBatch& batch, const std::string& provenance) {
    if (!provenance.empty()) out << provenance << '\n';
    out << "property,metric,mean,variance,count,batch_size\n";
    auto rows = [&](Property p, const std::vector<PropertyReport>& reports) {
        if (reports.empty()) return;
        const AggregateStats s = aggregate(reports);
        auto row = [&](const char* metric, const MetricStats& m) {
            out << to_string(p) << ',' << metric << ',' << format_double(m.mean, 17) << ','
                << format_double(m.variance, 17) << ',' << m.count << ',' << s.batch_size << '\n';
        };
        row("ssim", s.ssim);
        if (p != Property::Neutral) {
            row("correlation", s.correlation);
            row("chi_square", s.chi_square);
            row("bhattacharyya", s.bhattacharyya);
        }
    };
    rows(Property::Neutral, batch.neutral);
    rows(Property::Commutativity, batch.commutativity);
    rows(Property::Associativity, batch.associativity);
}

} // namespace dfb
