#include "dfb/feature_store.hpp"

#include "dfb/error.hpp"
#include "dfb/run_info.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dfb {
namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

void check_id(const std::string& id) {
    if (id.find_first_of(",\n\r") != std::string::npos) {
        throw Error(ErrorKind::DataValidation, "source id may not contain commas or newlines: " + id);
    }
}

} // namespace

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows,
                       const std::string& provenance) {
    if (!provenance.empty()) out << provenance << '\n';
    out << "source_id,label";
    for (std::size_t i = 1; i <= kAcCount; ++i) out << ",beta_" << i;
    out << '\n';
    for (const auto& row : rows) {
        check_id(row.features.source_id);
        out << row.features.source_id << ',';
        if (row.label) out << to_string(*row.label);
        for (double b : row.features.values) out << ',' << format_double(b, 17);
        out << '\n';
    }
}

void write_feature_csv(const std::filesystem::path& path, std::span<const FeatureRow> rows,
                       const std::string& provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
    write_feature_csv(out, rows, provenance);
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

std::vector<FeatureRow> read_feature_csv(std::istream& in) {
    std::vector<FeatureRow> rows;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_csv(line);
        if (!header_seen) {
            if (fields.size() != kAcCount + 2 || fields[0] != "source_id" || fields[1] != "label") {
                throw Error(ErrorKind::DataValidation, "feature CSV header is malformed");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != kAcCount + 2) {
            throw Error(ErrorKind::DataValidation, "feature CSV line " + std::to_string(line_no) +
                                                       " has " + std::to_string(fields.size()) +
                                                       " columns, expected 65");
        }
        FeatureRow row;
        row.features.source_id = std::string(fields[0]);
        if (!fields[1].empty()) {
            row.label = parse_label(fields[1]);
            if (!row.label) {
                throw Error(ErrorKind::DataValidation,
                            "unknown label '" + std::string(fields[1]) + "' on line " + std::to_string(line_no));
            }
        }
        for (std::size_t i = 0; i < kAcCount; ++i) {
            const double b = parse_double(fields[i + 2]);
            if (!(b >= 0.0)) {
                throw Error(ErrorKind::DataValidation, "negative or NaN beta on line " + std::to_string(line_no));
            }
            row.features.values[i] = b;
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw Error(ErrorKind::DataValidation, "feature CSV has no header");
    return rows;
}

std::vector<FeatureRow> read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open feature CSV " + path.string());
    return read_feature_csv(in);
}

void write_fig4_csv(std::ostream& out, std::span<const double, kAcCount> class2,
                    std::span<const double, kAcCount> class3, const std::string& provenance) {
    if (!provenance.empty()) out << provenance << '\n';
    out << "ac_index,mean_beta_class2,mean_beta_class3\n";
    for (std::size_t i = 0; i < kAcCount; ++i) {
        out << (i + 1) << ',' << format_double(class2[i], 17) << ',' << format_double(class3[i], 17)
            << '\n';
    }
}

} // namespace dfb
