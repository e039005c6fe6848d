#include "dfb/ballistics/dataset.hpp"

#include "dfb/error.hpp"
#include "dfb/parallel.hpp"
#include "dfb/run_info.hpp"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

namespace dfb {
namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Split split) noexcept { return split == Split::Train ? "train" : "test"; }

std::optional<Split> parse_split(std::string_view text) noexcept {
    if (text == "train") return Split::Train;
    if (text == "test") return Split::Test;
    return std::nullopt;
}

const ManifestEntry* DatasetManifest::find(std::string_view id) const {
    for (const auto& e : entries) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

namespace {

std::string indexed_id(const char* prefix, std::size_t i) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%s_%05zu", prefix, i);
    return buf.data();
}

void write_atomically(const RasterImage& image, const fs::path& path) {
    fs::path partial = path;
    partial += ".partial";
    save_png(image, partial);
    std::error_code ec;
    fs::rename(partial, path, ec);
    if (ec) {
        fs::remove(partial, ec);
        throw Error(ErrorKind::Io, "cannot move " + partial.string() + " into place");
    }
}

json entry_to_json(const ManifestEntry& e) {
    json j;
    j["type"] = "entry";
    j["id"] = e.id;
    j["output"] = e.output.generic_string();
    j["class"] = std::string(to_string(e.label));
    j["source"] = e.source_id;
    j["targets"] = e.target_ids;
    if (!e.parent_id.empty()) j["parent"] = e.parent_id;
    j["operator"] = e.operator_id;
    j["split"] = std::string(to_string(e.split));
    return j;
}

ManifestEntry entry_from_json(const json& j) {
    ManifestEntry e;
    e.id = j.at("id").get<std::string>();
    e.output = j.at("output").get<std::string>();
    const auto label = parse_label(j.at("class").get<std::string>());
    if (!label) throw Error(ErrorKind::DataValidation, "manifest entry " + e.id + " has an unknown class");
    e.label = *label;
    e.source_id = j.at("source").get<std::string>();
    e.target_ids = j.at("targets").get<std::vector<std::string>>();
    if (j.contains("parent")) e.parent_id = j.at("parent").get<std::string>();
    e.operator_id = j.at("operator").get<std::string>();
    const auto split = parse_split(j.at("split").get<std::string>());
    if (!split) throw Error(ErrorKind::DataValidation, "manifest entry " + e.id + " has an unknown split");
    e.split = *split;
    return e;
}

} // namespace

DatasetManifest build_dataset(const std::vector<ImageSource>& sources, const std::vector<ImageSource>& targets1,
                              const std::vector<ImageSource>& targets2, const StyleTransferOp& op,
                              const DatasetCounts& counts, const fs::path& out_dir, const std::string& config_hash,
                              std::size_t workers) {
    const std::size_t pairs = counts.per_class();
    if (pairs == 0) throw Error(ErrorKind::InvalidArgument, "dataset counts are zero");
    if (sources.size() < pairs) {
        throw Error(ErrorKind::InvalidArgument, "need " + std::to_string(pairs) + " source images, have " +
                                                    std::to_string(sources.size()));
    }
    if (targets1.empty() || targets2.empty()) {
        throw Error(ErrorKind::InvalidArgument, "both target lists must be non-empty");
    }
    std::set<std::string> forbidden;
    for (const auto& t : targets1) forbidden.insert(t.id);
    for (const auto& s : sources) forbidden.insert(s.id);
    for (const auto& t : targets2) {
        if (forbidden.count(t.id)) {
            throw Error(ErrorKind::DataValidation,
                        "second-pass target '" + t.id + "' also appears among the sources or first targets");
        }
    }

    for (Split split : {Split::Train, Split::Test}) {
        for (Label label : {Label::Deepfake2, Label::Deepfake3}) {
            std::error_code ec;
            fs::create_directories(out_dir / to_string(split) / to_string(label), ec);
            if (ec) throw Error(ErrorKind::Io, "cannot create " + (out_dir / to_string(split)).string());
        }
    }

    struct PairResult {
        std::optional<std::array<ManifestEntry, 2>> entries;
        std::string error;
    };
    std::vector<PairResult> results(pairs);
    const std::string op_id = op.id();

    parallel_for(
        pairs,
        [&](std::size_t i) {
            const Split split = i < counts.train_per_class ? Split::Train : Split::Test;
            const ImageSource& s = sources[i];
            const ImageSource& t1 = targets1[i % targets1.size()];
            const ImageSource& t2 = targets2[i % targets2.size()];
            ManifestEntry d1{indexed_id("df2", i), {}, Label::Deepfake2, s.id, {t1.id}, {}, op_id, split};
            ManifestEntry d2{indexed_id("df3", i), {}, Label::Deepfake3, s.id, {t1.id, t2.id}, d1.id, op_id, split};
            d1.output = fs::path(to_string(split)) / to_string(Label::Deepfake2) / (d1.id + ".png");
            d2.output = fs::path(to_string(split)) / to_string(Label::Deepfake3) / (d2.id + ".png");
            try {
                const RasterImage first = op.apply(s.load(), t1.load());
                const RasterImage second = op.apply(first, t2.load());
                write_atomically(first, out_dir / d1.output);
                try {
                    write_atomically(second, out_dir / d2.output);
                } catch (...) {
                    std::error_code ec;
                    fs::remove(out_dir / d1.output, ec);
                    throw;
                }
                results[i].entries = std::array<ManifestEntry, 2>{std::move(d1), std::move(d2)};
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        },
        workers);

    DatasetManifest manifest;
    manifest.toolkit = std::string(toolkit_version());
    manifest.config_hash = config_hash;
    std::size_t failures = 0;
    std::string first_error;
    for (auto& r : results) {
        if (!r.entries) {
            if (failures++ == 0) first_error = r.error;
            continue;
        }
        manifest.entries.push_back(std::move((*r.entries)[0]));
        manifest.entries.push_back(std::move((*r.entries)[1]));
    }

    const fs::path manifest_path = out_dir / "manifest.jsonl";
    {
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot create " + manifest_path.string());
        write_manifest(out, manifest);
        if (!out) throw Error(ErrorKind::Io, "write failed: " + manifest_path.string());
    }
    if (failures > 0) {
        throw Error(ErrorKind::OperatorFailed, std::to_string(failures) + " of " + std::to_string(pairs) +
                                                   " pairs failed; first error: " + first_error);
    }
    return manifest;
}

void write_manifest(std::ostream& out, const DatasetManifest& manifest) {
    json header;
    header["type"] = "header";
    header["toolkit"] = manifest.toolkit;
    header["config_hash"] = manifest.config_hash;
    header["entries"] = manifest.entries.size();
    out << header.dump() << '\n';
    for (const auto& e : manifest.entries) out << entry_to_json(e).dump() << '\n';
}

DatasetManifest read_manifest(std::istream& in) {
    DatasetManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            const std::string type = j.value("type", "entry");
            if (type == "header") {
                manifest.toolkit = j.value("toolkit", "");
                manifest.config_hash = j.value("config_hash", "");
            } else {
                manifest.entries.push_back(entry_from_json(j));
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::DataValidation,
                        "manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return manifest;
}

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open manifest " + path.string());
    return read_manifest(in);
}

std::vector<std::string> validate_manifest(const DatasetManifest& manifest, const std::optional<fs::path>& base_dir) {
    std::vector<std::string> problems;
    std::set<std::string> ids;
    for (const auto& e : manifest.entries) {
        if (!ids.insert(e.id).second) problems.push_back(e.id + ": duplicate id");
        const std::size_t expected = e.label == Label::Deepfake2 ? 1 : 2;
        if (e.target_ids.size() != expected) {
            problems.push_back(e.id + ": expected " + std::to_string(expected) + " target(s)");
            continue;
        }
        if (e.label == Label::Deepfake3) {
            const auto& t2 = e.target_ids[1];
            if (t2 == e.target_ids[0]) problems.push_back(e.id + ": t2 equals t1");
            if (t2 == e.source_id) problems.push_back(e.id + ": t2 equals the source");
            const ManifestEntry* parent = manifest.find(e.parent_id);
            if (!parent) {
                problems.push_back(e.id + ": parent '" + e.parent_id + "' missing");
            } else if (parent->label != Label::Deepfake2 || parent->source_id != e.source_id ||
                       parent->target_ids.empty() || parent->target_ids[0] != e.target_ids[0]) {
                problems.push_back(e.id + ": parent '" + e.parent_id + "' does not match its chain");
            } else if (parent->split != e.split) {
                problems.push_back(e.id + ": parent lies in a different split");
            }
        }
        if (base_dir) {
            std::error_code ec;
            if (!fs::is_regular_file(*base_dir / e.output, ec)) {
                problems.push_back(e.id + ": missing file " + e.output.generic_string());
            }
        }
    }
    return problems;
}

std::vector<std::string> verify_rederivation(const DatasetManifest& manifest, const fs::path& base_dir,
                                             const StyleTransferOp& op, const TargetResolver& resolve_target) {
    std::vector<std::string> mismatched;
    for (const auto& e : manifest.entries) {
        if (e.label != Label::Deepfake3) continue;
        const ManifestEntry* parent = manifest.find(e.parent_id);
        if (!parent || e.target_ids.size() != 2) {
            mismatched.push_back(e.id);
            continue;
        }
        const RasterImage recomputed = op.apply(load_image(base_dir / parent->output), resolve_target(e.target_ids[1]));
        if (!(recomputed == load_image(base_dir / e.output))) mismatched.push_back(e.id);
    }
    return mismatched;
}

SplitDatasets join_with_manifest(const std::vector<FeatureRow>& rows, const DatasetManifest& manifest) {
    std::map<std::string, const ManifestEntry*, std::less<>> by_id;
    for (const auto& e : manifest.entries) by_id[e.id] = &e;
    SplitDatasets out;
    for (const auto& row : rows) {
        const auto it = by_id.find(row.features.source_id);
        if (it == by_id.end()) {
            throw Error(ErrorKind::DataValidation, "feature row '" + row.features.source_id + "' is not in the manifest");
        }
        const ManifestEntry& e = *it->second;
        if (row.label && *row.label != e.label) {
            throw Error(ErrorKind::DataValidation, "feature row '" + row.features.source_id +
                                                       "' disagrees with the manifest class");
        }
        (e.split == Split::Train ? out.train : out.test).rows.push_back({row.features, e.label});
    }
    return out;
}

} // namespace dfb
