#pragma once

#include "dfb/ballistics/corpus.hpp"
#include "dfb/ballistics/style_transfer.hpp"
#include "dfb/classify/dataset.hpp"
#include "dfb/feature_store.hpp"
#include "dfb/labels.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dfb {

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view text) noexcept;

/// One generated image. Deepfake-2 entries list [t1]; Deepfake-3 entries list
/// [t1, t2] in application order and name their Deepfake-2 parent.
struct ManifestEntry {
    std::string id;
    std::filesystem::path output; // relative to the manifest's directory
    Label label = Label::Deepfake2;
    std::string source_id;
    std::vector<std::string> target_ids;
    std::string parent_id; // Deepfake-3 only
    std::string operator_id;
    Split split = Split::Train;
};

struct DatasetManifest {
    std::string toolkit;
    std::string config_hash;
    std::vector<ManifestEntry> entries;

    const ManifestEntry* find(std::string_view id) const;
};

struct DatasetCounts {
    std::size_t train_per_class = 1200;
    std::size_t test_per_class = 200;

    std::size_t per_class() const noexcept { return train_per_class + test_per_class; }
};

/// Generates D1 = op(s_i, t1) (Deepfake-2) and D2 = op(D1, t2) (Deepfake-3)
/// for i < counts.per_class(). Sources are consumed in order; targets cycle
/// when a target list is shorter than the source count. Pair i lands in the
/// train split for i < train_per_class and in the test split otherwise, for
/// both classes, so a source never straddles the split.
///
/// Images are written under `out_dir/<split>/<class>/<id>.png` and the
/// manifest to `out_dir/manifest.jsonl`. A pair is committed only once both
/// of its images are on disk; if the operator fails for any pair the manifest
/// still lists every completed pair and OperatorFailed is thrown afterwards.
///
/// Throws DataValidation when a t2 id also occurs among the t1 or source ids,
/// and InvalidArgument when there are fewer sources than required or a target
/// list is empty.
DatasetManifest build_dataset(const std::vector<ImageSource>& sources, const std::vector<ImageSource>& targets1,
                              const std::vector<ImageSource>& targets2, const StyleTransferOp& op,
                              const DatasetCounts& counts, const std::filesystem::path& out_dir,
                              const std::string& config_hash = {}, std::size_t workers = 0);

void write_manifest(std::ostream& out, const DatasetManifest& manifest);
/// JSON lines: a {"type":"header",...} record, then one {"type":"entry",...} per image.
DatasetManifest read_manifest(std::istream& in);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Structural checks: target counts per class, t2 != t1, t2 != source,
/// parents exist, and (when `base_dir` is given) every output file exists.
/// Returns one message per violation.
std::vector<std::string> validate_manifest(const DatasetManifest& manifest,
                                           const std::optional<std::filesystem::path>& base_dir = std::nullopt);

using TargetResolver = std::function<RasterImage(const std::string& id)>;

/// Re-applies op(parent output, t2) for every Deepfake-3 entry and compares the
/// result with the stored file pixel for pixel. Returns the ids that differ.
std::vector<std::string> verify_rederivation(const DatasetManifest& manifest, const std::filesystem::path& base_dir,
                                             const StyleTransferOp& op, const TargetResolver& resolve_target);

/// Feature rows joined to a manifest by id (file stem), grouped by split.
struct SplitDatasets {
    LabeledDataset train{{}, Split::Train};
    LabeledDataset test{{}, Split::Test};
};

/// Every feature row must name a manifest entry; a row label, when present,
/// must agree with the manifest class.
SplitDatasets join_with_manifest(const std::vector<FeatureRow>& rows, const DatasetManifest& manifest);

} // namespace dfb
