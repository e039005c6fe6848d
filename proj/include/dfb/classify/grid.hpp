#pragma once

#include "dfb/classify/classifier.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dfb {

struct GridEntry {
    ClassifierConfig config;
    /// Extra k = 1 row kept outside the reported grid.
    bool text_only = false;
};

struct GridResult {
    GridEntry entry;
    MetricsReport metrics;
};

/// Order: kNN k = 3, 5, 7, 11, 13, 15; SVM linear, poly, rbf,
/// sigmoid; LDA; DecisionTree; RandomForest; GBoost. With `include_text_only`
/// a kNN k = 1 row is prepended and flagged.
std::vector<GridEntry> standard_grid(std::uint64_t seed = kDefaultSeed, bool include_text_only = true);

/// Trains and evaluates every entry; configurations run concurrently but the
/// result order always follows `entries`.
std::vector<GridResult> run_grid(const std::vector<GridEntry>& entries, const LabeledDataset& train_set,
                                 const LabeledDataset& test_set, std::size_t workers = 0);

/// Columns: classifier,config,class,precision,recall,f1,accuracy_percent,note
void write_grid_csv(std::ostream& out, const std::vector<GridResult>& results,
                    const std::string& provenance = {});

/// Aligned text rendering with the results-table column headings.
std::string render_grid_table(const std::vector<GridResult>& results);

} // namespace dfb
