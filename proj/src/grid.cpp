#include "dfb/classify/grid.hpp"

#include "dfb/parallel.hpp"

#include <array>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace dfb {
namespace {

std::string two_decimals(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    return buf.data();
}

std::string precision_cell(const ClassMetrics& m) {
    return m.precision_defined ? two_decimals(m.precision) : two_decimals(0.0) + "*";
}

} // namespace

std::vector<GridEntry> standard_grid(std::uint64_t seed, bool include_text_only) {
    std::vector<GridEntry> grid;
    auto add = [&](ClassifierConfig c, bool text_only = false) {
        c.seed = seed;
        grid.push_back({c, text_only});
    };
    if (include_text_only) add(ClassifierConfig::knn(1), true);
    for (std::size_t k : {3, 5, 7, 11, 13, 15}) add(ClassifierConfig::knn(k));
    for (SvmKernel kernel : {SvmKernel::Linear, SvmKernel::Poly, SvmKernel::Rbf, SvmKernel::Sigmoid}) {
        add(ClassifierConfig::svm_with(kernel));
    }
    add(ClassifierConfig::lda());
    add(ClassifierConfig::decision_tree());
    add(ClassifierConfig::random_forest());
    add(ClassifierConfig::gboost());
    return grid;
}

std::vector<GridResult> run_grid(const std::vector<GridEntry>& entries, const LabeledDataset& train_set,
                                 const LabeledDataset& test_set, std::size_t workers) {
    std::vector<std::optional<GridResult>> slots(entries.size());
    parallel_for(
        entries.size(),
        [&](std::size_t i) {
            const TrainedModel model = train(entries[i].config, train_set);
            slots[i] = GridResult{entries[i], evaluate(model, test_set)};
        },
        workers);
    std::vector<GridResult> results;
    results.reserve(slots.size());
    for (auto& s : slots) results.push_back(std::move(*s));
    return results;
}

void write_grid_csv(std::ostream& out, const std::vector<GridResult>& results, const std::string& provenance) {
    if (!provenance.empty()) out << provenance << '\n';
    out << "classifier,config,class,precision,recall,f1,accuracy_percent,note\n";
    for (const auto& r : results) {
        for (Label label : {Label::Deepfake2, Label::Deepfake3}) {
            const auto& m = r.metrics.of(label);
            out << to_string(r.entry.config.family) << ',' << r.entry.config.variant_label() << ','
                << to_string(label) << ',' << two_decimals(m.precision) << ',' << two_decimals(m.recall)
                << ',' << two_decimals(m.f1) << ',' << r.metrics.accuracy_percent() << ',';
            std::string note;
            if (r.entry.text_only) note = "text-only";
            if (!m.precision_defined) note += std::string(note.empty() ? "" : ";") + "precision-undefined";
            out << note << '\n';
        }
    }
}

std::string render_grid_table(const std::vector<GridResult>& results) {
    std::ostringstream out;
    out << std::left << std::setw(14) << "Classifiers" << std::setw(20) << "" << std::setw(12) << "Classes"
        << std::right << std::setw(10) << "Precision" << std::setw(8) << "Recall" << std::setw(10)
        << "F1-score" << std::setw(15) << "Accuracy (%)" << '\n';
    bool undefined = false;
    for (const auto& r : results) {
        bool first = true;
        for (Label label : {Label::Deepfake2, Label::Deepfake3}) {
            const auto& m = r.metrics.of(label);
            undefined = undefined || !m.precision_defined;
            std::string variant = r.entry.config.variant_label();
            if (r.entry.text_only) variant += " (text-only)";
            out << std::left << std::setw(14) << (first ? std::string(to_string(r.entry.config.family)) : "")
                << std::setw(20) << (first ? variant : "") << std::setw(12) << to_string(label) << std::right
                << std::setw(10) << precision_cell(m) << std::setw(8) << two_decimals(m.recall)
                << std::setw(10) << two_decimals(m.f1) << std::setw(15)
                << (first ? std::to_string(r.metrics.accuracy_percent()) + "%" : "") << '\n';
            first = false;
        }
    }
    if (undefined) out << "* no rows predicted for this class; precision undefined\n";
    return out.str();
}

} // namespace dfb
