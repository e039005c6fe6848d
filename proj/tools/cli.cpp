#include "cli.hpp"

#include "dfb/ballistics/corpus.hpp"
#include "dfb/ballistics/dataset.hpp"
#include "dfb/ballistics/properties.hpp"
#include "dfb/ballistics/style_transfer.hpp"
#include "dfb/classify/classifier.hpp"
#include "dfb/classify/grid.hpp"
#include "dfb/dct_features.hpp"
#include "dfb/error.hpp"
#include "dfb/feature_store.hpp"
#include "dfb/parallel.hpp"
#include "dfb/run_info.hpp"
#include "dfb/similarity.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

namespace dfb::cli {
namespace fs = std::filesystem;

namespace {

/// Resolved settings of one run, in insertion order. The hash covers the
/// settings that affect results and is embedded in every artifact. Output
/// locations are logged but left out of the hash, so the same experiment
/// written to two places carries the same hash.
class RunConfig {
public:
    explicit RunConfig(std::string command) { add("command", std::move(command)); }

    void add(const std::string& key, const std::string& value) { items_.push_back({key, value, true}); }
    void add(const std::string& key, const fs::path& value) { add(key, value.generic_string()); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void output(const std::string& key, const fs::path& value) { items_.push_back({key, value.generic_string(), false}); }

    std::string text() const { return render(false); }
    std::string hash() const { return config_hash(render(true)); }
    std::string provenance() const { return provenance_comment(hash()); }

private:
    struct Item {
        std::string key;
        std::string value;
        bool hashed;
    };

    std::string render(bool hashed_only) const {
        std::string s;
        for (const auto& item : items_) {
            if (hashed_only && !item.hashed) continue;
            s += item.key + "=" + item.value + "\n";
        }
        return s;
    }

    std::vector<Item> items_;
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

/// Echoes the configuration to `err` and, when an artifact path is known,
/// writes `<artifact>.log` with the timestamp next to it.
void log_run(const RunConfig& config, std::ostream& err, const std::optional<fs::path>& artifact) {
    err << "dfb " << toolkit_version() << " config=" << config.hash() << " workers=" << worker_count() << '\n'
        << config.text();
    if (!artifact) return;
    fs::path log_path = *artifact;
    log_path += ".log";
    std::ofstream log(log_path);
    if (!log) throw Error(ErrorKind::Io, "cannot create " + log_path.string());
    log << "started=" << timestamp() << "\ntoolkit=" << toolkit_version() << "\nconfig_hash=" << config.hash()
        << "\nworkers=" << worker_count() << '\n'
        << config.text();
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create directory " + path.parent_path().string());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

struct ImageJob {
    fs::path path;
    std::string id;
    std::optional<Label> label;
};

std::vector<ImageJob> jobs_from_directory(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::FileNotFound, "no such image directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
        return a.lexically_relative(dir).generic_string() < b.lexically_relative(dir).generic_string();
    });
    std::vector<ImageJob> jobs;
    std::set<std::string> seen;
    for (const auto& f : files) {
        ImageJob job{f, f.stem().string(), parse_label(f.parent_path().filename().string())};
        if (!seen.insert(job.id).second) {
            throw Error(ErrorKind::DataValidation, "two images share the id '" + job.id + "'");
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<ImageJob> jobs_from_manifest(const fs::path& manifest_path, const fs::path& image_root) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    std::vector<ImageJob> jobs;
    for (const auto& e : manifest.entries) jobs.push_back({image_root / e.output, e.id, e.label});
    return jobs;
}

LabeledDataset labeled_rows(const std::vector<FeatureRow>& rows, Split split) {
    LabeledDataset data{{}, split};
    for (const auto& r : rows) {
        if (!r.label) {
            throw Error(ErrorKind::DataValidation,
                        "row '" + r.features.source_id + "' has no label; pass --split-manifest");
        }
        data.rows.push_back({r.features, *r.label});
    }
    return data;
}

/// Train/test sets from a feature CSV, split by manifest when one is given.
/// Without a manifest every labeled row lands in both sets.
SplitDatasets load_splits(const fs::path& features, const std::string& manifest) {
    const auto rows = read_feature_csv(features);
    if (!manifest.empty()) return join_with_manifest(rows, read_manifest(fs::path(manifest)));
    return SplitDatasets{labeled_rows(rows, Split::Train), labeled_rows(rows, Split::Test)};
}

ClassifierConfig config_from_flags(const std::string& family, std::size_t k, const std::string& kernel,
                                   std::uint64_t seed) {
    ClassifierConfig c;
    c.family = parse_family(family);
    c.k = k;
    c.svm.kernel = parse_kernel(kernel);
    c.seed = seed;
    return c;
}

std::string format_score(const std::optional<double>& v) { return v ? format_double(*v, 10) : "undefined"; }

struct OperatorFlags {
    std::string kind = "proxy";
    std::string command;
    std::string engine = "external";
    std::size_t concurrency = 1;
    std::optional<std::uint64_t> engine_seed;
    std::string work_dir;

    void add_to(CLI::App* app) {
        app->add_option("--op", kind, "Style-transfer operator: proxy | external")
            ->check(CLI::IsMember({"proxy", "external"}));
        app->add_option("--op-command", command, "External command template with {source} {target} {output}");
        app->add_option("--op-engine", engine, "Engine identifier recorded for external operators");
        app->add_option("--op-seed", engine_seed, "Engine seed recorded for external operators");
        app->add_option("--op-concurrency", concurrency, "Maximum concurrent external engine processes")
            ->check(CLI::PositiveNumber);
        app->add_option("--op-workdir", work_dir, "Scratch directory for external engine files");
    }

    std::unique_ptr<StyleTransferOp> make(const fs::path& default_work_dir) const {
        if (kind == "proxy") return std::make_unique<ProxyTransfer>();
        if (command.empty()) throw Error(ErrorKind::InvalidArgument, "--op external requires --op-command");
        const fs::path dir = work_dir.empty() ? default_work_dir : fs::path(work_dir);
        return std::make_unique<ExternalTransfer>(command, dir, engine, engine_seed, concurrency);
    }

    void record(RunConfig& config) const {
        config.add("op", kind);
        if (kind == "external") {
            config.add("op_command", command);
            config.add("op_engine", engine);
            config.add("op_seed", engine_seed ? std::to_string(*engine_seed) : "none");
            config.add("op_concurrency", std::to_string(concurrency));
        }
    }
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return kExitBadArguments;
    case ErrorKind::FileNotFound:
    case ErrorKind::DecodeFailed:
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::DataValidation:
    case ErrorKind::DimensionMismatch: return kExitDataValidation;
    case ErrorKind::OperatorFailed: return kExitOperatorFailed;
    }
    return kExitFailure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Forensic ballistics toolkit: counts style-transfer passes behind an image"};
    app.name("dfb");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(toolkit_version()));

    // extract
    auto* extract = app.add_subcommand("extract", "Compute the 63 AC-coefficient Laplacian scales per image");
    std::string ex_images, ex_manifest, ex_out;
    extract->add_option("--images", ex_images, "Image directory (scanned recursively)");
    extract->add_option("--manifest", ex_manifest, "Dataset manifest; labels and paths come from it");
    extract->add_option("--out", ex_out, "Feature CSV to write")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Fit one classifier on extracted features");
    std::string tr_features, tr_manifest, tr_out, tr_family = "RandomForest", tr_kernel = "linear";
    std::size_t tr_k = 5;
    std::uint64_t tr_seed = kDefaultSeed;
    train_cmd->add_option("--features", tr_features, "Feature CSV")->required();
    train_cmd->add_option("--split-manifest", tr_manifest, "Manifest; only its train split is used");
    train_cmd->add_option("--family", tr_family, "kNN | SVM | LDA | DecisionTree | RandomForest | GBoost");
    train_cmd->add_option("--k", tr_k, "Neighbours for kNN")->check(CLI::PositiveNumber);
    train_cmd->add_option("--kernel", tr_kernel, "SVM kernel: linear | poly | rbf | sigmoid");
    train_cmd->add_option("--seed", tr_seed, "Random seed");
    train_cmd->add_option("--out", tr_out, "Model file to write")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a saved model");
    std::string ev_model, ev_features, ev_manifest, ev_out;
    eval_cmd->add_option("--model", ev_model, "Model file")->required();
    eval_cmd->add_option("--features", ev_features, "Feature CSV")->required();
    eval_cmd->add_option("--split-manifest", ev_manifest, "Manifest; only its test split is used");
    eval_cmd->add_option("--out", ev_out, "Report CSV to write");

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "Train and evaluate the full classifier grid");
    std::string gr_features, gr_manifest, gr_out, gr_text;
    std::uint64_t gr_seed = kDefaultSeed;
    bool gr_no_text_only = false;
    grid_cmd->add_option("--features", gr_features, "Feature CSV")->required();
    grid_cmd->add_option("--split-manifest", gr_manifest, "Manifest providing the train/test split")->required();
    grid_cmd->add_option("--out", gr_out, "Report CSV to write")->required();
    grid_cmd->add_option("--text-out", gr_text, "Also write the aligned text table here");
    grid_cmd->add_option("--seed", gr_seed, "Random seed");
    grid_cmd->add_flag("--no-text-only", gr_no_text_only, "Drop the extra k = 1 row");

    // fig4
    auto* fig4 = app.add_subcommand("fig4", "Per-class mean beta curves");
    std::string f4_features, f4_manifest, f4_out;
    fig4->add_option("--features", f4_features, "Feature CSV")->required();
    fig4->add_option("--split-manifest", f4_manifest, "Manifest; only its train split is used");
    fig4->add_option("--out", f4_out, "Plot CSV to write")->required();

    // make-dataset
    auto* make = app.add_subcommand("make-dataset", "Build Deepfake-2 / Deepfake-3 images and a manifest");
    std::string md_out, md_sources, md_t1, md_t2;
    std::size_t md_train = 1200, md_test = 200, md_size = 256;
    std::uint64_t md_seed = kDefaultSeed;
    OperatorFlags md_op;
    make->add_option("--out", md_out, "Output directory")->required();
    make->add_option("--sources", md_sources, "Source image directory (synthetic faces when omitted)");
    make->add_option("--targets1", md_t1, "First-pass target directory");
    make->add_option("--targets2", md_t2, "Second-pass target directory");
    make->add_option("--train", md_train, "Training images per class");
    make->add_option("--test", md_test, "Test images per class");
    make->add_option("--size", md_size, "Synthetic image side length")->check(CLI::Range(16, 4096));
    make->add_option("--seed", md_seed, "Seed for synthetic corpora");
    md_op.add_to(make);

    // ssim
    auto* ssim_cmd = app.add_subcommand("ssim", "Structural similarity of two images");
    std::string ss_a, ss_b, ss_map;
    ssim_cmd->add_option("--a", ss_a, "First image")->required();
    ssim_cmd->add_option("--b", ss_b, "Second image")->required();
    ssim_cmd->add_option("--map", ss_map, "Write the SSIM map as a gray PNG");

    // hist-compare
    auto* hist = app.add_subcommand("hist-compare", "Compare the RGB histograms of two images");
    std::string hc_a, hc_b;
    hist->add_option("--a", hc_a, "First image (H1)")->required();
    hist->add_option("--b", hc_b, "Second image (H2)")->required();

    // properties
    auto* props = app.add_subcommand("properties", "Neutral element, commutativity and associativity checks");
    std::string pr_images, pr_out = "properties";
    std::size_t pr_triples = 1000, pr_corpus = 200, pr_size = 256;
    std::uint64_t pr_seed = kDefaultSeed;
    OperatorFlags pr_op;
    props->add_option("--images", pr_images, "Image directory (synthetic faces when omitted)");
    props->add_option("--corpus-size", pr_corpus, "Synthetic corpus size")->check(CLI::Range(3, 1000000));
    props->add_option("--size", pr_size, "Synthetic image side length")->check(CLI::Range(16, 4096));
    props->add_option("--triples", pr_triples, "Number of (A, B, C) triples")->check(CLI::PositiveNumber);
    props->add_option("--seed", pr_seed, "Triple sampling seed");
    props->add_option("--out", pr_out, "Output prefix: <prefix>.json and <prefix>.csv");
    pr_op.add_to(props);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadArguments;
    }

    try {
        if (extract->parsed()) {
            if (ex_images.empty() && ex_manifest.empty()) {
                throw Error(ErrorKind::InvalidArgument, "extract needs --images or --manifest");
            }
            RunConfig config("extract");
            config.add("images", fs::path(ex_images));
            config.add("manifest", fs::path(ex_manifest));
            config.output("out", fs::path(ex_out));
            log_run(config, err, fs::path(ex_out));
            std::vector<ImageJob> jobs;
            if (!ex_manifest.empty()) {
                const fs::path root = ex_images.empty() ? fs::path(ex_manifest).parent_path() : fs::path(ex_images);
                jobs = jobs_from_manifest(ex_manifest, root);
            } else {
                jobs = jobs_from_directory(ex_images);
            }
            std::vector<FeatureRow> rows(jobs.size());
            parallel_for(jobs.size(), [&](std::size_t i) {
                rows[i] = FeatureRow{extract_features(load_image(jobs[i].path), jobs[i].id), jobs[i].label};
            });
            ensure_parent(ex_out);
            write_feature_csv(fs::path(ex_out), rows, config.provenance());
            out << "extracted " << rows.size() << " feature vectors to " << ex_out << '\n';
            return kExitOk;
        }

        if (train_cmd->parsed()) {
            const ClassifierConfig cc = config_from_flags(tr_family, tr_k, tr_kernel, tr_seed);
            RunConfig config("train");
            config.add("features", fs::path(tr_features));
            config.add("split_manifest", fs::path(tr_manifest));
            config.add("classifier", cc.describe());
            config.output("out", fs::path(tr_out));
            log_run(config, err, fs::path(tr_out));
            const SplitDatasets data = load_splits(tr_features, tr_manifest);
            const TrainedModel model = train(cc, data.train);
            ensure_parent(tr_out);
            save_model(model, tr_out);
            out << "trained " << to_string(cc.family) << " on " << data.train.size() << " rows -> " << tr_out << '\n';
            return kExitOk;
        }

        if (eval_cmd->parsed()) {
            RunConfig config("evaluate");
            config.add("model", fs::path(ev_model));
            config.add("features", fs::path(ev_features));
            config.add("split_manifest", fs::path(ev_manifest));
            config.output("out", fs::path(ev_out));
            log_run(config, err, ev_out.empty() ? std::nullopt : std::optional<fs::path>(ev_out));
            const TrainedModel model = load_model(ev_model);
            const SplitDatasets data = load_splits(ev_features, ev_manifest);
            if (data.test.empty()) throw Error(ErrorKind::DataValidation, "no test rows to evaluate");
            const std::vector<GridResult> results{{GridEntry{model.config, false}, evaluate(model, data.test)}};
            out << render_grid_table(results);
            if (!ev_out.empty()) {
                std::ostringstream csv;
                write_grid_csv(csv, results, config.provenance());
                write_text(ev_out, csv.str());
            }
            return kExitOk;
        }

        if (grid_cmd->parsed()) {
            RunConfig config("grid");
            config.add("features", fs::path(gr_features));
            config.add("split_manifest", fs::path(gr_manifest));
            config.add("seed", gr_seed);
            config.add("text_only_rows", std::string(gr_no_text_only ? "no" : "yes"));
            config.output("out", fs::path(gr_out));
            log_run(config, err, fs::path(gr_out));
            const SplitDatasets data = load_splits(gr_features, gr_manifest);
            if (data.train.empty() || data.test.empty()) {
                throw Error(ErrorKind::DataValidation, "grid needs both train and test rows");
            }
            const auto results = run_grid(standard_grid(gr_seed, !gr_no_text_only), data.train, data.test);
            std::ostringstream csv;
            write_grid_csv(csv, results, config.provenance());
            write_text(gr_out, csv.str());
            const std::string table = render_grid_table(results);
            if (!gr_text.empty()) write_text(gr_text, config.provenance() + "\n" + table);
            out << table;
            return kExitOk;
        }

        if (fig4->parsed()) {
            RunConfig config("fig4");
            config.add("features", fs::path(f4_features));
            config.add("split_manifest", fs::path(f4_manifest));
            config.output("out", fs::path(f4_out));
            log_run(config, err, fs::path(f4_out));
            const SplitDatasets data = load_splits(f4_features, f4_manifest);
            std::vector<BetaVector> class2, class3;
            for (const auto& r : data.train.rows) (r.label == Label::Deepfake2 ? class2 : class3).push_back(r.features);
            if (class2.empty() || class3.empty()) {
                throw Error(ErrorKind::DataValidation, "fig4 needs training rows from both classes");
            }
            const auto m2 = average_betas(class2);
            const auto m3 = average_betas(class3);
            std::ostringstream csv;
            write_fig4_csv(csv, m2, m3, config.provenance());
            write_text(f4_out, csv.str());
            out << "wrote class-mean curves (" << class2.size() << " + " << class3.size() << " images) to " << f4_out
                << '\n';
            return kExitOk;
        }

        if (make->parsed()) {
            RunConfig config("make-dataset");
            config.output("out", fs::path(md_out));
            config.add("sources", md_sources.empty() ? std::string("synthetic") : md_sources);
            config.add("targets1", md_t1.empty() ? std::string("synthetic") : md_t1);
            config.add("targets2", md_t2.empty() ? std::string("synthetic") : md_t2);
            config.add("train_per_class", std::to_string(md_train));
            config.add("test_per_class", std::to_string(md_test));
            config.add("size", std::to_string(md_size));
            config.add("seed", md_seed);
            md_op.record(config);
            const fs::path out_dir(md_out);
            std::error_code ec;
            fs::create_directories(out_dir, ec);
            if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir.string());
            log_run(config, err, out_dir / "manifest.jsonl");
            const std::size_t needed = md_train + md_test;
            auto corpus = [&](const std::string& dir, const std::string& prefix) {
                return dir.empty() ? synthetic_corpus(prefix, needed, md_seed, md_size) : directory_corpus(dir);
            };
            const auto sources = corpus(md_sources, "src");
            const auto targets1 = corpus(md_t1, "t1");
            const auto targets2 = corpus(md_t2, "t2");
            const auto op = md_op.make(out_dir / ".operator");
            const DatasetManifest manifest = build_dataset(sources, targets1, targets2, *op,
                                                           DatasetCounts{md_train, md_test}, out_dir, config.hash());
            out << "wrote " << manifest.entries.size() << " images and " << (out_dir / "manifest.jsonl").string()
                << '\n';
            return kExitOk;
        }

        if (ssim_cmd->parsed()) {
            RunConfig config("ssim");
            config.add("a", fs::path(ss_a));
            config.add("b", fs::path(ss_b));
            config.output("map", fs::path(ss_map));
            log_run(config, err, std::nullopt);
            const SsimResult result = ssim(load_image(ss_a), load_image(ss_b));
            if (!ss_map.empty()) {
                ensure_parent(ss_map);
                save_ssim_map(result, ss_map);
            }
            out << "ssim " << format_double(result.mean_score, 10) << '\n';
            return kExitOk;
        }

        if (hist->parsed()) {
            RunConfig config("hist-compare");
            config.add("a", fs::path(hc_a));
            config.add("b", fs::path(hc_b));
            log_run(config, err, std::nullopt);
            const RgbHistogram h1 = rgb_histogram(load_image(hc_a));
            const RgbHistogram h2 = rgb_histogram(load_image(hc_b));
            for (auto metric : {HistogramMetric::Correlation, HistogramMetric::ChiSquare, HistogramMetric::Bhattacharyya}) {
                out << to_string(metric) << ' ' << format_score(compare(h1, h2, metric)) << '\n';
            }
            return kExitOk;
        }

        if (props->parsed()) {
            RunConfig config("properties");
            config.add("images", pr_images.empty() ? std::string("synthetic") : pr_images);
            if (pr_images.empty()) {
                config.add("corpus_size", std::to_string(pr_corpus));
                config.add("size", std::to_string(pr_size));
            }
            config.add("triples", std::to_string(pr_triples));
            config.add("seed", pr_seed);
            config.output("out", fs::path(pr_out));
            pr_op.record(config);
            const fs::path json_path = fs::path(pr_out + ".json");
            const fs::path csv_path = fs::path(pr_out + ".csv");
            ensure_parent(json_path);
            log_run(config, err, json_path);
            const auto corpus = pr_images.empty() ? synthetic_corpus("img", pr_corpus, pr_seed, pr_size)
                                                  : directory_corpus(pr_images);
            const auto op = pr_op.make(json_path.parent_path() / ".operator");
            const PropertyBatch batch = run_property_batch(*op, corpus, pr_triples, pr_seed);

            std::vector<PropertyReport> all = batch.neutral;
            all.insert(all.end(), batch.commutativity.begin(), batch.commutativity.end());
            all.insert(all.end(), batch.associativity.begin(), batch.associativity.end());
            write_text(json_path, reports_to_json(all, config.hash()) + "\n");
            std::ostringstream csv;
            write_summary_csv(csv, batch, config.provenance());
            write_text(csv_path, csv.str());

            for (const auto& r : batch.neutral) {
                out << "neutral candidate " << r.operands[1] << ": ssim " << format_double(r.ssim.mean_score, 6)
                    << " (" << r.verdict << ")\n";
            }
            out << "\n[commutativity]\n" << render_aggregate(aggregate(batch.commutativity));
            out << "\n[associativity]\n" << render_aggregate(aggregate(batch.associativity));
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        if (e.kind() == ErrorKind::InvalidArgument) err << app.help();
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace dfb::cli
