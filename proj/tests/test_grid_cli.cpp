#include "cli.hpp"
#include "dfb/classify/grid.hpp"
#include "dfb/feature_store.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace dfb {
namespace {

namespace fs = std::filesystem;
using testing::make_blobs;
using testing::TempDir;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

TEST(Grid, ListsResultsTableRows) {
    const auto grid = standard_grid();
    ASSERT_EQ(grid.size(), 15u);
    EXPECT_TRUE(grid[0].text_only);
    EXPECT_EQ(grid[0].config.k, 1u);
    std::vector<std::string> labels;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        EXPECT_FALSE(grid[i].text_only);
        labels.push_back(std::string(to_string(grid[i].config.family)) + " " + grid[i].config.variant_label());
    }
    EXPECT_EQ(labels.front(), "kNN k = 3");
    EXPECT_EQ(labels[5], "kNN k = 15");
    EXPECT_EQ(labels[6], "SVM linear");
    EXPECT_EQ(labels.back().substr(0, 6), "GBoost");
    EXPECT_EQ(standard_grid(kDefaultSeed, false).size(), 14u);
}

TEST(Grid, ReportsAreByteIdenticalAcrossRuns) {
    const auto train_set = make_blobs(60, 1, 1.5);
    const auto test_set = make_blobs(20, 2, 1.5, Split::Test);
    std::ostringstream a, b;
    write_grid_csv(a, run_grid(standard_grid(), train_set, test_set, 1), "# p");
    write_grid_csv(b, run_grid(standard_grid(), train_set, test_set, 3), "# p");
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str().find("classifier,config,class,precision,recall,f1,accuracy_percent,note"), std::string::npos);
}

TEST(Grid, TableShowsIntegerPercent) {
    const auto results = run_grid(standard_grid(), make_blobs(30, 3), make_blobs(10, 4, 0.1, Split::Test));
    const std::string table = render_grid_table(results);
    EXPECT_NE(table.find("100%"), std::string::npos);
    EXPECT_NE(table.find("Deepfake-3"), std::string::npos);
    EXPECT_EQ(table.find("100.0"), std::string::npos);
}

TEST(Cli, BadArgumentsExitTwo) {
    std::string err;
    EXPECT_EQ(run_cli({}, nullptr, &err), cli::kExitBadArguments);
    EXPECT_EQ(run_cli({"no-such-command"}), cli::kExitBadArguments);
    EXPECT_EQ(run_cli({"train", "--features", "x.csv"}), cli::kExitBadArguments); // --out missing
    EXPECT_EQ(run_cli({"extract", "--out", "x.csv"}), cli::kExitBadArguments);
}

TEST(Cli, MissingInputExitsThree) {
    TempDir dir("cli_io");
    EXPECT_EQ(run_cli({"ssim", "--a", (dir.path() / "nope.png").string(), "--b", "x.png"}), cli::kExitIo);
}

TEST(Cli, EndToEndPipeline) {
    TempDir dir("cli_e2e");
    const fs::path ds = dir.path() / "ds";
    std::string out;
    ASSERT_EQ(run_cli({"make-dataset", "--out", ds.string(), "--train", "10", "--test", "4", "--size", "32"}, &out),
              cli::kExitOk);
    ASSERT_TRUE(fs::exists(ds / "manifest.jsonl"));
    EXPECT_TRUE(fs::exists(ds / "manifest.jsonl.log"));
    EXPECT_TRUE(fs::exists(ds / "test" / "Deepfake-3" / "df3_00013.png"));

    const fs::path features = dir.path() / "f.csv";
    ASSERT_EQ(run_cli({"extract", "--manifest", (ds / "manifest.jsonl").string(), "--out", features.string()}),
              cli::kExitOk);
    const auto rows = read_feature_csv(features);
    EXPECT_EQ(rows.size(), 28u);
    EXPECT_EQ(read_file(features).rfind("# dfb ", 0), 0u);

    // Directory scan labels images by parent folder name.
    const fs::path scanned = dir.path() / "scan.csv";
    ASSERT_EQ(run_cli({"extract", "--images", (ds / "train").string(), "--out", scanned.string()}), cli::kExitOk);
    const auto scan_rows = read_feature_csv(scanned);
    ASSERT_EQ(scan_rows.size(), 20u);
    for (const auto& r : scan_rows) EXPECT_TRUE(r.label.has_value());

    const fs::path grid = dir.path() / "grid.csv";
    const fs::path grid2 = dir.path() / "grid2.csv";
    const std::string manifest = (ds / "manifest.jsonl").string();
    ASSERT_EQ(run_cli({"grid", "--features", features.string(), "--split-manifest", manifest, "--out", grid.string()}),
              cli::kExitOk);
    ASSERT_EQ(run_cli({"grid", "--features", features.string(), "--split-manifest", manifest, "--out", grid2.string()}),
              cli::kExitOk);
    EXPECT_EQ(read_file(grid), read_file(grid2));

    const fs::path model = dir.path() / "rf.model";
    ASSERT_EQ(run_cli({"train", "--features", features.string(), "--split-manifest", manifest, "--family",
                       "RandomForest", "--out", model.string()}),
              cli::kExitOk);
    ASSERT_EQ(run_cli({"evaluate", "--model", model.string(), "--features", features.string(), "--split-manifest",
                       manifest},
                      &out),
              cli::kExitOk);
    EXPECT_NE(out.find("RandomForest"), std::string::npos);

    const fs::path fig = dir.path() / "fig4.csv";
    ASSERT_EQ(run_cli({"fig4", "--features", features.string(), "--split-manifest", manifest, "--out", fig.string()}),
              cli::kExitOk);
    EXPECT_NE(read_file(fig).find("ac_index,mean_beta_class2,mean_beta_class3\n1,"), std::string::npos);

    const std::string a = (ds / "train" / "Deepfake-2" / "df2_00000.png").string();
    ASSERT_EQ(run_cli({"ssim", "--a", a, "--b", a}, &out), cli::kExitOk);
    EXPECT_EQ(out, "ssim 1\n");
    ASSERT_EQ(run_cli({"hist-compare", "--a", a, "--b", a}, &out), cli::kExitOk);
    EXPECT_NE(out.find("correlation 1\n"), std::string::npos) << out;

    const fs::path prefix = dir.path() / "props";
    ASSERT_EQ(run_cli({"properties", "--triples", "5", "--corpus-size", "4", "--size", "32", "--out",
                       prefix.string()},
                      &out),
              cli::kExitOk);
    EXPECT_TRUE(fs::exists(prefix.string() + ".json"));
    EXPECT_TRUE(fs::exists(prefix.string() + ".csv"));
    EXPECT_NE(out.find("(with variance = "), std::string::npos);
}

TEST(Cli, OperatorFailureExitsFive) {
    TempDir dir("cli_op");
    EXPECT_EQ(run_cli({"make-dataset", "--out", (dir.path() / "ds").string(), "--train", "1", "--test", "1", "--size",
                       "16", "--op", "external", "--op-command", "false {source} {target} {output}"}),
              cli::kExitOperatorFailed);
    EXPECT_EQ(run_cli({"make-dataset", "--out", (dir.path() / "ds2").string(), "--op", "external"}),
              cli::kExitBadArguments);
}

} // namespace
} // namespace dfb
