#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "patchlr/errors.hpp"
#include "patchlr/matrix_io.hpp"
#include "patchlr/sweep.hpp"
#include "patchlr/timing.hpp"

using namespace patchlr;
namespace fs = std::filesystem;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.images = {parse_image_source("blobs:synth:gaussian-blobs:32x32:3")};
  cfg.k_values = {2, 4, 8};
  cfg.p_values = {4, 8, 5};
  cfg.write_atlases = false;
  cfg.nmf.max_iters = 40;
  cfg.ssim.window_side = 7;
  return cfg;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("patchlr_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(ImageSources, Parsing) {
  auto s = parse_image_source("cb:synth:checkerboard:64x128:7");
  EXPECT_TRUE(s.synthetic());
  EXPECT_EQ(s.kind, SynthKind::Checkerboard);
  EXPECT_EQ(s.rows, 64u);
  EXPECT_EQ(s.cols, 128u);
  EXPECT_EQ(s.seed, 7u);
  s = parse_image_source("lena:/data/lena.pgm");
  EXPECT_FALSE(s.synthetic());
  EXPECT_EQ(s.path, "/data/lena.pgm");
  EXPECT_THROW(parse_image_source("nocolon"), InvalidArgument);
  EXPECT_THROW(parse_image_source("x:synth:plaid:8x8"), InvalidArgument);
  EXPECT_THROW(parse_image_source("x:synth:gradient:8by8"), InvalidArgument);
}

TEST(Config, CountLists) {
  EXPECT_EQ(parse_count_list("2:10:4"), (std::vector<std::size_t>{2, 6, 10}));
  EXPECT_EQ(parse_count_list("4, 8,16"), (std::vector<std::size_t>{4, 8, 16}));
  EXPECT_EQ(default_k_values().size(), 25u);
  EXPECT_EQ(default_k_values().back(), 50u);
  EXPECT_THROW(parse_count_list("1:5:0"), InvalidArgument);
  EXPECT_THROW(parse_count_list("a,b"), InvalidArgument);
}

TEST(Config, ParseFile) {
  const auto cfg = parse_sweep_config(
      "# demo\n"
      "image = a:synth:gradient:16x16\n"
      "image = b:synth:uniform-noise:16x32:4\n"
      "backends = svd,nmf\n"
      "k_values = 1:3:1\n"
      "p_values = 4\n"
      "repeat = 2\n"
      "nmf.max_iters = 7\n"
      "ssim.window_side = 5\n"
      "record_wall_time = true\n");
  EXPECT_EQ(cfg.images.size(), 2u);
  EXPECT_EQ(cfg.backends, (std::vector<Backend>{Backend::Svd, Backend::Nmf}));
  EXPECT_EQ(cfg.k_values, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(cfg.repeat, 2u);
  EXPECT_EQ(cfg.nmf.max_iters, 7u);
  EXPECT_EQ(cfg.ssim.window_side, 5u);
  EXPECT_TRUE(cfg.record_wall_time);
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse_sweep_config("image = a:synth:gradient:8x8\nbogus = 1\n");
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_sweep_config("no equals sign\n"), InvalidArgument);
  EXPECT_THROW(parse_sweep_config("repeat = -1\n"), InvalidArgument);
  SweepConfig empty;
  EXPECT_THROW(empty.validate(), InvalidArgument);
}

TEST(Sweep, DefaultGridCount) {
  SweepConfig cfg;
  cfg.images = {parse_image_source("blobs:synth:gaussian-blobs:256x256:1")};
  cfg.write_atlases = false;
  const auto res = compute_sweep(cfg);
  std::size_t direct = 0, patched = 0;
  for (const auto& r : res.records) (r.mode == Mode::Direct ? direct : patched)++;
  EXPECT_EQ(direct, 25u);
  EXPECT_GT(patched, 0u);
  EXPECT_LE(patched, 125u);
}

TEST(Sweep, BudgetLawAndSkips) {
  auto cfg = small_config();
  cfg.backends = {Backend::Svd, Backend::Nmf};
  const auto res = compute_sweep(cfg);
  std::map<std::tuple<std::string, Backend, std::size_t>, std::uint64_t> direct_fp;
  for (const auto& r : res.records) {
    if (r.mode == Mode::Direct) direct_fp[{r.image, r.backend, r.k}] = r.footprint;
  }
  for (const auto& r : res.records) {
    EXPECT_NE(r.p, 5u);
    if (r.mode == Mode::Patched) {
      EXPECT_LE(r.footprint, direct_fp.at({r.image, r.backend, r.k}));
    }
  }
  bool noted = false;
  for (const auto& n : res.notices) noted |= n.find("p = 5") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Sweep, RowsSortedAndRepeatSeeds) {
  auto cfg = small_config();
  cfg.backends = {Backend::Nmf};
  cfg.repeat = 2;
  cfg.nmf.seed = 10;
  const auto res = compute_sweep(cfg);
  std::size_t s10 = 0, s11 = 0;
  for (const auto& r : res.records) {
    s10 += r.seed == 10;
    s11 += r.seed == 11;
  }
  EXPECT_EQ(s10, s11);
  EXPECT_GT(s10, 0u);
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    const auto& a = res.records[i - 1];
    const auto& b = res.records[i];
    EXPECT_LE(std::make_tuple(std::string(to_string(a.mode)), a.k, a.p, a.seed),
              std::make_tuple(std::string(to_string(b.mode)), b.k, b.p, b.seed));
  }
}

TEST(Sweep, MissingImageIsSkipped) {
  auto cfg = small_config();
  cfg.images.push_back(parse_image_source("ghost:/nonexistent/ghost.pgm"));
  const auto res = compute_sweep(cfg);
  for (const auto& r : res.records) EXPECT_EQ(r.image, "blobs");
  ASSERT_FALSE(res.notices.empty());
  EXPECT_NE(res.notices.front().find("ghost"), std::string::npos);
}

TEST(Sweep, CsvDeterministicAcrossThreadCounts) {
  auto cfg = small_config();
  cfg.backends = {Backend::Svd, Backend::Nmf};
  cfg.threads = 1;
  const auto a = sweep_csv(compute_sweep(cfg).records);
  cfg.threads = 3;
  const auto b = sweep_csv(compute_sweep(cfg).records);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kSweepCsvHeader);
}

TEST(Sweep, RunWritesFiles) {
  auto cfg = small_config();
  cfg.write_atlases = true;
  cfg.atlas_k = 8;
  cfg.atlas_p = 4;
  cfg.k_values = {2};
  cfg.output_dir = scratch_dir("run").string();
  const auto res = run_sweep(cfg);
  EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / "sweep.csv"));
  EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / "atlas_blobs_svd.ppm"));
  EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / "atlas_blobs_svd.txt"));
  // The atlas-only cell does not add a k = 8 row.
  for (const auto& r : res.records) EXPECT_EQ(r.k, 2u);
  fs::remove_all(cfg.output_dir);
}

TEST(CsvRow, Formatting) {
  SweepRecord r;
  r.image = "x";
  r.mode = Mode::Patched;
  r.k = 8;
  r.p = 16;
  r.khat = 3;
  r.footprint = 1536;
  r.mse = 0.0;
  r.psnr_db = std::numeric_limits<double>::infinity();
  r.mssim = 1.0;
  EXPECT_EQ(format_csv_row(r), "x,svd,patched,8,16,3,1536,0,inf,1,0.000,0,0");
}

TEST(Timing, RowsAndCsv) {
  const auto rows = run_timing(64, 64, {4, 8}, 4, 3);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].predicted_ratio, 256.0 / 4096.0);
  EXPECT_DOUBLE_EQ(rows[1].predicted_ratio, 1.0);
  for (const auto& r : rows) {
    EXPECT_GT(r.t_direct_ms, 0.0);
    EXPECT_GE(r.t_patched_ms, r.t_patched_factor_ms);
    EXPECT_NEAR(r.measured_ratio, r.t_patched_ms / r.t_direct_ms, 1e-12);
  }
  const auto csv = timing_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTimingCsvHeader);
  EXPECT_THROW(run_timing(64, 64, {4}, 4, 2), InvalidArgument);
}
