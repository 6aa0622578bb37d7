#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "patchlr/factor.hpp"
#include "patchlr/image.hpp"
#include "patchlr/metrics.hpp"
#include "patchlr/pipeline.hpp"

namespace patchlr {

/// Where a sweep image comes from: a PGM on disk or a synthetic generator.
struct ImageSource {
  std::string name;
  std::string path;  // empty for synthetic images
  SynthKind kind = SynthKind::Gradient;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;

  bool synthetic() const { return path.empty(); }
  ImageMatrix load() const;
};

/// Parses "name:path.pgm" or "name:synth:<kind>:<rows>x<cols>[:seed]".
ImageSource parse_image_source(std::string_view spec);

std::vector<std::size_t> default_k_values();   // 2, 4, ..., 50
std::vector<std::size_t> default_p_values();   // 4, 8, 16, 32, 64

struct SweepConfig {
  std::vector<ImageSource> images;
  std::vector<Backend> backends = {Backend::Svd};
  std::vector<std::size_t> k_values = default_k_values();
  std::vector<std::size_t> p_values = default_p_values();
  NmfConfig nmf;
  SsimConfig ssim;
  std::string output_dir = "out";
  /// NMF cells are run with seeds nmf.seed, nmf.seed + 1, ... repeat - 1.
  std::size_t repeat = 1;
  /// Worker threads for independent cells; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  /// Off by default: measured times would make sweep.csv differ run to run,
  /// so the column is written as 0 unless this is set.
  bool record_wall_time = false;
  bool write_atlases = true;
  std::size_t atlas_k = 32;
  std::size_t atlas_p = 16;
  double atlas_sparsity_threshold = 0.05;

  void validate() const;
};

/// Flat key=value text, one entry per line, '#' starts a comment. Keys:
///   image (repeatable), backends, k_values, p_values, output_dir, repeat,
///   threads, record_wall_time, write_atlases, atlas_k, atlas_p,
///   nmf.max_iters, nmf.rel_tol, nmf.seed, nmf.epsilon_guard,
///   ssim.window_side, ssim.gaussian_sigma, ssim.c1, ssim.c2.
/// Count lists accept "a,b,c" or a range "start:stop:step".
/// Throws InvalidArgument on unknown keys or bad values.
SweepConfig parse_sweep_config(std::string_view text);

/// Applies one key=value assignment to `cfg`.
void apply_config_entry(SweepConfig& cfg, std::string_view key, std::string_view value);

std::vector<std::size_t> parse_count_list(std::string_view text);

struct SweepResult {
  std::vector<SweepRecord> records;  // sorted by (image, backend, mode, k, p, seed)
  std::vector<std::string> notices;
  std::vector<std::string> written_files;
  /// Dictionaries at the atlas cell, one per (image, backend).
  std::vector<std::pair<std::string, Factorization>> atlas_factorizations;
};

/// Runs every cell in memory; writes nothing.
SweepResult compute_sweep(const SweepConfig& cfg);

/// compute_sweep, then writes sweep.csv and the atlas PPMs to output_dir.
SweepResult run_sweep(const SweepConfig& cfg);

inline constexpr std::string_view kSweepCsvHeader =
    "image,backend,mode,k,p,khat,footprint,mse,psnr_db,mssim,wall_time_ms,nmf_iters,seed";

std::string format_csv_row(const SweepRecord& r);
std::string sweep_csv(const std::vector<SweepRecord>& records);

}  // namespace patchlr
