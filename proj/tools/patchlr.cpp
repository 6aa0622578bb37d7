// patchlr: command-line front end for patch-reordered low-rank compression.
//
// Exit codes: 0 success, 1 usage/config error, 2 sweep produced no rows.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "patchlr/atlas.hpp"
#include "patchlr/errors.hpp"
#include "patchlr/footprint.hpp"
#include "patchlr/image.hpp"
#include "patchlr/matrix_io.hpp"
#include "patchlr/pipeline.hpp"
#include "patchlr/reorder.hpp"
#include "patchlr/sweep.hpp"
#include "patchlr/timing.hpp"

namespace fs = std::filesystem;
using namespace patchlr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitEmpty = 2;

struct ImageArgs {
  std::string in;
  std::string synth;

  void add_to(CLI::App* app) {
    auto* in_opt = app->add_option("--in", in, "input PGM (P2 or P5)");
    auto* synth_opt = app->add_option("--synth", synth, "synthetic image <kind>:<rows>x<cols>[:seed]");
    in_opt->excludes(synth_opt);
  }

  std::pair<std::string, ImageMatrix> load() const {
    if (!in.empty()) return {fs::path(in).stem().string(), load_pgm_file(in)};
    if (!synth.empty()) {
      const auto src = parse_image_source("synth:synth:" + synth);
      return {std::string(to_string(src.kind)), src.load()};
    }
    throw InvalidArgument("one of --in or --synth is required");
  }
};

void write_text(const fs::path& path, const std::string& text) {
  write_file(path.string(), std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Resolves the factorization rank for encode/atlas: --khat wins, otherwise a
// patched run derives khat from the direct budget of --k.
std::size_t resolve_rank(const ImageMatrix& img, std::size_t p, std::optional<std::size_t> k,
                         std::optional<std::size_t> khat) {
  if (khat) return *khat;
  if (!k) throw InvalidArgument("--k or --khat is required");
  if (p == 0) return *k;
  const auto r = select_khat(img.rows(), img.cols(), p, *k);
  if (r == 0) {
    throw InvalidArgument(fmt::format("budget k = {} admits no rank at p = {}", *k, p));
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patch-reordered low-rank image compression (SVD / NMF)"};
  app.require_subcommand(1);

  std::string backend_name = "svd";
  std::optional<std::size_t> k, khat;
  std::size_t p = 0;
  std::uint64_t seed = 1;
  std::size_t max_iters = NmfConfig{}.max_iters;
  double rel_tol = NmfConfig{}.rel_tol;
  std::string out_dir = ".";

  auto add_factor_flags = [&](CLI::App* cmd) {
    cmd->add_option("--backend", backend_name, "svd or nmf")->check(CLI::IsMember({"svd", "nmf"}));
    cmd->add_option("--k", k, "direct rank, or the budget rank for a patched run");
    cmd->add_option("--p", p, "patch size (0 = no reordering)");
    cmd->add_option("--khat", khat, "rank of the patch matrix factorization");
    cmd->add_option("--seed", seed, "NMF initialization seed");
    cmd->add_option("--max-iters", max_iters, "NMF iteration cap");
    cmd->add_option("--rel-tol", rel_tol, "NMF relative improvement threshold");
    cmd->add_option("--out", out_dir, "output directory");
  };

  // encode
  ImageArgs enc_img;
  auto* encode = app.add_subcommand("encode", "factor an image and write a .lre file");
  enc_img.add_to(encode);
  add_factor_flags(encode);

  // decode
  std::string dec_in;
  std::uint32_t dec_maxval = 255;
  auto* decode = app.add_subcommand("decode", "reconstruct a PGM from a .lre file");
  decode->add_option("--in", dec_in, "encoded .lre file")->required();
  decode->add_option("--out", out_dir, "output directory");
  decode->add_option("--maxval", dec_maxval, "PGM maxval")->check(CLI::IsMember({255, 65535}));

  // sweep
  std::string config_path;
  std::optional<std::string> sweep_backends, sweep_k, sweep_p, sweep_out;
  std::optional<std::size_t> sweep_repeat, sweep_threads;
  std::optional<std::uint64_t> sweep_seed;
  std::vector<std::string> sweep_images;
  bool sweep_wall = false;
  auto* sweep = app.add_subcommand("sweep", "run the rate/quality sweep and write sweep.csv");
  sweep->add_option("--config", config_path, "key=value config file");
  sweep->add_option("--image", sweep_images, "extra image source name:path or name:synth:kind:RxC[:seed]");
  sweep->add_option("--backend", sweep_backends, "comma-separated backends");
  sweep->add_option("--k", sweep_k, "k list (a,b,c or start:stop:step)");
  sweep->add_option("--p", sweep_p, "p list");
  sweep->add_option("--seed", sweep_seed, "NMF seed");
  sweep->add_option("--repeat", sweep_repeat, "NMF seeds per cell");
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = all cores)");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--record-wall-time", sweep_wall, "write measured wall times (CSV no longer reproducible)");

  // timing
  std::size_t t_n = 512, t_m = 512, t_k = 16, t_trials = 5;
  std::string t_p = "4,8,16";
  auto* timing = app.add_subcommand("timing", "direct vs patched SVD timing, writes timing.csv");
  timing->add_option("--n", t_n, "image rows");
  timing->add_option("--m", t_m, "image cols");
  timing->add_option("--p", t_p, "patch sizes");
  timing->add_option("--k", t_k, "rank");
  timing->add_option("--trials", t_trials, "trials per measurement (>= 3)");
  timing->add_option("--seed", seed, "synthetic image seed");
  timing->add_option("--out", out_dir, "output directory");

  // atlas
  ImageArgs atlas_img;
  std::size_t grid_rows = 4, grid_cols = 8, gutter = 1;
  std::string scale_name = "per-atlas-max";
  double threshold = 0.05;
  auto* atlas = app.add_subcommand("atlas", "render the patch dictionary as a PPM");
  atlas_img.add_to(atlas);
  add_factor_flags(atlas);
  atlas->add_option("--grid-rows", grid_rows, "atlas rows");
  atlas->add_option("--grid-cols", grid_cols, "atlas columns");
  atlas->add_option("--gutter", gutter, "separator width in pixels");
  atlas->add_option("--scale", scale_name, "per-atlas-max or per-patch-max")
      ->check(CLI::IsMember({"per-atlas-max", "per-patch-max"}));
  atlas->add_option("--threshold", threshold, "sparsity threshold for the sidecar");

  // footprint
  std::uint64_t f_n = 256, f_m = 256, f_k = 32;
  std::optional<std::uint64_t> f_khat;
  auto* fp = app.add_subcommand("footprint", "print the footprint-vs-p curve as CSV");
  fp->add_option("--n", f_n, "image rows");
  fp->add_option("--m", f_m, "image cols");
  fp->add_option("--k", f_k, "direct rank");
  fp->add_option("--khat", f_khat, "patched rank (defaults to k)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    NmfConfig nmf;
    nmf.seed = seed;
    nmf.max_iters = max_iters;
    nmf.rel_tol = rel_tol;

    if (*encode) {
      const auto [name, img] = enc_img.load();
      const std::size_t rank = resolve_rank(img, p, k, khat);
      const auto enc = encode_image(img, parse_backend(backend_name), rank, p, nmf);
      fs::create_directories(out_dir);
      const auto path = fs::path(out_dir) / (name + ".lre");
      write_file(path.string(), serialize_encoded(enc));
      std::cout << sidecar_line(enc.factorization) << '\n'
                << fmt::format("footprint={} raw={} -> {}\n",
                               p == 0 ? footprint(FootprintKind::Direct, img.rows(), img.cols(), rank)
                                      : footprint(FootprintKind::Patched, img.rows(), img.cols(), 0,
                                                  rank, p),
                               img.size(), path.string());
      return kExitOk;
    }

    if (*decode) {
      const auto enc = deserialize_encoded(read_file(dec_in));
      const auto img = decode_image(enc);
      fs::create_directories(out_dir);
      const auto path = fs::path(out_dir) / (fs::path(dec_in).stem().string() + ".pgm");
      save_pgm_file(img, path.string(), dec_maxval);
      std::cout << fmt::format("{}x{} p={} -> {}\n", enc.n, enc.m, enc.p, path.string());
      return kExitOk;
    }

    if (*sweep) {
      SweepConfig cfg;
      if (!config_path.empty()) {
        const auto bytes = read_file(config_path);
        cfg = parse_sweep_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      }
      for (const auto& s : sweep_images) apply_config_entry(cfg, "image", s);
      if (sweep_backends) apply_config_entry(cfg, "backends", *sweep_backends);
      if (sweep_k) apply_config_entry(cfg, "k_values", *sweep_k);
      if (sweep_p) apply_config_entry(cfg, "p_values", *sweep_p);
      if (sweep_seed) cfg.nmf.seed = *sweep_seed;
      if (sweep_repeat) cfg.repeat = *sweep_repeat;
      if (sweep_threads) cfg.threads = *sweep_threads;
      if (sweep_out) cfg.output_dir = *sweep_out;
      if (sweep_wall) cfg.record_wall_time = true;
      cfg.validate();

      const auto result = run_sweep(cfg);
      for (const auto& note : result.notices) std::cerr << "note: " << note << '\n';
      for (const auto& f : result.written_files) std::cout << "wrote " << f << '\n';
      if (result.records.empty()) {
        std::cerr << "sweep produced no records\n";
        return kExitEmpty;
      }
      std::cout << result.records.size() << " records\n";
      return kExitOk;
    }

    if (*timing) {
      const auto rows = run_timing(t_n, t_m, parse_count_list(t_p), t_k, t_trials, seed);
      const auto csv = timing_csv(rows);
      fs::create_directories(out_dir);
      write_text(fs::path(out_dir) / "timing.csv", csv);
      std::cout << csv;
      return kExitOk;
    }

    if (*atlas) {
      const auto [name, img] = atlas_img.load();
      if (p == 0) throw InvalidArgument("atlas needs --p");
      const std::size_t rank = resolve_rank(img, p, k, khat);
      const auto backend = parse_backend(backend_name);
      const auto fact = factorize(reorder(img, p).data(), rank, backend, nmf);
      AtlasSpec spec;
      spec.grid_rows = grid_rows;
      spec.grid_cols = grid_cols;
      spec.patch_size = p;
      spec.separator_px = gutter;
      spec.value_scale = scale_name == "per-patch-max" ? ValueScale::PerPatchMax : ValueScale::PerAtlasMax;
      fs::create_directories(out_dir);
      const auto stem = fs::path(out_dir) / fmt::format("atlas_{}_{}", name, backend_name);
      write_file(stem.string() + ".ppm", encode_ppm(render_atlas(fact, spec)));
      write_text(stem.string() + ".txt", atlas_sidecar(fact, threshold));
      std::cout << fmt::format("rank={} sparsity@{}={:.4f} -> {}.ppm\n", rank, threshold,
                               dictionary_sparsity(fact, threshold), stem.string());
      return kExitOk;
    }

    if (*fp) {
      const std::uint64_t kh = f_khat.value_or(f_k);
      const auto opt = optimal_patch_size(f_n, f_m);
      std::cout << fmt::format("# n={} m={} k={} khat={} p*={:.4f} min_g={:.4f} best_feasible_p={}\n",
                               f_n, f_m, f_k, kh, opt.p_star, opt.footprint_per_rank,
                               best_feasible_patch_size(f_n, f_m));
      std::cout << "p,feasible,g,footprint_q,footprint_tk,khat_budget\n";
      const std::uint64_t tk = footprint(FootprintKind::Direct, f_n, f_m, f_k);
      for (std::uint64_t q = 1; q <= std::min(f_n, f_m); ++q) {
        const bool feasible = f_n % q == 0 && f_m % q == 0;
        const double g = patch_cost_real(static_cast<double>(f_n), static_cast<double>(f_m),
                                         static_cast<double>(q));
        std::cout << fmt::format("{},{},{:.6g},{:.6g},{},{}\n", q, feasible ? 1 : 0, g,
                                 g * static_cast<double>(kh), tk,
                                 feasible ? select_khat(f_n, f_m, q, f_k) : 0);
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
