#include "patchlr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "patchlr/atlas.hpp"
#include "patchlr/errors.hpp"
#include "patchlr/footprint.hpp"
#include "patchlr/matrix_io.hpp"
#include "patchlr/reorder.hpp"

namespace patchlr {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw InvalidArgument(fmt::format("bad value '{}' for {}", text, what));
  }
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(fmt::format("bad value '{}' for {}", text, what));
  }
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidArgument(fmt::format("bad boolean '{}' for {}", text, what));
}

}  // namespace

ImageMatrix ImageSource::load() const {
  if (synthetic()) return synth_image(kind, rows, cols, seed);
  return load_pgm_file(path);
}

ImageSource parse_image_source(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw InvalidArgument(fmt::format("image source '{}' must start with 'name:'", spec));
  }
  ImageSource src;
  src.name = std::string(trim(spec.substr(0, colon)));
  if (src.name.find_first_of(",\"\n") != std::string::npos) {
    throw InvalidArgument(fmt::format("image name '{}' may not contain commas or quotes", src.name));
  }
  const auto rest = trim(spec.substr(colon + 1));
  if (rest.starts_with("synth:")) {
    const auto parts = split(rest.substr(6), ':');
    if (parts.size() < 2 || parts.size() > 3) {
      throw InvalidArgument(
          fmt::format("synthetic source '{}' must be synth:<kind>:<rows>x<cols>[:seed]", spec));
    }
    src.kind = parse_synth_kind(parts[0]);
    const auto x = parts[1].find('x');
    if (x == std::string_view::npos) {
      throw InvalidArgument(fmt::format("bad synthetic size '{}'", parts[1]));
    }
    src.rows = parse_number<std::size_t>(parts[1].substr(0, x), "image rows");
    src.cols = parse_number<std::size_t>(parts[1].substr(x + 1), "image cols");
    src.seed = parts.size() == 3 ? parse_number<std::uint64_t>(parts[2], "image seed") : 0;
  } else {
    if (rest.empty()) throw InvalidArgument(fmt::format("image source '{}' has no path", spec));
    src.path = std::string(rest);
  }
  return src;
}

std::vector<std::size_t> default_k_values() {
  std::vector<std::size_t> ks;
  for (std::size_t k = 2; k <= 50; k += 2) ks.push_back(k);
  return ks;
}

std::vector<std::size_t> default_p_values() { return {4, 8, 16, 32, 64}; }

std::vector<std::size_t> parse_count_list(std::string_view text) {
  text = trim(text);
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidArgument(fmt::format("range '{}' must be start:stop:step", text));
    const auto start = parse_number<std::size_t>(parts[0], "range start");
    const auto stop = parse_number<std::size_t>(parts[1], "range stop");
    const auto step = parse_number<std::size_t>(parts[2], "range step");
    if (step == 0) throw InvalidArgument("range step must be positive");
    for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
  } else {
    for (auto part : split(text, ',')) {
      if (!part.empty()) out.push_back(parse_number<std::size_t>(part, "count list"));
    }
  }
  if (out.empty()) throw InvalidArgument(fmt::format("empty list '{}'", text));
  return out;
}

void apply_config_entry(SweepConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "image") {
    cfg.images.push_back(parse_image_source(value));
  } else if (key == "backends") {
    cfg.backends.clear();
    for (auto b : split(value, ',')) cfg.backends.push_back(parse_backend(b));
  } else if (key == "k_values") {
    cfg.k_values = parse_count_list(value);
  } else if (key == "p_values") {
    cfg.p_values = parse_count_list(value);
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(value);
  } else if (key == "repeat") {
    cfg.repeat = parse_number<std::size_t>(value, key);
  } else if (key == "threads") {
    cfg.threads = parse_number<std::size_t>(value, key);
  } else if (key == "record_wall_time") {
    cfg.record_wall_time = parse_bool(value, key);
  } else if (key == "write_atlases") {
    cfg.write_atlases = parse_bool(value, key);
  } else if (key == "atlas_k") {
    cfg.atlas_k = parse_number<std::size_t>(value, key);
  } else if (key == "atlas_p") {
    cfg.atlas_p = parse_number<std::size_t>(value, key);
  } else if (key == "nmf.max_iters") {
    cfg.nmf.max_iters = parse_number<std::size_t>(value, key);
  } else if (key == "nmf.rel_tol") {
    cfg.nmf.rel_tol = parse_real(value, key);
  } else if (key == "nmf.seed") {
    cfg.nmf.seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "nmf.epsilon_guard") {
    cfg.nmf.epsilon_guard = parse_real(value, key);
  } else if (key == "ssim.window_side") {
    cfg.ssim.window_side = parse_number<std::size_t>(value, key);
  } else if (key == "ssim.gaussian_sigma") {
    cfg.ssim.gaussian_sigma = parse_real(value, key);
  } else if (key == "ssim.c1") {
    cfg.ssim.c1 = parse_real(value, key);
  } else if (key == "ssim.c2") {
    cfg.ssim.c2 = parse_real(value, key);
  } else {
    throw InvalidArgument(fmt::format("unknown config key '{}'", key));
  }
}

SweepConfig parse_sweep_config(std::string_view text) {
  SweepConfig cfg;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument(fmt::format("config line {}: expected key = value", line_no));
    }
    try {
      apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
  return cfg;
}

void SweepConfig::validate() const {
  if (images.empty()) throw InvalidArgument("sweep needs at least one image");
  if (backends.empty()) throw InvalidArgument("sweep needs at least one backend");
  if (k_values.empty() || p_values.empty()) throw InvalidArgument("k_values and p_values must be non-empty");
  if (std::find(k_values.begin(), k_values.end(), 0) != k_values.end()) {
    throw InvalidArgument("k values must be positive");
  }
  if (std::find(p_values.begin(), p_values.end(), 0) != p_values.end()) {
    throw InvalidArgument("p values must be positive");
  }
  if (repeat < 1) throw InvalidArgument("repeat must be at least 1");
  nmf.validate();
  ssim.validate();
}

namespace {

struct Cell {
  std::size_t image = 0;
  Backend backend = Backend::Svd;
  Mode mode = Mode::Direct;
  std::size_t k = 0;
  std::size_t p = 0;
  std::size_t khat = 0;
  std::uint64_t seed = 0;
  bool atlas = false;
  bool emit_row = true;
};

struct CellOutput {
  SweepRecord record;
  std::optional<Factorization> atlas;
};

auto sort_key(const SweepRecord& r) {
  return std::make_tuple(std::string_view(r.image), to_string(r.backend), to_string(r.mode), r.k,
                         r.p, r.seed);
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SweepResult compute_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result;

  struct Loaded {
    const ImageSource* source;
    ImageMatrix image;
  };
  std::vector<Loaded> images;
  for (const auto& src : cfg.images) {
    try {
      images.push_back({&src, src.load()});
    } catch (const std::exception& e) {
      result.notices.push_back(fmt::format("skipping image '{}': {}", src.name, e.what()));
    }
  }

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& img = images[i].image;
    const std::size_t n = img.rows();
    const std::size_t m = img.cols();
    for (std::size_t p : cfg.p_values) {
      if (n % p != 0 || m % p != 0) {
        result.notices.push_back(fmt::format("image '{}' ({}x{}): p = {} does not divide both "
                                             "dimensions, skipped",
                                             images[i].source->name, n, m, p));
      }
    }
    for (Backend backend : cfg.backends) {
      const std::size_t runs = backend == Backend::Nmf ? cfg.repeat : 1;
      for (std::size_t r = 0; r < runs; ++r) {
        const std::uint64_t seed = backend == Backend::Nmf ? cfg.nmf.seed + r : 0;
        for (std::size_t k : cfg.k_values) {
          if (k <= std::min(n, m)) {
            cells.push_back({i, backend, Mode::Direct, k, 0, k, seed, false});
          } else {
            result.notices.push_back(fmt::format("image '{}': k = {} exceeds min(n, m), direct "
                                                 "cell skipped",
                                                 images[i].source->name, k));
          }
          for (std::size_t p : cfg.p_values) {
            if (n % p != 0 || m % p != 0) continue;
            const auto khat = static_cast<std::size_t>(select_khat(n, m, p, k));
            if (khat == 0) continue;
            const bool atlas = cfg.write_atlases && r == 0 && k == cfg.atlas_k && p == cfg.atlas_p;
            cells.push_back({i, backend, Mode::Patched, k, p, khat, seed, atlas});
          }
        }
        // Atlas cell requested but k = atlas_k is not part of the sweep.
        if (cfg.write_atlases && r == 0 &&
            std::find(cfg.k_values.begin(), cfg.k_values.end(), cfg.atlas_k) == cfg.k_values.end() &&
            n % cfg.atlas_p == 0 && m % cfg.atlas_p == 0) {
          const auto khat = static_cast<std::size_t>(select_khat(n, m, cfg.atlas_p, cfg.atlas_k));
          if (khat > 0) {
            cells.push_back({i, backend, Mode::Patched, cfg.atlas_k, cfg.atlas_p, khat, seed,
                             true, false});
          }
        }
      }
    }
  }

  std::vector<CellOutput> outputs(cells.size());
  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    const Cell& c = cells[idx];
    const auto& loaded = images[c.image];
    PipelineConfig pc{cfg.nmf, cfg.ssim, true};
    pc.nmf.seed = c.backend == Backend::Nmf ? c.seed : cfg.nmf.seed;
    auto res = c.mode == Mode::Direct
                   ? encode_decode_direct(loaded.image, c.backend, c.k, pc, loaded.source->name)
                   : encode_decode_patched(loaded.image, c.backend, c.khat, c.p, pc,
                                           loaded.source->name);
    res.record.k = c.k;
    res.record.seed = c.seed;
    if (!cfg.record_wall_time) res.record.wall_time_ms = 0.0;
    outputs[idx].record = std::move(res.record);
    if (c.atlas) outputs[idx].atlas = std::move(res.factorization);
  });

  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const Cell& c = cells[idx];
    if (c.atlas) {
      result.atlas_factorizations.emplace_back(
          fmt::format("{}_{}", images[c.image].source->name, to_string(c.backend)),
          std::move(*outputs[idx].atlas));
    }
    if (c.emit_row) result.records.push_back(std::move(outputs[idx].record));
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const SweepRecord& a, const SweepRecord& b) { return sort_key(a) < sort_key(b); });
  return result;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  auto result = compute_sweep(cfg);
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  const std::string csv = sweep_csv(result.records);
  const auto csv_path = (fs::path(cfg.output_dir) / "sweep.csv").string();
  write_file(csv_path, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  result.written_files.push_back(csv_path);

  for (const auto& [label, fact] : result.atlas_factorizations) {
    AtlasSpec spec;
    spec.patch_size = cfg.atlas_p;
    spec.grid_rows = std::max<std::size_t>(4, (fact.rank + spec.grid_cols - 1) / spec.grid_cols);
    const auto ppm = encode_ppm(render_atlas(fact, spec));
    const auto ppm_path = (fs::path(cfg.output_dir) / ("atlas_" + label + ".ppm")).string();
    write_file(ppm_path, ppm);
    const std::string side = atlas_sidecar(fact, cfg.atlas_sparsity_threshold);
    const auto side_path = (fs::path(cfg.output_dir) / ("atlas_" + label + ".txt")).string();
    write_file(side_path,
               std::span(reinterpret_cast<const std::uint8_t*>(side.data()), side.size()));
    result.written_files.push_back(ppm_path);
    result.written_files.push_back(side_path);
  }
  return result;
}

namespace {

std::string format_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.6g}", v);
}

}  // namespace

std::string format_csv_row(const SweepRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{:.3f},{},{}", r.image, to_string(r.backend),
                     to_string(r.mode), r.k, r.p, r.khat, r.footprint, format_metric(r.mse),
                     format_metric(r.psnr_db), format_metric(r.mssim), r.wall_time_ms,
                     r.nmf_iters, r.seed);
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_csv_row(r);
    out += '\n';
  }
  return out;
}

}  // namespace patchlr
