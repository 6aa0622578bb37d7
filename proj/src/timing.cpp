#include "patchlr/timing.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "patchlr/errors.hpp"
#include "patchlr/factor.hpp"
#include "patchlr/image.hpp"
#include "patchlr/reorder.hpp"

namespace patchlr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Keeps results observable so the optimizer cannot drop the timed work.
volatile double g_sink = 0.0;

}  // namespace

std::vector<TimingRow> run_timing(std::size_t n, std::size_t m,
                                  const std::vector<std::size_t>& p_values, std::size_t k,
                                  std::size_t trials, std::uint64_t seed) {
  if (trials < 3) throw InvalidArgument("timing needs at least 3 trials");
  if (k < 1 || k > std::min(n, m)) throw RankError("timing rank outside [1, min(n, m)]");
  const auto img = synth_image(SynthKind::GaussianBlobs, n, m, seed);
  const Eigen::MatrixXd a = img.to_matrix();

  g_sink = g_sink + svd_truncate(a, k).final_error;  // warm-up
  std::vector<double> direct;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto t0 = Clock::now();
    const auto f = svd_truncate(a, k);
    direct.push_back(ms_since(t0));
    g_sink = g_sink + f.final_error;
  }
  const double t_direct = median(direct);

  std::vector<TimingRow> rows;
  for (std::size_t p : p_values) {
    check_patch_size(n, m, p);
    const std::size_t khat = std::min(k, max_rank(n, m, p));
    std::vector<double> patched, reorder_only, factor_only;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto t0 = Clock::now();
      const auto rm = reorder(img, p);
      const double t_fwd = ms_since(t0);
      const auto t1 = Clock::now();
      const auto f = svd_truncate(rm.data(), khat);
      const double t_fact = ms_since(t1);
      const Eigen::MatrixXd prod = f.product();
      const auto t2 = Clock::now();
      const auto back = inverse_reorder_matrix(prod, n, m, p);
      const double t_inv = ms_since(t2);
      patched.push_back(ms_since(t0));
      reorder_only.push_back(t_fwd + t_inv);
      factor_only.push_back(t_fact);
      g_sink = g_sink + back(0, 0);
    }
    TimingRow row;
    row.n = n;
    row.m = m;
    row.p = p;
    row.k = k;
    row.t_direct_ms = t_direct;
    row.t_patched_ms = median(patched);
    row.t_reorder_ms = median(reorder_only);
    row.t_patched_factor_ms = median(factor_only);
    row.measured_ratio = row.t_patched_ms / t_direct;
    const double side = static_cast<double>(std::min(n, m));
    const double p2 = static_cast<double>(p * p);
    row.predicted_ratio = p2 * p2 / (side * side);
    rows.push_back(row);
  }
  return rows;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::string out(kTimingCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{:.4f},{:.4f},{:.4f},{:.6g},{:.6g}\n", r.n, r.m, r.p, r.k,
                       r.t_direct_ms, r.t_patched_ms, r.t_reorder_ms, r.measured_ratio,
                       r.predicted_ratio);
  }
  return out;
}

}  // namespace patchlr
