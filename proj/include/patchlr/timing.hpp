#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace patchlr {

struct TimingRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;
  std::size_t k = 0;
  double t_direct_ms = 0.0;   // median SVD truncation of the n x m image
  double t_patched_ms = 0.0;  // median reorder + SVD of the patch matrix + decode
  double t_reorder_ms = 0.0;  // median reorder + inverse reorder alone
  double t_patched_factor_ms = 0.0;  // median SVD of the patch matrix alone
  double measured_ratio = 0.0;   // t_patched / t_direct
  double predicted_ratio = 0.0;  // p^4 / min(n, m)^2
};

/// Serial benchmark of direct vs patched SVD on a gaussian-blobs image.
/// The patched rank is min(k, p^2, nm/p^2). Needs trials >= 3.
std::vector<TimingRow> run_timing(std::size_t n, std::size_t m,
                                  const std::vector<std::size_t>& p_values, std::size_t k,
                                  std::size_t trials, std::uint64_t seed = 1);

inline constexpr std::string_view kTimingCsvHeader =
    "n,m,p,k,t_direct_ms,t_patched_ms,t_reorder_ms,measured_ratio,predicted_ratio";

std::string timing_csv(const std::vector<TimingRow>& rows);

}  // namespace patchlr
