#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace patchlr {

// Memory footprints count stored matrix elements, not bits:
//   raw image         n m
//   direct rank k     k (n + m)
//   patched rank k^   k^ (p^2 + nm/p^2)

enum class FootprintKind { Raw, Direct, Patched };

struct FootprintReport {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t khat = 0;
  std::uint64_t p = 0;
  std::uint64_t footprint_raw = 0;
  std::uint64_t footprint_tk = 0;
  std::uint64_t footprint_q = 0;
};

/// Element count for one representation. `k` is used for Direct, `khat` and
/// `p` for Patched (p must divide n and m).
std::uint64_t footprint(FootprintKind kind, std::uint64_t n, std::uint64_t m,
                        std::uint64_t k = 0, std::uint64_t khat = 0, std::uint64_t p = 0);

FootprintReport footprint_report(std::uint64_t n, std::uint64_t m, std::uint64_t k,
                                 std::uint64_t khat, std::uint64_t p);

/// Per-rank patched footprint g(p) = p^2 + nm/p^2 for a feasible p.
std::uint64_t patch_cost(std::uint64_t n, std::uint64_t m, std::uint64_t p);

/// g(p) for any real p > 0 (the continuous curve).
double patch_cost_real(double n, double m, double p);

struct OptimalPatch {
  double p_star = 0.0;             // (nm)^(1/4)
  double footprint_per_rank = 0.0; // 2 sqrt(nm)
};

OptimalPatch optimal_patch_size(std::uint64_t n, std::uint64_t m);

/// Every p dividing both n and m, ascending.
std::vector<std::uint64_t> feasible_patch_sizes(std::uint64_t n, std::uint64_t m);

/// Feasible p minimizing g(p); ties go to the smaller p.
std::uint64_t best_feasible_patch_size(std::uint64_t n, std::uint64_t m);

/// Largest k^ with k^ g(p) <= k (n + m), capped at min(p^2, nm/p^2).
/// Returns 0 when no rank fits the budget.
std::uint64_t select_khat(std::uint64_t n, std::uint64_t m, std::uint64_t p, std::uint64_t k);

struct InequalityCheck {
  double lhs = 0.0;  // 2 k^ sqrt(nm)
  double rhs = 0.0;  // (k^/k) k (n + m) = k^ (n + m)
  bool holds = false;
  bool equality = false;
};

/// Footprint at the real-valued optimum p* against the direct budget scaled by
/// k^/k. The comparison is decided exactly in integers: 4nm <= (n + m)^2.
InequalityCheck check_footprint_inequality(std::uint64_t n, std::uint64_t m,
                                           std::uint64_t k, std::uint64_t khat);

}  // namespace patchlr
