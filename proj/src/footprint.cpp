#include "patchlr/footprint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "patchlr/errors.hpp"
#include "patchlr/reorder.hpp"

namespace patchlr {

std::uint64_t patch_cost(std::uint64_t n, std::uint64_t m, std::uint64_t p) {
  check_patch_size(n, m, p);
  return p * p + (n / p) * (m / p);
}

double patch_cost_real(double n, double m, double p) { return p * p + n * m / (p * p); }

std::uint64_t footprint(FootprintKind kind, std::uint64_t n, std::uint64_t m,
                        std::uint64_t k, std::uint64_t khat, std::uint64_t p) {
  switch (kind) {
    case FootprintKind::Raw: return n * m;
    case FootprintKind::Direct: return k * (n + m);
    case FootprintKind::Patched: return khat * patch_cost(n, m, p);
  }
  throw InvalidArgument("unknown footprint kind");
}

FootprintReport footprint_report(std::uint64_t n, std::uint64_t m, std::uint64_t k,
                                 std::uint64_t khat, std::uint64_t p) {
  FootprintReport r;
  r.n = n;
  r.m = m;
  r.k = k;
  r.khat = khat;
  r.p = p;
  r.footprint_raw = footprint(FootprintKind::Raw, n, m);
  r.footprint_tk = footprint(FootprintKind::Direct, n, m, k);
  r.footprint_q = footprint(FootprintKind::Patched, n, m, k, khat, p);
  return r;
}

OptimalPatch optimal_patch_size(std::uint64_t n, std::uint64_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("image dimensions must be positive");
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  return {std::sqrt(std::sqrt(nm)), 2.0 * std::sqrt(nm)};
}

std::vector<std::uint64_t> feasible_patch_sizes(std::uint64_t n, std::uint64_t m) {
  const std::uint64_t g = std::gcd(n, m);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 1; p * p <= g; ++p) {
    if (g % p == 0) {
      out.push_back(p);
      if (p != g / p) out.push_back(g / p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t best_feasible_patch_size(std::uint64_t n, std::uint64_t m) {
  const auto ps = feasible_patch_sizes(n, m);
  if (ps.empty()) throw InvalidArgument("image dimensions must be positive");
  return *std::min_element(ps.begin(), ps.end(), [&](std::uint64_t a, std::uint64_t b) {
    return patch_cost(n, m, a) < patch_cost(n, m, b);
  });
}

std::uint64_t select_khat(std::uint64_t n, std::uint64_t m, std::uint64_t p, std::uint64_t k) {
  if (k < 1) throw InvalidArgument("rank k must be at least 1");
  const std::uint64_t budget = k * (n + m);
  const std::uint64_t by_budget = budget / patch_cost(n, m, p);
  return std::min(by_budget, max_rank(n, m, p));
}

InequalityCheck check_footprint_inequality(std::uint64_t n, std::uint64_t m,
                                           std::uint64_t k, std::uint64_t khat) {
  if (n == 0 || m == 0 || k == 0 || khat == 0) {
    throw InvalidArgument("footprint inequality needs positive inputs");
  }
  InequalityCheck c;
  const double kh = static_cast<double>(khat);
  c.lhs = 2.0 * kh * std::sqrt(static_cast<double>(n) * static_cast<double>(m));
  c.rhs = kh / static_cast<double>(k) * static_cast<double>(k * (n + m));
  // 2 sqrt(nm) vs n + m, squared to stay in integers.
  const auto lhs2 = static_cast<unsigned __int128>(4) * n * m;
  const auto rhs2 = static_cast<unsigned __int128>(n + m) * (n + m);
  c.holds = lhs2 <= rhs2;
  c.equality = lhs2 == rhs2;
  return c;
}

}  // namespace patchlr
