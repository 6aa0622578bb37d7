// Independent reference implementations used only by tests. None of these
// call into the library or Eigen's decompositions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Row-major dense matrix, deliberately minimal.
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

inline Dense gram(const Dense& a) {
  Dense g(a.cols, a.cols);
  for (std::size_t i = 0; i < a.cols; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < a.rows; ++r) s += a(r, i) * a(r, j);
      g(i, j) = s;
    }
  }
  return g;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, sorted descending.
inline std::vector<double> symmetric_eigenvalues(Dense s) {
  const std::size_t n = s.rows;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += s(i, j) * s(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// sqrt(sum_{i>k} lambda_i(A^T A)); tiny negative eigenvalues are roundoff.
inline double eckart_young_error(const Dense& a, std::size_t k) {
  const auto ev = symmetric_eigenvalues(gram(a));
  double tail = 0.0;
  for (std::size_t i = k; i < ev.size(); ++i) tail += std::max(ev[i], 0.0);
  return std::sqrt(tail);
}

// Plain P5 writer built from the format definition.
inline std::vector<std::uint8_t> write_p5(std::size_t rows, std::size_t cols,
                                          const std::vector<std::uint8_t>& px) {
  const std::string header = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

// Largest khat in [0, min(p^2, nm/p^2)] with khat * (p^2 + nm/p^2) <= k (n + m),
// found by scanning every candidate.
inline std::uint64_t brute_force_khat(std::uint64_t n, std::uint64_t m, std::uint64_t p,
                                      std::uint64_t k) {
  const std::uint64_t g = p * p + n * m / (p * p);
  const std::uint64_t cap = std::min(p * p, n * m / (p * p));
  std::uint64_t best = 0;
  for (std::uint64_t c = 0; c <= cap; ++c) {
    if (c * g <= k * (n + m)) best = c;
  }
  return best;
}

}  // namespace oracle
