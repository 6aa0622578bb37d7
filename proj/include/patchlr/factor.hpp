#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace patchlr {

enum class Backend { Svd, Nmf };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

/// Rank-k factorization A ~ W H.
struct Factorization {
  Eigen::MatrixXd w;  // n x k
  Eigen::MatrixXd h;  // k x m
  std::size_t rank = 0;
  Backend backend = Backend::Svd;
  /// ||A - WH||_F after each NMF iteration; empty for SVD.
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
  /// ||A - WH||_F of the returned factors.
  double final_error = 0.0;
  /// SVD only: the input had fewer than k nonzero singular values and the
  /// trailing columns of W (rows of H) are zero.
  bool rank_deficient = false;
  /// SVD only: the k leading singular values, non-increasing.
  std::vector<double> singular_values;

  Eigen::MatrixXd product() const { return w * h; }
};

struct NmfConfig {
  std::size_t max_iters = 500;
  double rel_tol = 1e-5;
  std::uint64_t seed = 1;
  double epsilon_guard = 1e-12;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// Truncated SVD: W = U_k S_k, H = V_k^T. Singular values that are zero to
/// working precision are dropped and their columns zero-filled.
Factorization svd_truncate(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k);

/// Lee-Seung multiplicative updates for min ||A - WH||_F with W, H >= 0.
/// Each iteration updates H, then W:
///   H <- H .* (W^T A) ./ (W^T W H + eps)
///   W <- W .* (A H^T) ./ (W H H^T + eps)
/// and stops after max_iters or once the relative drop in the error is below
/// rel_tol.
Factorization nmf_factor(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k,
                         const NmfConfig& cfg);

Factorization factorize(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k,
                        Backend backend, const NmfConfig& cfg);

/// One-line text summary: "backend=svd k=8 iterations=0 final_error=...".
std::string sidecar_line(const Factorization& f);

struct SidecarInfo {
  Backend backend = Backend::Svd;
  std::size_t rank = 0;
  std::size_t iterations = 0;
  double final_error = 0.0;
};

SidecarInfo parse_sidecar_line(std::string_view line);

}  // namespace patchlr
