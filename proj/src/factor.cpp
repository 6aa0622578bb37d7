#include "patchlr/factor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "patchlr/errors.hpp"
#include "patchlr/random.hpp"

namespace patchlr {

std::string_view to_string(Backend b) { return b == Backend::Svd ? "svd" : "nmf"; }

Backend parse_backend(std::string_view name) {
  if (name == "svd" || name == "SVD") return Backend::Svd;
  if (name == "nmf" || name == "NMF") return Backend::Nmf;
  throw InvalidArgument("unknown backend '" + std::string(name) + "'");
}

void NmfConfig::validate() const {
  if (max_iters < 1) throw InvalidArgument("nmf max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw InvalidArgument("nmf rel_tol must be positive");
  if (!(epsilon_guard > 0.0)) throw InvalidArgument("nmf epsilon_guard must be positive");
}

namespace {

void check_rank(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k) {
  const auto limit = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  if (k < 1 || k > limit) {
    throw RankError("rank " + std::to_string(k) + " outside [1, " +
                    std::to_string(limit) + "] for a " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()) + " matrix");
  }
}

}  // namespace

Factorization svd_truncate(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k) {
  check_rank(a, k);
  const Eigen::MatrixXd input = a;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(input, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const auto kk = static_cast<Eigen::Index>(k);

  // Singular values below this are indistinguishable from zero.
  const double cutoff = sigma.size() > 0
                            ? sigma(0) * std::numeric_limits<double>::epsilon() *
                                  static_cast<double>(std::max(a.rows(), a.cols()))
                            : 0.0;

  Factorization f;
  f.backend = Backend::Svd;
  f.rank = k;
  f.w = svd.matrixU().leftCols(kk);
  f.h = svd.matrixV().leftCols(kk).transpose();
  f.singular_values.resize(k);
  for (Eigen::Index i = 0; i < kk; ++i) {
    const double s = sigma(i);
    if (s > cutoff && s > 0.0) {
      f.w.col(i) *= s;
      f.singular_values[static_cast<std::size_t>(i)] = s;
    } else {
      f.w.col(i).setZero();
      f.h.row(i).setZero();
      f.singular_values[static_cast<std::size_t>(i)] = 0.0;
      f.rank_deficient = true;
    }
  }
  f.final_error = (input - f.w * f.h).norm();
  return f;
}

Factorization nmf_factor(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k,
                         const NmfConfig& cfg) {
  cfg.validate();
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (!(a(r, c) >= 0.0)) {
        throw DomainError(fmt::format("NMF input has a negative entry {} at ({}, {})",
                                      a(r, c), r, c));
      }
    }
  }
  check_rank(a, k);

  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  const auto kk = static_cast<Eigen::Index>(k);
  const double eps = cfg.epsilon_guard;

  Rng rng(cfg.seed);
  Eigen::MatrixXd w(n, kk);
  Eigen::MatrixXd h(kk, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < kk; ++c) w(r, c) = rng.uniform_open_closed();
  }
  for (Eigen::Index r = 0; r < kk; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) h(r, c) = rng.uniform_open_closed();
  }

  Eigen::MatrixXd wta(kk, m), wtw(kk, kk), den_h(kk, m);
  Eigen::MatrixXd aht(n, kk), hht(kk, kk), den_w(n, kk);
  Eigen::MatrixXd residual(n, m);

  Factorization f;
  f.backend = Backend::Nmf;
  f.rank = k;
  f.objective_trace.reserve(cfg.max_iters);

  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    wta.noalias() = w.transpose() * a;
    wtw.noalias() = w.transpose() * w;
    den_h.noalias() = wtw * h;
    h.array() *= wta.array() / (den_h.array() + eps);

    aht.noalias() = a * h.transpose();
    hht.noalias() = h * h.transpose();
    den_w.noalias() = w * hht;
    w.array() *= aht.array() / (den_w.array() + eps);

    residual = a;
    residual.noalias() -= w * h;
    const double err = residual.norm();
    f.objective_trace.push_back(err);
    f.iterations = it + 1;

    if (err == 0.0) break;
    if (std::isfinite(prev) && (prev - err) / prev < cfg.rel_tol) break;
    prev = err;
  }

  f.w = std::move(w);
  f.h = std::move(h);
  f.final_error = f.objective_trace.back();
  return f;
}

Factorization factorize(const Eigen::Ref<const Eigen::MatrixXd>& a, std::size_t k,
                        Backend backend, const NmfConfig& cfg) {
  return backend == Backend::Svd ? svd_truncate(a, k) : nmf_factor(a, k, cfg);
}

std::string sidecar_line(const Factorization& f) {
  return fmt::format("backend={} k={} iterations={} final_error={:.17g}", to_string(f.backend),
                     f.rank, f.iterations, f.final_error);
}

SidecarInfo parse_sidecar_line(std::string_view line) {
  SidecarInfo info;
  bool seen[4] = {false, false, false, false};
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("malformed sidecar token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    auto parse_count = [&](std::size_t& out) {
      const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw InvalidArgument("bad sidecar value for " + key);
      }
    };
    if (key == "backend") {
      info.backend = parse_backend(value);
      seen[0] = true;
    } else if (key == "k") {
      parse_count(info.rank);
      seen[1] = true;
    } else if (key == "iterations") {
      parse_count(info.iterations);
      seen[2] = true;
    } else if (key == "final_error") {
      try {
        info.final_error = std::stod(value);
      } catch (const std::exception&) {
        throw InvalidArgument("bad sidecar value for final_error");
      }
      seen[3] = true;
    }
  }
  if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
    throw InvalidArgument("sidecar line is missing a field");
  }
  return info;
}

}  // namespace patchlr
