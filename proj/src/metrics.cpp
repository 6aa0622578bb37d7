#include "patchlr/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "patchlr/errors.hpp"

namespace patchlr {

void SsimConfig::validate() const {
  if (window_side < 3 || window_side % 2 == 0) {
    throw InvalidArgument("SSIM window side must be odd and at least 3");
  }
  if (!(gaussian_sigma > 0.0)) throw InvalidArgument("SSIM sigma must be positive");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidArgument("SSIM constants must be positive");
}

std::vector<double> gaussian_kernel_1d(std::size_t side, double sigma) {
  std::vector<double> k(side);
  const double center = (static_cast<double>(side) - 1.0) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < side; ++i) {
    const double d = static_cast<double>(i) - center;
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> gaussian_window(std::size_t side, double sigma) {
  const auto k = gaussian_kernel_1d(side, sigma);
  std::vector<double> w(side * side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) w[i * side + j] = k[i] * k[j];
  }
  return w;
}

WindowStats window_stats(std::span<const double> x, std::span<const double> y,
                         std::span<const double> w) {
  if (x.size() != w.size() || y.size() != w.size()) {
    throw ShapeError("window_stats: windows and weights differ in size");
  }
  WindowStats s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s.mean_x += w[i] * x[i];
    s.mean_y += w[i] * y[i];
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double dx = x[i] - s.mean_x;
    const double dy = y[i] - s.mean_y;
    s.var_x += w[i] * dx * dx;
    s.var_y += w[i] * dy * dy;
    s.cov_xy += w[i] * (dx * dy);
  }
  return s;
}

namespace {

void check_same_shape(const ImageMatrix& a, const ImageMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("images differ in shape: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

// Valid-mode separable filtering of a row-major n x m field.
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t n,
                                 std::size_t m, const std::vector<double>& k) {
  const std::size_t side = k.size();
  const std::size_t out_m = m - side + 1;
  const std::size_t out_n = n - side + 1;
  std::vector<double> tmp(n * out_m);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = src.data() + r * m;
    for (std::size_t c = 0; c < out_m; ++c) {
      double s = 0.0;
      for (std::size_t t = 0; t < side; ++t) s += k[t] * row[c + t];
      tmp[r * out_m + c] = s;
    }
  }
  std::vector<double> out(out_n * out_m, 0.0);
  for (std::size_t r = 0; r < out_n; ++r) {
    double* dst = out.data() + r * out_m;
    for (std::size_t t = 0; t < side; ++t) {
      const double* row = tmp.data() + (r + t) * out_m;
      const double kt = k[t];
      for (std::size_t c = 0; c < out_m; ++c) dst[c] += kt * row[c];
    }
  }
  return out;
}

}  // namespace

double mse(const ImageMatrix& a, const ImageMatrix& b) {
  check_same_shape(a, b);
  const auto x = a.data();
  const auto y = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double psnr_from_mse(double e2) {
  if (e2 <= kExactMseFloor) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / e2);
}

double psnr(const ImageMatrix& a, const ImageMatrix& b) { return psnr_from_mse(mse(a, b)); }

double ssim_local(const WindowStats& s, const SsimConfig& cfg) {
  // Written so that swapping x and y, or passing x == y, is exact in floating
  // point: the products are commutative and 2 * (u * u) == u * u + u * u.
  const double mxy = s.mean_x * s.mean_y;
  const double num = (2.0 * mxy + cfg.c1) * (2.0 * s.cov_xy + cfg.c2);
  const double den = (s.mean_x * s.mean_x + s.mean_y * s.mean_y + cfg.c1) *
                     (s.var_x + s.var_y + cfg.c2);
  return num / den;
}

double mssim(const ImageMatrix& a, const ImageMatrix& b, const SsimConfig& cfg) {
  cfg.validate();
  check_same_shape(a, b);
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  const std::size_t side = cfg.window_side;
  if (n < side || m < side) {
    throw ShapeError("image " + std::to_string(n) + "x" + std::to_string(m) +
                     " is smaller than the " + std::to_string(side) + "-pixel SSIM window");
  }
  const auto k = gaussian_kernel_1d(side, cfg.gaussian_sigma);

  const auto x = a.data();
  const auto y = b.data();
  std::vector<double> xv(x.begin(), x.end());
  std::vector<double> yv(y.begin(), y.end());
  std::vector<double> xx(n * m), yy(n * m), xy(n * m);
  for (std::size_t i = 0; i < n * m; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mu_x = filter_valid(xv, n, m, k);
  const auto mu_y = filter_valid(yv, n, m, k);
  const auto e_xx = filter_valid(xx, n, m, k);
  const auto e_yy = filter_valid(yy, n, m, k);
  const auto e_xy = filter_valid(xy, n, m, k);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    WindowStats s;
    s.mean_x = mu_x[i];
    s.mean_y = mu_y[i];
    s.var_x = e_xx[i] - mu_x[i] * mu_x[i];
    s.var_y = e_yy[i] - mu_y[i] * mu_y[i];
    s.cov_xy = e_xy[i] - mu_x[i] * mu_y[i];
    total += ssim_local(s, cfg);
  }
  return total / static_cast<double>(mu_x.size());
}

QualityReport evaluate_quality(const ImageMatrix& original,
                               const ImageMatrix& reconstruction, const SsimConfig& cfg) {
  QualityReport q;
  q.mse = mse(original, reconstruction);
  q.psnr = psnr_from_mse(q.mse);
  q.mssim = mssim(original, reconstruction, cfg);
  return q;
}

}  // namespace patchlr
