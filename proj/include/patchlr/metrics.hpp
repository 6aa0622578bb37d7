#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "patchlr/image.hpp"

namespace patchlr {

/// Local SSIM window. Defaults follow the usual SSIM setup: an 11x11 Gaussian
/// window with sigma 1.5 and C1 = (0.01 L)^2, C2 = (0.03 L)^2 for L = 1.
struct SsimConfig {
  std::size_t window_side = 11;
  double gaussian_sigma = 1.5;
  double c1 = 1e-4;
  double c2 = 9e-4;
  double dynamic_range = 1.0;

  void validate() const;
};

/// Gaussian-weighted moments of two aligned windows.
struct WindowStats {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov_xy = 0.0;
};

struct QualityReport {
  double mse = 0.0;
  double psnr = 0.0;  // +inf for a perfect reconstruction
  double mssim = 0.0;
};

/// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
std::vector<double> gaussian_kernel_1d(std::size_t side, double sigma);

/// Row-major side x side window weights, summing to 1.
std::vector<double> gaussian_window(std::size_t side, double sigma);

/// Weighted moments of two windows sharing the weights `w`.
WindowStats window_stats(std::span<const double> x, std::span<const double> y,
                         std::span<const double> w);

/// (1/nm) ||A - B||_F^2.
double mse(const ImageMatrix& a, const ImageMatrix& b);

/// MSE at or below this is reported as a perfect reconstruction (PSNR = +inf).
/// It corresponds to an RMS error of 1e-10 on a unit intensity scale: above
/// double-precision roundoff of a dense factorization, and five orders of
/// magnitude below one step of 16-bit quantization.
inline constexpr double kExactMseFloor = 1e-20;

/// 10 log10(1 / mse); +inf when mse <= kExactMseFloor.
double psnr(const ImageMatrix& a, const ImageMatrix& b);
double psnr_from_mse(double mse);

/// (2 mx my + C1)(2 sxy + C2) / ((mx^2 + my^2 + C1)(sx^2 + sy^2 + C2)).
double ssim_local(const WindowStats& s, const SsimConfig& cfg);

/// Mean of ssim_local over every valid window position (stride 1, no padding).
double mssim(const ImageMatrix& a, const ImageMatrix& b, const SsimConfig& cfg = {});

QualityReport evaluate_quality(const ImageMatrix& original,
                               const ImageMatrix& reconstruction,
                               const SsimConfig& cfg = {});

}  // namespace patchlr
