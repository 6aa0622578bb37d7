#include "patchlr/atlas.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "patchlr/errors.hpp"

namespace patchlr {

PixelClass classify_pixel(const std::array<std::uint8_t, 3>& rgb) {
  if (rgb == kGutterColor) return PixelClass::Gutter;
  if (rgb[0] == 0 && rgb[1] == 0 && rgb[2] == 0) return PixelClass::Zero;
  return rgb[0] > rgb[2] ? PixelClass::Positive : PixelClass::Negative;
}

std::array<std::uint8_t, 3> sign_color(double value, double scale) {
  if (value == 0.0 || !(scale > 0.0)) return {0, 0, 0};
  const double t = std::clamp(std::abs(value) / scale, 0.0, 1.0);
  const auto& base = value > 0.0 ? kPositiveColor : kNegativeColor;
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<std::uint8_t>(std::lround(t * base[c]));
  }
  // Tiny magnitudes round to black, which is the zero class anyway. Anything
  // that survives rounding keeps its hue ordering (R vs B) from the base color.
  if (out[0] == out[2] && (out[0] | out[1]) != 0) {
    if (value > 0.0) ++out[0]; else ++out[2];
  }
  return out;
}

RgbImage render_atlas(const Factorization& fact, const AtlasSpec& spec) {
  const auto p = spec.patch_size;
  if (p == 0 || static_cast<std::size_t>(fact.w.rows()) != p * p) {
    throw ShapeError(fmt::format("dictionary has {} rows, expected p^2 = {}", fact.w.rows(),
                                 p * p));
  }
  const auto columns = static_cast<std::size_t>(fact.w.cols());
  if (columns > spec.grid_rows * spec.grid_cols) {
    throw ShapeError(fmt::format("{} dictionary columns do not fit a {}x{} grid", columns,
                                 spec.grid_rows, spec.grid_cols));
  }

  const std::size_t gap = spec.separator_px;
  RgbImage img;
  img.width = spec.grid_cols * p + (spec.grid_cols - 1) * gap;
  img.height = spec.grid_rows * p + (spec.grid_rows - 1) * gap;
  img.pixels.resize(3 * img.width * img.height);
  for (std::size_t i = 0; i < img.width * img.height; ++i) {
    std::copy(kGutterColor.begin(), kGutterColor.end(), img.pixels.begin() + 3 * i);
  }
  // Unused cells render black, like an all-zero element.
  for (std::size_t cell = 0; cell < spec.grid_rows * spec.grid_cols; ++cell) {
    const std::size_t top = (cell / spec.grid_cols) * (p + gap);
    const std::size_t left = (cell % spec.grid_cols) * (p + gap);
    for (std::size_t i = 0; i < p; ++i) {
      std::fill_n(img.pixels.begin() + 3 * ((top + i) * img.width + left), 3 * p, 0);
    }
  }

  const double atlas_max = fact.w.size() > 0 ? fact.w.cwiseAbs().maxCoeff() : 0.0;
  for (std::size_t c = 0; c < columns; ++c) {
    const auto col = fact.w.col(static_cast<Eigen::Index>(c));
    const double scale =
        spec.value_scale == ValueScale::PerAtlasMax ? atlas_max : col.cwiseAbs().maxCoeff();
    const std::size_t top = (c / spec.grid_cols) * (p + gap);
    const std::size_t left = (c % spec.grid_cols) * (p + gap);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        const auto rgb = sign_color(col(static_cast<Eigen::Index>(i * p + j)), scale);
        std::copy(rgb.begin(), rgb.end(),
                  img.pixels.begin() + 3 * ((top + i) * img.width + left + j));
      }
    }
  }
  return img;
}

namespace {

double column_sparsity(const Eigen::Ref<const Eigen::VectorXd>& col, double threshold) {
  if (col.size() == 0) return 1.0;
  const double peak = col.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 1.0;
  Eigen::Index small = 0;
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    if (std::abs(col(i)) / peak <= threshold) ++small;
  }
  return static_cast<double>(small) / static_cast<double>(col.size());
}

}  // namespace

double dictionary_sparsity(const Factorization& fact, double threshold) {
  if (threshold < 0.0) throw InvalidArgument("sparsity threshold must be non-negative");
  if (fact.w.size() == 0) return 1.0;
  double total = 0.0;
  for (Eigen::Index c = 0; c < fact.w.cols(); ++c) {
    total += column_sparsity(fact.w.col(c), threshold) * static_cast<double>(fact.w.rows());
  }
  return total / static_cast<double>(fact.w.size());
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  const std::string header = fmt::format("P6\n{} {}\n255\n", img.width, img.height);
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

std::string atlas_sidecar(const Factorization& fact, double threshold) {
  std::string out = fmt::format("# backend={} rank={} threshold={}\n", to_string(fact.backend),
                                fact.rank, threshold);
  out += "column,l2_norm,sparsity\n";
  for (Eigen::Index c = 0; c < fact.w.cols(); ++c) {
    out += fmt::format("{},{:.6g},{:.6g}\n", c, fact.w.col(c).norm(),
                       column_sparsity(fact.w.col(c), threshold));
  }
  return out;
}

}  // namespace patchlr
