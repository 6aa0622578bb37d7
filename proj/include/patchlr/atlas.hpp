#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "patchlr/factor.hpp"

namespace patchlr {

enum class ValueScale { PerAtlasMax, PerPatchMax };

/// Grid layout for rendering dictionary columns as p x p tiles.
struct AtlasSpec {
  std::size_t grid_rows = 4;
  std::size_t grid_cols = 8;
  std::size_t patch_size = 0;
  std::size_t separator_px = 1;
  ValueScale value_scale = ValueScale::PerAtlasMax;
};

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB triples

  std::array<std::uint8_t, 3> at(std::size_t row, std::size_t col) const {
    const std::size_t i = 3 * (row * width + col);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
};

// Sign coloring: zero is black, positive values ramp toward pink, negative
// values toward light blue, brightness proportional to |v| / scale.
inline constexpr std::array<std::uint8_t, 3> kPositiveColor = {255, 105, 180};
inline constexpr std::array<std::uint8_t, 3> kNegativeColor = {135, 206, 250};
inline constexpr std::array<std::uint8_t, 3> kGutterColor = {128, 128, 128};

enum class PixelClass { Zero, Positive, Negative, Gutter };

/// Hue class of a rendered pixel.
PixelClass classify_pixel(const std::array<std::uint8_t, 3>& rgb);

std::array<std::uint8_t, 3> sign_color(double value, double scale);

/// Un-flattens column c of W into the tile at (c / grid_cols, c % grid_cols).
/// Gutters between tiles are mid-gray.
RgbImage render_atlas(const Factorization& fact, const AtlasSpec& spec);

/// Fraction of W entries whose magnitude, after dividing each column by its
/// largest magnitude, is at most `threshold`. All-zero columns count as fully
/// sparse.
double dictionary_sparsity(const Factorization& fact, double threshold);

/// Binary P6 encoding, maxval 255.
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

/// Text listing one line per column: index, L2 norm, column sparsity.
std::string atlas_sidecar(const Factorization& fact, double threshold);

}  // namespace patchlr
