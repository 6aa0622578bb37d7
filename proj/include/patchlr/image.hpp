#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace patchlr {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Grayscale image as an n x m matrix of intensities in [0, 1], row-major.
///
/// Immutable after construction. The constructor rejects out-of-range values
/// and buffers whose length does not match rows * cols.
class ImageMatrix {
 public:
  ImageMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Builds an image from an arbitrary real matrix by clamping every entry
  /// into [0, 1]. NaN maps to 0.
  static ImageMatrix from_clamped(const Eigen::Ref<const Eigen::MatrixXd>& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<const double> data() const noexcept { return data_; }

  /// Zero-copy Eigen view of the pixels.
  Eigen::Map<const RowMajorMatrix> view() const noexcept {
    return {data_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }

  /// Column-major copy, the layout the factorization backends work on.
  Eigen::MatrixXd to_matrix() const { return view(); }

  friend bool operator==(const ImageMatrix&, const ImageMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Parses an ASCII (P2) or binary (P5) PGM. Intensities are divided by maxval.
ImageMatrix load_pgm(std::span<const std::uint8_t> bytes);
ImageMatrix load_pgm_file(const std::string& path);

/// Encodes as binary P5; each value becomes round(v * maxval).
/// maxval must be 255 or 65535 (16-bit samples are written big-endian).
std::vector<std::uint8_t> save_pgm(const ImageMatrix& img,
                                   std::uint32_t maxval = 255);
void save_pgm_file(const ImageMatrix& img, const std::string& path,
                   std::uint32_t maxval = 255);

enum class SynthKind { Gradient, Checkerboard, GaussianBlobs, UniformNoise };

SynthKind parse_synth_kind(std::string_view name);
std::string_view to_string(SynthKind kind);

/// Deterministic synthetic test image. n and m must both be at least 4,
/// except that the gradient accepts any positive size.
ImageMatrix synth_image(SynthKind kind, std::size_t n, std::size_t m,
                        std::uint64_t seed);

}  // namespace patchlr
