#include "patchlr/reorder.hpp"

#include <algorithm>
#include <string>

#include "patchlr/errors.hpp"

namespace patchlr {

void check_patch_size(std::size_t n, std::size_t m, std::size_t p) {
  if (p == 0) throw DivisibilityError("patch size must be positive");
  if (n % p != 0) {
    throw DivisibilityError("patch size " + std::to_string(p) +
                            " does not divide rows (n = " + std::to_string(n) + ")");
  }
  if (m % p != 0) {
    throw DivisibilityError("patch size " + std::to_string(p) +
                            " does not divide cols (m = " + std::to_string(m) + ")");
  }
}

ReorderedMatrix::ReorderedMatrix(std::size_t patch_size, std::size_t orig_rows,
                                 std::size_t orig_cols, Eigen::MatrixXd data)
    : patch_size_(patch_size),
      orig_rows_(orig_rows),
      orig_cols_(orig_cols),
      data_(std::move(data)) {
  check_patch_size(orig_rows_, orig_cols_, patch_size_);
  const auto p2 = static_cast<Eigen::Index>(patch_size_ * patch_size_);
  const auto cols = static_cast<Eigen::Index>((orig_rows_ / patch_size_) *
                                              (orig_cols_ / patch_size_));
  if (data_.rows() != p2 || data_.cols() != cols) {
    throw ShapeError("reordered matrix is " + std::to_string(data_.rows()) + "x" +
                     std::to_string(data_.cols()) + ", tags (n=" +
                     std::to_string(orig_rows_) + ", m=" + std::to_string(orig_cols_) +
                     ", p=" + std::to_string(patch_size_) + ") require " +
                     std::to_string(p2) + "x" + std::to_string(cols));
  }
}

ReorderedMatrix reorder(const ImageMatrix& img, std::size_t p) {
  const std::size_t n = img.rows();
  const std::size_t m = img.cols();
  check_patch_size(n, m, p);
  const std::size_t grid_cols = m / p;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(p * p),
                      static_cast<Eigen::Index>((n / p) * grid_cols));
  const auto px = img.data();
  for (std::size_t r = 0; r < n / p; ++r) {
    for (std::size_t c = 0; c < grid_cols; ++c) {
      double* col = out.col(static_cast<Eigen::Index>(r * grid_cols + c)).data();
      for (std::size_t i = 0; i < p; ++i) {
        const double* src = px.data() + (r * p + i) * m + c * p;
        std::copy(src, src + p, col + i * p);
      }
    }
  }
  return ReorderedMatrix(p, n, m, std::move(out));
}

Eigen::MatrixXd inverse_reorder_matrix(const Eigen::Ref<const Eigen::MatrixXd>& patches,
                                       std::size_t n, std::size_t m,
                                       std::size_t p) {
  check_patch_size(n, m, p);
  const std::size_t grid_cols = m / p;
  if (patches.rows() != static_cast<Eigen::Index>(p * p) ||
      patches.cols() != static_cast<Eigen::Index>((n / p) * grid_cols)) {
    throw ShapeError("patch matrix shape does not match (n, m, p)");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < n / p; ++r) {
    for (std::size_t c = 0; c < grid_cols; ++c) {
      const auto col = static_cast<Eigen::Index>(r * grid_cols + c);
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          out(static_cast<Eigen::Index>(r * p + i), static_cast<Eigen::Index>(c * p + j)) =
              patches(static_cast<Eigen::Index>(i * p + j), col);
        }
      }
    }
  }
  return out;
}

ImageMatrix inverse_reorder(const ReorderedMatrix& rm) {
  const std::size_t n = rm.orig_rows();
  const std::size_t m = rm.orig_cols();
  const std::size_t p = rm.patch_size();
  const std::size_t grid_cols = m / p;
  std::vector<double> px(n * m);
  const auto& a = rm.data();
  for (std::size_t r = 0; r < n / p; ++r) {
    for (std::size_t c = 0; c < grid_cols; ++c) {
      const double* col = a.col(static_cast<Eigen::Index>(r * grid_cols + c)).data();
      for (std::size_t i = 0; i < p; ++i) {
        std::copy(col + i * p, col + (i + 1) * p, px.data() + (r * p + i) * m + c * p);
      }
    }
  }
  return ImageMatrix(n, m, std::move(px));
}

std::size_t max_rank(std::size_t n, std::size_t m, std::size_t p) {
  check_patch_size(n, m, p);
  return std::min(p * p, (n / p) * (m / p));
}

std::size_t max_rank(const ReorderedMatrix& rm) {
  return std::min(rm.patch_size() * rm.patch_size(), rm.patch_count());
}

}  // namespace patchlr
