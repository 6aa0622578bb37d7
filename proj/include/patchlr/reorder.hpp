#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "patchlr/image.hpp"

namespace patchlr {

/// Patch-column form of an n x m image: a p^2 x (n/p)(m/p) matrix whose
/// column r*(m/p)+c is patch (r, c) flattened row by row.
class ReorderedMatrix {
 public:
  /// Throws DivisibilityError if p does not divide n or m, ShapeError if
  /// `data` is not p^2 x (nm/p^2).
  ReorderedMatrix(std::size_t patch_size, std::size_t orig_rows,
                  std::size_t orig_cols, Eigen::MatrixXd data);

  std::size_t patch_size() const noexcept { return patch_size_; }
  std::size_t orig_rows() const noexcept { return orig_rows_; }
  std::size_t orig_cols() const noexcept { return orig_cols_; }
  std::size_t patch_count() const noexcept {
    return static_cast<std::size_t>(data_.cols());
  }

  const Eigen::MatrixXd& data() const noexcept { return data_; }

 private:
  std::size_t patch_size_;
  std::size_t orig_rows_;
  std::size_t orig_cols_;
  Eigen::MatrixXd data_;
};

/// Throws DivisibilityError naming the dimension p fails to divide.
void check_patch_size(std::size_t n, std::size_t m, std::size_t p);

ReorderedMatrix reorder(const ImageMatrix& img, std::size_t p);

/// Scatters patch columns back into an n x m matrix. Values are not clamped,
/// so this also decodes low-rank products that leave [0, 1].
Eigen::MatrixXd inverse_reorder_matrix(const Eigen::Ref<const Eigen::MatrixXd>& patches,
                                       std::size_t n, std::size_t m,
                                       std::size_t p);

/// Exact inverse of reorder(). Throws DomainError if the matrix holds values
/// outside [0, 1] (use inverse_reorder_matrix for approximations).
ImageMatrix inverse_reorder(const ReorderedMatrix& rm);

/// min(p^2, nm/p^2).
std::size_t max_rank(const ReorderedMatrix& rm);
std::size_t max_rank(std::size_t n, std::size_t m, std::size_t p);

}  // namespace patchlr
