// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_SPARSE_MATRIX_HPP
#define DPSE_SPARSE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "dpse/types.hpp"

namespace dpse
{

/// A single (row, col, value) entry used to assemble a SparseMatrix.
struct Triplet
{
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Complex sparse matrix in compressed-sparse-column layout.
///
/// Row indices are strictly increasing within each column and no structural duplicate is
/// ever stored. Explicit zeros are allowed (they arise from cancellation or from the
/// shifted() pattern union) and count towards nnz().
class SparseMatrix
{
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols);

  /// Assemble from triplets; duplicate (row, col) pairs are summed.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::span<const Triplet> triplets);

  /// Take ownership of raw CSC arrays. Validates the layout invariants.
  static SparseMatrix from_csc(std::size_t nrows, std::size_t ncols,
                               std::vector<int> col_ptr, std::vector<int> row_idx,
                               std::vector<cplx> values);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const DenseMatrix &dense, double drop_tol = 0.0);

  std::size_t rows() const { return nrows_; }
  std::size_t cols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }
  bool square() const { return nrows_ == ncols_; }

  const std::vector<int> &col_ptr() const { return col_ptr_; }
  const std::vector<int> &row_idx() const { return row_idx_; }
  const std::vector<cplx> &values() const { return values_; }

  /// Entry (i, j); zero when not stored.
  cplx coeff(std::size_t i, std::size_t j) const;

  /// y = M x
  ComplexVector multiply(std::span<const cplx> x) const;
  /// y = M^T x (plain transpose, no conjugation)
  ComplexVector multiply_transposed(std::span<const cplx> x) const;

  SparseMatrix transpose() const;

  /// Rows [r0, r1) and columns [c0, c1).
  SparseMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

  DenseMatrix to_dense() const;
  std::vector<Triplet> to_triplets() const;

  double max_abs() const;
  double frobenius_norm() const;

  /// Checks every layout invariant; throws DimensionError on violation.
  void check_invariants() const;

private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<int> col_ptr_{0};
  std::vector<int> row_idx_;
  std::vector<cplx> values_;
};

/// J - sE with E = diag(1, ..., 1, 0, ..., 0) holding ndyn ones.
///
/// The result's pattern is J's pattern united with the first ndyn diagonal positions.
SparseMatrix shifted(const SparseMatrix &J, std::size_t ndyn, cplx s);

}  // namespace dpse

#endif  // DPSE_SPARSE_MATRIX_HPP
