// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_SPARSE_LU_HPP
#define DPSE_SPARSE_LU_HPP

#include <memory>
#include <span>
#include <vector>

#include "dpse/sparse_matrix.hpp"

namespace dpse
{

namespace detail
{
struct SymbolicDeleter
{
  void operator()(void *p) const;
};
struct NumericDeleter
{
  void operator()(void *p) const;
};
}  // namespace detail

/// Pivots with |u_kk| <= kSingularPivotRatio * max|m_ij| are treated as zero.
inline constexpr double kSingularPivotRatio = 1e-14;

/// Sparse LU factorization P_r M P_c = L U with an approximate-minimum-degree column
/// pre-ordering and partial pivoting.
///
/// Immutable after construction; solve() allocates its own workspace, so one
/// Factorization may be shared by concurrent solvers.
class Factorization
{
public:
  /// Throws SingularMatrixError on a structurally or numerically singular matrix.
  explicit Factorization(const SparseMatrix &m, cplx shift = 0.0);

  Factorization(Factorization &&) noexcept = default;
  Factorization &operator=(Factorization &&) noexcept = default;

  std::size_t order() const { return n_; }
  cplx shift() const { return shift_; }

  /// max|U| / max|M|.
  double pivot_growth() const { return pivot_growth_; }
  double min_pivot() const { return min_pivot_; }

  /// Solves M x = rhs, or M^T x = rhs when transposed is set (no conjugation).
  ComplexVector solve(std::span<const cplx> rhs, bool transposed = false) const;

  /// row_permutation()[k] is the row of M that became row k of P_r M.
  std::vector<int> row_permutation() const;
  /// col_permutation()[k] is the column of M that became column k of M P_c.
  std::vector<int> col_permutation() const;
  SparseMatrix lower() const;
  SparseMatrix upper() const;

private:
  std::size_t n_ = 0;
  cplx shift_ = 0.0;
  double pivot_growth_ = 0.0;
  double min_pivot_ = 0.0;
  std::unique_ptr<void, detail::SymbolicDeleter> symbolic_;
  std::unique_ptr<void, detail::NumericDeleter> numeric_;
};

inline Factorization factorize(const SparseMatrix &m, cplx shift = 0.0)
{
  return Factorization(m, shift);
}

/// Convenience: x = M^{-1} rhs (or M^{-T} rhs) with a throwaway factorization.
ComplexVector solve(const Factorization &f, std::span<const cplx> rhs, bool transposed = false);

}  // namespace dpse

#endif  // DPSE_SPARSE_LU_HPP
