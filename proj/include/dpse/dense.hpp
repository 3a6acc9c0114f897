// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_DENSE_HPP
#define DPSE_DENSE_HPP

#include <span>

#include "dpse/types.hpp"

namespace dpse
{

struct DenseEigen
{
  ComplexVector eigenvalues;
  DenseMatrix eigenvectors;  // unit-norm columns
};

/// All eigenvalues (with multiplicity) and right eigenvectors of a small square matrix.
/// Throws ConvergenceError when the QR iteration stalls and DimensionError on
/// non-square or non-finite input.
DenseEigen dense_eig(const DenseMatrix &m);

/// Eigenvalues only (skips the eigenvector back-substitution).
ComplexVector dense_eigenvalues(const DenseMatrix &m);

DenseVector to_dense(std::span<const cplx> v);
ComplexVector to_std(const DenseVector &v);

/// 2-norm condition number via SVD; +inf for singular input.
double condition_number(const DenseMatrix &m);

}  // namespace dpse

#endif  // DPSE_DENSE_HPP
