// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/dense.hpp"

#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dpse
{

namespace
{

void check_input(const DenseMatrix &m)
{
  if (m.rows() != m.cols() || m.rows() == 0)
  {
    throw DimensionError("dense_eig: matrix must be square and non-empty");
  }
  if (!m.allFinite())
  {
    throw DimensionError("dense_eig: matrix has non-finite entries");
  }
}

}  // namespace

DenseEigen dense_eig(const DenseMatrix &m)
{
  check_input(m);
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, true);
  if (solver.info() != Eigen::Success)
  {
    throw ConvergenceError("dense_eig: complex Schur iteration did not converge");
  }
  DenseEigen out;
  out.eigenvalues = to_std(solver.eigenvalues());
  out.eigenvectors = solver.eigenvectors();
  return out;
}

ComplexVector dense_eigenvalues(const DenseMatrix &m)
{
  check_input(m);
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, false);
  if (solver.info() != Eigen::Success)
  {
    throw ConvergenceError("dense_eigenvalues: complex Schur iteration did not converge");
  }
  return to_std(solver.eigenvalues());
}

DenseVector to_dense(std::span<const cplx> v)
{
  DenseVector d(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    d(static_cast<Eigen::Index>(i)) = v[i];
  }
  return d;
}

ComplexVector to_std(const DenseVector &v)
{
  return {v.data(), v.data() + v.size()};
}

double condition_number(const DenseMatrix &m)
{
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const auto &sv = svd.singularValues();
  if (sv.size() == 0)
  {
    return 0.0;
  }
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  return sv(0) / smin;
}

}  // namespace dpse
