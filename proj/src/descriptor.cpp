// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/descriptor.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "dpse/dense.hpp"

namespace dpse
{

DescriptorSystem::DescriptorSystem(SparseMatrix J, std::size_t ndyn, ComplexVector B,
                                   ComplexVector C, cplx D)
  : J_(std::move(J)), ndyn_(ndyn), B_(std::move(B)), C_(std::move(C)), D_(D)
{
  if (!J_.square())
  {
    throw DimensionError("descriptor system: J is " + std::to_string(J_.rows()) + "x" +
                         std::to_string(J_.cols()) + ", not square");
  }
  const std::size_t n = J_.rows();
  if (ndyn_ < 1 || ndyn_ > n)
  {
    throw DimensionError("descriptor system: ndyn = " + std::to_string(ndyn_) +
                         " outside [1, " + std::to_string(n) + "]");
  }
  if (B_.size() != n || C_.size() != n)
  {
    throw DimensionError("descriptor system: B and C must have length " + std::to_string(n));
  }
}

ValidationReport validate(const DescriptorSystem &sys)
{
  ValidationReport r;
  const std::size_t n = sys.order();
  r.order = n;
  r.ndyn = sys.ndyn();
  r.nnz = sys.jacobian().nnz();
  r.density = n ? static_cast<double>(r.nnz) / (static_cast<double>(n) * n) : 0.0;
  // The constructor already enforces the shape contract.
  r.dimensions_ok = true;

  if (sys.ndyn() == n)
  {
    r.algebraic_block_empty = true;
    r.algebraic_block_nonsingular = true;
    r.messages.push_back("no algebraic variables: state matrix equals J");
    return r;
  }
  try
  {
    Factorization lu(sys.jacobian().block(sys.ndyn(), n, sys.ndyn(), n));
    r.algebraic_block_nonsingular = true;
    std::ostringstream msg;
    msg << "algebraic block J4 (" << sys.nalg() << "x" << sys.nalg()
        << ") nonsingular, pivot growth " << lu.pivot_growth();
    r.messages.push_back(msg.str());
  }
  catch (const SingularMatrixError &)
  {
    r.algebraic_block_nonsingular = false;
    r.messages.push_back("algebraic block singular");
  }
  return r;
}

StateSpaceSystem reduce_to_state_space(const DescriptorSystem &sys)
{
  const auto N = static_cast<Eigen::Index>(sys.order());
  const auto n = static_cast<Eigen::Index>(sys.ndyn());
  const auto m = N - n;
  const DenseMatrix J = sys.jacobian().to_dense();
  const DenseVector B = to_dense(sys.input());
  const DenseVector C = to_dense(sys.output());

  StateSpaceSystem ss;
  if (m == 0)
  {
    ss.A = J;
    ss.b = B;
    ss.c = C;
    ss.d = sys.feedthrough();
    return ss;
  }

  const DenseMatrix J4 = J.bottomRightCorner(m, m);
  Eigen::PartialPivLU<DenseMatrix> lu(J4);
  const double scale = J4.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (scale == 0.0 || min_pivot <= kSingularPivotRatio * scale)
  {
    throw SingularMatrixError("reduce_to_state_space: algebraic block J4 is singular");
  }

  const auto J1 = J.topLeftCorner(n, n);
  const auto J2 = J.topRightCorner(n, m);
  const auto J3 = J.bottomLeftCorner(m, n);
  const DenseVector Ba = B.tail(m);
  const DenseVector Ca = C.tail(m);

  const DenseMatrix J4invJ3 = lu.solve(J3);
  const DenseVector J4invBa = lu.solve(Ba);
  const DenseVector J4invTCa = lu.transpose().solve(Ca);

  ss.A = J1 - J2 * J4invJ3;
  ss.b = B.head(n) - J2 * J4invBa;
  ss.c = C.head(n) - J3.transpose() * J4invTCa;
  // Plain transpose: Eigen's dot() would conjugate Ca.
  ss.d = sys.feedthrough() - (Ca.transpose() * J4invBa)(0);
  return ss;
}

DescriptorSystem as_descriptor(const StateSpaceSystem &ss)
{
  return DescriptorSystem(SparseMatrix::from_dense(ss.A), ss.order(), to_std(ss.b),
                          to_std(ss.c), ss.d);
}

TransferSample eval_transfer(const DescriptorSystem &sys, cplx s)
{
  Factorization lu(sys.shifted_jacobian(s), s);
  const ComplexVector x = lu.solve(sys.input());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    acc += sys.output()[i] * x[i];
  }
  // (sE - J)^{-1} = -(J - sE)^{-1}
  return {s, -acc + sys.feedthrough()};
}

TransferSample eval_transfer(const StateSpaceSystem &ss, cplx s)
{
  const auto n = ss.A.rows();
  const DenseMatrix M = s * DenseMatrix::Identity(n, n) - ss.A;
  Eigen::PartialPivLU<DenseMatrix> lu(M);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot <= kSingularPivotRatio * M.cwiseAbs().maxCoeff())
  {
    throw SingularMatrixError("eval_transfer: s is an eigenvalue of A");
  }
  const DenseVector x = lu.solve(ss.b);
  return {s, (ss.c.transpose() * x)(0) + ss.d};
}

ComplexVector apply_resolvent(const DescriptorSystem &sys, cplx s, std::span<const cplx> x)
{
  if (x.size() != sys.ndyn())
  {
    throw DimensionError("apply_resolvent: x must have length ndyn = " +
                         std::to_string(sys.ndyn()));
  }
  Factorization lu(sys.shifted_jacobian(s), s);
  ComplexVector rhs(sys.order(), 0.0);
  std::copy(x.begin(), x.end(), rhs.begin());
  ComplexVector z = lu.solve(rhs);
  z.resize(sys.ndyn());
  return z;
}

NormalizedVectors normalized_vectors(const DescriptorSystem &sys, const Factorization &lu,
                                     double min_normalizer)
{
  NormalizedVectors out;
  out.x = lu.solve(sys.input());
  out.y = lu.solve(sys.output(), true);
  cplx nu = 0.0;
  for (std::size_t i = 0; i < out.x.size(); ++i)
  {
    nu += sys.output()[i] * out.x[i];
  }
  if (!(std::abs(nu) > min_normalizer) || !std::isfinite(std::abs(nu)))
  {
    std::ostringstream msg;
    msg << "normalized_vectors: normalizer C^T (J - sE)^{-1} B = " << nu << " at s = "
        << lu.shift() << " vanishes (transmission zero?)";
    throw VanishingNormalizerError(msg.str(), nu);
  }
  const cplx inv = 1.0 / nu;
  for (auto &v : out.x)
  {
    v *= inv;
  }
  for (auto &v : out.y)
  {
    v *= inv;
  }
  out.normalizer = nu;
  return out;
}

NormalizedVectors normalized_vectors(const DescriptorSystem &sys, cplx s, double min_normalizer)
{
  Factorization lu(sys.shifted_jacobian(s), s);
  return normalized_vectors(sys, lu, min_normalizer);
}

cplx algebraic_feedthrough(const DescriptorSystem &sys)
{
  if (sys.nalg() == 0)
  {
    return 0.0;
  }
  const std::size_t n = sys.ndyn();
  const std::size_t N = sys.order();
  Factorization lu(sys.jacobian().block(n, N, n, N));
  const ComplexVector Ba(sys.input().begin() + static_cast<std::ptrdiff_t>(n),
                         sys.input().end());
  const ComplexVector z = lu.solve(Ba);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
  {
    acc += sys.output()[n + i] * z[i];
  }
  return acc;
}

cplx dynamic_inner(std::span<const cplx> y, std::span<const cplx> x, std::size_t ndyn)
{
  cplx acc = 0.0;
  for (std::size_t i = 0; i < ndyn; ++i)
  {
    acc += y[i] * x[i];
  }
  return acc;
}

}  // namespace dpse
