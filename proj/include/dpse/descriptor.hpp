// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_DESCRIPTOR_HPP
#define DPSE_DESCRIPTOR_HPP

#include <span>
#include <string>
#include <vector>

#include "dpse/sparse_lu.hpp"
#include "dpse/sparse_matrix.hpp"

namespace dpse
{

/// SISO descriptor system  E x' = J x + B u,  y = C^T x + D u  with
/// E = diag(1, ..., 1, 0, ..., 0) holding ndyn ones.
///
/// J is partitioned as [J1 J2; J3 J4] with J1 of order ndyn. Immutable after
/// construction.
class DescriptorSystem
{
public:
  DescriptorSystem(SparseMatrix J, std::size_t ndyn, ComplexVector B, ComplexVector C,
                   cplx D = 0.0);

  const SparseMatrix &jacobian() const { return J_; }
  std::size_t order() const { return J_.rows(); }
  std::size_t ndyn() const { return ndyn_; }
  std::size_t nalg() const { return J_.rows() - ndyn_; }
  const ComplexVector &input() const { return B_; }
  const ComplexVector &output() const { return C_; }
  cplx feedthrough() const { return D_; }

  /// J - sE
  SparseMatrix shifted_jacobian(cplx s) const { return shifted(J_, ndyn_, s); }

private:
  SparseMatrix J_;
  std::size_t ndyn_;
  ComplexVector B_;
  ComplexVector C_;
  cplx D_;
};

/// Dense (A, b, c, d) obtained by eliminating the algebraic variables. Oracle use only.
struct StateSpaceSystem
{
  DenseMatrix A;
  DenseVector b;
  DenseVector c;
  cplx d = 0.0;

  std::size_t order() const { return static_cast<std::size_t>(A.rows()); }
};

struct TransferSample
{
  cplx s;
  cplx value;
};

struct ValidationReport
{
  std::size_t order = 0;
  std::size_t ndyn = 0;
  std::size_t nnz = 0;
  double density = 0.0;  // nnz / N^2
  bool dimensions_ok = false;
  bool algebraic_block_empty = false;
  bool algebraic_block_nonsingular = false;
  std::vector<std::string> messages;

  bool ok() const { return dimensions_ok && algebraic_block_nonsingular; }
};

/// Dimension checks, fill statistics and a J4 nonsingularity probe. Never throws for
/// problems with the system itself; they are reported.
ValidationReport validate(const DescriptorSystem &sys);

/// A = J1 - J2 J4^{-1} J3, b = B_d - J2 J4^{-1} B_a, c = C_d - J3^T J4^{-T} C_a,
/// d = D - C_a^T J4^{-1} B_a. Dense; intended for N up to a couple of thousand.
StateSpaceSystem reduce_to_state_space(const DescriptorSystem &sys);

/// A descriptor system with no algebraic variables (J = A, E = I).
DescriptorSystem as_descriptor(const StateSpaceSystem &ss);

/// h(s) = C^T (sE - J)^{-1} B + D.
TransferSample eval_transfer(const DescriptorSystem &sys, cplx s);
/// h(s) = c^T (sI - A)^{-1} b + d.
TransferSample eval_transfer(const StateSpaceSystem &ss, cplx s);

/// (A - sI)^{-1} x computed from the augmented sparse system
/// (J - sE) [z; w] = [x; 0], without forming A.
ComplexVector apply_resolvent(const DescriptorSystem &sys, cplx s, std::span<const cplx> x);

/// Right and left normalized vectors at one shift:
///   xcol = (J - sE)^{-1} B / nu,  ycol = (J^T - sE)^{-1} C / nu,  nu = C^T (J - sE)^{-1} B.
struct NormalizedVectors
{
  ComplexVector x;
  ComplexVector y;
  cplx normalizer;
};

/// One factorization of J - sE serves both solves. Throws SingularMatrixError when s is an
/// eigenvalue and VanishingNormalizerError when |nu| <= min_normalizer.
NormalizedVectors normalized_vectors(const DescriptorSystem &sys, cplx s,
                                     double min_normalizer = 0.0);
NormalizedVectors normalized_vectors(const DescriptorSystem &sys, const Factorization &lu,
                                     double min_normalizer = 0.0);

/// C_a^T J4^{-1} B_a. Equals D - d; zero when ndyn == N.
cplx algebraic_feedthrough(const DescriptorSystem &sys);

/// y^T E x over the first ndyn entries (plain, unconjugated).
cplx dynamic_inner(std::span<const cplx> y, std::span<const cplx> x, std::size_t ndyn);

}  // namespace dpse

#endif  // DPSE_DESCRIPTOR_HPP
