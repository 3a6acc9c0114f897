// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_ORACLE_HPP
#define DPSE_ORACLE_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "dpse/descriptor.hpp"

// Brute-force dense references for small systems. Everything here works on the explicit
// state matrix and is independent of the sparse solver path.

namespace dpse::oracle
{

/// A = P diag(eigenvalues) P^{-1}.
struct EigenDecomposition
{
  DenseMatrix P;
  ComplexVector eigenvalues;
  DenseMatrix Pinv;
  double eigenvector_condition = 0.0;  // ||P|| ||P^{-1}|| (2-norm)
  bool near_defective = false;         // eigenvector_condition > 1e8
};

inline constexpr double kDefectiveCondition = 1e8;

EigenDecomposition full_spectrum(const DenseMatrix &A);
EigenDecomposition full_spectrum(const StateSpaceSystem &ss);

struct ResidueEntry
{
  cplx eigenvalue;
  cplx residue;  // c^T P e_k e_k^T P^{-1} b
  double dominance = 0.0;
};

/// Partial-fraction data, h(s) = sum_k R_k / (s - lambda_k) + d, sorted by dominance.
struct ResidueTable
{
  std::vector<ResidueEntry> entries;
  /// Some |R_k| <= 1e-12 * max|R|: the input or output is orthogonal to that mode.
  bool has_vanishing_residue = false;
};

/// Throws Error when the eigenbasis is near-defective.
ResidueTable residues(const StateSpaceSystem &ss);

/// sum over the top_k most dominant entries of R_j / (s - lambda_j), plus d.
cplx modal_reconstruct(const ResidueTable &table, cplx d, cplx s, std::size_t top_k);

/// f(s) = (A - sI)^{-1} b / c^T (A - sI)^{-1} b.
DenseVector right_vector(const StateSpaceSystem &ss, cplx s);
/// g(s) = (A^T - sI)^{-1} c / c^T (A - sI)^{-1} b.
DenseVector left_vector(const StateSpaceSystem &ss, cplx s);
/// c^T (A - sI)^{-1} b.
cplx normalizer(const StateSpaceSystem &ss, cplx s);

/// Literal F(S) = (Y^T X)^{-1} (Y^T A X) with explicit resolvent columns.
/// Throws SingularMatrixError when Y^T X is numerically rank deficient.
DenseMatrix reference_F(const StateSpaceSystem &ss, std::span<const cplx> shifts);
/// Y(S)^T X(S).
DenseMatrix reference_YtX(const StateSpaceSystem &ss, std::span<const cplx> shifts);

/// ||(A - s_new I) x|| / ||x|| evaluated without forming the residual vector from A:
/// ||b / nu + (s_old - s_new) x|| / ||x|| with x = f(s_old), nu = c^T (A - s_old I)^{-1} b.
double shift_update_residual(const StateSpaceSystem &ss, cplx s_old, cplx s_new);
/// ||(A - s_new I) x|| / ||x|| computed directly, x = f(s_old).
double direct_residual(const StateSpaceSystem &ss, cplx s_old, cplx s_new);

struct RankedPole
{
  cplx eigenvalue;
  double dominance = 0.0;
};

/// Descending by dominance; infinity first; ties by |Im| ascending then Re descending.
std::vector<RankedPole> rank_by_dominance(std::vector<RankedPole> poles);

/// CSV with header re,im,residue_re,residue_im,dominance.
void write_residue_csv(std::ostream &out, const ResidueTable &table);
ResidueTable read_residue_csv(std::istream &in);

}  // namespace dpse::oracle

#endif  // DPSE_ORACLE_HPP
