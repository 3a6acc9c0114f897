// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "dpse/dense.hpp"
#include "dpse/solver.hpp"

namespace dpse::oracle
{

namespace
{

Eigen::PartialPivLU<DenseMatrix> shifted_lu(const DenseMatrix &A, cplx s)
{
  const auto n = A.rows();
  const DenseMatrix M = A - s * DenseMatrix::Identity(n, n);
  Eigen::PartialPivLU<DenseMatrix> lu(M);
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0 || lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-14 * scale)
  {
    throw SingularMatrixError("oracle: A - sI is singular");
  }
  return lu;
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

EigenDecomposition full_spectrum(const DenseMatrix &A)
{
  DenseEigen eig = dense_eig(A);
  EigenDecomposition out;
  out.P = std::move(eig.eigenvectors);
  out.eigenvalues = std::move(eig.eigenvalues);
  const auto n = A.rows();
  // Solve against P rather than inverting explicitly.
  out.Pinv = out.P.partialPivLu().solve(DenseMatrix::Identity(n, n));
  out.eigenvector_condition = condition_number(out.P);
  out.near_defective = !(out.eigenvector_condition <= kDefectiveCondition);
  return out;
}

EigenDecomposition full_spectrum(const StateSpaceSystem &ss)
{
  return full_spectrum(ss.A);
}

ResidueTable residues(const StateSpaceSystem &ss)
{
  const EigenDecomposition dec = full_spectrum(ss);
  if (dec.near_defective)
  {
    throw Error("oracle residues: eigenvector matrix is near-defective (condition " +
                std::to_string(dec.eigenvector_condition) + ")");
  }
  const DenseVector cP = (ss.c.transpose() * dec.P).transpose();
  const DenseVector Pinvb = dec.P.partialPivLu().solve(ss.b);

  ResidueTable table;
  double rmax = 0.0;
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k)
  {
    const auto kk = static_cast<Eigen::Index>(k);
    ResidueEntry e;
    e.eigenvalue = dec.eigenvalues[k];
    e.residue = cP(kk) * Pinvb(kk);
    e.dominance = dominance(e.residue, e.eigenvalue);
    rmax = std::max(rmax, std::abs(e.residue));
    table.entries.push_back(e);
  }
  for (const auto &e : table.entries)
  {
    if (std::abs(e.residue) <= 1e-12 * rmax || rmax == 0.0)
    {
      table.has_vanishing_residue = true;
    }
  }
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const ResidueEntry &a, const ResidueEntry &b) {
                     return dominance_before(a.eigenvalue, a.dominance, b.eigenvalue,
                                             b.dominance);
                   });
  return table;
}

cplx modal_reconstruct(const ResidueTable &table, cplx d, cplx s, std::size_t top_k)
{
  cplx h = d;
  const std::size_t k = std::min(top_k, table.entries.size());
  for (std::size_t j = 0; j < k; ++j)
  {
    h += table.entries[j].residue / (s - table.entries[j].eigenvalue);
  }
  return h;
}

cplx normalizer(const StateSpaceSystem &ss, cplx s)
{
  const DenseVector z = shifted_lu(ss.A, s).solve(ss.b);
  return (ss.c.transpose() * z)(0);
}

DenseVector right_vector(const StateSpaceSystem &ss, cplx s)
{
  const DenseVector z = shifted_lu(ss.A, s).solve(ss.b);
  return z / (ss.c.transpose() * z)(0);
}

DenseVector left_vector(const StateSpaceSystem &ss, cplx s)
{
  const auto lu = shifted_lu(ss.A, s);
  const DenseVector z = lu.solve(ss.b);
  const DenseVector w = lu.transpose().solve(ss.c);
  return w / (ss.c.transpose() * z)(0);
}

DenseMatrix reference_YtX(const StateSpaceSystem &ss, std::span<const cplx> shifts)
{
  const auto n = ss.A.rows();
  const auto p = static_cast<Eigen::Index>(shifts.size());
  DenseMatrix X(n, p), Y(n, p);
  for (Eigen::Index k = 0; k < p; ++k)
  {
    X.col(k) = right_vector(ss, shifts[static_cast<std::size_t>(k)]);
    Y.col(k) = left_vector(ss, shifts[static_cast<std::size_t>(k)]);
  }
  return Y.transpose() * X;
}

DenseMatrix reference_F(const StateSpaceSystem &ss, std::span<const cplx> shifts)
{
  const auto n = ss.A.rows();
  const auto p = static_cast<Eigen::Index>(shifts.size());
  DenseMatrix X(n, p), Y(n, p);
  for (Eigen::Index k = 0; k < p; ++k)
  {
    X.col(k) = right_vector(ss, shifts[static_cast<std::size_t>(k)]);
    Y.col(k) = left_vector(ss, shifts[static_cast<std::size_t>(k)]);
  }
  const DenseMatrix YtX = Y.transpose() * X;
  if (!(condition_number(YtX) <= 1e13))
  {
    throw SingularMatrixError("reference_F: Y^T X is rank deficient (repeated shifts?)");
  }
  return YtX.partialPivLu().solve(Y.transpose() * ss.A * X);
}

double shift_update_residual(const StateSpaceSystem &ss, cplx s_old, cplx s_new)
{
  const DenseVector z = shifted_lu(ss.A, s_old).solve(ss.b);
  const cplx nu = (ss.c.transpose() * z)(0);
  const DenseVector x = z / nu;
  return (ss.b / nu + (s_old - s_new) * x).norm() / x.norm();
}

double direct_residual(const StateSpaceSystem &ss, cplx s_old, cplx s_new)
{
  const DenseVector x = right_vector(ss, s_old);
  return (ss.A * x - s_new * x).norm() / x.norm();
}

std::vector<RankedPole> rank_by_dominance(std::vector<RankedPole> poles)
{
  std::stable_sort(poles.begin(), poles.end(), [](const RankedPole &a, const RankedPole &b) {
    return dominance_before(a.eigenvalue, a.dominance, b.eigenvalue, b.dominance);
  });
  return poles;
}

void write_residue_csv(std::ostream &out, const ResidueTable &table)
{
  out << "re,im,residue_re,residue_im,dominance\n";
  for (const auto &e : table.entries)
  {
    out << fmt(e.eigenvalue.real()) << ',' << fmt(e.eigenvalue.imag()) << ','
        << fmt(e.residue.real()) << ',' << fmt(e.residue.imag()) << ',' << fmt(e.dominance)
        << '\n';
  }
}

ResidueTable read_residue_csv(std::istream &in)
{
  ResidueTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.empty() || line.rfind("re,", 0) == 0)
    {
      continue;
    }
    // strtod rather than operator>> so that "inf" dominance values round-trip.
    double f[5];
    std::istringstream ss(line);
    std::string tok;
    int count = 0;
    while (count < 5 && std::getline(ss, tok, ','))
    {
      char *end = nullptr;
      f[count] = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str())
      {
        throw ParseError("malformed residue row", lineno);
      }
      ++count;
    }
    if (count != 5)
    {
      throw ParseError("malformed residue row", lineno);
    }
    const double re = f[0], im = f[1], rre = f[2], rim = f[3], m = f[4];
    table.entries.push_back({{re, im}, {rre, rim}, m});
  }
  return table;
}

}  // namespace dpse::oracle
