// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <cs.h>

namespace dpse
{

namespace detail
{
void SymbolicDeleter::operator()(void *p) const
{
  cs_ci_sfree(static_cast<cs_cis *>(p));
}
void NumericDeleter::operator()(void *p) const
{
  cs_ci_nfree(static_cast<cs_cin *>(p));
}
}  // namespace detail

namespace
{

// AMD on S^T S (dense rows dropped): the column ordering CSparse pairs with partial pivoting.
constexpr int kOrdering = 2;
// 1.0 selects strict partial pivoting.
constexpr double kPivotTolerance = 1.0;

// Non-owning CSparse view of a SparseMatrix. CSparse never writes through it.
cs_ci make_view(const SparseMatrix &m)
{
  cs_ci a{};
  a.nzmax = static_cast<int>(std::max<std::size_t>(m.nnz(), 1));
  a.m = static_cast<int>(m.rows());
  a.n = static_cast<int>(m.cols());
  a.p = const_cast<int *>(m.col_ptr().data());
  a.i = const_cast<int *>(m.row_idx().data());
  a.x = const_cast<cplx *>(m.values().data());
  a.nz = -1;
  return a;
}

SparseMatrix export_factor(const cs_ci *f)
{
  // CSparse leaves row indices unsorted within a column.
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(f->p[f->n]));
  for (int j = 0; j < f->n; ++j)
  {
    for (int p = f->p[j]; p < f->p[j + 1]; ++p)
    {
      t.push_back({static_cast<std::size_t>(f->i[p]), static_cast<std::size_t>(j), f->x[p]});
    }
  }
  return SparseMatrix::from_triplets(static_cast<std::size_t>(f->m),
                                     static_cast<std::size_t>(f->n), t);
}

}  // namespace

Factorization::Factorization(const SparseMatrix &m, cplx shift) : n_(m.rows()), shift_(shift)
{
  if (!m.square())
  {
    throw DimensionError("factorize: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", not square");
  }
  if (n_ == 0)
  {
    throw DimensionError("factorize: empty matrix");
  }
  const double scale = m.max_abs();
  if (scale == 0.0)
  {
    throw SingularMatrixError("factorize: zero matrix");
  }

  cs_ci view = make_view(m);
  symbolic_.reset(cs_ci_sqr(kOrdering, &view, 0));
  if (!symbolic_)
  {
    throw Error("factorize: symbolic analysis failed");
  }
  numeric_.reset(cs_ci_lu(&view, static_cast<const cs_cis *>(symbolic_.get()), kPivotTolerance));
  if (!numeric_)
  {
    std::ostringstream msg;
    msg << "factorize: matrix is singular (zero pivot) at shift " << shift;
    throw SingularMatrixError(msg.str());
  }

  const auto *U = static_cast<const cs_cin *>(numeric_.get())->U;
  double umax = 0.0;
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (int j = 0; j < U->n; ++j)
  {
    for (int p = U->p[j]; p < U->p[j + 1]; ++p)
    {
      umax = std::max(umax, std::abs(U->x[p]));
    }
    // The diagonal is the last entry of each U column.
    min_pivot_ = std::min(min_pivot_, std::abs(U->x[U->p[j + 1] - 1]));
  }
  pivot_growth_ = umax / scale;
  if (min_pivot_ <= kSingularPivotRatio * scale)
  {
    std::ostringstream msg;
    msg << "factorize: matrix is numerically singular at shift " << shift
        << " (min pivot " << min_pivot_ << ", max entry " << scale << ")";
    throw SingularMatrixError(msg.str());
  }
}

ComplexVector Factorization::solve(std::span<const cplx> rhs, bool transposed) const
{
  if (rhs.size() != n_)
  {
    throw DimensionError("solve: rhs length " + std::to_string(rhs.size()) +
                         " does not match order " + std::to_string(n_));
  }
  const auto *S = static_cast<const cs_cis *>(symbolic_.get());
  const auto *N = static_cast<const cs_cin *>(numeric_.get());
  const int n = static_cast<int>(n_);
  ComplexVector work(n_), x(n_);

  if (!transposed)
  {
    cs_ci_ipvec(N->pinv, rhs.data(), work.data(), n);
    cs_ci_lsolve(N->L, work.data());
    cs_ci_usolve(N->U, work.data());
    cs_ci_ipvec(S->q, work.data(), x.data(), n);
    return x;
  }

  // M^T = P_c U^T L^T P_r. CSparse's transposed kernels apply the conjugate transpose,
  // so conjugate on the way in and out.
  cs_ci_pvec(S->q, rhs.data(), work.data(), n);
  for (auto &w : work)
  {
    w = std::conj(w);
  }
  cs_ci_utsolve(N->U, work.data());
  cs_ci_ltsolve(N->L, work.data());
  for (auto &w : work)
  {
    w = std::conj(w);
  }
  cs_ci_pvec(N->pinv, work.data(), x.data(), n);
  return x;
}

std::vector<int> Factorization::row_permutation() const
{
  const auto *N = static_cast<const cs_cin *>(numeric_.get());
  std::vector<int> p(n_);
  for (std::size_t i = 0; i < n_; ++i)
  {
    p[static_cast<std::size_t>(N->pinv[i])] = static_cast<int>(i);
  }
  return p;
}

std::vector<int> Factorization::col_permutation() const
{
  const auto *S = static_cast<const cs_cis *>(symbolic_.get());
  if (!S->q)
  {
    std::vector<int> q(n_);
    for (std::size_t k = 0; k < n_; ++k)
    {
      q[k] = static_cast<int>(k);
    }
    return q;
  }
  return {S->q, S->q + n_};
}

SparseMatrix Factorization::lower() const
{
  return export_factor(static_cast<const cs_cin *>(numeric_.get())->L);
}

SparseMatrix Factorization::upper() const
{
  return export_factor(static_cast<const cs_cin *>(numeric_.get())->U);
}

ComplexVector solve(const Factorization &f, std::span<const cplx> rhs, bool transposed)
{
  return f.solve(rhs, transposed);
}

}  // namespace dpse
