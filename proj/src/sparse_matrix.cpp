// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dpse
{

namespace
{

void check_index_range(std::size_t nrows, std::size_t ncols)
{
  constexpr auto limit = static_cast<std::size_t>(std::numeric_limits<int>::max());
  if (nrows > limit || ncols > limit)
  {
    throw DimensionError("matrix dimensions exceed the supported index range");
  }
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols)
  : nrows_(nrows), ncols_(ncols), col_ptr_(ncols + 1, 0)
{
  check_index_range(nrows, ncols);
}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::span<const Triplet> triplets)
{
  check_index_range(nrows, ncols);
  std::vector<int> count(ncols + 1, 0);
  for (const auto &t : triplets)
  {
    if (t.row >= nrows || t.col >= ncols)
    {
      throw DimensionError("triplet (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") outside " + std::to_string(nrows) +
                           "x" + std::to_string(ncols));
    }
    ++count[t.col + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  // Bucket by column, then sort and merge each column.
  std::vector<std::pair<int, cplx>> bucket(triplets.size());
  std::vector<int> next(count.begin(), count.end() - 1);
  for (const auto &t : triplets)
  {
    bucket[next[t.col]++] = {static_cast<int>(t.row), t.value};
  }

  SparseMatrix m(nrows, ncols);
  m.row_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t j = 0; j < ncols; ++j)
  {
    auto first = bucket.begin() + count[j];
    auto last = bucket.begin() + count[j + 1];
    std::stable_sort(first, last,
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it)
    {
      if (!m.row_idx_.empty() && static_cast<int>(m.row_idx_.size()) > m.col_ptr_[j] &&
          m.row_idx_.back() == it->first)
      {
        m.values_.back() += it->second;
      }
      else
      {
        m.row_idx_.push_back(it->first);
        m.values_.push_back(it->second);
      }
    }
    m.col_ptr_[j + 1] = static_cast<int>(m.row_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::from_csc(std::size_t nrows, std::size_t ncols,
                                    std::vector<int> col_ptr, std::vector<int> row_idx,
                                    std::vector<cplx> values)
{
  SparseMatrix m(nrows, ncols);
  m.col_ptr_ = std::move(col_ptr);
  m.row_idx_ = std::move(row_idx);
  m.values_ = std::move(values);
  m.check_invariants();
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    t.push_back({i, i, 1.0});
  }
  return from_triplets(n, n, t);
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix &dense, double drop_tol)
{
  std::vector<Triplet> t;
  for (Eigen::Index j = 0; j < dense.cols(); ++j)
  {
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
    {
      if (std::abs(dense(i, j)) > drop_tol)
      {
        t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), dense(i, j)});
      }
    }
  }
  return from_triplets(static_cast<std::size_t>(dense.rows()),
                       static_cast<std::size_t>(dense.cols()), t);
}

cplx SparseMatrix::coeff(std::size_t i, std::size_t j) const
{
  if (i >= nrows_ || j >= ncols_)
  {
    throw DimensionError("coefficient index out of range");
  }
  auto first = row_idx_.begin() + col_ptr_[j];
  auto last = row_idx_.begin() + col_ptr_[j + 1];
  auto it = std::lower_bound(first, last, static_cast<int>(i));
  if (it != last && *it == static_cast<int>(i))
  {
    return values_[static_cast<std::size_t>(it - row_idx_.begin())];
  }
  return 0.0;
}

ComplexVector SparseMatrix::multiply(std::span<const cplx> x) const
{
  if (x.size() != ncols_)
  {
    throw DimensionError("multiply: vector length " + std::to_string(x.size()) +
                         " does not match " + std::to_string(ncols_) + " columns");
  }
  ComplexVector y(nrows_, 0.0);
  for (std::size_t j = 0; j < ncols_; ++j)
  {
    const cplx xj = x[j];
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      y[row_idx_[p]] += values_[p] * xj;
    }
  }
  return y;
}

ComplexVector SparseMatrix::multiply_transposed(std::span<const cplx> x) const
{
  if (x.size() != nrows_)
  {
    throw DimensionError("multiply_transposed: vector length " + std::to_string(x.size()) +
                         " does not match " + std::to_string(nrows_) + " rows");
  }
  ComplexVector y(ncols_, 0.0);
  for (std::size_t j = 0; j < ncols_; ++j)
  {
    cplx sum = 0.0;
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      sum += values_[p] * x[row_idx_[p]];
    }
    y[j] = sum;
  }
  return y;
}

SparseMatrix SparseMatrix::transpose() const
{
  SparseMatrix t(ncols_, nrows_);
  std::vector<int> count(nrows_ + 1, 0);
  for (int r : row_idx_)
  {
    ++count[r + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  t.col_ptr_ = count;
  t.row_idx_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<int> next(count.begin(), count.end() - 1);
  for (std::size_t j = 0; j < ncols_; ++j)
  {
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      int q = next[row_idx_[p]]++;
      t.row_idx_[q] = static_cast<int>(j);
      t.values_[q] = values_[p];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0,
                                 std::size_t c1) const
{
  if (r0 > r1 || r1 > nrows_ || c0 > c1 || c1 > ncols_)
  {
    throw DimensionError("block range out of bounds");
  }
  SparseMatrix b(r1 - r0, c1 - c0);
  for (std::size_t j = c0; j < c1; ++j)
  {
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      const auto r = static_cast<std::size_t>(row_idx_[p]);
      if (r >= r0 && r < r1)
      {
        b.row_idx_.push_back(static_cast<int>(r - r0));
        b.values_.push_back(values_[p]);
      }
    }
    b.col_ptr_[j - c0 + 1] = static_cast<int>(b.row_idx_.size());
  }
  return b;
}

DenseMatrix SparseMatrix::to_dense() const
{
  DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(nrows_),
                                    static_cast<Eigen::Index>(ncols_));
  for (std::size_t j = 0; j < ncols_; ++j)
  {
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      d(row_idx_[p], static_cast<Eigen::Index>(j)) = values_[p];
    }
  }
  return d;
}

std::vector<Triplet> SparseMatrix::to_triplets() const
{
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t j = 0; j < ncols_; ++j)
  {
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      t.push_back({static_cast<std::size_t>(row_idx_[p]), j, values_[p]});
    }
  }
  return t;
}

double SparseMatrix::max_abs() const
{
  double m = 0.0;
  for (const auto &v : values_)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double SparseMatrix::frobenius_norm() const
{
  double s = 0.0;
  for (const auto &v : values_)
  {
    s += std::norm(v);
  }
  return std::sqrt(s);
}

void SparseMatrix::check_invariants() const
{
  if (col_ptr_.size() != ncols_ + 1 || col_ptr_.front() != 0)
  {
    throw DimensionError("column pointer array has wrong length or does not start at 0");
  }
  if (static_cast<std::size_t>(col_ptr_.back()) != row_idx_.size() ||
      row_idx_.size() != values_.size())
  {
    throw DimensionError("nnz does not match the last column pointer");
  }
  for (std::size_t j = 0; j < ncols_; ++j)
  {
    if (col_ptr_[j] > col_ptr_[j + 1])
    {
      throw DimensionError("column pointers decrease at column " + std::to_string(j));
    }
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
    {
      if (row_idx_[p] < 0 || static_cast<std::size_t>(row_idx_[p]) >= nrows_)
      {
        throw DimensionError("row index out of range in column " + std::to_string(j));
      }
      if (p > col_ptr_[j] && row_idx_[p - 1] >= row_idx_[p])
      {
        throw DimensionError("row indices not strictly increasing in column " +
                             std::to_string(j));
      }
    }
  }
}

SparseMatrix shifted(const SparseMatrix &J, std::size_t ndyn, cplx s)
{
  if (!J.square())
  {
    throw DimensionError("shifted: J must be square");
  }
  if (ndyn > J.rows())
  {
    throw DimensionError("shifted: ndyn = " + std::to_string(ndyn) + " exceeds order " +
                         std::to_string(J.rows()));
  }
  const auto &cp = J.col_ptr();
  const auto &ri = J.row_idx();
  const auto &vals = J.values();

  std::vector<int> col_ptr(J.cols() + 1, 0);
  std::vector<int> row_idx;
  std::vector<cplx> values;
  row_idx.reserve(J.nnz() + ndyn);
  values.reserve(J.nnz() + ndyn);
  for (std::size_t j = 0; j < J.cols(); ++j)
  {
    const bool dynamic = j < ndyn;
    bool placed = !dynamic;
    for (int p = cp[j]; p < cp[j + 1]; ++p)
    {
      const auto r = static_cast<std::size_t>(ri[p]);
      if (!placed && r >= j)
      {
        if (r == j)
        {
          row_idx.push_back(ri[p]);
          values.push_back(vals[p] - s);
          placed = true;
          continue;
        }
        row_idx.push_back(static_cast<int>(j));
        values.push_back(-s);
        placed = true;
      }
      row_idx.push_back(ri[p]);
      values.push_back(vals[p]);
    }
    if (!placed)
    {
      row_idx.push_back(static_cast<int>(j));
      values.push_back(-s);
    }
    col_ptr[j + 1] = static_cast<int>(row_idx.size());
  }
  return SparseMatrix::from_csc(J.rows(), J.cols(), std::move(col_ptr), std::move(row_idx),
                                std::move(values));
}

}  // namespace dpse
