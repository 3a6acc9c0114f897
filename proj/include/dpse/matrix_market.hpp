// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_MATRIX_MARKET_HPP
#define DPSE_MATRIX_MARKET_HPP

#include <filesystem>
#include <iosfwd>

#include "dpse/sparse_matrix.hpp"

namespace dpse
{

// Matrix Market reader/writer. Supports the coordinate and array formats with real,
// integer, pattern, and complex fields and the general, symmetric, skew-symmetric, and
// hermitian qualifiers. Symmetric storage is expanded on read.

SparseMatrix read_matrix_market(const std::filesystem::path &path);
SparseMatrix read_matrix_market(std::istream &in);

/// Reads an N x 1 matrix (array or coordinate) as a dense vector of length N.
ComplexVector read_vector_market(const std::filesystem::path &path);

/// Writes coordinate format. The field is "real" when every imaginary part is zero.
void write_matrix_market(const std::filesystem::path &path, const SparseMatrix &m);
void write_matrix_market(std::ostream &out, const SparseMatrix &m);

/// Writes an array-format N x 1 file.
void write_vector_market(const std::filesystem::path &path, const ComplexVector &v);

}  // namespace dpse

#endif  // DPSE_MATRIX_MARKET_HPP
