// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace dpse
{

namespace
{

enum class Layout
{
  coordinate,
  array
};

enum class Field
{
  real,
  complex,
  pattern
};

enum class Symmetry
{
  general,
  symmetric,
  skew,
  hermitian
};

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank_or_comment(const std::string &line)
{
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

// Reads the next data line, skipping comments; returns false at EOF.
bool next_data_line(std::istream &in, std::string &line, std::size_t &lineno)
{
  while (std::getline(in, line))
  {
    ++lineno;
    if (!blank_or_comment(line))
    {
      return true;
    }
  }
  return false;
}

std::string format_double(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

bool all_real(const std::vector<cplx> &v)
{
  return std::all_of(v.begin(), v.end(), [](const cplx &z) { return z.imag() == 0.0; });
}

}  // namespace

SparseMatrix read_matrix_market(std::istream &in)
{
  std::size_t lineno = 0;
  std::string line;
  if (!std::getline(in, line))
  {
    throw ParseError("empty Matrix Market stream", 1);
  }
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, layout_s, field_s, symmetry_s;
  header >> banner >> object >> layout_s >> field_s >> symmetry_s;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
  {
    throw ParseError("missing %%MatrixMarket matrix banner", lineno);
  }

  Layout layout;
  layout_s = lower(layout_s);
  if (layout_s == "coordinate")
  {
    layout = Layout::coordinate;
  }
  else if (layout_s == "array")
  {
    layout = Layout::array;
  }
  else
  {
    throw ParseError("unsupported layout '" + layout_s + "'", lineno);
  }

  Field field;
  field_s = lower(field_s);
  if (field_s == "real" || field_s == "integer" || field_s == "double")
  {
    field = Field::real;
  }
  else if (field_s == "complex")
  {
    field = Field::complex;
  }
  else if (field_s == "pattern" && layout == Layout::coordinate)
  {
    field = Field::pattern;
  }
  else
  {
    throw ParseError("unsupported field '" + field_s + "'", lineno);
  }

  Symmetry symmetry;
  symmetry_s = lower(symmetry_s);
  if (symmetry_s == "general")
  {
    symmetry = Symmetry::general;
  }
  else if (symmetry_s == "symmetric")
  {
    symmetry = Symmetry::symmetric;
  }
  else if (symmetry_s == "skew-symmetric")
  {
    symmetry = Symmetry::skew;
  }
  else if (symmetry_s == "hermitian" && field == Field::complex)
  {
    symmetry = Symmetry::hermitian;
  }
  else
  {
    throw ParseError("unsupported symmetry '" + symmetry_s + "'", lineno);
  }

  if (!next_data_line(in, line, lineno))
  {
    throw ParseError("missing size line", lineno);
  }
  long long nrows = -1, ncols = -1, declared = -1;
  {
    std::istringstream sz(line);
    sz >> nrows >> ncols;
    if (layout == Layout::coordinate)
    {
      sz >> declared;
    }
    if (!sz || nrows < 0 || ncols < 0 || (layout == Layout::coordinate && declared < 0))
    {
      throw ParseError("malformed size line", lineno);
    }
  }
  if (symmetry != Symmetry::general && nrows != ncols)
  {
    throw ParseError("symmetric storage requires a square matrix", lineno);
  }

  auto read_value = [&](std::istringstream &ss) -> cplx {
    if (field == Field::pattern)
    {
      return 1.0;
    }
    double re = 0.0, im = 0.0;
    ss >> re;
    if (field == Field::complex)
    {
      ss >> im;
    }
    if (!ss)
    {
      throw ParseError("malformed numeric value", lineno);
    }
    return {re, im};
  };

  const auto rows = static_cast<std::size_t>(nrows);
  const auto cols = static_cast<std::size_t>(ncols);
  std::vector<Triplet> triplets;

  auto add_mirrored = [&](std::size_t i, std::size_t j, cplx v) {
    triplets.push_back({i, j, v});
    if (i == j)
    {
      return;
    }
    switch (symmetry)
    {
    case Symmetry::general:
      break;
    case Symmetry::symmetric:
      triplets.push_back({j, i, v});
      break;
    case Symmetry::skew:
      triplets.push_back({j, i, -v});
      break;
    case Symmetry::hermitian:
      triplets.push_back({j, i, std::conj(v)});
      break;
    }
  };

  if (layout == Layout::coordinate)
  {
    triplets.reserve(static_cast<std::size_t>(declared));
    long long seen = 0;
    while (next_data_line(in, line, lineno))
    {
      if (seen == declared)
      {
        throw ParseError("entry count mismatch: more than the declared " +
                             std::to_string(declared) + " entries",
                         lineno);
      }
      std::istringstream ss(line);
      long long i = 0, j = 0;
      ss >> i >> j;
      if (!ss)
      {
        throw ParseError("malformed coordinate entry", lineno);
      }
      if (i < 1 || j < 1 || i > nrows || j > ncols)
      {
        throw ParseError("entry index out of range", lineno);
      }
      add_mirrored(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                   read_value(ss));
      ++seen;
    }
    if (seen != declared)
    {
      throw ParseError("entry count mismatch: declared " + std::to_string(declared) +
                           ", found " + std::to_string(seen),
                       lineno);
    }
  }
  else
  {
    // Column-major; symmetric variants store the lower triangle only.
    for (std::size_t j = 0; j < cols; ++j)
    {
      std::size_t first_row = symmetry == Symmetry::general ? 0
                              : symmetry == Symmetry::skew  ? j + 1
                                                            : j;
      for (std::size_t i = first_row; i < rows; ++i)
      {
        if (!next_data_line(in, line, lineno))
        {
          throw ParseError("entry count mismatch: array data ended early", lineno);
        }
        std::istringstream ss(line);
        cplx v = read_value(ss);
        if (v != 0.0)
        {
          add_mirrored(i, j, v);
        }
        else if (symmetry == Symmetry::general)
        {
          // Keep the explicit zero so an array file round-trips its dense shape.
          triplets.push_back({i, j, v});
        }
      }
    }
    if (next_data_line(in, line, lineno))
    {
      throw ParseError("entry count mismatch: trailing array data", lineno);
    }
  }
  return SparseMatrix::from_triplets(rows, cols, triplets);
}

SparseMatrix read_matrix_market(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open Matrix Market file " + path.string(), 0);
  }
  try
  {
    return read_matrix_market(in);
  }
  catch (const ParseError &e)
  {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

ComplexVector read_vector_market(const std::filesystem::path &path)
{
  SparseMatrix m = read_matrix_market(path);
  if (m.cols() != 1)
  {
    throw DimensionError(path.string() + ": expected an N x 1 vector, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  ComplexVector v(m.rows(), 0.0);
  for (const auto &t : m.to_triplets())
  {
    v[t.row] = t.value;
  }
  return v;
}

void write_matrix_market(std::ostream &out, const SparseMatrix &m)
{
  const bool real = all_real(m.values());
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const auto &t : m.to_triplets())
  {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << format_double(t.value.real());
    if (!real)
    {
      out << ' ' << format_double(t.value.imag());
    }
    out << '\n';
  }
}

void write_matrix_market(const std::filesystem::path &path, const SparseMatrix &m)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write " + path.string());
  }
  write_matrix_market(out, m);
}

void write_vector_market(const std::filesystem::path &path, const ComplexVector &v)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write " + path.string());
  }
  const bool real = all_real(v);
  out << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  out << v.size() << " 1\n";
  for (const auto &z : v)
  {
    out << format_double(z.real());
    if (!real)
    {
      out << ' ' << format_double(z.imag());
    }
    out << '\n';
  }
}

}  // namespace dpse
