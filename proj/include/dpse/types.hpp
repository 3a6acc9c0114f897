// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_TYPES_HPP
#define DPSE_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpse
{

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Dense complex matrix (column-major). Houses small projected matrices and oracle data.
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (Matrix Market, manifest, report).
class ParseError : public Error
{
public:
  ParseError(const std::string &what, std::size_t line)
    : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line)
  {
  }
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

/// Raised when a (shifted) matrix is structurally or numerically singular.
class SingularMatrixError : public Error
{
public:
  using Error::Error;
};

/// Raised when an iterative dense reduction fails to converge.
class ConvergenceError : public Error
{
public:
  using Error::Error;
};

/// Raised when the normalizer C^T (J - sE)^{-1} B vanishes (s near a transmission zero).
class VanishingNormalizerError : public Error
{
public:
  VanishingNormalizerError(const std::string &what, cplx normalizer)
    : Error(what), normalizer_(normalizer)
  {
  }
  cplx normalizer() const { return normalizer_; }

private:
  cplx normalizer_;
};

/// Raised when Y^T E X is numerically singular (shift collision).
class IllConditionedProjectionError : public Error
{
public:
  IllConditionedProjectionError(const std::string &what, double condition)
    : Error(what), condition_(condition)
  {
  }
  double condition() const { return condition_; }

private:
  double condition_;
};

}  // namespace dpse

#endif  // DPSE_TYPES_HPP
