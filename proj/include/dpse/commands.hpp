// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_COMMANDS_HPP
#define DPSE_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpse/generator.hpp"
#include "dpse/solver.hpp"

// Subcommand bodies of the dpse tool. Each returns the process exit code:
// 0 success (full convergence for solver runs), 2 partial convergence, 1 input error.

namespace dpse::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitPartial = 2;

/// "a", "bi", "a+bi", "a-bi", "-i", ... Throws ParseError.
cplx parse_complex(const std::string &text);
/// Comma-, semicolon- or whitespace-separated complex values.
ComplexVector parse_complex_list(const std::string &text);
std::string format_complex(cplx z, int precision = 10);

struct ShiftOptions
{
  std::string shifts = "fan";  // fan | ring | random | explicit list
  std::size_t p = 20;
  cplx fan_scale = kFanScale;
  cplx ring_center{-1.0, 0.0};
  double ring_radius = 1.0;
  std::uint64_t seed = 1;
};

/// Initial shifts for the given options. An explicit list fixes p to its length. The
/// random pattern draws uniformly from the box spanned by the fan.
ComplexVector make_shifts(const ShiftOptions &opts);

struct PolesOptions
{
  std::filesystem::path manifest;
  std::string method = "dpse";
  std::string matching = "greedy";
  ShiftOptions shift;
  double tol = 1e-5;
  std::size_t max_iter = 50;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> json_out;  // stdout when unset
  std::optional<std::filesystem::path> csv_out;
};
int cmd_poles(const PolesOptions &opts, std::ostream &out, std::ostream &err);

struct TfOptions
{
  std::filesystem::path manifest;
  std::string s_values;  // explicit list; overrides the sweep when set
  double omega_min = 0.01;
  double omega_max = 100.0;
  std::size_t points = 50;
  std::size_t compare_modal = 0;  // 0: off
};
int cmd_tf(const TfOptions &opts, std::ostream &out, std::ostream &err);

struct GenCommandOptions
{
  GenOptions gen;
  std::filesystem::path out_dir = "generated";
};
int cmd_gen(const GenCommandOptions &opts, std::ostream &out, std::ostream &err);

struct BenchOptions
{
  std::filesystem::path manifest;
  std::string methods = "dpse,ddpse";
  std::size_t repeats = 1;
  std::string matching = "greedy";
  ShiftOptions shift;
  double tol = 1e-5;
  std::size_t max_iter = 50;
  std::size_t threads = 0;
  bool csv = false;
};

struct BenchRow
{
  std::size_t k = 0;
  cplx eigenvalue;
  std::size_t iterations = 0;
  double cpu = 0.0;  // seconds, minimum over repeats
};

struct BenchBlock
{
  Method method = Method::dpse;
  std::size_t p = 0;
  std::size_t converged = 0;
  std::size_t upper_half = 0;  // converged values with Im > 0
  std::size_t iterations = 0;
  std::vector<BenchRow> rows;  // sorted by iterations, then cpu
};

std::vector<BenchBlock> run_bench(const DescriptorSystem &sys, const BenchOptions &opts);
void print_bench(std::ostream &out, const std::vector<BenchBlock> &blocks, bool csv);
int cmd_bench(const BenchOptions &opts, std::ostream &out, std::ostream &err);

struct SpySummary
{
  std::size_t order = 0;
  std::size_t ndyn = 0;
  std::size_t nnz = 0;
  double density_percent = 0.0;
  std::size_t block_nnz[4] = {0, 0, 0, 0};  // J1, J2, J3, J4
};
SpySummary spy_summary(const SparseMatrix &J, std::size_t ndyn);

struct SpyOptions
{
  std::filesystem::path manifest;
  bool summary_only = false;
  std::optional<std::filesystem::path> coords_out;
};
int cmd_spy(const SpyOptions &opts, std::ostream &out, std::ostream &err);

struct PolemapOptions
{
  std::filesystem::path report;
  std::optional<std::filesystem::path> out;  // stdout when unset
  std::vector<double> damping_lines;        // constant-damping rays
  double omega_max = 10.0;
  std::size_t line_points = 21;
  std::optional<std::filesystem::path> lines_out;
};
int cmd_polemap(const PolemapOptions &opts, std::ostream &out, std::ostream &err);

}  // namespace dpse::cli

#endif  // DPSE_COMMANDS_HPP
