// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_GENERATOR_HPP
#define DPSE_GENERATOR_HPP

#include <cstdint>
#include <filesystem>

#include "dpse/descriptor.hpp"
#include "dpse/manifest.hpp"
#include "dpse/oracle.hpp"

namespace dpse
{

/// Synthetic descriptor systems with an exactly prescribed state-matrix spectrum.
///
/// A0 is block diagonal (1x1 real blocks, 2x2 [s w; -w s] blocks for conjugate pairs).
/// It is mixed by T = I + N with N^2 = 0, so T^{-1} = I - N is exact, and
/// J1 = T A0 T^{-1} + J2 J4^{-1} J3, which makes J1 - J2 J4^{-1} J3 = T A0 T^{-1}.
/// J4 is a row/column-permuted block diagonal of small diagonally dominant blocks, which
/// keeps J4^{-1} (and thus J1) sparse.
struct GenOptions
{
  std::size_t n_states = 60;
  std::size_t n_algebraic = 40;
  std::size_t complex_pairs = 10;
  double damping_min = 0.01;
  double damping_max = 0.3;
  double freq_min = 0.5;  // imaginary parts of the oscillatory pairs
  double freq_max = 5.0;
  double real_min = -10.0;  // range of the real eigenvalues
  double real_max = -0.1;
  double min_separation = 0.0;  // minimum distance between any two eigenvalues
  double density = 0.05;
  std::uint64_t seed = 1;
  /// Explicit spectrum. Real entries give 1x1 blocks; an entry with Im > 0 gives a 2x2
  /// block carrying it and its conjugate. Overrides the random spectrum when non-empty.
  ComplexVector eigenvalues;
  bool mix = true;
  bool unit_io = false;           // B = C = ones
  bool zero_feedthrough = false;  // project C_a so that C_a^T J4^{-1} B_a = 0
  double min_residue = 1e-6;
  std::size_t max_resample = 200;
};

struct GeneratedSystem
{
  DescriptorSystem system;
  ComplexVector spectrum;     // all n eigenvalues as constructed
  oracle::ResidueTable truth;  // oracle residues of the reduced system
};

/// Throws Error when the residue resampling budget is exhausted or options are invalid.
GeneratedSystem generate_system(const GenOptions &opts);

/// Writes J.mtx, B.mtx, C.mtx, ground_truth.csv and system.manifest into dir.
/// Returns the manifest path.
std::filesystem::path write_generated(const GeneratedSystem &gen,
                                      const std::filesystem::path &dir);

}  // namespace dpse

#endif  // DPSE_GENERATOR_HPP
