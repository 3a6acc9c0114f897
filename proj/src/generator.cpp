// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/generator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "dpse/matrix_market.hpp"

namespace dpse
{

namespace
{

using RealMatrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

struct Block
{
  double re;
  double im;  // > 0 for a 2x2 block
};

bool separated(const std::vector<Block> &blocks, Block cand, double sep)
{
  if (sep <= 0.0)
  {
    return true;
  }
  const cplx c(cand.re, cand.im);
  if (cand.im > 0.0 && 2.0 * cand.im < sep)
  {
    return false;  // too close to its own conjugate
  }
  for (const auto &b : blocks)
  {
    const cplx v(b.re, b.im);
    if (std::abs(v - c) < sep || std::abs(std::conj(v) - c) < sep)
    {
      return false;
    }
  }
  return true;
}

std::vector<Block> explicit_blocks(const ComplexVector &eigs)
{
  std::vector<Block> blocks;
  for (const cplx &l : eigs)
  {
    if (l.imag() == 0.0)
    {
      blocks.push_back({l.real(), 0.0});
    }
    else if (l.imag() > 0.0)
    {
      blocks.push_back({l.real(), l.imag()});
    }
    else
    {
      // Lower-half entries are accepted only as the partner of a listed upper-half value.
      const bool partnered = std::any_of(eigs.begin(), eigs.end(), [&](const cplx &o) {
        return std::abs(o - std::conj(l)) <= 1e-12 * std::max(1.0, std::abs(l));
      });
      if (!partnered)
      {
        throw Error("generator: complex eigenvalue without its conjugate cannot be realized "
                    "by a real system");
      }
    }
  }
  return blocks;
}

std::vector<Block> random_blocks(const GenOptions &o, Rng &rng)
{
  if (2 * o.complex_pairs > o.n_states)
  {
    throw Error("generator: too many complex pairs for n_states");
  }
  if (o.damping_min <= 0.0 || o.damping_max >= 1.0 || o.damping_min > o.damping_max)
  {
    throw Error("generator: damping range must lie inside (0, 1)");
  }
  if (o.freq_min <= 0.0 || o.freq_min > o.freq_max || o.real_min > o.real_max)
  {
    throw Error("generator: invalid frequency or real range");
  }
  std::uniform_real_distribution<double> zeta(o.damping_min, o.damping_max);
  std::uniform_real_distribution<double> freq(o.freq_min, o.freq_max);
  std::uniform_real_distribution<double> real(o.real_min, o.real_max);

  std::vector<Block> blocks;
  auto draw = [&](auto make) {
    for (int attempt = 0; attempt < 10000; ++attempt)
    {
      Block b = make();
      if (separated(blocks, b, o.min_separation))
      {
        blocks.push_back(b);
        return;
      }
    }
    throw Error("generator: cannot place eigenvalues with the requested separation");
  };
  for (std::size_t k = 0; k < o.complex_pairs; ++k)
  {
    draw([&] {
      const double z = zeta(rng);
      const double w = freq(rng);
      // lambda = -z wn + i wn sqrt(1 - z^2) with Im = w
      return Block{-z * w / std::sqrt(1.0 - z * z), w};
    });
  }
  for (std::size_t k = 2 * o.complex_pairs; k < o.n_states; ++k)
  {
    draw([&] { return Block{real(rng), 0.0}; });
  }
  std::shuffle(blocks.begin(), blocks.end(), rng);
  return blocks;
}

RealMatrix block_diagonal(const std::vector<Block> &blocks, std::size_t n)
{
  RealMatrix A0 = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::Index k = 0;
  for (const auto &b : blocks)
  {
    A0(k, k) = b.re;
    if (b.im > 0.0)
    {
      A0(k, k + 1) = b.im;
      A0(k + 1, k) = -b.im;
      A0(k + 1, k + 1) = b.re;
      k += 2;
    }
    else
    {
      k += 1;
    }
  }
  return A0;
}

// N with N^2 = 0: entries only from a row set into a disjoint column set.
RealMatrix nilpotent_mix(std::size_t n, double density, Rng &rng)
{
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t half = n / 2;
  std::bernoulli_distribution pick(std::min(1.0, density));
  std::normal_distribution<double> val(0.0, 0.5);
  RealMatrix N = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < half; ++a)
  {
    for (std::size_t b = half; b < n; ++b)
    {
      if (pick(rng))
      {
        N(idx[a], idx[b]) = val(rng);
      }
    }
  }
  return N;
}

// Permuted block diagonal with blocks of order 1..3. Returns J4 and its exact-pattern inverse.
std::pair<RealMatrix, RealMatrix> algebraic_block(std::size_t m, Rng &rng)
{
  const auto M = static_cast<Eigen::Index>(m);
  RealMatrix Bd = RealMatrix::Zero(M, M);
  RealMatrix Bi = RealMatrix::Zero(M, M);
  std::uniform_int_distribution<int> size(1, 3);
  std::normal_distribution<double> val(0.0, 1.0);
  std::bernoulli_distribution sign(0.5);
  for (Eigen::Index k = 0; k < M;)
  {
    const Eigen::Index s = std::min<Eigen::Index>(size(rng), M - k);
    RealMatrix blk(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
    {
      for (Eigen::Index j = 0; j < s; ++j)
      {
        blk(i, j) = 0.5 * val(rng);
      }
      blk(i, i) += (sign(rng) ? 1.0 : -1.0) * (1.0 + static_cast<double>(s));
    }
    Bd.block(k, k, s, s) = blk;
    Bi.block(k, k, s, s) = blk.inverse();
    k += s;
  }
  std::vector<Eigen::Index> pr(m), pc(m);
  std::iota(pr.begin(), pr.end(), 0);
  std::iota(pc.begin(), pc.end(), 0);
  std::shuffle(pr.begin(), pr.end(), rng);
  std::shuffle(pc.begin(), pc.end(), rng);
  // J4(pr[i], pc[j]) = Bd(i, j)  =>  J4^{-1}(pc[j], pr[i]) = Bd^{-1}(j, i)
  RealMatrix J4(M, M), J4inv(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
  {
    for (Eigen::Index j = 0; j < M; ++j)
    {
      J4(pr[i], pc[j]) = Bd(i, j);
      J4inv(pc[j], pr[i]) = Bi(j, i);
    }
  }
  return {J4, J4inv};
}

// Sparse random coupling block, with at least one entry in every row (rows_covered) or
// every column (otherwise).
RealMatrix coupling(std::size_t r, std::size_t c, double density, bool rows_covered, Rng &rng)
{
  const auto R = static_cast<Eigen::Index>(r);
  const auto C = static_cast<Eigen::Index>(c);
  RealMatrix K = RealMatrix::Zero(R, C);
  if (r == 0 || c == 0)
  {
    return K;
  }
  std::bernoulli_distribution pick(std::min(1.0, density));
  std::normal_distribution<double> val(0.0, 1.0);
  for (Eigen::Index i = 0; i < R; ++i)
  {
    for (Eigen::Index j = 0; j < C; ++j)
    {
      if (pick(rng))
      {
        K(i, j) = val(rng);
      }
    }
  }
  if (rows_covered)
  {
    std::uniform_int_distribution<Eigen::Index> col(0, C - 1);
    for (Eigen::Index i = 0; i < R; ++i)
    {
      K(i, col(rng)) = val(rng);
    }
  }
  else
  {
    std::uniform_int_distribution<Eigen::Index> row(0, R - 1);
    for (Eigen::Index j = 0; j < C; ++j)
    {
      K(row(rng), j) = val(rng);
    }
  }
  return K;
}

ComplexVector io_vector(std::size_t n, bool unit, Rng &rng)
{
  ComplexVector v(n, 1.0);
  if (!unit)
  {
    std::normal_distribution<double> val(0.0, 1.0);
    for (auto &x : v)
    {
      x = val(rng);
    }
  }
  return v;
}

}  // namespace

GeneratedSystem generate_system(const GenOptions &o)
{
  Rng rng(o.seed);

  std::vector<Block> blocks = o.eigenvalues.empty() ? random_blocks(o, rng)
                                                    : explicit_blocks(o.eigenvalues);
  std::size_t n = 0;
  ComplexVector spectrum;
  for (const auto &b : blocks)
  {
    spectrum.emplace_back(b.re, b.im);
    if (b.im > 0.0)
    {
      spectrum.emplace_back(b.re, -b.im);
    }
    n += b.im > 0.0 ? 2 : 1;
  }
  if (n == 0)
  {
    throw Error("generator: empty spectrum");
  }
  const std::size_t m = o.n_algebraic;
  const std::size_t N = n + m;
  const auto nn = static_cast<Eigen::Index>(n);
  const auto mm = static_cast<Eigen::Index>(m);

  RealMatrix A = block_diagonal(blocks, n);
  if (o.mix && n > 1)
  {
    const RealMatrix Nmix = nilpotent_mix(n, o.density, rng);
    const RealMatrix I = RealMatrix::Identity(nn, nn);
    A = (I + Nmix) * A * (I - Nmix);
  }

  RealMatrix J = RealMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  RealMatrix J4inv;
  if (m > 0)
  {
    auto [J4, inv] = algebraic_block(m, rng);
    J4inv = std::move(inv);
    const RealMatrix J2 = coupling(n, m, o.density, false, rng);
    const RealMatrix J3 = coupling(m, n, o.density, true, rng);
    J.topLeftCorner(nn, nn) = A + J2 * J4inv * J3;
    J.topRightCorner(nn, mm) = J2;
    J.bottomLeftCorner(mm, nn) = J3;
    J.bottomRightCorner(mm, mm) = J4;
  }
  else
  {
    J = A;
  }
  SparseMatrix Js = SparseMatrix::from_dense(J.cast<cplx>());

  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, o.max_resample); ++attempt)
  {
    ComplexVector B = io_vector(N, o.unit_io, rng);
    ComplexVector C = io_vector(N, o.unit_io, rng);
    if (o.zero_feedthrough && m > 0)
    {
      // C_a <- C_a - (C_a^T z / z^T z) z  with  z = J4^{-1} B_a
      Eigen::VectorXd Ba(mm), Ca(mm);
      for (Eigen::Index i = 0; i < mm; ++i)
      {
        Ba(i) = B[n + i].real();
        Ca(i) = C[n + i].real();
      }
      const Eigen::VectorXd z = J4inv * Ba;
      if (z.squaredNorm() > 0.0)
      {
        Ca -= (Ca.dot(z) / z.squaredNorm()) * z;
      }
      for (Eigen::Index i = 0; i < mm; ++i)
      {
        C[n + i] = Ca(i);
      }
    }
    DescriptorSystem sys(Js, n, std::move(B), std::move(C), 0.0);
    oracle::ResidueTable truth = oracle::residues(reduce_to_state_space(sys));
    const bool big_enough =
        std::all_of(truth.entries.begin(), truth.entries.end(),
                    [&](const oracle::ResidueEntry &e) { return std::abs(e.residue) > o.min_residue; });
    if (big_enough && !truth.has_vanishing_residue)
    {
      return GeneratedSystem{std::move(sys), std::move(spectrum), std::move(truth)};
    }
    if (o.unit_io && !o.zero_feedthrough)
    {
      break;  // nothing random left to resample
    }
  }
  throw Error("generator: could not draw B, C with every |residue| > " +
              std::to_string(o.min_residue));
}

std::filesystem::path write_generated(const GeneratedSystem &gen,
                                      const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  Manifest m;
  m.jacobian_path = dir / "J.mtx";
  m.b_path = dir / "B.mtx";
  m.c_path = dir / "C.mtx";
  m.ndyn = gen.system.ndyn();
  m.d_re = gen.system.feedthrough().real();
  m.d_im = gen.system.feedthrough().imag();
  m.ground_truth_path = dir / "ground_truth.csv";

  write_matrix_market(m.jacobian_path, gen.system.jacobian());
  write_vector_market(m.b_path, gen.system.input());
  write_vector_market(m.c_path, gen.system.output());
  {
    std::ofstream out(*m.ground_truth_path);
    if (!out)
    {
      throw Error("cannot write " + m.ground_truth_path->string());
    }
    oracle::write_residue_csv(out, gen.truth);
  }
  const auto path = dir / "system.manifest";
  write_manifest(path, m);
  return path;
}

}  // namespace dpse
