// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_SOLVER_HPP
#define DPSE_SOLVER_HPP

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpse/descriptor.hpp"

namespace dpse
{

enum class Method
{
  dpse,   // next shifts = eigenvalues of F(S)
  ddpse,  // next shifts = diagonal of F(S)
};

enum class Matching
{
  greedy_nearest,
  optimal_assignment,
};

struct SolverConfig
{
  Method method = Method::dpse;
  std::size_t p = 20;
  double tol = 1e-5;
  std::size_t max_iter = 50;
  Matching matching = Matching::greedy_nearest;
  double collision_eps = 1e-8;
  double perturbation = 1e-6;
  /// Worker threads for the per-shift solves; 0 reads DPSE_NUM_THREADS (default 1).
  std::size_t threads = 0;

  /// Throws Error when an invariant (p >= 1, tol > 0, collision_eps > 0) is violated.
  void check() const;
};

std::string to_string(Method m);
std::string to_string(Matching m);
Method parse_method(const std::string &s);
Matching parse_matching(const std::string &s);

// ---------------------------------------------------------------------------------------
// Initial shifts

enum class ShiftPattern
{
  fan,      // mu_k = k * scale, k = 1..p
  explicit_list,  // caller-provided values
  ring,           // p points on a circle around center
};

inline constexpr cplx kFanScale{-0.05, 0.5};

struct ShiftSpec
{
  ShiftPattern pattern = ShiftPattern::fan;
  cplx scale = kFanScale;
  ComplexVector values;
  cplx center{-1.0, 0.0};
  double radius = 1.0;
};

/// For the ring pattern the points sit at angles 2*pi*(k + 1/2)/p so that none lies on
/// the real axis.
ComplexVector init_shifts(const ShiftSpec &spec, std::size_t p);

// ---------------------------------------------------------------------------------------
// Iteration state

enum class ColumnStatus
{
  active,
  converged,
  retired,  // dropped from the projection after an unresolvable collision
};

/// The shift tuple S together with the descriptor-space blocks X, Y (N x p).
///
/// W and V of the state-space formulation are the first ndyn rows of Y and X and are
/// never formed. Converged columns keep the X/Y columns they had when they converged.
struct ShiftState
{
  ComplexVector shifts;         // current tuple S
  ComplexVector vector_shifts;  // shift at which each X/Y column was computed
  DenseMatrix X;
  DenseMatrix Y;
  ComplexVector normalizers;  // C^T (J - sE)^{-1} B at vector_shifts
  std::vector<ColumnStatus> status;
  ComplexVector locked;  // converged eigenvalue, meaningful when status == converged
  std::vector<std::optional<std::size_t>> duplicate_of;
  std::vector<std::size_t> iterations;
  std::vector<bool> fresh;  // X/Y columns valid for vector_shifts
  std::size_t iter = 0;
  cplx algebraic_feedthrough = 0.0;  // C_a^T J4^{-1} B_a

  std::size_t p() const { return shifts.size(); }
  bool active(std::size_t j) const { return status[j] == ColumnStatus::active; }
  /// Columns that take part in the projection: active ones and unique converged ones.
  bool in_basis(std::size_t j) const
  {
    return status[j] == ColumnStatus::active ||
           (status[j] == ColumnStatus::converged && !duplicate_of[j]);
  }
  std::vector<std::size_t> basis() const;
  std::size_t active_count() const;
};

ShiftState make_state(const DescriptorSystem &sys, ComplexVector shifts);

struct SolverEvent
{
  std::size_t iteration;
  std::size_t column;
  std::string kind;  // collision | singular-shift | vanishing-normalizer | ill-conditioned |
                     // duplicate | retired | converged
  std::string detail;
};

/// Recomputes X, Y and the normalizers of every active column at its current shift,
/// applying the collision, singular-shift, and vanishing-normalizer perturbations.
void refresh_columns(const DescriptorSystem &sys, ShiftState &state, const SolverConfig &config,
                     std::vector<SolverEvent> *events = nullptr);

/// F restricted to the basis columns (see ShiftState::in_basis), plus Y^T E X.
struct Projection
{
  std::vector<std::size_t> columns;  // basis column indices; F is columns.size() square
  DenseMatrix YtEX;
  DenseMatrix F;
  double condition = 0.0;
};

/// F = (W^T V)^{-1} W^T A V with W^T V = Y^T E X, assembled from the normalizers:
/// active column j gives F e_j = s_j e_j + (Y^T E X)^{-1} u / nu_j, u = e - delta v;
/// converged column j gives F e_j = lambda_j e_j.
///
/// Throws IllConditionedProjectionError when cond(Y^T E X) exceeds 1 / collision_eps.
Projection assemble_projection(const DescriptorSystem &sys, const ShiftState &state,
                               double collision_eps = 1e-8);
/// Same with an explicit condition limit.
Projection assemble_projection(const DescriptorSystem &sys, const ShiftState &state,
                               double collision_eps, double max_condition);

/// First relative move applied to a shift whose shifted matrix is singular. Grows by 100x
/// per retry up to SolverConfig::perturbation.
inline constexpr double kSingularNudge = 1e-10;

/// cond(Y^T E X) above which the projection is treated as singular even after the
/// collision perturbation.
inline constexpr double kSingularCondition = 1e14;

/// Eigenvalues of F matched to the current shifts. Returns all p shifts; converged
/// positions hold their locked values, non-basis columns are unchanged.
ComplexVector dpse_step(const ShiftState &state, const Projection &proj, Matching matching);

/// Diagonal of F for active columns; everything else unchanged.
ComplexVector ddpse_step(const ShiftState &state, const Projection &proj);

/// Permutes candidates so that result[i] pairs with old[i]. Positions with locked[i] set
/// return old[i] exactly and consume the candidate nearest to it.
ComplexVector match_shifts(std::span<const cplx> old, std::span<const cplx> candidates,
                           Matching strategy, std::span<const bool> locked = {});

struct ResidualCheck
{
  bool evaluated = false;  // false for non-active columns
  double right = std::numeric_limits<double>::infinity();
  double left = std::numeric_limits<double>::infinity();
  bool converged = false;
};

/// Relative residuals of the current X/Y columns at the new shifts:
/// ||(J - s_new E) x|| / ||x|| and ||(J^T - s_new E) y|| / ||y||.
std::vector<ResidualCheck> check_convergence(const DescriptorSystem &sys,
                                             const ShiftState &state,
                                             std::span<const cplx> new_shifts, double tol);

/// Locks column j at the given eigenvalue. Throws Error when j is not active.
void deflate(ShiftState &state, std::size_t j, cplx eigenvalue);

/// 1 / (y_j^T E x_j); approximates the residue R_j once column j has converged.
cplx estimate_residue(const DescriptorSystem &sys, const ShiftState &state, std::size_t j);

/// |R| / |Re(lambda)|; +infinity when Re(lambda) == 0.
double dominance(cplx residue, cplx eigenvalue);

/// -Re(lambda) / |lambda|; 1 for lambda == 0.
double damping_ratio(cplx eigenvalue);

/// Strict weak ordering for dominance rankings: larger m first (infinity leads), ties
/// broken by |Im| ascending and then Re descending.
bool dominance_before(cplx a, double ma, cplx b, double mb);

/// One map application of the selected method from a fresh state, without convergence
/// tests or deflation.
ComplexVector next_shifts(const DescriptorSystem &sys, std::span<const cplx> shifts,
                          const SolverConfig &config);

// ---------------------------------------------------------------------------------------
// Driver

struct PoleResult
{
  std::size_t column = 0;
  cplx eigenvalue;
  ComplexVector right_vector;
  ComplexVector left_vector;
  cplx residue;
  double dominance = 0.0;
  double damping_ratio = 0.0;
  std::size_t iterations = 0;
  double residual_right = 0.0;
  double residual_left = 0.0;
  double wall_time = 0.0;  // seconds from run start to convergence
  std::optional<std::size_t> duplicate_of;
};

struct ColumnSummary
{
  std::size_t column = 0;
  cplx initial_shift;
  cplx final_shift;
  ColumnStatus status = ColumnStatus::active;
  std::size_t iterations = 0;
  double wall_time = 0.0;
};

struct RunReport
{
  SolverConfig config;
  ComplexVector initial_shifts;
  std::vector<PoleResult> poles;  // converged columns, sorted by dominance
  std::vector<ColumnSummary> columns;
  std::vector<SolverEvent> events;
  std::vector<ComplexVector> trajectories;  // shift tuple per iteration, starting at S0
  std::vector<std::pair<std::size_t, std::size_t>> conjugate_pairs;  // column indices
  std::size_t iterations = 0;
  double wall_time = 0.0;

  bool all_converged() const;
  std::size_t converged_count() const;
};

RunReport run(const DescriptorSystem &sys, const SolverConfig &config,
              std::span<const cplx> initial_shifts);

}  // namespace dpse

#endif  // DPSE_SOLVER_HPP
