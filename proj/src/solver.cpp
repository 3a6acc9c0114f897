// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/LU>

#include "dpse/dense.hpp"

namespace dpse
{

namespace
{

constexpr cplx kDiagonal{1.0, 1.0};

std::size_t resolve_threads(std::size_t requested)
{
  if (requested > 0)
  {
    return requested;
  }
  if (const char *env = std::getenv("DPSE_NUM_THREADS"))
  {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
    {
      return static_cast<std::size_t>(v);
    }
  }
  return 1;
}

template <typename Fn>
void parallel_for(const std::vector<std::size_t> &items, std::size_t threads, Fn &&fn)
{
  threads = std::min(threads, items.size());
  if (threads <= 1)
  {
    for (std::size_t k = 0; k < items.size(); ++k)
    {
      fn(k);
    }
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
  {
    pool.emplace_back([&, t] {
      for (std::size_t k = t; k < items.size(); k += threads)
      {
        fn(k);
      }
    });
  }
}

std::string str(cplx z)
{
  std::ostringstream os;
  os.precision(10);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

double norm2(std::span<const cplx> v)
{
  double s = 0.0;
  for (const auto &z : v)
  {
    s += std::norm(z);
  }
  return std::sqrt(s);
}

std::span<const cplx> column(const DenseMatrix &m, std::size_t j)
{
  return {m.col(static_cast<Eigen::Index>(j)).data(), static_cast<std::size_t>(m.rows())};
}

// Value the column currently stands for: its locked eigenvalue or its shift.
cplx anchor(const ShiftState &state, std::size_t j)
{
  return state.status[j] == ColumnStatus::converged ? state.locked[j] : state.shifts[j];
}

struct ColumnOutcome
{
  NormalizedVectors vectors;
  cplx shift;
  std::vector<std::pair<std::string, std::string>> notes;
  bool ok = false;
  std::string failure;
};

ColumnOutcome compute_column(const DescriptorSystem &sys, cplx s, const SolverConfig &config)
{
  ColumnOutcome out;
  const cplx s0 = s;
  const double mag = std::abs(s0) > 0.0 ? std::abs(s0) : 1.0;
  double nudge = 0.0;
  bool normalizer_retry = false;
  for (;;)
  {
    try
    {
      out.vectors = normalized_vectors(sys, s, config.collision_eps);
      out.shift = s;
      out.ok = true;
      return out;
    }
    catch (const SingularMatrixError &)
    {
      out.failure = "shifted matrix singular at " + str(s);
      if (nudge >= config.perturbation)
      {
        return out;
      }
      // The step error grows with the square of the nudge, so start just past the pivot
      // threshold and grow toward config.perturbation only while still singular.
      nudge = nudge == 0.0 ? std::min(kSingularNudge, config.perturbation)
                           : std::min(100.0 * nudge, config.perturbation);
      const cplx moved = s0 + nudge * mag * kDiagonal / std::numbers::sqrt2;
      out.notes.emplace_back("singular-shift", "shift " + str(s) + " is an eigenvalue; moved to " +
                                                   str(moved));
      s = moved;
    }
    catch (const VanishingNormalizerError &e)
    {
      out.failure = "normalizer vanishes at " + str(s);
      if (normalizer_retry)
      {
        return out;
      }
      normalizer_retry = true;
      const cplx moved = s + config.perturbation * kDiagonal;
      out.notes.emplace_back("vanishing-normalizer", "normalizer " + str(e.normalizer()) +
                                                         " at " + str(s) + "; moved to " +
                                                         str(moved));
      s = moved;
    }
  }
}

}  // namespace

void SolverConfig::check() const
{
  if (p < 1)
  {
    throw Error("solver config: p must be at least 1");
  }
  if (!(tol > 0.0))
  {
    throw Error("solver config: tol must be positive");
  }
  if (!(collision_eps > 0.0))
  {
    throw Error("solver config: collision_eps must be positive");
  }
  if (!(perturbation > 0.0))
  {
    throw Error("solver config: perturbation must be positive");
  }
}

std::string to_string(Method m)
{
  return m == Method::dpse ? "dpse" : "ddpse";
}

std::string to_string(Matching m)
{
  return m == Matching::greedy_nearest ? "greedy-nearest" : "optimal-assignment";
}

Method parse_method(const std::string &s)
{
  if (s == "dpse")
  {
    return Method::dpse;
  }
  if (s == "ddpse")
  {
    return Method::ddpse;
  }
  throw Error("unknown method '" + s + "' (expected dpse or ddpse)");
}

Matching parse_matching(const std::string &s)
{
  if (s == "greedy-nearest" || s == "greedy")
  {
    return Matching::greedy_nearest;
  }
  if (s == "optimal-assignment" || s == "optimal")
  {
    return Matching::optimal_assignment;
  }
  throw Error("unknown matching '" + s + "'");
}

ComplexVector init_shifts(const ShiftSpec &spec, std::size_t p)
{
  ComplexVector out;
  switch (spec.pattern)
  {
  case ShiftPattern::fan:
    for (std::size_t k = 1; k <= p; ++k)
    {
      out.push_back(static_cast<double>(k) * spec.scale);
    }
    break;
  case ShiftPattern::explicit_list:
    out = spec.values;
    break;
  case ShiftPattern::ring:
    for (std::size_t k = 0; k < p; ++k)
    {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                           static_cast<double>(p);
      out.push_back(spec.center + spec.radius * std::polar(1.0, theta));
    }
    break;
  }
  return out;
}

std::vector<std::size_t> ShiftState::basis() const
{
  std::vector<std::size_t> b;
  for (std::size_t j = 0; j < p(); ++j)
  {
    if (in_basis(j))
    {
      b.push_back(j);
    }
  }
  return b;
}

std::size_t ShiftState::active_count() const
{
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), ColumnStatus::active));
}

ShiftState make_state(const DescriptorSystem &sys, ComplexVector shifts)
{
  if (shifts.empty())
  {
    throw Error("make_state: at least one shift is required");
  }
  const auto N = static_cast<Eigen::Index>(sys.order());
  const std::size_t p = shifts.size();
  ShiftState st;
  st.vector_shifts = shifts;
  st.shifts = std::move(shifts);
  st.X = DenseMatrix::Zero(N, static_cast<Eigen::Index>(p));
  st.Y = DenseMatrix::Zero(N, static_cast<Eigen::Index>(p));
  st.normalizers.assign(p, 0.0);
  st.status.assign(p, ColumnStatus::active);
  st.locked.assign(p, 0.0);
  st.duplicate_of.assign(p, std::nullopt);
  st.iterations.assign(p, 0);
  st.fresh.assign(p, false);
  st.algebraic_feedthrough = algebraic_feedthrough(sys);
  return st;
}

void refresh_columns(const DescriptorSystem &sys, ShiftState &state, const SolverConfig &config,
                     std::vector<SolverEvent> *events)
{
  auto log = [&](std::size_t j, std::string kind, std::string detail) {
    if (events)
    {
      events->push_back({state.iter, j, std::move(kind), std::move(detail)});
    }
  };

  std::vector<std::size_t> todo;
  for (std::size_t j = 0; j < state.p(); ++j)
  {
    if (!state.active(j) || state.fresh[j])
    {
      continue;
    }
    // Y^T E X is only invertible for distinct shifts: nudge the later of a close pair.
    for (std::size_t k = 0; k < j; ++k)
    {
      if (state.in_basis(k) && std::abs(state.shifts[j] - anchor(state, k)) < config.collision_eps)
      {
        const cplx moved = state.shifts[j] + config.perturbation * kDiagonal;
        log(j, "collision", "shift " + str(state.shifts[j]) + " within collision_eps of column " +
                                std::to_string(k) + "; moved to " + str(moved));
        state.shifts[j] = moved;
      }
    }
    todo.push_back(j);
  }

  std::vector<ColumnOutcome> outcomes(todo.size());
  parallel_for(todo, resolve_threads(config.threads), [&](std::size_t k) {
    outcomes[k] = compute_column(sys, state.shifts[todo[k]], config);
  });

  const auto N = static_cast<Eigen::Index>(sys.order());
  for (std::size_t k = 0; k < todo.size(); ++k)
  {
    const std::size_t j = todo[k];
    auto &o = outcomes[k];
    for (auto &[kind, detail] : o.notes)
    {
      log(j, kind, detail);
    }
    if (!o.ok)
    {
      state.status[j] = ColumnStatus::retired;
      log(j, "retired", o.failure + " after perturbation");
      continue;
    }
    const auto jj = static_cast<Eigen::Index>(j);
    for (Eigen::Index i = 0; i < N; ++i)
    {
      state.X(i, jj) = o.vectors.x[static_cast<std::size_t>(i)];
      state.Y(i, jj) = o.vectors.y[static_cast<std::size_t>(i)];
    }
    state.normalizers[j] = o.vectors.normalizer;
    state.shifts[j] = o.shift;
    state.vector_shifts[j] = o.shift;
    state.fresh[j] = true;
  }
}

Projection assemble_projection(const DescriptorSystem &sys, const ShiftState &state,
                               double collision_eps)
{
  return assemble_projection(sys, state, collision_eps, 1.0 / collision_eps);
}

Projection assemble_projection(const DescriptorSystem &sys, const ShiftState &state,
                               double /*collision_eps*/, double max_condition)
{
  Projection proj;
  proj.columns = state.basis();
  const auto b = static_cast<Eigen::Index>(proj.columns.size());
  if (b == 0)
  {
    throw Error("assemble_projection: no columns in the projection basis");
  }
  const auto n = static_cast<Eigen::Index>(sys.ndyn());
  DenseMatrix V(n, b), W(n, b);
  for (Eigen::Index c = 0; c < b; ++c)
  {
    const std::size_t j = proj.columns[static_cast<std::size_t>(c)];
    if (state.active(j) && !state.fresh[j])
    {
      throw Error("assemble_projection: column " + std::to_string(j) +
                  " was not refreshed for its current shift");
    }
    V.col(c) = state.X.col(static_cast<Eigen::Index>(j)).head(n);
    W.col(c) = state.Y.col(static_cast<Eigen::Index>(j)).head(n);
  }
  proj.YtEX = W.transpose() * V;
  proj.condition = condition_number(proj.YtEX);
  if (!(proj.condition <= max_condition))
  {
    std::ostringstream msg;
    msg << "assemble_projection: Y^T E X is ill-conditioned (cond " << proj.condition << ")";
    throw IllConditionedProjectionError(msg.str(), proj.condition);
  }

  // W^T b = e - delta * v, with v_j = 1 / nu_j; delta vanishes without algebraic coupling.
  DenseVector u(b);
  for (Eigen::Index c = 0; c < b; ++c)
  {
    const std::size_t j = proj.columns[static_cast<std::size_t>(c)];
    u(c) = 1.0 - state.algebraic_feedthrough / state.normalizers[j];
  }
  const DenseVector w = proj.YtEX.partialPivLu().solve(u);

  proj.F = DenseMatrix::Zero(b, b);
  for (Eigen::Index c = 0; c < b; ++c)
  {
    const std::size_t j = proj.columns[static_cast<std::size_t>(c)];
    if (state.active(j))
    {
      proj.F.col(c) = w / state.normalizers[j];
      proj.F(c, c) += state.vector_shifts[j];
    }
    else
    {
      proj.F(c, c) = state.locked[j];
    }
  }
  return proj;
}

ComplexVector dpse_step(const ShiftState &state, const Projection &proj, Matching matching)
{
  const ComplexVector eig = dense_eigenvalues(proj.F);
  const std::size_t b = proj.columns.size();
  ComplexVector old(b);
  std::vector<bool> lockedv(b);
  for (std::size_t r = 0; r < b; ++r)
  {
    const std::size_t j = proj.columns[r];
    lockedv[r] = !state.active(j);
    old[r] = lockedv[r] ? state.locked[j] : state.vector_shifts[j];
  }
  // std::vector<bool> has no contiguous storage.
  auto mask = std::make_unique<bool[]>(b);
  for (std::size_t r = 0; r < b; ++r)
  {
    mask[r] = lockedv[r];
  }
  const ComplexVector matched =
      match_shifts(old, eig, matching, std::span<const bool>(mask.get(), b));

  ComplexVector out = state.shifts;
  for (std::size_t r = 0; r < b; ++r)
  {
    out[proj.columns[r]] = matched[r];
  }
  return out;
}

ComplexVector ddpse_step(const ShiftState &state, const Projection &proj)
{
  ComplexVector out = state.shifts;
  for (std::size_t r = 0; r < proj.columns.size(); ++r)
  {
    const std::size_t j = proj.columns[r];
    if (state.active(j))
    {
      const auto rr = static_cast<Eigen::Index>(r);
      out[j] = proj.F(rr, rr);
    }
  }
  return out;
}

std::vector<ResidualCheck> check_convergence(const DescriptorSystem &sys,
                                             const ShiftState &state,
                                             std::span<const cplx> new_shifts, double tol)
{
  if (new_shifts.size() != state.p())
  {
    throw DimensionError("check_convergence: shift count mismatch");
  }
  const std::size_t n = sys.ndyn();
  std::vector<ResidualCheck> out(state.p());
  for (std::size_t j = 0; j < state.p(); ++j)
  {
    if (!state.active(j) || !state.fresh[j])
    {
      continue;
    }
    const cplx s = new_shifts[j];
    const auto x = column(state.X, j);
    const auto y = column(state.Y, j);
    ComplexVector rx = sys.jacobian().multiply(x);
    ComplexVector ry = sys.jacobian().multiply_transposed(y);
    for (std::size_t i = 0; i < n; ++i)
    {
      rx[i] -= s * x[i];
      ry[i] -= s * y[i];
    }
    auto &c = out[j];
    c.evaluated = true;
    c.right = norm2(rx) / norm2(x);
    c.left = norm2(ry) / norm2(y);
    c.converged = c.right <= tol && c.left <= tol;
  }
  return out;
}

void deflate(ShiftState &state, std::size_t j, cplx eigenvalue)
{
  if (j >= state.p())
  {
    throw DimensionError("deflate: column index out of range");
  }
  if (state.status[j] != ColumnStatus::active)
  {
    throw Error("deflate: column " + std::to_string(j) + " is not active");
  }
  state.status[j] = ColumnStatus::converged;
  state.locked[j] = eigenvalue;
  state.shifts[j] = eigenvalue;
}

cplx estimate_residue(const DescriptorSystem &sys, const ShiftState &state, std::size_t j)
{
  if (j >= state.p() || state.status[j] != ColumnStatus::converged)
  {
    throw Error("estimate_residue: column " + std::to_string(j) + " has not converged");
  }
  const cplx inner = dynamic_inner(column(state.Y, j), column(state.X, j), sys.ndyn());
  if (inner == 0.0 || !std::isfinite(std::abs(inner)))
  {
    throw Error("estimate_residue: y^T E x vanishes for column " + std::to_string(j));
  }
  return 1.0 / inner;
}

double dominance(cplx residue, cplx eigenvalue)
{
  const double re = std::abs(eigenvalue.real());
  if (re == 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(residue) / re;
}

double damping_ratio(cplx eigenvalue)
{
  const double mag = std::abs(eigenvalue);
  return mag == 0.0 ? 1.0 : -eigenvalue.real() / mag;
}

bool dominance_before(cplx a, double ma, cplx b, double mb)
{
  if (ma != mb)
  {
    return ma > mb;
  }
  if (std::abs(a.imag()) != std::abs(b.imag()))
  {
    return std::abs(a.imag()) < std::abs(b.imag());
  }
  return a.real() > b.real();
}

ComplexVector next_shifts(const DescriptorSystem &sys, std::span<const cplx> shifts,
                          const SolverConfig &config)
{
  ShiftState state = make_state(sys, ComplexVector(shifts.begin(), shifts.end()));
  refresh_columns(sys, state, config);
  const Projection proj = assemble_projection(sys, state, config.collision_eps);
  return config.method == Method::dpse ? dpse_step(state, proj, config.matching)
                                       : ddpse_step(state, proj);
}

bool RunReport::all_converged() const
{
  return std::all_of(columns.begin(), columns.end(),
                     [](const ColumnSummary &c) { return c.status == ColumnStatus::converged; });
}

std::size_t RunReport::converged_count() const
{
  return static_cast<std::size_t>(
      std::count_if(columns.begin(), columns.end(),
                    [](const ColumnSummary &c) { return c.status == ColumnStatus::converged; }));
}

RunReport run(const DescriptorSystem &sys, const SolverConfig &config,
              std::span<const cplx> initial_shifts)
{
  config.check();
  if (initial_shifts.size() != config.p)
  {
    throw DimensionError("run: config.p = " + std::to_string(config.p) + " but " +
                         std::to_string(initial_shifts.size()) + " initial shifts");
  }
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  RunReport report;
  report.config = config;
  report.initial_shifts.assign(initial_shifts.begin(), initial_shifts.end());

  ShiftState state = make_state(sys, report.initial_shifts);
  std::vector<ResidualCheck> final_checks(state.p());
  std::vector<double> converged_at(state.p(), 0.0);
  report.trajectories.push_back(state.shifts);

  auto log = [&](std::size_t j, std::string kind, std::string detail) {
    report.events.push_back({state.iter, j, std::move(kind), std::move(detail)});
  };
  // Converged values closer than this are treated as the same pole.
  auto same_pole = [&](cplx a, cplx b) {
    return std::abs(a - b) <= 100.0 * config.tol * std::max(1.0, std::abs(b));
  };

  while (state.iter < config.max_iter && state.active_count() > 0)
  {
    ++state.iter;
    refresh_columns(sys, state, config, &report.events);
    if (state.active_count() == 0)
    {
      break;
    }

    std::optional<Projection> proj;
    for (int attempt = 0; !proj; ++attempt)
    {
      try
      {
        // After one round of perturbation only numerical singularity is fatal.
        proj = attempt == 0 ? assemble_projection(sys, state, config.collision_eps)
                            : assemble_projection(sys, state, config.collision_eps,
                                                  kSingularCondition);
      }
      catch (const IllConditionedProjectionError &e)
      {
        // Closest pair involving an active column.
        const auto basis = state.basis();
        std::size_t worst = state.p(), partner = state.p();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a : basis)
        {
          if (!state.active(a))
          {
            continue;
          }
          for (std::size_t k : basis)
          {
            const double d = std::abs(state.shifts[a] - anchor(state, k));
            if (k != a && d < best && (a > k || !state.active(k)))
            {
              best = d;
              worst = a;
              partner = k;
            }
          }
        }
        if (worst == state.p())
        {
          // Single active column left; nothing to separate.
          worst = *std::find_if(basis.begin(), basis.end(),
                                [&](std::size_t j) { return state.active(j); });
          state.status[worst] = ColumnStatus::retired;
          log(worst, "retired", e.what());
        }
        else if (!state.active(partner) || attempt >= 3)
        {
          state.status[worst] = ColumnStatus::retired;
          if (!state.active(partner))
          {
            state.duplicate_of[worst] = partner;
          }
          log(worst, "retired",
              std::string(e.what()) + "; column tracks column " + std::to_string(partner));
        }
        else
        {
          const cplx moved = state.shifts[worst] +
                             config.perturbation * std::max(1.0, std::abs(state.shifts[worst])) *
                                 kDiagonal;
          log(worst, "ill-conditioned",
              std::string(e.what()) + "; moved shift to " + str(moved));
          state.shifts[worst] = moved;
          state.fresh[worst] = false;
          refresh_columns(sys, state, config, &report.events);
        }
        if (state.active_count() == 0)
        {
          break;
        }
      }
    }
    if (!proj)
    {
      break;
    }

    const ComplexVector next = config.method == Method::dpse
                                   ? dpse_step(state, *proj, config.matching)
                                   : ddpse_step(state, *proj);
    const auto checks = check_convergence(sys, state, next, config.tol);

    for (std::size_t j = 0; j < state.p(); ++j)
    {
      if (!state.active(j))
      {
        continue;
      }
      ++state.iterations[j];
      state.fresh[j] = false;
      if (checks[j].converged)
      {
        final_checks[j] = checks[j];
        converged_at[j] = elapsed();
        std::optional<std::size_t> twin;
        for (std::size_t k = 0; k < state.p(); ++k)
        {
          if (k != j && state.status[k] == ColumnStatus::converged && !state.duplicate_of[k] &&
              same_pole(next[j], state.locked[k]))
          {
            twin = k;
            break;
          }
        }
        deflate(state, j, next[j]);
        if (twin)
        {
          state.duplicate_of[j] = twin;
          log(j, "duplicate", "converged to " + str(next[j]) + ", already found by column " +
                                  std::to_string(*twin));
        }
        else
        {
          log(j, "converged", str(next[j]));
        }
      }
      else
      {
        state.shifts[j] = next[j];
      }
    }
    report.trajectories.push_back(state.shifts);
  }
  report.iterations = state.iter;

  for (std::size_t j = 0; j < state.p(); ++j)
  {
    ColumnSummary c;
    c.column = j;
    c.initial_shift = report.initial_shifts[j];
    c.final_shift = state.shifts[j];
    c.status = state.status[j];
    c.iterations = state.iterations[j];
    c.wall_time = state.status[j] == ColumnStatus::converged ? converged_at[j] : elapsed();
    report.columns.push_back(c);

    if (state.status[j] != ColumnStatus::converged)
    {
      continue;
    }
    PoleResult r;
    r.column = j;
    r.eigenvalue = state.locked[j];
    const auto x = column(state.X, j);
    const auto y = column(state.Y, j);
    r.right_vector.assign(x.begin(), x.end());
    r.left_vector.assign(y.begin(), y.end());
    r.residue = estimate_residue(sys, state, j);
    r.dominance = dominance(r.residue, r.eigenvalue);
    r.damping_ratio = damping_ratio(r.eigenvalue);
    r.iterations = state.iterations[j];
    r.residual_right = final_checks[j].right;
    r.residual_left = final_checks[j].left;
    r.wall_time = converged_at[j];
    r.duplicate_of = state.duplicate_of[j];
    report.poles.push_back(std::move(r));
  }
  std::stable_sort(report.poles.begin(), report.poles.end(),
                   [](const PoleResult &a, const PoleResult &b) {
                     return dominance_before(a.eigenvalue, a.dominance, b.eigenvalue, b.dominance);
                   });

  for (std::size_t a = 0; a < report.poles.size(); ++a)
  {
    for (std::size_t b = a + 1; b < report.poles.size(); ++b)
    {
      const cplx la = report.poles[a].eigenvalue;
      const cplx lb = report.poles[b].eigenvalue;
      if (std::abs(la.imag()) > 100.0 * config.tol && same_pole(la, std::conj(lb)))
      {
        report.conjugate_pairs.emplace_back(report.poles[a].column, report.poles[b].column);
      }
    }
  }
  report.wall_time = elapsed();
  return report;
}

}  // namespace dpse
