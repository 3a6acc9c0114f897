// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace dpse
{

using nlohmann::json;

namespace
{

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx unpair(const json &j)
{
  if (!j.is_array() || j.size() != 2)
  {
    throw ParseError("report: expected [re, im] pair", 0);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json pairs(const ComplexVector &v)
{
  json a = json::array();
  for (const cplx &z : v)
  {
    a.push_back(pair(z));
  }
  return a;
}

ComplexVector unpairs(const json &j)
{
  ComplexVector v;
  for (const auto &e : j)
  {
    v.push_back(unpair(e));
  }
  return v;
}

// nlohmann writes non-finite numbers as null, so they get a string form.
json real(double x)
{
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  if (std::isnan(x))
  {
    return "nan";
  }
  return x;
}

double unreal(const json &j)
{
  if (j.is_string())
  {
    const auto s = j.get<std::string>();
    if (s == "inf")
    {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf")
    {
      return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan")
    {
      return std::numeric_limits<double>::quiet_NaN();
    }
    throw ParseError("report: bad number '" + s + "'", 0);
  }
  return j.get<double>();
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(ColumnStatus s)
{
  switch (s)
  {
    case ColumnStatus::active: return "active";
    case ColumnStatus::converged: return "converged";
    case ColumnStatus::retired: return "retired";
  }
  return "active";
}

ColumnStatus parse_column_status(const std::string &s)
{
  if (s == "active") return ColumnStatus::active;
  if (s == "converged") return ColumnStatus::converged;
  if (s == "retired") return ColumnStatus::retired;
  throw ParseError("report: unknown column status '" + s + "'", 0);
}

std::string report_to_json(const RunReport &r, int indent)
{
  json j;
  j["method"] = to_string(r.config.method);
  j["config"] = {
      {"method", to_string(r.config.method)},
      {"p", r.config.p},
      {"tol", r.config.tol},
      {"max_iter", r.config.max_iter},
      {"matching", to_string(r.config.matching)},
      {"collision_eps", r.config.collision_eps},
      {"perturbation", r.config.perturbation},
      {"threads", r.config.threads},
  };
  j["initial_shifts"] = pairs(r.initial_shifts);
  j["iterations"] = r.iterations;
  j["wall_time"] = r.wall_time;
  j["converged"] = r.converged_count();
  j["all_converged"] = r.all_converged();

  json poles = json::array();
  for (const auto &p : r.poles)
  {
    json e = {
        {"column", p.column},
        {"re", p.eigenvalue.real()},
        {"im", p.eigenvalue.imag()},
        {"residue_re", p.residue.real()},
        {"residue_im", p.residue.imag()},
        {"dominance", real(p.dominance)},
        {"damping_ratio", p.damping_ratio},
        {"iterations", p.iterations},
        {"residual_right", real(p.residual_right)},
        {"residual_left", real(p.residual_left)},
        {"wall_time", p.wall_time},
    };
    e["duplicate_of"] = p.duplicate_of ? json(*p.duplicate_of) : json(nullptr);
    poles.push_back(std::move(e));
  }
  j["poles"] = std::move(poles);

  json cols = json::array();
  for (const auto &c : r.columns)
  {
    cols.push_back({
        {"column", c.column},
        {"initial_shift", pair(c.initial_shift)},
        {"final_shift", pair(c.final_shift)},
        {"status", to_string(c.status)},
        {"iterations", c.iterations},
        {"wall_time", c.wall_time},
    });
  }
  j["columns"] = std::move(cols);

  json events = json::array();
  for (const auto &e : r.events)
  {
    events.push_back(
        {{"iteration", e.iteration}, {"column", e.column}, {"kind", e.kind}, {"detail", e.detail}});
  }
  j["events"] = std::move(events);

  json traj = json::array();
  for (const auto &t : r.trajectories)
  {
    traj.push_back(pairs(t));
  }
  j["trajectories"] = std::move(traj);

  json conj = json::array();
  for (const auto &[a, b] : r.conjugate_pairs)
  {
    conj.push_back({a, b});
  }
  j["conjugate_pairs"] = std::move(conj);
  return j.dump(indent);
}

RunReport report_from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ParseError(std::string("report: ") + e.what(), 0);
  }
  if (!j.is_object())
  {
    throw ParseError("report: top level is not an object", 0);
  }
  RunReport r;
  try
  {
    if (j.contains("config"))
    {
      const auto &c = j.at("config");
      r.config.method = parse_method(c.at("method").get<std::string>());
      r.config.p = c.at("p").get<std::size_t>();
      r.config.tol = c.at("tol").get<double>();
      r.config.max_iter = c.at("max_iter").get<std::size_t>();
      r.config.matching = parse_matching(c.at("matching").get<std::string>());
      r.config.collision_eps = c.value("collision_eps", r.config.collision_eps);
      r.config.perturbation = c.value("perturbation", r.config.perturbation);
      r.config.threads = c.value("threads", r.config.threads);
    }
    r.initial_shifts = unpairs(j.value("initial_shifts", json::array()));
    r.iterations = j.value("iterations", std::size_t{0});
    r.wall_time = j.value("wall_time", 0.0);
    for (const auto &e : j.value("poles", json::array()))
    {
      PoleResult p;
      p.column = e.value("column", std::size_t{0});
      p.eigenvalue = {e.at("re").get<double>(), e.at("im").get<double>()};
      p.residue = {e.value("residue_re", 0.0), e.value("residue_im", 0.0)};
      p.dominance = e.contains("dominance") ? unreal(e.at("dominance")) : 0.0;
      p.damping_ratio = e.contains("damping_ratio") ? e.at("damping_ratio").get<double>()
                                                    : damping_ratio(p.eigenvalue);
      p.iterations = e.value("iterations", std::size_t{0});
      p.residual_right = e.contains("residual_right") ? unreal(e.at("residual_right")) : 0.0;
      p.residual_left = e.contains("residual_left") ? unreal(e.at("residual_left")) : 0.0;
      p.wall_time = e.value("wall_time", 0.0);
      if (e.contains("duplicate_of") && !e.at("duplicate_of").is_null())
      {
        p.duplicate_of = e.at("duplicate_of").get<std::size_t>();
      }
      r.poles.push_back(std::move(p));
    }
    for (const auto &e : j.value("columns", json::array()))
    {
      ColumnSummary c;
      c.column = e.at("column").get<std::size_t>();
      c.initial_shift = unpair(e.at("initial_shift"));
      c.final_shift = unpair(e.at("final_shift"));
      c.status = parse_column_status(e.at("status").get<std::string>());
      c.iterations = e.value("iterations", std::size_t{0});
      c.wall_time = e.value("wall_time", 0.0);
      r.columns.push_back(c);
    }
    for (const auto &e : j.value("events", json::array()))
    {
      r.events.push_back({e.at("iteration").get<std::size_t>(), e.at("column").get<std::size_t>(),
                          e.at("kind").get<std::string>(), e.value("detail", std::string{})});
    }
    for (const auto &t : j.value("trajectories", json::array()))
    {
      r.trajectories.push_back(unpairs(t));
    }
    for (const auto &c : j.value("conjugate_pairs", json::array()))
    {
      r.conjugate_pairs.emplace_back(c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>());
    }
  }
  catch (const json::exception &e)
  {
    throw ParseError(std::string("report: ") + e.what(), 0);
  }
  catch (const ParseError &)
  {
    throw;
  }
  catch (const Error &e)
  {
    throw ParseError(std::string("report: ") + e.what(), 0);
  }
  return r;
}

RunReport read_report(std::istream &in)
{
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return report_from_json(text);
}

void write_poles_csv(std::ostream &out, const RunReport &r)
{
  out << "re,im,residue_re,residue_im,dominance,damping_ratio,iterations,residual_right,"
         "residual_left\n";
  for (const auto &p : r.poles)
  {
    out << fmt(p.eigenvalue.real()) << ',' << fmt(p.eigenvalue.imag()) << ','
        << fmt(p.residue.real()) << ',' << fmt(p.residue.imag()) << ',' << fmt(p.dominance)
        << ',' << fmt(p.damping_ratio) << ',' << p.iterations << ',' << fmt(p.residual_right)
        << ',' << fmt(p.residual_left) << '\n';
  }
}

}  // namespace dpse
