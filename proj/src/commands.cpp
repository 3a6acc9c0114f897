// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "dpse/manifest.hpp"
#include "dpse/matrix_market.hpp"
#include "dpse/oracle.hpp"
#include "dpse/report.hpp"

namespace dpse::cli
{

namespace
{

double parse_real_part(const std::string &s, const std::string &whole)
{
  char *end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
  {
    throw ParseError("cannot parse complex number '" + whole + "'", 0);
  }
  return x;
}

// Coefficient in front of 'i': empty or a bare sign means 1.
double parse_imag_coeff(const std::string &s, const std::string &whole)
{
  if (s.empty() || s == "+")
  {
    return 1.0;
  }
  if (s == "-")
  {
    return -1.0;
  }
  return parse_real_part(s, whole);
}

std::string fmt(double x, int precision = 17)
{
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path &path)
{
  std::ofstream f(path);
  if (!f)
  {
    throw Error("cannot write " + path.string());
  }
  return f;
}

DescriptorSystem load(const std::filesystem::path &manifest)
{
  return load_system(read_manifest(manifest));
}

SolverConfig make_config(const std::string &method, const std::string &matching,
                         std::size_t p, double tol, std::size_t max_iter, std::size_t threads)
{
  SolverConfig c;
  c.method = parse_method(method);
  c.matching = parse_matching(matching);
  c.p = p;
  c.tol = tol;
  c.max_iter = max_iter;
  c.threads = threads;
  c.check();
  return c;
}

}  // namespace

cplx parse_complex(const std::string &text)
{
  std::string s;
  for (char ch : text)
  {
    if (!std::isspace(static_cast<unsigned char>(ch)))
    {
      s.push_back(ch);
    }
  }
  if (s.empty())
  {
    throw ParseError("empty complex number", 0);
  }
  const char last = s.back();
  if (last != 'i' && last != 'j')
  {
    return {parse_real_part(s, text), 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
  {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
    {
      split = k;
      break;
    }
  }
  if (split == std::string::npos)
  {
    return {0.0, parse_imag_coeff(body, text)};
  }
  return {parse_real_part(body.substr(0, split), text),
          parse_imag_coeff(body.substr(split), text)};
}

ComplexVector parse_complex_list(const std::string &text)
{
  ComplexVector out;
  std::string tok;
  auto flush = [&] {
    if (!tok.empty())
    {
      out.push_back(parse_complex(tok));
      tok.clear();
    }
  };
  for (char ch : text)
  {
    if (ch == ',' || ch == ';' || std::isspace(static_cast<unsigned char>(ch)))
    {
      flush();
    }
    else
    {
      tok.push_back(ch);
    }
  }
  flush();
  if (out.empty())
  {
    throw ParseError("empty list of complex values", 0);
  }
  return out;
}

std::string format_complex(cplx z, int precision)
{
  std::string s = fmt(z.real(), precision);
  const double im = z.imag();
  s += (std::signbit(im) ? "-" : "+") + fmt(std::abs(im), precision) + "i";
  return s;
}

ComplexVector make_shifts(const ShiftOptions &o)
{
  if (o.shifts == "fan")
  {
    ShiftSpec spec;
    spec.scale = o.fan_scale;
    return init_shifts(spec, o.p);
  }
  if (o.shifts == "ring")
  {
    ShiftSpec spec;
    spec.pattern = ShiftPattern::ring;
    spec.center = o.ring_center;
    spec.radius = o.ring_radius;
    return init_shifts(spec, o.p);
  }
  if (o.shifts == "random")
  {
    if (o.p == 0)
    {
      throw Error("p must be positive");
    }
    // Box spanned by the fan points k * scale, k = 1..p.
    const double p = static_cast<double>(o.p);
    const double re0 = std::min(o.fan_scale.real(), p * o.fan_scale.real());
    const double re1 = std::max(o.fan_scale.real(), p * o.fan_scale.real());
    const double im0 = std::min(o.fan_scale.imag(), p * o.fan_scale.imag());
    const double im1 = std::max(o.fan_scale.imag(), p * o.fan_scale.imag());
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> re(re0, re1), im(im0, im1);
    ComplexVector v(o.p);
    for (auto &z : v)
    {
      const double a = re(rng);
      z = {a, im(rng)};
    }
    return v;
  }
  ShiftSpec spec;
  spec.pattern = ShiftPattern::explicit_list;
  spec.values = parse_complex_list(o.shifts);
  return init_shifts(spec, spec.values.size());
}

// ---------------------------------------------------------------------------------------

int cmd_poles(const PolesOptions &o, std::ostream &out, std::ostream &err)
{
  RunReport report;
  try
  {
    const DescriptorSystem sys = load(o.manifest);
    const ComplexVector shifts = make_shifts(o.shift);
    const SolverConfig config =
        make_config(o.method, o.matching, shifts.size(), o.tol, o.max_iter, o.threads);
    report = run(sys, config, shifts);

    const std::string text = report_to_json(report);
    if (o.json_out)
    {
      open_out(*o.json_out) << text << '\n';
    }
    else
    {
      out << text << '\n';
    }
    if (o.csv_out)
    {
      auto f = open_out(*o.csv_out);
      write_poles_csv(f, report);
    }
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  if (!report.all_converged())
  {
    err << "warning: " << report.converged_count() << " of " << report.config.p
        << " columns converged\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_tf(const TfOptions &o, std::ostream &out, std::ostream &err)
{
  try
  {
    const DescriptorSystem sys = load(o.manifest);
    ComplexVector samples;
    if (!o.s_values.empty())
    {
      samples = parse_complex_list(o.s_values);
    }
    else
    {
      if (!(o.omega_min > 0.0) || !(o.omega_max >= o.omega_min) || o.points == 0)
      {
        throw Error("frequency sweep needs 0 < omega-min <= omega-max and points >= 1");
      }
      const double l0 = std::log10(o.omega_min), l1 = std::log10(o.omega_max);
      for (std::size_t k = 0; k < o.points; ++k)
      {
        const double t = o.points == 1 ? 0.0 : static_cast<double>(k) / (o.points - 1);
        samples.emplace_back(0.0, std::pow(10.0, l0 + t * (l1 - l0)));
      }
    }

    std::optional<oracle::ResidueTable> table;
    cplx d = 0.0;
    if (o.compare_modal > 0)
    {
      const StateSpaceSystem ss = reduce_to_state_space(sys);
      d = ss.d;
      table = oracle::residues(ss);
    }

    out << "s_re,s_im,h_re,h_im";
    if (table)
    {
      out << ",modal_re,modal_im,rel_err";
    }
    out << '\n';
    for (const cplx &s : samples)
    {
      cplx h;
      try
      {
        h = eval_transfer(sys, s).value;
      }
      catch (const SingularMatrixError &)
      {
        err << "warning: s = " << format_complex(s) << " is a pole; skipped\n";
        continue;
      }
      out << fmt(s.real()) << ',' << fmt(s.imag()) << ',' << fmt(h.real()) << ','
          << fmt(h.imag());
      if (table)
      {
        const cplx hm = oracle::modal_reconstruct(*table, d, s, o.compare_modal);
        const double rel = std::abs(h - hm) / std::max(std::abs(h), 1e-300);
        out << ',' << fmt(hm.real()) << ',' << fmt(hm.imag()) << ',' << fmt(rel);
      }
      out << '\n';
    }
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int cmd_gen(const GenCommandOptions &o, std::ostream &out, std::ostream &err)
{
  try
  {
    if (!(o.gen.density > 0.0 && o.gen.density <= 1.0))
    {
      throw Error("density must lie in (0, 1]");
    }
    if (o.gen.eigenvalues.empty() && o.gen.n_states == 0)
    {
      throw Error("n-states must be positive");
    }
    const GeneratedSystem g = generate_system(o.gen);
    const auto manifest = write_generated(g, o.out_dir);
    out << "manifest " << manifest.string() << '\n';
    out << "order " << g.system.order() << " (ndyn " << g.system.ndyn() << ", nalg "
        << g.system.nalg() << ")\n";
    out << "nnz " << g.system.jacobian().nnz() << '\n';
    out << "eigenvalues " << g.spectrum.size() << '\n';
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

std::vector<BenchBlock> run_bench(const DescriptorSystem &sys, const BenchOptions &o)
{
  std::vector<std::string> names;
  {
    std::string tok;
    std::istringstream ss(o.methods);
    while (std::getline(ss, tok, ','))
    {
      tok.erase(std::remove_if(tok.begin(), tok.end(),
                               [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                tok.end());
      if (!tok.empty())
      {
        names.push_back(tok);
      }
    }
  }
  if (names.empty())
  {
    throw Error("no methods given");
  }
  const std::size_t repeats = std::max<std::size_t>(1, o.repeats);
  const ComplexVector shifts = make_shifts(o.shift);

  std::vector<BenchBlock> blocks;
  for (const auto &name : names)
  {
    const SolverConfig config =
        make_config(name, o.matching, shifts.size(), o.tol, o.max_iter, o.threads);
    RunReport first;
    std::map<std::size_t, double> best;  // column -> min wall time to convergence
    for (std::size_t r = 0; r < repeats; ++r)
    {
      RunReport rep = run(sys, config, shifts);
      for (const auto &pole : rep.poles)
      {
        auto [it, inserted] = best.emplace(pole.column, pole.wall_time);
        if (!inserted)
        {
          it->second = std::min(it->second, pole.wall_time);
        }
      }
      if (r == 0)
      {
        first = std::move(rep);
      }
    }
    BenchBlock b;
    b.method = config.method;
    b.p = config.p;
    b.iterations = first.iterations;
    for (const auto &pole : first.poles)
    {
      if (pole.duplicate_of)
      {
        continue;
      }
      BenchRow row;
      row.eigenvalue = pole.eigenvalue;
      row.iterations = pole.iterations;
      row.cpu = best.count(pole.column) ? best[pole.column] : pole.wall_time;
      b.rows.push_back(row);
      if (pole.eigenvalue.imag() > 0.0)
      {
        ++b.upper_half;
      }
    }
    b.converged = b.rows.size();
    std::stable_sort(b.rows.begin(), b.rows.end(), [](const BenchRow &x, const BenchRow &y) {
      return x.iterations != y.iterations ? x.iterations < y.iterations : x.cpu < y.cpu;
    });
    for (std::size_t k = 0; k < b.rows.size(); ++k)
    {
      b.rows[k].k = k + 1;
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

void print_bench(std::ostream &out, const std::vector<BenchBlock> &blocks, bool csv)
{
  if (csv)
  {
    out << "method,k,iter,cpu,re,im\n";
    for (const auto &b : blocks)
    {
      for (const auto &r : b.rows)
      {
        out << to_string(b.method) << ',' << r.k << ',' << r.iterations << ',' << fmt(r.cpu, 6)
            << ',' << fmt(r.eigenvalue.real()) << ',' << fmt(r.eigenvalue.imag()) << '\n';
      }
    }
    return;
  }
  char line[160];
  for (std::size_t i = 0; i < blocks.size(); ++i)
  {
    const auto &b = blocks[i];
    if (i > 0)
    {
      out << '\n';
    }
    std::string name = to_string(b.method);
    std::transform(name.begin(), name.end(), name.begin(), ::toupper);
    out << name << "  p=" << b.p << "  converged " << b.converged << "/" << b.p
        << "  upper half-plane " << b.upper_half << "  iterations " << b.iterations << '\n';
    out << "    k  ITER     CPU [s]  eigenvalue\n";
    for (const auto &r : b.rows)
    {
      std::snprintf(line, sizeof(line), "%5zu %5zu %11.6f  %s\n", r.k, r.iterations, r.cpu,
                    format_complex(r.eigenvalue, 8).c_str());
      out << line;
    }
  }
}

int cmd_bench(const BenchOptions &o, std::ostream &out, std::ostream &err)
{
  try
  {
    const DescriptorSystem sys = load(o.manifest);
    print_bench(out, run_bench(sys, o), o.csv);
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------------------

SpySummary spy_summary(const SparseMatrix &J, std::size_t ndyn)
{
  SpySummary s;
  s.order = J.rows();
  s.ndyn = ndyn;
  s.nnz = J.nnz();
  const double n = static_cast<double>(J.rows());
  s.density_percent = n > 0 ? 100.0 * static_cast<double>(J.nnz()) / (n * n) : 0.0;
  const auto &cp = J.col_ptr();
  const auto &ri = J.row_idx();
  for (std::size_t j = 0; j < J.cols(); ++j)
  {
    for (int k = cp[j]; k < cp[j + 1]; ++k)
    {
      const bool top = static_cast<std::size_t>(ri[k]) < ndyn;
      const bool left = j < ndyn;
      s.block_nnz[top ? (left ? 0 : 1) : (left ? 2 : 3)]++;
    }
  }
  return s;
}

int cmd_spy(const SpyOptions &o, std::ostream &out, std::ostream &err)
{
  try
  {
    const Manifest m = read_manifest(o.manifest);
    const SparseMatrix J = read_matrix_market(m.jacobian_path);
    if (!J.square() || m.ndyn > J.rows())
    {
      throw DimensionError("Jacobian shape does not match ndyn");
    }
    const SpySummary s = spy_summary(J, m.ndyn);
    out << "# order " << s.order << '\n';
    out << "# ndyn " << s.ndyn << '\n';
    out << "# nnz " << s.nnz << '\n';
    out << "# density " << fmt(s.density_percent, 4) << "%\n";
    for (int b = 0; b < 4; ++b)
    {
      out << "# nnz_J" << b + 1 << ' ' << s.block_nnz[b] << '\n';
    }
    if (o.summary_only)
    {
      return kExitOk;
    }
    std::ofstream file;
    if (o.coords_out)
    {
      file = open_out(*o.coords_out);
    }
    std::ostream &dst = o.coords_out ? static_cast<std::ostream &>(file) : out;
    dst << "row,col\n";
    const auto &cp = J.col_ptr();
    const auto &ri = J.row_idx();
    for (std::size_t j = 0; j < J.cols(); ++j)
    {
      for (int k = cp[j]; k < cp[j + 1]; ++k)
      {
        dst << ri[k] + 1 << ',' << j + 1 << '\n';
      }
    }
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int cmd_polemap(const PolemapOptions &o, std::ostream &out, std::ostream &err)
{
  try
  {
    std::ifstream in(o.report);
    if (!in)
    {
      throw ParseError("cannot open report " + o.report.string(), 0);
    }
    const RunReport r = read_report(in);

    std::ofstream file;
    if (o.out)
    {
      file = open_out(*o.out);
    }
    std::ostream &dst = o.out ? static_cast<std::ostream &>(file) : out;
    dst << "re,im,dominance,damping_ratio,converged\n";
    for (const auto &p : r.poles)
    {
      dst << fmt(p.eigenvalue.real()) << ',' << fmt(p.eigenvalue.imag()) << ','
          << fmt(p.dominance) << ',' << fmt(damping_ratio(p.eigenvalue)) << ",1\n";
    }
    // Columns that never converged are plotted at their last shift.
    for (const auto &c : r.columns)
    {
      if (c.status != ColumnStatus::converged)
      {
        dst << fmt(c.final_shift.real()) << ',' << fmt(c.final_shift.imag()) << ",nan,"
            << fmt(damping_ratio(c.final_shift)) << ",0\n";
      }
    }

    if (!o.damping_lines.empty())
    {
      std::ofstream lf;
      if (o.lines_out)
      {
        lf = open_out(*o.lines_out);
      }
      else
      {
        dst << '\n';
      }
      std::ostream &ldst = o.lines_out ? static_cast<std::ostream &>(lf) : dst;
      ldst << "zeta,omega,re,im\n";
      const std::size_t n = std::max<std::size_t>(2, o.line_points);
      for (double zeta : o.damping_lines)
      {
        if (!(zeta >= 0.0 && zeta <= 1.0))
        {
          throw Error("damping ratios must lie in [0, 1]");
        }
        for (std::size_t k = 0; k < n; ++k)
        {
          const double w = o.omega_max * static_cast<double>(k) / static_cast<double>(n - 1);
          ldst << fmt(zeta) << ',' << fmt(w) << ',' << fmt(-zeta * w) << ','
               << fmt(w * std::sqrt(1.0 - zeta * zeta)) << '\n';
        }
      }
    }
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace dpse::cli
