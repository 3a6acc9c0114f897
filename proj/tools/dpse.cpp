// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

// dpse: dominant poles of sparse descriptor systems.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dpse/commands.hpp"

namespace
{

using namespace dpse;

// Flags shared by poles and bench.
void add_shift_flags(CLI::App *app, cli::ShiftOptions &o, std::string &fan_scale,
                     std::string &ring_center)
{
  app->add_option("--p", o.p, "number of simultaneous shifts (ignored for an explicit list)")
      ->capture_default_str();
  app->add_option("--shifts", o.shifts,
                  "fan | ring | random | explicit list such as \"-0.5,-2.5\" or "
                  "\"-0.1+1i,-0.2+2i\"")
      ->capture_default_str();
  app->add_option("--fan-scale", fan_scale, "fan step: mu_k = k * scale")->capture_default_str();
  app->add_option("--ring-center", ring_center, "center of the ring pattern")
      ->capture_default_str();
  app->add_option("--ring-radius", o.ring_radius, "radius of the ring pattern")
      ->capture_default_str();
  app->add_option("--seed", o.seed, "seed for the random shift pattern")->capture_default_str();
}

void finish_shift_flags(cli::ShiftOptions &o, const std::string &fan_scale,
                        const std::string &ring_center)
{
  o.fan_scale = cli::parse_complex(fan_scale);
  o.ring_center = cli::parse_complex(ring_center);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Dominant poles of large sparse descriptor systems"};
  app.require_subcommand(1);

  // poles
  cli::PolesOptions poles;
  std::string poles_fan = "-0.05+0.5i", poles_center = "-1";
  std::string poles_json, poles_csv;
  auto *p = app.add_subcommand("poles", "compute dominant poles");
  p->add_option("manifest", poles.manifest, "system manifest")->required();
  p->add_option("--method", poles.method, "dpse | ddpse")->capture_default_str();
  p->add_option("--matching", poles.matching, "greedy | optimal")->capture_default_str();
  p->add_option("--tol", poles.tol, "relative residual tolerance")->capture_default_str();
  p->add_option("--max-iter", poles.max_iter, "iteration limit")->capture_default_str();
  p->add_option("--threads", poles.threads, "worker threads (0: DPSE_NUM_THREADS or 1)")
      ->capture_default_str();
  p->add_option("--out", poles_json, "write the JSON report here instead of stdout");
  p->add_option("--csv", poles_csv, "also write a per-pole CSV table");
  add_shift_flags(p, poles.shift, poles_fan, poles_center);

  // tf
  cli::TfOptions tf;
  auto *t = app.add_subcommand("tf", "sample the transfer function");
  t->add_option("manifest", tf.manifest, "system manifest")->required();
  t->add_option("--s", tf.s_values, "explicit complex sample points");
  t->add_option("--omega-min", tf.omega_min, "sweep start (rad/s)")->capture_default_str();
  t->add_option("--omega-max", tf.omega_max, "sweep end (rad/s)")->capture_default_str();
  t->add_option("--points", tf.points, "log-spaced sweep points")->capture_default_str();
  t->add_option("--compare-modal", tf.compare_modal,
                "add the k-term modal approximant and its relative error");

  // gen
  cli::GenCommandOptions gen;
  std::string gen_eigs;
  std::pair<double, double> damping{gen.gen.damping_min, gen.gen.damping_max};
  std::pair<double, double> freq{gen.gen.freq_min, gen.gen.freq_max};
  std::pair<double, double> reals{gen.gen.real_min, gen.gen.real_max};
  auto *g = app.add_subcommand("gen", "generate a synthetic system with known poles");
  g->add_option("--n-states", gen.gen.n_states, "dynamic variables")->capture_default_str();
  g->add_option("--n-algebraic", gen.gen.n_algebraic, "algebraic variables")
      ->capture_default_str();
  g->add_option("--pairs", gen.gen.complex_pairs, "complex conjugate pairs")
      ->capture_default_str();
  g->add_option("--damping-range", damping, "damping ratios of the pairs")->capture_default_str();
  g->add_option("--freq-range", freq, "imaginary parts of the pairs")->capture_default_str();
  g->add_option("--real-range", reals, "range of the real eigenvalues")->capture_default_str();
  g->add_option("--min-separation", gen.gen.min_separation, "minimum eigenvalue spacing")
      ->capture_default_str();
  g->add_option("--density", gen.gen.density, "coupling density in (0, 1]")
      ->capture_default_str();
  g->add_option("--seed", gen.gen.seed, "random seed")->capture_default_str();
  g->add_option("--eigenvalues", gen_eigs,
                "explicit spectrum; a value with Im > 0 also places its conjugate");
  g->add_flag("--unit-io", gen.gen.unit_io, "B = C = ones");
  g->add_flag("--zero-feedthrough", gen.gen.zero_feedthrough,
              "make the algebraic part contribute nothing to the feedthrough");
  bool no_mix = false;
  g->add_flag("--no-mix", no_mix, "keep the state matrix block diagonal");
  g->add_option("--out-dir", gen.out_dir, "output directory")->capture_default_str();

  // bench
  cli::BenchOptions bench;
  std::string bench_fan = "-0.05+0.5i", bench_center = "-1";
  bench.shift.p = 10;
  auto *b = app.add_subcommand("bench", "compare DPSE and DDPSE from identical shifts");
  b->add_option("manifest", bench.manifest, "system manifest")->required();
  b->add_option("--methods", bench.methods, "comma-separated methods")->capture_default_str();
  b->add_option("--repeats", bench.repeats, "runs per method; CPU is the minimum")
      ->capture_default_str();
  b->add_option("--matching", bench.matching, "greedy | optimal")->capture_default_str();
  b->add_option("--tol", bench.tol, "relative residual tolerance")->capture_default_str();
  b->add_option("--max-iter", bench.max_iter, "iteration limit")->capture_default_str();
  b->add_option("--threads", bench.threads, "worker threads")->capture_default_str();
  b->add_flag("--csv", bench.csv, "CSV instead of the text table");
  add_shift_flags(b, bench.shift, bench_fan, bench_center);

  // spy
  cli::SpyOptions spy;
  std::string spy_coords;
  auto *s = app.add_subcommand("spy", "sparsity summary and coordinate dump");
  s->add_option("manifest", spy.manifest, "system manifest")->required();
  s->add_flag("--summary-only", spy.summary_only, "omit the coordinate list");
  s->add_option("--coords", spy_coords, "write coordinates to this file");

  // polemap
  cli::PolemapOptions pm;
  std::string pm_out, pm_lines;
  auto *m = app.add_subcommand("polemap", "pole-map plot data from a JSON report");
  m->add_option("report", pm.report, "report written by 'poles'")->required();
  m->add_option("--out", pm_out, "output file (stdout when omitted)");
  m->add_option("--damping-lines", pm.damping_lines, "constant-damping rays, e.g. 0.05 0.1");
  m->add_option("--omega-max", pm.omega_max, "extent of the rays")->capture_default_str();
  m->add_option("--line-points", pm.line_points, "points per ray")->capture_default_str();
  m->add_option("--lines-out", pm_lines, "write the rays to this file");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return cli::kExitInput;
  }

  try
  {
    if (*p)
    {
      finish_shift_flags(poles.shift, poles_fan, poles_center);
      if (!poles_json.empty()) poles.json_out = poles_json;
      if (!poles_csv.empty()) poles.csv_out = poles_csv;
      return cli::cmd_poles(poles, std::cout, std::cerr);
    }
    if (*t)
    {
      return cli::cmd_tf(tf, std::cout, std::cerr);
    }
    if (*g)
    {
      gen.gen.damping_min = damping.first;
      gen.gen.damping_max = damping.second;
      gen.gen.freq_min = freq.first;
      gen.gen.freq_max = freq.second;
      gen.gen.real_min = reals.first;
      gen.gen.real_max = reals.second;
      gen.gen.mix = !no_mix;
      if (!gen_eigs.empty())
      {
        gen.gen.eigenvalues = cli::parse_complex_list(gen_eigs);
      }
      return cli::cmd_gen(gen, std::cout, std::cerr);
    }
    if (*b)
    {
      finish_shift_flags(bench.shift, bench_fan, bench_center);
      return cli::cmd_bench(bench, std::cout, std::cerr);
    }
    if (*s)
    {
      if (!spy_coords.empty()) spy.coords_out = spy_coords;
      return cli::cmd_spy(spy, std::cout, std::cerr);
    }
    if (*m)
    {
      if (!pm_out.empty()) pm.out = pm_out;
      if (!pm_lines.empty()) pm.lines_out = pm_lines;
      return cli::cmd_polemap(pm, std::cout, std::cerr);
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitInput;
  }
  return cli::kExitInput;
}
