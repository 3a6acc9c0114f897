// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpse/manifest.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>

#include "dpse/matrix_market.hpp"

namespace dpse
{

namespace
{

std::string trim(const std::string &s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string &v, const std::string &key, std::size_t line)
{
  char *end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
  {
    throw ParseError("manifest: '" + key + "' is not a number", line);
  }
  return x;
}

std::string format_double(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open manifest " + path.string(), 0);
  }
  const auto base = path.parent_path();
  auto resolve = [&](const std::string &v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base / p;
  };

  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ParseError("manifest: expected 'key = value'", lineno);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
    {
      throw ParseError("manifest: empty key or value", lineno);
    }
    kv[key] = {value, lineno};
  }

  auto require = [&](const std::string &key) -> const std::pair<std::string, std::size_t> & {
    auto it = kv.find(key);
    if (it == kv.end())
    {
      throw ParseError(path.string() + ": manifest is missing '" + key + "'", 0);
    }
    return it->second;
  };

  Manifest m;
  m.jacobian_path = resolve(require("jacobian").first);
  m.b_path = resolve(require("b").first);
  m.c_path = resolve(require("c").first);
  {
    const auto &[v, l] = require("ndyn");
    char *end = nullptr;
    const long long n = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || n < 1)
    {
      throw ParseError("manifest: ndyn must be a positive integer", l);
    }
    m.ndyn = static_cast<std::size_t>(n);
  }
  if (auto it = kv.find("d_re"); it != kv.end())
  {
    m.d_re = parse_real(it->second.first, "d_re", it->second.second);
  }
  if (auto it = kv.find("d_im"); it != kv.end())
  {
    m.d_im = parse_real(it->second.first, "d_im", it->second.second);
  }
  if (auto it = kv.find("ground_truth"); it != kv.end())
  {
    m.ground_truth_path = resolve(it->second.first);
  }
  return m;
}

void write_manifest(const std::filesystem::path &path, const Manifest &m)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write " + path.string());
  }
  // Paths are written relative to the manifest when they live next to it.
  const auto base = path.parent_path();
  auto rel = [&](const std::filesystem::path &p) {
    return p.parent_path() == base ? p.filename().string() : p.string();
  };
  out << "# descriptor system manifest\n";
  out << "jacobian = " << rel(m.jacobian_path) << '\n';
  out << "b = " << rel(m.b_path) << '\n';
  out << "c = " << rel(m.c_path) << '\n';
  out << "ndyn = " << m.ndyn << '\n';
  out << "d_re = " << format_double(m.d_re) << '\n';
  out << "d_im = " << format_double(m.d_im) << '\n';
  if (m.ground_truth_path)
  {
    out << "ground_truth = " << rel(*m.ground_truth_path) << '\n';
  }
}

DescriptorSystem load_system(const Manifest &m)
{
  SparseMatrix J = read_matrix_market(m.jacobian_path);
  ComplexVector B = read_vector_market(m.b_path);
  ComplexVector C = read_vector_market(m.c_path);
  if (!J.square())
  {
    throw DimensionError(m.jacobian_path.string() + ": Jacobian is not square");
  }
  if (m.ndyn > J.rows())
  {
    throw DimensionError("manifest: ndyn = " + std::to_string(m.ndyn) + " exceeds order " +
                         std::to_string(J.rows()));
  }
  return DescriptorSystem(std::move(J), m.ndyn, std::move(B), std::move(C),
                          cplx(m.d_re, m.d_im));
}

}  // namespace dpse
