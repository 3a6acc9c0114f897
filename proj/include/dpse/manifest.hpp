// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_MANIFEST_HPP
#define DPSE_MANIFEST_HPP

#include <filesystem>
#include <optional>

#include "dpse/descriptor.hpp"

namespace dpse
{

/// System manifest: a `key = value` text file naming the Matrix Market inputs.
///
///     jacobian = J.mtx
///     b = B.mtx
///     c = C.mtx
///     ndyn = 60
///     d_re = 0
///     d_im = 0
///     ground_truth = ground_truth.csv   # optional
///
/// Relative paths resolve against the manifest's directory. `#` starts a comment.
struct Manifest
{
  std::filesystem::path jacobian_path;
  std::filesystem::path b_path;
  std::filesystem::path c_path;
  std::size_t ndyn = 0;
  double d_re = 0.0;
  double d_im = 0.0;
  std::optional<std::filesystem::path> ground_truth_path;
};

Manifest read_manifest(const std::filesystem::path &path);
void write_manifest(const std::filesystem::path &path, const Manifest &m);

/// Loads and validates the referenced files.
DescriptorSystem load_system(const Manifest &m);

}  // namespace dpse

#endif  // DPSE_MANIFEST_HPP
