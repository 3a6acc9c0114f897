// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DPSE_REPORT_HPP
#define DPSE_REPORT_HPP

#include <iosfwd>
#include <string>

#include "dpse/solver.hpp"

namespace dpse
{

std::string to_string(ColumnStatus s);
ColumnStatus parse_column_status(const std::string &s);

/// JSON form of a run. Eigenvectors are not serialized. Complex tuples are [re, im]
/// pairs; an infinite dominance is written as the string "inf".
std::string report_to_json(const RunReport &report, int indent = 2);

/// Inverse of report_to_json. Throws ParseError on malformed input.
RunReport report_from_json(const std::string &text);
RunReport read_report(std::istream &in);

/// One row per converged pole:
/// re,im,residue_re,residue_im,dominance,damping_ratio,iterations,residual_right,residual_left
void write_poles_csv(std::ostream &out, const RunReport &report);

}  // namespace dpse

#endif  // DPSE_REPORT_HPP
