// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kerrcrit/criticality.hpp"
#include "kerrcrit_app/config.hpp"

namespace kerrcrit::app
{

// Writes through a temporary file in the same directory and renames it over
// the target, so readers never observe a partial file.
void write_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body);
void write_json(const std::filesystem::path &path, const Json &doc);
Json read_json(const std::filesystem::path &path);

// %.17g formatting; NaN and infinities print as nan / inf / -inf.
std::string format_real(double v);

// CSV field quoting for values that contain separators or quotes.
std::string csv_field(const std::string &s);
std::vector<std::string> split_csv_line(const std::string &line);

constexpr const char *kSweepHeader = "N,F_tilde,Re_lambda,Im_lambda,n_over_N,g2,cutoff,err";
void write_sweep_csv(std::ostream &out, const std::vector<SweepRecord> &records);

struct SweepRow
{
  double n_scale = 0.0;
  double f_tilde = 0.0;
  std::complex<double> lambda;
  double n_over_n = 0.0;
  double g2 = 0.0;
  int cutoff = 0;
  std::string err;
};
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path &path);

Json complex_json(std::complex<double> z);
// Doubles that may be NaN are written as null.
Json real_json(double v);

}  // namespace kerrcrit::app
