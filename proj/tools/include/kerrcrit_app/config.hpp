// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kerrcrit/bose_hubbard.hpp"
#include "kerrcrit/criticality.hpp"
#include "kerrcrit/cutoff.hpp"
#include "kerrcrit/model.hpp"
#include "kerrcrit/phase_space.hpp"
#include "kerrcrit/spectral.hpp"

namespace kerrcrit::app
{

using Json = nlohmann::ordered_json;

// Malformed or inconsistent configuration. The message starts with the dotted
// path of the offending key. Maps to exit status 2.
class ConfigInvalid : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A task could not complete. Maps to exit status 1.
class TaskFailed : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A task needs an artifact that is absent from the output directory.
class MissingInput : public TaskFailed
{
public:
  using TaskFailed::TaskFailed;
};

struct ModelBlock
{
  double delta = 0.0;
  double u_tilde = 1.0;
  double gamma = 1.0;
};

struct SweepBlock
{
  std::vector<double> sizes{1.0};
  double f_start = 0.0;
  double f_stop = 1.0;
  int f_points = 11;
  CutoffScope scope = CutoffScope::per_point;

  std::vector<double> drives() const;
};

struct CutoffBlock
{
  bool automatic = true;
  int fixed = 0;
  CutoffPolicy policy{};

  CutoffChoice choice() const;
};

// Single (N, F~) point used by the steady, gap and wigner tasks.
struct PointBlock
{
  double n_scale = 1.0;
  double f_tilde = 0.0;
};

struct WignerBlock
{
  int points = 201;
  std::optional<double> half_width;  // rescaled units; default follows the semiclassical density
  double peak_threshold = kDefaultPeakThreshold;
};

struct FitBlock
{
  std::vector<double> sizes;  // sizes entering power laws and extrapolation; empty = all sweep sizes
  int coarse_points = 21;
  double fc_tol = 1e-4;
  std::optional<std::pair<double, double>> bracket;
  int grid_points = 30;
  double lower_cut_frac = 0.2;
  double plateau_frac = 0.1;
  double far_frac = 0.1;
  ExtrapolationPolicy extrapolation{0.5, 3, false};
};

struct LatticeBlock
{
  double hopping = 0.0;
  int dimension = 1;
  double sites = 1.0;
};

enum class Task
{
  steady,
  gap,
  sweep,
  wigner,
  semiclassical,
  fit,
  extrapolate,
  mapcheck,
};

std::string_view to_string(Task task);

struct RunConfig
{
  ModelBlock model;
  SweepBlock sweep;
  CutoffBlock cutoff;
  SolverOptions solver;
  PointBlock point;
  WignerBlock wigner;
  FitBlock fit;
  LatticeBlock lattice;
  std::vector<Task> tasks;
  std::filesystem::path output = "kerrcrit-out";
  unsigned threads = 1;
  std::uint64_t seed = 20240611;  // only drives the --check subset

  ModelParams base() const;
  ModelParams point_params() const;
  CriticalOptions critical_options() const;
  BoseHubbardParams lattice_params() const;
};

// Parses and validates a configuration document. Unknown keys, wrong types
// and out-of-range values raise ConfigInvalid naming the key.
RunConfig parse_config(const Json &doc);
RunConfig load_config(const std::filesystem::path &path);

// Normalized echo with every default filled in; parse_config(to_json(c))
// reproduces c.
Json to_json(const RunConfig &config);

}  // namespace kerrcrit::app
