// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kerrcrit/cutoff.hpp"
#include "kerrcrit/model.hpp"
#include "kerrcrit/regression.hpp"
#include "kerrcrit/spectral.hpp"

namespace kerrcrit
{

enum class CutoffScope
{
  per_point,  // resolve the cutoff at every (N, F) point
  per_size,   // resolve once per N at the largest drive of the grid
};

struct SweepOptions
{
  CutoffChoice cutoff{};
  CutoffScope scope = CutoffScope::per_point;
  SolverOptions solver{};
  unsigned threads = 1;
};

struct SweepRecord
{
  double n_scale = 0.0;
  double f_tilde = 0.0;
  Complex lambda{};
  double n_rescaled = 0.0;
  double g2 = 0.0;
  int cutoff_used = 0;
  double wall_time = 0.0;
  double residual = 0.0;
  GapMethod method = GapMethod::dense;
  bool continuity_flag = false;  // gap jumped by more than 0.2 on a fine grid
  std::string err;               // empty on success, else "<ErrorType>: message"

  bool ok() const { return err.empty(); }
};

// Gap and observables at every (N, F) pair, ordered by (N, F) in the order
// given. Failures are recorded in SweepRecord::err and never abort the sweep.
std::vector<SweepRecord> sweep_gap(const ModelParams &base, const std::vector<double> &sizes,
                                   const std::vector<double> &drives, const SweepOptions &options = {});

// Marks records whose gap moves by more than max_jump between neighbouring
// drives spaced by at most max_spacing.
void flag_continuity(std::vector<SweepRecord> &records, double max_spacing = 0.01, double max_jump = 0.2);

struct MinimumSearch
{
  double x = 0.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> samples;  // every evaluation, in call order
};

// Coarse grid followed by golden-section refinement of the best coarse
// cell until its width is below tol. Throws NoMinimumInBracket when the
// coarse minimum sits on the bracket boundary.
MinimumSearch bracketed_minimum(const std::function<double(double)> &g, double lo, double hi,
                                int coarse_points = 21, double tol = 1e-4, unsigned threads = 1);

struct FcOptions
{
  CutoffChoice cutoff{};
  SolverOptions solver{};
  int coarse_points = 21;
  double tol = 1e-4;
  unsigned threads = 1;
};

struct FcResult
{
  double n_scale = 0.0;
  double f_c = 0.0;
  double tau = 0.0;  // -1 / Re lambda(F_c)
  Complex lambda{};
  int cutoff = 0;
  // (F, -1/Re lambda) for every evaluated drive.
  std::vector<std::pair<double, double>> samples;
};

// Default bracket: the semiclassical bistability edges.
FcResult find_fc(const ModelParams &base, double n_scale, std::optional<std::pair<double, double>> bracket = {},
                 const FcOptions &options = {});

struct PowerLawWindow
{
  double plateau_frac = 0.1;  // drop points with tau >= (1 - plateau_frac) tau_c
  double far_frac = 0.1;      // drop this fraction of the largest distances
  double min_distance = 0.0;  // drop points with F - F_c below this
};

struct PowerLawFit
{
  double b = 0.0;
  double f = 0.0;
  double slope_magnitude = 0.0;  // b N
  double intercept = 0.0;
  double r2 = 0.0;
  double b_se = 0.0;
  double f_se = 0.0;
  double d_min = 0.0;  // window bounds on F - F_c actually used
  double d_max = 0.0;
  std::size_t points = 0;
};

// Regression of log(tau) on log(F - F_c) for one N: slope = -b N and
// intercept = b N log f. Throws WindowTooSmall with fewer than 6 usable
// records beyond F_c or fewer than 3 inside the window.
PowerLawFit fit_power_law(const std::vector<SweepRecord> &records, double f_c, double tau_c,
                          const PowerLawWindow &window = {});

struct ExponentialFit
{
  double kappa = 0.0;  // tau = tau0 exp(kappa N)
  double tau0 = 0.0;
  double r2 = 0.0;
  double kappa_se = 0.0;
  double log_tau0_se = 0.0;
};

ExponentialFit fit_exponential_tau(const std::vector<double> &sizes, const std::vector<double> &taus);

struct ExtrapolationPolicy
{
  double keep_fraction = 0.5;  // largest-N share of the data used
  std::size_t min_points = 3;
  // Weight points by 1/sigma^2 when sigmas are supplied. When false the
  // sigmas are only propagated into the reported error.
  bool weight_by_sigma = true;
};

struct Extrapolation
{
  double limit = 0.0;
  double std_error = 0.0;         // regression scatter combined with propagated sigmas
  double propagated_error = 0.0;  // contribution of the input sigmas alone
  double slope = 0.0;
  std::vector<double> sizes_used;
};

// Weighted linear regression against 1/N over the largest-N part of the
// data. sigmas, when given, weight points by 1/sigma^2.
Extrapolation extrapolate_1overN(const std::vector<double> &sizes, const std::vector<double> &values,
                                 const std::vector<double> &sigmas = {}, const ExtrapolationPolicy &policy = {});

struct CriticalOptions
{
  SweepOptions sweep{};
  CutoffPolicy cutoff_policy{};
  bool fixed_cutoff = false;
  int cutoff = 0;
  int coarse_points = 21;
  double fc_tol = 1e-4;
  std::optional<std::pair<double, double>> bracket;
  int grid_points = 30;          // uniform grid in F - F_c on (0, F+ - F_c]
  double lower_cut_frac = 0.2;   // extra window cut on F - F_c, relative to F+ - F_c
  PowerLawWindow window{};
  std::vector<double> fit_sizes; // sizes used for power laws and extrapolation; empty = all
  ExtrapolationPolicy extrapolation{0.5, 3, false};
};

struct CriticalRow
{
  double n_scale = 0.0;
  double f_c = 0.0;
  double tau = 0.0;
  Complex lambda_c{};
  int cutoff = 0;
  double plateau_tau = 0.0;  // max of -1/Re lambda over the refinement samples
  bool has_power_law = false;
  PowerLawFit power;
  double b_window_5 = 0.0;   // b with both exclusion fractions at 5%
  double b_window_20 = 0.0;  // and at 20%
  bool window_flag = false;  // b moved by 15% or more under those variations
  std::string err;
};

struct CriticalFit
{
  std::vector<CriticalRow> rows;
  double f_plus = 0.0;
  Extrapolation f_c_inf;
  Extrapolation b_inf;
  Extrapolation log_f_inf;
  double f_inf = 0.0;
  double f_inf_se = 0.0;
  ExponentialFit tau_fit;
  LinearFit slope_vs_n;  // b N against N
  CriticalOptions options;
};

struct CriticalAnalysis
{
  CriticalFit fit;
  std::vector<SweepRecord> records;  // power-law sweeps of all fitted sizes
};

CriticalAnalysis run_critical_analysis(const ModelParams &base, const std::vector<double> &sizes,
                                       const CriticalOptions &options = {});

}  // namespace kerrcrit
