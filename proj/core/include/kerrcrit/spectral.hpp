// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kerrcrit/cutoff.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/model.hpp"
#include "kerrcrit/steady_state.hpp"

namespace kerrcrit
{

struct SolverOptions
{
  // Dense diagonalization is used at or below this dimension, Krylov above.
  Eigen::Index dense_dim_threshold = 144;
  int krylov_subspace = 40;
  int krylov_nev = 12;
  double tolerance = 1e-11;
  int max_restarts = 300;

  void validate() const;
};

enum class GapMethod
{
  dense,
  krylov,
};

std::string_view to_string(GapMethod method);

struct GapResult
{
  Complex lambda;
  GapMethod method = GapMethod::dense;
  double residual = 0.0;  // ||L v - lambda v|| / ||v||
  int cutoff_used = 0;
  double relaxation_time = 0.0;  // -1 / Re(lambda)
};

// Full computation at one parameter point; the steady state comes with the
// gap since both share the constrained factorization.
struct PointAnalysis
{
  GapResult gap;
  DensityMatrix steady_state;
  Observables observables;
};

// Largest-Re nonzero eigenvalue selection shared by both paths: entries with
// |lambda| <= zero_tol are discarded, ties on Re are broken by smaller |Im|,
// and the Im >= 0 member of a conjugate pair is reported. Throws
// GapAmbiguous when the two leading candidates coincide within 1e-12.
Complex select_gap(const std::vector<Complex> &eigenvalues, double zero_tol);

GapResult liouvillian_gap(const Superoperator &L, const SolverOptions &options = {});
GapResult liouvillian_gap(const Superoperator &L, const ConstrainedSolver &solver,
                          const SolverOptions &options = {});
GapResult liouvillian_gap(const ModelParams &params, const CutoffChoice &cutoff,
                          const SolverOptions &options = {});

PointAnalysis analyze_point(const ModelParams &params, int cutoff, const SolverOptions &options = {});

// All (cutoff+1)^2 eigenvalues by dense diagonalization.
constexpr Eigen::Index kFullSpectrumMaxDim = 4096;
std::vector<Complex> full_spectrum(const Superoperator &L);
std::vector<Complex> full_spectrum(const ModelParams &params, int cutoff);

}  // namespace kerrcrit
