// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/spectral.hpp"
#include "kerrcrit/steady_state.hpp"

using namespace kerrcrit;

namespace
{

SolverOptions dense_only()
{
  SolverOptions o;
  o.dense_dim_threshold = kFullSpectrumMaxDim;
  return o;
}

SolverOptions krylov_only()
{
  SolverOptions o;
  o.dense_dim_threshold = 0;
  return o;
}

}  // namespace

TEST(SelectGap, ConjugatePairReportsPositiveImaginaryPart)
{
  EXPECT_EQ(select_gap({{0.0, 0.0}, {-0.1, -0.5}, {-0.1, 0.5}, {-1.0, 0.0}}, 1e-9), Complex(-0.1, 0.5));
}

TEST(SelectGap, TieOnRealPartPrefersSmallerImaginaryPart)
{
  EXPECT_EQ(select_gap({{0.0, 0.0}, {-0.1, 0.5}, {-0.1, -0.5}, {-0.1, 0.0}}, 1e-9), Complex(-0.1, 0.0));
}

TEST(SelectGap, DiscardsNearZeroModes)
{
  EXPECT_EQ(select_gap({{1e-12, 0.0}, {-0.3, 0.0}, {-0.2, 1.0}, {-0.2, -1.0}}, 1e-9), Complex(-0.2, 1.0));
}

TEST(SelectGap, CoincidentModesAreAmbiguous)
{
  EXPECT_THROW(select_gap({{0.0, 0.0}, {-0.1, 0.0}, {-0.1 + 1e-13, 0.0}}, 1e-9), GapAmbiguous);
}

TEST(Gap, UndrivenCavity)
{
  for (double delta : {0.8, 2.0, -1.5})
  {
    const ModelParams p{delta, 1.0, 0.0, 1.0, 1.0};
    const GapResult g = liouvillian_gap(p, CutoffChoice::fixed_at(6));
    EXPECT_LT(std::abs(g.lambda - Complex(-0.5, std::abs(delta))), 1e-10) << delta;
    EXPECT_NEAR(g.relaxation_time, 2.0, 1e-9);
  }
}

TEST(Gap, DegenerateSlowestModesAreAmbiguous)
{
  // At zero detuning both coherences decay at exactly gamma / 2.
  EXPECT_THROW(liouvillian_gap(ModelParams{0.0, 1.0, 0.0, 1.0, 1.0}, CutoffChoice::fixed_at(6)), GapAmbiguous);
}

TEST(Gap, UndrivenCavityKrylov)
{
  const ModelParams p{2.0, 1.0, 0.0, 1.0, 1.0};
  const GapResult g = liouvillian_gap(p, CutoffChoice::fixed_at(14), krylov_only());
  EXPECT_EQ(g.method, GapMethod::krylov);
  EXPECT_LT(std::abs(g.lambda - Complex(-0.5, 2.0)), 1e-10);
}

TEST(Gap, LinearCavityIndependentOfDrive)
{
  std::vector<Complex> gaps;
  for (double f : {0.0, 1.0, 3.0})
  {
    const ModelParams p{2.0, 0.0, f, 1.0, 1.0};
    gaps.push_back(liouvillian_gap(p, CutoffChoice{}).lambda);
  }
  for (const Complex &g : gaps)
  {
    EXPECT_LT(std::abs(g - gaps[0]), 1e-8);
    EXPECT_LT(std::abs(g - Complex(-0.5, 2.0)), 1e-8);
  }
}

TEST(Gap, DenseAndKrylovAgree)
{
  for (double n : {1.0, 2.0})
  {
    const ModelParams p{2.0, 1.0, 0.93, 1.0, n};
    const int c = auto_cutoff(p).cutoff;
    const Superoperator L = build_liouvillian(p, c);
    const GapResult d = liouvillian_gap(L, dense_only());
    const GapResult k = liouvillian_gap(L, krylov_only());
    EXPECT_EQ(d.method, GapMethod::dense);
    EXPECT_EQ(k.method, GapMethod::krylov);
    EXPECT_LT(std::abs(d.lambda - k.lambda), 1e-8 * std::abs(d.lambda)) << n;
    EXPECT_LT(d.residual, 1e-8);
    EXPECT_LT(k.residual, 1e-8);
    EXPECT_EQ(d.cutoff_used, c);
  }
}

TEST(Gap, SlowestModeFromFullSpectrum)
{
  const ModelParams p{2.0, 1.0, 0.5, 1.0, 1.0};
  const std::vector<Complex> ev = full_spectrum(p, 20);
  const auto zero = std::min_element(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  EXPECT_LT(std::abs(*zero), 1e-10);
  double best = -1e300;
  for (const Complex &e : ev)
  {
    if (std::abs(e) > 1e-8)
    {
      best = std::max(best, e.real());
    }
  }
  const GapResult g = liouvillian_gap(build_liouvillian(p, 20), krylov_only());
  EXPECT_NEAR(g.lambda.real(), best, 1e-9);
}

TEST(Spectrum, StructuralProperties)
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial)
  {
    const ModelParams p{-2.0 + 5.0 * u(rng), 1.5 * u(rng), 1.5 * u(rng), 0.5 + u(rng), 1.0 + 2.0 * u(rng)};
    const int c = 5 + trial;
    const Superoperator L = build_liouvillian(p, c);
    const std::vector<Complex> ev = full_spectrum(L);
    const double scale = std::max(1.0, L.norm());
    Complex sum(0.0, 0.0);
    for (const Complex &e : ev)
    {
      sum += e;
      EXPECT_LE(e.real(), 1e-10 * scale);
      const auto partner = std::min_element(ev.begin(), ev.end(), [&](Complex a, Complex b)
                                            { return std::abs(a - std::conj(e)) < std::abs(b - std::conj(e)); });
      EXPECT_LT(std::abs(*partner - std::conj(e)), 1e-8 * scale);
    }
    const Complex trace = Eigen::MatrixXcd(L.matrix()).trace();
    EXPECT_LT(std::abs(sum - trace), 1e-9 * std::abs(trace));
  }
}

TEST(Spectrum, TooLargeThrows)
{
  EXPECT_THROW(full_spectrum(ModelParams{2.0, 1.0, 0.5, 1.0, 1.0}, 64), DimensionTooLarge);
}

TEST(SolverOptions, Validation)
{
  SolverOptions o;
  o.krylov_subspace = 10;
  EXPECT_THROW(o.validate(), InvalidParameter);
}

TEST(AnalyzePoint, CarriesStateAndObservables)
{
  const ModelParams p{2.0, 1.0, 0.93, 1.0, 2.0};
  const PointAnalysis a = analyze_point(p, 18);
  EXPECT_TRUE(a.steady_state.validity().ok());
  EXPECT_NEAR(a.observables.n, a.steady_state.moment(1, 1).real(), 1e-12);
  EXPECT_EQ(a.gap.cutoff_used, 18);
  EXPECT_NEAR(a.gap.relaxation_time, -1.0 / a.gap.lambda.real(), 1e-12 * a.gap.relaxation_time);
}

TEST(Gap, TimeEvolutionDecayMatchesGap)
{
  // Late-time decay of the field deviation from its steady value.
  const ModelParams p{0.8, 1.0, 0.5, 1.0, 5.0};
  const int c = auto_cutoff(p).cutoff;
  const Superoperator L = build_liouvillian(p, c);
  const ConstrainedSolver solver(L);
  const GapResult g = liouvillian_gap(L, solver);
  const Complex a_ss = solver.steady_state().moment(0, 1);

  const double t1 = 6.0;
  const double t2 = 12.0;
  const double period = 2.0 * M_PI / std::max(0.1, g.lambda.imag());
  const Trajectory traj = time_evolve(L, DensityMatrix::vacuum(c), t2 + period, 2e-3, {5, 1e-8});
  auto envelope = [&](double t0)
  {
    double m = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k)
    {
      if (traj.times[k] >= t0 - 1e-9 && traj.times[k] <= t0 + period)
      {
        m = std::max(m, std::abs(traj.states[k].moment(0, 1) - a_ss));
      }
    }
    return m;
  };
  const double rate = std::log(envelope(t1) / envelope(t2)) / (t2 - t1);
  EXPECT_NEAR(rate, -g.lambda.real(), 0.05 * -g.lambda.real());
}
