// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "kerrcrit/criticality.hpp"
#include "kerrcrit/errors.hpp"
#include "kerrcrit/semiclassical.hpp"

using namespace kerrcrit;

namespace
{

std::vector<SweepRecord> synthetic_power_law(double b, double f, double n_scale, double f_c, int points)
{
  std::vector<SweepRecord> out;
  for (int k = 1; k <= points; ++k)
  {
    SweepRecord r;
    r.n_scale = n_scale;
    const double d = 0.01 * k;
    r.f_tilde = f_c + d;
    const double tau = std::pow(f / d, b * n_scale);
    r.lambda = Complex(-1.0 / tau, 0.0);
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(BracketedMinimum, ConvexFunction)
{
  const MinimumSearch m = bracketed_minimum([](double x) { return (x - 0.4321) * (x - 0.4321) + 1.0; }, 0.0, 1.0);
  EXPECT_NEAR(m.x, 0.4321, 1e-4);
  EXPECT_NEAR(m.value, 1.0, 1e-8);
  EXPECT_GE(m.samples.size(), 21u);
}

TEST(BracketedMinimum, MonotoneFunctionHasNoInteriorMinimum)
{
  EXPECT_THROW(bracketed_minimum([](double x) { return x; }, 0.0, 1.0), NoMinimumInBracket);
}

TEST(BracketedMinimum, ThreadedSearchIsIdentical)
{
  auto g = [](double x) { return std::cos(3.0 * x) + 0.1 * x; };
  const MinimumSearch a = bracketed_minimum(g, 0.0, 2.0, 21, 1e-6, 1);
  const MinimumSearch b = bracketed_minimum(g, 0.0, 2.0, 21, 1e-6, 2);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(PowerLaw, RecoversSyntheticParameters)
{
  const auto recs = synthetic_power_law(0.3, 0.2, 10.0, 0.95, 20);
  const PowerLawFit fit = fit_power_law(recs, 0.95, 1e300);
  EXPECT_NEAR(fit.b, 0.3, 1e-6);
  EXPECT_NEAR(fit.f, 0.2, 1e-6);
  EXPECT_NEAR(fit.slope_magnitude, 3.0, 1e-5);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  EXPECT_EQ(fit.points, 18u);
  EXPECT_NEAR(fit.d_max, 0.18, 1e-12);
}

TEST(PowerLaw, WindowExclusions)
{
  const auto recs = synthetic_power_law(0.3, 0.2, 10.0, 0.95, 20);
  const double tau_c = std::pow(0.2 / 0.035, 3.0);
  PowerLawWindow w;
  w.min_distance = 0.045;
  const PowerLawFit fit = fit_power_law(recs, 0.95, tau_c, w);
  EXPECT_NEAR(fit.d_min, 0.05, 1e-12);
  EXPECT_EQ(fit.points, 14u);
  EXPECT_NEAR(fit.b, 0.3, 1e-6);
}

TEST(PowerLaw, TooFewRecords)
{
  EXPECT_THROW(fit_power_law(synthetic_power_law(0.3, 0.2, 10.0, 0.95, 5), 0.95, 1e300), WindowTooSmall);
  PowerLawWindow w;
  w.min_distance = 0.175;
  EXPECT_THROW(fit_power_law(synthetic_power_law(0.3, 0.2, 10.0, 0.95, 20), 0.95, 1e300, w), WindowTooSmall);
}

TEST(ExponentialFit, RecoversRate)
{
  std::vector<double> n, tau;
  for (double k = 3; k <= 12; ++k)
  {
    n.push_back(k);
    tau.push_back(2.0 * std::exp(0.5 * k));
  }
  const ExponentialFit e = fit_exponential_tau(n, tau);
  EXPECT_NEAR(e.kappa, 0.5, 1e-12);
  EXPECT_NEAR(e.tau0, 2.0, 1e-10);
  EXPECT_NEAR(e.r2, 1.0, 1e-12);
  EXPECT_THROW(fit_exponential_tau({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), DegenerateFit);
}

TEST(Extrapolation, ExactInverseSizeLaw)
{
  const std::vector<double> n = {3, 4, 5, 6, 8, 10, 12};
  std::vector<double> y;
  for (double v : n)
  {
    y.push_back(0.35 + 1.2 / v);
  }
  const Extrapolation e = extrapolate_1overN(n, y);
  EXPECT_NEAR(e.limit, 0.35, 1e-12);
  EXPECT_NEAR(e.slope, 1.2, 1e-10);
  EXPECT_EQ(e.sizes_used, (std::vector<double>{6, 8, 10, 12}));
}

TEST(Extrapolation, MinimumPointCount)
{
  const Extrapolation e = extrapolate_1overN({2, 4, 8, 16}, {1.0, 1.0, 1.0, 1.0});
  EXPECT_EQ(e.sizes_used.size(), 3u);
  EXPECT_NEAR(e.limit, 1.0, 1e-14);
  EXPECT_THROW(extrapolate_1overN({4, 8}, {1.0, 1.0}), DegenerateFit);
}

TEST(Extrapolation, PropagatedSigmas)
{
  const std::vector<double> n = {4, 8, 16};
  const std::vector<double> y = {1.25, 1.125, 1.0625};
  ExtrapolationPolicy policy{1.0, 3, false};
  const Extrapolation e = extrapolate_1overN(n, y, {0.01, 0.01, 0.01}, policy);
  EXPECT_NEAR(e.limit, 1.0, 1e-12);
  // Intercept coefficients c_k of an unweighted fit, sum c_k^2 sigma^2.
  const double x[3] = {0.25, 0.125, 0.0625};
  const double xm = (x[0] + x[1] + x[2]) / 3.0;
  double sxx = 0.0;
  for (double v : x)
  {
    sxx += (v - xm) * (v - xm);
  }
  double var = 0.0;
  for (double v : x)
  {
    const double c = 1.0 / 3.0 - xm * (v - xm) / sxx;
    var += c * c * 1e-4;
  }
  EXPECT_NEAR(e.propagated_error, std::sqrt(var), 1e-14);
  EXPECT_NEAR(e.std_error, e.propagated_error, 1e-10);
}

TEST(Sweep, ReproducesSinglePointGap)
{
  const ModelParams base{2.0, 1.0, 0.0, 1.0, 1.0};
  const auto recs = sweep_gap(base, {1.0, 2.0}, {0.5, 0.93});
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[0].n_scale, 1.0);
  EXPECT_EQ(recs[1].f_tilde, 0.93);
  EXPECT_EQ(recs[2].n_scale, 2.0);
  for (const auto &r : recs)
  {
    ASSERT_TRUE(r.ok()) << r.err;
    const GapResult g = liouvillian_gap(base.with_size(r.n_scale).with_drive(r.f_tilde), CutoffChoice{});
    EXPECT_EQ(r.lambda, g.lambda);
    EXPECT_EQ(r.cutoff_used, g.cutoff_used);
    EXPECT_GT(r.n_rescaled, 0.0);
  }
}

TEST(Sweep, DeterministicAcrossThreadCounts)
{
  const ModelParams base{2.0, 1.0, 0.0, 1.0, 1.0};
  SweepOptions one;
  SweepOptions two;
  two.threads = 2;
  const auto a = sweep_gap(base, {1.0, 3.0}, {0.6, 0.9, 1.2}, one);
  const auto b = sweep_gap(base, {1.0, 3.0}, {0.6, 0.9, 1.2}, two);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    EXPECT_EQ(a[k].lambda, b[k].lambda);
    EXPECT_EQ(a[k].g2, b[k].g2);
    EXPECT_EQ(a[k].cutoff_used, b[k].cutoff_used);
  }
}

TEST(Sweep, ErrorsAreRecordedPerPoint)
{
  SweepOptions opts;
  opts.cutoff.policy.hard_max = 30;
  const auto recs = sweep_gap(ModelParams{2.0, 1.0, 0.0, 1.0, 1.0}, {1.0, 12.0}, {0.9}, opts);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_TRUE(recs[0].ok());
  EXPECT_FALSE(recs[1].ok());
  EXPECT_EQ(recs[1].err.rfind("CutoffOverflow", 0), 0u) << recs[1].err;
}

TEST(Sweep, ContinuityFlag)
{
  std::vector<SweepRecord> recs(4);
  for (int k = 0; k < 4; ++k)
  {
    recs[k].n_scale = 2.0;
    recs[k].f_tilde = 0.5 + 0.005 * k;
    recs[k].lambda = Complex(-0.1, 0.0);
  }
  recs[2].lambda = Complex(-0.5, 0.0);
  flag_continuity(recs);
  EXPECT_FALSE(recs[0].continuity_flag);
  EXPECT_TRUE(recs[2].continuity_flag);
}

TEST(FindFc, PlateauIsMaximumOfSamples)
{
  const ModelParams base{2.0, 1.0, 0.0, 1.0, 1.0};
  const FcResult r = find_fc(base, 3.0);
  const BistabilityEdges e = bistability_edges(2.0, 1.0);
  EXPECT_GT(r.f_c, e.f_minus);
  EXPECT_LT(r.f_c, e.f_plus);
  double best = 0.0;
  for (const auto &[f, tau] : r.samples)
  {
    best = std::max(best, tau);
  }
  EXPECT_NEAR(r.tau, best, 0.01 * best);
  EXPECT_NEAR(r.tau, -1.0 / r.lambda.real(), 1e-9 * r.tau);
}
