// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kerrcrit/cutoff.hpp"
#include "kerrcrit/errors.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/steady_state.hpp"

using namespace kerrcrit;

namespace
{

DensityMatrix numeric_state(const ModelParams &p, int cutoff)
{
  const Superoperator L = build_liouvillian(p, cutoff);
  return steady_state_numeric(L);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(SteadyState, UndrivenIsVacuum)
{
  const DensityMatrix rho = numeric_state(ModelParams{2.0, 1.0, 0.0, 1.0, 1.0}, 6);
  EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(rho.populations().tail(6).sum(), 0.0, 1e-12);
}

TEST(SteadyState, LinearCavityIsCoherent)
{
  const ModelParams p{2.0, 0.0, 1.0, 1.0, 1.0};
  const DensityMatrix rho = numeric_state(p, 25);
  const Observables obs = observables(rho, p.n_scale);
  EXPECT_NEAR(obs.n, 1.0 / (4.0 + 0.25), 1e-10);
  EXPECT_NEAR(obs.g2, 1.0, 1e-8);
  const Complex alpha = 1.0 / Complex(2.0, 0.5);
  EXPECT_LT(std::abs(rho.moment(0, 1) - alpha), 1e-10);
}

TEST(SteadyState, ResultIsValidDensityMatrix)
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial)
  {
    const ModelParams p{-1.0 + 4.0 * u(rng), 0.2 + u(rng), 1.5 * u(rng), 1.0, 1.0 + 2.0 * u(rng)};
    const int c = auto_cutoff(p, 1e-10, 1e-7);
    const Superoperator L = build_liouvillian(p, c);
    const ConstrainedSolver solver(L);
    EXPECT_TRUE(solver.steady_state().validity().ok()) << trial;
    EXPECT_LT(solver.residual(), 1e-10 * L.norm());
    EXPECT_LT(apply_liouvillian(L, solver.steady_vector()).norm(), 1e-10 * L.norm());
  }
}

TEST(SteadyState, SolveTracelessInvertsOnTraceFreeVectors)
{
  const ModelParams p{2.0, 1.0, 0.93, 1.0, 2.0};
  const Superoperator L = build_liouvillian(p, 14);
  const ConstrainedSolver solver(L);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::VectorXcd x(L.dim());
  for (Eigen::Index k = 0; k < x.size(); ++k)
  {
    x(k) = Complex(g(rng), g(rng));
  }
  x -= solver.steady_vector() * vector_trace(x, L.cutoff());
  const Eigen::VectorXcd b = apply_liouvillian(L, x);
  const Eigen::VectorXcd back = solver.solve_traceless(b);
  EXPECT_LT((back - x).norm(), 1e-9 * x.norm());
}

TEST(SteadyState, ClosedDynamicsIsSingular)
{
  const FockOperator H = number_op(4);
  const Superoperator L = build_liouvillian(H, 0.0);
  EXPECT_THROW(ConstrainedSolver{L}, SingularSystem);
}

TEST(AnalyticMoment, ConventionFreeze)
{
  // Delta = 2, U~ = 1, N = 1, F~ = 0.5 pinned against the numeric null space,
  // including the phase of <a>.
  const ModelParams p{2.0, 1.0, 0.5, 1.0, 1.0};
  const DensityMatrix rho = numeric_state(p, 20);
  for (auto [m, n] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 2}, {1, 3}})
  {
    const Complex exact = analytic_moment(m, n, p);
    const Complex num = rho.moment(m, n);
    EXPECT_LT(std::abs(exact - num), 1e-9 * std::max(1e-3, std::abs(num))) << m << "," << n;
  }
  EXPECT_NEAR(analytic_moment(0, 0, p).real(), 1.0, 1e-14);
}

TEST(AnalyticMoment, MatchesNumericOnPaperGrid)
{
  for (double n_scale : {1.0, 2.0, 3.0})
  {
    for (double f : {0.5, 0.93, 1.2})
    {
      const ModelParams p{2.0, 1.0, f, 1.0, n_scale};
      const Observables exact = observables(p);
      const int c = auto_cutoff(p, 1e-12, 1e-9);
      const Observables num = observables(numeric_state(p, c), n_scale);
      EXPECT_EQ(exact.source, ObservableSource::analytic);
      EXPECT_EQ(num.source, ObservableSource::numeric);
      EXPECT_LT(rel(num.n, exact.n), 1e-6) << n_scale << " " << f;
      EXPECT_LT(rel(num.g2, exact.g2), 1e-6) << n_scale << " " << f;
      EXPECT_NEAR(exact.n_rescaled, exact.n / n_scale, 1e-15);
    }
  }
}

TEST(AnalyticMoment, WeakNonlinearityApproachesLinearCavity)
{
  const ModelParams p{2.0, 1e-7, 1.0, 1.0, 1.0};
  const Observables obs = observables(p);
  EXPECT_NEAR(obs.n, 1.0 / 4.25, 1e-5);
  EXPECT_NEAR(obs.g2, 1.0, 1e-5);
}

TEST(AnalyticMoment, ExactLimits)
{
  const ModelParams linear{-1.5, 0.0, 0.8, 1.0, 3.0};
  const double f = linear.bare_f();
  EXPECT_NEAR(observables(linear).n, f * f / (1.5 * 1.5 + 0.25), 1e-12);
  EXPECT_NEAR(observables(linear).g2, 1.0, 1e-12);
  const ModelParams undriven{2.0, 1.0, 0.0, 1.0, 3.0};
  EXPECT_EQ(analytic_moment(1, 1, undriven), Complex(0.0, 0.0));
  EXPECT_TRUE(std::isnan(observables(undriven).g2));
}

TEST(AnalyticMoment, HugeDriveDiverges)
{
  EXPECT_THROW(analytic_moment(1, 1, ModelParams{2.0, 1.0, 1e6, 1.0, 1.0}), SeriesDivergence);
}

TEST(Observables, FockAndCoherentStates)
{
  const Observables fock = observables(DensityMatrix::fock(5, 1), 1.0);
  EXPECT_NEAR(fock.n, 1.0, 1e-14);
  EXPECT_NEAR(fock.g2, 0.0, 1e-14);
  const Observables coh = observables(DensityMatrix::coherent(40, Complex(1.2, -0.7)), 2.0);
  EXPECT_NEAR(coh.n, 1.2 * 1.2 + 0.7 * 0.7, 1e-10);
  EXPECT_NEAR(coh.n_rescaled, coh.n / 2.0, 1e-12);
  EXPECT_NEAR(coh.g2, 1.0, 1e-10);
  EXPECT_TRUE(std::isnan(observables(DensityMatrix::vacuum(3), 1.0).g2));
}
