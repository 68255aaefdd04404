// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/model.hpp"

using namespace kerrcrit;

TEST(Annihilation, SingleEntryAtCutoffOne)
{
  const FockOperator a = annihilation_op(1);
  ASSERT_EQ(a.dim(), 2);
  EXPECT_EQ(a.entries(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(a.entries(0, 0), Complex(0.0, 0.0));
  EXPECT_EQ(a.entries(1, 0), Complex(0.0, 0.0));
  EXPECT_EQ(a.entries(1, 1), Complex(0.0, 0.0));
}

TEST(Annihilation, SubdiagonalValues)
{
  const FockOperator a = annihilation_op(3);
  EXPECT_DOUBLE_EQ(a.entries(2, 3).real(), std::sqrt(3.0));
  for (int n = 1; n <= 3; ++n)
  {
    EXPECT_DOUBLE_EQ(a.entries(n - 1, n).real(), std::sqrt(static_cast<double>(n)));
  }
  EXPECT_EQ((a.adjoint().entries - a.entries.adjoint()).norm(), 0.0);
}

TEST(Annihilation, NumberOperatorOnFockStates)
{
  const int c = 7;
  const FockOperator a = annihilation_op(c);
  const Eigen::MatrixXcd num = a.entries.adjoint() * a.entries;
  for (int n = 0; n <= c; ++n)
  {
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(c + 1);
    ket(n) = 1.0;
    EXPECT_NEAR((num * ket - static_cast<double>(n) * ket).norm(), 0.0, 1e-14);
  }
  EXPECT_NEAR((number_op(c).entries - num).norm(), 0.0, 1e-14);
}

TEST(Annihilation, CommutatorInInterior)
{
  const int c = 12;
  const Eigen::MatrixXcd a = annihilation_op(c).entries;
  const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
  for (int m = 0; m < c; ++m)
  {
    EXPECT_NEAR(comm(m, m).real(), 1.0, 1e-14);
  }
}

TEST(Hamiltonian, UndrivenLinearIsDiagonal)
{
  const ModelParams p{1.7, 0.0, 0.0, 1.0, 3.0};
  const FockOperator H = hamiltonian(p, 5);
  for (int m = 0; m <= 5; ++m)
  {
    for (int n = 0; n <= 5; ++n)
    {
      const double expect = m == n ? -1.7 * m : 0.0;
      EXPECT_DOUBLE_EQ(H.entries(m, n).real(), expect);
      EXPECT_DOUBLE_EQ(H.entries(m, n).imag(), 0.0);
    }
  }
}

TEST(Hamiltonian, KerrDiagonalEntry)
{
  const double delta = 0.6;
  const ModelParams p{delta, 1.0, 0.0, 1.0, 1.0};
  const FockOperator H = hamiltonian(p, 4);
  EXPECT_DOUBLE_EQ(H.entries(2, 2).real(), -2.0 * delta + 1.0);
  EXPECT_DOUBLE_EQ(H.entries(3, 3).real(), -3.0 * delta + 3.0);
}

TEST(Hamiltonian, ScalingOfDriveAndNonlinearity)
{
  const ModelParams p{2.0, 1.0, 0.93, 1.0, 4.0};
  EXPECT_DOUBLE_EQ(p.bare_u(), 0.25);
  EXPECT_DOUBLE_EQ(p.bare_f(), 1.86);
  const FockOperator H = hamiltonian(p, 6);
  for (int n = 0; n < 6; ++n)
  {
    EXPECT_NEAR(H.entries(n + 1, n).real(), 1.86 * std::sqrt(n + 1.0), 1e-14);
    EXPECT_NEAR(H.entries(n, n + 1).real(), 1.86 * std::sqrt(n + 1.0), 1e-14);
  }
  EXPECT_DOUBLE_EQ(H.entries(2, 2).real(), -4.0 + 0.25);
}

TEST(Hamiltonian, HermitianOverRandomParameters)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial)
  {
    const ModelParams p{u(rng), std::abs(u(rng)), std::abs(u(rng)), 1.0, 1.0 + std::abs(u(rng)) * 5.0};
    const FockOperator H = hamiltonian(p, 15);
    const double hmax = H.entries.cwiseAbs().maxCoeff();
    EXPECT_LT((H.entries - H.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * hmax);
  }
}

TEST(ModelParams, ScalingInvariants)
{
  for (double n : {1.0, 2.0, 3.0, 7.5, 40.0})
  {
    const ModelParams p{2.0, 0.75, 1.25, 1.0, n};
    EXPECT_NEAR(p.bare_u() * p.bare_f() * p.bare_f(), p.u_tilde * p.f_tilde * p.f_tilde, 1e-14);
    EXPECT_NEAR(p.bare_u() * n, p.u_tilde, 1e-15);
    EXPECT_NEAR(p.bare_f() / std::sqrt(n), p.f_tilde, 1e-15);
  }
}

TEST(ModelParams, ValidationRejectsBadFields)
{
  EXPECT_THROW((ModelParams{1.0, 1.0, -0.1, 1.0, 1.0}.validate()), InvalidParameter);
  EXPECT_THROW((ModelParams{1.0, 1.0, 0.1, 0.0, 1.0}.validate()), InvalidParameter);
  EXPECT_THROW((ModelParams{1.0, 1.0, 0.1, 1.0, 0.0}.validate()), InvalidParameter);
  EXPECT_THROW((ModelParams{std::nan(""), 1.0, 0.1, 1.0, 1.0}.validate()), InvalidParameter);
  EXPECT_NO_THROW((ModelParams{-1.0, 0.0, 0.0, 1.0, 0.5}.validate()));
}
