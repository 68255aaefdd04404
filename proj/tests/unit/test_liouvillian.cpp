// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/model.hpp"

using namespace kerrcrit;

namespace
{

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B)
{
  Eigen::MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
    {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

// Textbook column-stacking construction, vec(A X B) = (B^T kron A) vec(X).
Eigen::MatrixXcd dense_liouvillian(const Eigen::MatrixXcd &H, const Eigen::MatrixXcd &a, double gamma)
{
  const Eigen::Index d = H.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd ada = a.adjoint() * a;
  const Complex i(0.0, 1.0);
  return -i * (kron(I, H) - kron(H.transpose(), I)) +
         0.5 * gamma * (2.0 * kron(a.conjugate(), a) - kron(I, ada) - kron(ada.transpose(), I));
}

Eigen::MatrixXcd random_hermitian_trace_one(int d, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(d, d);
  for (int i = 0; i < d; ++i)
  {
    for (int j = 0; j < d; ++j)
    {
      A(i, j) = Complex(g(rng), g(rng));
    }
  }
  Eigen::MatrixXcd rho = A * A.adjoint();
  return rho / rho.trace();
}

ModelParams random_params(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return ModelParams{-3.0 + 6.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng), 0.5 + u(rng), 1.0 + 4.0 * u(rng)};
}

}  // namespace

TEST(Vectorization, ColumnStackingIndex)
{
  Eigen::MatrixXcd rho(3, 3);
  for (int m = 0; m < 3; ++m)
  {
    for (int n = 0; n < 3; ++n)
    {
      rho(m, n) = Complex(m, 10 * n);
    }
  }
  const Eigen::VectorXcd v = vectorize(rho);
  const Superoperator L = build_liouvillian(ModelParams{1.0, 1.0, 1.0, 1.0, 1.0}, 2);
  for (int m = 0; m < 3; ++m)
  {
    for (int n = 0; n < 3; ++n)
    {
      EXPECT_EQ(v(m + 3 * n), rho(m, n));
      EXPECT_EQ(v(L.index(m, n)), rho(m, n));
    }
  }
  EXPECT_EQ((unvectorize(v, 2) - rho).norm(), 0.0);
  EXPECT_EQ(vector_trace(v, 2), rho.trace());
  EXPECT_EQ(vector_trace(vectorized_identity(4), 4), Complex(5.0, 0.0));
}

TEST(BuildLiouvillian, MatchesKroneckerConstruction)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial)
  {
    const ModelParams p = random_params(rng);
    const int c = 3 + trial;
    const Superoperator L = build_liouvillian(p, c);
    const Eigen::MatrixXcd oracle =
        dense_liouvillian(hamiltonian(p, c).entries, annihilation_op(c).entries, p.gamma);
    const Eigen::MatrixXcd built = Eigen::MatrixXcd(L.matrix());
    EXPECT_LT((built - oracle).cwiseAbs().maxCoeff(), 1e-12) << "trial " << trial;
    EXPECT_EQ(L.dim(), (c + 1) * (c + 1));
  }
}

TEST(BuildLiouvillian, TwoLevelSpectrum)
{
  // cutoff 1, no Kerr, no drive: eigenvalues 0, -gamma and -gamma/2 +- i delta.
  const double delta = 2.0;
  const Superoperator L = build_liouvillian(ModelParams{delta, 0.0, 0.0, 1.0, 1.0}, 1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(L.matrix()), false);
  std::vector<Complex> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  const std::vector<Complex> expect = {{0.0, 0.0}, {-1.0, 0.0}, {-0.5, delta}, {-0.5, -delta}};
  for (const Complex &e : expect)
  {
    const auto it = std::min_element(ev.begin(), ev.end(), [&](Complex x, Complex y)
                                     { return std::abs(x - e) < std::abs(y - e); });
    EXPECT_LT(std::abs(*it - e), 1e-12);
  }
}

TEST(BuildLiouvillian, TracePreservationProperty)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial)
  {
    const ModelParams p = random_params(rng);
    const int c = 4 + trial % 9;
    const Superoperator L = build_liouvillian(p, c);
    const Eigen::VectorXcd left = L.matrix().adjoint() * vectorized_identity(c);
    EXPECT_LT(left.cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, L.norm()));
  }
}

TEST(BuildLiouvillian, PreservesHermiticity)
{
  std::mt19937_64 rng(3);
  const ModelParams p = random_params(rng);
  const int c = 6;
  const Superoperator L = build_liouvillian(p, c);
  const Eigen::MatrixXcd rho = random_hermitian_trace_one(c + 1, rng);
  const Eigen::MatrixXcd out = unvectorize(apply_liouvillian(L, vectorize(rho)), c);
  EXPECT_LT((out - out.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(std::abs(out.trace()), 1e-12);
}

TEST(ApplyLiouvillian, MatchesMasterEquationRightHandSide)
{
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial)
  {
    const ModelParams p = random_params(rng);
    const int c = 5 + trial;
    const Eigen::MatrixXcd H = hamiltonian(p, c).entries;
    const Eigen::MatrixXcd a = annihilation_op(c).entries;
    const Eigen::MatrixXcd ad = a.adjoint();
    const Eigen::MatrixXcd rho = random_hermitian_trace_one(c + 1, rng);
    const Complex i(0.0, 1.0);
    const Eigen::MatrixXcd rhs =
        -i * (H * rho - rho * H) + 0.5 * p.gamma * (2.0 * a * rho * ad - ad * a * rho - rho * ad * a);
    const Superoperator L = build_liouvillian(p, c);
    Eigen::VectorXcd out;
    apply_liouvillian(L, vectorize(rho), out);
    EXPECT_LT((unvectorize(out, c) - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyLiouvillian, DimensionMismatchThrows)
{
  const Superoperator L = build_liouvillian(ModelParams{1.0, 1.0, 1.0, 1.0, 1.0}, 3);
  EXPECT_THROW(apply_liouvillian(L, Eigen::VectorXcd::Zero(15)), DimensionMismatch);
}

TEST(Superoperator, RejectsRowStacking)
{
  const Superoperator L = build_liouvillian(ModelParams{1.0, 1.0, 1.0, 1.0, 1.0}, 2);
  EXPECT_THROW(Superoperator(2, L.matrix(), Vectorization::row_stacking), ConventionMismatch);
  EXPECT_THROW(Superoperator(3, L.matrix()), DimensionMismatch);
}

TEST(Superoperator, BinaryRoundTrip)
{
  const Superoperator L = build_liouvillian(ModelParams{2.0, 1.0, 0.93, 1.0, 3.0}, 9);
  std::stringstream buf;
  write_binary(L, buf);
  const Superoperator back = read_superoperator_binary(buf);
  EXPECT_EQ(back.cutoff(), L.cutoff());
  EXPECT_EQ(back.nnz(), L.nnz());
  EXPECT_EQ(back.convention(), Vectorization::column_stacking);
  EXPECT_EQ((Eigen::MatrixXcd(back.matrix()) - Eigen::MatrixXcd(L.matrix())).norm(), 0.0);
}

TEST(Superoperator, TruncatedBinaryThrows)
{
  const Superoperator L = build_liouvillian(ModelParams{2.0, 1.0, 0.93, 1.0, 3.0}, 4);
  std::stringstream buf;
  write_binary(L, buf);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() / 2);
  std::stringstream cut(bytes);
  EXPECT_THROW(read_superoperator_binary(cut), FormatError);
}

TEST(TimeEvolve, FockOneDecaysExponentially)
{
  const int c = 4;
  const Superoperator L = build_liouvillian(ModelParams{0.7, 0.0, 0.0, 1.0, 1.0}, c);
  const Trajectory traj = time_evolve(L, DensityMatrix::fock(c, 1), 3.0, 1e-3, {100, 1e-8});
  ASSERT_FALSE(traj.states.empty());
  EXPECT_NEAR(traj.times.back(), 3.0, 1e-12);
  for (std::size_t k = 0; k < traj.states.size(); ++k)
  {
    EXPECT_NEAR(traj.states[k](1, 1).real(), std::exp(-traj.times[k]), 1e-9);
  }
}

TEST(TimeEvolve, KeepsStateValid)
{
  const int c = 10;
  const ModelParams p{2.0, 1.0, 0.93, 1.0, 1.0};
  const Superoperator L = build_liouvillian(p, c);
  const Trajectory traj = time_evolve(L, DensityMatrix::vacuum(c), 5.0, 2e-3, {250, 1e-8});
  for (const DensityMatrix &rho : traj.states)
  {
    EXPECT_TRUE(rho.validity().ok(1e-10, 1e-8, 1e-8));
  }
}

TEST(TimeEvolve, OversizedStepThrows)
{
  const int c = 10;
  const Superoperator L = build_liouvillian(ModelParams{2.0, 1.0, 3.0, 1.0, 1.0}, c);
  EXPECT_THROW(time_evolve(L, DensityMatrix::vacuum(c), 50.0, 5.0), StepTooLarge);
}
