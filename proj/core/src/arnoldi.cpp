// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/arnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

namespace
{

using Complex = std::complex<double>;

struct Givens
{
  double c;
  Complex s;
};

Givens make_givens(Complex a, Complex b)
{
  const double r = std::hypot(std::abs(a), std::abs(b));
  if (r == 0.0)
  {
    return {1.0, 0.0};
  }
  if (std::abs(a) == 0.0)
  {
    return {0.0, std::conj(b) / std::abs(b)};
  }
  return {std::abs(a) / r, (a / std::abs(a)) * std::conj(b) / r};
}

// One shifted QR step H <- Q^H H Q on an upper Hessenberg matrix,
// accumulating Q into `acc`.
void shifted_qr_step(Eigen::MatrixXcd &H, Eigen::MatrixXcd &acc, Complex mu)
{
  const Eigen::Index m = H.rows();
  for (Eigen::Index i = 0; i < m; ++i)
  {
    H(i, i) -= mu;
  }
  std::vector<Givens> rot(static_cast<std::size_t>(std::max<Eigen::Index>(m - 1, 0)));
  for (Eigen::Index j = 0; j + 1 < m; ++j)
  {
    const Givens g = make_givens(H(j, j), H(j + 1, j));
    rot[static_cast<std::size_t>(j)] = g;
    for (Eigen::Index k = j; k < m; ++k)
    {
      const Complex x = H(j, k);
      const Complex y = H(j + 1, k);
      H(j, k) = g.c * x + g.s * y;
      H(j + 1, k) = -std::conj(g.s) * x + g.c * y;
    }
    H(j + 1, j) = 0.0;
  }
  auto apply_right = [](Eigen::MatrixXcd &M, Eigen::Index j, const Givens &g, Eigen::Index rows) {
    for (Eigen::Index i = 0; i < rows; ++i)
    {
      const Complex x = M(i, j);
      const Complex y = M(i, j + 1);
      M(i, j) = g.c * x + std::conj(g.s) * y;
      M(i, j + 1) = -g.s * x + g.c * y;
    }
  };
  for (Eigen::Index j = 0; j + 1 < m; ++j)
  {
    const Givens &g = rot[static_cast<std::size_t>(j)];
    apply_right(H, j, g, std::min(j + 2, m));
    apply_right(acc, j, g, acc.rows());
  }
  for (Eigen::Index i = 0; i < m; ++i)
  {
    H(i, i) += mu;
  }
}

Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> dist;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = Complex(dist(rng), dist(rng));
  }
  return v;
}

// Classical Gram-Schmidt with one unconditional reorthogonalization pass.
Eigen::VectorXcd orthogonalize(const Eigen::MatrixXcd &V, Eigen::Index cols, Eigen::VectorXcd &w)
{
  Eigen::VectorXcd h = V.leftCols(cols).adjoint() * w;
  w.noalias() -= V.leftCols(cols) * h;
  const Eigen::VectorXcd h2 = V.leftCols(cols).adjoint() * w;
  w.noalias() -= V.leftCols(cols) * h2;
  h += h2;
  return h;
}

std::vector<Eigen::Index> order_by_magnitude(const Eigen::VectorXcd &theta)
{
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(theta.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(theta(a)) > std::abs(theta(b)); });
  return idx;
}

ArnoldiResult dense_fallback(const LinearOperator &op, Eigen::Index n, int nev)
{
  Eigen::MatrixXcd A(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd out(n);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    e.setZero();
    e(j) = 1.0;
    op(e, out);
    A.col(j) = out;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
  const auto idx = order_by_magnitude(es.eigenvalues());
  const Eigen::Index k = std::min<Eigen::Index>(nev, n);
  ArnoldiResult res;
  res.values.resize(k);
  res.vectors.resize(n, k);
  res.residuals.resize(k);
  for (Eigen::Index i = 0; i < k; ++i)
  {
    const Eigen::Index j = idx[static_cast<std::size_t>(i)];
    res.values(i) = es.eigenvalues()(j);
    res.vectors.col(i) = es.eigenvectors().col(j).normalized();
    res.residuals(i) = (A * res.vectors.col(i) - res.values(i) * res.vectors.col(i)).norm();
  }
  res.converged = static_cast<int>(k);
  res.matvecs = static_cast<int>(n);
  return res;
}

}  // namespace

ArnoldiResult arnoldi_largest(const LinearOperator &op, Eigen::Index n, const ArnoldiOptions &options)
{
  if (options.nev < 1 || n < 1)
  {
    throw InvalidParameter("arnoldi_largest needs nev >= 1 and a non-empty operator");
  }
  if (n <= options.ncv + 1 || n <= 2 * options.nev)
  {
    return dense_fallback(op, n, options.nev);
  }
  const Eigen::Index nev = options.nev;
  const Eigen::Index m = std::max<Eigen::Index>(options.ncv, 2 * nev + 2);
  const Eigen::Index keep = (nev + m) / 2;
  const double eps = std::numeric_limits<double>::epsilon();

  std::mt19937_64 rng(options.seed);
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  V.col(0) = random_vector(n, rng).normalized();

  ArnoldiResult res;
  Eigen::VectorXcd w(n);
  Eigen::Index k = 0;
  for (int restart = 0;; ++restart)
  {
    for (Eigen::Index j = k; j < m; ++j)
    {
      op(V.col(j), w);
      ++res.matvecs;
      const double wnorm0 = w.norm();
      H.col(j).head(j + 1) = orthogonalize(V, j + 1, w);
      double beta = w.norm();
      if (beta <= 1e-12 * std::max(wnorm0, eps))
      {
        // Invariant subspace found: continue with a fresh direction.
        Eigen::VectorXcd r = random_vector(n, rng);
        orthogonalize(V, j + 1, r);
        V.col(j + 1) = r.normalized();
        H(j + 1, j) = 0.0;
        continue;
      }
      H(j + 1, j) = beta;
      V.col(j + 1) = w / beta;
    }

    const Eigen::MatrixXcd Hm = H.topLeftCorner(m, m);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hm);
    const Eigen::VectorXcd theta = es.eigenvalues();
    const auto idx = order_by_magnitude(theta);
    const double beta_m = std::abs(H(m, m - 1));
    const double hnorm = Hm.norm();

    int converged = 0;
    Eigen::VectorXd resid(nev);
    for (Eigen::Index i = 0; i < nev; ++i)
    {
      const Eigen::Index j = idx[static_cast<std::size_t>(i)];
      const Eigen::VectorXcd y = es.eigenvectors().col(j).normalized();
      resid(i) = beta_m * std::abs(y(m - 1));
      if (resid(i) <= options.tol * std::max(std::abs(theta(j)), eps * hnorm))
      {
        ++converged;
      }
    }

    if (converged == nev || restart >= options.max_restarts)
    {
      res.values.resize(nev);
      res.vectors.resize(n, nev);
      res.residuals = resid;
      res.converged = 0;
      bool leading = true;
      for (Eigen::Index i = 0; i < nev; ++i)
      {
        const Eigen::Index j = idx[static_cast<std::size_t>(i)];
        res.values(i) = theta(j);
        res.vectors.col(i) = (V.leftCols(m) * es.eigenvectors().col(j)).normalized();
        const bool ok = resid(i) <= options.tol * std::max(std::abs(theta(j)), eps * hnorm);
        leading = leading && ok;
        if (leading)
        {
          ++res.converged;
        }
      }
      res.restarts = restart;
      return res;
    }

    // Exact shifts: the unwanted Ritz values.
    Eigen::MatrixXcd Hs = Hm;
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(m, m);
    for (Eigen::Index i = keep; i < m; ++i)
    {
      shifted_qr_step(Hs, Q, theta(idx[static_cast<std::size_t>(i)]));
    }
    const Complex beta_raw = H(m, m - 1);
    Eigen::VectorXcd r = (V.leftCols(m) * Q.col(keep)) * Hs(keep, keep - 1) +
                         V.col(m) * (beta_raw * Q(m - 1, keep - 1));
    const Eigen::MatrixXcd Vk = V.leftCols(m) * Q.leftCols(keep);
    V.leftCols(keep) = Vk;
    H.setZero();
    H.topLeftCorner(keep, keep) = Hs.topLeftCorner(keep, keep);
    const double rnorm = r.norm();
    if (rnorm <= eps * std::max(hnorm, 1.0))
    {
      r = random_vector(n, rng);
      orthogonalize(V, keep, r);
      V.col(keep) = r.normalized();
      H(keep, keep - 1) = 0.0;
    }
    else
    {
      // Reorthogonalize the residual against the compressed basis.
      const Eigen::VectorXcd h = orthogonalize(V, keep, r);
      H.col(keep - 1).head(keep) += h;
      const double b = r.norm();
      H(keep, keep - 1) = b;
      V.col(keep) = r / b;
    }
    k = keep;
  }
}

}  // namespace kerrcrit
