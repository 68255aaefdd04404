// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/density_matrix.hpp"

#include <cmath>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries))
{
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
  {
    throw DimensionMismatch("density matrix must be square and non-empty");
  }
}

DensityMatrix DensityMatrix::fock(int cutoff, int k)
{
  if (cutoff < 0 || k < 0 || k > cutoff)
  {
    throw InvalidParameter("Fock level outside the truncated space");
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  rho(k, k) = 1.0;
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::coherent(int cutoff, Complex alpha)
{
  if (cutoff < 0)
  {
    throw InvalidParameter("cutoff must be non-negative");
  }
  Eigen::VectorXcd psi(cutoff + 1);
  psi(0) = 1.0;
  for (int n = 1; n <= cutoff; ++n)
  {
    psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  psi.normalize();
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::hermitized() const
{
  Eigen::MatrixXcd h = 0.5 * (entries_ + entries_.adjoint());
  const double tr = h.trace().real();
  if (!(std::abs(tr) > 0.0) || !std::isfinite(tr))
  {
    throw SingularSystem("cannot normalize a density matrix with zero trace");
  }
  h /= tr;
  return DensityMatrix(std::move(h));
}

StateValidity DensityMatrix::validity() const
{
  StateValidity v;
  v.hermiticity_error = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  v.trace_error = std::abs(entries_.trace() - Complex(1.0, 0.0));
  Eigen::MatrixXcd h = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  return v;
}

Eigen::VectorXd DensityMatrix::populations() const
{
  return entries_.diagonal().real();
}

Complex DensityMatrix::moment(int m, int n) const
{
  if (m < 0 || n < 0)
  {
    throw InvalidParameter("moment orders must be non-negative");
  }
  // a^dag^m a^n |k> = sqrt(k!/(k-n)!) sqrt((k-n+m)!/(k-n)!) |k-n+m>.
  const int c = cutoff();
  Complex acc = 0.0;
  for (int k = n; k <= c; ++k)
  {
    const int j = k - n + m;
    if (j > c)
    {
      break;
    }
    double coef_sq = 1.0;
    for (int i = 0; i < n; ++i)
    {
      coef_sq *= static_cast<double>(k - i);
    }
    for (int i = 1; i <= m; ++i)
    {
      coef_sq *= static_cast<double>(k - n + i);
    }
    acc += entries_(k, j) * std::sqrt(coef_sq);
  }
  return acc;
}

}  // namespace kerrcrit
