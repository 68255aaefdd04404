// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/model.hpp"

#include <cmath>
#include <string>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

void ModelParams::validate() const
{
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(delta) || !finite(u_tilde) || !finite(f_tilde) || !finite(gamma) || !finite(n_scale))
  {
    throw InvalidParameter("model parameters must be finite");
  }
  if (gamma <= 0.0)
  {
    throw InvalidParameter("gamma must be positive, got " + std::to_string(gamma));
  }
  if (n_scale <= 0.0)
  {
    throw InvalidParameter("n_scale must be positive, got " + std::to_string(n_scale));
  }
  if (f_tilde < 0.0)
  {
    throw InvalidParameter("f_tilde must be non-negative, got " + std::to_string(f_tilde));
  }
}

FockOperator annihilation_op(int cutoff)
{
  if (cutoff < 0)
  {
    throw InvalidParameter("cutoff must be non-negative");
  }
  const Eigen::Index d = cutoff + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n)
  {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return {cutoff, std::move(a)};
}

FockOperator number_op(int cutoff)
{
  if (cutoff < 0)
  {
    throw InvalidParameter("cutoff must be non-negative");
  }
  const Eigen::Index d = cutoff + 1;
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
  {
    n(k, k) = static_cast<double>(k);
  }
  return {cutoff, std::move(n)};
}

FockOperator hamiltonian(const ModelParams &params, int cutoff)
{
  params.validate();
  if (cutoff < 0)
  {
    throw InvalidParameter("cutoff must be non-negative");
  }
  const double u = params.bare_u();
  const double f = params.bare_f();
  const Eigen::Index d = cutoff + 1;

  // Built entrywise: the operator products would add rounding noise to an
  // otherwise exactly representable tridiagonal matrix.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n)
  {
    const double nd = static_cast<double>(n);
    h(n, n) = -params.delta * nd + 0.5 * u * nd * (nd - 1.0);
    if (n + 1 < d)
    {
      const double off = f * std::sqrt(nd + 1.0);
      h(n, n + 1) = off;
      h(n + 1, n) = off;
    }
  }
  return {cutoff, std::move(h)};
}

}  // namespace kerrcrit
