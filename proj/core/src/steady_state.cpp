// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/steady_state.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SparseLU>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/special_functions.hpp"

namespace kerrcrit
{

struct ConstrainedSolver::Factor
{
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
};

ConstrainedSolver::~ConstrainedSolver() = default;
ConstrainedSolver::ConstrainedSolver(ConstrainedSolver &&) noexcept = default;
ConstrainedSolver &ConstrainedSolver::operator=(ConstrainedSolver &&) noexcept = default;

ConstrainedSolver::ConstrainedSolver(const Superoperator &L)
  : L_(&L), factor_(std::make_unique<Factor>())
{
  const auto &m = L.matrix();
  const Eigen::Index dim = L.dim();
  const Eigen::Index d = L.cutoff() + 1;

  std::vector<Eigen::Triplet<Complex, int>> trip;
  trip.reserve(static_cast<std::size_t>(m.nonZeros() + d));
  for (Eigen::Index r = 1; r < dim; ++r)
  {
    for (SparseRowMatrix::InnerIterator it(m, r); it; ++it)
    {
      trip.emplace_back(static_cast<int>(r), static_cast<int>(it.col()), it.value());
    }
  }
  for (Eigen::Index k = 0; k < d; ++k)
  {
    trip.emplace_back(0, static_cast<int>(k + d * k), Complex(1.0, 0.0));
  }
  constrained_.resize(dim, dim);
  constrained_.setFromTriplets(trip.begin(), trip.end());
  constrained_.makeCompressed();

  factor_->lu.analyzePattern(constrained_);
  factor_->lu.factorize(constrained_);
  if (factor_->lu.info() != Eigen::Success)
  {
    throw SingularSystem("constrained Liouvillian factorization failed: " +
                         factor_->lu.lastErrorMessage());
  }

  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(dim);
  e0(0) = 1.0;
  const Eigen::VectorXcd x = solve_refined(e0);
  if (!x.allFinite())
  {
    throw SingularSystem("constrained steady-state solve produced non-finite values");
  }
  rho_ = DensityMatrix(unvectorize(x, L.cutoff())).hermitized();
  rho_vec_ = vectorize(rho_.entries());
  residual_ = (m * rho_vec_).norm();
  const double scale = L.norm();
  if (!(residual_ < 1e-10 * scale))
  {
    throw SingularSystem("steady-state residual " + std::to_string(residual_) +
                         " exceeds 1e-10 ||L||; the kernel may be degenerate");
  }
}

Eigen::VectorXcd ConstrainedSolver::solve_refined(const Eigen::VectorXcd &rhs) const
{
  Eigen::VectorXcd x = factor_->lu.solve(rhs);
  const double bnorm = rhs.norm();
  for (int it = 0; it < 3; ++it)
  {
    const Eigen::VectorXcd r = rhs - constrained_ * x;
    if (r.norm() <= 1e-15 * bnorm)
    {
      break;
    }
    x += factor_->lu.solve(r);
  }
  return x;
}

Eigen::VectorXcd ConstrainedSolver::solve_traceless(const Eigen::VectorXcd &b) const
{
  if (b.size() != L_->dim())
  {
    throw DimensionMismatch("right-hand side length does not match the Liouvillian");
  }
  Eigen::VectorXcd rhs = b;
  rhs(0) = 0.0;
  return solve_refined(rhs);
}

DensityMatrix steady_state_numeric(const Superoperator &L)
{
  return ConstrainedSolver(L).steady_state();
}

namespace
{

// Running sum of exp(log_terms) that keeps the partial sum scaled by the
// largest term seen so far.
class ScaledSum
{
public:
  void add(Complex log_term)
  {
    if (log_term.real() > scale_)
    {
      sum_ *= std::exp(scale_ - log_term.real());
      scale_ = log_term.real();
    }
    sum_ += std::exp(log_term - scale_);
  }
  double log_abs() const { return scale_ + std::log(std::abs(sum_)); }
  Complex log_value() const { return scale_ + std::log(sum_); }

private:
  double scale_ = -std::numeric_limits<double>::infinity();
  Complex sum_ = 0.0;
};

// log F(x, y, z) for the normalized double-index series.
Complex log_series(Complex x, Complex y, double z)
{
  constexpr int kMaxTerms = 10000;
  constexpr double kTailTol = 1e-14;
  const double log_z = std::log(z);

  ScaledSum sum;
  Complex log_t = 0.0;
  sum.add(log_t);
  for (int k = 0; k < kMaxTerms; ++k)
  {
    const double kd = static_cast<double>(k);
    const Complex log_ratio = log_z - std::log(kd + 1.0) - std::log(x + kd) - std::log(y + kd);
    log_t += log_ratio;
    sum.add(log_t);

    // Every later ratio is bounded by z / ((k + 2) |x + k'| |y + k'|) with
    // |x + k'| >= |Im x| before the real part turns positive and increasing
    // after, so the tail is bounded by a geometric series.
    auto lower = [&](Complex v) { return kd + 1.0 >= -v.real() ? std::abs(v + kd + 1.0) : std::abs(v.imag()); };
    const double lx = lower(x);
    const double ly = lower(y);
    if (lx > 0.0 && ly > 0.0)
    {
      const double bound = std::exp(log_z - std::log(kd + 2.0) - std::log(lx) - std::log(ly));
      if (bound < 0.5)
      {
        const double log_tail = log_t.real() + std::log(bound / (1.0 - bound));
        if (log_tail < std::log(kTailTol) + sum.log_abs())
        {
          return sum.log_value();
        }
      }
    }
  }
  throw SeriesDivergence("closed-form moment series did not converge in 1e4 terms");
}

}  // namespace

Complex analytic_moment(int m, int n, const ModelParams &params)
{
  params.validate();
  if (m < 0 || n < 0)
  {
    throw InvalidParameter("moment orders must be non-negative");
  }
  if (m == 0 && n == 0)
  {
    return 1.0;
  }
  const double U = params.bare_u();
  const double F = params.bare_f();
  const double gamma = params.gamma;
  if (F == 0.0)
  {
    return 0.0;
  }
  if (U == 0.0)
  {
    // Linear cavity: the steady state is the coherent state F / (Delta + i gamma/2).
    const Complex alpha = F / Complex(params.delta, 0.5 * gamma);
    return std::pow(std::conj(alpha), m) * std::pow(alpha, n);
  }

  const Complex c = (2.0 / U) * Complex(-params.delta, -0.5 * gamma);
  const double eps = -2.0 * F / U;
  const double z = 2.0 * eps * eps;

  const Complex log_ratio = log_series(c + static_cast<double>(n), std::conj(c) + static_cast<double>(m), z) -
                            log_series(c, std::conj(c), z);
  const Complex log_prefactor = static_cast<double>(m + n) * std::log(std::abs(eps)) -
                                log_pochhammer(c, n) - log_pochhammer(std::conj(c), m);
  const double sign = (eps < 0.0 && (m + n) % 2 == 1) ? -1.0 : 1.0;
  return sign * std::exp(log_prefactor + log_ratio);
}

std::string_view to_string(ObservableSource source)
{
  return source == ObservableSource::analytic ? "analytic" : "numeric";
}

namespace
{

Observables make_observables(double n, double second, double n_scale, ObservableSource source)
{
  Observables o;
  o.n = std::max(n, 0.0);
  o.n_rescaled = o.n / n_scale;
  o.g2 = o.n < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : std::max(second, 0.0) / (o.n * o.n);
  o.source = source;
  return o;
}

}  // namespace

Observables observables(const DensityMatrix &rho, double n_scale)
{
  if (!(n_scale > 0.0))
  {
    throw InvalidParameter("n_scale must be positive");
  }
  const double n = rho.moment(1, 1).real();
  const double second = rho.moment(2, 2).real();
  return make_observables(n, second, n_scale, ObservableSource::numeric);
}

Observables observables(const ModelParams &params)
{
  const double n = analytic_moment(1, 1, params).real();
  const double second = analytic_moment(2, 2, params).real();
  return make_observables(n, second, params.n_scale, ObservableSource::analytic);
}

}  // namespace kerrcrit
