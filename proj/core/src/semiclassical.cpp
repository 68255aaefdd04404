// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/semiclassical.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

namespace
{

double cubic(double n, double delta, double u, double gamma, double f)
{
  const double d = delta - u * n;
  return n * (d * d + 0.25 * gamma * gamma) - f * f;
}

double cubic_derivative(double n, double delta, double u, double gamma)
{
  return 3.0 * u * u * n * n - 4.0 * delta * u * n + delta * delta + 0.25 * gamma * gamma;
}

SemiclassicalRoot make_root(double n, const ModelParams &p)
{
  SemiclassicalRoot r;
  r.n_sc = n;
  r.alpha = -p.f_tilde / Complex(-p.delta + p.u_tilde * n, -0.5 * p.gamma);
  r.lambda_lr = linear_response(n, p);
  r.stable = r.lambda_lr[0].real() < 0.0 && r.lambda_lr[1].real() < 0.0;
  const Complex lhs = Complex(-p.delta + p.u_tilde * std::norm(r.alpha), -0.5 * p.gamma) * r.alpha + p.f_tilde;
  r.residual = std::abs(lhs) + std::abs(std::norm(r.alpha) - n);
  return r;
}

}  // namespace

std::vector<SemiclassicalRoot> steady_roots(const ModelParams &params)
{
  params.validate();
  const double delta = params.delta;
  const double u = params.u_tilde;
  const double g = params.gamma;
  const double f = params.f_tilde;

  std::vector<double> ns;
  if (u == 0.0)
  {
    ns.push_back(f * f / (delta * delta + 0.25 * g * g));
  }
  else
  {
    // Monic companion matrix of n^3 + a2 n^2 + a1 n + a0.
    const double a2 = -2.0 * delta / u;
    const double a1 = (delta * delta + 0.25 * g * g) / (u * u);
    const double a0 = -f * f / (u * u);
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 0) = -a2;
    comp(0, 1) = -a1;
    comp(0, 2) = -a0;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    const Eigen::Vector3cd ev = Eigen::EigenSolver<Eigen::Matrix3d>(comp, false).eigenvalues();

    const double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(1)), std::abs(ev(2))});
    int n_real = 0;
    for (int i = 0; i < 3; ++i)
    {
      if (std::abs(ev(i).imag()) <= 1e-6 * scale)
      {
        ++n_real;
      }
    }
    if (n_real == 3 || n_real == 2)
    {
      // A nearly double root may come out as a conjugate pair with a tiny
      // imaginary part; its real part is kept for both members.
      for (int i = 0; i < 3; ++i)
      {
        ns.push_back(ev(i).real());
      }
    }
    else
    {
      for (int i = 0; i < 3; ++i)
      {
        if (std::abs(ev(i).imag()) <= 1e-6 * scale)
        {
          ns.push_back(ev(i).real());
        }
      }
      if (ns.empty())
      {
        int best = 0;
        for (int i = 1; i < 3; ++i)
        {
          if (std::abs(ev(i).imag()) < std::abs(ev(best).imag()))
          {
            best = i;
          }
        }
        ns.push_back(ev(best).real());
      }
    }
    for (double &n : ns)
    {
      for (int it = 0; it < 8; ++it)
      {
        const double d = cubic_derivative(n, delta, u, g);
        if (d == 0.0)
        {
          break;
        }
        const double step = cubic(n, delta, u, g, f) / d;
        if (!std::isfinite(step) || std::abs(step) > 1e-3 * std::max(1.0, std::abs(n)))
        {
          break;
        }
        n -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(n)))
        {
          break;
        }
      }
      n = std::max(n, 0.0);
    }
  }
  std::sort(ns.begin(), ns.end());

  std::vector<SemiclassicalRoot> roots;
  roots.reserve(ns.size());
  for (double n : ns)
  {
    roots.push_back(make_root(n, params));
  }
  return roots;
}

double max_semiclassical_density(const ModelParams &params)
{
  const auto roots = steady_roots(params);
  double best = 0.0;
  for (const auto &r : roots)
  {
    best = std::max(best, r.n_sc);
  }
  return best;
}

BistabilityEdges bistability_edges(double delta, double u_tilde, double gamma)
{
  if (!(u_tilde > 0.0) || !(gamma > 0.0))
  {
    throw InvalidParameter("bistability_edges needs u_tilde > 0 and gamma > 0");
  }
  BistabilityEdges e;
  const double disc = delta * delta - 0.75 * gamma * gamma;
  if (disc < 0.0 || delta <= 0.0)
  {
    return e;
  }
  const double root = std::sqrt(disc);
  auto drive = [&](double n) {
    const double d = delta - u_tilde * n;
    return std::sqrt(n * (d * d + 0.25 * gamma * gamma));
  };
  const double f_a = drive((2.0 * delta + root) / (3.0 * u_tilde));
  const double f_b = drive((2.0 * delta - root) / (3.0 * u_tilde));
  e.f_minus = std::min(f_a, f_b);
  e.f_plus = std::max(f_a, f_b);
  e.exists = e.f_minus < e.f_plus;
  return e;
}

std::array<Complex, 2> linear_response(double n_sc, const ModelParams &params)
{
  const double un = params.u_tilde * n_sc;
  const double chi = 2.0 * un - params.delta;
  const double radicand = chi * chi - un * un;
  const double half = -0.5 * params.gamma;
  if (radicand >= 0.0)
  {
    const double w = std::sqrt(radicand);
    return {Complex(half, w), Complex(half, -w)};
  }
  const double s = std::sqrt(-radicand);
  return {Complex(half + s, 0.0), Complex(half - s, 0.0)};
}

std::array<Complex, 2> linear_response(const SemiclassicalRoot &root, const ModelParams &params)
{
  return linear_response(root.n_sc, params);
}

Complex meanfield_rhs(Complex alpha, const ModelParams &params)
{
  const Complex I(0.0, 1.0);
  const Complex k(-params.delta + params.u_tilde * std::norm(alpha), -0.5 * params.gamma);
  return -I * (k * alpha + params.f_tilde);
}

MeanfieldTrajectory integrate_meanfield(const ModelParams &params, Complex alpha0, double t_final,
                                        double dt, std::size_t sample_stride)
{
  if (!(dt > 0.0) || !(t_final >= 0.0))
  {
    throw InvalidParameter("integrate_meanfield needs dt > 0 and t_final >= 0");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  const std::size_t stride = std::max<std::size_t>(1, sample_stride);

  MeanfieldTrajectory traj;
  traj.times.push_back(0.0);
  traj.alpha.push_back(alpha0);
  Complex a = alpha0;
  for (std::size_t s = 1; s <= steps; ++s)
  {
    const Complex k1 = meanfield_rhs(a, params);
    const Complex k2 = meanfield_rhs(a + 0.5 * h * k1, params);
    const Complex k3 = meanfield_rhs(a + 0.5 * h * k2, params);
    const Complex k4 = meanfield_rhs(a + h * k3, params);
    a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || std::abs(a) > 1e8)
    {
      throw StepTooLarge("mean-field integration diverged; reduce dt");
    }
    if (s % stride == 0 || s == steps)
    {
      traj.times.push_back(h * static_cast<double>(s));
      traj.alpha.push_back(a);
    }
  }
  return traj;
}

}  // namespace kerrcrit
