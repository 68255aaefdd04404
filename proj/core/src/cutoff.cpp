// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/cutoff.hpp"

#include <cmath>
#include <string>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/semiclassical.hpp"
#include "kerrcrit/steady_state.hpp"

namespace kerrcrit
{

void CutoffPolicy::validate() const
{
  if (!(tail_tol > 0.0 && tail_tol < 1.0) || !(obs_tol > 0.0 && obs_tol < 1.0))
  {
    throw InvalidParameter("tail_tol and obs_tol must lie in (0, 1)");
  }
  if (min_cutoff < 1 || hard_max < min_cutoff || !(growth > 1.0))
  {
    throw InvalidParameter("cutoff policy needs 1 <= min_cutoff <= hard_max and growth > 1");
  }
}

int seed_cutoff(const ModelParams &params, const CutoffPolicy &policy)
{
  const double n = params.n_scale * max_semiclassical_density(params);
  const int seed = static_cast<int>(std::ceil(n + 4.0 * std::sqrt(n) + 4.0));
  return std::max(seed, policy.min_cutoff);
}

namespace
{

struct Probe
{
  int cutoff;
  Observables obs;
  Eigen::VectorXd populations;
};

Probe probe(const ModelParams &params, int cutoff)
{
  const Superoperator L = build_liouvillian(params, cutoff);
  const DensityMatrix rho = steady_state_numeric(L);
  return {cutoff, observables(rho, params.n_scale), rho.populations()};
}

double top_two(const Eigen::VectorXd &p)
{
  const Eigen::Index k = p.size();
  return std::abs(p(k - 1)) + (k >= 2 ? std::abs(p(k - 2)) : 0.0);
}

double relative_change(const Observables &a, const Observables &b)
{
  if (a.n < 1e-12 && b.n < 1e-12)
  {
    return 0.0;
  }
  double change = std::abs(a.n - b.n) / std::max(std::abs(b.n), 1e-300);
  if (std::isfinite(a.g2) && std::isfinite(b.g2))
  {
    change = std::max(change, std::abs(a.g2 - b.g2) / std::max(std::abs(b.g2), 1e-300));
  }
  return change;
}

int grown(int c, const CutoffPolicy &policy)
{
  return std::max(c + 1, static_cast<int>(std::ceil(policy.growth * c)));
}

void check_limit(int c, const CutoffPolicy &policy)
{
  if (c > policy.hard_max)
  {
    throw CutoffOverflow("required cutoff exceeds hard maximum " + std::to_string(policy.hard_max));
  }
}

}  // namespace

CutoffReport auto_cutoff(const ModelParams &params, const CutoffPolicy &policy)
{
  params.validate();
  policy.validate();

  CutoffReport report;
  report.seed = std::min(seed_cutoff(params, policy), policy.hard_max);

  int c = report.seed;
  check_limit(c, policy);
  Probe current = probe(params, c);
  Probe accepted_check{};
  for (;;)
  {
    if (top_two(current.populations) < policy.tail_tol)
    {
      const int c_check = grown(c, policy);
      check_limit(c_check, policy);
      Probe check = probe(params, c_check);
      const double change = relative_change(current.obs, check.obs);
      if (change < policy.obs_tol)
      {
        report.cutoff = c;
        report.tail = top_two(current.populations);
        report.obs_change = change;
        report.check_cutoff = c_check;
        accepted_check = std::move(check);
        break;
      }
      c = c_check;
      current = std::move(check);
      continue;
    }
    c = grown(c, policy);
    check_limit(c, policy);
    current = probe(params, c);
  }

  // Shrink once using the accepted populations as a predictor.
  const auto &p = current.populations;
  int c_small = c;
  for (int k = policy.min_cutoff; k < c; ++k)
  {
    if (std::abs(p(k)) + std::abs(p(k - 1)) < policy.tail_tol)
    {
      c_small = k;
      break;
    }
  }
  if (c_small < c)
  {
    const Probe small = probe(params, c_small);
    if (top_two(small.populations) < policy.tail_tol)
    {
      const int c_check = grown(c_small, policy);
      const Probe check = c_check == accepted_check.cutoff ? accepted_check
                          : c_check == c                    ? current
                                                            : probe(params, c_check);
      const double change = relative_change(small.obs, check.obs);
      if (change < policy.obs_tol)
      {
        report.cutoff = c_small;
        report.tail = top_two(small.populations);
        report.obs_change = change;
        report.check_cutoff = c_check;
      }
    }
  }
  return report;
}

int auto_cutoff(const ModelParams &params, double tail_tol, double obs_tol)
{
  CutoffPolicy policy;
  policy.tail_tol = tail_tol;
  policy.obs_tol = obs_tol;
  return auto_cutoff(params, policy).cutoff;
}

int resolve_cutoff(const ModelParams &params, const CutoffChoice &choice)
{
  if (!choice.automatic)
  {
    if (choice.fixed < 0)
    {
      throw InvalidParameter("fixed cutoff must be non-negative");
    }
    return choice.fixed;
  }
  return auto_cutoff(params, choice.policy).cutoff;
}

}  // namespace kerrcrit
