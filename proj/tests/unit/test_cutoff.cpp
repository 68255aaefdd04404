// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "kerrcrit/cutoff.hpp"
#include "kerrcrit/errors.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/steady_state.hpp"

using namespace kerrcrit;

TEST(AutoCutoff, UndrivenUsesMinimum)
{
  const CutoffReport r = auto_cutoff(ModelParams{2.0, 1.0, 0.0, 1.0, 5.0});
  EXPECT_EQ(r.cutoff, CutoffPolicy{}.min_cutoff);
}

TEST(AutoCutoff, LinearCavityNearMeanPhotonNumber)
{
  // n = F^2 / (Delta^2 + 1/4) = 4 for Delta = 2, F^2 = 17.
  const ModelParams p{2.0, 0.0, std::sqrt(17.0), 1.0, 1.0};
  const int c = auto_cutoff(p, 1e-8, 1e-6);
  EXPECT_GE(c, 12);
  EXPECT_LE(c, 30);
}

TEST(AutoCutoff, ReportedCriteriaHold)
{
  const ModelParams p{2.0, 1.0, 1.0, 1.0, 10.0};
  const CutoffPolicy policy;
  const CutoffReport r = auto_cutoff(p, policy);
  EXPECT_LT(r.tail, policy.tail_tol);
  EXPECT_LT(r.obs_change, policy.obs_tol);
  EXPECT_GT(r.check_cutoff, r.cutoff);

  const Observables at_c = observables(steady_state_numeric(build_liouvillian(p, r.cutoff)), p.n_scale);
  const Observables wide = observables(steady_state_numeric(build_liouvillian(p, 2 * r.cutoff)), p.n_scale);
  EXPECT_LT(std::abs(at_c.n - wide.n) / wide.n, policy.obs_tol);
  EXPECT_LT(std::abs(at_c.g2 - wide.g2) / wide.g2, policy.obs_tol);
}

TEST(AutoCutoff, GrowsWithSystemSize)
{
  int previous = 0;
  for (double n : {1.0, 3.0, 6.0, 12.0})
  {
    const int c = auto_cutoff(ModelParams{2.0, 1.0, 1.0, 1.0, n}).cutoff;
    EXPECT_GT(c, previous);
    previous = c;
  }
}

TEST(AutoCutoff, OverflowBeyondHardMax)
{
  CutoffPolicy policy;
  policy.hard_max = 8;
  EXPECT_THROW(auto_cutoff(ModelParams{2.0, 1.0, 1.0, 1.0, 10.0}, policy), CutoffOverflow);
}

TEST(CutoffPolicy, Validation)
{
  CutoffPolicy bad;
  bad.tail_tol = -1.0;
  EXPECT_THROW(bad.validate(), InvalidParameter);
  bad = {};
  bad.growth = 1.0;
  EXPECT_THROW(bad.validate(), InvalidParameter);
  bad = {};
  bad.hard_max = 1;
  EXPECT_THROW(bad.validate(), InvalidParameter);
}

TEST(ResolveCutoff, FixedChoiceIsPassedThrough)
{
  EXPECT_EQ(resolve_cutoff(ModelParams{2.0, 1.0, 1.0, 1.0, 1.0}, CutoffChoice::fixed_at(17)), 17);
  EXPECT_THROW(resolve_cutoff(ModelParams{2.0, 1.0, 1.0, 1.0, 1.0}, CutoffChoice::fixed_at(-1)),
               InvalidParameter);
}
