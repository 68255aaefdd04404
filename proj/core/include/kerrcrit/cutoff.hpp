// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kerrcrit/model.hpp"

namespace kerrcrit
{

struct CutoffPolicy
{
  double tail_tol = 1e-10;  // bound on the summed population of the top two Fock levels
  double obs_tol = 1e-7;    // relative change of n and g2 under a 25% larger cutoff
  int hard_max = 400;
  int min_cutoff = 2;
  double growth = 1.25;

  void validate() const;
};

struct CutoffReport
{
  int cutoff = 0;
  int seed = 0;
  double tail = 0.0;        // top-two population at the returned cutoff
  double obs_change = 0.0;  // relative change of n and g2 against the larger check cutoff
  int check_cutoff = 0;
};

// Seed from the semiclassical density: ceil(n + 4 sqrt(n) + 4) with
// n = N * max root, never below policy.min_cutoff.
int seed_cutoff(const ModelParams &params, const CutoffPolicy &policy = {});

// Smallest cutoff found by growing from the seed until the tail and
// observable criteria hold, followed by one verified attempt to shrink to
// the smallest level where the tail criterion already holds. Throws
// CutoffOverflow past policy.hard_max.
CutoffReport auto_cutoff(const ModelParams &params, const CutoffPolicy &policy = {});
int auto_cutoff(const ModelParams &params, double tail_tol, double obs_tol);

// Either a fixed cutoff or the auto policy.
struct CutoffChoice
{
  bool automatic = true;
  int fixed = 0;
  CutoffPolicy policy{};

  static CutoffChoice fixed_at(int cutoff)
  {
    CutoffChoice c;
    c.automatic = false;
    c.fixed = cutoff;
    return c;
  }
};

int resolve_cutoff(const ModelParams &params, const CutoffChoice &choice);

}  // namespace kerrcrit
