// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/bose_hubbard.hpp"

#include <cmath>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

void BoseHubbardParams::validate() const
{
  if (dimension < 1 || !(sites >= 1.0) || !std::isfinite(hopping) || !std::isfinite(pump_detuning))
  {
    throw InvalidParameter("Bose-Hubbard lattice needs d >= 1, N_sites >= 1 and finite couplings");
  }
}

double k0_band_offset(const BoseHubbardParams &bh)
{
  return -2.0 * static_cast<double>(bh.dimension) * bh.hopping;
}

ModelParams k0_reduce(const BoseHubbardParams &bh)
{
  bh.validate();
  ModelParams p;
  p.delta = bh.pump_detuning - k0_band_offset(bh);
  p.u_tilde = bh.u_tilde;
  p.f_tilde = bh.f_tilde;
  p.gamma = bh.gamma;
  p.n_scale = bh.sites;
  p.validate();
  return p;
}

}  // namespace kerrcrit
