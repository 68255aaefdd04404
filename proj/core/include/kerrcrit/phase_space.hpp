// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <vector>

#include "kerrcrit/density_matrix.hpp"
#include "kerrcrit/model.hpp"

namespace kerrcrit
{

// Rectangular grid in the rescaled field alpha / sqrt(N).
struct GridSpec
{
  double re_min = -1.5;
  double re_max = 1.5;
  double im_min = -1.5;
  double im_max = 1.5;
  int nx = 201;
  int ny = 201;

  double dx() const { return (re_max - re_min) / (nx - 1); }
  double dy() const { return (im_max - im_min) / (ny - 1); }
  double x(int i) const { return re_min + dx() * i; }
  double y(int j) const { return im_min + dy() * j; }
  void validate() const;

  static GridSpec square(double half_width, int points = 201);
};

// 201 x 201 points over |Re|, |Im| <= 1.5 max(1, sqrt(n_sc,max)).
GridSpec default_grid(const ModelParams &params);

struct WignerField
{
  GridSpec grid;
  double n_scale = 1.0;
  std::vector<double> values;  // row-major, index j * nx + i for (x(i), y(j))

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
  // Area element in the unrescaled field alpha.
  double cell_area() const { return grid.dx() * grid.dy() * n_scale; }
  double normalization() const;
  double max_value() const;
  // Largest |W| on the grid boundary relative to the peak.
  double boundary_ratio() const;
  // Integral of (|alpha|^2 - 1/2) W, the photon number of the state.
  double mean_photon_number() const;
};

// W(alpha) = (2/pi) sum_k (-1)^k <k|D(-alpha) rho D(alpha)|k> evaluated in
// the Fock basis with the displaced-parity recurrence. Throws GridTooSmall
// when the boundary exceeds 1e-4 of the peak or the grid misses
// |alpha| <= sqrt(4 n).
WignerField wigner(const DensityMatrix &rho, const GridSpec &grid, double n_scale, unsigned threads = 1);

// Same as wigner() but widens the grid by 25% steps (up to 8 times) until
// the boundary check passes.
WignerField wigner_fitted(const DensityMatrix &rho, const GridSpec &grid, double n_scale, unsigned threads = 1);

struct WignerPeak
{
  double re = 0.0;  // rescaled location
  double im = 0.0;
  double height = 0.0;
  double weight = 0.0;  // integral of W over the watershed basin
};

constexpr double kDefaultPeakThreshold = 0.05;
constexpr double kBimodalWeightThreshold = 0.1;

// Local maxima over 8-neighbourhoods with height >= rel_threshold max(W),
// sorted by decreasing basin weight.
std::vector<WignerPeak> count_peaks(const WignerField &w, double rel_threshold = kDefaultPeakThreshold);

void write_csv(const WignerField &w, std::ostream &out);
// Header: int64 nx, int64 ny, float64 re_min, re_max, im_min, im_max,
// n_scale; then nx * ny float64 values in row-major order. Little-endian.
void write_binary(const WignerField &w, std::ostream &out);

}  // namespace kerrcrit
