// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "kerrcrit/errors.hpp"
#include "kerrcrit/parallel.hpp"
#include "kerrcrit/semiclassical.hpp"

namespace kerrcrit
{

void GridSpec::validate() const
{
  if (nx < 3 || ny < 3 || !(re_max > re_min) || !(im_max > im_min))
  {
    throw InvalidParameter("Wigner grid needs at least 3x3 points and increasing bounds");
  }
}

GridSpec GridSpec::square(double half_width, int points)
{
  GridSpec g;
  g.re_min = g.im_min = -half_width;
  g.re_max = g.im_max = half_width;
  g.nx = g.ny = points;
  return g;
}

GridSpec default_grid(const ModelParams &params)
{
  return GridSpec::square(1.5 * std::max(1.0, std::sqrt(max_semiclassical_density(params))));
}

double WignerField::normalization() const
{
  double s = 0.0;
  for (double v : values)
  {
    s += v;
  }
  return s * cell_area();
}

double WignerField::max_value() const
{
  return *std::max_element(values.begin(), values.end());
}

double WignerField::boundary_ratio() const
{
  double b = 0.0;
  for (int i = 0; i < grid.nx; ++i)
  {
    b = std::max({b, std::abs(at(i, 0)), std::abs(at(i, grid.ny - 1))});
  }
  for (int j = 0; j < grid.ny; ++j)
  {
    b = std::max({b, std::abs(at(0, j)), std::abs(at(grid.nx - 1, j))});
  }
  return b / max_value();
}

double WignerField::mean_photon_number() const
{
  double s = 0.0;
  for (int j = 0; j < grid.ny; ++j)
  {
    for (int i = 0; i < grid.nx; ++i)
    {
      const double r2 = n_scale * (grid.x(i) * grid.x(i) + grid.y(j) * grid.y(j));
      s += (r2 - 0.5) * at(i, j);
    }
  }
  return s * cell_area();
}

namespace
{

// Entries above this magnitude trigger an exact power-of-two rescaling of
// the recurrence vector.
constexpr double kRescaleAbove = 1e250;
constexpr int kRescaleExp = -830;

double wigner_point(const Eigen::MatrixXcd &rho, Complex alpha, std::vector<Complex> &wl)
{
  const Eigen::Index M = rho.rows();
  double log_scale = std::log(2.0 / std::numbers::pi) - 2.0 * std::norm(alpha);
  double total = 0.0;
  const Complex two_a = 2.0 * alpha;
  const Complex two_ac = std::conj(two_a);

  auto maybe_rescale = [&](double &acc, Complex &temp) {
    for (Eigen::Index k = 0; k < M; ++k)
    {
      wl[static_cast<std::size_t>(k)] = std::ldexp(wl[static_cast<std::size_t>(k)].real(), kRescaleExp) +
                                        Complex(0.0, std::ldexp(wl[static_cast<std::size_t>(k)].imag(), kRescaleExp));
    }
    temp = Complex(std::ldexp(temp.real(), kRescaleExp), std::ldexp(temp.imag(), kRescaleExp));
    acc = std::ldexp(acc, kRescaleExp);
    log_scale -= kRescaleExp * std::numbers::ln2;
  };

  // Row m = 0: kernels of |0><n|.
  double acc = rho(0, 0).real();
  wl[0] = 1.0;
  Complex unused = 0.0;
  for (Eigen::Index n = 1; n < M; ++n)
  {
    wl[static_cast<std::size_t>(n)] = two_a * wl[static_cast<std::size_t>(n - 1)] / std::sqrt(static_cast<double>(n));
    acc += 2.0 * (rho(0, n) * wl[static_cast<std::size_t>(n)]).real();
    if (std::abs(wl[static_cast<std::size_t>(n)]) > kRescaleAbove)
    {
      maybe_rescale(acc, unused);
    }
  }
  total += acc * std::exp(log_scale);

  for (Eigen::Index m = 1; m < M; ++m)
  {
    const double sm = std::sqrt(static_cast<double>(m));
    acc = 0.0;
    Complex temp = wl[static_cast<std::size_t>(m)];
    wl[static_cast<std::size_t>(m)] = (two_ac * temp - sm * wl[static_cast<std::size_t>(m - 1)]) / sm;
    acc += (rho(m, m) * wl[static_cast<std::size_t>(m)]).real();
    for (Eigen::Index n = m + 1; n < M; ++n)
    {
      const Complex next =
        (two_a * wl[static_cast<std::size_t>(n - 1)] - sm * temp) / std::sqrt(static_cast<double>(n));
      temp = wl[static_cast<std::size_t>(n)];
      wl[static_cast<std::size_t>(n)] = next;
      acc += 2.0 * (rho(m, n) * next).real();
      if (std::abs(next) > kRescaleAbove)
      {
        maybe_rescale(acc, temp);
      }
    }
    total += acc * std::exp(log_scale);
  }
  return total;
}

}  // namespace

WignerField wigner(const DensityMatrix &rho, const GridSpec &grid, double n_scale, unsigned threads)
{
  grid.validate();
  if (!(n_scale > 0.0))
  {
    throw InvalidParameter("n_scale must be positive");
  }
  const double n = std::max(0.0, rho.moment(1, 1).real());
  const double reach = std::sqrt(4.0 * n) / std::sqrt(n_scale);
  if (-grid.re_min < reach || grid.re_max < reach || -grid.im_min < reach || grid.im_max < reach)
  {
    throw GridTooSmall("Wigner grid does not cover |alpha| <= sqrt(4 n)");
  }

  WignerField w;
  w.grid = grid;
  w.n_scale = n_scale;
  w.values.assign(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny), 0.0);
  const double root_n = std::sqrt(n_scale);
  const Eigen::MatrixXcd &r = rho.entries();

  parallel_for(static_cast<std::size_t>(grid.ny), threads, [&](std::size_t j) {
    std::vector<Complex> wl(static_cast<std::size_t>(r.rows()));
    for (int i = 0; i < grid.nx; ++i)
    {
      const Complex alpha = root_n * Complex(grid.x(i), grid.y(static_cast<int>(j)));
      w.values[j * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(i)] = wigner_point(r, alpha, wl);
    }
  });

  if (w.boundary_ratio() > 1e-4)
  {
    throw GridTooSmall("Wigner boundary value " + std::to_string(w.boundary_ratio()) +
                       " of the peak exceeds 1e-4");
  }
  return w;
}

WignerField wigner_fitted(const DensityMatrix &rho, const GridSpec &grid, double n_scale, unsigned threads)
{
  GridSpec g = grid;
  for (int attempt = 0;; ++attempt)
  {
    try
    {
      return wigner(rho, g, n_scale, threads);
    }
    catch (const GridTooSmall &)
    {
      if (attempt >= 8)
      {
        throw;
      }
    }
    const double cx = 0.5 * (g.re_min + g.re_max);
    const double cy = 0.5 * (g.im_min + g.im_max);
    const double hx = 0.5 * (g.re_max - g.re_min) * 1.25;
    const double hy = 0.5 * (g.im_max - g.im_min) * 1.25;
    g.re_min = std::min(cx - hx, -hx);
    g.re_max = std::max(cx + hx, hx);
    g.im_min = std::min(cy - hy, -hy);
    g.im_max = std::max(cy + hy, hy);
  }
}

std::vector<WignerPeak> count_peaks(const WignerField &w, double rel_threshold)
{
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
  {
    throw InvalidParameter("rel_threshold must lie in (0, 1)");
  }
  const int nx = w.grid.nx;
  const int ny = w.grid.ny;
  const std::size_t cells = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);

  // Steepest-ascent pointer of every cell; local maxima point to themselves.
  std::vector<std::size_t> up(cells);
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      std::size_t best = static_cast<std::size_t>(j) * nx + i;
      double best_v = w.values[best];
      for (int dj = -1; dj <= 1; ++dj)
      {
        for (int di = -1; di <= 1; ++di)
        {
          const int a = i + di;
          const int b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || a >= nx || b < 0 || b >= ny)
          {
            continue;
          }
          const std::size_t k = static_cast<std::size_t>(b) * nx + a;
          if (w.values[k] > best_v)
          {
            best_v = w.values[k];
            best = k;
          }
        }
      }
      up[static_cast<std::size_t>(j) * nx + i] = best;
    }
  }
  std::vector<std::size_t> root(cells);
  for (std::size_t k = 0; k < cells; ++k)
  {
    std::size_t r = k;
    while (up[r] != r)
    {
      r = up[r];
    }
    root[k] = r;
    // Path compression keeps the walk linear overall.
    std::size_t s = k;
    while (up[s] != r && up[s] != s)
    {
      const std::size_t nxt = up[s];
      up[s] = r;
      s = nxt;
    }
  }

  const double peak = w.max_value();
  std::vector<double> basin(cells, 0.0);
  for (std::size_t k = 0; k < cells; ++k)
  {
    basin[root[k]] += w.values[k];
  }
  std::vector<WignerPeak> peaks;
  for (std::size_t k = 0; k < cells; ++k)
  {
    if (up[k] == k && w.values[k] >= rel_threshold * peak)
    {
      const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
      const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
      peaks.push_back({w.grid.x(i), w.grid.y(j), w.values[k], basin[k] * w.cell_area()});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const WignerPeak &a, const WignerPeak &b) { return a.weight > b.weight; });
  return peaks;
}

void write_csv(const WignerField &w, std::ostream &out)
{
  out << "re,im,w\n";
  char buf[96];
  for (int j = 0; j < w.grid.ny; ++j)
  {
    for (int i = 0; i < w.grid.nx; ++i)
    {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", w.grid.x(i), w.grid.y(j), w.at(i, j));
      out << buf;
    }
  }
}

void write_binary(const WignerField &w, std::ostream &out)
{
  detail::put_i64(out, w.grid.nx);
  detail::put_i64(out, w.grid.ny);
  detail::put_f64(out, w.grid.re_min);
  detail::put_f64(out, w.grid.re_max);
  detail::put_f64(out, w.grid.im_min);
  detail::put_f64(out, w.grid.im_max);
  detail::put_f64(out, w.n_scale);
  for (double v : w.values)
  {
    detail::put_f64(out, v);
  }
  if (!out)
  {
    throw FormatError("failed to write Wigner dump");
  }
}

}  // namespace kerrcrit
