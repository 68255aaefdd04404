// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/criticality.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <limits>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/parallel.hpp"
#include "kerrcrit/semiclassical.hpp"

namespace kerrcrit
{

namespace
{

SweepRecord evaluate(const ModelParams &p, int cutoff, const SolverOptions &solver)
{
  SweepRecord rec;
  rec.n_scale = p.n_scale;
  rec.f_tilde = p.f_tilde;
  rec.cutoff_used = cutoff;
  const auto t0 = std::chrono::steady_clock::now();
  try
  {
    const PointAnalysis a = analyze_point(p, cutoff, solver);
    rec.lambda = a.gap.lambda;
    rec.residual = a.gap.residual;
    rec.method = a.gap.method;
    rec.n_rescaled = a.observables.n_rescaled;
    rec.g2 = a.observables.g2;
  }
  catch (const std::exception &e)
  {
    rec.err = error_name(e) + ": " + e.what();
    rec.lambda = Complex(std::nan(""), std::nan(""));
    rec.n_rescaled = std::nan("");
    rec.g2 = std::nan("");
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

std::vector<SweepRecord> sweep_gap(const ModelParams &base, const std::vector<double> &sizes,
                                   const std::vector<double> &drives, const SweepOptions &options)
{
  if (sizes.empty() || drives.empty())
  {
    throw InvalidParameter("sweep grids must be nonempty");
  }
  base.validate();

  // Per-size cutoffs are resolved first so the point tasks are independent.
  std::vector<int> size_cutoff(sizes.size(), -1);
  std::vector<std::string> size_err(sizes.size());
  if (!options.cutoff.automatic || options.scope == CutoffScope::per_size)
  {
    const double f_max = *std::max_element(drives.begin(), drives.end());
    parallel_for(sizes.size(), options.threads, [&](std::size_t i) {
      try
      {
        size_cutoff[i] = resolve_cutoff(base.with_size(sizes[i]).with_drive(f_max), options.cutoff);
      }
      catch (const std::exception &e)
      {
        size_err[i] = error_name(e) + ": " + e.what();
      }
    });
  }

  std::vector<SweepRecord> records(sizes.size() * drives.size());
  parallel_for(records.size(), options.threads, [&](std::size_t k) {
    const std::size_t i = k / drives.size();
    const std::size_t j = k % drives.size();
    const ModelParams p = base.with_size(sizes[i]).with_drive(drives[j]);
    if (!size_err[i].empty())
    {
      SweepRecord rec;
      rec.n_scale = p.n_scale;
      rec.f_tilde = p.f_tilde;
      rec.err = size_err[i];
      rec.lambda = Complex(std::nan(""), std::nan(""));
      rec.n_rescaled = rec.g2 = std::nan("");
      records[k] = rec;
      return;
    }
    int cutoff = size_cutoff[i];
    if (cutoff < 0)
    {
      try
      {
        cutoff = resolve_cutoff(p, options.cutoff);
      }
      catch (const std::exception &e)
      {
        SweepRecord rec;
        rec.n_scale = p.n_scale;
        rec.f_tilde = p.f_tilde;
        rec.err = error_name(e) + ": " + e.what();
        rec.lambda = Complex(std::nan(""), std::nan(""));
        rec.n_rescaled = rec.g2 = std::nan("");
        records[k] = rec;
        return;
      }
    }
    records[k] = evaluate(p, cutoff, options.solver);
  });
  flag_continuity(records);
  return records;
}

void flag_continuity(std::vector<SweepRecord> &records, double max_spacing, double max_jump)
{
  for (std::size_t k = 1; k < records.size(); ++k)
  {
    const SweepRecord &a = records[k - 1];
    SweepRecord &b = records[k];
    if (a.n_scale != b.n_scale || !a.ok() || !b.ok())
    {
      continue;
    }
    if (std::abs(b.f_tilde - a.f_tilde) <= max_spacing + 1e-12 && std::abs(b.lambda - a.lambda) > max_jump)
    {
      b.continuity_flag = true;
    }
  }
}

MinimumSearch bracketed_minimum(const std::function<double(double)> &g, double lo, double hi, int coarse_points,
                                double tol, unsigned threads)
{
  if (!(hi > lo) || coarse_points < 3 || !(tol > 0.0))
  {
    throw InvalidParameter("minimum search needs hi > lo, at least 3 coarse points and tol > 0");
  }
  MinimumSearch out;
  const auto npts = static_cast<std::size_t>(coarse_points);
  std::vector<double> xs(npts), vs(npts);
  for (std::size_t i = 0; i < npts; ++i)
  {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(npts - 1);
  }
  parallel_for(npts, threads, [&](std::size_t i) { vs[i] = g(xs[i]); });
  for (std::size_t i = 0; i < npts; ++i)
  {
    out.samples.emplace_back(xs[i], vs[i]);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < npts; ++i)
  {
    if (vs[i] < vs[best] || std::isnan(vs[best]))
    {
      best = i;
    }
  }
  if (std::isnan(vs[best]) || best == 0 || best + 1 == npts)
  {
    throw NoMinimumInBracket("coarse minimum lies on the bracket boundary [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
  }

  // Golden section on the two cells around the coarse minimum.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = xs[best - 1];
  double b = xs[best + 1];
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  out.samples.emplace_back(c, gc);
  out.samples.emplace_back(d, gd);
  while (b - a > tol)
  {
    if (gc < gd)
    {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
      out.samples.emplace_back(c, gc);
    }
    else
    {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
      out.samples.emplace_back(d, gd);
    }
  }
  out.x = xs[best];
  out.value = vs[best];
  for (const auto &[x, v] : out.samples)
  {
    if (v < out.value)
    {
      out.x = x;
      out.value = v;
    }
  }
  return out;
}

FcResult find_fc(const ModelParams &base, double n_scale, std::optional<std::pair<double, double>> bracket,
                 const FcOptions &options)
{
  const ModelParams p0 = base.with_size(n_scale);
  p0.validate();
  if (!bracket)
  {
    const BistabilityEdges e = bistability_edges(p0.delta, p0.u_tilde, p0.gamma);
    if (!e.exists)
    {
      throw NoMinimumInBracket("no bistability window to bracket the transition");
    }
    bracket = std::make_pair(e.f_minus, e.f_plus);
  }
  FcResult res;
  res.n_scale = n_scale;
  res.cutoff = resolve_cutoff(p0.with_drive(bracket->second), options.cutoff);

  std::mutex cache_mutex;
  std::map<double, Complex> cache;
  auto gap_at = [&](double f) {
    const Superoperator L = build_liouvillian(p0.with_drive(f), res.cutoff);
    const Complex lam = liouvillian_gap(L, options.solver).lambda;
    const std::lock_guard<std::mutex> lock(cache_mutex);
    cache[f] = lam;
    return std::abs(lam.real());
  };
  const MinimumSearch m =
    bracketed_minimum(gap_at, bracket->first, bracket->second, options.coarse_points, options.tol, options.threads);
  res.f_c = m.x;
  res.lambda = cache.at(m.x);
  res.tau = -1.0 / res.lambda.real();
  for (const auto &[f, v] : m.samples)
  {
    res.samples.emplace_back(f, -1.0 / cache.at(f).real());
  }
  return res;
}

PowerLawFit fit_power_law(const std::vector<SweepRecord> &records, double f_c, double tau_c,
                          const PowerLawWindow &window)
{
  struct Pt
  {
    double d, tau;
  };
  std::vector<Pt> pts;
  double n_scale = 0.0;
  for (const auto &r : records)
  {
    if (!r.ok() || !(r.f_tilde > f_c) || !(r.lambda.real() < 0.0))
    {
      continue;
    }
    if (n_scale != 0.0 && r.n_scale != n_scale)
    {
      throw InvalidParameter("fit_power_law expects records of a single N");
    }
    n_scale = r.n_scale;
    pts.push_back({r.f_tilde - f_c, -1.0 / r.lambda.real()});
  }
  if (pts.size() < 6)
  {
    throw WindowTooSmall("power-law fit needs at least 6 records beyond F_c");
  }
  std::sort(pts.begin(), pts.end(), [](const Pt &a, const Pt &b) { return a.d < b.d; });
  const auto drop = static_cast<std::size_t>(std::floor(window.far_frac * static_cast<double>(pts.size()) + 1e-9));
  pts.resize(pts.size() - drop);

  std::vector<double> x, y;
  PowerLawFit out;
  out.d_min = std::numeric_limits<double>::infinity();
  for (const auto &pt : pts)
  {
    if (pt.tau >= (1.0 - window.plateau_frac) * tau_c || pt.d < window.min_distance)
    {
      continue;
    }
    x.push_back(std::log(pt.d));
    y.push_back(std::log(pt.tau));
    out.d_min = std::min(out.d_min, pt.d);
    out.d_max = std::max(out.d_max, pt.d);
  }
  if (x.size() < 3)
  {
    throw WindowTooSmall("power-law window keeps fewer than 3 points");
  }
  const LinearFit lf = linear_fit(x, y);
  out.points = x.size();
  out.slope_magnitude = -lf.slope;
  out.intercept = lf.intercept;
  out.r2 = lf.r2;
  out.b = out.slope_magnitude / n_scale;
  out.b_se = lf.slope_se / n_scale;
  const double m = lf.slope;
  const double log_f = -lf.intercept / m;
  out.f = std::exp(log_f);
  const double var = lf.intercept_se * lf.intercept_se / (m * m) +
                     lf.intercept * lf.intercept * lf.slope_se * lf.slope_se / (m * m * m * m) -
                     2.0 * lf.intercept * lf.covariance / (m * m * m);
  out.f_se = out.f * std::sqrt(std::max(var, 0.0));
  return out;
}

ExponentialFit fit_exponential_tau(const std::vector<double> &sizes, const std::vector<double> &taus)
{
  if (sizes.size() != taus.size())
  {
    throw DimensionMismatch("size and tau tables differ in length");
  }
  if (sizes.size() < 4)
  {
    throw DegenerateFit("exponential fit needs at least 4 points");
  }
  std::vector<double> y;
  for (double t : taus)
  {
    if (!(t > 0.0))
    {
      throw DegenerateFit("tunneling times must be positive");
    }
    y.push_back(std::log(t));
  }
  const LinearFit lf = linear_fit(sizes, y);
  ExponentialFit out;
  out.kappa = lf.slope;
  out.tau0 = std::exp(lf.intercept);
  out.r2 = lf.r2;
  out.kappa_se = lf.slope_se;
  out.log_tau0_se = lf.intercept_se;
  return out;
}

Extrapolation extrapolate_1overN(const std::vector<double> &sizes, const std::vector<double> &values,
                                 const std::vector<double> &sigmas, const ExtrapolationPolicy &policy)
{
  if (sizes.size() != values.size() || (!sigmas.empty() && sigmas.size() != sizes.size()))
  {
    throw DimensionMismatch("extrapolation inputs differ in length");
  }
  if (sizes.size() < std::max<std::size_t>(policy.min_points, 2))
  {
    throw DegenerateFit("extrapolation needs at least " + std::to_string(policy.min_points) + " points");
  }
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  const auto keep = std::max<std::size_t>(
    policy.min_points,
    static_cast<std::size_t>(std::ceil(policy.keep_fraction * static_cast<double>(sizes.size()) - 1e-9)));
  order.resize(std::min(keep, order.size()));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });

  std::vector<double> x, y, w;
  Extrapolation out;
  for (std::size_t i : order)
  {
    if (!(sizes[i] > 0.0))
    {
      throw DegenerateFit("sizes must be positive");
    }
    x.push_back(1.0 / sizes[i]);
    y.push_back(values[i]);
    if (!sigmas.empty())
    {
      w.push_back(sigmas[i] > 0.0 ? 1.0 / (sigmas[i] * sigmas[i]) : 1.0);
    }
    out.sizes_used.push_back(sizes[i]);
  }
  const LinearFit lf = linear_fit(x, y, policy.weight_by_sigma ? w : std::vector<double>{});
  out.limit = lf.intercept;
  out.slope = lf.slope;

  // The intercept is linear in y; carry the per-point sigmas through its
  // coefficients and combine with the regression scatter.
  double propagated = 0.0;
  if (!sigmas.empty())
  {
    const bool weighted = policy.weight_by_sigma;
    double sw = 0.0, sx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
      const double wk = weighted ? w[k] : 1.0;
      sw += wk;
      sx += wk * x[k];
    }
    const double xm = sx / sw;
    double sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
      sxx += (weighted ? w[k] : 1.0) * (x[k] - xm) * (x[k] - xm);
    }
    for (std::size_t k = 0; k < x.size(); ++k)
    {
      const double wk = weighted ? w[k] : 1.0;
      const double ck = wk * (1.0 / sw - xm * (x[k] - xm) / sxx);
      const double sk = sigmas[order[k]];
      propagated += ck * ck * sk * sk;
    }
  }
  out.propagated_error = std::sqrt(propagated);
  out.std_error = std::sqrt(lf.intercept_se * lf.intercept_se + propagated);
  return out;
}

CriticalAnalysis run_critical_analysis(const ModelParams &base, const std::vector<double> &sizes,
                                       const CriticalOptions &options)
{
  if (sizes.empty())
  {
    throw InvalidParameter("critical analysis needs at least one size");
  }
  base.validate();
  CriticalAnalysis out;
  CriticalFit &fit = out.fit;
  fit.options = options;
  const BistabilityEdges edges = bistability_edges(base.delta, base.u_tilde, base.gamma);
  if (!edges.exists && !options.bracket)
  {
    throw NoMinimumInBracket("no bistability window; supply a bracket");
  }
  const std::pair<double, double> bracket = options.bracket.value_or(std::make_pair(edges.f_minus, edges.f_plus));
  fit.f_plus = edges.exists ? edges.f_plus : bracket.second;

  auto fitted = [&](double n) {
    return options.fit_sizes.empty() ||
           std::find(options.fit_sizes.begin(), options.fit_sizes.end(), n) != options.fit_sizes.end();
  };

  for (double n : sizes)
  {
    CriticalRow row;
    row.n_scale = n;
    try
    {
      const ModelParams pn = base.with_size(n);
      row.cutoff = options.fixed_cutoff ? options.cutoff
                                        : auto_cutoff(pn.with_drive(std::max(bracket.second, fit.f_plus)),
                                                      options.cutoff_policy)
                                            .cutoff;
      FcOptions fo;
      fo.cutoff = CutoffChoice::fixed_at(row.cutoff);
      fo.solver = options.sweep.solver;
      fo.coarse_points = options.coarse_points;
      fo.tol = options.fc_tol;
      fo.threads = options.sweep.threads;
      const FcResult fc = find_fc(base, n, bracket, fo);
      row.f_c = fc.f_c;
      row.tau = fc.tau;
      row.lambda_c = fc.lambda;
      for (const auto &[f, t] : fc.samples)
      {
        if (std::abs(f - fc.f_c) <= 2.0 * (bracket.second - bracket.first) / (options.coarse_points - 1))
        {
          row.plateau_tau = std::max(row.plateau_tau, t);
        }
      }

      if (fitted(n))
      {
        const double D = fit.f_plus - row.f_c;
        std::vector<double> drives;
        for (int k = 1; k <= options.grid_points; ++k)
        {
          drives.push_back(row.f_c + D * static_cast<double>(k) / static_cast<double>(options.grid_points));
        }
        SweepOptions so = options.sweep;
        so.cutoff = CutoffChoice::fixed_at(row.cutoff);
        auto recs = sweep_gap(base, {n}, drives, so);

        PowerLawWindow w = options.window;
        w.min_distance = std::max(w.min_distance, options.lower_cut_frac * D);
        row.power = fit_power_law(recs, row.f_c, row.tau, w);
        row.has_power_law = true;
        PowerLawWindow w5 = w, w20 = w;
        w5.plateau_frac = w5.far_frac = 0.05;
        w20.plateau_frac = w20.far_frac = 0.20;
        row.b_window_5 = fit_power_law(recs, row.f_c, row.tau, w5).b;
        row.b_window_20 = fit_power_law(recs, row.f_c, row.tau, w20).b;
        row.window_flag = std::abs(row.b_window_5 - row.power.b) >= 0.15 * row.power.b ||
                          std::abs(row.b_window_20 - row.power.b) >= 0.15 * row.power.b;
        out.records.insert(out.records.end(), recs.begin(), recs.end());
      }
    }
    catch (const std::exception &e)
    {
      row.err = error_name(e) + ": " + e.what();
    }
    fit.rows.push_back(row);
  }

  std::vector<double> ns, taus, fit_ns, fcs, bs, b_se, log_fs, log_f_se, slopes;
  for (const auto &r : fit.rows)
  {
    if (!r.err.empty())
    {
      continue;
    }
    ns.push_back(r.n_scale);
    taus.push_back(r.tau);
    if (r.has_power_law)
    {
      fit_ns.push_back(r.n_scale);
      fcs.push_back(r.f_c);
      bs.push_back(r.power.b);
      b_se.push_back(r.power.b_se);
      log_fs.push_back(std::log(r.power.f));
      log_f_se.push_back(r.power.f_se / r.power.f);
      slopes.push_back(r.power.slope_magnitude);
    }
  }
  if (ns.size() >= 4)
  {
    fit.tau_fit = fit_exponential_tau(ns, taus);
  }
  if (fit_ns.size() >= options.extrapolation.min_points)
  {
    fit.f_c_inf = extrapolate_1overN(fit_ns, fcs, {}, options.extrapolation);
    fit.b_inf = extrapolate_1overN(fit_ns, bs, b_se, options.extrapolation);
    fit.log_f_inf = extrapolate_1overN(fit_ns, log_fs, log_f_se, options.extrapolation);
    fit.f_inf = std::exp(fit.log_f_inf.limit);
    fit.f_inf_se = fit.f_inf * fit.log_f_inf.std_error;
  }
  if (fit_ns.size() >= 2)
  {
    fit.slope_vs_n = linear_fit(fit_ns, slopes);
  }
  return out;
}

}  // namespace kerrcrit
