// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit_app/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/phase_space.hpp"
#include "kerrcrit/semiclassical.hpp"
#include "kerrcrit/steady_state.hpp"
#include "kerrcrit_app/io.hpp"

#ifndef KERRCRIT_VERSION_STRING
#define KERRCRIT_VERSION_STRING "unknown"
#endif

namespace kerrcrit::app
{

namespace fs = std::filesystem;

std::string version() { return KERRCRIT_VERSION_STRING; }

Json metadata(const RunConfig &config)
{
  return {{"generator", "kerrcrit"},
          {"version", version()},
          {"units", "rates, detunings and drives in units of gamma; times in units of 1/gamma"},
          {"vectorization", "column stacking, index(m, n) = m + (cutoff + 1) n"},
          {"extrapolation_form", "linear in 1/N over the largest-N share; f extrapolated through ln f"},
          {"config", to_json(config)}};
}

namespace
{

Json cutoff_json(const CutoffBlock &c)
{
  return {{"mode", c.automatic ? "auto" : "fixed"}, {"fixed", c.fixed}, {"tail_tol", c.policy.tail_tol},
          {"obs_tol", c.policy.obs_tol}, {"hard_max", c.policy.hard_max}};
}

Json linear_fit_json(const LinearFit &f)
{
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"slope_se", f.slope_se},
          {"intercept_se", f.intercept_se}, {"covariance", f.covariance}, {"r2", real_json(f.r2)},
          {"points", f.points}, {"residuals", f.residuals}};
}

Json extrapolation_json(const Extrapolation &e)
{
  return {{"limit", real_json(e.limit)}, {"std_error", real_json(e.std_error)},
          {"propagated_error", real_json(e.propagated_error)}, {"slope", real_json(e.slope)},
          {"sizes_used", e.sizes_used}};
}

Json power_json(const PowerLawFit &p)
{
  return {{"b", p.b}, {"f", p.f}, {"slope_magnitude", p.slope_magnitude}, {"intercept", p.intercept},
          {"r2", p.r2}, {"b_se", p.b_se}, {"f_se", p.f_se}, {"d_min", real_json(p.d_min)},
          {"d_max", p.d_max}, {"points", p.points}};
}

Json critical_fit_json(const CriticalFit &fit)
{
  Json rows = Json::array();
  for (const CriticalRow &r : fit.rows)
  {
    rows.push_back({{"n_scale", r.n_scale},
                    {"f_c", r.f_c},
                    {"tau", r.tau},
                    {"lambda_c", complex_json(r.lambda_c)},
                    {"cutoff", r.cutoff},
                    {"plateau_tau", r.plateau_tau},
                    {"has_power_law", r.has_power_law},
                    {"power", r.has_power_law ? power_json(r.power) : Json(nullptr)},
                    {"b_window_5", r.has_power_law ? Json(r.b_window_5) : Json(nullptr)},
                    {"b_window_20", r.has_power_law ? Json(r.b_window_20) : Json(nullptr)},
                    {"window_flag", r.window_flag},
                    {"err", r.err}});
  }
  const CriticalOptions &o = fit.options;
  return {{"rows", rows},
          {"f_plus", fit.f_plus},
          {"f_c_inf", extrapolation_json(fit.f_c_inf)},
          {"b_inf", extrapolation_json(fit.b_inf)},
          {"log_f_inf", extrapolation_json(fit.log_f_inf)},
          {"f_inf", real_json(fit.f_inf)},
          {"f_inf_se", real_json(fit.f_inf_se)},
          {"tau_fit",
           {{"kappa", fit.tau_fit.kappa},
            {"tau0", fit.tau_fit.tau0},
            {"r2", fit.tau_fit.r2},
            {"kappa_se", fit.tau_fit.kappa_se},
            {"log_tau0_se", fit.tau_fit.log_tau0_se}}},
          {"slope_vs_n", linear_fit_json(fit.slope_vs_n)},
          {"windows",
           {{"plateau_frac", o.window.plateau_frac},
            {"far_frac", o.window.far_frac},
            {"lower_cut_frac", o.lower_cut_frac},
            {"grid_points", o.grid_points},
            {"robustness_variants", {0.05, 0.20}},
            {"robustness_flag_threshold", 0.15}}},
          {"fc_search", {{"coarse_points", o.coarse_points}, {"tol", o.fc_tol}}},
          {"extrapolation_policy",
           {{"keep_fraction", o.extrapolation.keep_fraction},
            {"min_points", o.extrapolation.min_points},
            {"weight_by_sigma", o.extrapolation.weight_by_sigma}}}};
}

Json extrapolation_doc(const Json &fits, const ExtrapolationPolicy &policy)
{
  std::vector<double> ns, fcs, bs, b_se, log_fs, log_f_se;
  for (const Json &r : fits.at("rows"))
  {
    if (!r.at("err").get<std::string>().empty() || !r.at("has_power_law").get<bool>())
    {
      continue;
    }
    const Json &pw = r.at("power");
    ns.push_back(r.at("n_scale").get<double>());
    fcs.push_back(r.at("f_c").get<double>());
    bs.push_back(pw.at("b").get<double>());
    b_se.push_back(pw.at("b_se").get<double>());
    log_fs.push_back(std::log(pw.at("f").get<double>()));
    log_f_se.push_back(pw.at("f_se").get<double>() / pw.at("f").get<double>());
  }
  if (ns.size() < policy.min_points)
  {
    throw TaskFailed("extrapolation needs " + std::to_string(policy.min_points) + " sizes with power-law fits, found " +
                     std::to_string(ns.size()));
  }
  const Extrapolation fc = extrapolate_1overN(ns, fcs, {}, policy);
  const Extrapolation b = extrapolate_1overN(ns, bs, b_se, policy);
  const Extrapolation lf = extrapolate_1overN(ns, log_fs, log_f_se, policy);
  const double f_plus = fits.at("f_plus").get<double>();
  return {{"form", "value(N) = limit + slope / N, fitted over the largest-N share"},
          {"f_c_inf", extrapolation_json(fc)},
          {"b_inf", extrapolation_json(b)},
          {"log_f_inf", extrapolation_json(lf)},
          {"f_inf", std::exp(lf.limit)},
          {"f_inf_se", std::exp(lf.limit) * lf.std_error},
          {"f_plus", f_plus},
          {"edge_distance", f_plus - fc.limit}};
}

Json observables_json(const Observables &o)
{
  return {{"n", o.n}, {"n_over_N", o.n_rescaled}, {"g2", real_json(o.g2)}, {"source", std::string(to_string(o.source))}};
}

std::string size_tag(double n)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", n);
  return buf;
}

void write_sidecar(const fs::path &file, Json meta)
{
  write_json(file.string() + ".meta.json", meta);
}

}  // namespace

Runner::Runner(RunConfig config) : config_(std::move(config)) {}

int Runner::run()
{
  fs::create_directories(config_.output);
  reports_.clear();
  for (Task t : config_.tasks)
  {
    TaskReport rep;
    rep.task = std::string(to_string(t));
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
      rep.files = run_task(t);
      rep.ok = true;
    }
    catch (const TaskFailed &e)
    {
      rep.error = e.what();
    }
    catch (const std::exception &e)
    {
      rep.error = error_name(e) + ": " + e.what();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    reports_.push_back(rep);
  }

  Json tasks = Json::array();
  bool ok = true;
  for (const TaskReport &r : reports_)
  {
    tasks.push_back({{"task", r.task},
                     {"status", r.ok ? "ok" : "failed"},
                     {"error", r.error},
                     {"files", r.files},
                     {"seconds", r.seconds}});
    ok = ok && r.ok;
  }
  write_json(path("manifest.json"), {{"meta", metadata(config_)}, {"ok", ok}, {"tasks", tasks}});
  return ok ? 0 : 1;
}

std::vector<std::string> Runner::run_task(Task task)
{
  switch (task)
  {
  case Task::steady:
    return task_steady();
  case Task::gap:
    return task_gap();
  case Task::sweep:
    return task_sweep();
  case Task::wigner:
    return task_wigner();
  case Task::semiclassical:
    return task_semiclassical();
  case Task::fit:
    return task_fit();
  case Task::extrapolate:
    return task_extrapolate();
  case Task::mapcheck:
    return task_mapcheck();
  }
  throw TaskFailed("unknown task");
}

std::vector<std::string> Runner::task_steady()
{
  const ModelParams p = config_.point_params();
  const int c = resolve_cutoff(p, config_.cutoff.choice());
  const Superoperator L = build_liouvillian(p, c);
  const ConstrainedSolver solver(L);
  const DensityMatrix &rho = solver.steady_state();
  const StateValidity v = rho.validity();
  Json analytic = nullptr;
  try
  {
    analytic = observables_json(observables(p));
  }
  catch (const SeriesDivergence &)
  {
  }
  Json doc = {{"meta", metadata(config_)},
              {"point", {{"N", p.n_scale}, {"F_tilde", p.f_tilde}}},
              {"cutoff", c},
              {"cutoff_policy", cutoff_json(config_.cutoff)},
              {"numeric", observables_json(observables(rho, p.n_scale))},
              {"analytic", analytic},
              {"field", complex_json(rho.moment(0, 1))},
              {"residual", solver.residual()},
              {"validity",
               {{"hermiticity_error", v.hermiticity_error},
                {"trace_error", v.trace_error},
                {"min_eigenvalue", v.min_eigenvalue}}}};
  write_json(path("steady.json"), doc);
  return {"steady.json"};
}

std::vector<std::string> Runner::task_gap()
{
  const ModelParams p = config_.point_params();
  const int c = resolve_cutoff(p, config_.cutoff.choice());
  const PointAnalysis a = analyze_point(p, c, config_.solver);
  Json doc = {{"meta", metadata(config_)},
              {"point", {{"N", p.n_scale}, {"F_tilde", p.f_tilde}}},
              {"cutoff", c},
              {"cutoff_policy", cutoff_json(config_.cutoff)},
              {"lambda", complex_json(a.gap.lambda)},
              {"relaxation_time", a.gap.relaxation_time},
              {"method", std::string(to_string(a.gap.method))},
              {"residual", a.gap.residual},
              {"observables", observables_json(a.observables)}};
  write_json(path("gap.json"), doc);
  return {"gap.json"};
}

std::vector<std::string> Runner::task_sweep()
{
  SweepOptions so;
  so.cutoff = config_.cutoff.choice();
  so.scope = config_.sweep.scope;
  so.solver = config_.solver;
  so.threads = config_.threads;
  const auto records = sweep_gap(config_.base(), config_.sweep.sizes, config_.sweep.drives(), so);
  write_atomic(path("sweep.csv"), [&](std::ostream &out) { write_sweep_csv(out, records); });

  Json cutoffs = Json::object();
  Json flagged = Json::array();
  std::size_t failed = 0;
  double wall = 0.0;
  for (const SweepRecord &r : records)
  {
    const std::string key = size_tag(r.n_scale);
    if (!cutoffs.contains(key))
    {
      cutoffs[key] = {{"min", r.cutoff_used}, {"max", r.cutoff_used}};
    }
    cutoffs[key]["min"] = std::min(cutoffs[key]["min"].get<int>(), r.cutoff_used);
    cutoffs[key]["max"] = std::max(cutoffs[key]["max"].get<int>(), r.cutoff_used);
    if (r.continuity_flag)
    {
      flagged.push_back({{"N", r.n_scale}, {"F_tilde", r.f_tilde}});
    }
    failed += r.ok() ? 0 : 1;
    wall += r.wall_time;
  }
  write_sidecar(path("sweep.csv"), {{"meta", metadata(config_)},
                                    {"columns", "N,F_tilde,Re_lambda,Im_lambda,n_over_N,g2,cutoff,err"},
                                    {"cutoffs_used", cutoffs},
                                    {"cutoff_policy", cutoff_json(config_.cutoff)},
                                    {"continuity_flags", flagged},
                                    {"failed_points", failed},
                                    {"wall_time_total", wall}});
  if (failed > 0)
  {
    throw TaskFailed(std::to_string(failed) + " sweep point(s) failed; see the err column of sweep.csv");
  }
  return {"sweep.csv", "sweep.csv.meta.json"};
}

std::vector<std::string> Runner::task_wigner()
{
  const ModelParams p = config_.point_params();
  const int c = resolve_cutoff(p, config_.cutoff.choice());
  const DensityMatrix rho = steady_state_numeric(build_liouvillian(p, c));
  GridSpec grid = config_.wigner.half_width ? GridSpec::square(*config_.wigner.half_width, config_.wigner.points)
                                            : default_grid(p);
  grid.nx = grid.ny = config_.wigner.points;
  const WignerField w = wigner_fitted(rho, grid, p.n_scale, config_.threads);
  const auto peaks = count_peaks(w, config_.wigner.peak_threshold);

  write_atomic(path("wigner.csv"), [&](std::ostream &out) { write_csv(w, out); });
  write_atomic(path("wigner.bin"), [&](std::ostream &out) { write_binary(w, out); });
  Json jp = Json::array();
  double secondary = 0.0;
  for (std::size_t k = 0; k < peaks.size(); ++k)
  {
    jp.push_back({{"re", peaks[k].re}, {"im", peaks[k].im}, {"height", peaks[k].height}, {"weight", peaks[k].weight}});
    secondary += k > 0 ? peaks[k].weight : 0.0;
  }
  Json doc = {{"meta", metadata(config_)},
              {"point", {{"N", p.n_scale}, {"F_tilde", p.f_tilde}}},
              {"cutoff", c},
              {"cutoff_policy", cutoff_json(config_.cutoff)},
              {"grid",
               {{"re_min", w.grid.re_min},
                {"re_max", w.grid.re_max},
                {"im_min", w.grid.im_min},
                {"im_max", w.grid.im_max},
                {"nx", w.grid.nx},
                {"ny", w.grid.ny},
                {"coordinates", "rescaled field alpha / sqrt(N)"}}},
              {"normalization", w.normalization()},
              {"max_value", w.max_value()},
              {"peak_threshold", config_.wigner.peak_threshold},
              {"peaks", jp},
              {"secondary_weight", secondary},
              {"bimodal", peaks.size() >= 2 && secondary >= kBimodalWeightThreshold}};
  write_json(path("wigner.json"), doc);
  write_sidecar(path("wigner.csv"), {{"meta", metadata(config_)}, {"summary", "wigner.json"}});
  return {"wigner.csv", "wigner.csv.meta.json", "wigner.bin", "wigner.json"};
}

std::vector<std::string> Runner::task_semiclassical()
{
  const ModelBlock &m = config_.model;
  Json edges_json = nullptr;
  if (m.u_tilde > 0.0)
  {
    const BistabilityEdges e = bistability_edges(m.delta, m.u_tilde, m.gamma);
    edges_json = {{"f_minus", real_json(e.f_minus)}, {"f_plus", real_json(e.f_plus)}, {"exists", e.exists}};
  }
  Json doc = {{"meta", metadata(config_)}, {"delta", m.delta}, {"u_tilde", m.u_tilde}};
  doc["edges"] = edges_json;
  if (edges_json.is_object())
  {
    doc["f_minus"] = edges_json["f_minus"];
    doc["f_plus"] = edges_json["f_plus"];
    doc["exists"] = edges_json["exists"];
  }
  write_json(path("edges.json"), doc);

  write_atomic(path("semiclassical.csv"), [&](std::ostream &out) {
    out << "F_tilde,branch,n_sc,stable,Re_lr1,Im_lr1,Re_lr2,Im_lr2\n";
    for (double f : config_.sweep.drives())
    {
      const ModelParams p{m.delta, m.u_tilde, f, m.gamma, 1.0};
      const auto roots = steady_roots(p);
      for (std::size_t k = 0; k < roots.size(); ++k)
      {
        const auto &r = roots[k];
        out << format_real(f) << ',' << k << ',' << format_real(r.n_sc) << ',' << (r.stable ? 1 : 0) << ','
            << format_real(r.lambda_lr[0].real()) << ',' << format_real(r.lambda_lr[0].imag()) << ','
            << format_real(r.lambda_lr[1].real()) << ',' << format_real(r.lambda_lr[1].imag()) << '\n';
      }
    }
  });
  write_sidecar(path("semiclassical.csv"),
                {{"meta", metadata(config_)},
                 {"columns", "F_tilde, branch index (ascending n_sc), n_sc = |alpha|^2 / N, stable flag, "
                             "linear-response rates (units of gamma)"}});
  return {"edges.json", "semiclassical.csv", "semiclassical.csv.meta.json"};
}

std::vector<std::string> Runner::task_fit()
{
  const CriticalAnalysis a = run_critical_analysis(config_.base(), config_.sweep.sizes, config_.critical_options());
  write_atomic(path("critical_sweep.csv"), [&](std::ostream &out) { write_sweep_csv(out, a.records); });
  Json cutoffs = Json::object();
  for (const CriticalRow &r : a.fit.rows)
  {
    cutoffs[size_tag(r.n_scale)] = r.cutoff;
  }
  write_sidecar(path("critical_sweep.csv"),
                {{"meta", metadata(config_)},
                 {"content", "power-law sweeps on a uniform grid of F_tilde - F_c(N) over (0, F+ - F_c(N)]"},
                 {"cutoffs_used", cutoffs}});
  Json doc = critical_fit_json(a.fit);
  doc["meta"] = metadata(config_);
  doc["cutoffs_used"] = cutoffs;
  write_json(path("fits.json"), doc);

  std::string failures;
  for (const CriticalRow &r : a.fit.rows)
  {
    if (!r.err.empty())
    {
      failures += (failures.empty() ? "" : "; ") + ("N=" + size_tag(r.n_scale) + ": " + r.err);
    }
  }
  if (!failures.empty())
  {
    throw TaskFailed("critical analysis incomplete: " + failures);
  }
  return {"fits.json", "critical_sweep.csv", "critical_sweep.csv.meta.json"};
}

std::vector<std::string> Runner::task_extrapolate()
{
  Json doc = extrapolation_doc(read_json(path("fits.json")), config_.fit.extrapolation);
  doc["meta"] = metadata(config_);
  write_json(path("extrapolation.json"), doc);
  return {"extrapolation.json"};
}

std::vector<std::string> Runner::task_mapcheck()
{
  const BoseHubbardParams bh = config_.lattice_params();
  const ModelParams p = k0_reduce(bh);
  Json doc = {{"meta", metadata(config_)},
              {"lattice",
               {{"hopping", bh.hopping},
                {"dimension", bh.dimension},
                {"sites", bh.sites},
                {"pump_detuning", bh.pump_detuning},
                {"u_tilde", bh.u_tilde},
                {"f_tilde", bh.f_tilde},
                {"gamma", bh.gamma}}},
              {"band_offset", k0_band_offset(bh)},
              {"model",
               {{"delta", p.delta},
                {"u_tilde", p.u_tilde},
                {"f_tilde", p.f_tilde},
                {"gamma", p.gamma},
                {"n_scale", p.n_scale},
                {"bare_u", p.bare_u()},
                {"bare_f", p.bare_f()}}}};
  write_json(path("mapcheck.json"), doc);
  return {"mapcheck.json"};
}

namespace
{

constexpr double kCheckTolerance = 1e-8;

bool agrees(double recorded, double recomputed)
{
  if (std::isnan(recorded) || std::isnan(recomputed))
  {
    return std::isnan(recorded) && std::isnan(recomputed);
  }
  const double scale = std::max(std::abs(recorded), std::abs(recomputed));
  return std::abs(recorded - recomputed) <= kCheckTolerance * scale + 1e-12;
}

double json_real(const Json &j)
{
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

class Checker
{
public:
  void compare(const std::string &artifact, const std::string &key, double recorded, double recomputed)
  {
    const bool ok = agrees(recorded, recomputed);
    ++count_;
    if (!ok)
    {
      ++mismatches_;
      failures_.push_back({{"artifact", artifact},
                           {"key", key},
                           {"recorded", real_json(recorded)},
                           {"recomputed", real_json(recomputed)}});
    }
  }

  void note(const std::string &artifact, std::size_t points, std::size_t of)
  {
    artifacts_.push_back({{"artifact", artifact}, {"points_checked", points}, {"points_total", of}});
  }

  void error(const std::string &artifact, const std::string &what)
  {
    ++mismatches_;
    failures_.push_back({{"artifact", artifact}, {"error", what}});
  }

  bool ok() const { return mismatches_ == 0; }

  Json report() const
  {
    return {{"tolerance", kCheckTolerance},
            {"comparisons", count_},
            {"mismatches", mismatches_},
            {"ok", ok()},
            {"artifacts", artifacts_},
            {"failures", failures_}};
  }

private:
  std::size_t count_ = 0;
  std::size_t mismatches_ = 0;
  Json artifacts_ = Json::array();
  Json failures_ = Json::array();
};

// Seeded 10% subset of [0, total), at least one index, in ascending order.
std::vector<std::size_t> sample_indices(std::size_t total, std::uint64_t seed)
{
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t keep = std::min(total, std::max<std::size_t>(1, (total + 9) / 10));
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void check_sweep_file(Checker &ck, const fs::path &file, const RunConfig &cfg)
{
  const std::string name = file.filename().string();
  const std::vector<SweepRow> rows = read_sweep_csv(file);
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    if (rows[i].err.empty())
    {
      usable.push_back(i);
    }
  }
  if (usable.empty())
  {
    ck.note(name, 0, rows.size());
    return;
  }
  const auto pick = sample_indices(usable.size(), cfg.seed);
  for (std::size_t k : pick)
  {
    const SweepRow &r = rows[usable[k]];
    ModelParams p = cfg.base();
    p.n_scale = r.n_scale;
    p.f_tilde = r.f_tilde;
    const std::string at = "N=" + size_tag(r.n_scale) + " F_tilde=" + format_real(r.f_tilde);
    try
    {
      const PointAnalysis a = analyze_point(p, r.cutoff, cfg.solver);
      ck.compare(name, at + " Re_lambda", r.lambda.real(), a.gap.lambda.real());
      ck.compare(name, at + " Im_lambda", r.lambda.imag(), a.gap.lambda.imag());
      ck.compare(name, at + " n_over_N", r.n_over_n, a.observables.n_rescaled);
      ck.compare(name, at + " g2", r.g2, a.observables.g2);
    }
    catch (const std::exception &e)
    {
      ck.error(name, at + ": " + error_name(e) + ": " + e.what());
    }
  }
  ck.note(name, pick.size(), rows.size());
}

}  // namespace

int Runner::check()
{
  const Json manifest = read_json(path("manifest.json"));
  std::vector<std::string> done;
  for (const Json &t : manifest.at("tasks"))
  {
    if (t.at("status") == "ok")
    {
      done.push_back(t.at("task").get<std::string>());
    }
  }
  auto has = [&](const char *task) { return std::find(done.begin(), done.end(), task) != done.end(); };

  Checker ck;
  auto guarded = [&](const std::string &artifact, const std::function<void()> &body) {
    try
    {
      body();
    }
    catch (const std::exception &e)
    {
      ck.error(artifact, error_name(e) + ": " + e.what());
    }
  };

  if (has("steady"))
  {
    guarded("steady.json", [&] {
      const Json doc = read_json(path("steady.json"));
      const ModelParams p = config_.point_params();
      const ConstrainedSolver solver(build_liouvillian(p, doc.at("cutoff").get<int>()));
      const Observables o = observables(solver.steady_state(), p.n_scale);
      const Complex field = solver.steady_state().moment(0, 1);
      ck.compare("steady.json", "numeric.n_over_N", json_real(doc["numeric"]["n_over_N"]), o.n_rescaled);
      ck.compare("steady.json", "numeric.g2", json_real(doc["numeric"]["g2"]), o.g2);
      ck.compare("steady.json", "field.re", json_real(doc["field"]["re"]), field.real());
      ck.compare("steady.json", "field.im", json_real(doc["field"]["im"]), field.imag());
      ck.note("steady.json", 1, 1);
    });
  }
  if (has("gap"))
  {
    guarded("gap.json", [&] {
      const Json doc = read_json(path("gap.json"));
      const PointAnalysis a = analyze_point(config_.point_params(), doc.at("cutoff").get<int>(), config_.solver);
      ck.compare("gap.json", "lambda.re", json_real(doc["lambda"]["re"]), a.gap.lambda.real());
      ck.compare("gap.json", "lambda.im", json_real(doc["lambda"]["im"]), a.gap.lambda.imag());
      ck.note("gap.json", 1, 1);
    });
  }
  if (has("sweep"))
  {
    guarded("sweep.csv", [&] { check_sweep_file(ck, path("sweep.csv"), config_); });
  }
  if (has("fit"))
  {
    guarded("critical_sweep.csv", [&] { check_sweep_file(ck, path("critical_sweep.csv"), config_); });
  }
  if (has("semiclassical"))
  {
    guarded("edges.json", [&] {
      const Json doc = read_json(path("edges.json"));
      if (doc["edges"].is_object())
      {
        const BistabilityEdges e = bistability_edges(config_.model.delta, config_.model.u_tilde, config_.model.gamma);
        ck.compare("edges.json", "f_minus", json_real(doc["edges"]["f_minus"]), e.f_minus);
        ck.compare("edges.json", "f_plus", json_real(doc["edges"]["f_plus"]), e.f_plus);
      }
      ck.note("edges.json", 1, 1);
    });
  }
  if (has("extrapolate"))
  {
    guarded("extrapolation.json", [&] {
      const Json doc = read_json(path("extrapolation.json"));
      const Json again = extrapolation_doc(read_json(path("fits.json")), config_.fit.extrapolation);
      for (const char *key : {"f_c_inf", "b_inf", "log_f_inf"})
      {
        ck.compare("extrapolation.json", std::string(key) + ".limit", json_real(doc[key]["limit"]),
                   json_real(again[key]["limit"]));
      }
      ck.note("extrapolation.json", 1, 1);
    });
  }
  if (has("mapcheck"))
  {
    guarded("mapcheck.json", [&] {
      const Json doc = read_json(path("mapcheck.json"));
      const ModelParams p = k0_reduce(config_.lattice_params());
      ck.compare("mapcheck.json", "model.delta", json_real(doc["model"]["delta"]), p.delta);
      ck.compare("mapcheck.json", "model.u_tilde", json_real(doc["model"]["u_tilde"]), p.u_tilde);
      ck.compare("mapcheck.json", "model.f_tilde", json_real(doc["model"]["f_tilde"]), p.f_tilde);
      ck.compare("mapcheck.json", "model.n_scale", json_real(doc["model"]["n_scale"]), p.n_scale);
      ck.note("mapcheck.json", 1, 1);
    });
  }
  if (has("wigner"))
  {
    guarded("wigner.csv", [&] {
      const Json doc = read_json(path("wigner.json"));
      const Json &g = doc.at("grid");
      GridSpec grid;
      grid.re_min = g.at("re_min").get<double>();
      grid.re_max = g.at("re_max").get<double>();
      grid.im_min = g.at("im_min").get<double>();
      grid.im_max = g.at("im_max").get<double>();
      grid.nx = g.at("nx").get<int>();
      grid.ny = g.at("ny").get<int>();
      const ModelParams p = config_.point_params();
      const DensityMatrix rho = steady_state_numeric(build_liouvillian(p, doc.at("cutoff").get<int>()));
      const WignerField w = wigner(rho, grid, p.n_scale, config_.threads);

      std::ifstream in(path("wigner.csv"));
      std::string line;
      std::getline(in, line);
      std::vector<double> recorded;
      while (std::getline(in, line))
      {
        const auto f = split_csv_line(line);
        if (f.size() != 3)
        {
          throw FormatError("wigner.csv row with " + std::to_string(f.size()) + " fields");
        }
        recorded.push_back(std::stod(f[2]));
      }
      if (recorded.size() != w.values.size())
      {
        throw FormatError("wigner.csv has " + std::to_string(recorded.size()) + " values, grid has " +
                          std::to_string(w.values.size()));
      }
      const auto pick = sample_indices(recorded.size(), config_.seed);
      for (std::size_t k : pick)
      {
        ck.compare("wigner.csv", "value " + std::to_string(k), recorded[k], w.values[k]);
      }
      ck.note("wigner.csv", pick.size(), recorded.size());
    });
  }

  Json doc = ck.report();
  doc["meta"] = metadata(config_);
  write_json(path("check.json"), doc);
  return ck.ok() ? 0 : 1;
}

}  // namespace kerrcrit::app
