// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit_app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "kerrcrit/errors.hpp"

namespace kerrcrit::app
{

namespace
{

constexpr std::pair<Task, std::string_view> kTaskNames[] = {
  {Task::steady, "steady"}, {Task::gap, "gap"}, {Task::sweep, "sweep"},
  {Task::wigner, "wigner"}, {Task::semiclassical, "semiclassical"}, {Task::fit, "fit"},
  {Task::extrapolate, "extrapolate"}, {Task::mapcheck, "mapcheck"},
};

// Typed view of one JSON object that remembers which keys were read so that
// leftovers can be reported.
class Reader
{
public:
  Reader(const Json &j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object())
    {
      fail(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  std::string key(const std::string &k) const { return path_.empty() ? k : path_ + "." + k; }

  [[noreturn]] static void fail(const std::string &key, const std::string &what)
  {
    throw ConfigInvalid(key + ": " + what);
  }

  const Json *find(const std::string &k)
  {
    seen_.insert(k);
    const auto it = j_.find(k);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  void number(const std::string &k, double &out)
  {
    if (const Json *v = find(k))
    {
      if (!v->is_number())
      {
        fail(key(k), "expected a number");
      }
      out = v->get<double>();
      if (!std::isfinite(out))
      {
        fail(key(k), "must be finite");
      }
    }
  }

  void integer(const std::string &k, int &out)
  {
    if (const Json *v = find(k))
    {
      if (!v->is_number_integer())
      {
        fail(key(k), "expected an integer");
      }
      out = v->get<int>();
    }
  }

  void boolean(const std::string &k, bool &out)
  {
    if (const Json *v = find(k))
    {
      if (!v->is_boolean())
      {
        fail(key(k), "expected true or false");
      }
      out = v->get<bool>();
    }
  }

  void string(const std::string &k, std::string &out)
  {
    if (const Json *v = find(k))
    {
      if (!v->is_string())
      {
        fail(key(k), "expected a string");
      }
      out = v->get<std::string>();
    }
  }

  void numbers(const std::string &k, std::vector<double> &out)
  {
    if (const Json *v = find(k))
    {
      if (!v->is_array())
      {
        fail(key(k), "expected an array of numbers");
      }
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i)
      {
        if (!(*v)[i].is_number())
        {
          fail(key(k) + "[" + std::to_string(i) + "]", "expected a number");
        }
        out.push_back((*v)[i].get<double>());
      }
    }
  }

  std::optional<Reader> object(const std::string &k)
  {
    if (const Json *v = find(k))
    {
      return Reader(*v, key(k));
    }
    return std::nullopt;
  }

  void finish() const
  {
    for (auto it = j_.begin(); it != j_.end(); ++it)
    {
      if (!seen_.count(it.key()))
      {
        fail(key(it.key()), "unknown key");
      }
    }
  }

private:
  const Json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string &key, const std::string &what)
{
  if (!ok)
  {
    Reader::fail(key, what);
  }
}

std::string_view scope_name(CutoffScope s) { return s == CutoffScope::per_point ? "per_point" : "per_size"; }

}  // namespace

std::string_view to_string(Task task)
{
  for (const auto &[t, name] : kTaskNames)
  {
    if (t == task)
    {
      return name;
    }
  }
  return "unknown";
}

std::vector<double> SweepBlock::drives() const
{
  std::vector<double> out;
  if (f_points == 1)
  {
    return {f_start};
  }
  for (int k = 0; k < f_points; ++k)
  {
    out.push_back(f_start + (f_stop - f_start) * static_cast<double>(k) / static_cast<double>(f_points - 1));
  }
  return out;
}

CutoffChoice CutoffBlock::choice() const
{
  CutoffChoice c = automatic ? CutoffChoice{} : CutoffChoice::fixed_at(fixed);
  c.policy = policy;
  return c;
}

ModelParams RunConfig::base() const { return ModelParams{model.delta, model.u_tilde, 0.0, model.gamma, 1.0}; }

ModelParams RunConfig::point_params() const
{
  return ModelParams{model.delta, model.u_tilde, point.f_tilde, model.gamma, point.n_scale};
}

CriticalOptions RunConfig::critical_options() const
{
  CriticalOptions o;
  o.sweep.solver = solver;
  o.sweep.threads = threads;
  o.sweep.cutoff = cutoff.choice();
  o.cutoff_policy = cutoff.policy;
  o.fixed_cutoff = !cutoff.automatic;
  o.cutoff = cutoff.fixed;
  o.coarse_points = fit.coarse_points;
  o.fc_tol = fit.fc_tol;
  o.bracket = fit.bracket;
  o.grid_points = fit.grid_points;
  o.lower_cut_frac = fit.lower_cut_frac;
  o.window.plateau_frac = fit.plateau_frac;
  o.window.far_frac = fit.far_frac;
  o.fit_sizes = fit.sizes;
  o.extrapolation = fit.extrapolation;
  return o;
}

BoseHubbardParams RunConfig::lattice_params() const
{
  return BoseHubbardParams{lattice.hopping, lattice.dimension, lattice.sites, model.delta,
                           model.u_tilde,   point.f_tilde,     model.gamma};
}

RunConfig parse_config(const Json &doc)
{
  RunConfig c;
  Reader root(doc, "");

  if (auto m = root.object("model"))
  {
    m->number("delta", c.model.delta);
    m->number("u_tilde", c.model.u_tilde);
    m->number("gamma", c.model.gamma);
    m->finish();
  }
  require(c.model.gamma > 0.0, "model.gamma", "must be positive");
  require(c.model.u_tilde >= 0.0, "model.u_tilde", "must be non-negative");

  if (auto s = root.object("sweep"))
  {
    s->numbers("sizes", c.sweep.sizes);
    if (auto f = s->object("f_tilde"))
    {
      f->number("start", c.sweep.f_start);
      f->number("stop", c.sweep.f_stop);
      f->integer("points", c.sweep.f_points);
      f->finish();
    }
    std::string scope(scope_name(c.sweep.scope));
    s->string("cutoff_scope", scope);
    require(scope == "per_point" || scope == "per_size", "sweep.cutoff_scope", "expected per_point or per_size");
    c.sweep.scope = scope == "per_point" ? CutoffScope::per_point : CutoffScope::per_size;
    s->finish();
  }
  require(!c.sweep.sizes.empty(), "sweep.sizes", "must not be empty");
  for (double n : c.sweep.sizes)
  {
    require(n > 0.0, "sweep.sizes", "sizes must be positive");
  }
  require(c.sweep.f_points >= 1, "sweep.f_tilde.points", "must be at least 1");
  require(c.sweep.f_start >= 0.0 && c.sweep.f_stop >= c.sweep.f_start, "sweep.f_tilde",
          "needs 0 <= start <= stop");

  if (auto k = root.object("cutoff"))
  {
    std::string mode = c.cutoff.automatic ? "auto" : "fixed";
    k->string("mode", mode);
    require(mode == "auto" || mode == "fixed", "cutoff.mode", "expected auto or fixed");
    c.cutoff.automatic = mode == "auto";
    k->integer("fixed", c.cutoff.fixed);
    k->number("tail_tol", c.cutoff.policy.tail_tol);
    k->number("obs_tol", c.cutoff.policy.obs_tol);
    k->integer("hard_max", c.cutoff.policy.hard_max);
    k->integer("min_cutoff", c.cutoff.policy.min_cutoff);
    k->finish();
  }
  require(c.cutoff.automatic || c.cutoff.fixed >= 1, "cutoff.fixed", "must be at least 1 in fixed mode");
  try
  {
    c.cutoff.policy.validate();
  }
  catch (const InvalidParameter &e)
  {
    Reader::fail("cutoff", e.what());
  }

  if (auto s = root.object("solver"))
  {
    double thr = static_cast<double>(c.solver.dense_dim_threshold);
    s->number("dense_dim_threshold", thr);
    c.solver.dense_dim_threshold = static_cast<Eigen::Index>(thr);
    s->integer("krylov_subspace", c.solver.krylov_subspace);
    s->integer("krylov_nev", c.solver.krylov_nev);
    s->number("tolerance", c.solver.tolerance);
    s->integer("max_restarts", c.solver.max_restarts);
    s->finish();
  }
  try
  {
    c.solver.validate();
  }
  catch (const InvalidParameter &e)
  {
    Reader::fail("solver", e.what());
  }

  if (auto p = root.object("point"))
  {
    p->number("n_scale", c.point.n_scale);
    p->number("f_tilde", c.point.f_tilde);
    p->finish();
  }
  require(c.point.n_scale > 0.0, "point.n_scale", "must be positive");
  require(c.point.f_tilde >= 0.0, "point.f_tilde", "must be non-negative");

  if (auto w = root.object("wigner"))
  {
    w->integer("points", c.wigner.points);
    double half = c.wigner.half_width.value_or(0.0);
    if (w->find("half_width"))
    {
      w->number("half_width", half);
      require(half > 0.0, "wigner.half_width", "must be positive");
      c.wigner.half_width = half;
    }
    w->number("peak_threshold", c.wigner.peak_threshold);
    w->finish();
  }
  require(c.wigner.points >= 3, "wigner.points", "must be at least 3");
  require(c.wigner.peak_threshold > 0.0 && c.wigner.peak_threshold < 1.0, "wigner.peak_threshold",
          "must lie in (0, 1)");

  if (auto f = root.object("fit"))
  {
    f->numbers("sizes", c.fit.sizes);
    f->integer("coarse_points", c.fit.coarse_points);
    f->number("fc_tol", c.fit.fc_tol);
    std::vector<double> bracket;
    f->numbers("bracket", bracket);
    if (!bracket.empty())
    {
      require(bracket.size() == 2 && bracket[0] < bracket[1], "fit.bracket", "expected [lo, hi] with lo < hi");
      c.fit.bracket = std::make_pair(bracket[0], bracket[1]);
    }
    f->integer("grid_points", c.fit.grid_points);
    f->number("lower_cut_frac", c.fit.lower_cut_frac);
    f->number("plateau_frac", c.fit.plateau_frac);
    f->number("far_frac", c.fit.far_frac);
    if (auto e = f->object("extrapolation"))
    {
      e->number("keep_fraction", c.fit.extrapolation.keep_fraction);
      int min_points = static_cast<int>(c.fit.extrapolation.min_points);
      e->integer("min_points", min_points);
      require(min_points >= 2, "fit.extrapolation.min_points", "must be at least 2");
      c.fit.extrapolation.min_points = static_cast<std::size_t>(min_points);
      e->boolean("weight_by_sigma", c.fit.extrapolation.weight_by_sigma);
      e->finish();
    }
    f->finish();
  }
  require(c.fit.coarse_points >= 3, "fit.coarse_points", "must be at least 3");
  require(c.fit.fc_tol > 0.0, "fit.fc_tol", "must be positive");
  require(c.fit.grid_points >= 6, "fit.grid_points", "must be at least 6");
  require(c.fit.lower_cut_frac >= 0.0 && c.fit.lower_cut_frac < 1.0, "fit.lower_cut_frac", "must lie in [0, 1)");
  require(c.fit.plateau_frac >= 0.0 && c.fit.plateau_frac < 1.0, "fit.plateau_frac", "must lie in [0, 1)");
  require(c.fit.far_frac >= 0.0 && c.fit.far_frac < 1.0, "fit.far_frac", "must lie in [0, 1)");
  require(c.fit.extrapolation.keep_fraction > 0.0 && c.fit.extrapolation.keep_fraction <= 1.0,
          "fit.extrapolation.keep_fraction", "must lie in (0, 1]");

  if (auto l = root.object("lattice"))
  {
    l->number("hopping", c.lattice.hopping);
    l->integer("dimension", c.lattice.dimension);
    l->number("sites", c.lattice.sites);
    l->finish();
  }
  require(c.lattice.dimension >= 1, "lattice.dimension", "must be at least 1");
  require(c.lattice.sites >= 1.0, "lattice.sites", "must be at least 1");

  if (const Json *t = root.find("tasks"))
  {
    require(t->is_array(), "tasks", "expected an array of task names");
    for (std::size_t i = 0; i < t->size(); ++i)
    {
      const std::string key = "tasks[" + std::to_string(i) + "]";
      require((*t)[i].is_string(), key, "expected a task name");
      const std::string name = (*t)[i].get<std::string>();
      bool found = false;
      for (const auto &[task, tname] : kTaskNames)
      {
        if (name == tname)
        {
          c.tasks.push_back(task);
          found = true;
        }
      }
      require(found, key, "unknown task '" + name + "'");
    }
  }

  std::string out = c.output.string();
  root.string("output", out);
  require(!out.empty(), "output", "must not be empty");
  c.output = out;

  int threads = static_cast<int>(c.threads);
  root.integer("threads", threads);
  require(threads >= 1, "threads", "must be at least 1");
  c.threads = static_cast<unsigned>(threads);

  if (const Json *s = root.find("seed"))
  {
    require(s->is_number_unsigned() || (s->is_number_integer() && s->get<long long>() >= 0), "seed",
            "expected a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigInvalid(path.string() + ": cannot open configuration file");
  }
  Json doc;
  try
  {
    doc = Json::parse(in);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ConfigInvalid(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Json to_json(const RunConfig &c)
{
  Json j;
  j["model"] = {{"delta", c.model.delta}, {"u_tilde", c.model.u_tilde}, {"gamma", c.model.gamma}};
  j["sweep"] = {{"sizes", c.sweep.sizes},
                {"f_tilde", {{"start", c.sweep.f_start}, {"stop", c.sweep.f_stop}, {"points", c.sweep.f_points}}},
                {"cutoff_scope", scope_name(c.sweep.scope)}};
  j["cutoff"] = {{"mode", c.cutoff.automatic ? "auto" : "fixed"},
                 {"fixed", c.cutoff.fixed},
                 {"tail_tol", c.cutoff.policy.tail_tol},
                 {"obs_tol", c.cutoff.policy.obs_tol},
                 {"hard_max", c.cutoff.policy.hard_max},
                 {"min_cutoff", c.cutoff.policy.min_cutoff}};
  j["solver"] = {{"dense_dim_threshold", c.solver.dense_dim_threshold},
                 {"krylov_subspace", c.solver.krylov_subspace},
                 {"krylov_nev", c.solver.krylov_nev},
                 {"tolerance", c.solver.tolerance},
                 {"max_restarts", c.solver.max_restarts}};
  j["point"] = {{"n_scale", c.point.n_scale}, {"f_tilde", c.point.f_tilde}};
  j["wigner"] = {{"points", c.wigner.points}, {"peak_threshold", c.wigner.peak_threshold}};
  if (c.wigner.half_width)
  {
    j["wigner"]["half_width"] = *c.wigner.half_width;
  }
  j["fit"] = {{"sizes", c.fit.sizes},
              {"coarse_points", c.fit.coarse_points},
              {"fc_tol", c.fit.fc_tol},
              {"grid_points", c.fit.grid_points},
              {"lower_cut_frac", c.fit.lower_cut_frac},
              {"plateau_frac", c.fit.plateau_frac},
              {"far_frac", c.fit.far_frac},
              {"extrapolation",
               {{"keep_fraction", c.fit.extrapolation.keep_fraction},
                {"min_points", c.fit.extrapolation.min_points},
                {"weight_by_sigma", c.fit.extrapolation.weight_by_sigma}}}};
  if (c.fit.bracket)
  {
    j["fit"]["bracket"] = {c.fit.bracket->first, c.fit.bracket->second};
  }
  j["lattice"] = {{"hopping", c.lattice.hopping}, {"dimension", c.lattice.dimension}, {"sites", c.lattice.sites}};
  Json tasks = Json::array();
  for (Task t : c.tasks)
  {
    tasks.push_back(std::string(to_string(t)));
  }
  j["tasks"] = tasks;
  j["output"] = c.output.string();
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  return j;
}

}  // namespace kerrcrit::app
