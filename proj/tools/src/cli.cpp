// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit_app/cli.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/parallel.hpp"
#include "kerrcrit_app/config.hpp"
#include "kerrcrit_app/io.hpp"
#include "kerrcrit_app/runner.hpp"

namespace kerrcrit::app
{

namespace
{

// Flag values layered over an optional base config. Only flags that were
// given on the command line are applied.
struct Overrides
{
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool check = false;

  std::map<std::string, double> reals;
  std::map<std::string, int> ints;
  std::vector<double> sizes;
  std::vector<double> fit_sizes;
  int cutoff = -1;
};

struct Flag
{
  const char *name;
  const char *help;
  std::vector<const char *> path;  // key path in the config document
};

const std::vector<Flag> &real_flags()
{
  static const std::vector<Flag> flags = {
    {"--delta", "pump-cavity detuning Delta [gamma]", {"model", "delta"}},
    {"--u-tilde", "rescaled Kerr strength U N [gamma]", {"model", "u_tilde"}},
    {"--gamma", "loss rate", {"model", "gamma"}},
    {"--n", "scaling parameter N", {"point", "n_scale"}},
    {"--f", "rescaled drive F / sqrt(N) [gamma]", {"point", "f_tilde"}},
    {"--tail-tol", "cutoff tail tolerance", {"cutoff", "tail_tol"}},
    {"--obs-tol", "cutoff observable tolerance", {"cutoff", "obs_tol"}},
    {"--f-start", "first sweep drive [gamma]", {"sweep", "f_tilde", "start"}},
    {"--f-stop", "last sweep drive [gamma]", {"sweep", "f_tilde", "stop"}},
    {"--half-width", "Wigner grid half-width in rescaled units", {"wigner", "half_width"}},
    {"--hopping", "lattice hopping J [gamma]", {"lattice", "hopping"}},
    {"--sites", "number of lattice sites", {"lattice", "sites"}},
  };
  return flags;
}

const std::vector<Flag> &int_flags()
{
  static const std::vector<Flag> flags = {
    {"--hard-max", "largest cutoff the automatic policy may reach", {"cutoff", "hard_max"}},
    {"--f-points", "number of sweep drives", {"sweep", "f_tilde", "points"}},
    {"--points", "Wigner grid points per axis", {"wigner", "points"}},
    {"--dimension", "lattice dimension", {"lattice", "dimension"}},
  };
  return flags;
}

Json &at_path(Json &doc, const std::vector<const char *> &path)
{
  Json *node = &doc;
  for (const char *key : path)
  {
    if (!node->is_object())
    {
      *node = Json::object();
    }
    node = &(*node)[key];
  }
  return *node;
}

void add_common(CLI::App *cmd, Overrides &o)
{
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads (default: KERRCRIT_THREADS or 1)")
    ->check(CLI::PositiveNumber);
  cmd->add_flag("--check", o.check, "recompute a seeded 10% subset of existing outputs and compare to 1e-8");
}

void add_model(CLI::App *cmd, Overrides &o)
{
  cmd->add_option("--config", o.config, "base config document; flags override it")->check(CLI::ExistingFile);
  for (const Flag &f : real_flags())
  {
    cmd->add_option_function<double>(
      f.name, [&o, name = std::string(f.name)](double v) { o.reals[name] = v; }, f.help);
  }
  for (const Flag &f : int_flags())
  {
    cmd->add_option_function<int>(
      f.name, [&o, name = std::string(f.name)](int v) { o.ints[name] = v; }, f.help);
  }
  cmd->add_option("--cutoff", o.cutoff, "fixed Fock cutoff (default: automatic)");
  cmd->add_option("--sizes", o.sizes, "sweep sizes N")->delimiter(',');
  cmd->add_option("--fit-sizes", o.fit_sizes, "sizes entering power laws and extrapolation")->delimiter(',');
}

Json build_document(const Overrides &o, const std::string &task)
{
  Json doc = o.config.empty() ? Json::object() : read_json(o.config);
  if (!doc.is_object())
  {
    throw ConfigInvalid("<root>: expected a JSON object");
  }
  for (const Flag &f : real_flags())
  {
    if (auto it = o.reals.find(f.name); it != o.reals.end())
    {
      at_path(doc, f.path) = it->second;
    }
  }
  for (const Flag &f : int_flags())
  {
    if (auto it = o.ints.find(f.name); it != o.ints.end())
    {
      at_path(doc, f.path) = it->second;
    }
  }
  if (o.cutoff >= 0)
  {
    at_path(doc, {"cutoff", "mode"}) = "fixed";
    at_path(doc, {"cutoff", "fixed"}) = o.cutoff;
  }
  if (!o.sizes.empty())
  {
    at_path(doc, {"sweep", "sizes"}) = o.sizes;
  }
  if (!o.fit_sizes.empty())
  {
    at_path(doc, {"fit", "sizes"}) = o.fit_sizes;
  }
  if (!task.empty())
  {
    doc["tasks"] = Json::array({task});
  }
  return doc;
}

RunConfig finish(Json doc, const Overrides &o)
{
  if (!o.out.empty())
  {
    doc["output"] = o.out;
  }
  if (o.threads > 0)
  {
    doc["threads"] = o.threads;
  }
  else if (!doc.contains("threads"))
  {
    doc["threads"] = default_thread_count();
  }
  return parse_config(doc);
}

void print_summary(const Runner &runner)
{
  for (const TaskReport &r : runner.reports())
  {
    std::printf("%-13s %s %.2f s", r.task.c_str(), r.ok ? "ok    " : "FAILED", r.seconds);
    if (!r.ok)
    {
      std::printf("  %s", r.error.c_str());
    }
    std::printf("\n");
  }
}

int execute(const RunConfig &cfg, bool check)
{
  Runner runner(cfg);
  if (check)
  {
    const int rc = runner.check();
    const Json report = read_json(cfg.output / "check.json");
    std::printf("check %s: %zu comparisons, %zu mismatches (tolerance 1e-8)\n", rc == 0 ? "passed" : "FAILED",
                report.at("comparisons").get<std::size_t>(), report.at("mismatches").get<std::size_t>());
    return rc;
  }
  const int rc = runner.run();
  print_summary(runner);
  for (const TaskReport &r : runner.reports())
  {
    if (r.task == "mapcheck" && r.ok)
    {
      const Json m = read_json(cfg.output / "mapcheck.json").at("model");
      std::printf("delta = %s  u_tilde = %s  f_tilde = %s  gamma = %s  N = %s\n",
                  format_real(m.at("delta").get<double>()).c_str(), format_real(m.at("u_tilde").get<double>()).c_str(),
                  format_real(m.at("f_tilde").get<double>()).c_str(), format_real(m.at("gamma").get<double>()).c_str(),
                  format_real(m.at("n_scale").get<double>()).c_str());
    }
  }
  return rc;
}

}  // namespace

int cli_main(int argc, char **argv)
{
  CLI::App app{"Liouvillian gap and finite-size scaling of a driven-dissipative Kerr resonator"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_path;
  CLI::App *run = app.add_subcommand("run", "execute the tasks of a config document");
  run->add_option("config", run_path, "config document (JSON)")->required()->check(CLI::ExistingFile);
  add_common(run, run_o);

  const std::vector<std::pair<const char *, const char *>> task_cmds = {
    {"steady", "steady state and observables at one point"},
    {"gap", "Liouvillian gap at one point"},
    {"sweep", "gap and observables over N and drive"},
    {"wigner", "Wigner function of the steady state at one point"},
    {"semiclassical", "bistability edges and linear-response rates"},
    {"fit", "critical drive, tunneling time and power-law fits"},
    {"mapcheck", "reduce a pumped Bose-Hubbard lattice to the single-mode model"},
  };
  std::map<std::string, Overrides> task_o;
  std::map<std::string, CLI::App *> task_app;
  for (const auto &[name, help] : task_cmds)
  {
    CLI::App *cmd = app.add_subcommand(name, help);
    add_common(cmd, task_o[name]);
    add_model(cmd, task_o[name]);
    task_app[name] = cmd;
  }

  Overrides fig_o;
  std::string figure;
  CLI::App *fig = app.add_subcommand("emit-fig", "write plot-ready column files from existing outputs");
  fig->add_option("figure", figure, "fig1, fig2gap or fig3")
    ->required()
    ->check(CLI::IsMember({"fig1", "fig2gap", "fig3"}));
  add_common(fig, fig_o);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try
  {
    if (run->parsed())
    {
      Json doc = read_json(run_path);
      if (!doc.is_object())
      {
        throw ConfigInvalid("<root>: expected a JSON object");
      }
      return execute(finish(doc, run_o), run_o.check);
    }
    if (fig->parsed())
    {
      const std::filesystem::path dir = fig_o.out.empty() ? "kerrcrit-out" : fig_o.out;
      if (fig_o.check)
      {
        // The manifest echoes the config that produced the outputs.
        Json doc = read_json(dir / "manifest.json").at("meta").at("config");
        doc["output"] = dir.string();
        const int rc = execute(parse_config(doc), true);
        if (rc != 0)
        {
          return rc;
        }
      }
      for (const std::string &f : emit_figure_data(dir, figure))
      {
        std::printf("%s\n", f.c_str());
      }
      return 0;
    }
    for (const auto &[name, cmd] : task_app)
    {
      if (cmd->parsed())
      {
        const Overrides &o = task_o[name];
        return execute(finish(build_document(o, name), o), o.check);
      }
    }
  }
  catch (const ConfigInvalid &e)
  {
    std::fprintf(stderr, "kerrcrit: invalid configuration: %s\n", e.what());
    return 2;
  }
  catch (const TaskFailed &e)
  {
    std::fprintf(stderr, "kerrcrit: %s\n", e.what());
    return 1;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "kerrcrit: %s: %s\n", error_name(e).c_str(), e.what());
    return 1;
  }
  return 2;
}

}  // namespace kerrcrit::app
