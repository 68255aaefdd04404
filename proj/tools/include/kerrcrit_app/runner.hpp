// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kerrcrit_app/config.hpp"

namespace kerrcrit::app
{

std::string version();

// Metadata block embedded in every JSON artifact and in the sidecar of every
// CSV: config echo, code version, units and conventions.
Json metadata(const RunConfig &config);

struct TaskReport
{
  std::string task;
  bool ok = false;
  std::string error;
  std::vector<std::string> files;
  double seconds = 0.0;
};

class Runner
{
public:
  explicit Runner(RunConfig config);

  // Executes the configured tasks in order and writes manifest.json.
  // Returns 0 when every task succeeds and 1 otherwise; failed tasks are
  // recorded in the manifest and later tasks still run.
  int run();

  // Recomputes a seeded 10% subset of the points behind the existing
  // artifacts and compares them to 1e-8. Writes check.json; returns 0 on
  // agreement and 1 otherwise.
  int check();

  const std::vector<TaskReport> &reports() const { return reports_; }
  const RunConfig &config() const { return config_; }

private:
  std::vector<std::string> run_task(Task task);
  std::filesystem::path path(const std::string &name) const { return config_.output / name; }

  std::vector<std::string> task_steady();
  std::vector<std::string> task_gap();
  std::vector<std::string> task_sweep();
  std::vector<std::string> task_wigner();
  std::vector<std::string> task_semiclassical();
  std::vector<std::string> task_fit();
  std::vector<std::string> task_extrapolate();
  std::vector<std::string> task_mapcheck();

  RunConfig config_;
  std::vector<TaskReport> reports_;
};

// Writes plot-ready column files for fig1 (n/N and g2 against drive),
// fig2gap (gap curves plus linear-response overlay) or fig3 (tau against N,
// 1/N extrapolations) into <dir>/figures/<id>/. Throws MissingInput when
// the required artifacts are absent.
std::vector<std::string> emit_figure_data(const std::filesystem::path &dir, const std::string &figure);

}  // namespace kerrcrit::app
