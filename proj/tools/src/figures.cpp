// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "kerrcrit/errors.hpp"
#include "kerrcrit_app/io.hpp"
#include "kerrcrit_app/runner.hpp"

namespace kerrcrit::app
{

namespace fs = std::filesystem;

namespace
{

struct Column
{
  std::string name;
  std::string unit;
};

class FigureWriter
{
public:
  FigureWriter(fs::path out, std::string figure, std::string config)
    : out_(std::move(out)), figure_(std::move(figure)), config_(std::move(config))
  {
    fs::create_directories(out_);
  }

  void write(const std::string &file, const std::string &source, const std::vector<Column> &columns,
             const std::vector<std::vector<double>> &rows)
  {
    write_atomic(out_ / file, [&](std::ostream &o) {
      o << "# kerrcrit " << version() << " figure " << figure_ << '\n';
      o << "# source: " << source << '\n';
      o << "# columns:";
      for (const Column &c : columns)
      {
        o << ' ' << c.name << " [" << c.unit << ']';
      }
      o << '\n';
      o << "# config: " << config_ << '\n';
      for (const auto &row : rows)
      {
        for (std::size_t k = 0; k < row.size(); ++k)
        {
          o << (k ? " " : "") << format_real(row[k]);
        }
        o << '\n';
      }
    });
    files_.push_back((fs::path("figures") / figure_ / file).string());
  }

  std::vector<std::string> files() const { return files_; }

private:
  fs::path out_;
  std::string figure_;
  std::string config_;
  std::vector<std::string> files_;
};

std::string size_label(double n)
{
  std::ostringstream s;
  s << n;
  return s.str();
}

fs::path require(const fs::path &dir, const std::string &name, const std::string &figure)
{
  const fs::path p = dir / name;
  if (!fs::exists(p))
  {
    throw MissingInput(figure + " needs " + name + " in " + dir.string());
  }
  return p;
}

std::map<double, std::vector<SweepRow>> by_size(const std::vector<SweepRow> &rows)
{
  std::map<double, std::vector<SweepRow>> out;
  for (const SweepRow &r : rows)
  {
    if (r.err.empty())
    {
      out[r.n_scale].push_back(r);
    }
  }
  return out;
}

void fig1(const fs::path &dir, FigureWriter &w)
{
  const auto sizes = by_size(read_sweep_csv(require(dir, "sweep.csv", "fig1")));
  for (const auto &[n, rows] : sizes)
  {
    std::vector<std::vector<double>> occ, g2;
    for (const SweepRow &r : rows)
    {
      occ.push_back({r.f_tilde, r.n_over_n});
      g2.push_back({r.f_tilde, r.g2});
    }
    const std::string k = size_label(n);
    w.write("n_over_N_N" + k + ".dat", "sweep.csv", {{"F_tilde", "gamma"}, {"n_over_N", "1"}}, occ);
    w.write("g2_N" + k + ".dat", "sweep.csv", {{"F_tilde", "gamma"}, {"g2", "1"}}, g2);
  }
}

void fig2gap(const fs::path &dir, FigureWriter &w)
{
  const auto sizes = by_size(read_sweep_csv(require(dir, "sweep.csv", "fig2gap")));
  const fs::path sc = require(dir, "semiclassical.csv", "fig2gap");
  for (const auto &[n, rows] : sizes)
  {
    std::vector<std::vector<double>> gap;
    for (const SweepRow &r : rows)
    {
      gap.push_back({r.f_tilde, r.lambda.real(), r.lambda.imag()});
    }
    w.write("gap_N" + size_label(n) + ".dat", "sweep.csv",
            {{"F_tilde", "gamma"}, {"Re_lambda", "gamma"}, {"Im_lambda", "gamma"}}, gap);
  }

  // Overlay: the Im >= 0 linear-response rate of every stable branch.
  std::ifstream in(sc);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> lr;
  while (std::getline(in, line))
  {
    const auto f = split_csv_line(line);
    if (f.size() != 8)
    {
      throw FormatError("semiclassical.csv row with " + std::to_string(f.size()) + " fields");
    }
    if (f[3] != "1")
    {
      continue;
    }
    const bool first = std::stod(f[5]) >= 0.0;
    lr.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(first ? f[4] : f[6]), std::stod(first ? f[5] : f[7])});
  }
  w.write("lambda_lr.dat", "semiclassical.csv",
          {{"F_tilde", "gamma"}, {"branch", "index"}, {"Re_lambda_LR", "gamma"}, {"Im_lambda_LR", "gamma"}}, lr);
}

void fig3(const fs::path &dir, FigureWriter &w)
{
  const Json fits = read_json(require(dir, "fits.json", "fig3"));
  std::vector<std::vector<double>> tau, fc, b;
  double n_lo = 1e300, n_hi = 0.0;
  for (const Json &r : fits.at("rows"))
  {
    if (!r.at("err").get<std::string>().empty())
    {
      continue;
    }
    const double n = r.at("n_scale").get<double>();
    n_lo = std::min(n_lo, n);
    n_hi = std::max(n_hi, n);
    tau.push_back({n, r.at("tau").get<double>()});
    fc.push_back({1.0 / n, r.at("f_c").get<double>()});
    if (r.at("has_power_law").get<bool>())
    {
      const Json &p = r.at("power");
      b.push_back({1.0 / n, p.at("b").get<double>(), p.at("b_se").get<double>(), p.at("f").get<double>(),
                   p.at("f_se").get<double>()});
    }
  }
  if (tau.empty())
  {
    throw MissingInput("fig3: fits.json has no successful rows");
  }
  w.write("tau_vs_N.dat", "fits.json", {{"N", "1"}, {"tau", "1/gamma"}}, tau);

  const Json &tf = fits.at("tau_fit");
  std::vector<std::vector<double>> tau_curve;
  for (int k = 0; k <= 100; ++k)
  {
    const double n = n_lo + (n_hi - n_lo) * k / 100.0;
    tau_curve.push_back({n, tf.at("tau0").get<double>() * std::exp(tf.at("kappa").get<double>() * n)});
  }
  w.write("tau_fit.dat", "fits.json tau_fit: tau = tau0 exp(kappa N)", {{"N", "1"}, {"tau", "1/gamma"}}, tau_curve);

  auto line_fit = [&](const char *key, const std::string &file, const std::string &col, const std::string &unit,
                      bool exponentiate) {
    const Json &e = fits.at(key);
    if (e.at("limit").is_null())
    {
      return;
    }
    const double a = e.at("limit").get<double>();
    const double s = e.at("slope").get<double>();
    std::vector<std::vector<double>> curve;
    for (int k = 0; k <= 100; ++k)
    {
      const double x = (1.0 / n_lo) * k / 100.0;
      curve.push_back({x, exponentiate ? std::exp(a + s * x) : a + s * x});
    }
    w.write(file, std::string("fits.json ") + key + ": linear in 1/N", {{"inv_N", "1"}, {col, unit}}, curve);
  };
  w.write("fc_vs_invN.dat", "fits.json", {{"inv_N", "1"}, {"F_c", "gamma"}}, fc);
  line_fit("f_c_inf", "fc_fit.dat", "F_c", "gamma", false);
  if (!b.empty())
  {
    w.write("b_vs_invN.dat", "fits.json",
            {{"inv_N", "1"}, {"b", "1"}, {"b_se", "1"}, {"f", "gamma"}, {"f_se", "gamma"}}, b);
    line_fit("b_inf", "b_fit.dat", "b", "1", false);
    line_fit("log_f_inf", "f_fit.dat", "f", "gamma", true);
  }
}

}  // namespace

std::vector<std::string> emit_figure_data(const fs::path &dir, const std::string &figure)
{
  if (figure != "fig1" && figure != "fig2gap" && figure != "fig3")
  {
    throw ConfigInvalid("figure: unknown id '" + figure + "' (expected fig1, fig2gap or fig3)");
  }
  std::string config = "{}";
  if (fs::exists(dir / "manifest.json"))
  {
    config = read_json(dir / "manifest.json").at("meta").at("config").dump();
  }
  FigureWriter w(dir / "figures" / figure, figure, config);
  if (figure == "fig1")
  {
    fig1(dir, w);
  }
  else if (figure == "fig2gap")
  {
    fig2gap(dir, w);
  }
  else
  {
    fig3(dir, w);
  }
  return w.files();
}

}  // namespace kerrcrit::app
