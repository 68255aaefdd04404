// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit_app/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace kerrcrit::app
{

void write_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body)
{
  namespace fs = std::filesystem;
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path());
  }
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw TaskFailed("cannot write " + tmp.string());
    }
    body(out);
    out.flush();
    if (!out)
    {
      throw TaskFailed("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
  {
    fs::remove(tmp);
    throw TaskFailed("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void write_json(const std::filesystem::path &path, const Json &doc)
{
  write_atomic(path, [&](std::ostream &out) { out << doc.dump(2) << '\n'; });
}

Json read_json(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw MissingInput("missing input " + path.string());
  }
  try
  {
    return Json::parse(in);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw TaskFailed(path.string() + ": " + e.what());
  }
}

std::string format_real(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
    {
      out += '"';
    }
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string &line)
{
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const char c = line[i];
    if (quoted)
    {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
      {
        out.back() += '"';
        ++i;
      }
      else if (c == '"')
      {
        quoted = false;
      }
      else
      {
        out.back() += c;
      }
    }
    else if (c == '"')
    {
      quoted = true;
    }
    else if (c == ',')
    {
      out.emplace_back();
    }
    else
    {
      out.back() += c;
    }
  }
  return out;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRecord> &records)
{
  out << kSweepHeader << '\n';
  for (const SweepRecord &r : records)
  {
    out << format_real(r.n_scale) << ',' << format_real(r.f_tilde) << ',';
    if (r.ok())
    {
      out << format_real(r.lambda.real()) << ',' << format_real(r.lambda.imag()) << ',' << format_real(r.n_rescaled)
          << ',' << format_real(r.g2) << ',' << r.cutoff_used << ",\n";
    }
    else
    {
      out << "nan,nan,nan,nan," << r.cutoff_used << ',' << csv_field(r.err) << '\n';
    }
  }
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw MissingInput("missing input " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader)
  {
    throw TaskFailed(path.string() + ": unexpected header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line))
  {
    if (line.empty())
    {
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 8)
    {
      throw TaskFailed(path.string() + ": malformed row '" + line + "'");
    }
    SweepRow r;
    r.n_scale = std::stod(f[0]);
    r.f_tilde = std::stod(f[1]);
    r.lambda = {std::stod(f[2]), std::stod(f[3])};
    r.n_over_n = std::stod(f[4]);
    r.g2 = std::stod(f[5]);
    r.cutoff = std::stoi(f[6]);
    r.err = f[7];
    rows.push_back(r);
  }
  return rows;
}

Json complex_json(std::complex<double> z) { return {{"re", real_json(z.real())}, {"im", real_json(z.imag())}}; }

Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace kerrcrit::app
