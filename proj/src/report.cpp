#include "chaoslab/report.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace chaoslab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    double back;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw ConfigError("csv row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    std::uint64_t config_hash, std::uint64_t seed, int workers,
                    const std::vector<std::string>& artifacts) {
  nlohmann::ordered_json m;
  m["command"] = command;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(config_hash));
  m["config_hash"] = hex;
  m["seed"] = seed;
  m["workers"] = workers;
  m["artifacts"] = artifacts;
  std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot open manifest in " + out_dir);
  out << m.dump(2) << "\n";
}

namespace {

std::ofstream open_script(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open plot script " + path);
  out << "# gnuplot script (generated; re-runnable)\n"
      << "set datafile separator ','\n"
      << "set key outside\n"
      << "set grid\n";
  return out;
}

}  // namespace

void emit_loglog_plot(const std::string& script_path,
                      const std::string& data_csv, int xcol, int ycol,
                      const std::string& title) {
  auto out = open_script(script_path);
  out << "set logscale xy\n"
      << "set title '" << title << "'\n"
      << "plot '" << data_csv << "' using " << xcol << ":" << ycol
      << " skip 1 with linespoints title '" << title << "'\n";
}

void emit_series_plot(const std::string& script_path,
                      const std::string& data_csv, int xcol, int ycol,
                      const std::string& title, bool logy) {
  auto out = open_script(script_path);
  if (logy) out << "set logscale y\n";
  out << "set title '" << title << "'\n"
      << "plot '" << data_csv << "' using " << xcol << ":" << ycol
      << " skip 1 with linespoints title '" << title << "'\n";
}

void emit_heatmap_plot(const std::string& script_path,
                       const std::string& data_csv, int xcol, int ycol,
                       int zcol, const std::string& title) {
  auto out = open_script(script_path);
  out << "set view map\n"
      << "set title '" << title << "'\n"
      << "splot '" << data_csv << "' using " << xcol << ":" << ycol << ":"
      << zcol << " skip 1 with points pointtype 5 palette title ''\n";
}

void emit_slope_fit_plot(const std::string& script_path,
                         const std::string& data_csv, int xcol, int ycol,
                         double slope, double intercept,
                         const std::string& title) {
  auto out = open_script(script_path);
  out << "set logscale xy\n"
      << "set title '" << title << "'\n"
      << "fitline(x) = exp(" << format_number(intercept) << ") * x**"
      << format_number(slope) << "\n"
      << "plot '" << data_csv << "' using " << xcol << ":" << ycol
      << " skip 1 with points title 'measured', fitline(x) with lines title "
         "'slope "
      << format_number(slope) << "'\n";
}

}  // namespace chaoslab
