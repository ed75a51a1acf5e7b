#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaoslab/errors.hpp"

namespace chaoslab {

/// Shortest round-trip decimal form of a double (printf %.17g trimmed);
/// deterministic across runs.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Write a CSV file with a fixed header; numbers via format_number.
void write_csv(const std::string& path, const CsvTable& table);

/// FNV-1a over a byte string.
std::uint64_t fnv1a(const std::string& bytes);

/// Manifest JSON listing every artifact with the config hash and seed.
void write_manifest(const std::string& out_dir, const std::string& command,
                    std::uint64_t config_hash, std::uint64_t seed, int workers,
                    const std::vector<std::string>& artifacts);

/// Self-contained gnuplot scripts (text; no image rendering here).
void emit_loglog_plot(const std::string& script_path,
                      const std::string& data_csv, int xcol, int ycol,
                      const std::string& title);
void emit_series_plot(const std::string& script_path,
                      const std::string& data_csv, int xcol, int ycol,
                      const std::string& title, bool logy);
void emit_heatmap_plot(const std::string& script_path,
                       const std::string& data_csv, int xcol, int ycol,
                       int zcol, const std::string& title);
void emit_slope_fit_plot(const std::string& script_path,
                         const std::string& data_csv, int xcol, int ycol,
                         double slope, double intercept,
                         const std::string& title);

}  // namespace chaoslab
