// output.hpp
// ----------
// Result tables, their CSV and SVG renderings, and atomic file emission.
//
// Every CSV starts with '#' comment lines: tool version, experiment, config
// hash, an optional timestamp and the complete canonical configuration, so
// that a file identifies the run that produced it.  Files are written to a
// temporary name in the target directory and renamed into place; a run that
// fails before emission leaves nothing behind.
#pragma once

#include "iafc/io/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace iafc::io {

inline constexpr const char* tool_version = "1.0.0";

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

struct Table {
  std::string name; // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    require(row.size() == columns.size(), "table row does not match the column count");
    rows.push_back(std::move(row));
  }
  std::size_t column(const std::string& c) const {
    const auto it = std::find(columns.begin(), columns.end(), c);
    require(it != columns.end(), "table has no column '" + c + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

/// Shortest representation that round-trips a double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

struct HeaderInfo {
  std::string experiment;
  std::string config_yaml; // canonical configuration
  bool timestamp = true;
};

inline std::string csv_header(const HeaderInfo& h) {
  std::ostringstream os;
  os << "# iafc " << tool_version << "\n";
  os << "# experiment: " << h.experiment << "\n";
  os << "# config_hash: " << fnv1a_hex(h.config_yaml) << "\n";
  if (h.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated: " << buf << "\n";
  }
  os << "# config:\n";
  std::istringstream cfg(h.config_yaml);
  for (std::string line; std::getline(cfg, line);) os << "#   " << line << "\n";
  return os.str();
}

inline std::string to_csv(const Table& t, const HeaderInfo& h) {
  std::ostringstream os;
  os << csv_header(h);
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG line plots
// ---------------------------------------------------------------------------

/// Plot of columns `ys` against column `x`, autoscaled, one polyline each.
inline std::string svg_plot(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                            const std::string& title) {
  const double W = 640, H = 400, ml = 70, mr = 20, mt = 40, mb = 50;
  const std::size_t cx = t.column(x);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& r : t.rows) {
    if (!std::isfinite(r[cx])) continue;
    x0 = std::min(x0, r[cx]);
    x1 = std::max(x1, r[cx]);
    for (const auto& y : ys) {
      const double v = r[t.column(y)];
      if (!std::isfinite(v)) continue;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (v - y0) / (y1 - y0) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
     << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
       << format_number(std::round(xv * 1e4) / 1e4) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
       << format_number(std::round(yv * 1e4) / 1e4) << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x
     << "</text>\n";
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const std::size_t cy = t.column(ys[i]);
    const char* col = colors[i % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : t.rows)
      if (std::isfinite(r[cx]) && std::isfinite(r[cy]))
        os << format_number(std::round(px(r[cx]) * 100) / 100) << ","
           << format_number(std::round(py(r[cy]) * 100) / 100) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 14 * i << "\" text-anchor=\"end\" fill=\""
       << col << "\">" << ys[i] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

struct Artifact {
  std::string filename;
  std::string content;
};

/// Writes every artifact into `dir` via temporary files and renames; if any
/// write fails the temporaries are removed and nothing is renamed.
inline void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& arts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto cleanup = [&] {
    for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
  };
  for (const auto& a : arts) {
    const fs::path dst = dir / a.filename;
    const fs::path tmp = dir / ("." + a.filename + ".tmp");
    std::ofstream out(tmp, std::ios::binary);
    out << a.content;
    out.close();
    staged.emplace_back(tmp, dst);
    if (!out) {
      cleanup();
      throw std::runtime_error("cannot write " + dst.string());
    }
  }
  for (const auto& [tmp, dst] : staged) fs::rename(tmp, dst);
}

} // namespace iafc::io
