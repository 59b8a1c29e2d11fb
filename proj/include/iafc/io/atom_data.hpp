// atom_data.hpp
// -------------
// Editable atomic-data files.  One YAML mapping per file with the keys
//
//     atom, J_g, J_e, I, A_hfs_g_MHz, A_hfs_e_MHz, B_hfs_e_MHz,
//     gJ_g, gJ_e, gI, mass_amu, lambda_nm
//
// Angular momenta may be written as decimals (3.5) or fractions ("7/2").
#pragma once

#include "iafc/atoms/atom.hpp"
#include "iafc/io/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace iafc::io {

namespace detail {

/// Twice an angular momentum given as "3.5", "7/2" or "3".
inline bool doubled_momentum(const std::string& text, int& out) {
  double v = 0.0;
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash));
      const double den = std::stod(text.substr(slash + 1));
      if (den == 0.0) return false;
      v = num / den;
    } else {
      std::size_t used = 0;
      v = std::stod(text, &used);
      if (used != text.size()) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  const double twice = 2.0 * v;
  if (!(twice >= 0.0) || std::abs(twice - std::round(twice)) > 1e-9) return false;
  out = static_cast<int>(std::lround(twice));
  return true;
}

} // namespace detail

inline AtomData parse_atom_data(const std::string& text, const std::string& source = "atom data") {
  using detail::Check;
  std::vector<ConfigIssue> issues;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{source, e.mark.line + 1, "YAML syntax error: " + e.msg}});
  }
  detail::Section s(issues, root, "");
  AtomData a;
  const char* required[] = {"atom", "J_g", "J_e", "I", "A_hfs_g_MHz", "A_hfs_e_MHz",
                            "B_hfs_e_MHz", "gJ_g", "gJ_e", "gI", "mass_amu", "lambda_nm"};
  for (const char* k : required)
    if (!s.has(k)) s.error(k, 0, "missing required key in " + source);
  s.get("atom", a.atom);
  auto momentum = [&](const char* key, int& out) {
    YAML::Node n = s.raw(key);
    if (!n.IsDefined()) return;
    if (!n.IsScalar() || !detail::doubled_momentum(n.Scalar(), out))
      s.error(key, detail::line_of(n), "expected a non-negative integer or half-integer");
  };
  momentum("J_g", a.two_j_ground);
  momentum("J_e", a.two_j_excited);
  momentum("I", a.two_i);
  s.get("A_hfs_g_MHz", a.a_ground_mhz);
  s.get("A_hfs_e_MHz", a.a_excited_mhz);
  s.get("B_hfs_e_MHz", a.b_excited_mhz);
  s.get("gJ_g", a.gj_ground);
  s.get("gJ_e", a.gj_excited);
  s.get("gI", a.g_i);
  s.get("mass_amu", a.mass_amu, Check::positive);
  s.get("lambda_nm", a.lambda_nm, Check::positive);
  s.finish();
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return a;
}

inline AtomData load_atom_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{path, 0, "cannot open atomic-data file"}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_atom_data(ss.str(), path);
}

} // namespace iafc::io
