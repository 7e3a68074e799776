#pragma once
// Flat `key = value` experiment configuration files.  Documented keys:
//   epsilon_sweep  comma-separated, strictly decreasing, each in (0,1)
//   gamma          weight exponent, in (0, 0.5)
//   kappa          exceedance exponent, in (0, 0.5)
//   nu             distance from threshold, |nu| <= 1
//   delta          band-split parameter, in (0,1)
//   T_slow         slow-time horizon, > 0
//   n_replicas     Monte-Carlo replicas, >= 1
//   n_modes        spectral modes, even, >= 2
//   L_max          fast-window radius, >= 1
//   fast_dx        fast-grid spacing, in (0, 0.1]
//   seed           64-bit root seed
//   snapshots      snapshot count per run, >= 1
// Unknown keys and duplicates are rejected, naming the key and line.

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "shmod/experiments.hpp"

namespace shmod::io {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_real(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid numeric value for key '" + key + "': " + v);
  }
}

inline long long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer value for key '" + key + "': " + v);
  }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid seed value for key '" + key + "': " + v);
  }
}

}  // namespace detail

inline experiments::ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path.string());
  experiments::ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected 'key = value' at line " +
                                  std::to_string(line_no));
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (!seen.insert(key).second)
      throw std::invalid_argument("duplicate key '" + key + "' at line " +
                                  std::to_string(line_no));

    if (key == "epsilon_sweep") {
      cfg.epsilon_sweep.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        cfg.epsilon_sweep.push_back(detail::parse_real(detail::trim(item), key));
    } else if (key == "gamma") {
      cfg.gamma = detail::parse_real(value, key);
    } else if (key == "kappa") {
      cfg.kappa = detail::parse_real(value, key);
    } else if (key == "nu") {
      cfg.nu = detail::parse_real(value, key);
    } else if (key == "delta") {
      cfg.delta = detail::parse_real(value, key);
    } else if (key == "T_slow") {
      cfg.T_slow = detail::parse_real(value, key);
    } else if (key == "n_replicas") {
      cfg.n_replicas = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "n_modes") {
      cfg.n_modes = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "L_max") {
      cfg.L_max = detail::parse_real(value, key);
    } else if (key == "fast_dx") {
      cfg.fast_dx = detail::parse_real(value, key);
    } else if (key == "seed") {
      cfg.root_seed = detail::parse_u64(value, key);
    } else if (key == "snapshots") {
      cfg.n_snapshots = static_cast<int>(detail::parse_int(value, key));
    } else {
      throw std::invalid_argument("unknown key '" + key + "' at line " +
                                  std::to_string(line_no));
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace shmod::io
