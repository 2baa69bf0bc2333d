#pragma once

// Flat key = value scenario files for the mtev command-line tool.
//
//   # comment
//   k = 2
//   eps = 2
//   compare_eps = 1.9
//
// Every key has a fixed type; unknown keys and malformed values raise
// ConfigError. render() writes every key in a fixed order, so an output file
// header can be fed back as a scenario file and reproduces the run.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtev/lsm.hpp"
#include "mtev/spectrum.hpp"

namespace mtev::cli {

struct Scenario {
  // medium
  double k = 2.0;
  double eps = 2.0;
  double gamma = 0.5;
  double eta = 1.0;  ///< auxiliary parameter for the operator command
  std::vector<double> compare_eps;

  // far field data
  int n_polar = 7;
  int n_azimuth = 14;
  std::optional<int> n_max;  ///< unset: truncation_order(k)
  double noise_level = 0.02;
  std::uint64_t noise_seed = 1;

  // indicator sweep
  double eta_min = 0.5;
  double eta_max = 25.0;
  double eta_step = 0.05;
  int z_count = 8;
  double z_max = 0.5;
  std::uint64_t z_seed = 7;
  std::string q_set = "axes";
  std::string regularization = "discrepancy";
  double alpha = 1e-8;
  double discrepancy_level = 0.02;
  double peak_prominence = 1.5;
  int peak_half_window = 10;

  // exact eigenvalues
  bool modified = true;
  double eig_min = 0.05;
  double eig_max = 60.0;
  double eig_step = 1e-3;
  int eig_n_max = 15;

  std::string output_dir = ".";
};

/// Assigns one key from its textual value.
void set_key(Scenario& s, std::string_view key, std::string_view value);

/// Applies "key=value".
void apply_override(Scenario& s, std::string_view assignment);

Scenario parse_scenario(std::istream& in, const std::string& source = "<stream>");
Scenario load_scenario(const std::string& path);

/// Throws ConfigError when values are out of range or inconsistent.
void validate(const Scenario& s);

/// Fills n_max with the automatic truncation order when unset.
Scenario resolved(Scenario s);

/// One "<prefix>key = value" line per key, in declaration order.
std::string render(const Scenario& s, std::string_view prefix = "");

std::vector<std::string> known_keys();

MediumParams medium(const Scenario& s);
std::vector<Vec3> polarizations(const Scenario& s);
SweepScenario sweep_scenario(const Scenario& s, double eps, unsigned workers);
EigenSearch eigen_search(const Scenario& s);

/// Shortest text that reads back to the same double.
std::string shortest(double v);
/// 17 significant digits, as used in CSV payloads.
std::string full_precision(double v);

}  // namespace mtev::cli
