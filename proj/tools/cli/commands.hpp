#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace mtev::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct EigsResult {
  std::vector<EigenvalueRecord> records;
  std::filesystem::path csv;
};

/// Writes <output_dir>/eigenvalues.csv and prints the smallest root to `log`.
EigsResult cmd_eigs(const Scenario& s, std::ostream& log);

struct SweepRun {
  double eps = 0.0;
  IndicatorCurve curve;
  std::vector<EigenvalueRecord> exact;  ///< modified roots with n >= 1 in the sweep window
};

struct SweepResult {
  std::vector<SweepRun> runs;  ///< eps first, then compare_eps in order
  std::vector<std::filesystem::path> files;
};

/// Writes indicator.csv, peaks.csv and exact_eigenvalues.csv for eps, the
/// same three files with an _eps<value> suffix for every compare_eps entry,
/// and plot_indicator.py.
SweepResult cmd_sweep(const Scenario& s, unsigned workers, std::ostream& log);

enum class OperatorChoice { F, F0, Modified };
OperatorChoice parse_operator_choice(const std::string& text);

/// Writes <output_dir>/operator_<which>.bin plus a .scenario sidecar.
std::filesystem::path cmd_operator(const Scenario& s, OperatorChoice which, unsigned workers, std::ostream& log);

/// Replaceable pieces for negative-control testing of the self test.
struct SelftestHooks {
  std::function<Complex(int, Complex)> sph_j;  ///< defaults to sph_bessel_j
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestCheck> cmd_selftest(const SelftestHooks& hooks, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const SelftestHooks& hooks = {});

}  // namespace mtev::cli
