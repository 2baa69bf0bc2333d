#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mtev/errors.hpp"
#include "mtev/parallel.hpp"

namespace mtev::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const SelftestHooks& hooks) {
  CLI::App app{"Electromagnetic transmission eigenvalues of the unit ball: exact roots and LSM sweeps", "mtev"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  unsigned workers = default_workers();
  app.add_option("-c,--config", config_path, "Scenario file (key = value)");
  app.add_option("-s,--set", overrides, "Override a scenario key: --set key=value (repeatable)");
  app.add_option("-w,--workers", workers, "Worker threads for assembly and sweeps")->check(CLI::Range(1u, 1024u));
  bool print_scenario = false;
  app.add_flag("--print-scenario", print_scenario, "Print the resolved scenario before running");

  CLI::App* eigs = app.add_subcommand("eigs", "Exact (modified) transmission eigenvalues to eigenvalues.csv");
  bool unmodified = false;
  std::optional<double> lo, hi;
  std::optional<int> n_max;
  eigs->add_flag("--unmodified", unmodified, "Roots of the unmodified determinants");
  eigs->add_option("--lo", lo, "Lower end of the search window (eig_min)");
  eigs->add_option("--hi", hi, "Upper end of the search window (eig_max)");
  eigs->add_option("--n-max", n_max, "Largest order n (eig_n_max)");

  CLI::App* sweep = app.add_subcommand("sweep", "LSM indicator sweep over eta with peaks and a plot script");

  CLI::App* op = app.add_subcommand("operator", "Assemble and store a far field matrix");
  std::string which = "modified";
  op->add_option("--which", which, "F, F0 or modified")->check(CLI::IsMember({"F", "F0", "modified"}));

  CLI::App* selftest = app.add_subcommand("selftest", "Fast invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (selftest->parsed()) {
      const auto checks = cmd_selftest(hooks, out);
      for (const auto& c : checks)
        if (!c.passed) return kCheckFailed;
      return kOk;
    }

    Scenario scenario = config_path.empty() ? Scenario{} : load_scenario(config_path);
    for (const std::string& o : overrides) apply_override(scenario, o);
    if (eigs->parsed()) {
      if (unmodified) scenario.modified = false;
      if (lo) scenario.eig_min = *lo;
      if (hi) scenario.eig_max = *hi;
      if (n_max) scenario.eig_n_max = *n_max;
    }
    validate(scenario);
    if (print_scenario) out << render(resolved(scenario));

    if (eigs->parsed()) cmd_eigs(scenario, out);
    if (sweep->parsed()) cmd_sweep(scenario, workers, out);
    if (op->parsed()) cmd_operator(scenario, parse_operator_choice(which), workers, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace mtev::cli
