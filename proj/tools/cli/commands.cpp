#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mtev/errors.hpp"
#include "mtev/matrix_io.hpp"

namespace mtev::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void write_header(std::ostream& out, const std::string& command, const Scenario& s) {
  out << "# mtev " << command << "\n" << render(s, "# ");
}

void write_eigenvalue_rows(std::ostream& out, const std::vector<EigenvalueRecord>& records) {
  out << "eta,n,branch,modified,residual\n";
  for (const EigenvalueRecord& r : records) {
    out << full_precision(r.eta) << ',' << r.which.n << ',' << branch_letter(r.which.branch) << ','
        << (r.which.modified ? 1 : 0) << ',' << full_precision(r.residual) << '\n';
  }
}

std::string eps_suffix(std::size_t run, double eps) { return run == 0 ? "" : "_eps" + shortest(eps); }

void write_plot_script(const fs::path& path, const Scenario& s, const std::vector<SweepRun>& runs) {
  std::ofstream out = open_output(path);
  out << "#!/usr/bin/env python3\n"
      << "# Indicator curves written by mtev sweep. Usage: python3 plot_indicator.py [out.png]\n"
      << render(s, "# ") << "import csv\nimport os\nimport sys\n\n"
      << "import matplotlib\n\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt  # noqa: E402\n\n"
      << "HERE = os.path.dirname(os.path.abspath(__file__))\nRUNS = [\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string suffix = eps_suffix(i, runs[i].eps);
    out << "    (\"eps = " << shortest(runs[i].eps) << "\", \"indicator" << suffix << ".csv\", \"exact_eigenvalues"
        << suffix << ".csv\"),\n";
  }
  out << "]\n\n\n"
      << "def rows(name):\n"
      << "    with open(os.path.join(HERE, name), newline=\"\") as fh:\n"
      << "        return list(csv.DictReader(line for line in fh if not line.startswith(\"#\")))\n\n\n"
      << "fig, ax = plt.subplots(figsize=(9, 4))\n"
      << "for label, indicator, exact in RUNS:\n"
      << "    data = rows(indicator)\n"
      << "    eta = [float(r[\"eta\"]) for r in data]\n"
      << "    g = [float(r[\"g_eta\"]) for r in data]\n"
      << "    (line,) = ax.semilogy(eta, g, label=label)\n"
      << "    for r in rows(exact):\n"
      << "        ax.axvline(float(r[\"eta\"]), color=line.get_color(), linestyle=\":\", linewidth=0.8)\n"
      << "ax.set_xlabel(\"eta\")\n"
      << "ax.set_ylabel(\"indicator g(eta)\")\n"
      << "ax.legend()\n"
      << "target = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, \"indicator.png\")\n"
      << "fig.savefig(target, dpi=150, bbox_inches=\"tight\")\n"
      << "print(target)\n";
}

}  // namespace

EigsResult cmd_eigs(const Scenario& scenario, std::ostream& log) {
  validate(scenario);
  const Scenario s = resolved(scenario);
  EigsResult result;
  result.records = eigenvalues(medium(s), eigen_search(s));

  fs::create_directories(s.output_dir);
  result.csv = fs::path(s.output_dir) / "eigenvalues.csv";
  std::ofstream out = open_output(result.csv);
  write_header(out, "eigs", s);
  write_eigenvalue_rows(out, result.records);

  const char* kind = s.modified ? "modified" : "unmodified";
  if (result.records.empty()) {
    log << "no " << kind << " eigenvalues in [" << shortest(s.eig_min) << ", " << shortest(s.eig_max) << "]\n";
  } else {
    const EigenvalueRecord& first = result.records.front();
    log << "smallest " << kind << " eigenvalue " << full_precision(first.eta) << " (n = " << first.which.n
        << ", branch " << branch_letter(first.which.branch) << ")\n";
  }
  log << result.records.size() << " roots written to " << result.csv.string() << "\n";
  return result;
}

SweepResult cmd_sweep(const Scenario& scenario, unsigned workers, std::ostream& log) {
  validate(scenario);
  const Scenario s = resolved(scenario);
  fs::create_directories(s.output_dir);

  std::vector<double> eps_values{s.eps};
  eps_values.insert(eps_values.end(), s.compare_eps.begin(), s.compare_eps.end());

  SweepResult result;
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    SweepRun run;
    run.eps = eps_values[i];

    MediumParams params = medium(s);
    params.eps = run.eps;
    EigenSearch search = eigen_search(s);
    search.lo = s.eta_min;
    search.hi = s.eta_max;
    search.modified = true;
    for (const EigenvalueRecord& r : eigenvalues(params, search))
      if (r.which.n >= 1) run.exact.push_back(r);

    run.curve = indicator_sweep(sweep_scenario(s, run.eps, workers));
    std::vector<double> exact_eta;
    for (const EigenvalueRecord& r : run.exact) exact_eta.push_back(r.eta);
    annotate_peaks(run.curve.peaks, exact_eta);

    const std::string suffix = eps_suffix(i, run.eps);
    const std::string header_command = "sweep eps=" + shortest(run.eps);

    const fs::path indicator = fs::path(s.output_dir) / ("indicator" + suffix + ".csv");
    {
      std::ofstream out = open_output(indicator);
      write_header(out, header_command, s);
      out << "eta,g_eta,n_solves,alpha_median,flags\n";
      const IndicatorCurve& c = run.curve;
      for (std::size_t j = 0; j < c.eta.size(); ++j) {
        out << full_precision(c.eta[j]) << ',' << full_precision(c.g[j]) << ',' << c.n_solves[j] << ','
            << full_precision(c.alpha_median[j]) << ',' << c.flags[j] << '\n';
      }
    }
    const fs::path peaks = fs::path(s.output_dir) / ("peaks" + suffix + ".csv");
    {
      std::ofstream out = open_output(peaks);
      write_header(out, header_command, s);
      out << "eta_peak,prominence,nearest_exact_eta\n";
      for (const Peak& p : run.curve.peaks) {
        out << full_precision(p.eta) << ',' << full_precision(p.prominence) << ','
            << (p.nearest_exact ? full_precision(*p.nearest_exact) : std::string()) << '\n';
      }
    }
    const fs::path exact = fs::path(s.output_dir) / ("exact_eigenvalues" + suffix + ".csv");
    {
      std::ofstream out = open_output(exact);
      write_header(out, header_command, s);
      write_eigenvalue_rows(out, run.exact);
    }
    result.files.insert(result.files.end(), {indicator, peaks, exact});

    log << "eps = " << shortest(run.eps) << ": " << run.curve.eta.size() << " eta points, "
        << run.curve.peaks.size() << " peaks, " << run.exact.size() << " exact eigenvalues (n_max "
        << run.curve.n_max << ")\n";
    for (const Peak& p : run.curve.peaks) {
      log << "  peak " << full_precision(p.eta) << "  prominence " << shortest(p.prominence);
      if (p.nearest_exact) log << "  nearest exact " << full_precision(*p.nearest_exact);
      log << "\n";
    }
    result.runs.push_back(std::move(run));
  }

  const fs::path script = fs::path(s.output_dir) / "plot_indicator.py";
  write_plot_script(script, s, result.runs);
  result.files.push_back(script);
  return result;
}

OperatorChoice parse_operator_choice(const std::string& text) {
  if (text == "F") return OperatorChoice::F;
  if (text == "F0") return OperatorChoice::F0;
  if (text == "modified") return OperatorChoice::Modified;
  throw ConfigError("operator must be F, F0 or modified, got '" + text + "'");
}

fs::path cmd_operator(const Scenario& scenario, OperatorChoice which, unsigned workers, std::ostream& log) {
  validate(scenario);
  const Scenario s = resolved(scenario);
  const FarFieldAssembler assembler(direction_grid(s.n_polar, s.n_azimuth), *s.n_max);
  const MediumParams params = medium(s);

  const auto physical = [&] { return add_noise(assembler.physical(params, workers), s.noise_level, s.noise_seed); };
  const FarFieldMatrix result = [&] {
    switch (which) {
      case OperatorChoice::F: return physical();
      case OperatorChoice::F0: return assembler.auxiliary(params, workers);
      case OperatorChoice::Modified: break;
    }
    return modified_operator(physical(), assembler.auxiliary(params, workers));
  }();

  fs::create_directories(s.output_dir);
  const std::string name = std::string("operator_") + operator_kind_name(result.meta.kind);
  const fs::path path = fs::path(s.output_dir) / (name + ".bin");
  write_matrix(path, result);
  {
    std::ofstream sidecar = open_output(fs::path(s.output_dir) / (name + ".scenario"));
    write_header(sidecar, std::string("operator ") + operator_kind_name(result.meta.kind), s);
  }
  log << "wrote " << result.matrix.rows() << " x " << result.matrix.cols() << " " << operator_kind_name(result.meta.kind)
      << " matrix to " << path.string() << "\n";
  return path;
}

}  // namespace mtev::cli
