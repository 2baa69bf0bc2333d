#include "scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "mtev/errors.hpp"

namespace mtev::cli {

namespace {

std::string_view trim(std::string_view v) {
  const auto first = v.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = v.find_last_not_of(" \t\r");
  return v.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view v, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = v.find(sep, start);
    parts.push_back(trim(v.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "': expected " +
                    std::string(expected));
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out))
    bad_value(key, value, "a finite number");
  return out;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view value) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  if (value.empty() || value == "none") return out;
  for (std::string_view part : split(value, ',')) out.push_back(parse_double(key, part));
  return out;
}

std::string render_list(const std::vector<double>& values) {
  if (values.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += shortest(values[i]);
  }
  return out;
}

struct Key {
  const char* name;
  std::function<void(Scenario&, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
};

#define MTEV_DOUBLE_KEY(field)                                                                     \
  Key {                                                                                            \
    #field, [](Scenario& s, std::string_view v) { s.field = parse_double(#field, v); },             \
        [](const Scenario& s) { return shortest(s.field); }                                        \
  }
#define MTEV_INT_KEY(field)                                                                        \
  Key {                                                                                            \
    #field, [](Scenario& s, std::string_view v) { s.field = parse_integer<int>(#field, v); },       \
        [](const Scenario& s) { return std::to_string(s.field); }                                  \
  }
#define MTEV_SEED_KEY(field)                                                                       \
  Key {                                                                                            \
    #field, [](Scenario& s, std::string_view v) { s.field = parse_integer<std::uint64_t>(#field, v); }, \
        [](const Scenario& s) { return std::to_string(s.field); }                                  \
  }
#define MTEV_STRING_KEY(field)                                                                     \
  Key {                                                                                            \
    #field, [](Scenario& s, std::string_view v) { s.field = std::string(v); },                     \
        [](const Scenario& s) { return s.field; }                                                  \
  }

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys{
      MTEV_DOUBLE_KEY(k),
      MTEV_DOUBLE_KEY(eps),
      MTEV_DOUBLE_KEY(gamma),
      MTEV_DOUBLE_KEY(eta),
      Key{"compare_eps", [](Scenario& s, std::string_view v) { s.compare_eps = parse_list("compare_eps", v); },
          [](const Scenario& s) { return render_list(s.compare_eps); }},
      MTEV_INT_KEY(n_polar),
      MTEV_INT_KEY(n_azimuth),
      Key{"n_max",
          [](Scenario& s, std::string_view v) {
            if (v == "auto")
              s.n_max.reset();
            else
              s.n_max = parse_integer<int>("n_max", v);
          },
          [](const Scenario& s) { return s.n_max ? std::to_string(*s.n_max) : std::string("auto"); }},
      MTEV_DOUBLE_KEY(noise_level),
      MTEV_SEED_KEY(noise_seed),
      MTEV_DOUBLE_KEY(eta_min),
      MTEV_DOUBLE_KEY(eta_max),
      MTEV_DOUBLE_KEY(eta_step),
      MTEV_INT_KEY(z_count),
      MTEV_DOUBLE_KEY(z_max),
      MTEV_SEED_KEY(z_seed),
      MTEV_STRING_KEY(q_set),
      MTEV_STRING_KEY(regularization),
      MTEV_DOUBLE_KEY(alpha),
      MTEV_DOUBLE_KEY(discrepancy_level),
      MTEV_DOUBLE_KEY(peak_prominence),
      MTEV_INT_KEY(peak_half_window),
      Key{"modified", [](Scenario& s, std::string_view v) { s.modified = parse_bool("modified", v); },
          [](const Scenario& s) { return std::string(s.modified ? "true" : "false"); }},
      MTEV_DOUBLE_KEY(eig_min),
      MTEV_DOUBLE_KEY(eig_max),
      MTEV_DOUBLE_KEY(eig_step),
      MTEV_INT_KEY(eig_n_max),
      MTEV_STRING_KEY(output_dir),
  };
  return keys;
}

#undef MTEV_DOUBLE_KEY
#undef MTEV_INT_KEY
#undef MTEV_SEED_KEY
#undef MTEV_STRING_KEY

[[noreturn]] void invalid(const std::string& what) { throw ConfigError("invalid scenario: " + what); }

}  // namespace

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void set_key(Scenario& s, std::string_view key, std::string_view value) {
  for (const Key& entry : key_table()) {
    if (key == entry.name) {
      entry.set(s, trim(value));
      return;
    }
  }
  throw ConfigError("unknown scenario key '" + std::string(key) + "'");
}

void apply_override(Scenario& s, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  set_key(s, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
  Scenario s;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    try {
      set_key(s, trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

void validate(const Scenario& s) {
  if (!(s.k > 0.0)) invalid("k must be positive");
  if (!(s.eps > 0.0)) invalid("eps must be positive");
  for (double e : s.compare_eps)
    if (!(e > 0.0)) invalid("compare_eps entries must be positive");
  if (!(s.gamma > 0.0) || s.gamma == 1.0) invalid("gamma must be positive and different from 1");
  if (!(s.eta > 0.0)) invalid("eta must be positive");
  if (s.n_polar < 2 || s.n_azimuth < 4 || s.n_azimuth % 2) invalid("grid needs n_polar >= 2 and even n_azimuth >= 4");
  if (s.n_max && (*s.n_max < 1 || *s.n_max > 60)) invalid("n_max must lie in [1, 60]");
  if (!(s.noise_level >= 0.0 && s.noise_level < 1.0)) invalid("noise_level must lie in [0, 1)");
  if (!(s.eta_min > 0.0 && s.eta_min <= s.eta_max)) invalid("need 0 < eta_min <= eta_max");
  if (!(s.eta_step > 0.0)) invalid("eta_step must be positive");
  if (s.z_count < 0) invalid("z_count must be non-negative");
  if (!(s.z_max > 0.0 && s.z_max < 1.0)) invalid("z_max must lie in (0, 1)");
  polarizations(s);
  if (s.regularization != "discrepancy" && s.regularization != "fixed")
    invalid("regularization must be 'discrepancy' or 'fixed'");
  if (!(s.alpha > 0.0)) invalid("alpha must be positive");
  if (!(s.discrepancy_level > 0.0 && s.discrepancy_level < 1.0)) invalid("discrepancy_level must lie in (0, 1)");
  if (!(s.peak_prominence > 0.0)) invalid("peak_prominence must be positive");
  if (s.peak_half_window < 1) invalid("peak_half_window must be at least 1");
  if (!(s.eig_min > 0.0 && s.eig_min <= s.eig_max)) invalid("need 0 < eig_min <= eig_max");
  if (!(s.eig_step > 0.0)) invalid("eig_step must be positive");
  if (s.eig_n_max < 0 || s.eig_n_max > 60) invalid("eig_n_max must lie in [0, 60]");
  if (s.output_dir.empty()) invalid("output_dir must not be empty");
}

Scenario resolved(Scenario s) {
  if (!s.n_max) s.n_max = truncation_order(s.k);
  return s;
}

std::string render(const Scenario& s, std::string_view prefix) {
  std::string out;
  for (const Key& entry : key_table()) {
    out += prefix;
    out += entry.name;
    out += " = ";
    out += entry.get(s);
    out += '\n';
  }
  return out;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> names;
  for (const Key& entry : key_table()) names.emplace_back(entry.name);
  return names;
}

MediumParams medium(const Scenario& s) { return {s.k, s.eps, s.gamma, {s.eta, 0.0}}; }

std::vector<Vec3> polarizations(const Scenario& s) {
  if (s.q_set == "axes") return {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  std::vector<Vec3> out;
  for (std::string_view item : split(s.q_set, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != 3) bad_value("q_set", s.q_set, "'axes' or 'x,y,z;x,y,z;...'");
    Vec3 q{};
    for (int i = 0; i < 3; ++i) q[i] = parse_double("q_set", parts[i]);
    const double n = norm(q);
    if (!(n > 0.0)) bad_value("q_set", s.q_set, "nonzero polarization vectors");
    out.push_back((1.0 / n) * q);
  }
  return out;
}

SweepScenario sweep_scenario(const Scenario& s, double eps, unsigned workers) {
  SweepScenario sc;
  sc.params = medium(s);
  sc.params.eps = eps;
  sc.n_polar = s.n_polar;
  sc.n_azimuth = s.n_azimuth;
  sc.n_max = s.n_max;
  sc.noise = {s.noise_level, s.noise_seed};
  sc.sampling = default_sampling(s.z_count, s.z_max, s.z_seed);
  sc.sampling.q = polarizations(s);
  sc.sampling.eta = uniform_grid(s.eta_min, s.eta_max, s.eta_step);
  sc.sampling.rule.kind = s.regularization == "fixed" ? RegularizationKind::Fixed : RegularizationKind::Discrepancy;
  sc.sampling.rule.alpha = s.alpha;
  sc.sampling.rule.noise_level = s.discrepancy_level;
  sc.peaks = {s.peak_prominence, s.peak_half_window};
  sc.workers = workers;
  return sc;
}

EigenSearch eigen_search(const Scenario& s) {
  EigenSearch search;
  search.lo = s.eig_min;
  search.hi = s.eig_max;
  search.step = s.eig_step;
  search.n_max = s.eig_n_max;
  search.modified = s.modified;
  return search;
}

}  // namespace mtev::cli
