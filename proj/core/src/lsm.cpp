#include "mtev/lsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "mtev/errors.hpp"
#include "mtev/parallel.hpp"

namespace mtev {

void SamplingConfig::validate() const {
  if (!(z_max > 0.0 && z_max < 1.0)) throw std::invalid_argument("z_max must lie in (0, 1)");
  if (z.empty() || q.empty()) throw std::invalid_argument("sampling needs at least one point and one polarization");
  for (const Vec3& p : z) {
    if (!(norm(p) <= z_max)) throw std::invalid_argument("sampling point outside the ball of radius z_max");
  }
  for (const Vec3& v : q) {
    if (std::abs(norm(v) - 1.0) > 1e-12) throw std::invalid_argument("polarizations must be unit vectors");
  }
  for (std::size_t i = 0; i + 1 < eta.size(); ++i) {
    if (!(eta[i] < eta[i + 1])) throw std::invalid_argument("eta grid must be strictly increasing");
  }
  for (double e : eta) {
    if (!(e > 0.0)) throw std::invalid_argument("eta grid must be positive");
  }
}

SamplingConfig default_sampling(int random_points, double z_max, std::uint64_t z_seed) {
  if (random_points < 0) throw std::invalid_argument("random_points must be >= 0");
  SamplingConfig cfg;
  cfg.z_max = z_max;
  cfg.z_seed = z_seed;
  cfg.z.push_back({0.0, 0.0, 0.0});
  std::mt19937_64 rng(z_seed);
  const auto uniform = [&rng] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
  while (static_cast<int>(cfg.z.size()) < random_points + 1) {
    const Vec3 p{uniform(), uniform(), uniform()};
    if (norm(p) < 1.0) cfg.z.push_back(z_max * p);
  }
  cfg.q = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  return cfg;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo <= hi)) throw std::invalid_argument("uniform_grid: need step > 0 and lo <= hi");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-3));
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

TangentVector dipole_far_field(const UnitDirection& xhat, const Vec3& z, const Vec3& q, double k) {
  const Complex factor = kI * k / (4.0 * kPi) * std::exp(Complex{0.0, -k * dot(xhat.xyz(), z)});
  return factor * TangentVector::project(q, xhat);
}

ComplexVector dipole_rhs(const DirectionGrid& grid, const Vec3& z, const Vec3& q, double k) {
  ComplexVector b(2 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const TangentVector t = dipole_far_field(grid.direction(i), z, q, k);
    const double sw = std::sqrt(grid.weight(i));
    b[2 * i] = sw * t.theta;
    b[2 * i + 1] = sw * t.phi;
  }
  return b;
}

namespace {

double filtered_norm(const SvdFactors& f, std::span<const Complex> coeffs, double alpha) {
  double sum = 0.0;
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    const double s = f.sigma[k];
    const double factor = s / (s * s + alpha);
    sum += factor * factor * std::norm(coeffs[k]);
  }
  return std::sqrt(sum);
}

struct AlphaChoice {
  double alpha;
  bool fallback;
};

AlphaChoice discrepancy_alpha(const SvdFactors& f, std::span<const Complex> coeffs, double outside, double b_norm,
                              double noise) {
  const double s1 = f.sigma.empty() ? 0.0 : f.sigma.front();
  const AlphaChoice fallback{1e-8 * s1 * s1, true};
  if (s1 == 0.0 || b_norm == 0.0 || !(noise > 0.0)) return fallback;
  const double target = noise * b_norm;
  double lo = std::log(1e-16 * s1 * s1);
  double hi = std::log(1e4 * s1 * s1);
  const auto residual = [&](double log_alpha) { return tikhonov_residual(f, coeffs, outside, std::exp(log_alpha)); };
  if (residual(lo) > target || residual(hi) < target) return fallback;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r - target) <= 0.05 * target) return {std::exp(mid), false};
    (r < target ? lo : hi) = mid;
  }
  return fallback;
}

}  // namespace

RegularizedSolution regularized_solve(const SvdFactors& f, std::span<const Complex> b, const RegularizationRule& rule,
                                      bool want_density) {
  const ComplexVector coeffs = left_coefficients(f, b);
  RegularizedSolution out;
  if (rule.kind == RegularizationKind::Fixed) {
    if (!(rule.alpha > 0.0)) throw std::invalid_argument("fixed regularization needs alpha > 0");
    out.alpha = rule.alpha;
  } else {
    const double b_norm = norm2(b);
    const double captured = norm2(coeffs);
    const double outside = std::max(0.0, b_norm * b_norm - captured * captured);
    const AlphaChoice choice = discrepancy_alpha(f, coeffs, outside, b_norm, rule.noise_level);
    out.alpha = choice.alpha;
    out.fallback = choice.fallback;
    if (!(out.alpha > 0.0)) out.alpha = std::numeric_limits<double>::min();
  }
  out.norm = filtered_norm(f, coeffs, out.alpha);
  if (want_density) out.g = tikhonov_from_coefficients(f, coeffs, out.alpha);
  return out;
}

RegularizedSolution solve_far_field_equation(const FarFieldMatrix& op, const Vec3& z, const Vec3& q,
                                             const RegularizationRule& rule) {
  const SvdFactors f = svd(op.matrix);
  return regularized_solve(f, dipole_rhs(op.grid, z, q, op.meta.params.k), rule, true);
}

// ---------------------------------------------------------------------------

std::vector<Peak> find_peaks(const std::vector<double>& eta, const std::vector<double>& g, const PeakOptions& opts) {
  if (eta.size() != g.size()) throw std::invalid_argument("find_peaks: length mismatch");
  std::vector<Peak> peaks;
  const std::size_t n = g.size();
  const auto w = static_cast<std::size_t>(std::max(1, opts.half_window));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(g[i])) {
      peaks.push_back({eta[i], i, std::numeric_limits<double>::infinity(), std::nullopt});
      continue;
    }
    if (i == 0 || i + 1 >= n) continue;
    if (!(g[i] > g[i - 1] && g[i] > g[i + 1])) continue;
    std::vector<double> window;
    for (std::size_t j = i >= w ? i - w : 0; j <= std::min(n - 1, i + w); ++j) {
      if (!std::isnan(g[j])) window.push_back(g[j]);
    }
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    std::nth_element(window.begin(), mid, window.end());
    double median = *mid;
    if (window.size() % 2 == 0) {
      const double below = *std::max_element(window.begin(), mid);
      median = 0.5 * (median + below);
    }
    const double prominence = g[i] / median;
    if (!(prominence >= opts.min_prominence)) continue;
    const double l = std::log(g[i - 1]), c = std::log(g[i]), r = std::log(g[i + 1]);
    const double denom = l - 2.0 * c + r;
    double offset = denom != 0.0 ? 0.5 * (l - r) / denom : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    const double spacing = offset >= 0.0 ? eta[i + 1] - eta[i] : eta[i] - eta[i - 1];
    peaks.push_back({eta[i] + offset * spacing, i, prominence, std::nullopt});
  }
  return peaks;
}

void annotate_peaks(std::vector<Peak>& peaks, const std::vector<double>& exact) {
  for (Peak& p : peaks) {
    p.nearest_exact.reset();
    for (double e : exact) {
      if (!p.nearest_exact || std::abs(e - p.eta) < std::abs(*p.nearest_exact - p.eta)) p.nearest_exact = e;
    }
  }
}

IndicatorCurve indicator_sweep(const SweepScenario& scenario) {
  scenario.sampling.validate();
  MediumParams base = scenario.params;
  base.validate_physical();
  if (!(base.gamma > 0.0) || base.gamma == 1.0) throw std::invalid_argument("indicator_sweep: need gamma > 0, != 1");

  const int n_max = truncation_order(base.k, scenario.n_max);
  const FarFieldAssembler assembler(direction_grid(scenario.n_polar, scenario.n_azimuth), n_max);
  const FarFieldMatrix data =
      add_noise(assembler.physical(base, scenario.workers), scenario.noise.level, scenario.noise.seed);

  const SamplingConfig& s = scenario.sampling;
  std::vector<ComplexVector> rhs;
  for (const Vec3& z : s.z)
    for (const Vec3& q : s.q) rhs.push_back(dipole_rhs(assembler.grid(), z, q, base.k));

  const std::size_t count = s.eta.size();
  IndicatorCurve curve;
  curve.n_max = n_max;
  curve.eta = s.eta;
  curve.g.assign(count, 0.0);
  curve.n_solves.assign(count, 0);
  curve.alpha_median.assign(count, 0.0);
  curve.flags.assign(count, "");
  curve.norms.assign(count, std::vector<double>(rhs.size(), 0.0));

  parallel_for(count, scenario.workers, [&](std::size_t idx) {
    MediumParams params = base;
    params.eta = {s.eta[idx], 0.0};
    ComplexMatrix aux;
    try {
      aux = assembler.assemble(auxiliary_responses(params, n_max), 1);
    } catch (const SingularModalSystem& e) {
      curve.g[idx] = std::numeric_limits<double>::quiet_NaN();
      curve.alpha_median[idx] = std::numeric_limits<double>::quiet_NaN();
      curve.flags[idx] = "singular_modal_n" + std::to_string(e.order());
      std::fill(curve.norms[idx].begin(), curve.norms[idx].end(), std::numeric_limits<double>::quiet_NaN());
      return;
    }
    const ComplexMatrix modified = data.matrix - aux;
    const SvdFactors f = svd(modified, kDefaultSvdSweeps, false);
    std::vector<double> alphas;
    double sum = 0.0;
    bool fallback = false;
    for (std::size_t r = 0; r < rhs.size(); ++r) {
      const RegularizedSolution sol = regularized_solve(f, rhs[r], s.rule, false);
      curve.norms[idx][r] = sol.norm;
      sum += sol.norm;
      alphas.push_back(sol.alpha);
      fallback = fallback || sol.fallback;
    }
    std::sort(alphas.begin(), alphas.end());
    const std::size_t h = alphas.size() / 2;
    curve.alpha_median[idx] = alphas.size() % 2 ? alphas[h] : 0.5 * (alphas[h - 1] + alphas[h]);
    curve.g[idx] = sum / static_cast<double>(rhs.size());
    curve.n_solves[idx] = static_cast<int>(rhs.size());
    if (fallback) curve.flags[idx] = "alpha_fallback";
  });

  curve.peaks = find_peaks(curve.eta, curve.g, scenario.peaks);
  return curve;
}

}  // namespace mtev
