#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtev/far_field_operator.hpp"
#include "mtev/linalg.hpp"

namespace mtev {

enum class RegularizationKind { Fixed, Discrepancy };

struct RegularizationRule {
  RegularizationKind kind = RegularizationKind::Discrepancy;
  double alpha = 1e-8;        ///< used by Fixed
  double noise_level = 0.02;  ///< used by Discrepancy
};

struct SamplingConfig {
  std::vector<Vec3> z;
  std::vector<Vec3> q;
  std::vector<double> eta;
  RegularizationRule rule;
  double z_max = 0.5;
  std::uint64_t z_seed = 0;

  /// Throws std::invalid_argument when a point leaves the ball of radius
  /// z_max < 1, a polarization is not unit, or the eta grid is not increasing.
  void validate() const;
};

/// The origin plus `random_points` points uniform in the ball of radius
/// z_max drawn from std::mt19937_64(z_seed), and the three axis polarizations.
SamplingConfig default_sampling(int random_points = 8, double z_max = 0.5, std::uint64_t z_seed = 7);

/// lo, lo + step, ... up to hi (inclusive within step / 1000).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// (ik / 4 pi) (xhat x q) x xhat e^{-ik xhat . z} in the tangent frame at xhat.
TangentVector dipole_far_field(const UnitDirection& xhat, const Vec3& z, const Vec3& q, double k);

/// Dipole far field sampled on the grid with the sqrt-weight layout of
/// FarFieldMatrix rows.
ComplexVector dipole_rhs(const DirectionGrid& grid, const Vec3& z, const Vec3& q, double k);

struct RegularizedSolution {
  ComplexVector g;  ///< empty when only the norm was requested
  double norm = 0.0;
  double alpha = 0.0;
  bool fallback = false;  ///< discrepancy rule failed; alpha = 1e-8 sigma_1^2
};

/// Tikhonov solution from factors of the operator. The discrepancy rule
/// bisects log(alpha) until the residual is within 5% of noise_level * |b|.
RegularizedSolution regularized_solve(const SvdFactors& f, std::span<const Complex> b, const RegularizationRule& rule,
                                      bool want_density = true);

RegularizedSolution solve_far_field_equation(const FarFieldMatrix& op, const Vec3& z, const Vec3& q,
                                             const RegularizationRule& rule);

struct PeakOptions {
  double min_prominence = 1.5;  ///< g / median(g over the window)
  int half_window = 10;
};

struct Peak {
  double eta = 0.0;        ///< refined by a parabola through log g
  std::size_t index = 0;   ///< grid index of the sample maximum
  double prominence = 0.0;
  std::optional<double> nearest_exact;
};

std::vector<Peak> find_peaks(const std::vector<double>& eta, const std::vector<double>& g, const PeakOptions& opts);

/// Fills Peak::nearest_exact from a list of reference eigenvalues.
void annotate_peaks(std::vector<Peak>& peaks, const std::vector<double>& exact);

struct SweepScenario {
  MediumParams params;  ///< eta is overwritten per grid point
  int n_polar = 7;
  int n_azimuth = 14;
  std::optional<int> n_max;
  NoiseDescriptor noise{0.02, 1};
  SamplingConfig sampling;
  PeakOptions peaks;
  unsigned workers = 1;
};

struct IndicatorCurve {
  std::vector<double> eta;
  std::vector<double> g;  ///< mean solution norm; NaN where the modal system was singular
  std::vector<int> n_solves;
  std::vector<double> alpha_median;
  std::vector<std::string> flags;            ///< "" or ';'-joined tags
  std::vector<std::vector<double>> norms;    ///< [eta index][z index * q count + q index]
  std::vector<Peak> peaks;
  int n_max = 0;
};

IndicatorCurve indicator_sweep(const SweepScenario& scenario);

}  // namespace mtev
