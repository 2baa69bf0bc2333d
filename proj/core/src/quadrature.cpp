#include "mtev/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mtev/errors.hpp"

namespace mtev {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

DirectionGrid::DirectionGrid(int n_polar, int n_azimuth) : n_polar_(n_polar), n_azimuth_(n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4) {
    throw std::invalid_argument("direction_grid: need n_polar >= 2 and n_azimuth >= 4 (got " +
                                std::to_string(n_polar) + ", " + std::to_string(n_azimuth) + ")");
  }
  const GaussLegendre gl = gauss_legendre(n_polar);
  const double dphi = 2.0 * kPi / n_azimuth;
  directions_.reserve(static_cast<std::size_t>(n_polar * n_azimuth));
  weights_.reserve(directions_.capacity());
  for (int i = 0; i < n_polar; ++i) {
    // Largest cos(theta) first.
    const std::size_t gi = static_cast<std::size_t>(n_polar - 1 - i);
    const double theta = std::acos(gl.nodes[gi]);
    for (int j = 0; j < n_azimuth; ++j) {
      directions_.push_back(UnitDirection::from_angles(theta, j * dphi));
      weights_.push_back(gl.weights[gi] * dphi);
    }
  }
}

std::size_t DirectionGrid::opposite(std::size_t idx) const {
  if (n_azimuth_ % 2 != 0) throw GridMismatch("opposite: azimuth count must be even");
  const std::size_t na = static_cast<std::size_t>(n_azimuth_);
  const std::size_t i = idx / na;
  const std::size_t j = idx % na;
  return (static_cast<std::size_t>(n_polar_) - 1 - i) * na + (j + na / 2) % na;
}

DirectionGrid direction_grid(int n_polar, int n_azimuth) { return DirectionGrid(n_polar, n_azimuth); }

}  // namespace mtev
