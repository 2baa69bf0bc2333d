#pragma once

#include <cstddef>
#include <vector>

#include "mtev/specfun.hpp"

namespace mtev {

struct GaussLegendre {
  std::vector<double> nodes;    ///< ascending, in (-1, 1)
  std::vector<double> weights;  ///< positive, summing to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
GaussLegendre gauss_legendre(int n);

/// Tensor product of Gauss-Legendre in cos(theta) and the trapezoid rule in
/// phi. Direction (i, j) is stored at index i * n_azimuth + j, with polar
/// nodes ordered from the north pole southwards.
class DirectionGrid {
 public:
  DirectionGrid(int n_polar, int n_azimuth);

  int n_polar() const { return n_polar_; }
  int n_azimuth() const { return n_azimuth_; }
  std::size_t size() const { return directions_.size(); }

  const std::vector<UnitDirection>& directions() const { return directions_; }
  const std::vector<double>& weights() const { return weights_; }
  const UnitDirection& direction(std::size_t i) const { return directions_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Index of the antipodal direction; requires an even azimuth count.
  std::size_t opposite(std::size_t i) const;

  friend bool operator==(const DirectionGrid& a, const DirectionGrid& b) {
    return a.n_polar_ == b.n_polar_ && a.n_azimuth_ == b.n_azimuth_;
  }

 private:
  int n_polar_;
  int n_azimuth_;
  std::vector<UnitDirection> directions_;
  std::vector<double> weights_;
};

/// Throws std::invalid_argument unless n_polar >= 2 and n_azimuth >= 4.
DirectionGrid direction_grid(int n_polar, int n_azimuth);

}  // namespace mtev
