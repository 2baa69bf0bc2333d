#pragma once

// Spherical Bessel/Hankel functions of integer order and (vector) spherical
// harmonics on the unit sphere.
//
// Conventions:
//   Y_n^m      orthonormal on S^2, Condon-Shortley phase, Y_n^{-m} = (-1)^m conj(Y_n^m)
//   U_n^m      (n(n+1))^{-1/2} grad_S Y_n^m
//   V_n^m      xhat x U_n^m
// Tangential fields are stored as components in the local (theta_hat, phi_hat) basis.

#include <vector>

#include "mtev/common.hpp"

namespace mtev {

struct ModeIndex {
  int n = 0;
  int m = 0;
};

/// Throws std::invalid_argument unless |m| <= n and n >= min_n.
void validate(const ModeIndex& idx, int min_n = 0);

/// Offset of (n, m), n >= 1, in a flat array of vector modes 1..n_max.
constexpr int vector_mode_offset(int n, int m) { return n * n - 1 + n + m; }
constexpr int vector_mode_count(int n_max) { return (n_max + 1) * (n_max + 1) - 1; }

/// Point on the unit sphere with its spherical angles and local tangent frame.
class UnitDirection {
 public:
  /// Normalizes v; throws std::invalid_argument for the zero vector.
  static UnitDirection from_vector(const Vec3& v);
  static UnitDirection from_angles(double theta, double phi);

  const Vec3& xyz() const { return xyz_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  double cos_theta() const { return cos_theta_; }
  double sin_theta() const { return sin_theta_; }

  Vec3 theta_hat() const;
  Vec3 phi_hat() const;

  UnitDirection opposite() const;

 private:
  UnitDirection(const Vec3& xyz, double theta, double phi, double ct, double st);

  Vec3 xyz_{0.0, 0.0, 1.0};
  double theta_ = 0.0;
  double phi_ = 0.0;
  double cos_theta_ = 1.0;
  double sin_theta_ = 0.0;
};

struct TangentVector {
  Complex theta{};
  Complex phi{};

  CVec3 to_cartesian(const UnitDirection& at) const;
  /// Tangential part of a Cartesian vector in the frame at `at`.
  static TangentVector project(const CVec3& v, const UnitDirection& at);
  static TangentVector project(const Vec3& v, const UnitDirection& at);
};

inline TangentVector operator+(const TangentVector& a, const TangentVector& b) {
  return {a.theta + b.theta, a.phi + b.phi};
}
inline TangentVector operator*(Complex s, const TangentVector& a) { return {s * a.theta, s * a.phi}; }

/// Hermitian inner product a . conj(b) in the tangent frame.
inline Complex inner(const TangentVector& a, const TangentVector& b) {
  return a.theta * std::conj(b.theta) + a.phi * std::conj(b.phi);
}

// ---------------------------------------------------------------------------
// Radial functions

/// j_0(z) .. j_{n_max}(z). Ascending series for |z| < 0.5, Miller downward
/// recurrence otherwise. Throws OutOfRange for |z| > 1e4 or |Im z| > 700.
std::vector<Complex> sph_bessel_j_array(int n_max, Complex z);

Complex sph_bessel_j(int n, Complex z);
Complex sph_bessel_j_deriv(int n, Complex z);
/// d/dr [r j_n(z r)] at r = 1, i.e. j_n(z) + z j_n'(z).
Complex riccati_j_deriv(int n, Complex z);

/// y_0(x) .. y_{n_max}(x) by upward recurrence; x > 0.
std::vector<double> sph_bessel_y_array(int n_max, double x);
double sph_bessel_y(int n, double x);
double sph_bessel_y_deriv(int n, double x);

Complex sph_hankel1(int n, double x);
Complex sph_hankel1_deriv(int n, double x);
/// d/dr [r h_n^(1)(x r)] at r = 1.
Complex riccati_h1_deriv(int n, double x);

/// f_n, f_n' and the Riccati derivative f_n + x f_n' for orders 0..n_max.
struct RadialTable {
  std::vector<Complex> value;
  std::vector<Complex> deriv;
  std::vector<Complex> riccati;
};

RadialTable bessel_j_table(int n_max, Complex z);
RadialTable hankel1_table(int n_max, double x);

// ---------------------------------------------------------------------------
// Angular functions

Complex sph_harmonic(const ModeIndex& idx, const UnitDirection& dir);
TangentVector vsh_U(const ModeIndex& idx, const UnitDirection& dir);
TangentVector vsh_V(const ModeIndex& idx, const UnitDirection& dir);

/// All Y_n^m (n = 0..n_max) and U_n^m, V_n^m (n = 1..n_max) at one direction.
class HarmonicTable {
 public:
  HarmonicTable(int n_max, const UnitDirection& dir);

  int n_max() const { return n_max_; }
  Complex Y(int n, int m) const { return y_[static_cast<std::size_t>(n * n + n + m)]; }
  const TangentVector& U(int n, int m) const { return u_[static_cast<std::size_t>(vector_mode_offset(n, m))]; }
  TangentVector V(int n, int m) const {
    const TangentVector& u = U(n, m);
    return {-u.phi, u.theta};
  }

 private:
  int n_max_;
  std::vector<Complex> y_;
  std::vector<TangentVector> u_;
};

}  // namespace mtev
