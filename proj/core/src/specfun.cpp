#include "mtev/specfun.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mtev/errors.hpp"

namespace mtev {

void validate(const ModeIndex& idx, int min_n) {
  if (idx.n < min_n) {
    throw std::invalid_argument("mode order n=" + std::to_string(idx.n) + " below minimum " +
                                std::to_string(min_n));
  }
  if (std::abs(idx.m) > idx.n) {
    throw std::invalid_argument("mode index violates |m| <= n: n=" + std::to_string(idx.n) +
                                ", m=" + std::to_string(idx.m));
  }
}

// ---------------------------------------------------------------------------
// UnitDirection / TangentVector

UnitDirection::UnitDirection(const Vec3& xyz, double theta, double phi, double ct, double st)
    : xyz_(xyz), theta_(theta), phi_(phi), cos_theta_(ct), sin_theta_(st) {}

UnitDirection UnitDirection::from_vector(const Vec3& v) {
  const double r = norm(v);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("direction must be a finite nonzero vector");
  }
  const Vec3 u = (1.0 / r) * v;
  const double rho = std::hypot(u[0], u[1]);
  const double theta = std::atan2(rho, u[2]);
  double phi = std::atan2(u[1], u[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
  return UnitDirection(u, theta, phi, u[2], rho);
}

UnitDirection UnitDirection::from_angles(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi) || !std::isfinite(phi)) {
    throw std::invalid_argument("polar angle must lie in [0, pi]");
  }
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const Vec3 xyz{st * std::cos(phi), st * std::sin(phi), ct};
  return UnitDirection(xyz, theta, phi, ct, st);
}

Vec3 UnitDirection::theta_hat() const {
  return {cos_theta_ * std::cos(phi_), cos_theta_ * std::sin(phi_), -sin_theta_};
}

Vec3 UnitDirection::phi_hat() const { return {-std::sin(phi_), std::cos(phi_), 0.0}; }

UnitDirection UnitDirection::opposite() const {
  double phi = phi_ + kPi;
  if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
  return UnitDirection(-xyz_, kPi - theta_, phi, -cos_theta_, sin_theta_);
}

CVec3 TangentVector::to_cartesian(const UnitDirection& at) const {
  return theta * at.theta_hat() + phi * at.phi_hat();
}

TangentVector TangentVector::project(const CVec3& v, const UnitDirection& at) {
  const Vec3 t = at.theta_hat();
  const Vec3 p = at.phi_hat();
  return {v[0] * t[0] + v[1] * t[1] + v[2] * t[2], v[0] * p[0] + v[1] * p[1] + v[2] * p[2]};
}

TangentVector TangentVector::project(const Vec3& v, const UnitDirection& at) {
  return {dot(v, at.theta_hat()), dot(v, at.phi_hat())};
}

// ---------------------------------------------------------------------------
// Spherical Bessel functions

namespace {

void check_order(int n) {
  if (n < 0) throw std::invalid_argument("Bessel order must be non-negative");
}

void check_argument(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("Bessel argument must be finite");
  }
  if (std::abs(z) > 1e4 || std::abs(z.imag()) > 700.0) {
    throw OutOfRange("spherical Bessel argument out of supported range");
  }
}

Complex ascending_series(int n, Complex z) {
  Complex lead{1.0, 0.0};
  for (int i = 1; i <= n; ++i) lead *= z / static_cast<double>(2 * i + 1);
  const Complex q = -0.5 * z * z;
  Complex term{1.0, 0.0};
  Complex sum{1.0, 0.0};
  for (int k = 1; k < 200; ++k) {
    term *= q / static_cast<double>(k * (2 * n + 2 * k + 1));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

void miller(int n_max, Complex z, std::vector<Complex>& out) {
  const double az = std::abs(z);
  const int big = std::max(n_max, static_cast<int>(std::ceil(az)));
  const int start = big + 25 + static_cast<int>(std::ceil(10.0 * std::cbrt(static_cast<double>(big))));

  Complex f_next{0.0, 0.0};     // f_{k+1}
  Complex f_cur{1e-280, 0.0};   // f_k
  Complex f1{0.0, 0.0};
  for (int k = start; k >= 1; --k) {
    const Complex f_prev = static_cast<double>(2 * k + 1) / z * f_cur - f_next;
    if (k <= n_max) out[static_cast<std::size_t>(k)] = f_cur;
    if (k == 1) f1 = f_cur;
    f_next = f_cur;
    f_cur = f_prev;
    if (std::abs(f_cur) > 1e200) {
      constexpr double kScale = 1e-200;
      f_cur *= kScale;
      f_next *= kScale;
      f1 *= kScale;
      for (int j = k; j <= n_max; ++j) out[static_cast<std::size_t>(j)] *= kScale;
    }
  }
  const Complex f0 = f_cur;
  out[0] = f0;

  const Complex j0 = std::sin(z) / z;
  const Complex j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  const Complex scale = std::abs(j0) >= std::abs(j1) ? j0 / f0 : j1 / f1;
  for (auto& v : out) v *= scale;
  out[0] = j0;
  if (n_max >= 1) out[1] = j1;
}

}  // namespace

std::vector<Complex> sph_bessel_j_array(int n_max, Complex z) {
  check_order(n_max);
  check_argument(z);
  std::vector<Complex> out(static_cast<std::size_t>(n_max) + 1, Complex{});
  if (z == Complex{}) {
    out[0] = 1.0;
    return out;
  }
  if (std::abs(z) < 0.5) {
    for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = ascending_series(n, z);
    return out;
  }
  miller(n_max, z, out);
  return out;
}

Complex sph_bessel_j(int n, Complex z) { return sph_bessel_j_array(n, z)[static_cast<std::size_t>(n)]; }

RadialTable bessel_j_table(int n_max, Complex z) {
  check_order(n_max);
  const auto j = sph_bessel_j_array(n_max + 1, z);
  RadialTable t;
  t.value.assign(j.begin(), j.end() - 1);
  t.deriv.resize(static_cast<std::size_t>(n_max) + 1);
  t.riccati.resize(static_cast<std::size_t>(n_max) + 1);
  const bool at_origin = z == Complex{};
  for (int n = 0; n <= n_max; ++n) {
    const auto u = static_cast<std::size_t>(n);
    if (n == 0) {
      t.deriv[u] = -j[1];
      t.riccati[u] = j[0] - z * j[1];
      continue;
    }
    t.riccati[u] = z * j[u - 1] - static_cast<double>(n) * j[u];
    if (at_origin) {
      t.deriv[u] = n == 1 ? Complex{1.0 / 3.0, 0.0} : Complex{};
    } else {
      t.deriv[u] = j[u - 1] - static_cast<double>(n + 1) / z * j[u];
    }
  }
  return t;
}

Complex sph_bessel_j_deriv(int n, Complex z) { return bessel_j_table(n, z).deriv[static_cast<std::size_t>(n)]; }

Complex riccati_j_deriv(int n, Complex z) { return bessel_j_table(n, z).riccati[static_cast<std::size_t>(n)]; }

std::vector<double> sph_bessel_y_array(int n_max, double x) {
  check_order(n_max);
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("y_n requires a finite argument x > 0");
  std::vector<double> y(static_cast<std::size_t>(n_max) + 1);
  y[0] = -std::cos(x) / x;
  if (n_max >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < n_max; ++n) {
    const auto u = static_cast<std::size_t>(n);
    y[u + 1] = static_cast<double>(2 * n + 1) / x * y[u] - y[u - 1];
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw OutOfRange("y_n overflow: order too large for argument");
  }
  return y;
}

double sph_bessel_y(int n, double x) { return sph_bessel_y_array(n, x)[static_cast<std::size_t>(n)]; }

double sph_bessel_y_deriv(int n, double x) {
  const auto y = sph_bessel_y_array(n + 1, x);
  const auto u = static_cast<std::size_t>(n);
  if (n == 0) return -y[1];
  return y[u - 1] - static_cast<double>(n + 1) / x * y[u];
}

RadialTable hankel1_table(int n_max, double x) {
  check_order(n_max);
  if (!(x > 0.0)) throw std::invalid_argument("h_n^(1) requires x > 0");
  const auto j = sph_bessel_j_array(n_max + 1, Complex{x, 0.0});
  const auto y = sph_bessel_y_array(n_max + 1, x);
  std::vector<Complex> h(j.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = Complex{j[i].real(), y[i]};
  RadialTable t;
  t.value.assign(h.begin(), h.end() - 1);
  t.deriv.resize(static_cast<std::size_t>(n_max) + 1);
  t.riccati.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const auto u = static_cast<std::size_t>(n);
    if (n == 0) {
      t.deriv[u] = -h[1];
      t.riccati[u] = h[0] - x * h[1];
    } else {
      t.deriv[u] = h[u - 1] - static_cast<double>(n + 1) / x * h[u];
      t.riccati[u] = x * h[u - 1] - static_cast<double>(n) * h[u];
    }
  }
  return t;
}

Complex sph_hankel1(int n, double x) { return hankel1_table(n, x).value[static_cast<std::size_t>(n)]; }
Complex sph_hankel1_deriv(int n, double x) { return hankel1_table(n, x).deriv[static_cast<std::size_t>(n)]; }
Complex riccati_h1_deriv(int n, double x) { return hankel1_table(n, x).riccati[static_cast<std::size_t>(n)]; }

// ---------------------------------------------------------------------------
// Spherical harmonics

namespace {

// Fully normalized associated Legendre functions with Condon-Shortley phase,
// scaled so that Y_l^m = P(l, m) e^{i m phi}.
class NormalizedLegendre {
 public:
  NormalizedLegendre(int l_max, double x, double s) : l_max_(l_max) {
    p_.assign(static_cast<std::size_t>((l_max + 1) * (l_max + 2) / 2), 0.0);
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 0; m <= l_max; ++m) {
      if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      at(m, m) = pmm;
      if (m + 1 <= l_max) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * pmm;
      for (int l = m + 2; l <= l_max; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l * l - m * m)));
        const double b = std::sqrt((static_cast<double>((l - 1) * (l - 1) - m * m)) /
                                   (4.0 * (l - 1) * (l - 1) - 1.0));
        at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
      }
    }
  }

  double operator()(int l, int m) const {
    if (l < 0 || l > l_max_ || std::abs(m) > l) return 0.0;
    if (m >= 0) return p_[index(l, m)];
    const double v = p_[index(l, -m)];
    return (-m) % 2 == 0 ? v : -v;
  }

 private:
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); }
  double& at(int l, int m) { return p_[index(l, m)]; }

  int l_max_;
  std::vector<double> p_;
};

// d/dtheta P_l^m, division-free ladder form.
double theta_derivative(const NormalizedLegendre& p, int l, int m) {
  return 0.5 * (std::sqrt(static_cast<double>((l - m) * (l + m + 1))) * p(l, m + 1) -
                std::sqrt(static_cast<double>((l + m) * (l - m + 1))) * p(l, m - 1));
}

// m P_l^m / sin(theta) via the l+1 ladder; finite at the poles.
double m_over_sin(const NormalizedLegendre& p, int l, int m) {
  return -0.5 * std::sqrt((2.0 * l + 1.0) / (2.0 * l + 3.0)) *
         (std::sqrt(static_cast<double>((l + m + 1) * (l + m + 2))) * p(l + 1, m + 1) +
          std::sqrt(static_cast<double>((l - m + 1) * (l - m + 2))) * p(l + 1, m - 1));
}

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

HarmonicTable::HarmonicTable(int n_max, const UnitDirection& dir) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("HarmonicTable requires n_max >= 0");
  const NormalizedLegendre p(n_max + 1, dir.cos_theta(), dir.sin_theta());
  y_.resize(static_cast<std::size_t>((n_max + 1) * (n_max + 1)));
  u_.resize(static_cast<std::size_t>(vector_mode_count(n_max)));
  std::vector<Complex> phase(static_cast<std::size_t>(n_max) + 1);
  for (int m = 0; m <= n_max; ++m) phase[static_cast<std::size_t>(m)] = std::polar(1.0, m * dir.phi());

  for (int n = 0; n <= n_max; ++n) {
    const double inv_norm = n > 0 ? 1.0 / std::sqrt(static_cast<double>(n * (n + 1))) : 0.0;
    for (int m = 0; m <= n; ++m) {
      const Complex e = phase[static_cast<std::size_t>(m)];
      const Complex y = p(n, m) * e;
      y_[static_cast<std::size_t>(n * n + n + m)] = y;
      if (m > 0) y_[static_cast<std::size_t>(n * n + n - m)] = parity(m) * std::conj(y);
      if (n == 0) continue;
      const TangentVector u{theta_derivative(p, n, m) * inv_norm * e,
                            kI * m_over_sin(p, n, m) * inv_norm * e};
      u_[static_cast<std::size_t>(vector_mode_offset(n, m))] = u;
      if (m > 0) {
        u_[static_cast<std::size_t>(vector_mode_offset(n, -m))] =
            TangentVector{parity(m) * std::conj(u.theta), parity(m) * std::conj(u.phi)};
      }
    }
  }
}

Complex sph_harmonic(const ModeIndex& idx, const UnitDirection& dir) {
  validate(idx);
  return HarmonicTable(idx.n, dir).Y(idx.n, idx.m);
}

TangentVector vsh_U(const ModeIndex& idx, const UnitDirection& dir) {
  validate(idx, 1);
  return HarmonicTable(idx.n, dir).U(idx.n, idx.m);
}

TangentVector vsh_V(const ModeIndex& idx, const UnitDirection& dir) {
  validate(idx, 1);
  return HarmonicTable(idx.n, dir).V(idx.n, idx.m);
}

}  // namespace mtev
