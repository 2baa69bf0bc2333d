#include <gtest/gtest.h>

#include <cmath>

#include "mtev/errors.hpp"
#include "mtev/specfun.hpp"
#include "oracles.hpp"

using namespace mtev;
using oracle::rel_err;

TEST(SphBesselJ, ClosedFormAtOne) { EXPECT_NEAR(sph_bessel_j(0, 1.0).real(), std::sin(1.0), 1e-15); }

TEST(SphBesselJ, VanishesAtOriginForPositiveOrder) {
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(sph_bessel_j(n, 0.0), Complex{});
  EXPECT_EQ(sph_bessel_j(0, 0.0), Complex(1.0, 0.0));
}

TEST(SphBesselJ, ComplexArgumentMatchesAscendingSeries) {
  const Complex z{2.5, 0.5};
  const auto ref = oracle::series_sph_j(3, {2.5L, 0.5L});
  EXPECT_LT(rel_err(sph_bessel_j(3, z), Complex(double(ref.real()), double(ref.imag()))), 1e-12);
}

TEST(SphBesselJ, SeriesOracleOverComplexPlane) {
  oracle::Random rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex z = rng.complex_uniform(6.0);
    const std::vector<Complex> row = sph_bessel_j_array(12, z);
    for (int n = 0; n <= 12; ++n) {
      const auto ref = oracle::series_sph_j(n, {z.real(), z.imag()});
      const Complex r(double(ref.real()), double(ref.imag()));
      EXPECT_LT(std::abs(row[n] - r), 1e-12 * std::max(std::abs(r), 1e-30) + 1e-300) << "n=" << n << " z=" << z;
    }
  }
}

TEST(SphBesselJ, RealArgumentAgreesWithBoost) {
  for (double x : {0.1, 0.49, 0.51, 1.0, 3.7, 10.0, 25.0, 49.0}) {
    for (int n = 0; n <= 25; ++n) {
      const double ref = oracle::boost_sph_j(n, x);
      const Complex got = sph_bessel_j(n, x);
      EXPECT_LE(std::abs(got.imag()), 0.0);
      EXPECT_LT(std::abs(got.real() - ref), 1e-12 * std::abs(ref) + 1e-300) << "n=" << n << " x=" << x;
    }
  }
}

TEST(SphBesselJ, ThreeTermRecurrence) {
  oracle::Random rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex z{rng.uniform(0.3, 30.0), rng.uniform(-2.0, 2.0)};
    const auto j = sph_bessel_j_array(21, z);
    for (int n = 1; n <= 20; ++n) {
      const Complex lhs = j[n - 1] + j[n + 1];
      const Complex rhs = static_cast<double>(2 * n + 1) / z * j[n];
      EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::max({std::abs(lhs), std::abs(j[n - 1]), std::abs(j[n + 1])}));
    }
  }
}

TEST(SphBesselJ, OutOfRangeArgument) {
  EXPECT_THROW(sph_bessel_j(2, Complex(2e4, 0.0)), OutOfRange);
  EXPECT_THROW(sph_bessel_j(2, Complex(1.0, 800.0)), OutOfRange);
  EXPECT_THROW(sph_bessel_j(-1, 1.0), std::invalid_argument);
}

TEST(SphBesselJDeriv, OrderZeroIsMinusJ1) {
  EXPECT_NEAR(sph_bessel_j_deriv(0, 1.0).real(), -0.3011686789, 1e-10);
  EXPECT_EQ(sph_bessel_j_deriv(0, 1.0), -sph_bessel_j(1, 1.0));
}

TEST(SphBesselJDeriv, LimitAtOrigin) {
  EXPECT_NEAR(std::abs(sph_bessel_j_deriv(1, 0.0) - 1.0 / 3.0), 0.0, 1e-15);
  EXPECT_EQ(sph_bessel_j_deriv(0, 0.0), Complex{});
  EXPECT_EQ(sph_bessel_j_deriv(2, 0.0), Complex{});
}

TEST(SphBesselJDeriv, FiniteDifference) {
  const auto f = [](double x) { return sph_bessel_j(2, x); };
  EXPECT_NEAR(std::abs(sph_bessel_j_deriv(2, 1.7) - oracle::central_diff(f, 1.7, 1e-5)), 0.0, 1e-8);
}

TEST(SphBesselJDeriv, SmallArgumentFiniteDifference) {
  for (int n = 0; n <= 4; ++n) {
    const auto f = [n](double x) { return sph_bessel_j(n, x); };
    EXPECT_NEAR(std::abs(sph_bessel_j_deriv(n, 0.3) - oracle::central_diff(f, 0.3, 1e-5)), 0.0, 1e-9) << n;
  }
}

TEST(RiccatiJ, LimitValues) {
  EXPECT_EQ(riccati_j_deriv(0, 0.0), Complex(1.0, 0.0));
  EXPECT_EQ(riccati_j_deriv(1, 0.0), Complex{});
}

TEST(RiccatiJ, CompositionalIdentity) {
  const Complex z{1.3, 0.2};
  const Complex expect = sph_bessel_j(2, z) + z * sph_bessel_j_deriv(2, z);
  EXPECT_LT(std::abs(riccati_j_deriv(2, z) - expect), 1e-14 * std::abs(expect));
}

TEST(SphHankel1, ClosedForms) {
  const Complex h0 = sph_hankel1(0, 1.0);
  EXPECT_NEAR(h0.real(), 0.8414709848, 1e-10);
  EXPECT_NEAR(h0.imag(), -0.5403023059, 1e-10);
  const Complex h1 = sph_hankel1(1, 1.0);
  EXPECT_NEAR(h1.real(), 0.3011686789, 1e-10);
  EXPECT_NEAR(h1.imag(), -1.3817732907, 1e-10);
}

TEST(SphHankel1, RejectsNonPositiveArgument) {
  EXPECT_THROW(sph_hankel1(1, 0.0), std::invalid_argument);
  EXPECT_THROW(sph_hankel1(1, -2.0), std::invalid_argument);
  EXPECT_THROW(riccati_h1_deriv(1, 0.0), std::invalid_argument);
}

TEST(SphHankel1, WronskianAtOrderFive) {
  const double x = 2.0;
  const double w = sph_bessel_j(5, x).real() * sph_bessel_y_deriv(5, x) - sph_bessel_j_deriv(5, x).real() * sph_bessel_y(5, x);
  EXPECT_LT(std::abs(w * x * x - 1.0), 1e-12);
}

TEST(SphHankel1, WronskianSweep) {
  for (double x = 0.1; x <= 50.0; x *= 1.37) {
    const RadialTable h = hankel1_table(25, x);
    const RadialTable j = bessel_j_table(25, x);
    for (int n = 0; n <= 25; ++n) {
      const double y = h.value[n].imag();
      const double yp = h.deriv[n].imag();
      const double w = j.value[n].real() * yp - j.deriv[n].real() * y;
      EXPECT_LT(std::abs(w * x * x - 1.0), 1e-11) << "n=" << n << " x=" << x;
    }
  }
}

TEST(SphHankel1, NeumannAgreesWithBoost) {
  for (double x : {0.2, 1.0, 4.5, 17.0}) {
    for (int n = 0; n <= 15; ++n) {
      const double ref = oracle::boost_sph_y(n, x);
      EXPECT_LT(std::abs(sph_bessel_y(n, x) - ref), 1e-12 * std::abs(ref)) << "n=" << n << " x=" << x;
    }
  }
}

TEST(SphHankel1, RiccatiDerivativeFiniteDifference) {
  const double x = 2.3;
  for (int n = 0; n <= 5; ++n) {
    const auto rh = [n](double r) { return r * sph_hankel1(n, r * 2.3); };
    EXPECT_LT(rel_err(riccati_h1_deriv(n, x), oracle::central_diff(rh, 1.0, 1e-5)), 1e-8) << n;
  }
}

TEST(SphHarmonic, ConstantMode) {
  oracle::Random rng(3);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(std::abs(sph_harmonic({0, 0}, rng.direction()) - 0.2820947918), 0.0, 1e-10);
  }
}

TEST(SphHarmonic, DipoleAtNorthPole) {
  EXPECT_NEAR(sph_harmonic({1, 0}, UnitDirection::from_angles(0.0, 0.0)).real(), 0.4886025119, 1e-10);
}

TEST(SphHarmonic, QuadratureNormOfY21) {
  const Complex integral =
      oracle::sphere_integral([](const UnitDirection& d) { return std::norm(sph_harmonic({2, 1}, d)); });
  EXPECT_NEAR(integral.real(), 1.0, 1e-12);
}

TEST(SphHarmonic, ConjugationSymmetryIsExact) {
  oracle::Random rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const UnitDirection d = rng.direction();
    const HarmonicTable t(10, d);
    for (int n = 0; n <= 10; ++n) {
      for (int m = 1; m <= n; ++m) {
        const Complex sign = (m % 2 == 0) ? 1.0 : -1.0;
        EXPECT_EQ(t.Y(n, -m), sign * std::conj(t.Y(n, m)));
        EXPECT_EQ(sph_harmonic({n, -m}, d), sign * std::conj(sph_harmonic({n, m}, d)));
      }
    }
  }
}

TEST(SphHarmonic, RejectsBadIndex) {
  const auto d = UnitDirection::from_angles(0.4, 0.2);
  EXPECT_THROW(sph_harmonic({2, 3}, d), std::invalid_argument);
  EXPECT_THROW(sph_harmonic({-1, 0}, d), std::invalid_argument);
}

TEST(VectorHarmonics, VIsOrthogonalToU) {
  // Pointwise, V . U vanishes in the bilinear pairing for every m. The
  // Hermitian pairing V . conj(U) = xhat . (U x conj U) vanishes only for
  // real U (m = 0); for m != 0 orthogonality holds after integration.
  oracle::Random rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const UnitDirection d = rng.direction();
    for (int n = 1; n <= 6; ++n) {
      for (int m = -n; m <= n; ++m) {
        const TangentVector u = vsh_U({n, m}, d), v = vsh_V({n, m}, d);
        EXPECT_LT(std::abs(v.theta * u.theta + v.phi * u.phi), 1e-13);
        if (m == 0) EXPECT_LT(std::abs(inner(v, u)), 1e-13);
      }
    }
  }
  for (int m = -3; m <= 3; ++m) {
    const Complex integral = oracle::sphere_integral(
        [m](const UnitDirection& d) { return inner(vsh_V({3, m}, d), vsh_U({3, m}, d)); });
    EXPECT_LT(std::abs(integral), 1e-13) << m;
  }
}

TEST(VectorHarmonics, QuadratureNormOfU32) {
  const Complex integral =
      oracle::sphere_integral([](const UnitDirection& d) { return std::norm(vsh_U({3, 2}, d).theta) + std::norm(vsh_U({3, 2}, d).phi); });
  EXPECT_NEAR(integral.real(), 1.0, 1e-10);
}

TEST(VectorHarmonics, UIsScaledSurfaceGradient) {
  // theta component against a finite difference of Y in theta
  const int n = 4, m = 3;
  const double theta = 1.1, phi = 0.7;
  const auto y = [&](double t) { return sph_harmonic({n, m}, UnitDirection::from_angles(t, phi)); };
  const Complex dtheta = oracle::central_diff(y, theta, 1e-5);
  const Complex expect = dtheta / std::sqrt(double(n * (n + 1)));
  EXPECT_LT(std::abs(vsh_U({n, m}, UnitDirection::from_angles(theta, phi)).theta - expect), 1e-9);
  const Complex dphi_expect = kI * double(m) * y(theta) / std::sin(theta) / std::sqrt(double(n * (n + 1)));
  EXPECT_LT(std::abs(vsh_U({n, m}, UnitDirection::from_angles(theta, phi)).phi - dphi_expect), 1e-12);
}

TEST(VectorHarmonics, OrthonormalityUpToOrderEight) {
  const int n_max = 8;
  const int count = vector_mode_count(n_max);
  const int dim = 2 * count;
  std::vector<Complex> gram(static_cast<std::size_t>(dim * dim));
  for (const auto& node : oracle::sphere_rule(40)) {
    const HarmonicTable t(n_max, node.dir);
    std::vector<TangentVector> f(dim);
    for (int n = 1; n <= n_max; ++n) {
      for (int m = -n; m <= n; ++m) {
        f[vector_mode_offset(n, m)] = t.U(n, m);
        f[count + vector_mode_offset(n, m)] = t.V(n, m);
      }
    }
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) gram[a * dim + b] += node.weight * inner(f[a], f[b]);
  }
  double worst = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) worst = std::max(worst, std::abs(gram[a * dim + b] - (a == b ? 1.0 : 0.0)));
  EXPECT_LT(worst, 1e-9);
}

TEST(VectorHarmonics, PoleLimit) {
  for (int n = 1; n <= 5; ++n) {
    for (int m = -n; m <= n; ++m) {
      for (double phi : {0.0, 1.3}) {
        const auto at_pole = UnitDirection::from_angles(0.0, phi);
        const auto near_pole = UnitDirection::from_angles(1e-12, phi);
        const TangentVector u0 = vsh_U({n, m}, at_pole), u1 = vsh_U({n, m}, near_pole);
        EXPECT_TRUE(std::isfinite(std::abs(u1.theta)) && std::isfinite(std::abs(u1.phi)));
        EXPECT_LT(std::abs(u1.theta - u0.theta) + std::abs(u1.phi - u0.phi), 1e-8) << n << "," << m;
        const auto south0 = UnitDirection::from_angles(kPi, phi);
        const auto south1 = UnitDirection::from_angles(kPi - 1e-12, phi);
        const TangentVector s0 = vsh_U({n, m}, south0), s1 = vsh_U({n, m}, south1);
        EXPECT_LT(std::abs(s1.theta - s0.theta) + std::abs(s1.phi - s0.phi), 1e-8) << n << "," << m;
      }
    }
  }
}

TEST(VectorHarmonics, RejectOrderZero) {
  const auto d = UnitDirection::from_angles(0.3, 0.1);
  EXPECT_THROW(vsh_U({0, 0}, d), std::invalid_argument);
  EXPECT_THROW(vsh_V({0, 0}, d), std::invalid_argument);
}

TEST(UnitDirection, FrameIsOrthonormal) {
  oracle::Random rng(2);
  for (int i = 0; i < 20; ++i) {
    const UnitDirection d = rng.direction();
    EXPECT_NEAR(norm(d.xyz()), 1.0, 1e-14);
    EXPECT_NEAR(dot(d.theta_hat(), d.phi_hat()), 0.0, 1e-15);
    EXPECT_NEAR(dot(d.xyz(), d.theta_hat()), 0.0, 1e-15);
    const Vec3 c = cross(d.theta_hat(), d.phi_hat());
    EXPECT_NEAR(norm(c - d.xyz()), 0.0, 1e-14);
  }
  EXPECT_THROW(UnitDirection::from_vector({0.0, 0.0, 0.0}), std::invalid_argument);
}
