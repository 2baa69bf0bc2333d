#include <gtest/gtest.h>

#include "mtev/errors.hpp"
#include "mtev/modal.hpp"
#include "oracles.hpp"

using namespace mtev;

namespace {

CVec3 tangential(const CVec3& v, const Vec3& n) { return cross(n, v); }

CVec3 closed_form_plane_wave(const PlaneWave& w, double k, const Vec3& x) {
  const Vec3& d = w.d.xyz();
  const Vec3 transverse = w.p - dot(d, w.p) * d;
  return (kI * k * std::exp(Complex{0.0, k * dot(x, d)})) * transverse;
}

PlaneWave random_wave(oracle::Random& rng) { return PlaneWave::make(rng.direction(), rng.gaussian_vector()); }

}  // namespace

TEST(Truncation, FormulaAndOverride) {
  EXPECT_EQ(truncation_order(2.0), 14);
  EXPECT_EQ(truncation_order(1.0), 11);
  EXPECT_EQ(truncation_order(1.0, 20), 20);
  EXPECT_THROW(truncation_order(0.0), std::invalid_argument);
  EXPECT_THROW(truncation_order(1.0, 0), std::invalid_argument);
}

TEST(Truncation, DecayCertificate) {
  oracle::Random rng(4);
  for (double k : {0.5, 1.0, 2.0}) {
    const int n = truncation_order(k);
    const MediumParams phys{k, 2.0, 0.5, {3.0, 0.0}};
    const PlaneWave w = random_wave(rng);
    EXPECT_LT(ModalCoefficients::solve_physical(phys, w, n).decay_ratio(), 1e-12) << k;
    EXPECT_LT(ModalCoefficients::solve_auxiliary(phys, w, n).decay_ratio(), 1e-12) << k;
  }
}

TEST(PlaneWaveCoeffs, ClosedFormAtReferencePoint) {
  oracle::Random rng(6);
  const double k = 2.0;
  for (int trial = 0; trial < 5; ++trial) {
    const PlaneWave w = random_wave(rng);
    const MediumParams params{k, 2.0};
    const auto coeffs = ModalCoefficients::solve_physical(params, w, truncation_order(k));
    const Vec3 x{0.3, -0.1, 0.2};
    const CVec3 got = incident_field(coeffs, x).e;
    const CVec3 want = closed_form_plane_wave(w, k, x);
    EXPECT_LT(oracle::max_abs(got - want), 1e-8);
  }
}

TEST(PlaneWaveCoeffs, CurlMatchesClosedForm) {
  // curl of ik(p - (d.p)d)e^{ikx.d} is -k^2 (d x p) e^{ikx.d}
  oracle::Random rng(16);
  const double k = 1.5;
  const PlaneWave w = random_wave(rng);
  const auto coeffs = ModalCoefficients::solve_physical({k, 2.0}, w, 16);
  const Vec3 x{-0.2, 0.4, 0.1};
  const CVec3 want = (-k * k * std::exp(Complex{0.0, k * dot(x, w.d.xyz())})) * cross(w.d.xyz(), w.p);
  EXPECT_LT(oracle::max_abs(incident_field(coeffs, x).curl_e - want), 1e-8);
}

TEST(PlaneWaveCoeffs, Linearity) {
  const PlaneWave w = PlaneWave::make(UnitDirection::from_angles(0.7, 1.9), {0.3, -1.0, 0.4});
  const PlaneWave w2 = PlaneWave::make(w.d, 2.0 * w.p);
  for (int n = 1; n <= 4; ++n) {
    for (int m = -n; m <= n; ++m) {
      const auto c1 = plane_wave_coeffs({n, m}, w, 2.0);
      const auto c2 = plane_wave_coeffs({n, m}, w2, 2.0);
      EXPECT_LT(std::abs(c2.a - 2.0 * c1.a), 1e-14);
      EXPECT_LT(std::abs(c2.b - 2.0 * c1.b), 1e-14);
    }
  }
}

TEST(PlaneWaveCoeffs, LongitudinalPolarizationIsAnnihilated) {
  const UnitDirection d = UnitDirection::from_angles(1.1, 0.4);
  const PlaneWave w = PlaneWave::make(d, 3.0 * d.xyz());
  const auto coeffs = ModalCoefficients::solve_physical({2.0, 2.0}, w, 14);
  EXPECT_LT(oracle::max_abs(incident_field(coeffs, {0.2, 0.1, -0.3}).e), 1e-12);
}

TEST(PlaneWaveCoeffs, RejectsOrderZeroAndZeroPolarization) {
  const PlaneWave w;
  EXPECT_THROW(plane_wave_coeffs({0, 0}, w, 1.0), std::invalid_argument);
  EXPECT_THROW(PlaneWave::make(w.d, {0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(FieldEvaluation, CurlAgreesWithFiniteDifferences) {
  oracle::Random rng(17);
  const PlaneWave w = random_wave(rng);
  const MediumParams params{2.0, 2.0, 0.5, {1.7, 0.0}};
  for (bool aux : {false, true}) {
    const auto coeffs = aux ? ModalCoefficients::solve_auxiliary(params, w, 14)
                            : ModalCoefficients::solve_physical(params, w, 14);
    using Eval = FieldSample (*)(const ModalCoefficients&, const Vec3&);
    const std::pair<Eval, Vec3> cases[] = {
        {&incident_field, {0.3, -0.4, 0.5}},
        {&interior_field, {0.3, -0.4, 0.5}},
        {&scattered_field, {1.3, -0.4, 0.9}},
    };
    for (const auto& [eval, x] : cases) {
      const auto e = [&](const Vec3& y) { return eval(coeffs, y).e; };
      const CVec3 fd = oracle::fd_curl(e, x, 1e-5);
      const CVec3 an = eval(coeffs, x).curl_e;
      EXPECT_LT(oracle::max_abs(fd - an), 1e-7 * std::max(1.0, oracle::max_abs(an)));
      EXPECT_LT(std::abs(oracle::fd_div(e, x, 1e-5)), 1e-7 * std::max(1.0, oracle::max_abs(eval(coeffs, x).e)));
    }
  }
}

TEST(Mie, ZeroContrastHasNoScattering) {
  for (int n = 1; n <= 8; ++n) {
    const auto s = mie_solve_mode(n, {1.3, 1.0}, {0.4, -1.0}, {2.0, 0.5});
    EXPECT_EQ(s.alpha, Complex{});
    EXPECT_EQ(s.beta, Complex{});
  }
}

TEST(Mie, BoundaryConditionResidual) {
  oracle::Random rng(19);
  const MediumParams params{1.0, 2.0};
  const PlaneWave w = random_wave(rng);
  const auto coeffs = ModalCoefficients::solve_physical(params, w, truncation_order(params.k));
  double scale = 0.0;
  double worst_e = 0.0, worst_curl = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = rng.direction().xyz();
    const FieldSample inc = incident_field(coeffs, x);
    const FieldSample sca = scattered_field(coeffs, x);
    const FieldSample in = interior_field(coeffs, x);
    scale = std::max({scale, oracle::max_abs(inc.e), oracle::max_abs(inc.curl_e)});
    worst_e = std::max(worst_e, oracle::max_abs(tangential(inc.e + sca.e - in.e, x)));
    worst_curl = std::max(worst_curl, oracle::max_abs(tangential(inc.curl_e + sca.curl_e - in.curl_e, x)));
  }
  EXPECT_LT(worst_e, 1e-11 * scale);
  EXPECT_LT(worst_curl, 1e-11 * scale);
}

TEST(Mie, PerModeSolverMatchesCoefficientSet) {
  const MediumParams params{1.0, 2.0};
  const PlaneWave w = PlaneWave::make(UnitDirection::from_angles(0.4, 2.2), {1.0, 0.3, -0.5});
  const auto coeffs = ModalCoefficients::solve_physical(params, w, 6);
  for (const auto& c : coeffs.modes()) {
    const auto s = mie_solve_mode(c.idx.n, params, c.a, c.b);
    EXPECT_LT(std::abs(s.alpha - c.alpha), 1e-15 * std::max(1.0, std::abs(c.alpha)));
    EXPECT_LT(std::abs(s.beta - c.beta), 1e-15 * std::max(1.0, std::abs(c.beta)));
  }
}

TEST(Auxiliary, ModalResidualAndLinearity) {
  oracle::Random rng(23);
  for (double eta : {0.7, 1.0, 3.0}) {
    const MediumParams params{1.0, 2.0, 0.5, {eta, 0.0}};
    for (int n = 1; n <= 10; ++n) {
      const Complex a = rng.complex_uniform(), b = rng.complex_uniform();
      const auto s = aux_solve_mode(n, params, a, b);
      const ComplexMatrix m = aux_modal_matrix(n, params);
      const ComplexVector x{s.alpha, s.beta, s.delta, s.phi, s.p};
      const ComplexVector rhs = aux_modal_rhs(n, params.k, a, b);
      ComplexVector r = m.apply(x);
      for (std::size_t i = 0; i < 5; ++i) r[i] -= rhs[i];
      double mx = 0.0;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) mx = std::max(mx, std::abs(m(i, j)) * std::abs(x[j]));
      EXPECT_LT(norm2(r), 1e-12 * std::max(mx, norm2(rhs))) << "eta=" << eta << " n=" << n;

      const auto s2 = aux_solve_mode(n, params, 2.0 * a, 2.0 * b);
      EXPECT_LT(std::abs(s2.alpha - 2.0 * s.alpha), 1e-13 * std::abs(s.alpha) + 1e-300);
      EXPECT_LT(std::abs(s2.p - 2.0 * s.p), 1e-13 * std::abs(s.p) + 1e-300);
    }
  }
}

TEST(Auxiliary, MatrixDependsOnOrderOnly) {
  const MediumParams params{2.0, 2.0, 0.5, {4.2, 0.0}};
  const PlaneWave w = PlaneWave::make(UnitDirection::from_angles(1.0, 0.3), {0.0, 1.0, 0.2});
  const auto coeffs = ModalCoefficients::solve_auxiliary(params, w, 5);
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(aux_modal_matrix(n, params), aux_modal_matrix(n, params));
    for (int m = -n; m <= n; ++m) {
      const auto& c = coeffs.at(n, m);
      const auto s = aux_solve_mode(n, params, c.a, c.b);
      EXPECT_EQ(s.alpha, c.alpha);
      EXPECT_EQ(s.beta, c.beta);
      EXPECT_EQ(s.p, c.p);
    }
  }
}

namespace {

struct AuxResiduals {
  double normal = 0.0;
  double tangential_e = 0.0;
  double tangential_curl = 0.0;
  double scale = 0.0;
};

AuxResiduals aux_boundary_residuals(const MediumParams& params, const PlaneWave& w, oracle::Random& rng) {
  const auto coeffs = ModalCoefficients::solve_auxiliary(params, w, truncation_order(params.k));
  const Complex inv_eta = 1.0 / params.eta;
  AuxResiduals out;
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = rng.direction().xyz();
    const FieldSample inc = incident_field(coeffs, x);
    const FieldSample sca = scattered_field(coeffs, x);
    const FieldSample in = interior_field(coeffs, x);
    const CVec3 grad_p = pressure_gradient(coeffs, x);
    out.scale = std::max({out.scale, oracle::max_abs(inc.e), oracle::max_abs(inc.curl_e)});
    out.normal = std::max(out.normal, std::abs(inv_eta * dot(grad_p, x) + dot(in.e, x)));
    out.tangential_e = std::max(
        out.tangential_e, oracle::max_abs(tangential(in.e + inv_eta * grad_p - sca.e - inc.e, x)));
    out.tangential_curl =
        std::max(out.tangential_curl,
                 oracle::max_abs(tangential((1.0 / params.gamma) * in.curl_e - sca.curl_e - inc.curl_e, x)));
  }
  return out;
}

}  // namespace

TEST(Auxiliary, TransmissionConditions) {
  oracle::Random rng(29);
  for (double eta : {0.7, 1.0, 3.0}) {
    const MediumParams params{1.0, 2.0, 0.5, {eta, 0.0}};
    const AuxResiduals r = aux_boundary_residuals(params, random_wave(rng), rng);
    EXPECT_LT(r.normal, 1e-10 * r.scale) << eta;
    EXPECT_LT(r.tangential_e, 1e-10 * r.scale) << eta;
    EXPECT_LT(r.tangential_curl, 1e-10 * r.scale) << eta;
  }
}

TEST(Auxiliary, TransmissionConditionsComplexEta) {
  oracle::Random rng(31);
  const MediumParams params{2.0, 2.0, 2.0, {5.0, 0.7}};
  const AuxResiduals r = aux_boundary_residuals(params, random_wave(rng), rng);
  EXPECT_LT(r.normal, 1e-10 * r.scale);
  EXPECT_LT(r.tangential_e, 1e-10 * r.scale);
  EXPECT_LT(r.tangential_curl, 1e-10 * r.scale);
}

TEST(Auxiliary, PressureIsHarmonic) {
  oracle::Random rng(37);
  const MediumParams params{1.0, 2.0, 0.5, {1.0, 0.0}};
  const auto coeffs = ModalCoefficients::solve_auxiliary(params, random_wave(rng), 11);
  const auto grad = [&](const Vec3& y) { return pressure_gradient(coeffs, y); };
  const Vec3 x{0.2, 0.3, -0.4};
  EXPECT_LT(std::abs(oracle::fd_div(grad, x, 1e-4)), 1e-7 * oracle::max_abs(grad(x)));
  EXPECT_LT(oracle::max_abs(oracle::fd_curl(grad, x, 1e-4)), 1e-7 * oracle::max_abs(grad(x)));
}

TEST(Auxiliary, ParameterValidation) {
  const PlaneWave w;
  EXPECT_THROW(ModalCoefficients::solve_auxiliary({1.0, 2.0, 1.0, {1.0, 0.0}}, w, 4), std::invalid_argument);
  EXPECT_THROW(ModalCoefficients::solve_auxiliary({1.0, 2.0, 0.5, {0.0, 0.0}}, w, 4), std::invalid_argument);
  EXPECT_THROW(ModalCoefficients::solve_auxiliary({1.0, 2.0, 0.5, {1.0, -0.1}}, w, 4), std::invalid_argument);
  EXPECT_THROW(aux_solve_mode(0, {1.0, 2.0, 0.5, {1.0, 0.0}}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ModalCoefficients::solve_physical({-1.0, 2.0}, w, 4), std::invalid_argument);
}

TEST(FarField, ZeroCoefficientsGiveZeroPattern) {
  const auto coeffs = ModalCoefficients::solve_physical({1.0, 1.0}, PlaneWave{}, 6);
  const TangentVector e = far_field_pattern(coeffs, UnitDirection::from_angles(0.3, 0.4), 1.0);
  EXPECT_EQ(e.theta, Complex{});
  EXPECT_EQ(e.phi, Complex{});
}

TEST(FarField, LargeRadiusAsymptotics) {
  oracle::Random rng(41);
  const double k = 2.0;
  const MediumParams params{k, 2.0, 0.5, {2.5, 0.0}};
  const PlaneWave w = random_wave(rng);
  for (bool aux : {false, true}) {
    const auto coeffs = aux ? ModalCoefficients::solve_auxiliary(params, w, 14)
                            : ModalCoefficients::solve_physical(params, w, 14);
    const UnitDirection xh = rng.direction();
    const TangentVector far = far_field_pattern(coeffs, xh, k);
    const double far_norm = std::sqrt(std::norm(far.theta) + std::norm(far.phi));
    double previous = 0.0;
    for (double r : {1e2, 1e3}) {
      const CVec3 near = scattered_field(coeffs, r * xh.xyz()).e;
      const TangentVector t = TangentVector::project((r * std::exp(Complex{0.0, -k * r})) * near, xh);
      const double err = std::sqrt(std::norm(t.theta - far.theta) + std::norm(t.phi - far.phi)) / far_norm;
      if (r == 1e3) {
        EXPECT_LT(err, 1e-2);
        EXPECT_LT(err, 0.2 * previous);
      }
      previous = err;
    }
  }
}

TEST(FarField, Reciprocity) {
  oracle::Random rng(43);
  const double k = 2.0;
  const MediumParams params{k, 2.0, 0.5, {3.3, 0.0}};
  const int n = truncation_order(k);
  for (bool aux : {false, true}) {
    for (int trial = 0; trial < 10; ++trial) {
      const UnitDirection xh = rng.direction(), d = rng.direction();
      const Vec3 p = rng.gaussian_vector(), q = rng.gaussian_vector();
      const auto solve = [&](const UnitDirection& dir, const Vec3& pol) {
        return aux ? ModalCoefficients::solve_auxiliary(params, PlaneWave::make(dir, pol), n)
                   : ModalCoefficients::solve_physical(params, PlaneWave::make(dir, pol), n);
      };
      const Complex lhs = dot(far_field_pattern(solve(d, p), xh, k).to_cartesian(xh), q);
      const UnitDirection md = d.opposite();
      const Complex rhs = dot(far_field_pattern(solve(xh.opposite(), q), md, k).to_cartesian(md), p);
      EXPECT_LT(std::abs(lhs - rhs), 1e-8 * std::abs(lhs));
    }
  }
}

TEST(Herglotz, ZeroDensityAndOrigin) {
  const DirectionGrid g = direction_grid(6, 12);
  std::vector<TangentVector> zero(g.size());
  EXPECT_EQ(oracle::max_abs(herglotz_field(g, zero, {0.1, 0.2, 0.3}, 2.0)), 0.0);

  oracle::Random rng(47);
  std::vector<TangentVector> dens(g.size());
  for (auto& t : dens) t = {rng.complex_uniform(), rng.complex_uniform()};
  CVec3 expect{};
  for (std::size_t j = 0; j < g.size(); ++j) expect += (kI * 2.0 * g.weight(j)) * dens[j].to_cartesian(g.direction(j));
  EXPECT_LT(oracle::max_abs(herglotz_field(g, dens, {0.0, 0.0, 0.0}, 2.0) - expect), 1e-14);
  EXPECT_THROW(herglotz_field(g, std::vector<TangentVector>(3), {0.0, 0.0, 0.0}, 2.0), GridMismatch);
}

TEST(Herglotz, DivergenceFree) {
  const DirectionGrid g = direction_grid(7, 14);
  oracle::Random rng(53);
  std::vector<TangentVector> dens(g.size());
  for (auto& t : dens) t = {rng.complex_uniform(), rng.complex_uniform()};
  for (int i = 0; i < 5; ++i) {
    const Vec3 x = 0.5 * rng.gaussian_vector();
    const auto v = [&](const Vec3& y) { return herglotz_field(g, dens, y, 2.0); };
    EXPECT_LT(std::abs(oracle::fd_div(v, x, 1e-4)), 1e-6 * oracle::max_abs(v(x)));
  }
}
