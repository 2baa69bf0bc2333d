#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "commands.hpp"

namespace mtev::cli {

namespace {

struct Rng {
  std::mt19937_64 engine{20240601};
  std::uniform_real_distribution<double> unit{-1.0, 1.0};
  double operator()() { return unit(engine); }
  Complex complex() { return {unit(engine), unit(engine)}; }
};

SelftestCheck wronskian(const std::function<Complex(int, Complex)>& j) {
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (double x : {0.3, 0.9, 2.0, 5.5, 12.0, 31.0}) {
      const Complex jn = j(n, x);
      const Complex jd = n == 0 ? -j(1, x) : j(n - 1, x) - double(n + 1) / x * jn;
      const Complex w = jn * sph_bessel_y_deriv(n, x) - jd * sph_bessel_y(n, x);
      worst = std::max(worst, std::abs(w * x * x - 1.0));
    }
  }
  return {"wronskian", worst < 1e-10, "max |x^2 W - 1| = " + shortest(worst)};
}

SelftestCheck reciprocity() {
  const MediumParams p{2.0, 2.0, 0.5, {3.0, 0.0}};
  const FarFieldAssembler assembler(direction_grid(4, 8), 10);
  const double f = reciprocity_defect(assembler.physical(p));
  const double f0 = reciprocity_defect(assembler.auxiliary(p));
  return {"reciprocity", std::max(f, f0) < 1e-8, "F " + shortest(f) + ", F0 " + shortest(f0)};
}

SelftestCheck mdet_identity() {
  Rng rng;
  int mismatches = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const MediumParams p{1.0 + 2.0 * std::abs(rng()), 1.0 + 3.0 * std::abs(rng()), 0.2 + 0.6 * std::abs(rng()), {}};
    const int n = trial % 12;
    const Complex eta{0.1 + 30.0 * std::abs(rng()), 0.0};
    const Complex a = det_a(n, eta, p);
    const Complex m = mdet_a(n, eta, p);
    if (!(a.real() == m.real() && a.imag() == m.imag())) ++mismatches;
  }
  return {"mdet_a_identity", mismatches == 0, std::to_string(mismatches) + " of 2000 differ"};
}

SelftestCheck tikhonov_normal_equations() {
  Rng rng;
  const std::size_t n = 30;
  ComplexMatrix a(n, n);
  for (Complex& z : a.data()) z = rng.complex();
  ComplexVector b(n);
  for (Complex& z : b) z = rng.complex();
  const double alpha = 1e-3;
  const ComplexVector x = tikhonov_solve(svd(a), b, alpha);
  ComplexVector lhs = a.apply_adjoint(a.apply(x));
  const ComplexVector rhs = a.apply_adjoint(b);
  double diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lhs[i] += alpha * x[i];
    diff += std::norm(lhs[i] - rhs[i]);
  }
  const double rel = std::sqrt(diff) / norm2(rhs);
  return {"tikhonov_normal_equations", rel < 1e-9, "relative residual " + shortest(rel)};
}

SelftestCheck svd_reconstruction() {
  Rng rng;
  ComplexMatrix a(24, 18);
  for (Complex& z : a.data()) z = rng.complex();
  const double rel = (reconstruct(svd(a)) - a).frobenius_norm() / a.frobenius_norm();
  return {"svd_reconstruction", rel < 1e-12, "relative error " + shortest(rel)};
}

SelftestCheck zero_contrast() {
  const FarFieldMatrix f = assemble_F({2.0, 1.0, 0.5, {}}, direction_grid(4, 8), 10);
  double worst = 0.0;
  for (const Complex& z : f.matrix.data()) worst = std::max(worst, std::abs(z));
  return {"zero_contrast", worst < 1e-14, "max |F| = " + shortest(worst)};
}

}  // namespace

std::vector<SelftestCheck> cmd_selftest(const SelftestHooks& hooks, std::ostream& log) {
  const auto j = hooks.sph_j ? hooks.sph_j : [](int n, Complex z) { return sph_bessel_j(n, z); };
  const std::vector<std::function<SelftestCheck()>> suite{
      [&] { return wronskian(j); }, reciprocity, mdet_identity, tikhonov_normal_equations, svd_reconstruction,
      zero_contrast};

  std::vector<SelftestCheck> checks;
  for (const auto& check : suite) {
    const auto t0 = std::chrono::steady_clock::now();
    SelftestCheck c = check();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    log << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "  (" << static_cast<long>(ms)
        << " ms)\n";
    checks.push_back(std::move(c));
  }
  const auto passed = std::count_if(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.passed; });
  log << "selftest: " << passed << "/" << checks.size() << " checks passed\n";
  return checks;
}

}  // namespace mtev::cli
