#include "mtev/modal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mtev/errors.hpp"

namespace mtev {

namespace {

constexpr double kSingularTol = 1e-13;

Complex conj_dot(const TangentVector& t, const UnitDirection& at, const Vec3& p) {
  const CVec3 c = t.to_cartesian(at);
  return std::conj(c[0]) * p[0] + std::conj(c[1]) * p[1] + std::conj(c[2]) * p[2];
}

std::string eta_text(Complex eta) {
  std::ostringstream os;
  os.precision(17);
  os << eta.real() << (eta.imag() < 0 ? "-" : "+") << std::abs(eta.imag()) << "i";
  return os.str();
}

void check_order(int n) {
  if (n < 1) throw std::invalid_argument("modal solvers require n >= 1, got " + std::to_string(n));
}

}  // namespace

void MediumParams::validate_physical() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wave number k must be finite and > 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("permittivity eps must be finite and > 0");
}

void MediumParams::validate_auxiliary() const {
  validate_physical();
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and > 0");
  if (gamma == 1.0) throw std::invalid_argument("gamma must differ from 1");
  if (eta == Complex{}) throw std::invalid_argument("eta must be nonzero");
  if (eta.imag() < 0.0) throw std::invalid_argument("eta must satisfy Im(eta) >= 0");
  if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag())) throw std::invalid_argument("eta must be finite");
}

PlaneWave PlaneWave::make(const UnitDirection& d, const Vec3& p) {
  if (norm(p) == 0.0) throw std::invalid_argument("plane wave polarization must be nonzero");
  return PlaneWave{d, p};
}

int truncation_order(double k, std::optional<int> requested) {
  if (!(k > 0.0)) throw std::invalid_argument("truncation_order: k must be > 0");
  if (requested) {
    if (*requested < 1) throw std::invalid_argument("truncation_order: requested order must be >= 1");
    return *requested;
  }
  return static_cast<int>(std::ceil(k + 4.0 * std::cbrt(k) + 6.0));
}

IncidentCoeffs plane_wave_coeffs(const ModeIndex& idx, const PlaneWave& wave, double k) {
  validate(idx, 1);
  const TangentVector u = vsh_U(idx, wave.d);
  const TangentVector v = vsh_V(idx, wave.d);
  return {4.0 * kPi * ipow(idx.n) * conj_dot(u, wave.d, wave.p),
          4.0 * kPi * k * ipow(idx.n + 1) * conj_dot(v, wave.d, wave.p)};
}

// ---------------------------------------------------------------------------

namespace {

struct MieBlocks {
  Complex det_tm, det_te;
  Complex j, rj, h, rh, j1, rj1;
};

MieBlocks mie_blocks(int n, const MediumParams& params) {
  const double k = params.k;
  const Complex k1 = k * std::sqrt(params.eps);
  const RadialTable inc = bessel_j_table(n, Complex{k, 0.0});
  const RadialTable ext = hankel1_table(n, k);
  const RadialTable in = bessel_j_table(n, k1);
  const auto u = static_cast<std::size_t>(n);
  MieBlocks b{};
  b.j = inc.value[u];
  b.rj = inc.riccati[u];
  b.h = ext.value[u];
  b.rh = ext.riccati[u];
  b.j1 = in.value[u];
  b.rj1 = in.riccati[u];
  const Complex tm1 = params.eps * b.rh * b.j1;
  const Complex tm2 = b.rj1 * b.h;
  const Complex te1 = b.h * b.rj1;
  const Complex te2 = b.j1 * b.rh;
  b.det_tm = tm1 - tm2;
  b.det_te = te1 - te2;
  if (std::abs(b.det_tm) < kSingularTol * (std::abs(tm1) + std::abs(tm2))) {
    throw NearSingularMode(n, "Mie TM system singular at n = " + std::to_string(n));
  }
  if (std::abs(b.det_te) < kSingularTol * (std::abs(te1) + std::abs(te2))) {
    throw NearSingularMode(n, "Mie TE system singular at n = " + std::to_string(n));
  }
  return b;
}

}  // namespace

MieModeSolution mie_solve_mode(int n, const MediumParams& params, Complex a, Complex b) {
  check_order(n);
  params.validate_physical();
  const MieBlocks m = mie_blocks(n, params);
  MieModeSolution s;
  s.alpha = a * (m.rj1 * m.j - params.eps * m.rj * m.j1) / m.det_tm;
  s.delta = a * (m.rh * m.j - m.rj * m.h) / m.det_tm;
  s.beta = b * (m.j1 * m.rj - m.j * m.rj1) / m.det_te;
  s.phi = b * (m.h * m.rj - m.j * m.rh) / m.det_te;
  return s;
}

ComplexMatrix aux_modal_matrix(int n, const MediumParams& params) {
  check_order(n);
  const double k = params.k;
  const Complex eta = params.eta;
  const Complex k0 = k * std::sqrt(params.gamma * eta);
  const RadialTable ext = hankel1_table(n, k);
  const RadialTable in = bessel_j_table(n, k0);
  const auto u = static_cast<std::size_t>(n);
  const Complex h = ext.value[u], rh = ext.riccati[u];
  const Complex j0 = in.value[u], rj0 = in.riccati[u];
  const double s = std::sqrt(static_cast<double>(n) * (n + 1));

  ComplexMatrix m(5, 5);
  m(0, 0) = rh;
  m(0, 2) = -rj0;
  m(0, 4) = -s / eta;
  m(1, 1) = h;
  m(1, 3) = -j0;
  m(2, 1) = rh;
  m(2, 3) = -rj0 / params.gamma;
  m(3, 0) = h;
  m(3, 2) = -eta * j0;
  m(4, 2) = s * j0;
  m(4, 4) = static_cast<double>(n) / eta;
  return m;
}

ComplexVector aux_modal_rhs(int n, double k, Complex a, Complex b) {
  check_order(n);
  const RadialTable inc = bessel_j_table(n, Complex{k, 0.0});
  const auto u = static_cast<std::size_t>(n);
  return {-a * inc.riccati[u], -b * inc.value[u], -b * inc.riccati[u], -a * inc.value[u], Complex{}};
}

namespace {

void check_aux_blocks(int n, const MediumParams& params, const ComplexMatrix& m) {
  const Complex h = m(1, 1), rh = m(0, 0);
  const Complex j0 = -m(1, 3), rj0 = -m(0, 2);
  const Complex eta = params.eta;
  const double nn = n;
  const double s2 = nn * (nn + 1.0);

  const Complex te1 = -h * rj0 / params.gamma;
  const Complex te2 = j0 * rh;
  const Complex tm1 = -nn * rh * j0;
  const Complex tm2 = nn * rj0 * h / eta;
  const Complex tm3 = -s2 * h * j0 / eta;
  const bool te_singular = std::abs(te1 + te2) < kSingularTol * (std::abs(te1) + std::abs(te2));
  const bool tm_singular =
      std::abs(tm1 + tm2 + tm3) < kSingularTol * (std::abs(tm1) + std::abs(tm2) + std::abs(tm3));
  if (te_singular || tm_singular) {
    throw SingularModalSystem(n, eta.real(), eta.imag(),
                              std::string("auxiliary modal system singular (") + (te_singular ? "TE" : "TM") +
                                  " block) at n = " + std::to_string(n) + ", eta = " + eta_text(eta));
  }
}

LuFactors factor_aux(int n, const MediumParams& params) {
  const ComplexMatrix m = aux_modal_matrix(n, params);
  check_aux_blocks(n, params, m);
  try {
    return lu_factor(m);
  } catch (const SingularMatrix& e) {
    throw SingularModalSystem(n, params.eta.real(), params.eta.imag(), e.what());
  }
}

AuxModeSolution unpack(const ComplexVector& x) { return {x[0], x[1], x[2], x[3], x[4]}; }

}  // namespace

AuxModeSolution aux_solve_mode(int n, const MediumParams& params, Complex a, Complex b) {
  check_order(n);
  params.validate_auxiliary();
  const LuFactors f = factor_aux(n, params);
  return unpack(lu_solve(f, aux_modal_rhs(n, params.k, a, b)));
}

std::vector<ModeResponse> physical_responses(const MediumParams& params, int n_max) {
  params.validate_physical();
  std::vector<ModeResponse> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) {
    const MieModeSolution s = mie_solve_mode(n, params, 1.0, 1.0);
    out[static_cast<std::size_t>(n)] = {s.alpha, s.beta};
  }
  return out;
}

std::vector<ModeResponse> auxiliary_responses(const MediumParams& params, int n_max) {
  params.validate_auxiliary();
  std::vector<ModeResponse> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) {
    const AuxModeSolution s = aux_solve_mode(n, params, 1.0, 1.0);
    out[static_cast<std::size_t>(n)] = {s.alpha, s.beta};
  }
  return out;
}

// ---------------------------------------------------------------------------

ModalCoefficients::ModalCoefficients(Problem problem, const MediumParams& params, int n_max)
    : problem_(problem), params_(params), n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("ModalCoefficients: n_max must be >= 1");
  modes_.resize(static_cast<std::size_t>(vector_mode_count(n_max)));
}

namespace {

template <typename Solve>
void fill_modes(std::vector<ModeCoefficients>& modes, const PlaneWave& wave, double k, int n_max, Solve&& solve) {
  const HarmonicTable table(n_max, wave.d);
  for (int n = 1; n <= n_max; ++n) {
    auto solver = solve(n);
    for (int m = -n; m <= n; ++m) {
      ModeCoefficients& c = modes[static_cast<std::size_t>(vector_mode_offset(n, m))];
      c.idx = {n, m};
      c.a = 4.0 * kPi * ipow(n) * conj_dot(table.U(n, m), wave.d, wave.p);
      c.b = 4.0 * kPi * k * ipow(n + 1) * conj_dot(table.V(n, m), wave.d, wave.p);
      solver(c);
    }
  }
}

}  // namespace

ModalCoefficients ModalCoefficients::solve_physical(const MediumParams& params, const PlaneWave& wave, int n_max) {
  params.validate_physical();
  ModalCoefficients out(Problem::Physical, params, n_max);
  fill_modes(out.modes_, wave, params.k, n_max, [&](int n) {
    const MieBlocks blk = mie_blocks(n, params);
    return [blk, &params](ModeCoefficients& c) {
      c.alpha = c.a * (blk.rj1 * blk.j - params.eps * blk.rj * blk.j1) / blk.det_tm;
      c.delta = c.a * (blk.rh * blk.j - blk.rj * blk.h) / blk.det_tm;
      c.beta = c.b * (blk.j1 * blk.rj - blk.j * blk.rj1) / blk.det_te;
      c.phi = c.b * (blk.h * blk.rj - blk.j * blk.rh) / blk.det_te;
      c.p = Complex{};
    };
  });
  return out;
}

ModalCoefficients ModalCoefficients::solve_auxiliary(const MediumParams& params, const PlaneWave& wave, int n_max) {
  params.validate_auxiliary();
  ModalCoefficients out(Problem::Auxiliary, params, n_max);
  fill_modes(out.modes_, wave, params.k, n_max, [&](int n) {
    auto f = std::make_shared<LuFactors>(factor_aux(n, params));
    const double k = params.k;
    return [f, n, k](ModeCoefficients& c) {
      const AuxModeSolution s = unpack(lu_solve(*f, aux_modal_rhs(n, k, c.a, c.b)));
      c.alpha = s.alpha;
      c.beta = s.beta;
      c.delta = s.delta;
      c.phi = s.phi;
      c.p = s.p;
    };
  });
  return out;
}

const ModeCoefficients& ModalCoefficients::at(int n, int m) const {
  validate({n, m}, 1);
  if (n > n_max_) throw std::out_of_range("mode order exceeds truncation");
  return modes_[static_cast<std::size_t>(vector_mode_offset(n, m))];
}

Complex ModalCoefficients::interior_wavenumber() const {
  if (problem_ == Problem::Physical) return params_.k * std::sqrt(params_.eps);
  return params_.k * std::sqrt(params_.gamma * params_.eta);
}

double ModalCoefficients::decay_ratio() const {
  double overall = 0.0;
  double last = 0.0;
  for (const auto& c : modes_) {
    const double v = std::max(std::abs(c.alpha), std::abs(c.beta));
    overall = std::max(overall, v);
    if (c.idx.n == n_max_) last = std::max(last, v);
  }
  return overall > 0.0 ? last / overall : 0.0;
}

TangentVector far_field_pattern(const ModalCoefficients& coeffs, const UnitDirection& xhat, double k) {
  const HarmonicTable table(coeffs.n_max(), xhat);
  TangentVector out{};
  for (const auto& c : coeffs.modes()) {
    const Complex phase = ipow(-(c.idx.n + 1));
    const Complex cu = phase * kI * c.alpha;
    const Complex cv = phase * c.beta / k;
    const TangentVector& u = table.U(c.idx.n, c.idx.m);
    const TangentVector v = table.V(c.idx.n, c.idx.m);
    out.theta += cu * u.theta + cv * v.theta;
    out.phi += cu * u.phi + cv * v.phi;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Point {
  double r;
  UnitDirection dir;
};

Point split(const Vec3& x) {
  const double r = norm(x);
  if (!(r > 0.0)) throw std::invalid_argument("field evaluation requires x != 0");
  return {r, UnitDirection::from_vector(x)};
}

// Accumulates c [s f/r Y xhat + R/r U] + d f V and its curl
// -c kappa^2 f V - d [s f/r Y xhat + R/r U] for one family of modes.
template <typename Pick>
FieldSample mode_sum(const ModalCoefficients& coeffs, const Point& pt, const RadialTable& radial, Complex kappa,
                     Pick&& pick) {
  const HarmonicTable table(coeffs.n_max(), pt.dir);
  const Vec3& xh = pt.dir.xyz();
  FieldSample out;
  for (const auto& c : coeffs.modes()) {
    const int n = c.idx.n;
    const auto u = static_cast<std::size_t>(n);
    const auto [tm, te] = pick(c);
    const double s = std::sqrt(static_cast<double>(n) * (n + 1));
    const Complex f = radial.value[u];
    const Complex rf = radial.riccati[u] / pt.r;
    const Complex y = table.Y(n, c.idx.m);
    const CVec3 uc = table.U(n, c.idx.m).to_cartesian(pt.dir);
    const CVec3 vc = table.V(n, c.idx.m).to_cartesian(pt.dir);
    const Complex radial_part = s * f / pt.r * y;
    const CVec3 poloidal = (radial_part * xh) + (rf * uc);
    out.e += tm * poloidal + (te * f) * vc;
    out.curl_e += (-tm * kappa * kappa * f) * vc + (-te) * poloidal;
  }
  return out;
}

}  // namespace

FieldSample incident_field(const ModalCoefficients& coeffs, const Vec3& x) {
  const Point pt = split(x);
  const double k = coeffs.params().k;
  const RadialTable radial = bessel_j_table(coeffs.n_max(), Complex{k * pt.r, 0.0});
  return mode_sum(coeffs, pt, radial, k, [](const ModeCoefficients& c) { return std::pair{c.a, c.b}; });
}

FieldSample scattered_field(const ModalCoefficients& coeffs, const Vec3& x) {
  const Point pt = split(x);
  const double k = coeffs.params().k;
  const RadialTable radial = hankel1_table(coeffs.n_max(), k * pt.r);
  return mode_sum(coeffs, pt, radial, k, [](const ModeCoefficients& c) { return std::pair{c.alpha, c.beta}; });
}

FieldSample interior_field(const ModalCoefficients& coeffs, const Vec3& x) {
  const Point pt = split(x);
  const Complex kappa = coeffs.interior_wavenumber();
  const RadialTable radial = bessel_j_table(coeffs.n_max(), kappa * pt.r);
  return mode_sum(coeffs, pt, radial, kappa, [](const ModeCoefficients& c) { return std::pair{c.delta, c.phi}; });
}

CVec3 pressure_gradient(const ModalCoefficients& coeffs, const Vec3& x) {
  const Point pt = split(x);
  const HarmonicTable table(coeffs.n_max(), pt.dir);
  CVec3 out{};
  if (coeffs.problem() == Problem::Physical) return out;
  for (const auto& c : coeffs.modes()) {
    const int n = c.idx.n;
    const double s = std::sqrt(static_cast<double>(n) * (n + 1));
    const double rn1 = std::pow(pt.r, n - 1);
    const CVec3 uc = table.U(n, c.idx.m).to_cartesian(pt.dir);
    out += (c.p * rn1 * static_cast<double>(n) * table.Y(n, c.idx.m)) * pt.dir.xyz();
    out += (c.p * rn1 * s) * uc;
  }
  return out;
}

CVec3 herglotz_field(const DirectionGrid& grid, std::span<const TangentVector> g, const Vec3& x, double k) {
  if (g.size() != grid.size()) throw GridMismatch("herglotz_field: density length differs from grid size");
  CVec3 out{};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const UnitDirection& d = grid.direction(j);
    const Complex phase = std::exp(Complex{0.0, -k * dot(x, d.xyz())});
    out += (kI * k * grid.weight(j) * phase) * g[j].to_cartesian(d);
  }
  return out;
}

}  // namespace mtev
