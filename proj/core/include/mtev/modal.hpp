#pragma once

// Separation of variables for the unit ball: plane-wave expansion
// coefficients, the physical Mie transmission problem, the auxiliary
// five-unknown modal system and far field synthesis.
//
// Every field below is expanded as
//   E = sum_{n,m} c [ sqrt(n(n+1)) f(kr)/r Y xhat + (r f(kr))'/r U ] + d f(kr) V
// with f = j_n (incident, interior) or h_n^(1) (scattered). The pair (c, d) is
// (a, b) for the incident field, (alpha, beta) for the scattered field and
// (delta, phi) for the interior field.

#include <optional>
#include <span>
#include <vector>

#include "mtev/common.hpp"
#include "mtev/linalg.hpp"
#include "mtev/quadrature.hpp"
#include "mtev/specfun.hpp"

namespace mtev {

struct MediumParams {
  double k = 1.0;
  double eps = 1.0;
  double gamma = 0.5;
  Complex eta{1.0, 0.0};

  /// k > 0 and eps > 0; throws std::invalid_argument otherwise.
  void validate_physical() const;
  /// Additionally gamma > 0, gamma != 1, eta != 0 and Im(eta) >= 0.
  void validate_auxiliary() const;
};

struct PlaneWave {
  UnitDirection d = UnitDirection::from_angles(0.0, 0.0);
  Vec3 p{1.0, 0.0, 0.0};

  /// Throws std::invalid_argument for a zero polarization.
  static PlaneWave make(const UnitDirection& d, const Vec3& p);
};

/// `requested` if given, otherwise ceil(k + 4 k^(1/3) + 6).
int truncation_order(double k, std::optional<int> requested = std::nullopt);

struct IncidentCoeffs {
  Complex a;
  Complex b;
};

/// Coefficients of the incident field (i/k) curl curl p e^{ik x.d}
///   a_n^m = 4 pi i^n conj(U_n^m(d)) . p,  b_n^m = 4 pi k i^{n+1} conj(V_n^m(d)) . p
IncidentCoeffs plane_wave_coeffs(const ModeIndex& idx, const PlaneWave& wave, double k);

// ---------------------------------------------------------------------------
// Per-mode solvers

struct MieModeSolution {
  Complex alpha;
  Complex beta;
  Complex delta;  ///< interior TM coefficient, wave number k sqrt(eps)
  Complex phi;    ///< interior TE coefficient
};

/// Tangential E and curl E continuous at r = 1. Throws NearSingularMode when
/// either 2x2 determinant is below 1e-13 of its scale.
MieModeSolution mie_solve_mode(int n, const MediumParams& params, Complex a, Complex b);

struct AuxModeSolution {
  Complex alpha;
  Complex beta;
  Complex delta;  ///< interior TM coefficient, wave number k sqrt(gamma eta)
  Complex phi;
  Complex p;      ///< coefficient of r^n Y_n^m in the harmonic pressure
};

/// The 5x5 matrix acting on (alpha, beta, delta, phi, p). Depends on n only.
ComplexMatrix aux_modal_matrix(int n, const MediumParams& params);
ComplexVector aux_modal_rhs(int n, double k, Complex a, Complex b);

/// Throws SingularModalSystem when the decoupled TE (beta, phi) or TM
/// (alpha, delta, p) block determinant is below 1e-13 of its scale.
AuxModeSolution aux_solve_mode(int n, const MediumParams& params, Complex a, Complex b);

/// Exterior response of one order to unit incident coefficients:
/// alpha = t_alpha * a and beta = t_beta * b.
struct ModeResponse {
  Complex t_alpha;
  Complex t_beta;
};

std::vector<ModeResponse> physical_responses(const MediumParams& params, int n_max);
std::vector<ModeResponse> auxiliary_responses(const MediumParams& params, int n_max);

// ---------------------------------------------------------------------------
// Full coefficient sets

enum class Problem { Physical, Auxiliary };

struct ModeCoefficients {
  ModeIndex idx;
  Complex a, b;
  Complex alpha, beta;
  Complex delta, phi;
  Complex p;  ///< zero for the physical problem
};

class ModalCoefficients {
 public:
  static ModalCoefficients solve_physical(const MediumParams& params, const PlaneWave& wave, int n_max);
  static ModalCoefficients solve_auxiliary(const MediumParams& params, const PlaneWave& wave, int n_max);

  Problem problem() const { return problem_; }
  const MediumParams& params() const { return params_; }
  int n_max() const { return n_max_; }
  const std::vector<ModeCoefficients>& modes() const { return modes_; }
  const ModeCoefficients& at(int n, int m) const;

  /// Interior wave number: k sqrt(eps) or k sqrt(gamma eta).
  Complex interior_wavenumber() const;

  /// max |alpha|,|beta| at n = n_max divided by the maximum over all n.
  double decay_ratio() const;

 private:
  ModalCoefficients(Problem problem, const MediumParams& params, int n_max);

  Problem problem_;
  MediumParams params_;
  int n_max_;
  std::vector<ModeCoefficients> modes_;
};

/// E_inf(xhat) = sum (-i)^{n+1} [ i alpha U + (beta / k) V ], the leading term
/// of E^s = e^{ikr}/r E_inf + O(r^-2).
TangentVector far_field_pattern(const ModalCoefficients& coeffs, const UnitDirection& xhat, double k);

// ---------------------------------------------------------------------------
// Field evaluation (diagnostics and boundary-condition checks)

struct FieldSample {
  CVec3 e{};
  CVec3 curl_e{};
};

FieldSample incident_field(const ModalCoefficients& coeffs, const Vec3& x);
FieldSample scattered_field(const ModalCoefficients& coeffs, const Vec3& x);
FieldSample interior_field(const ModalCoefficients& coeffs, const Vec3& x);
/// grad P for the auxiliary problem; zero for the physical one.
CVec3 pressure_gradient(const ModalCoefficients& coeffs, const Vec3& x);

/// ik sum_j w_j e^{-ik x.d_j} g(d_j) with g given per grid direction.
CVec3 herglotz_field(const DirectionGrid& grid, std::span<const TangentVector> g, const Vec3& x, double k);

}  // namespace mtev
