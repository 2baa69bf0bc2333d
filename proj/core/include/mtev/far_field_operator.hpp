#pragma once

// Discretized far field operators on a DirectionGrid.
//
// Layout: row 2i+s holds tangent component s (0 = theta_hat, 1 = phi_hat) at
// observation direction i; column 2j+t is the incident plane wave from
// direction j with polarization theta_hat (t = 0) or phi_hat (t = 1) at d_j.
// Entries carry sqrt(w_i) sqrt(w_j), so the matrix acts on densities stored
// as sqrt(w_j) g(d_j) and Euclidean norms equal discrete L^2_t norms.

#include <cstdint>
#include <memory>
#include <vector>

#include "mtev/linalg.hpp"
#include "mtev/modal.hpp"
#include "mtev/quadrature.hpp"

namespace mtev {

enum class OperatorKind : std::uint32_t { Physical = 0, Auxiliary = 1, Modified = 2 };

const char* operator_kind_name(OperatorKind kind);

struct NoiseDescriptor {
  double level = 0.0;
  std::uint64_t seed = 0;
};

struct OperatorMetadata {
  OperatorKind kind = OperatorKind::Physical;
  MediumParams params;
  int n_max = 0;
  NoiseDescriptor noise;  ///< noise carried by the physical data
};

struct FarFieldMatrix {
  DirectionGrid grid;
  ComplexMatrix matrix;
  OperatorMetadata meta;
};

/// Precomputes the sampled vector spherical harmonics for one grid and
/// truncation so that operators for many parameter values share them.
class FarFieldAssembler {
 public:
  FarFieldAssembler(DirectionGrid grid, int n_max);

  const DirectionGrid& grid() const { return grid_; }
  int n_max() const { return n_max_; }

  /// Builds the matrix from per-order responses (index n = 1..n_max).
  ComplexMatrix assemble(const std::vector<ModeResponse>& responses, unsigned workers = 1) const;

  FarFieldMatrix physical(const MediumParams& params, unsigned workers = 1) const;
  FarFieldMatrix auxiliary(const MediumParams& params, unsigned workers = 1) const;

 private:
  DirectionGrid grid_;
  int n_max_;
  std::size_t modes_;
  // Row-major (2N) x (2 modes): sqrt(w_i) U_s(x_i) then sqrt(w_i) V_s(x_i).
  std::vector<Complex> basis_;
};

/// Physical operator F; eta and gamma are ignored.
FarFieldMatrix assemble_F(const MediumParams& params, const DirectionGrid& grid, int n_max, unsigned workers = 1);
/// Auxiliary operator F0 for the eta stored in params.
FarFieldMatrix assemble_F0(const MediumParams& params, const DirectionGrid& grid, int n_max, unsigned workers = 1);

/// F - F0. Throws GridMismatch when grids, k or shapes differ.
FarFieldMatrix modified_operator(const FarFieldMatrix& f, const FarFieldMatrix& f0);

/// Entrywise m (1 + level (z1 + i z2) / sqrt(2)) with z1, z2 uniform on
/// [-1, 1] drawn in row-major order from std::mt19937_64(seed).
FarFieldMatrix add_noise(const FarFieldMatrix& m, double level, std::uint64_t seed);

/// max over entries of |M(r, c) - M(c', r')| with primes denoting the index of
/// the antipodal direction and the matching tangent component, relative to
/// the largest entry; zero for an exactly reciprocal matrix.
double reciprocity_defect(const FarFieldMatrix& m);

}  // namespace mtev
