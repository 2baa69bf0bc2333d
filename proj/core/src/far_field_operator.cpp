#include "mtev/far_field_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mtev/errors.hpp"
#include "mtev/parallel.hpp"

namespace mtev {

const char* operator_kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Physical: return "F";
    case OperatorKind::Auxiliary: return "F0";
    case OperatorKind::Modified: return "modified";
  }
  return "unknown";
}

FarFieldAssembler::FarFieldAssembler(DirectionGrid grid, int n_max)
    : grid_(std::move(grid)), n_max_(n_max), modes_(static_cast<std::size_t>(vector_mode_count(n_max))) {
  if (n_max < 1) throw std::invalid_argument("FarFieldAssembler: n_max must be >= 1");
  const std::size_t width = 2 * modes_;
  basis_.assign(2 * grid_.size() * width, Complex{});
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const HarmonicTable table(n_max, grid_.direction(i));
    const double sw = std::sqrt(grid_.weight(i));
    Complex* row_theta = &basis_[(2 * i) * width];
    Complex* row_phi = &basis_[(2 * i + 1) * width];
    for (int n = 1; n <= n_max; ++n) {
      for (int m = -n; m <= n; ++m) {
        const auto k = static_cast<std::size_t>(vector_mode_offset(n, m));
        const TangentVector& u = table.U(n, m);
        const TangentVector v = table.V(n, m);
        row_theta[k] = sw * u.theta;
        row_phi[k] = sw * u.phi;
        row_theta[modes_ + k] = sw * v.theta;
        row_phi[modes_ + k] = sw * v.phi;
      }
    }
  }
}

ComplexMatrix FarFieldAssembler::assemble(const std::vector<ModeResponse>& responses, unsigned workers) const {
  if (responses.size() < static_cast<std::size_t>(n_max_) + 1) {
    throw std::invalid_argument("assemble: response table shorter than n_max + 1");
  }
  const std::size_t width = 2 * modes_;
  std::vector<Complex> diag(width);
  for (int n = 1; n <= n_max_; ++n) {
    const ModeResponse& r = responses[static_cast<std::size_t>(n)];
    for (int m = -n; m <= n; ++m) {
      const auto k = static_cast<std::size_t>(vector_mode_offset(n, m));
      diag[k] = 4.0 * kPi * r.t_alpha;
      diag[modes_ + k] = 4.0 * kPi * r.t_beta;
    }
  }

  const std::size_t dim = 2 * grid_.size();
  ComplexMatrix out(dim, dim);
  parallel_for(dim, workers, [&](std::size_t r) {
    std::vector<double> scaled(2 * width);
    const Complex* brow = &basis_[r * width];
    for (std::size_t k = 0; k < width; ++k) {
      const Complex z = brow[k] * diag[k];
      scaled[2 * k] = z.real();
      scaled[2 * k + 1] = z.imag();
    }
    for (std::size_t c = 0; c < dim; ++c) {
      const auto* bc = reinterpret_cast<const double*>(&basis_[c * width]);
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < width; ++k) {
        // scaled_k * conj(b_ck)
        const double sr = scaled[2 * k], si = scaled[2 * k + 1];
        const double br = bc[2 * k], bi = bc[2 * k + 1];
        re += sr * br + si * bi;
        im += si * br - sr * bi;
      }
      out(r, c) = Complex{re, im};
    }
  });
  return out;
}

FarFieldMatrix FarFieldAssembler::physical(const MediumParams& params, unsigned workers) const {
  FarFieldMatrix out{grid_, assemble(physical_responses(params, n_max_), workers), {}};
  out.meta = {OperatorKind::Physical, params, n_max_, {}};
  return out;
}

FarFieldMatrix FarFieldAssembler::auxiliary(const MediumParams& params, unsigned workers) const {
  FarFieldMatrix out{grid_, assemble(auxiliary_responses(params, n_max_), workers), {}};
  out.meta = {OperatorKind::Auxiliary, params, n_max_, {}};
  return out;
}

FarFieldMatrix assemble_F(const MediumParams& params, const DirectionGrid& grid, int n_max, unsigned workers) {
  return FarFieldAssembler(grid, n_max).physical(params, workers);
}

FarFieldMatrix assemble_F0(const MediumParams& params, const DirectionGrid& grid, int n_max, unsigned workers) {
  return FarFieldAssembler(grid, n_max).auxiliary(params, workers);
}

FarFieldMatrix modified_operator(const FarFieldMatrix& f, const FarFieldMatrix& f0) {
  if (!(f.grid == f0.grid)) throw GridMismatch("modified_operator: operators live on different grids");
  if (f.meta.params.k != f0.meta.params.k) throw GridMismatch("modified_operator: wave numbers differ");
  if (f.matrix.rows() != f0.matrix.rows() || f.matrix.cols() != f0.matrix.cols()) {
    throw GridMismatch("modified_operator: matrix shapes differ");
  }
  FarFieldMatrix out{f.grid, f.matrix - f0.matrix, {}};
  out.meta = {OperatorKind::Modified, f.meta.params, std::max(f.meta.n_max, f0.meta.n_max), f.meta.noise};
  out.meta.params.gamma = f0.meta.params.gamma;
  out.meta.params.eta = f0.meta.params.eta;
  return out;
}

FarFieldMatrix add_noise(const FarFieldMatrix& m, double level, std::uint64_t seed) {
  if (!(level >= 0.0 && level < 1.0)) throw std::invalid_argument("add_noise: level must lie in [0, 1)");
  FarFieldMatrix out = m;
  out.meta.noise = {level, seed};
  if (level == 0.0) return out;
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
  const double scale = level / std::sqrt(2.0);
  for (auto& z : out.matrix.data()) {
    const double z1 = uniform();
    const double z2 = uniform();
    z *= Complex{1.0 + scale * z1, scale * z2};
  }
  return out;
}

double reciprocity_defect(const FarFieldMatrix& m) {
  const std::size_t dim = m.matrix.rows();
  double peak = 0.0;
  for (const auto& z : m.matrix.data()) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t i = r / 2, s = r % 2;
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t j = c / 2, t = c % 2;
      const double sign = (s + t) % 2 == 0 ? 1.0 : -1.0;
      const Complex mirror = m.matrix(2 * m.grid.opposite(j) + t, 2 * m.grid.opposite(i) + s);
      worst = std::max(worst, std::abs(m.matrix(r, c) - sign * mirror));
    }
  }
  return worst / peak;
}

}  // namespace mtev
