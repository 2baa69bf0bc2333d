#include "mtev/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mtev/errors.hpp"

namespace mtev {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexVector ComplexMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  ComplexVector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc{};
    const Complex* row = &data_[r * cols_];
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

ComplexVector ComplexMatrix::apply_adjoint(std::span<const Complex> y) const {
  if (y.size() != rows_) throw std::invalid_argument("apply_adjoint: dimension mismatch");
  ComplexVector x(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const Complex* row = &data_[r * cols_];
    for (std::size_t c = 0; c < cols_; ++c) x[c] += std::conj(row[c]) * y[r];
  }
  return x;
}

double ComplexMatrix::frobenius_norm() const { return norm2(data_); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) {
  for (auto& z : a.data()) z *= s;
  return a;
}

double norm2(std::span<const Complex> x) {
  double scale = 0.0;
  for (const auto& z : x) scale = std::max({scale, std::abs(z.real()), std::abs(z.imag())});
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& z : x) sum += std::norm(z / scale);
  return scale * std::sqrt(sum);
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner: length mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

// ---------------------------------------------------------------------------
// LU

LuFactors lu_factor(ComplexMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("lu_factor: matrix must be square");
  LuFactors f;
  f.pivot.resize(n);
  std::iota(f.pivot.begin(), f.pivot.end(), std::size_t{0});
  f.min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(a(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (!(best >= 1e-300)) {
      throw SingularMatrix("lu_factor: pivot magnitude below 1e-300 at column " + std::to_string(k));
    }
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      std::swap(f.pivot[k], f.pivot[p]);
    }
    f.min_pivot = std::min(f.min_pivot, best);
    f.max_pivot = std::max(f.max_pivot, best);
    const Complex inv = 1.0 / a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex l = a(r, k) * inv;
      a(r, k) = l;
      if (l == Complex{}) continue;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= l * a(k, c);
    }
  }
  if (n == 0) f.min_pivot = 0.0;
  f.lu = std::move(a);
  return f;
}

ComplexVector lu_solve(const LuFactors& f, std::span<const Complex> b) {
  const std::size_t n = f.lu.rows();
  if (b.size() != n) throw std::invalid_argument("lu_solve: right-hand side length mismatch");
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.pivot[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

ComplexVector lu_solve(const ComplexMatrix& a, std::span<const Complex> b) {
  if (a.rows() != b.size()) throw std::invalid_argument("lu_solve: right-hand side length mismatch");
  return lu_solve(lu_factor(a), b);
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD

namespace {

// Column-major working storage with real and imaginary parts in separate
// arrays so that the inner loops vectorize.
struct SplitColumns {
  std::size_t rows;
  std::size_t cols;
  std::vector<double> re;
  std::vector<double> im;

  SplitColumns(std::size_t r, std::size_t c) : rows(r), cols(c), re(r * c, 0.0), im(r * c, 0.0) {}
  double* re_col(std::size_t j) { return re.data() + j * rows; }
  double* im_col(std::size_t j) { return im.data() + j * rows; }
  Complex at(std::size_t r, std::size_t j) const { return {re[j * rows + r], im[j * rows + r]}; }
};

struct PairProducts {
  double alpha, beta, gr, gi;
};

PairProducts pair_products(const double* __restrict xr, const double* __restrict xi, const double* __restrict yr,
                           const double* __restrict yi, std::size_t len) {
  double alpha = 0.0, beta = 0.0, gr = 0.0, gi = 0.0;
#pragma omp simd reduction(+ : alpha, beta, gr, gi)
  for (std::size_t i = 0; i < len; ++i) {
    alpha += xr[i] * xr[i] + xi[i] * xi[i];
    beta += yr[i] * yr[i] + yi[i] * yi[i];
    gr += xr[i] * yr[i] + xi[i] * yi[i];
    gi += xr[i] * yi[i] - xi[i] * yr[i];
  }
  return {alpha, beta, gr, gi};
}

// x' = c x - s e^{-i phi} y ;  y' = s x + c e^{-i phi} y
void rotate_pair(double* __restrict xr, double* __restrict xi, double* __restrict yr, double* __restrict yi,
                 std::size_t len, double c, double s, Complex phase_conj) {
  const double wr = s * phase_conj.real();
  const double wi = s * phase_conj.imag();
  const double zr = c * phase_conj.real();
  const double zi = c * phase_conj.imag();
#pragma omp simd
  for (std::size_t i = 0; i < len; ++i) {
    const double ar = xr[i], ai = xi[i], br = yr[i], bi = yi[i];
    xr[i] = c * ar - (wr * br - wi * bi);
    xi[i] = c * ai - (wr * bi + wi * br);
    yr[i] = s * ar + (zr * br - zi * bi);
    yi[i] = s * ai + (zr * bi + zi * br);
  }
}

struct PivotedQr {
  std::size_t rows;
  std::size_t cols;
  std::vector<Complex> a;            // column-major; reflector k stored in a[k+1.., k] with head v_k
  std::vector<Complex> head;         // v_k(k)
  std::vector<double> vnorm2;        // v_k^H v_k, zero for an identity reflector
  std::vector<std::size_t> perm;     // column j of A P is column perm[j] of A
  std::vector<Complex> r;            // n x n upper triangular, column-major
};

// Householder QR with column pivoting: A P = Q R.
PivotedQr pivoted_qr(const ComplexMatrix& m_in) {
  const std::size_t m = m_in.rows();
  const std::size_t n = m_in.cols();
  PivotedQr f{m, n, std::vector<Complex>(m * n), std::vector<Complex>(n), std::vector<double>(n, 0.0),
              std::vector<std::size_t>(n), std::vector<Complex>(n * n)};
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) f.a[c * m + r] = m_in(r, c);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  std::vector<double> cn(n, 0.0);
  const auto col = [&](std::size_t j) { return f.a.data() + j * m; };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cn[j] += std::norm(col(j)[i]);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t piv = static_cast<std::size_t>(std::max_element(cn.begin() + static_cast<std::ptrdiff_t>(k),
                                                                      cn.end()) -
                                                     cn.begin());
    if (piv != k) {
      std::swap_ranges(col(k), col(k) + m, col(piv));
      std::swap(cn[k], cn[piv]);
      std::swap(f.perm[k], f.perm[piv]);
    }
    Complex* x = col(k);
    double nx2 = 0.0;
    for (std::size_t i = k; i < m; ++i) nx2 += std::norm(x[i]);
    const double nx = std::sqrt(nx2);
    Complex beta{};
    if (nx > 0.0) {
      const Complex phase = x[k] == Complex{} ? Complex{1.0, 0.0} : x[k] / std::abs(x[k]);
      beta = -phase * nx;
      x[k] -= beta;
      double vn = 0.0;
      for (std::size_t i = k; i < m; ++i) vn += std::norm(x[i]);
      f.vnorm2[k] = vn;
      for (std::size_t j = k + 1; j < n; ++j) {
        Complex* y = col(j);
        Complex d{};
        for (std::size_t i = k; i < m; ++i) d += std::conj(x[i]) * y[i];
        d *= 2.0 / vn;
        double rest = 0.0;
        for (std::size_t i = k; i < m; ++i) {
          y[i] -= d * x[i];
          if (i > k) rest += std::norm(y[i]);
        }
        cn[j] = rest;
      }
    } else {
      for (std::size_t j = k + 1; j < n; ++j) cn[j] -= std::norm(col(j)[k]);
    }
    f.head[k] = x[k];
    f.r[k * n + k] = beta;
  }
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) f.r[j * n + i] = col(j)[i];
  return f;
}

// Overwrites y (m x n, column-major, top n x n filled) with Q y.
void apply_q(const PivotedQr& f, std::vector<Complex>& y, std::size_t ycols) {
  const std::size_t m = f.rows;
  for (std::size_t k = f.cols; k-- > 0;) {
    if (f.vnorm2[k] == 0.0) continue;
    const Complex* v = f.a.data() + k * m;
    for (std::size_t j = 0; j < ycols; ++j) {
      Complex* c = y.data() + j * m;
      Complex d = std::conj(f.head[k]) * c[k];
      for (std::size_t i = k + 1; i < m; ++i) d += std::conj(v[i]) * c[i];
      d *= 2.0 / f.vnorm2[k];
      c[k] -= d * f.head[k];
      for (std::size_t i = k + 1; i < m; ++i) c[i] -= d * v[i];
    }
  }
}

// One-sided Jacobi on X = R^H after a pivoted QR of A (m >= n). With
// X V' = W the factorization is A = (Q V') diag(|w_k|) (P W / |w_k|)^H.
SvdFactors jacobi_tall(const ComplexMatrix& a, int max_sweeps, bool want_v) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const PivotedQr qr = pivoted_qr(a);

  SplitColumns x(n, n);
  SplitColumns rot(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    rot.re_col(j)[j] = 1.0;
    for (std::size_t i = j; i < n; ++i) {
      const Complex rji = qr.r[i * n + j];
      x.re_col(j)[i] = rji.real();
      x.im_col(j)[i] = -rji.imag();
    }
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double tol = static_cast<double>(std::max<std::size_t>(n, 1)) * eps;
  const double fro = a.frobenius_norm();
  const double negligible = (eps * fro) * (eps * fro);

  std::vector<double> norms(n);
  std::vector<std::size_t> order(n);
  const auto sort_columns = [&] {
    for (std::size_t j = 0; j < n; ++j) norms[j] = pair_products(x.re_col(j), x.im_col(j), x.re_col(j), x.im_col(j), n).alpha;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return norms[p] > norms[q]; });
    SplitColumns xs(n, n), rs(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::copy_n(x.re_col(order[j]), n, xs.re_col(j));
      std::copy_n(x.im_col(order[j]), n, xs.im_col(j));
      std::copy_n(rot.re_col(order[j]), n, rs.re_col(j));
      std::copy_n(rot.im_col(order[j]), n, rs.im_col(j));
    }
    x = std::move(xs);
    rot = std::move(rs);
  };

  bool converged = n < 2;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    sort_columns();
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const PairProducts pr = pair_products(x.re_col(p), x.im_col(p), x.re_col(q), x.im_col(q), n);
        if (pr.alpha <= negligible || pr.beta <= negligible) continue;
        const double g = std::hypot(pr.gr, pr.gi);
        if (g == 0.0 || g <= tol * std::sqrt(pr.alpha) * std::sqrt(pr.beta)) continue;
        rotated = true;
        const double zeta = (pr.beta - pr.alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex phase_conj{pr.gr / g, -pr.gi / g};
        rotate_pair(x.re_col(p), x.im_col(p), x.re_col(q), x.im_col(q), n, c, s, phase_conj);
        rotate_pair(rot.re_col(p), rot.im_col(p), rot.re_col(q), rot.im_col(q), n, c, s, phase_conj);
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw NoConvergence("svd: one-sided Jacobi did not converge within " + std::to_string(max_sweeps) +
                        " sweeps");
  }
  sort_columns();

  SvdFactors f;
  f.sigma.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.sigma[k] = std::sqrt(norms[k]);

  // Left vectors: Q [V'; 0], orthonormal by construction.
  std::vector<Complex> y(m * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) y[j * m + i] = rot.at(i, j);
  apply_q(qr, y, n);
  f.u = ComplexMatrix(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) f.u(i, j) = y[j * m + i];

  if (!want_v) return f;

  // Right vectors: P W / sigma. Columns with negligible sigma are replaced by
  // the unit vector with the largest component outside the accepted span.
  ComplexMatrix w_hat(n, n);
  const double significant = std::sqrt(negligible) * std::sqrt(static_cast<double>(n));
  const auto orthogonalize = [&](ComplexVector& v, std::size_t accepted) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t other = 0; other < accepted; ++other) {
        Complex proj{};
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(w_hat(r, other)) * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= proj * w_hat(r, other);
      }
    }
    return norm2(v);
  };
  ComplexVector v(n), best(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (f.sigma[k] > significant) {
      for (std::size_t r = 0; r < n; ++r) w_hat(r, k) = x.at(r, k) / f.sigma[k];
      continue;
    }
    double best_norm = 0.0;
    if (f.sigma[k] > 0.0) {
      for (std::size_t r = 0; r < n; ++r) v[r] = x.at(r, k) / f.sigma[k];
      best_norm = orthogonalize(v, k);
      best = v;
    }
    for (std::size_t candidate = 0; candidate < n && best_norm < 0.5; ++candidate) {
      std::fill(v.begin(), v.end(), Complex{});
      v[candidate] = 1.0;
      const double nv = orthogonalize(v, k);
      if (nv > best_norm) {
        best_norm = nv;
        best = v;
      }
    }
    if (!(best_norm > 0.0)) throw NoConvergence("svd: could not complete the right singular basis");
    for (std::size_t r = 0; r < n; ++r) w_hat(r, k) = best[r] / best_norm;
  }
  f.v = ComplexMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) f.v(qr.perm[r], k) = w_hat(r, k);
  return f;
}

}  // namespace

SvdFactors svd(const ComplexMatrix& a, int max_sweeps, bool want_v) {
  if (!a.all_finite()) throw std::invalid_argument("svd: matrix has non-finite entries");
  if (a.rows() >= a.cols()) return jacobi_tall(a, max_sweeps, want_v);
  SvdFactors t = jacobi_tall(a.adjoint(), max_sweeps, true);
  return SvdFactors{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

ComplexMatrix reconstruct(const SvdFactors& f) {
  ComplexMatrix out(f.u.rows(), f.v.rows());
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      const Complex us = f.u(r, k) * f.sigma[k];
      for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += us * std::conj(f.v(c, k));
    }
  }
  return out;
}

ComplexVector left_coefficients(const SvdFactors& f, std::span<const Complex> b) {
  if (b.size() != f.u.rows()) throw std::invalid_argument("tikhonov: right-hand side length mismatch");
  const std::size_t p = f.sigma.size();
  ComplexVector c(p);
  for (std::size_t r = 0; r < f.u.rows(); ++r) {
    const Complex br = b[r];
    for (std::size_t k = 0; k < p; ++k) c[k] += std::conj(f.u(r, k)) * br;
  }
  return c;
}

ComplexVector tikhonov_from_coefficients(const SvdFactors& f, std::span<const Complex> coeffs, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("tikhonov: regularization parameter must be positive");
  const std::size_t p = f.sigma.size();
  if (coeffs.size() != p) throw std::invalid_argument("tikhonov: coefficient length mismatch");
  ComplexVector filtered(p);
  for (std::size_t k = 0; k < p; ++k) filtered[k] = f.sigma[k] / (f.sigma[k] * f.sigma[k] + alpha) * coeffs[k];
  ComplexVector g(f.v.rows());
  for (std::size_t r = 0; r < f.v.rows(); ++r) {
    Complex acc{};
    for (std::size_t k = 0; k < p; ++k) acc += f.v(r, k) * filtered[k];
    g[r] = acc;
  }
  return g;
}

ComplexVector tikhonov_solve(const SvdFactors& f, std::span<const Complex> b, double alpha) {
  return tikhonov_from_coefficients(f, left_coefficients(f, b), alpha);
}

double tikhonov_residual(const SvdFactors& f, std::span<const Complex> coeffs, double outside, double alpha) {
  double sum = outside;
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    const double s2 = f.sigma[k] * f.sigma[k];
    const double factor = alpha / (s2 + alpha);
    sum += factor * factor * std::norm(coeffs[k]);
  }
  return std::sqrt(std::max(sum, 0.0));
}

}  // namespace mtev
