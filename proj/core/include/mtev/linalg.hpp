#pragma once

// Dense complex linear algebra sized for the modal systems and the discretized
// far field operators (a few hundred rows at most).

#include <cstddef>
#include <span>
#include <vector>

#include "mtev/common.hpp"

namespace mtev {

using ComplexVector = std::vector<Complex>;

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {});

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexVector apply(std::span<const Complex> x) const;
  ComplexVector apply_adjoint(std::span<const Complex> y) const;

  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

double norm2(std::span<const Complex> x);
Complex inner(std::span<const Complex> x, std::span<const Complex> y);  ///< sum conj(x_i) y_i

// ---------------------------------------------------------------------------
// LU with partial pivoting

struct LuFactors {
  ComplexMatrix lu;
  std::vector<std::size_t> pivot;
  double min_pivot = 0.0;  ///< smallest |U_ii|
  double max_pivot = 0.0;  ///< largest |U_ii|
};

/// Throws SingularMatrix when a pivot magnitude falls below 1e-300.
LuFactors lu_factor(ComplexMatrix a);
ComplexVector lu_solve(const LuFactors& f, std::span<const Complex> b);
ComplexVector lu_solve(const ComplexMatrix& a, std::span<const Complex> b);

// ---------------------------------------------------------------------------
// SVD

/// A = U diag(sigma) V^*, sigma descending. For an m x n input U is m x p,
/// V is n x p with p = min(m, n).
struct SvdFactors {
  ComplexMatrix u;
  std::vector<double> sigma;
  ComplexMatrix v;
};

inline constexpr int kDefaultSvdSweeps = 60;

/// One-sided (Hestenes) Jacobi SVD. Throws NoConvergence when the sweep
/// budget is exhausted. With want_v = false and rows >= cols the right
/// factor is left empty, which saves the accumulation of V.
SvdFactors svd(const ComplexMatrix& a, int max_sweeps = kDefaultSvdSweeps, bool want_v = true);

/// U diag(sigma) V^*.
ComplexMatrix reconstruct(const SvdFactors& f);

/// g = sum_i sigma_i / (sigma_i^2 + alpha) <u_i, b> v_i, the minimizer of
/// |A g - b|^2 + alpha |g|^2.
ComplexVector tikhonov_solve(const SvdFactors& f, std::span<const Complex> b, double alpha);

/// Coefficients <u_i, b>.
ComplexVector left_coefficients(const SvdFactors& f, std::span<const Complex> b);

/// Tikhonov solution from precomputed <u_i, b>.
ComplexVector tikhonov_from_coefficients(const SvdFactors& f, std::span<const Complex> coeffs, double alpha);

/// |A g_alpha - b| from precomputed <u_i, b>; `outside` is |b - U U^* b|^2.
double tikhonov_residual(const SvdFactors& f, std::span<const Complex> coeffs, double outside, double alpha);

}  // namespace mtev
