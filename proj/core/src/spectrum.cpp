#include "mtev/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "mtev/specfun.hpp"

namespace mtev {

char branch_letter(Branch b) { return b == Branch::A ? 'a' : 'b'; }

namespace {

struct RadialPair {
  Complex j1, j1p;  // at k sqrt(eps)
  Complex j0, j0p;  // at k sqrt(gamma eta)
};

Complex combine(int n, Branch branch, bool modified, Complex eta, const RadialPair& r, const MediumParams& p) {
  const double k = p.k;
  if (branch == Branch::A) {
    return (1.0 - 1.0 / p.gamma) * r.j1 * r.j0 + k * std::sqrt(p.eps) * r.j1p * r.j0 -
           k * std::sqrt(eta / p.gamma) * r.j1 * r.j0p;
  }
  const Complex lead = modified ? eta + static_cast<double>(n) * p.eps : eta - p.eps;
  return lead * r.j1 * r.j0 + k * eta * std::sqrt(p.eps) * r.j1p * r.j0 -
         k * p.eps * std::sqrt(p.gamma * eta) * r.j1 * r.j0p;
}

RadialPair radial_pair(int n, Complex eta, const MediumParams& p) {
  const RadialTable t1 = bessel_j_table(n, Complex{p.k * std::sqrt(p.eps), 0.0});
  const RadialTable t0 = bessel_j_table(n, p.k * std::sqrt(p.gamma * eta));
  const auto u = static_cast<std::size_t>(n);
  return {t1.value[u], t1.deriv[u], t0.value[u], t0.deriv[u]};
}

void check_n(int n) {
  if (n < 0) throw std::invalid_argument("determinant order must be >= 0");
}

}  // namespace

Complex det_a(int n, Complex eta, const MediumParams& params) {
  check_n(n);
  return combine(n, Branch::A, false, eta, radial_pair(n, eta, params), params);
}

Complex det_b(int n, Complex eta, const MediumParams& params) {
  check_n(n);
  return combine(n, Branch::B, false, eta, radial_pair(n, eta, params), params);
}

Complex mdet_a(int n, Complex eta, const MediumParams& params) { return det_a(n, eta, params); }

Complex mdet_b(int n, Complex eta, const MediumParams& params) {
  check_n(n);
  return combine(n, Branch::B, true, eta, radial_pair(n, eta, params), params);
}

Complex determinant(const DeterminantBranch& which, Complex eta, const MediumParams& params) {
  if (which.branch == Branch::A) return which.modified ? mdet_a(which.n, eta, params) : det_a(which.n, eta, params);
  return which.modified ? mdet_b(which.n, eta, params) : det_b(which.n, eta, params);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> scan_grid(double lo, double hi, double step) {
  if (!(lo < hi)) throw std::invalid_argument("root search needs lo < hi");
  if (!(step > 0.0)) throw std::invalid_argument("root search needs step > 0");
  std::vector<double> xs;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step));
  xs.reserve(count + 2);
  for (std::size_t i = 0; i <= count; ++i) xs.push_back(lo + static_cast<double>(i) * step);
  if (xs.back() < hi) xs.push_back(hi);
  return xs;
}

// Refines to full double precision (the bracket ends up well below 1e-12 wide)
// and returns the bracket end with the smaller |f|.
double refine(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
  std::uintmax_t max_iter = 200;
  const boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, max_iter);
  return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

// Roots from sampled values ys on xs; f is used for refinement.
std::vector<double> roots_from_samples(const std::function<double(double)>& f, const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && ys[i + 1] != 0.0 && (ys[i] < 0.0) != (ys[i + 1] < 0.0)) {
      roots.push_back(refine(f, xs[i], xs[i + 1], ys[i], ys[i + 1]));
    }
  }
  return roots;
}

}  // namespace

std::vector<double> find_real_roots(const std::function<double(double)>& f, double lo, double hi, double step) {
  const std::vector<double> xs = scan_grid(lo, hi, step);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
  return roots_from_samples(f, xs, ys);
}

namespace {

std::vector<DeterminantBranch> all_branches(int n_max, bool modified) {
  std::vector<DeterminantBranch> out;
  for (int n = 0; n <= n_max; ++n) {
    out.push_back({Branch::A, modified, n});
    out.push_back({Branch::B, modified, n});
  }
  return out;
}

std::vector<EigenvalueRecord> accept_roots(const MediumParams& params, const DeterminantBranch& which,
                                           const std::vector<double>& roots, double step) {
  std::vector<EigenvalueRecord> out;
  for (double r : roots) {
    const double here = std::abs(determinant(which, r, params));
    const double left = std::abs(determinant(which, std::max(r - step, 0.5 * r), params));
    const double right = std::abs(determinant(which, r + step, params));
    if (!(here < 1e-10 * std::max(left, right))) continue;
    if (!out.empty() && r - out.back().eta < 1e-9) continue;
    out.push_back({r, which, here, false});
  }
  return out;
}

void validate_search(const MediumParams& params, const EigenSearch& search) {
  params.validate_physical();
  if (!(params.gamma > 0.0) || params.gamma == 1.0) throw std::invalid_argument("eigenvalues: need gamma > 0, != 1");
  if (!(search.lo > 0.0)) throw std::invalid_argument("eigenvalues: interval must lie in (0, inf)");
  if (search.n_max < 0) throw std::invalid_argument("eigenvalues: n_max must be >= 0");
}

}  // namespace

std::vector<EigenvalueRecord> branch_roots(const MediumParams& params, const DeterminantBranch& which,
                                           const EigenSearch& search) {
  validate_search(params, search);
  const auto f = [&](double x) { return determinant(which, x, params).real(); };
  return accept_roots(params, which, find_real_roots(f, search.lo, search.hi, search.step), search.step);
}

std::vector<EigenvalueRecord> eigenvalues(const MediumParams& params, const EigenSearch& search) {
  validate_search(params, search);
  const std::vector<double> xs = scan_grid(search.lo, search.hi, search.step);
  const auto branches = all_branches(search.n_max, search.modified);

  // One Bessel table per sample point serves every order and both branches.
  std::vector<std::vector<double>> samples(branches.size(), std::vector<double>(xs.size()));
  const RadialTable t1 = bessel_j_table(search.n_max, Complex{params.k * std::sqrt(params.eps), 0.0});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Complex eta{xs[i], 0.0};
    const RadialTable t0 = bessel_j_table(search.n_max, params.k * std::sqrt(params.gamma * eta));
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const auto u = static_cast<std::size_t>(branches[b].n);
      const RadialPair r{t1.value[u], t1.deriv[u], t0.value[u], t0.deriv[u]};
      samples[b][i] = combine(branches[b].n, branches[b].branch, branches[b].modified, eta, r, params).real();
    }
  }

  std::vector<EigenvalueRecord> all;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const DeterminantBranch which = branches[b];
    const auto f = [&](double x) { return determinant(which, x, params).real(); };
    const auto roots = accept_roots(params, which, roots_from_samples(f, xs, samples[b]), search.step);
    all.insert(all.end(), roots.begin(), roots.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.eta < y.eta; });
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i + 1].eta - all[i].eta < 1e-9) {
      all[i].coincident = true;
      all[i + 1].coincident = true;
    }
  }
  return all;
}

}  // namespace mtev
