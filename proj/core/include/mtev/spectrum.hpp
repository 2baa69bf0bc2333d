#pragma once

// Determinant functions of the (modified) electromagnetic transmission
// eigenvalue problem for the unit ball and a real-line root search.

#include <functional>
#include <string>
#include <vector>

#include "mtev/common.hpp"
#include "mtev/modal.hpp"

namespace mtev {

enum class Branch { A, B };

struct DeterminantBranch {
  Branch branch = Branch::A;
  bool modified = false;
  int n = 0;
};

char branch_letter(Branch b);

/// Interior wave numbers are k sqrt(eps) and k sqrt(gamma eta), principal roots.
Complex det_a(int n, Complex eta, const MediumParams& params);
Complex det_b(int n, Complex eta, const MediumParams& params);
Complex mdet_a(int n, Complex eta, const MediumParams& params);
Complex mdet_b(int n, Complex eta, const MediumParams& params);
Complex determinant(const DeterminantBranch& which, Complex eta, const MediumParams& params);

/// Sign-change scan of f on lo, lo + step, ... (and hi), each bracket refined
/// by TOMS 748 to a width below 1e-12. Roots closer together than `step` can
/// be missed. Returns ascending roots.
std::vector<double> find_real_roots(const std::function<double(double)>& f, double lo, double hi, double step);

struct EigenSearch {
  double lo = 0.05;
  double hi = 60.0;
  double step = 1e-3;
  int n_max = 15;
  bool modified = true;
};

struct EigenvalueRecord {
  double eta = 0.0;
  DeterminantBranch which;
  double residual = 0.0;    ///< |d(eta)|
  bool coincident = false;  ///< another (n, branch) has a root within 1e-9
};

/// Roots of both branches for n = 0..n_max, ascending. Roots whose residual
/// exceeds 1e-10 of the determinant magnitude one step away are discarded.
std::vector<EigenvalueRecord> eigenvalues(const MediumParams& params, const EigenSearch& search);

/// Roots of a single determinant in the search window.
std::vector<EigenvalueRecord> branch_roots(const MediumParams& params, const DeterminantBranch& which,
                                           const EigenSearch& search);

}  // namespace mtev
