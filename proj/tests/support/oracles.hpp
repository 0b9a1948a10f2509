#pragma once

// Independent reference computations used by the test suites. These
// deliberately avoid the library code paths they are used to check:
// integration here is adaptive Simpson (the library uses Gauss-Kronrod),
// assignment is permutation enumeration, projections are enumerated over
// active sets.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace testsupport {

// ---- adaptive Simpson -------------------------------------------------
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  const double disc = std::abs(left + right - whole);
  // Stop at the requested tolerance, the double-precision noise floor, or
  // the denormal regime where refinement only chases rounding noise.
  if (depth <= 0 || disc <= 15.0 * tol || disc <= 4e-16 * std::abs(left + right) ||
      disc <= 1e-280)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace detail

inline double simpson_integrate(const std::function<double(double)>& f, double a, double b,
                                double tol = 1e-12, int depth = 50) {
  if (a == b) return 0.0;
  // Uniform pre-split so localized features are seen before adaptation.
  const int cells = 16;
  double total = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double lo = a + (b - a) * i / cells;
    const double hi = a + (b - a) * (i + 1) / cells;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = detail::simpson(f, lo, hi, fa, fm, fb);
    total += detail::adapt(f, lo, hi, fa, fm, fb, whole, tol / cells, depth);
  }
  return total;
}

inline double simpson_integrate_to_inf(const std::function<double(double)>& f, double a,
                                       double tol = 1e-12) {
  auto g = [&f, a](double t) {
    if (t >= 1.0) return 0.0;
    const double om = 1.0 - t;
    const double v = f(a + t / om);
    return v == 0.0 ? 0.0 : v / (om * om);
  };
  return simpson_integrate(g, 0.0, 1.0 - 1e-14, tol);
}

// ---- finite differences -----------------------------------------------
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline Eigen::VectorXd gradient_fd(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

// ---- two-sample Kolmogorov-Smirnov statistic ---------------------------
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

// ---- brute-force squared W2 by permutation enumeration ------------------
inline double brute_force_w2_squared(const std::vector<Eigen::VectorXd>& x,
                                     const std::vector<Eigen::VectorXd>& y) {
  const std::size_t n = x.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] - y[perm[i]]).squaredNorm();
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

// ---- exact nonnegative projection by active-set enumeration ------------
// argmin_{l >= 0} (l-y)' Q (l-y), solved by trying every subset of
// coordinates clamped to zero and keeping the best feasible KKT point.
inline Eigen::VectorXd enumerate_projection(const Eigen::MatrixXd& Q, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_l = Eigen::VectorXd::Zero(n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) free_idx.push_back(i);
    Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
    if (!free_idx.empty()) {
      const int k = static_cast<int>(free_idx.size());
      Eigen::MatrixXd Qff(k, k);
      Eigen::VectorXd rhs(k);
      for (int a = 0; a < k; ++a) {
        rhs[a] = (Q.row(free_idx[a]) * y)(0);
        for (int b = 0; b < k; ++b) Qff(a, b) = Q(free_idx[a], free_idx[b]);
      }
      const Eigen::VectorXd sol = Qff.ldlt().solve(rhs);
      for (int a = 0; a < k; ++a) l[free_idx[a]] = sol[a];
    }
    if ((l.array() < -1e-12).any()) continue;
    const Eigen::VectorXd diff = l - y;
    const double obj = diff.dot(Q * diff);
    if (obj < best) {
      best = obj;
      best_l = l.cwiseMax(0.0);
    }
  }
  return best_l;
}

// ---- random orthogonal matrix as a product of Householder reflections ---
template <typename RngT>
Eigen::MatrixXd random_orthogonal(int d, RngT& rng) {
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(d, d);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    v.normalize();
    U = U - 2.0 * v * (v.transpose() * U);
  }
  return U;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace testsupport
