#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "radvi/basis.hpp"
#include "radvi/errors.hpp"
#include "radvi/rng.hpp"
#include "radvi/specfun.hpp"

namespace radvi {

// n-th truncated moment of the chi law with d degrees of freedom:
//   M_n(a,b) = int_a^b r^n dchi(r)
//            = 2^{n/2}/Gamma(d/2) [Gamma((n+d)/2, a^2/2) - Gamma((n+d)/2, b^2/2)].
// Computed through regularized upper gammas so the prefactor carries the
// whole magnitude (exponents stay in range for large d).
inline double truncated_moment(int d, int n, double a, double b,
                               const SpecFunConfig& cfg = {}) {
  if (d < 1) throw ConfigError("truncated_moment requires d >= 1");
  if (n < 0) throw ConfigError("truncated_moment requires n >= 0");
  if (!(a >= 0.0) || !(b >= a)) throw ConfigError("truncated_moment requires 0 <= a <= b");
  if (a == b) return 0.0;
  const double s = 0.5 * (n + d);
  // Near-machine tolerance here: the difference below can cancel, and the
  // lost digits multiply into the moment.
  SpecFunConfig tight = cfg;
  tight.rel_tolerance = std::min(cfg.rel_tolerance, 1e-15);
  double diff;
  if (std::isinf(b)) {
    diff = reg_upper_gamma(s, 0.5 * a * a, tight);
  } else if (reg_upper_gamma(s, 0.5 * a * a, tight) > 0.5) {
    // Interval left of the bulk: the lower-tail difference is better scaled.
    diff = reg_lower_gamma(s, 0.5 * b * b, tight) - reg_lower_gamma(s, 0.5 * a * a, tight);
  } else {
    diff = reg_upper_gamma(s, 0.5 * a * a, tight) - reg_upper_gamma(s, 0.5 * b * b, tight);
  }
  const double log_pref =
      0.5 * n * std::log(2.0) + std::lgamma(s) - std::lgamma(0.5 * d);
  return std::max(0.0, std::exp(log_pref) * diff);
}

// Gram matrix Q_{ij} = E[Psi_i(|X|) Psi_j(|X|)], X ~ N(0, I_d), with its
// Cholesky factor. Basis functions whose diagonal entry falls below the drop
// threshold carry no chi mass; they are excluded from the factorization and
// recorded in `active`.
class GramMatrix {
 public:
  GramMatrix(Eigen::MatrixXd q, double drop_threshold = 1e-12) : Q_(std::move(q)) {
    const int n = static_cast<int>(Q_.rows());
    where_.assign(n, -1);
    for (int j = 0; j < n; ++j)
      if (Q_(j, j) >= drop_threshold) {
        where_[j] = static_cast<int>(active_.size());
        active_.push_back(j);
      }
    const int m = static_cast<int>(active_.size());
    if (m == 0) throw NumericalError("gram matrix has no active basis functions");
    Eigen::MatrixXd qa(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) qa(a, b) = Q_(active_[a], active_[b]);
    llt_.compute(qa);
    if (llt_.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "gram matrix is not positive definite (" << m
          << " active basis functions); the dictionary is ill-conditioned, try a larger mesh";
      throw NumericalError(msg.str());
    }
    L_ = llt_.matrixL();
  }

  const Eigen::MatrixXd& matrix() const { return Q_; }
  int size() const { return static_cast<int>(Q_.rows()); }
  const std::vector<int>& active() const { return active_; }
  bool all_active() const { return static_cast<int>(active_.size()) == size(); }
  // Lower Cholesky factor of the active submatrix.
  const Eigen::MatrixXd& factor() const { return L_; }

  double quad_form(const Eigen::VectorXd& v) const { return v.dot(Q_ * v); }

  // Solve Q z = g on the active coordinates; dropped coordinates return 0.
  Eigen::VectorXd solve(const Eigen::VectorXd& g) const {
    const int m = static_cast<int>(active_.size());
    Eigen::VectorXd ga(m);
    for (int a = 0; a < m; ++a) ga[a] = g[active_[a]];
    const Eigen::VectorXd za = llt_.solve(ga);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(size());
    for (int a = 0; a < m; ++a) z[active_[a]] = za[a];
    return z;
  }

 private:
  Eigen::MatrixXd Q_;
  std::vector<int> active_;
  std::vector<int> where_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXd L_;
};

namespace gram_detail {

// Linear coefficients (c, b) of Psi_j on a cell where it is either fully
// below its ramp (0), on it (affine), or saturated (1).
struct LinearPiece {
  double c;
  double b;
};

inline LinearPiece piece_on_cell(const Dictionary& dict, int j, double lo, double hi) {
  const double rl = dict.ramp_lo(j), rh = dict.ramp_hi(j), w = dict.ramp_width(j);
  if (hi <= rl) return {0.0, 0.0};
  if (lo >= rh) return {1.0, 0.0};
  return {-rl / w, 1.0 / w};
}

}  // namespace gram_detail

// Assemble Q by splitting [0, inf) at the two ramps' endpoints; on each cell
// the product Psi_i Psi_j is a quadratic polynomial, so each cell contributes
// a combination of M_0, M_1, M_2 (disjoint ramps reduce to M_0/M_1 terms,
// overlapping ramps bring in M_2). Heterogeneous ramp widths (delta_0 for
// Psi_0) are handled by the same decomposition.
inline GramMatrix gram_matrix(const Dictionary& dict, const SpecFunConfig& cfg = {}) {
  const int n = dict.size();
  const int d = dict.dim();
  Eigen::MatrixXd Q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double cuts[4] = {dict.ramp_lo(i), dict.ramp_hi(i), dict.ramp_lo(j), dict.ramp_hi(j)};
      std::sort(std::begin(cuts), std::end(cuts));
      double acc = 0.0;
      double prev = 0.0;
      for (double cut : cuts) {
        if (cut > prev) {
          const auto pi = gram_detail::piece_on_cell(dict, i, prev, cut);
          const auto pj = gram_detail::piece_on_cell(dict, j, prev, cut);
          if (!(pi.c == 0.0 && pi.b == 0.0) && !(pj.c == 0.0 && pj.b == 0.0)) {
            acc += pi.c * pj.c * truncated_moment(d, 0, prev, cut, cfg) +
                   (pi.c * pj.b + pj.c * pi.b) * truncated_moment(d, 1, prev, cut, cfg) +
                   pi.b * pj.b * truncated_moment(d, 2, prev, cut, cfg);
          }
          prev = cut;
        }
      }
      // Both saturated beyond the rightmost ramp end.
      acc += truncated_moment(d, 0, prev, std::numeric_limits<double>::infinity(), cfg);
      Q(i, j) = acc;
      Q(j, i) = acc;
    }
  }
  return GramMatrix(std::move(Q));
}

// Monte Carlo check of the closed-form Gram matrix: draws |X| for
// X ~ N(0, I_d) and averages basis products. Returns the max absolute
// entrywise deviation.
inline double gram_mc_validate(const Dictionary& dict, const GramMatrix& gram,
                               std::size_t n_samples, Rng& rng) {
  if (n_samples < 10000) throw ConfigError("gram_mc_validate requires n_samples >= 1e4");
  const int n = dict.size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double r = rng.chi(dict.dim());
    const Eigen::VectorXd psi = dict.eval_basis(r);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(psi);
  }
  acc /= static_cast<double>(n_samples);
  double dev = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      dev = std::max(dev, std::abs(acc(i, j) - gram.matrix()(i, j)));
  return dev;
}

}  // namespace radvi
