#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "radvi/errors.hpp"

namespace radvi {

using Weights = Eigen::VectorXd;

// Piecewise-linear radial dictionary. Basis index j runs 0..J:
//   Psi_0 ramps linearly from 0 to 1 on [0, sqrt(d)-R],
//   Psi_j (j>=1) ramps on [a_j, a_j+delta] with a_j = sqrt(d)-R + (j-1)delta,
// and every ramp plateaus at 1 to the right. The parametrized radial map is
//   g_lambda(r) = alpha r + <lambda, Psi(r)>,   lambda in R_+^{J+1},
// applied along rays: T_lambda(x) = g_lambda(|x|) x/|x|.
class Dictionary {
 public:
  Dictionary(int dim, double cutoff, double mesh, double slope) {
    if (dim < 1) throw ConfigError("dictionary dimension must be >= 1");
    const double sqrt_d = std::sqrt(static_cast<double>(dim));
    if (!(cutoff > 0.0) || cutoff > sqrt_d) {
      std::ostringstream msg;
      msg << "dictionary cutoff R must satisfy 0 < R <= sqrt(d); got R=" << cutoff
          << ", sqrt(d)=" << sqrt_d;
      throw ConfigError(msg.str());
    }
    if (!(mesh > 0.0) || mesh > 2.0 * cutoff)
      throw ConfigError("dictionary mesh delta must satisfy 0 < delta <= 2R");
    if (!(slope > 0.0)) throw ConfigError("dictionary slope alpha must be positive");
    if (!(sqrt_d - cutoff > 0.0))
      throw ConfigError("R = sqrt(d) leaves the first ramp degenerate; choose R < sqrt(d)");
    dim_ = dim;
    R_ = cutoff;
    delta_ = mesh;
    alpha_ = slope;
    delta0_ = sqrt_d - cutoff;
    J_ = static_cast<int>(std::ceil(2.0 * cutoff / mesh)) + 1;
    knots_.resize(J_);
    for (int j = 0; j < J_; ++j) knots_[j] = sqrt_d - cutoff + j * mesh;
    // Ramps cover [sqrt(d)-R, sqrt(d)+R] (the last one may overshoot by < delta).
  }

  // Default parameters: R = sqrt(log d), delta = d^{-1/6}.
  static Dictionary with_defaults(int dim, double alpha = 0.01) {
    const double d = static_cast<double>(dim);
    return Dictionary(dim, std::sqrt(std::log(d)), std::pow(d, -1.0 / 6.0), alpha);
  }

  int dim() const { return dim_; }
  int size() const { return J_ + 1; }  // number of basis functions
  int num_knots() const { return J_; }
  double cutoff() const { return R_; }
  double mesh() const { return delta_; }
  double alpha() const { return alpha_; }
  double knot(int j) const { return knots_[j - 1]; }  // a_j, j = 1..J

  // Ramp start and width of basis function j (j = 0..J).
  double ramp_lo(int j) const { return j == 0 ? 0.0 : knots_[j - 1]; }
  double ramp_width(int j) const { return j == 0 ? delta0_ : delta_; }
  double ramp_hi(int j) const { return ramp_lo(j) + ramp_width(j); }
  double coverage_end() const { return ramp_hi(J_); }

  // Breakpoints of g_lambda: 0, a_1, ..., a_J, a_J + delta. Between
  // consecutive breakpoints every basis function (hence g) is linear.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    b.reserve(J_ + 2);
    b.push_back(0.0);
    for (double a : knots_) b.push_back(a);
    b.push_back(coverage_end());
    return b;
  }

  Eigen::VectorXd eval_basis(double r) const {
    Eigen::VectorXd out(J_ + 1);
    for (int j = 0; j <= J_; ++j)
      out[j] = std::clamp((r - ramp_lo(j)) / ramp_width(j), 0.0, 1.0);
    return out;
  }

  // Right-continuous derivative: 1/width on [lo, hi), 0 elsewhere.
  Eigen::VectorXd eval_basis_deriv(double r) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(J_ + 1);
    for (int j = 0; j <= J_; ++j)
      if (r >= ramp_lo(j) && r < ramp_hi(j)) out[j] = 1.0 / ramp_width(j);
    return out;
  }

  // g_lambda(r) = alpha r + <lambda, Psi(r)>.
  double radial_value(const Weights& lambda, double r) const {
    double s = alpha_ * r;
    for (int j = 0; j <= J_; ++j)
      s += lambda[j] * std::clamp((r - ramp_lo(j)) / ramp_width(j), 0.0, 1.0);
    return s;
  }

  // Right derivative g'_lambda(r) = alpha + <lambda, Psi'(r)> >= alpha.
  double radial_slope(const Weights& lambda, double r) const {
    double s = alpha_;
    for (int j = 0; j <= J_; ++j)
      if (r >= ramp_lo(j) && r < ramp_hi(j)) s += lambda[j] / ramp_width(j);
    return s;
  }

  // <lambda, Psi(r)>/r with the exact limit at r -> 0 (Psi_0 ramps from the
  // origin, so the ratio is lambda_0/delta_0 on the whole first cell).
  double basis_over_r(const Weights& lambda, double r) const {
    if (r <= delta0_) return lambda[0] / delta0_;
    double s = 0.0;
    for (int j = 0; j <= J_; ++j)
      s += lambda[j] * std::clamp((r - ramp_lo(j)) / ramp_width(j), 0.0, 1.0);
    return s / r;
  }

  Eigen::VectorXd apply_map(const Weights& lambda, const Eigen::VectorXd& x) const {
    const double r = x.norm();
    if (r == 0.0) return Eigen::VectorXd::Zero(x.size());  // g(0) = 0
    return (radial_value(lambda, r) / r) * x;
  }

  // log det DT_lambda(x) as a function of r = |x|:
  //   (d-1) log(alpha + <lambda,Psi(r)>/r) + log(alpha + <lambda,Psi'(r)>).
  // Finite for every lambda >= 0 and r >= 0 since both arguments are >= alpha.
  double log_det_jacobian(const Weights& lambda, double r) const {
    const double tangential = alpha_ + basis_over_r(lambda, r);
    const double radial = alpha_ + [&] {
      double s = 0.0;
      for (int j = 0; j <= J_; ++j)
        if (r >= ramp_lo(j) && r < ramp_hi(j)) s += lambda[j] / ramp_width(j);
      return s;
    }();
    return (dim_ - 1) * std::log(tangential) + std::log(radial);
  }

  // Exact inverse of the piecewise-linear bijection g_lambda on [0, inf).
  double invert_radial(const Weights& lambda, double s) const {
    if (s <= 0.0) return 0.0;
    const std::vector<double> bp = breakpoints();
    double g_prev = 0.0;
    for (std::size_t k = 1; k < bp.size(); ++k) {
      const double g_cur = radial_value(lambda, bp[k]);
      if (s <= g_cur) {
        const double t = (s - g_prev) / (g_cur - g_prev);
        return bp[k - 1] + t * (bp[k] - bp[k - 1]);
      }
      g_prev = g_cur;
    }
    // Beyond the last breakpoint g has slope exactly alpha.
    return bp.back() + (s - g_prev) / alpha_;
  }

 private:
  int dim_ = 0;
  int J_ = 0;
  double R_ = 0.0, delta_ = 0.0, alpha_ = 0.0, delta0_ = 0.0;
  std::vector<double> knots_;
};

inline Dictionary build_dictionary(int dim, double cutoff, double mesh, double slope) {
  return Dictionary(dim, cutoff, mesh, slope);
}

}  // namespace radvi
