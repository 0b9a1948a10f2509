#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "radvi/errors.hpp"

namespace radvi {
namespace quad {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 abscissae/weights on [-1,1]).
namespace detail {
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};
}  // namespace detail

struct PanelResult {
  double value;
  double error;
};

template <typename F>
PanelResult gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = detail::kWgk[7] * fc;
  double gauss = detail::kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * detail::kXgk[i];
    const double fsum = f(c - x) + f(c + x);
    kronrod += detail::kWgk[i] * fsum;
    if (i % 2 == 1) gauss += detail::kWg[i / 2] * fsum;
  }
  kronrod *= h;
  gauss *= h;
  // QUADPACK-style conservative error estimate, scale-aware.
  const double raw = std::abs(kronrod - gauss);
  const double scale = std::max(std::abs(kronrod), 1e-300);
  const double ratio = 200.0 * raw / scale;
  const double err = (ratio < 1.0) ? scale * ratio * std::sqrt(ratio) : 200.0 * raw;
  return {kronrod, err};
}

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_depth = 48;
  bool throw_on_failure = true;
};

namespace detail {
template <typename F>
double refine(F& f, double a, double b, double tol, int depth, const Options& opt,
              bool& converged) {
  const PanelResult p = gk15(f, a, b);
  // The noise floor keeps recursion from chasing tolerances below double
  // precision on panels whose values dominate the total.
  const double floor = 1e-16 * std::abs(p.value);
  if (p.error <= std::max(tol, floor) || !(std::isfinite(p.value))) return p.value;
  if (depth >= opt.max_depth) {
    converged = false;
    return p.value;
  }
  const double m = 0.5 * (a + b);
  return refine(f, a, m, 0.5 * tol, depth + 1, opt, converged) +
         refine(f, m, b, 0.5 * tol, depth + 1, opt, converged);
}
}  // namespace detail

// Adaptive integration of f on the finite interval [a, b]. The interval is
// pre-split so that narrow features inside wide intervals are not missed by
// the first error estimate.
template <typename F>
double integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (a == b) return 0.0;
  constexpr int kInitialCells = 8;
  double coarse = 0.0;
  for (int i = 0; i < kInitialCells; ++i) {
    const double lo = a + (b - a) * i / kInitialCells;
    const double hi = a + (b - a) * (i + 1) / kInitialCells;
    coarse += gk15(f, lo, hi).value;
  }
  const double tol =
      std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse)) / kInitialCells;
  bool converged = true;
  double value = 0.0;
  for (int i = 0; i < kInitialCells; ++i) {
    const double lo = a + (b - a) * i / kInitialCells;
    const double hi = a + (b - a) * (i + 1) / kInitialCells;
    value += detail::refine(f, lo, hi, tol, 0, opt, converged);
  }
  if (!converged && opt.throw_on_failure) {
    std::ostringstream msg;
    msg << "quadrature failed to converge on [" << a << ", " << b << "]";
    throw NumericalError(msg.str());
  }
  return value;
}

// Integration of f on [a, inf) through the rational substitution
// r = a + t/(1-t), t in [0,1).
template <typename F>
double integrate_to_inf(F&& f, double a, const Options& opt = {}) {
  auto g = [&f, a](double t) {
    const double om = 1.0 - t;
    const double r = a + t / om;
    const double v = f(r);
    return v == 0.0 ? 0.0 : v / (om * om);
  };
  return integrate(g, 0.0, 1.0, opt);
}

}  // namespace quad
}  // namespace radvi
