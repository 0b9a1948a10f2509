#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "radvi/errors.hpp"
#include "radvi/quadrature.hpp"

namespace radvi {

struct SpecFunConfig {
  double rel_tolerance = 1e-12;
  int max_iterations = 500;
};

namespace specfun_detail {

inline double log_gamma(double s) { return std::lgamma(s); }

// Regularized lower incomplete gamma P(s,x) by series, valid for x < s+1.
inline double gamma_p_series(double s, double x, const SpecFunConfig& cfg) {
  if (x <= 0.0) return 0.0;
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int i = 0; i < cfg.max_iterations; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * cfg.rel_tolerance)
      return sum * std::exp(-x + s * std::log(x) - log_gamma(s));
  }
  std::ostringstream msg;
  msg << "incomplete gamma series did not converge (s=" << s << ", x=" << x << ")";
  throw NumericalError(msg.str());
}

// Regularized upper incomplete gamma Q(s,x) by modified Lentz continued
// fraction, valid for x >= s+1.
inline double gamma_q_contfrac(double s, double x, const SpecFunConfig& cfg) {
  const double fpmin = std::numeric_limits<double>::min() / cfg.rel_tolerance;
  double b = x + 1.0 - s;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= cfg.max_iterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < cfg.rel_tolerance)
      return std::exp(-x + s * std::log(x) - log_gamma(s)) * h;
  }
  std::ostringstream msg;
  msg << "incomplete gamma continued fraction did not converge (s=" << s << ", x=" << x << ")";
  throw NumericalError(msg.str());
}

}  // namespace specfun_detail

// Regularized lower incomplete gamma P(s,x).
inline double reg_lower_gamma(double s, double x, const SpecFunConfig& cfg = {}) {
  if (s <= 0.0) throw ConfigError("reg_lower_gamma requires s > 0");
  if (x < 0.0) throw ConfigError("reg_lower_gamma requires x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) return specfun_detail::gamma_p_series(s, x, cfg);
  return 1.0 - specfun_detail::gamma_q_contfrac(s, x, cfg);
}

// Regularized upper incomplete gamma Q(s,x).
inline double reg_upper_gamma(double s, double x, const SpecFunConfig& cfg = {}) {
  if (s <= 0.0) throw ConfigError("reg_upper_gamma requires s > 0");
  if (x < 0.0) throw ConfigError("reg_upper_gamma requires x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return 1.0 - specfun_detail::gamma_p_series(s, x, cfg);
  return specfun_detail::gamma_q_contfrac(s, x, cfg);
}

// Unregularized upper incomplete gamma Gamma(s,x).
inline double upper_incomplete_gamma(double s, double x, const SpecFunConfig& cfg = {}) {
  return reg_upper_gamma(s, x, cfg) * std::exp(specfun_detail::log_gamma(s));
}

// CDF of the chi-squared distribution with d degrees of freedom.
inline double chi_squared_cdf(int d, double x, const SpecFunConfig& cfg = {}) {
  if (d < 1) throw ConfigError("chi_squared_cdf requires d >= 1");
  if (x < 0.0) throw ConfigError("chi_squared_cdf requires x >= 0");
  return reg_lower_gamma(0.5 * d, 0.5 * x, cfg);
}

// Inverse of P(s, .): returns x with reg_lower_gamma(s, x) = p.
inline double inv_reg_lower_gamma(double s, double p, const SpecFunConfig& cfg = {}) {
  if (p < 0.0 || p >= 1.0) throw ConfigError("inv_reg_lower_gamma requires p in [0,1)");
  if (p == 0.0) return 0.0;
  // Wilson-Hilferty start for the chi-squared quantile with 2s dof.
  const double z = [&] {
    // Acklam-style rational approximation of the normal quantile is not
    // needed here; a crude start is enough for the safeguarded Newton below.
    double lo = -10.0, hi = 10.0;
    auto phi = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  const double nu = 2.0 * s;
  double x = nu * std::pow(1.0 - 2.0 / (9.0 * nu) + z * std::sqrt(2.0 / (9.0 * nu)), 3.0) / 2.0;
  if (!(x > 0.0)) x = 0.5 * s;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    const double err = reg_lower_gamma(s, x, cfg) - p;
    if (err > 0.0)
      hi = x;
    else
      lo = x;
    const double logpdf = (s - 1.0) * std::log(x) - x - specfun_detail::log_gamma(s);
    const double step = err * std::exp(-logpdf);
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-14 * x) return xn;
    x = xn;
  }
  return x;
}

// Quantile of the chi (not squared) distribution with d degrees of freedom.
inline double chi_quantile(int d, double p, const SpecFunConfig& cfg = {}) {
  return std::sqrt(inv_reg_lower_gamma(0.5 * d, p, cfg) * 2.0);
}

namespace specfun_detail {

// Continued fraction for the regularized incomplete beta function.
inline double betacf(double a, double b, double x, const SpecFunConfig& cfg) {
  const double fpmin = std::numeric_limits<double>::min() / cfg.rel_tolerance;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= cfg.max_iterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < cfg.rel_tolerance) return h;
  }
  std::ostringstream msg;
  msg << "incomplete beta continued fraction did not converge (a=" << a << ", b=" << b
      << ", x=" << x << ")";
  throw NumericalError(msg.str());
}

}  // namespace specfun_detail

// Regularized incomplete beta function I_x(a,b).
inline double reg_inc_beta(double a, double b, double x, const SpecFunConfig& cfg = {}) {
  if (a <= 0.0 || b <= 0.0) throw ConfigError("reg_inc_beta requires a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(specfun_detail::log_gamma(a + b) - specfun_detail::log_gamma(a) -
                             specfun_detail::log_gamma(b) + a * std::log(x) +
                             b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * specfun_detail::betacf(a, b, x, cfg) / a;
  return 1.0 - bt * specfun_detail::betacf(b, a, 1.0 - x, cfg) / b;
}

// Inverse of I_x(a,b) in x (NR-style initial guess plus safeguarded Halley).
inline double reg_inc_beta_inv(double a, double b, double p, const SpecFunConfig& cfg = {}) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = (p < 0.5) ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w)
      x = std::pow(a * w * p, 1.0 / a);
    else
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
  }
  const double afac = specfun_detail::log_gamma(a + b) - specfun_detail::log_gamma(a) -
                      specfun_detail::log_gamma(b);
  const double a1 = a - 1.0;
  const double b1 = b - 1.0;
  for (int j = 0; j < 30; ++j) {
    if (x == 0.0 || x == 1.0) return x;
    const double err = reg_inc_beta(a, b, x, cfg) - p;
    double t = std::exp(a1 * std::log(x) + b1 * std::log1p(-x) + afac);
    double u = err / t;
    t = u / (1.0 - 0.5 * std::min(1.0, u * (b1 / (1.0 - x) - a1 / x)));
    x -= t;
    if (x <= 0.0) x = 0.5 * (x + t);
    if (x >= 1.0) x = 0.5 * (x + t + 1.0);
    if (std::abs(t) < 1e-14 * x && j > 0) break;
  }
  return x;
}

// CDF of the F distribution with (d1, d2) degrees of freedom.
inline double f_cdf(int d1, int d2, double x, const SpecFunConfig& cfg = {}) {
  if (d1 < 1 || d2 < 1) throw ConfigError("f_cdf requires d1, d2 >= 1");
  if (x <= 0.0) return 0.0;
  const double y = d1 * x / (d1 * x + d2);
  return reg_inc_beta(0.5 * d1, 0.5 * d2, y, cfg);
}

// Quantile of the F distribution via the inverse incomplete beta relation.
inline double f_quantile(int d1, int d2, double p, const SpecFunConfig& cfg = {}) {
  if (d1 < 1 || d2 < 1) throw ConfigError("f_quantile requires d1, d2 >= 1");
  if (p < 0.0 || p >= 1.0) throw ConfigError("f_quantile requires p in [0,1)");
  if (p == 0.0) return 0.0;
  const double y = reg_inc_beta_inv(0.5 * d1, 0.5 * d2, p, cfg);
  if (y >= 1.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(d2) * y / (static_cast<double>(d1) * (1.0 - y));
}

namespace specfun_detail {

inline double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// log of the trapezoid sum h*(f(0)/2 + sum_k f(kh)) for the even integrand
// exp(log_cosh(nu t) - x cosh t), accumulated in log space.
inline double log_bessel_trapezoid(double nu, double x, double step, double t_end) {
  double m = -std::numeric_limits<double>::infinity();
  // First pass: running maximum of the log integrand.
  for (double t = 0.0; t <= t_end; t += step)
    m = std::max(m, log_cosh(nu * t) - x * std::cosh(t));
  double sum = 0.0;
  for (double t = 0.0; t <= t_end; t += step) {
    const double lf = log_cosh(nu * t) - x * std::cosh(t);
    const double w = (t == 0.0) ? 0.5 : 1.0;
    sum += w * std::exp(lf - m);
  }
  return m + std::log(sum) + std::log(step);
}

}  // namespace specfun_detail

// log K_nu(x) through the integral representation
// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, evaluated in log space.
// Symmetric in nu.
inline double log_bessel_k(double nu, double x, const SpecFunConfig& cfg = {}) {
  if (x <= 0.0) throw ConfigError("log_bessel_k requires x > 0");
  nu = std::abs(nu);
  // Locate the integrand peak and extend until the tail is negligible.
  const double t_peak = (nu <= x) ? 0.0 : std::asinh(nu / x);
  const double log_peak = specfun_detail::log_cosh(nu * t_peak) - x * std::cosh(t_peak);
  double t_end = std::max(t_peak + 4.0, 4.0);
  for (int i = 0; i < 400; ++i) {
    const double lf = specfun_detail::log_cosh(nu * t_end) - x * std::cosh(t_end);
    if (lf < log_peak - 60.0) break;
    t_end += 2.0;
  }
  double step = std::min(0.5, t_end / 16.0);
  double prev = specfun_detail::log_bessel_trapezoid(nu, x, step, t_end);
  for (int i = 0; i < cfg.max_iterations; ++i) {
    step *= 0.5;
    const double cur = specfun_detail::log_bessel_trapezoid(nu, x, step, t_end);
    if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
    if (step < 1e-5) break;
  }
  std::ostringstream msg;
  msg << "log_bessel_k trapezoid refinement did not converge (nu=" << nu << ", x=" << x << ")";
  throw NumericalError(msg.str());
}

// Riemann zeta at integer k >= 2 via Euler-Maclaurin summation.
inline double zeta_int(int k) {
  if (k < 2) throw ConfigError("zeta_int requires k >= 2");
  const int n_direct = 32;
  double sum = 0.0;
  for (int n = 1; n < n_direct; ++n) sum += std::pow(static_cast<double>(n), -k);
  const double N = static_cast<double>(n_direct);
  sum += std::pow(N, 1.0 - k) / (k - 1.0);
  sum += 0.5 * std::pow(N, -static_cast<double>(k));
  // Bernoulli corrections B2, B4, B6, B8.
  const double bern[4] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
  double fact = 1.0;     // (2j)!
  double rising = 1.0;   // k (k+1) ... (k+2j-2)
  for (int j = 1; j <= 4; ++j) {
    fact *= (2.0 * j - 1.0) * (2.0 * j);
    rising *= (j == 1) ? static_cast<double>(k)
                       : (k + 2.0 * j - 3.0) * (k + 2.0 * j - 2.0);
    sum += bern[j - 1] / fact * rising * std::pow(N, -static_cast<double>(k) - 2.0 * j + 1.0);
  }
  return sum;
}

// Density of the chi distribution (the law of ||X|| for X ~ N(0, I_d)).
inline double chi_log_pdf(int d, double r) {
  if (r < 0.0) return -std::numeric_limits<double>::infinity();
  if (r == 0.0)
    return d == 1 ? 0.5 * std::log(2.0 / M_PI) : -std::numeric_limits<double>::infinity();
  return (d - 1) * std::log(r) - 0.5 * r * r - (0.5 * d - 1.0) * std::log(2.0) -
         specfun_detail::log_gamma(0.5 * d);
}

inline double chi_pdf(int d, double r) {
  const double l = chi_log_pdf(d, r);
  return std::isinf(l) ? 0.0 : std::exp(l);
}

inline double chi_cdf(int d, double r, const SpecFunConfig& cfg = {}) {
  return chi_squared_cdf(d, r * r, cfg);
}

inline double normal_log_pdf(double z) { return -0.5 * z * z - 0.5 * std::log(2.0 * M_PI); }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace radvi
