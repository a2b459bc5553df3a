#pragma once

// Pointwise kernels for the logarithmic nonlinearity z ln|z|^2, its
// regularization 2 z ln(|z| + eps), the exact phase-rotation flow of the
// pointwise ODE, and the scalar inequalities used by the property suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace lognls {

using Complex = std::complex<double>;

/// Regularization parameter; eps == 0 selects the singular nonlinearity.
struct Regularization {
  double eps = 0.0;

  constexpr Regularization() = default;
  explicit Regularization(double value) : eps(value) {
    if (!(value >= 0.0) || !std::isfinite(value))
      throw std::invalid_argument("regularization eps must be finite and >= 0");
  }
};

namespace detail {

// x1*y2 - y1*x2 with one rounding error (Kahan's fma trick).
inline double cross(double x1, double y1, double x2, double y2) {
  const double w = y1 * x2;
  const double e = std::fma(-y1, x2, w);
  const double f = std::fma(x1, y2, -w);
  return f + e;
}

// ln((a1 + e1) / (a2 + e2)) given da = a1 - a2 computed separately,
// accurate when the ratio is close to one.
inline double log_ratio(double a1, double e1, double a2, double e2, double da) {
  const double num = a1 + e1;
  const double den = a2 + e2;
  if (num == 0.0 || den == 0.0) return std::log(num) - std::log(den);
  const double rel = (da + (e1 - e2)) / den;
  if (std::abs(rel) < 0.5) return std::log1p(rel);
  return std::log(num) - std::log(den);
}

}  // namespace detail

/// g(z) = z ln(|z|^2), with g(0) = 0.
inline Complex g(Complex z) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  return z * (2.0 * std::log(r));
}

/// g_eps(z) = 2 z ln(|z| + eps); reduces to g for eps = 0.
inline Complex g_eps(Complex z, Regularization reg) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  return z * (2.0 * std::log(r + reg.eps));
}

/// Exact solution at time dt of  i u' + 2 lambda u ln(|u| + eps) = 0.
/// The modulus is invariant, so the map is a pure phase rotation.
inline Complex nonlinear_phase_flow(Complex z, double lambda, Regularization reg, double dt) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  const double phase = 2.0 * lambda * dt * std::log(r + reg.eps);
  return z * std::polar(1.0, phase);
}

/// Im[ conj(z1 - z2) (z1 ln(|z1|+eps1) - z2 ln(|z2|+eps2)) ].
///
/// Evaluated as (L1 - L2) * Im(conj(z1) (z2 - z1)): the (z1 - z2) L1 part of
/// the product is real and drops out. |z1| - |z2| is taken as
/// Re((z1 - z2) conj(z1 + z2)) / (|z1| + |z2|), so nearby arguments keep
/// full relative accuracy at any modulus.
inline double monotonicity_gap(Complex z1, Complex z2, Regularization eps1, Regularization eps2) {
  const double a1 = std::abs(z1);
  const double a2 = std::abs(z2);
  if (a1 == 0.0 || a2 == 0.0) return 0.0;  // one factor vanishes: product is real
  const Complex dz = z2 - z1;
  const double im = detail::cross(z1.real(), z1.imag(), dz.real(), dz.imag());
  if (im == 0.0) return 0.0;
  const Complex sz = z1 + z2;
  const double da = -(dz.real() * sz.real() + dz.imag() * sz.imag()) / (a1 + a2);
  return detail::log_ratio(a1, eps1.eps, a2, eps2.eps, da) * im;
}

/// Right-hand side |z1-z2|^2 + |eps1-eps2| |z1-z2| of the monotonicity bound.
inline double monotonicity_bound(Complex z1, Complex z2, Regularization eps1, Regularization eps2) {
  const double d = std::abs(z1 - z2);
  return d * d + std::abs(eps1.eps - eps2.eps) * d;
}

/// |g(z)| / (|z|^{1-delta} + |z|^{1+delta}); analytically <= 2 / (e delta).
inline double check_pointwise_growth_bound(Complex z, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  // 2 r |ln r| / (r^{1-d} + r^{1+d}) = 2 |ln r| / (r^{-d} + r^{d})
  return 2.0 * std::abs(std::log(r)) / (std::pow(r, -delta) + std::pow(r, delta));
}

/// Radial cutoff equal to 1 on |z| <= 1 and 0 on |z| >= 2.
inline double radial_cutoff(Complex z) { return std::clamp(2.0 - std::abs(z), 0.0, 1.0); }

/// Small-modulus part of g.
inline Complex g_small(Complex z) { return radial_cutoff(z) * g(z); }
/// Large-modulus part of g.
inline Complex g_large(Complex z) { return (1.0 - radial_cutoff(z)) * g(z); }

/// Ratios (Hoelder ratio of g_small, log-Lipschitz ratio of g_large).
inline std::pair<double, double> check_difference_bounds(Complex z, Complex w, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  const double d = std::abs(z - w);
  if (d == 0.0) return {0.0, 0.0};
  const double holder = std::abs(g_small(z) - g_small(w)) / std::pow(d, alpha);
  const auto log_plus = [](double r) { return r > 1.0 ? std::log(r) : 0.0; };
  const double weight = log_plus(std::abs(z)) + log_plus(std::abs(w)) + 1.0;
  const double loglip = std::abs(g_large(z) - g_large(w)) / (weight * d);
  return {holder, loglip};
}

}  // namespace lognls
