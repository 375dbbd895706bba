#pragma once

// Double-exponential quadrature rules. Integrands receive the offset from
// the finite endpoint(s) rather than an absolute abscissa, so singularities
// at an endpoint are sampled without cancellation.

#include <cmath>
#include <limits>
#include <numbers>

#include "corrgamma/errors.hpp"

namespace corrgamma::quad {

struct Result {
  double value;
  double error;  // difference between the last two refinement levels
};

/// Integral of f over [0, length], where f(t) takes the offset t from 0.
/// Endpoint singularities are allowed; f is never evaluated at 0 or length.
template <class F>
Result tanh_sinh(F&& f, double length, double tolerance = 1e-13, int max_level = 10) {
  if (!(length > 0.0)) return {0.0, 0.0};
  constexpr double half_pi = 0.5 * std::numbers::pi;

  // Sum over abscissae s = j * h for odd multiples at each level (all j at level 0).
  auto level_sum = [&](double h, bool odd_only) {
    double sum = 0.0;
    const int step = odd_only ? 2 : 1;
    const int start = odd_only ? 1 : 0;
    for (int j = start;; j += step) {
      const double s = j * h;
      const double u = half_pi * std::sinh(s);
      const double e2u = std::exp(-2.0 * u);
      // Distance from the nearer endpoint: length / (1 + e^{2u}) in stable form.
      const double near = length * e2u / (1.0 + e2u);
      const double cosh_u = std::cosh(u);
      const double w = half_pi * std::cosh(s) / (cosh_u * cosh_u) * 0.5 * length;
      if (!(near > 0.0) || !(w > 0.0) || !std::isfinite(w)) break;
      double term = w * f(near);
      if (j != 0) term += w * f(length - near);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum) && s > 3.0) break;
      if (s > 6.5) break;
    }
    return sum;
  };

  double h = 1.0;
  double sum = level_sum(h, false);
  double estimate = h * sum;
  double error = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    sum += level_sum(h, true);
    const double next = h * sum;
    error = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && error <= tolerance * std::max(1.0, std::abs(estimate))) break;
  }
  return {estimate, error};
}

/// Integral of f over [0, inf), where f(t) takes the offset t from 0.
/// f must decay at least exponentially.
template <class F>
Result exp_sinh(F&& f, double tolerance = 1e-13, int max_level = 10) {
  constexpr double half_pi = 0.5 * std::numbers::pi;

  auto level_sum = [&](double h, bool odd_only) {
    double sum = 0.0;
    const int step = odd_only ? 2 : 1;
    const int start = odd_only ? 1 : 0;
    // Positive direction: t grows doubly exponentially.
    for (int j = start;; j += step) {
      const double s = j * h;
      const double t = std::exp(half_pi * std::sinh(s));
      const double w = half_pi * std::cosh(s) * t;
      if (!std::isfinite(t) || !std::isfinite(w)) break;
      const double term = w * f(t);
      sum += term;
      if (j > 0 && (term == 0.0 || std::abs(term) < 1e-18 * std::abs(sum))) break;
    }
    // Negative direction: t shrinks toward the origin.
    for (int j = 1;; j += step) {
      const double s = -j * h;
      const double t = std::exp(half_pi * std::sinh(s));
      const double w = half_pi * std::cosh(s) * t;
      if (!(t > 0.0) || !(w > 0.0)) break;
      const double term = w * f(t);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum) && s < -3.0) break;
      if (s < -6.5) break;
    }
    return sum;
  };

  double h = 1.0;
  double sum = level_sum(h, false);
  double estimate = h * sum;
  double error = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    sum += level_sum(h, true);
    const double next = h * sum;
    error = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && error <= tolerance * std::max(1.0, std::abs(estimate))) break;
  }
  return {estimate, error};
}

}  // namespace corrgamma::quad
