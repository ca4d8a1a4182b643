#pragma once

#include <cmath>

#include "bfcausal/errors.hpp"

namespace bfcausal {

namespace detail {

constexpr int kGammaMaxIter = 200;

/// Regularized lower incomplete gamma P(a,x) by power series; valid for
/// x < a + 1.
inline double gamma_p_series(double a, double x) {
  if (x <= 0.0) return 0.0;
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Regularized upper incomplete gamma Q(a,x) by modified Lentz continued
/// fraction; valid for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / (b == 0.0 ? tiny : b);
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Q(a,x) = 1 - P(a,x), the regularized upper incomplete gamma function.
inline double regularized_gamma_q(double a, double x) {
  if (a <= 0.0) throw InvalidDofError("gamma shape must be positive");
  if (x < 0.0) throw Error("regularized_gamma_q: negative argument");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

/// Upper tail of the chi-square distribution: P(X >= x) for X ~ chi^2(dof).
inline double chi_square_survival(double x, int dof) {
  if (dof < 1) throw InvalidDofError("degrees of freedom must be at least 1");
  if (x < 0.0) throw Error("chi_square_survival: negative statistic");
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace bfcausal
