#pragma once

#include <vector>

#include "bfcausal/errors.hpp"

namespace bfcausal {

/// P_n(x) by the three-term recurrence
///   P_0 = 1,  P_1 = x,  P_n = ((2n-1) x P_{n-1} - (n-1) P_{n-2}) / n.
inline double legendre_eval(int n, double x) {
  if (n < 0) throw NegativeIndexError("Index must be non-negative");
  if (n == 0) return 1.0;
  if (n == 1) return x;
  double pm2 = 1.0, pm1 = x, p = x;
  for (int k = 2; k <= n; ++k) {
    p = ((2.0 * k - 1.0) * x * pm1 - (k - 1.0) * pm2) / k;
    pm2 = pm1;
    pm1 = p;
  }
  return p;
}

/// P_1(x) .. P_p(x) in one pass; the constant term is omitted.
inline std::vector<double> legendre_terms(int p, double x) {
  if (p < 1) throw NegativeIndexError("truncation limit must be at least 1");
  std::vector<double> out(p);
  out[0] = x;
  double pm2 = 1.0, pm1 = x;
  for (int k = 2; k <= p; ++k) {
    double pk = ((2.0 * k - 1.0) * x * pm1 - (k - 1.0) * pm2) / k;
    out[k - 1] = pk;
    pm2 = pm1;
    pm1 = pk;
  }
  return out;
}

}  // namespace bfcausal
