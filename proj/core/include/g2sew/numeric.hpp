#pragma once
// Small numeric helpers shared across modules: binomial coefficients and
// factorial ratios (exact in double for small arguments, log-gamma beyond),
// and a path-tracked holomorphic square root for determinant branches.

#include <g2sew/types.hpp>

#include <cmath>
#include <functional>

namespace g2sew {

// Binomial coefficient as a double.  The multiplicative form keeps every
// intermediate within a factor binom(n,r) of the result, so it is safe (and
// accurate to ~r ulps) well past the point where factorials overflow.
inline double binom(long n, long r) {
  if (r < 0 || r > n) return 0.0;
  if (r > n - r) r = n - r;
  double acc = 1.0;
  for (long i = 1; i <= r; ++i) acc = acc * static_cast<double>(n - r + i) / static_cast<double>(i);
  return acc;
}

// log(n!)
inline double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// n! exactly for n <= 20 (fits in a double's integer range), log-gamma beyond.
inline double factorial(long n) {
  if (n <= 20) {
    double acc = 1.0;
    for (long i = 2; i <= n; ++i) acc *= static_cast<double>(i);
    return acc;
  }
  return std::exp(log_factorial(n));
}

// (k+l-1)! / ((k-1)! (l-1)!), exact product for small orders, log-gamma when
// k+l grows past the exact-double window.
inline double factorial_ratio_kl(long k, long l) {
  if (k + l <= 20) return factorial(k + l - 1) / (factorial(k - 1) * factorial(l - 1));
  return std::exp(log_factorial(k + l - 1) - log_factorial(k - 1) - log_factorial(l - 1));
}

// Holomorphic square root of s |-> f(s) along the segment s in [0,1], tracked
// from w(0) = +sqrt(f(0)) (callers arrange f(0) = 1 so the track starts at 1).
// At each sample the sign of sqrt(f(s_j)) is chosen to minimize the jump from
// the previous value.  The sample count doubles (8, 16, ..., up to 256) until
// every consecutive phase step is below pi/2, which makes the sign choice
// unambiguous; if that never happens the branch cannot be identified and
// BranchAmbiguity is thrown.  Used for det(I - ...)^{1/2} branches, which the
// underlying theory promises are single-valued and nonvanishing on the
// sewing domain -- so a genuine ambiguity signals leaving that domain.
inline cplx path_tracked_sqrt(const std::function<cplx(double)>& f) {
  for (int n = 8; n <= 256; n *= 2) {
    cplx w = std::sqrt(f(0.0));
    cplx prev = w;
    bool ok = true;
    for (int j = 1; j <= n; ++j) {
      double s = static_cast<double>(j) / n;
      cplx d = f(s);
      cplx r = std::sqrt(d);
      cplx w_j = (std::abs(r - prev) <= std::abs(-r - prev)) ? r : -r;
      // Phase step of the tracked value; > pi/2 means the sampling is too
      // coarse to trust the nearest-choice rule.
      double denom = std::abs(prev);
      if (denom == 0.0) throw BranchAmbiguity("path_tracked_sqrt: track passed through zero");
      if (std::abs(std::arg(w_j / prev)) > 0.5 * pi) {
        ok = false;
        break;
      }
      prev = w_j;
      w = w_j;
    }
    if (ok) return w;
  }
  throw BranchAmbiguity("path_tracked_sqrt: phase steps stayed above pi/2 at 256 samples");
}

}  // namespace g2sew
