#pragma once
// Shared scalar types, the error taxonomy, and the two parameter records used
// by every layer of the library.
//
// Conventions fixed here once and relied on everywhere:
//
//   q       = exp(2*pi*i*tau),  Im tau > 0, so |q| < 1.  Fractional powers of
//             q are ALWAYS exp(2*pi*i*tau*x), never std::pow(q, x): the latter
//             takes a branch cut through the q-plane that moves with tau.
//
//   Twist characters on the unit circle, parameterized by angles:
//             theta = -exp(-2*pi*i*beta) = exp(2*pi*i*u),      u      = frac(1/2 - beta)
//             phi   = -exp(+2*pi*i*alpha) = exp(2*pi*i*lambda), lambda = frac(alpha + 1/2)
//             with alpha, beta canonicalized to [0,1).  The angles (u, lambda)
//             are the source of truth; theta and phi are reconstituted from
//             them on demand so that group actions on characters can be done
//             with exact rational-angle arithmetic instead of drifting around
//             branch cuts.  The pair is degenerate iff (theta,phi) = (1,1),
//             i.e. (alpha,beta) = (1/2,1/2), i.e. u = lambda = 0 exactly.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace g2sew {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// ---------------------------------------------------------------------------
// Error taxonomy.  Two families plus a parse error; the CLI maps them to exit
// codes: DomainError -> 2, NumericalError -> 3, ParseError -> 1.

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfStrip : DomainError {
  using DomainError::DomainError;
};
struct SingularPoint : DomainError {
  using DomainError::DomainError;
};
struct DomainViolation : DomainError {
  using DomainError::DomainError;
};
struct DegenerateTwist : DomainError {
  using DomainError::DomainError;
};
struct IndexOutOfRange : DomainError {
  using DomainError::DomainError;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergent : NumericalError {
  using NumericalError::NumericalError;
};
struct LinearSolveFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct BranchAmbiguity : NumericalError {
  using NumericalError::NumericalError;
};
struct LimitUnstable : NumericalError {
  using NumericalError::NumericalError;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------

// Convergence control for every truncated series/product in the library.
// Series are summed until the stop rule fires: three consecutive terms below
// rel_tol times the largest partial-sum magnitude seen so far.  (Three, not
// one, because twisted q-expansions can have interior humps where a single
// term dips; the running maximum keeps the rule meaningful when the partial
// sum passes through zero.)
struct SeriesPolicy {
  double rel_tol = 1e-13;
  int max_terms = 4096;
};

// Fractional part in [0,1).  The guard clamps the x = -tiny case, where
// x - floor(x) rounds up to exactly 1.0.
inline double frac1(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}

// ---------------------------------------------------------------------------

struct ModularParam {
  cplx tau;
  cplx q;  // exp(2*pi*i*tau), derived

  explicit ModularParam(cplx tau_) : tau(tau_), q(std::exp(cplx(0.0, two_pi) * tau_)) {
    if (!(tau_.imag() > 0.0))
      throw DomainViolation("ModularParam: Im(tau) must be positive, got tau = (" +
                            std::to_string(tau_.real()) + ", " + std::to_string(tau_.imag()) + ")");
  }

  // q^x for real/complex exponent x, evaluated as exp(2*pi*i*tau*x).
  cplx q_pow(double x) const { return std::exp(cplx(0.0, two_pi) * tau * x); }
  cplx q_pow(cplx x) const { return std::exp(cplx(0.0, two_pi) * tau * x); }
};

struct TwistData {
  double alpha;   // in [0,1)
  double beta;    // in [0,1)
  double lambda;  // frac(alpha + 1/2): phi   = exp(2*pi*i*lambda)
  double u;       // frac(1/2 - beta):  theta = exp(2*pi*i*u)

  TwistData(double alpha_, double beta_)
      : alpha(frac1(alpha_)), beta(frac1(beta_)), lambda(frac1(alpha + 0.5)), u(frac1(0.5 - beta)) {}

  cplx theta() const { return std::exp(cplx(0.0, two_pi * u)); }
  cplx phi() const { return std::exp(cplx(0.0, two_pi * lambda)); }
  cplx theta_inv() const { return std::exp(cplx(0.0, -two_pi * u)); }
  cplx phi_inv() const { return std::exp(cplx(0.0, -two_pi * lambda)); }

  // theta^a * phi^b for integer exponents, done on angles (exact mod 1).
  cplx char_pow(long a, long b) const {
    return std::exp(cplx(0.0, two_pi * frac1(static_cast<double>(a) * u + static_cast<double>(b) * lambda)));
  }

  // (theta,phi) = (1,1): the classical/untwisted case.  Exact test on angles.
  bool degenerate() const { return lambda == 0.0 && u == 0.0; }

  // The twist with both characters inverted: (theta,phi) -> (1/theta, 1/phi),
  // i.e. (alpha, beta) -> (-alpha, -beta) mod 1.
  TwistData inverse() const { return TwistData(frac1(-alpha), frac1(-beta)); }
};

}  // namespace g2sew
