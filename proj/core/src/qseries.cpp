#include <g2sew/qseries.hpp>

#include <g2sew/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace g2sew::qseries {

namespace {

constexpr double kSingularTol = 1e-12;

// Laurent expansions need E_j up to this order; bernoulli_number overflows a
// double shortly beyond it.
constexpr int kMaxLaurentOrder = 250;

}  // namespace

double bernoulli_number(int n) {
  if (n < 0)
    throw IndexOutOfRange("bernoulli_number: n must be >= 0, got " + std::to_string(n));
  if (n == 0) return 1.0;
  if (n == 1) return -0.5;
  if (n % 2 == 1) return 0.0;
  static const double table[10] = {
      1.0 / 6.0,      -1.0 / 30.0,      1.0 / 42.0,       -1.0 / 30.0,       5.0 / 66.0,
      -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,  43867.0 / 798.0,   -174611.0 / 330.0};
  if (n <= 20) return table[n / 2 - 1];
  if (n > kMaxLaurentOrder)
    throw NonConvergent("bernoulli_number: B_n exceeds double range for n = " + std::to_string(n));
  // B_n = (-1)^{n/2+1} 2 n!/(2 pi)^n zeta(n); the zeta sum is shorter than
  // machine precision after a handful of terms at n >= 22.
  double zeta = 1.0;
  for (int j = 2; j <= 16; ++j) zeta += std::pow(double(j), -double(n));
  const double mag =
      2.0 * std::exp(std::lgamma(double(n) + 1.0) - double(n) * std::log(two_pi)) * zeta;
  return (n / 2 % 2 == 0) ? -mag : mag;
}

double bernoulli_poly(int n, double lambda) {
  if (n < 0)
    throw IndexOutOfRange("bernoulli_poly: n must be >= 0, got " + std::to_string(n));
  if (lambda == 0.0) return bernoulli_number(n);
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double bk = bernoulli_number(k);
    if (bk == 0.0) continue;
    s += binom(n, k) * bk * std::pow(lambda, double(n - k));
  }
  return s;
}

cplx eisenstein_twisted(int n, const TwistData& tw, const ModularParam& m,
                        const SeriesPolicy& pol) {
  if (n < 1)
    throw IndexOutOfRange("eisenstein_twisted: n must be >= 1, got " + std::to_string(n));
  const double lam = tw.lambda;
  const bool classical = tw.degenerate();
  const cplx th = tw.theta();
  const cplx th_i = tw.theta_inv();
  const cplx log_q = cplx(0.0, two_pi) * m.tau;
  const double lgn = log_factorial(n - 1);

  // Constant term -B_n(lambda)/n!.  n! itself overflows past n = 170, so the
  // quotient goes through logs there; B_n(lambda) stays representable.
  cplx sum;
  {
    const double bp = bernoulli_poly(n, lam);
    double c = 0.0;
    if (bp != 0.0) {
      c = (n <= 170) ? -bp / factorial(n)
                     : -std::copysign(
                           std::exp(std::log(std::abs(bp)) - log_factorial(n)), bp);
    }
    sum = cplx(c, 0.0);
  }

  double peak = std::abs(sum);
  int consec = 0;
  const double sgn_n = (n % 2 == 0) ? 1.0 : -1.0;

  for (int r = 0; r < pol.max_terms; ++r) {
    cplx term(0.0, 0.0);
    {
      // x = r + lambda; the untwisted series omits the r = 0 term.
      const double x = double(r) + lam;
      const bool omit = classical && x == 0.0;
      if (!omit) {
        cplx num;
        if (x == 0.0) {
          // x^{n-1} at x = 0: 1 for n = 1 (empty power), 0 otherwise.
          num = (n == 1) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        } else {
          // x^{n-1} q^x / (n-1)! in one exponential, so large n and large x
          // never overflow individually.
          num = std::exp(cplx(double(n - 1) * std::log(x) - lgn, 0.0) + log_q * x);
        }
        if (num != cplx(0.0, 0.0)) term += num * th_i / (1.0 - th_i * std::exp(log_q * x));
      }
    }
    if (r >= 1) {
      const double x = double(r) - lam;
      const cplx num = std::exp(cplx(double(n - 1) * std::log(x) - lgn, 0.0) + log_q * x);
      // For odd n in the untwisted case this cancels the first sum term by
      // term, exactly in floating point (identical subexpressions).
      term += sgn_n * num * th / (1.0 - th * std::exp(log_q * x));
    }
    sum += term;
    peak = std::max(peak, std::abs(sum));
    if (std::abs(term) <= pol.rel_tol * peak) {
      if (++consec >= 3) return sum;
    } else {
      consec = 0;
    }
  }
  throw NonConvergent("eisenstein_twisted: no convergence after " +
                      std::to_string(pol.max_terms) + " terms (n = " + std::to_string(n) + ")");
}

cplx eisenstein_classical(int n, const ModularParam& m, const SeriesPolicy& pol) {
  return eisenstein_twisted(n, TwistData(0.5, 0.5), m, pol);
}

namespace {

// P_1..P_kmax by the bilateral sum over n in Z + lambda, valid on the open
// strip 0 < x < 1 of z = 2*pi*i*(x*tau + y).  Entry [k-1] holds P_k.
Eigen::VectorXcd strip_sum_batch(int kmax, const TwistData& tw, cplx z, const ModularParam& m,
                                 const SeriesPolicy& pol) {
  const double lam = tw.lambda;
  const bool classical = tw.degenerate();
  const cplx th = tw.theta();
  const cplx th_i = tw.theta_inv();
  const cplx log_q = cplx(0.0, two_pi) * m.tau;

  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(kmax);
  std::vector<double> peak(kmax, 0.0);
  std::vector<int> consec(kmax, 0);
  int done = 0;

  for (int r = 0; r < pol.max_terms && done < kmax; ++r) {
    // n = r + lambda >= 0 (the untwisted series omits n = 0 entirely).
    const double npos = double(r) + lam;
    const bool have_pos = !(classical && npos == 0.0);
    cplx cpos(0.0, 0.0);
    if (have_pos) cpos = std::exp(npos * z) / (1.0 - th_i * std::exp(log_q * npos));

    // n = lambda - r < 0, rewritten so every exponential decays on the strip:
    //   q_z^n / (1 - theta^{-1} q^n) = -theta exp(|n|(log q - z)) / (1 - theta q^{|n|}).
    const bool have_neg = r >= 1;
    cplx cneg(0.0, 0.0);
    const double nneg = lam - double(r);
    if (have_neg) {
      const double a = double(r) - lam;
      cneg = -th * std::exp(a * (log_q - z)) / (1.0 - th * std::exp(log_q * a));
    }

    double fpos = 1.0;  // n^{k-1}/(k-1)! built up incrementally over k
    double fneg = 1.0;
    double sgn = -1.0;  // (-1)^k
    for (int k = 1; k <= kmax; ++k) {
      cplx term(0.0, 0.0);
      if (have_pos) term += fpos * cpos;
      if (have_neg) term += fneg * cneg;
      term *= sgn;
      sum[k - 1] += term;
      const double asum = std::abs(sum[k - 1]);
      if (asum > peak[k - 1]) peak[k - 1] = asum;
      if (consec[k - 1] < 3) {
        if (std::abs(term) <= pol.rel_tol * peak[k - 1]) {
          if (++consec[k - 1] == 3) ++done;
        } else {
          consec[k - 1] = 0;
        }
      }
      fpos *= npos / double(k);
      fneg *= nneg / double(k);
      sgn = -sgn;
    }
  }
  if (done < kmax)
    throw NonConvergent("weierstrass strip sum: no convergence after " +
                        std::to_string(pol.max_terms) + " terms");
  return sum;
}

// sum_{j>=k} binom(j-1,k-1) E_j z^{j-k} times (-1)^k, for k = 1..kmax; this is
// P_k(z) - z^{-k}, convergent for |z| below the minimal lattice distance.
Eigen::VectorXcd laurent_tail_batch(int kmax, const TwistData& tw, cplx z,
                                    const ModularParam& m, const SeriesPolicy& pol) {
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(kmax);
  std::vector<double> peak(kmax, 0.0);
  std::vector<int> consec(kmax, 0);
  int done = 0;

  std::vector<cplx> zpow;
  zpow.reserve(kMaxLaurentOrder + 1);
  zpow.push_back(cplx(1.0, 0.0));

  for (int j = 1; j <= kMaxLaurentOrder && done < kmax; ++j) {
    zpow.push_back(zpow.back() * z);
    const cplx ej = eisenstein_twisted(j, tw, m, pol);
    const int ktop = std::min(j, kmax);
    for (int k = 1; k <= ktop; ++k) {
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      const cplx term = sgn * binom(j - 1, k - 1) * ej * zpow[j - k];
      sum[k - 1] += term;
      const double asum = std::abs(sum[k - 1]);
      if (asum > peak[k - 1]) peak[k - 1] = asum;
      if (consec[k - 1] < 3) {
        if (std::abs(term) <= pol.rel_tol * peak[k - 1]) {
          if (++consec[k - 1] == 3) ++done;
        } else {
          consec[k - 1] = 0;
        }
      }
    }
  }
  if (done < kmax)
    throw NonConvergent(
        "weierstrass Laurent tail: argument too close to the convergence radius");
  return sum;
}

}  // namespace

cplx weierstrass_twisted(int k, const TwistData& tw, cplx z, const ModularParam& m,
                         const SeriesPolicy& pol) {
  if (k < 1)
    throw IndexOutOfRange("weierstrass_twisted: k must be >= 1, got " + std::to_string(k));
  const LatticeCoords c = lattice_coords(z, m);
  if (!(c.x > 0.0 && c.x < 1.0))
    throw OutOfStrip("weierstrass_twisted: need |q| < |exp(z)| < 1, lattice x-coordinate was " +
                     std::to_string(c.x));
  return strip_sum_batch(k, tw, z, m, pol)[k - 1];
}

Eigen::VectorXcd weierstrass_continued_batch(int kmax, const TwistData& tw, cplx z,
                                             const ModularParam& m, const SeriesPolicy& pol) {
  if (kmax < 1)
    throw IndexOutOfRange("weierstrass_continued_batch: kmax must be >= 1, got " +
                          std::to_string(kmax));

  // Reduce z by lattice shifts: P_k(z) = theta^a phi^b P_k(z - 2*pi*i*(a*tau + b)).
  const LatticeCoords c = lattice_coords(z, m);
  const long a = long(std::floor(c.x));
  const long b = long(std::floor(c.y + 0.5));
  const cplx zr = z - cplx(0.0, two_pi) * (double(a) * m.tau + double(b));
  if (lattice_distance(zr, m) < kSingularTol)
    throw SingularPoint("weierstrass: argument within 1e-12 of a lattice point");

  // Strip-sum cost: the tail decays like exp(-2 pi delta Im tau) with delta
  // the distance of the reduced x-coordinate from the strip boundary.
  const LatticeCoords cr = lattice_coords(zr, m);
  const double delta = std::min(std::max(cr.x, 0.0), std::max(1.0 - cr.x, 0.0));
  const double inf = std::numeric_limits<double>::infinity();
  const double cost_strict =
      (cr.x > 0.0 && cr.x < 1.0) ? 30.0 / (two_pi * delta * m.tau.imag()) : inf;

  // Laurent candidate: the neighbor shift minimizing |z|; its tail decays
  // like (|z|/D)^j with D the minimal lattice distance.  The 8x weights the
  // Eisenstein evaluation each Laurent term costs.
  const double dmin = min_lattice_distance(m);
  cplx zl = zr;
  long da_best = 0, db_best = 0;
  for (long da = -1; da <= 1; ++da) {
    for (long db = -1; db <= 1; ++db) {
      const cplx cand = zr - cplx(0.0, two_pi) * (double(da) * m.tau + double(db));
      if (std::abs(cand) < std::abs(zl)) {
        zl = cand;
        da_best = da;
        db_best = db;
      }
    }
  }
  const double ratio = std::abs(zl) / dmin;
  const double cost_laurent = (ratio < 0.88) ? 8.0 * 30.0 / (-std::log(ratio)) : inf;

  if (!std::isfinite(cost_strict) && !std::isfinite(cost_laurent))
    throw NonConvergent("weierstrass: argument out of reach of both the strip sum and the "
                        "Laurent expansion");

  const bool strict_first = cost_strict <= cost_laurent;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const bool use_strict = (attempt == 0) ? strict_first : !strict_first;
    if (!std::isfinite(use_strict ? cost_strict : cost_laurent)) continue;
    try {
      if (use_strict) return tw.char_pow(a, b) * strip_sum_batch(kmax, tw, zr, m, pol);
      Eigen::VectorXcd val = laurent_tail_batch(kmax, tw, zl, m, pol);
      const cplx invz = cplx(1.0, 0.0) / zl;
      cplx ipow(1.0, 0.0);
      for (int k = 1; k <= kmax; ++k) {
        ipow *= invz;
        val[k - 1] += ipow;
      }
      return tw.char_pow(a + da_best, b + db_best) * val;
    } catch (const NonConvergent&) {
      if (attempt == 1) throw;
    }
  }
  throw NonConvergent("weierstrass: no evaluation method converged");
}

cplx weierstrass_continued(int k, const TwistData& tw, cplx z, const ModularParam& m,
                           const SeriesPolicy& pol) {
  return weierstrass_continued_batch(k, tw, z, m, pol)[k - 1];
}

cplx weierstrass_minus_pole(int k, const TwistData& tw, cplx z, const ModularParam& m,
                            const SeriesPolicy& pol) {
  if (k < 1)
    throw IndexOutOfRange("weierstrass_minus_pole: k must be >= 1, got " + std::to_string(k));
  if (std::abs(z) >= min_lattice_distance(m))
    throw DomainViolation("weierstrass_minus_pole: |z| must lie below the minimal lattice "
                          "distance");
  return laurent_tail_batch(k, tw, z, m, pol)[k - 1];
}

cplx theta_char(int g, const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                const Eigen::VectorXcd& z, const Eigen::MatrixXcd& Omega,
                const SeriesPolicy& pol) {
  if (g != 1 && g != 2)
    throw IndexOutOfRange("theta_char: only genus 1 and 2 supported, got " + std::to_string(g));
  if (alpha.size() != g || beta.size() != g || z.size() != g || Omega.rows() != g ||
      Omega.cols() != g)
    throw IndexOutOfRange("theta_char: characteristic/argument dimensions must equal the genus");
  if (g == 1) {
    if (Omega(0, 0).imag() <= 0.0)
      throw DomainViolation("theta_char: Im(Omega) must be positive definite");
  } else {
    const double a = Omega(0, 0).imag();
    const double d = Omega(1, 1).imag();
    const double o = 0.5 * (Omega(0, 1) + Omega(1, 0)).imag();
    if (a <= 0.0 || a * d - o * o <= 0.0)
      throw DomainViolation("theta_char: Im(Omega) must be positive definite");
  }

  const cplx ipi(0.0, pi);
  const cplx i2pi(0.0, two_pi);
  const auto term = [&](long n1, long n2) -> cplx {
    const double v0 = double(n1) + alpha(0);
    cplx e = ipi * (v0 * v0 * Omega(0, 0)) + v0 * (z(0) + i2pi * beta(0));
    if (g == 2) {
      const double v1 = double(n2) + alpha(1);
      e += ipi * (v1 * v1 * Omega(1, 1) + v0 * v1 * (Omega(0, 1) + Omega(1, 0))) +
           v1 * (z(1) + i2pi * beta(1));
    }
    return std::exp(e);
  };

  cplx total(0.0, 0.0);
  double peak = 0.0;
  int ok = 0;
  for (long R = 0; R <= 64; ++R) {
    cplx shell(0.0, 0.0);
    if (g == 1) {
      shell = (R == 0) ? term(0, 0) : term(R, 0) + term(-R, 0);
    } else {
      for (long n1 = -R; n1 <= R; ++n1) {
        for (long n2 = -R; n2 <= R; ++n2) {
          if (std::max(std::labs(n1), std::labs(n2)) == R) shell += term(n1, n2);
        }
      }
    }
    total += shell;
    peak = std::max(peak, std::abs(total));
    if (R >= 1 && std::abs(shell) <= pol.rel_tol * peak) {
      if (++ok >= 2) return total;
    } else {
      ok = 0;
    }
  }
  throw NonConvergent("theta_char: no convergence within 64 index shells");
}

cplx dedekind_eta(const ModularParam& m, const SeriesPolicy& pol) {
  cplx prod(1.0, 0.0);
  const double absq = std::abs(m.q);
  for (int n = 1; n < pol.max_terms; ++n) {
    const cplx qn = m.q_pow(double(n));
    prod *= (1.0 - qn);
    if (std::abs(qn) <= pol.rel_tol * (1.0 - absq)) return m.q_pow(1.0 / 24.0) * prod;
  }
  throw NonConvergent("dedekind_eta: no convergence after " + std::to_string(pol.max_terms) +
                      " factors");
}

namespace {

// d/dz theta[1/2,1/2](z, tau) at z = 0; the n and -n-1 terms pair up to
// 2i (n+1/2) (-1)^n exp(i pi (n+1/2)^2 tau).
cplx theta_half_deriv0(const ModularParam& m, const SeriesPolicy& pol) {
  cplx total(0.0, 0.0);
  double peak = 0.0;
  int ok = 0;
  for (int r = 0; r <= 64; ++r) {
    const double v = double(r) + 0.5;
    const double sgn = (r % 2 == 0) ? 1.0 : -1.0;
    const cplx shell = cplx(0.0, 2.0 * v * sgn) * std::exp(cplx(0.0, pi) * (v * v * m.tau));
    total += shell;
    peak = std::max(peak, std::abs(total));
    if (r >= 1 && std::abs(shell) <= pol.rel_tol * peak) {
      if (++ok >= 2) return total;
    } else {
      ok = 0;
    }
  }
  throw NonConvergent("theta derivative: no convergence within 64 terms");
}

}  // namespace

cplx k1_prime(cplx z, const ModularParam& m, const SeriesPolicy& pol) {
  if (lattice_distance(z, m) < kSingularTol)
    throw SingularPoint("k1_prime: argument within 1e-12 of a lattice point");
  Eigen::VectorXd half(1);
  half(0) = 0.5;
  Eigen::VectorXcd zz(1);
  zz(0) = z;
  Eigen::MatrixXcd om(1, 1);
  om(0, 0) = m.tau;
  return theta_char(1, half, half, zz, om, pol) / theta_half_deriv0(m, pol);
}

LatticeCoords lattice_coords(cplx z, const ModularParam& m) {
  const cplx w = z / cplx(0.0, two_pi);
  const double x = w.imag() / m.tau.imag();
  return {x, w.real() - x * m.tau.real()};
}

double lattice_distance(cplx z, const ModularParam& m) {
  const LatticeCoords c = lattice_coords(z, m);
  const long m0 = std::lround(c.x);
  const long n0 = std::lround(c.y);
  double best = std::numeric_limits<double>::infinity();
  for (long dm = -2; dm <= 2; ++dm) {
    for (long dn = -2; dn <= 2; ++dn) {
      const cplx w = z - cplx(0.0, two_pi) * (double(m0 + dm) * m.tau + double(n0 + dn));
      best = std::min(best, std::abs(w));
    }
  }
  return best;
}

double min_lattice_distance(const ModularParam& m) {
  double best = std::numeric_limits<double>::infinity();
  const long mmax = long(std::ceil(1.0 / m.tau.imag())) + 1;
  for (long mm = -mmax; mm <= mmax; ++mm) {
    const long nmax = long(std::ceil(std::abs(double(mm) * m.tau.real()))) + 2;
    for (long nn = -nmax; nn <= nmax; ++nn) {
      if (mm == 0 && nn == 0) continue;
      best = std::min(best, std::abs(double(mm) * m.tau + double(nn)));
    }
  }
  return two_pi * best;
}

}  // namespace g2sew::qseries
