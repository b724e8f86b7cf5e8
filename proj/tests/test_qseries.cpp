#include <doctest.h>

#include <g2sew/numeric.hpp>
#include <g2sew/qseries.hpp>

#include "test_util.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace g2sew;
using namespace g2sew::qseries;

namespace {

const ModularParam kTauI(cplx(0.0, 1.0));
const ModularParam kTauGen(cplx(0.3, 0.9));
const ModularParam kTauDeep(cplx(0.0, 20.0));

// A garden-variety nondegenerate twist: lambda = 0.37, u = 0.25.
const TwistData kTw(0.87, 0.25);

// Build a TwistData from its exponent pair (u, lambda):
// theta = exp(2 pi i u), phi = exp(2 pi i lambda).
TwistData twist_from_angles(double u, double lambda) {
  return TwistData(frac1(lambda - 0.5), frac1(0.5 - u));
}

}  // namespace

TEST_SUITE("qseries") {

TEST_CASE("Bernoulli numbers: small exact values and the zeta closed form") {
  CHECK(bernoulli_number(0) == 1.0);
  CHECK(bernoulli_number(1) == -0.5);
  CHECK(bernoulli_number(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(bernoulli_number(7) == 0.0);
  CHECK(bernoulli_number(12) == doctest::Approx(-691.0 / 2730.0).epsilon(1e-15));
  CHECK(bernoulli_number(20) == doctest::Approx(-174611.0 / 330.0).epsilon(1e-15));
  // First two values beyond the table, against their exact rationals.
  CHECK(bernoulli_number(22) == doctest::Approx(854513.0 / 138.0).epsilon(1e-13));
  CHECK(bernoulli_number(30) ==
        doctest::Approx(8615841276005.0 / 14322.0).epsilon(1e-13));
  CHECK(std::isfinite(bernoulli_number(250)));
  CHECK_THROWS_AS((void)bernoulli_number(-1), IndexOutOfRange);
  CHECK_THROWS_AS((void)bernoulli_number(252), NonConvergent);
}

TEST_CASE("Bernoulli polynomials: low degrees, endpoint, and reflection") {
  CHECK(bernoulli_poly(1, 0.3) == doctest::Approx(0.3 - 0.5).epsilon(1e-15));
  // B_2(x) = x^2 - x + 1/6.
  CHECK(bernoulli_poly(2, 0.3) ==
        doctest::Approx(0.09 - 0.3 + 1.0 / 6.0).epsilon(1e-13));
  for (int n = 1; n <= 8; ++n) {
    CHECK(bernoulli_poly(n, 0.0) == bernoulli_number(n));
    // B_n(1 - x) = (-1)^n B_n(x).
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    CHECK(bernoulli_poly(n, 0.63) ==
          doctest::Approx(sgn * bernoulli_poly(n, 0.37)).epsilon(1e-12));
  }
}

TEST_CASE("Eisenstein: untwisted odd series vanish and E_1, E_2 match closed forms") {
  // E_1[1,1] = 1/2 exactly: the constant term survives and the two tail sums
  // cancel term by term.
  CHECK(eisenstein_classical(1, kTauGen) == cplx(0.5, 0.0));
  CHECK(eisenstein_classical(3, kTauGen) == cplx(0.0, 0.0));
  CHECK(eisenstein_classical(5, kTauI) == cplx(0.0, 0.0));

  // E_2[1,1] = -1/12 + 2 sum_{n>=1} sigma_1(n) q^n, via a direct Lambert sum.
  for (const ModularParam& m : {kTauI, kTauGen}) {
    cplx ref(-1.0 / 12.0, 0.0);
    for (int r = 1; r <= 60; ++r) {
      const cplx qr = m.q_pow(double(r));
      ref += 2.0 * double(r) * qr / (1.0 - qr);
    }
    CHECK(rel_err(eisenstein_classical(2, m), ref) < 1e-13);
  }
}

TEST_CASE("Eisenstein: q -> 0 limit is -B_n(lambda)/n!") {
  // At tau = 20i every q-power is below 1e-16 for these twists, so the series
  // collapses to its constant term.
  std::mt19937 rng(20260819);
  for (int trial = 0; trial < 6; ++trial) {
    const double lam = udraw(rng, 0.3, 0.7);
    const double u = udraw(rng, 0.1, 0.9);
    const TwistData tw = twist_from_angles(u, lam);
    for (int n = 1; n <= 8; ++n) {
      const cplx ref(-bernoulli_poly(n, tw.lambda) / factorial(n), 0.0);
      CHECK(abs_err(eisenstein_twisted(n, tw, kTauDeep), ref) < 1e-10);
    }
  }
}

TEST_CASE("Eisenstein: inverting the twist flips the sign of odd orders") {
  // E_n[theta^{-1}, phi^{-1}] = (-1)^n E_n[theta, phi].
  const TwistData inv = kTw.inverse();
  for (int n = 1; n <= 6; ++n) {
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    CHECK(rel_err(eisenstein_twisted(n, inv, kTauGen),
                  sgn * eisenstein_twisted(n, kTw, kTauGen)) < 1e-12);
  }
}

TEST_CASE("Eisenstein: weight-k covariance under tau -> -1/tau") {
  // E_k[theta^a phi^b, theta^c phi^d]((a tau + b)/(c tau + d))
  //   = (c tau + d)^k E_k[theta, phi](tau), here for (a,b;c,d) = (0,-1;1,0):
  // the image twist has exponents u' = -lambda, lambda' = u.
  const TwistData tw = kTw;
  const TwistData tw_s = twist_from_angles(frac1(-tw.lambda), tw.u);
  const ModularParam m = kTauGen;
  const ModularParam m_s(-1.0 / m.tau);
  for (int k = 1; k <= 4; ++k) {
    const cplx lhs = eisenstein_twisted(k, tw_s, m_s);
    const cplx rhs = std::pow(m.tau, double(k)) * eisenstein_twisted(k, tw, m);
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("Weierstrass: strip sum minus the pole matches the Laurent expansion") {
  // Two independent series for the same function: the bilateral strip sum and
  // the Eisenstein Laurent expansion about z = 0.
  const ModularParam m = kTauGen;
  const cplx z = cplx(0.0, two_pi) * (0.5 * m.tau + 0.13);
  REQUIRE(std::abs(z) < min_lattice_distance(m));
  for (int k = 1; k <= 4; ++k) {
    const cplx strict = weierstrass_twisted(k, kTw, z, m);
    const cplx pole = std::pow(z, double(-k));
    const cplx tail = weierstrass_minus_pole(k, kTw, z, m);
    CHECK(rel_err(strict - pole, tail) < 1e-9);
  }
}

TEST_CASE("Weierstrass: quasi-periodicity under both lattice shifts") {
  // P_k(z + 2 pi i tau) = theta P_k(z) and P_k(z + 2 pi i) = phi P_k(z).
  const ModularParam m = kTauGen;
  const cplx z = cplx(0.0, two_pi) * (0.41 * m.tau - 0.27);
  for (int k = 1; k <= 3; ++k) {
    const cplx base = weierstrass_continued(k, kTw, z, m);
    const cplx up = weierstrass_continued(k, kTw, z + cplx(0.0, two_pi) * m.tau, m);
    const cplx across = weierstrass_continued(k, kTw, z + cplx(0.0, two_pi), m);
    CHECK(rel_err(up, kTw.theta() * base) < 1e-11);
    CHECK(rel_err(across, kTw.phi() * base) < 1e-11);
  }
}

TEST_CASE("Weierstrass: inverted twist relates to the reflected argument") {
  // P_k[theta^{-1},phi^{-1}](z) = (-1)^k P_k[theta,phi](-z); the sign is fixed
  // by matching the z^{-k} pole and by E_n[theta^{-1},phi^{-1}] = (-1)^n E_n
  // applied to the Laurent tail term by term.
  const ModularParam m = kTauGen;
  const cplx z = cplx(0.0, two_pi) * (0.35 * m.tau + 0.21);
  for (int k = 1; k <= 3; ++k) {
    const cplx lhs = weierstrass_continued(k, kTw.inverse(), z, m);
    const cplx rhs = std::pow(-1.0, double(k)) * weierstrass_continued(k, kTw, -z, m);
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("Weierstrass: d/dz P_k = -k P_{k+1}") {
  const ModularParam m = kTauI;
  const cplx z = cplx(0.0, two_pi) * (0.33 * m.tau + 0.18);
  const double h = 1e-5;
  for (int k = 1; k <= 3; ++k) {
    const cplx dp = (weierstrass_continued(k, kTw, z + h, m) -
                     weierstrass_continued(k, kTw, z - h, m)) /
                    (2.0 * h);
    const cplx ref = -double(k) * weierstrass_continued(k + 1, kTw, z, m);
    CHECK(rel_err(dp, ref) < 1e-6);
  }
}

TEST_CASE("Weierstrass: strict evaluator rejects arguments off the strip") {
  const ModularParam m = kTauI;
  CHECK_THROWS_AS((void)weierstrass_twisted(1, kTw, cplx(0.0, two_pi) * (1.2 * m.tau + 0.1), m),
                  OutOfStrip);
  CHECK_THROWS_AS((void)weierstrass_twisted(2, kTw, cplx(0.0, two_pi) * cplx(0.1, 0.0), m),
                  OutOfStrip);
  // The continued evaluator accepts the same points.
  CHECK(std::isfinite(
      std::abs(weierstrass_continued(1, kTw, cplx(0.0, two_pi) * (1.2 * m.tau + 0.1), m))));
}

TEST_CASE("Weierstrass: lattice points are singular") {
  const ModularParam m = kTauGen;
  const cplx w = cplx(0.0, two_pi) * (m.tau + 1.0);
  CHECK_THROWS_AS((void)weierstrass_continued(1, kTw, w + cplx(1e-14, 0.0), m), SingularPoint);
  CHECK_THROWS_AS((void)weierstrass_continued(2, kTw, cplx(0.0, 0.0), m), SingularPoint);
}

TEST_CASE("Weierstrass: Laurent tail at z = 0 reduces to (-1)^k E_k") {
  for (int k = 1; k <= 5; ++k) {
    const cplx ref = std::pow(-1.0, double(k)) * eisenstein_twisted(k, kTw, kTauGen);
    CHECK(rel_err(weierstrass_minus_pole(k, kTw, cplx(0.0, 0.0), kTauGen), ref) < 1e-13);
    CHECK(rel_err(weierstrass_minus_pole(k, kTw, cplx(1e-9, 1e-9), kTauGen), ref) < 1e-6);
  }
  CHECK_THROWS_AS((void)weierstrass_minus_pole(1, kTw, cplx(0.0, 7.0), kTauI), DomainViolation);
}

TEST_CASE("Weierstrass: P_1 equals the theta-quotient kernel") {
  // P_1[theta,phi](z,tau) = theta[a,b](z,tau) / (theta[a,b](0,tau) K(z,tau))
  // with (a,b) the characteristic angles of the twist.
  for (const ModularParam& m : {kTauI, kTauGen}) {
    Eigen::VectorXd av(1), bv(1);
    av(0) = kTw.alpha;
    bv(0) = kTw.beta;
    Eigen::MatrixXcd om(1, 1);
    om(0, 0) = m.tau;
    Eigen::VectorXcd z0(1);
    z0(0) = cplx(0.0, 0.0);
    const cplx th0 = theta_char(1, av, bv, z0, om);
    for (const cplx zc : {cplx(0.3, 0.2), cplx(-0.4, 0.75), cplx(0.05, -0.6)}) {
      Eigen::VectorXcd zv(1);
      zv(0) = zc;
      const cplx quot = theta_char(1, av, bv, zv, om) / (th0 * k1_prime(zc, m));
      CHECK(rel_err(weierstrass_continued(1, kTw, zc, m), quot) < 1e-9);
    }
  }
}

TEST_CASE("Weierstrass: batched orders agree with single-order calls") {
  const ModularParam m = kTauGen;
  // Mid-strip, where every order converges fast and truncation noise is nil.
  const cplx zmid = cplx(0.0, two_pi) * (0.47 * m.tau + 0.23);
  const Eigen::VectorXcd bmid = weierstrass_continued_batch(6, kTw, zmid, m);
  for (int k = 1; k <= 6; ++k)
    CHECK(rel_err(bmid[k - 1], weierstrass_continued(k, kTw, zmid, m)) < 1e-12);
  // Near the strip edge the batch and single calls stop at different term
  // counts, so they agree only to the (slow) series' own truncation error.
  const cplx zedge = cplx(0.0, two_pi) * (0.02 * m.tau + 0.45);
  const Eigen::VectorXcd bedge = weierstrass_continued_batch(6, kTw, zedge, m);
  for (int k = 1; k <= 6; ++k)
    CHECK(rel_err(bedge[k - 1], weierstrass_continued(k, kTw, zedge, m)) < 2e-8);
}

TEST_CASE("Theta: genus-2 series matches a brute-force double sum") {
  Eigen::VectorXd av(2), bv(2);
  av << 0.3, 0.1;
  bv << 0.7, 0.4;
  Eigen::MatrixXcd om(2, 2);
  om(0, 0) = cplx(0.0, 0.8);
  om(1, 1) = cplx(0.0, 1.1);
  om(0, 1) = om(1, 0) = cplx(0.1, 0.05);
  Eigen::VectorXcd zv(2);
  zv << cplx(0.2, 0.1), cplx(0.0, -0.3);

  cplx ref(0.0, 0.0);
  for (long n1 = -32; n1 <= 32; ++n1) {
    for (long n2 = -32; n2 <= 32; ++n2) {
      const double v0 = double(n1) + av(0), v1 = double(n2) + av(1);
      const cplx quad = v0 * v0 * om(0, 0) + v1 * v1 * om(1, 1) + 2.0 * v0 * v1 * om(0, 1);
      ref += std::exp(cplx(0.0, pi) * quad + v0 * (zv(0) + cplx(0.0, two_pi) * bv(0)) +
                      v1 * (zv(1) + cplx(0.0, two_pi) * bv(1)));
    }
  }
  CHECK(rel_err(theta_char(2, av, bv, zv, om), ref) < 1e-12);
}

TEST_CASE("Theta: genus-1 quasi-periodicity along the tau direction") {
  // theta[a,b](z + 2 pi i tau) = exp(-i pi tau - z - 2 pi i b) theta[a,b](z).
  const ModularParam m = kTauGen;
  Eigen::VectorXd av(1), bv(1);
  av(0) = 0.3;
  bv(0) = 0.62;
  Eigen::MatrixXcd om(1, 1);
  om(0, 0) = m.tau;
  const cplx z(0.23, -0.4);
  Eigen::VectorXcd zv(1), zs(1);
  zv(0) = z;
  zs(0) = z + cplx(0.0, two_pi) * m.tau;
  const cplx lhs = theta_char(1, av, bv, zs, om);
  const cplx rhs = std::exp(cplx(0.0, -pi) * m.tau - z - cplx(0.0, two_pi) * bv(0)) *
                   theta_char(1, av, bv, zv, om);
  CHECK(rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("Theta: input validation") {
  Eigen::VectorXd av(1), bv(1);
  av(0) = 0.5;
  bv(0) = 0.5;
  Eigen::VectorXcd zv(1);
  zv(0) = cplx(0.0, 0.0);
  Eigen::MatrixXcd bad(1, 1);
  bad(0, 0) = cplx(0.5, -0.1);
  CHECK_THROWS_AS((void)theta_char(1, av, bv, zv, bad), DomainViolation);
  Eigen::MatrixXcd om(1, 1);
  om(0, 0) = cplx(0.0, 1.0);
  CHECK_THROWS_AS((void)theta_char(3, av, bv, zv, om), IndexOutOfRange);
  Eigen::VectorXd av2(2);
  av2 << 0.5, 0.5;
  CHECK_THROWS_AS((void)theta_char(1, av2, bv, zv, om), IndexOutOfRange);
}

TEST_CASE("Dedekind eta: value at i and the inversion law") {
  // eta(i) = Gamma(1/4) / (2 pi^{3/4}).
  const double ref = std::tgamma(0.25) / (2.0 * std::pow(pi, 0.75));
  CHECK(rel_err(dedekind_eta(kTauI), cplx(ref, 0.0)) < 1e-12);

  // eta(-1/tau) = sqrt(-i tau) eta(tau).
  const ModularParam m = kTauGen;
  const ModularParam ms(-1.0 / m.tau);
  const cplx lhs = dedekind_eta(ms);
  const cplx rhs = std::sqrt(cplx(0.0, -1.0) * m.tau) * dedekind_eta(m);
  CHECK(rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("Prime form factor: odd, unit slope at the origin, singular on the lattice") {
  const ModularParam m = kTauGen;
  const cplx z(1e-4, 1e-4);
  CHECK(rel_err(k1_prime(z, m) / z, cplx(1.0, 0.0)) < 1e-6);
  const cplx w(0.3, 0.45);
  CHECK(rel_err(k1_prime(-w, m), -k1_prime(w, m)) < 1e-12);
  CHECK_THROWS_AS((void)k1_prime(cplx(0.0, two_pi) * (2.0 * m.tau - 1.0), m), SingularPoint);
}

TEST_CASE("Lattice geometry: minimal distance against a brute-force scan") {
  std::mt19937 rng(77001);
  for (int trial = 0; trial < 12; ++trial) {
    const cplx tau(udraw(rng, -0.8, 0.8), udraw(rng, 0.15, 2.5));
    const ModularParam m(tau);
    double brute = std::numeric_limits<double>::infinity();
    for (long mm = -10; mm <= 10; ++mm)
      for (long nn = -10; nn <= 10; ++nn)
        if (mm != 0 || nn != 0) brute = std::min(brute, std::abs(double(mm) * tau + double(nn)));
    CHECK(min_lattice_distance(m) == doctest::Approx(two_pi * brute).epsilon(1e-13));
  }
  CHECK(min_lattice_distance(kTauI) == doctest::Approx(two_pi).epsilon(1e-14));
}

TEST_CASE("Lattice geometry: coordinates invert the lattice form") {
  const ModularParam m = kTauGen;
  const cplx z(0.37, -1.12);
  const LatticeCoords c = lattice_coords(z, m);
  CHECK(abs_err(cplx(0.0, two_pi) * (c.x * m.tau + c.y), z) < 1e-13);
  CHECK(lattice_distance(cplx(0.0, two_pi) * (3.0 * m.tau - 2.0), m) < 1e-13);
}

}  // TEST_SUITE
