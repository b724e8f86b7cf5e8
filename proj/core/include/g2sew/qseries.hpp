#pragma once
// Special functions on the torus, twisted by a character pair (theta, phi).
//
// Definitions implemented here (q = exp(2*pi*i*tau), q_z = exp(z)):
//
//  Bernoulli polynomials B_n(x), normalized by the generating function
//       q_z^x / (q_z - 1) = 1/z + sum_{n>=1} B_n(x)/n! z^{n-1},
//  so B_1(x) = x - 1/2 (plain Bernoulli numbers have B_1 = -1/2).
//
//  Twisted Eisenstein series (n >= 1):
//       E_n[theta,phi](tau) = -B_n(lambda)/n!
//          + 1/(n-1)! sum_{r>=0}' (r+lambda)^{n-1} theta^{-1} q^{r+lambda} / (1 - theta^{-1} q^{r+lambda})
//          + (-1)^n/(n-1)! sum_{r>=1} (r-lambda)^{n-1} theta q^{r-lambda} / (1 - theta q^{r-lambda}),
//  where phi = exp(2*pi*i*lambda), lambda in [0,1), and the primed sum omits
//  r = 0 exactly when (theta,phi) = (1,1) (the classical case).
//
//  Twisted Weierstrass functions (k >= 1):
//       P_k[theta,phi](z,tau) = (-1)^k/(k-1)! sum'_{n in Z+lambda} n^{k-1} q_z^n / (1 - theta^{-1} q^n),
//  absolutely convergent on the strip |q| < |q_z| < 1, i.e. lattice
//  x-coordinate of z strictly between 0 and 1 when z = 2*pi*i*(x*tau + y).
//  Quasi-periodicity: P_k(z + 2*pi*i*tau) = theta P_k(z) and
//  P_k(z + 2*pi*i) = phi P_k(z), which weierstrass_continued uses to reduce
//  arbitrary arguments into the strip; near the strip boundary it switches to
//  the Laurent expansion about z = 0,
//       P_k(z) = z^{-k} + (-1)^k sum_{j>=k} binom(j-1,k-1) E_j[theta,phi] z^{j-k},
//  valid for |z| below the minimal lattice distance.
//
//  Theta function with real characteristics (column vectors of length g):
//       theta[alpha,beta](z|Omega) = sum_{n in Z^g} exp( i*pi (n+alpha).Omega(n+alpha)
//                                                        + (n+alpha).(z + 2*pi*i*beta) ).
//
//  Dedekind eta:  eta(tau) = q^{1/24} prod_{n>=1} (1 - q^n).
//
//  Prime-form factor:  K(z,tau) = theta[1/2,1/2](z,tau) / d/dz theta[1/2,1/2](0,tau),
//  odd in z with K ~ z near 0.

#include <g2sew/types.hpp>

#include <Eigen/Dense>

namespace g2sew::qseries {

// Bernoulli number B_n (B_1 = -1/2).  Exact rationals through n = 20, the
// zeta-function closed form for even n beyond; supported to n = 250.
double bernoulli_number(int n);

// Bernoulli polynomial B_n(lambda) for n >= 1.
double bernoulli_poly(int n, double lambda);

cplx eisenstein_twisted(int n, const TwistData& tw, const ModularParam& m,
                        const SeriesPolicy& pol = {});

// E_n[1,1]: eisenstein_twisted at the degenerate twist (primed-sum rule).
cplx eisenstein_classical(int n, const ModularParam& m, const SeriesPolicy& pol = {});

// Strict bilateral sum; throws OutOfStrip unless |q| < |exp(z)| < 1.
cplx weierstrass_twisted(int k, const TwistData& tw, cplx z, const ModularParam& m,
                         const SeriesPolicy& pol = {});

// P_k at arbitrary z not on the lattice: reduces z by lattice shifts (picking
// up theta^a phi^b) into the strip, or falls back to the Laurent expansion
// when the reduced point is too close to the strip boundary for the bilateral
// sum.  Throws SingularPoint within 1e-12 of a lattice point.
cplx weierstrass_continued(int k, const TwistData& tw, cplx z, const ModularParam& m,
                           const SeriesPolicy& pol = {});

// P_1..P_kmax at a common argument, sharing the reduction and series scans.
// Entry [k-1] holds P_k.
Eigen::VectorXcd weierstrass_continued_batch(int kmax, const TwistData& tw, cplx z,
                                             const ModularParam& m,
                                             const SeriesPolicy& pol = {});

// P_k(z) - z^{-k}, by the Laurent expansion; requires |z| below the minimal
// lattice distance.  Finite (and cancellation-free) as z -> 0.
cplx weierstrass_minus_pole(int k, const TwistData& tw, cplx z, const ModularParam& m,
                            const SeriesPolicy& pol = {});

// Genus 1 or 2 theta with characteristics; alpha, beta, z have length g and
// Omega is g x g (symmetric, positive-definite imaginary part).  Summed over
// sup-norm shells until the boundary shell is negligible twice in a row.
cplx theta_char(int g, const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                const Eigen::VectorXcd& z, const Eigen::MatrixXcd& Omega,
                const SeriesPolicy& pol = {});

cplx dedekind_eta(const ModularParam& m, const SeriesPolicy& pol = {});

// theta[1/2,1/2](z)/theta'[1/2,1/2](0); SingularPoint within 1e-12 of the
// lattice 2*pi*i*(Z tau + Z).
cplx k1_prime(cplx z, const ModularParam& m, const SeriesPolicy& pol = {});

// Coordinates (x, y) of z = 2*pi*i*(x*tau + y), and the distance from z to
// the nearest point of the lattice 2*pi*i*(Z tau + Z).
struct LatticeCoords {
  double x;
  double y;
};
LatticeCoords lattice_coords(cplx z, const ModularParam& m);
double lattice_distance(cplx z, const ModularParam& m);

// 2*pi times the length of a shortest nonzero vector of Z tau + Z; the
// common convergence radius of the Laurent expansions above.
double min_lattice_distance(const ModularParam& m);

}  // namespace g2sew::qseries
