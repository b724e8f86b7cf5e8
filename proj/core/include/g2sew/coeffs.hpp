#pragma once
// Taylor coefficients of the genus-one kernels and the sewn moment blocks.
//
// The scalar coefficients are the two-variable expansions
//
//   P_1(x - y, tau) - 1/(x - y) = sum_{k,l >= 1} C(k,l,tau) x^{k-1} y^{l-1}
//   P_1(z + x - y, tau)         = sum_{k,l >= 1} D(k,l,tau,z) x^{k-1} y^{l-1}
//
// whose closed forms are
//
//   C(k,l) = (-1)^l    binom(k+l-2, k-1) E_{k+l-1}[theta,phi](tau)
//   D(k,l) = (-1)^{k+1} binom(k+l-2, k-1) P_{k+l-1}[theta,phi](z,tau).
//
// The sewing blocks weight these with half-integer powers of eps (all taken
// through the fixed roots cached on SewingConfig):
//
//   F_a(k,l)    = eps^{(k+l-1)/2} C[t_a](k,l,tau_a)
//   A_a(k,l)    = eps^{(k+l)/2} (-1)^{k+1} (k+l-1)! / (sqrt(kl) (k-1)! (l-1)!) E_{k+l}(tau_a)
//   h_a(k,x)    = eps^{1/4} eps^{(k-1)/2} P_k[t_a](x, tau_a)
//   hbar_a(k,y) = eps^{1/4} eps^{(k-1)/2} (-1)^{k+1} P_k[t_a](-y, tau_a)
//
// with the A block built on the untwisted Eisenstein series.  Indices are
// 1-based throughout, matching the mode labels they multiply.

#include <g2sew/sewing.hpp>
#include <g2sew/types.hpp>

#include <Eigen/Dense>

namespace g2sew::coeffs {

// M x M block with 1-based, bounds-checked access; dense(k-1, l-1) = at(k,l).
struct TruncatedMatrix {
  int M;
  Eigen::MatrixXcd dense;

  cplx at(int k, int l) const {
    if (k < 1 || k > M || l < 1 || l > M)
      throw IndexOutOfRange("TruncatedMatrix: index (" + std::to_string(k) + ", " +
                            std::to_string(l) + ") outside 1.." + std::to_string(M));
    return dense(k - 1, l - 1);
  }
};

// Length-M half-form moment vector attached to a point on one torus.
struct HalfFormVector {
  int M;
  Eigen::VectorXcd entries;
  cplx x;     // the point the vector was built at
  int torus;  // 1 or 2

  cplx at(int k) const {
    if (k < 1 || k > M)
      throw IndexOutOfRange("HalfFormVector: index " + std::to_string(k) + " outside 1.." +
                            std::to_string(M));
    return entries(k - 1);
  }
};

cplx c_coeff(int k, int l, const TwistData& tw, const ModularParam& m,
             const SeriesPolicy& pol = {});

cplx d_coeff(int k, int l, cplx z, const TwistData& tw, const ModularParam& m,
             const SeriesPolicy& pol = {});

// Twisted moment block F_a of cfg (a = 1 or 2) at the given twist.
TruncatedMatrix f_matrix(int a, const sewing::SewingConfig& cfg, const TwistData& tw);

// Untwisted moment block A_a of cfg (a = 1 or 2).
TruncatedMatrix a_matrix(int a, const sewing::SewingConfig& cfg);

// Half-form vectors at a point x (resp. y) on torus a; both throw
// DomainViolation inside the excised disk |.| < |eps| / r_{other}.
HalfFormVector h_vector(int a, cplx x, const sewing::SewingConfig& cfg, const TwistData& tw);
HalfFormVector hbar_vector(int a, cplx y, const sewing::SewingConfig& cfg, const TwistData& tw);

}  // namespace g2sew::coeffs
