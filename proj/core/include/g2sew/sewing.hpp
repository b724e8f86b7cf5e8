#pragma once
// Two-tori sewing: the parameter record, sewing-domain geometry, the sewn
// moment matrix, and the genus-two Szego kernel.
//
// Two tori C/Lambda_a, Lambda_a = 2*pi*i*(Z tau_a + Z), are glued by excising
// a disk around a puncture on each and identifying annular neighborhoods via
// z1 z2 = eps.  Writing D(q_a) = 2*pi min_{(m,n) != (0,0)} |m tau_a + n| for
// the minimal lattice distance, the annulus radii satisfy 0 < r_a < D(q_a)/2,
// a point z on torus a survives the excision iff |z| >= |eps|/r_{a'} (a' the
// other torus), and the sewing parameter satisfies |eps| <= r_1 r_2, inside
// the domain |eps| < D(q_1) D(q_2) / 4.
//
// Half-integer powers of eps appear throughout.  Every occurrence is an
// integer power of eps_half = principal sqrt(eps), times at most one factor
// eps_quarter = principal sqrt(eps_half) per half-form; both roots are fixed
// here once so all modules land on the same sheet.

#include <g2sew/qseries.hpp>
#include <g2sew/types.hpp>

#include <Eigen/Dense>

namespace g2sew::sewing {

using qseries::min_lattice_distance;

// A point on one of the two sewn tori; torus is 1 or 2.
struct SurfacePoint {
  cplx z;
  int torus;
};

struct SewingConfig {
  ModularParam t1;
  ModularParam t2;
  cplx eps;
  cplx xi;  // +i or -i, the fixed square root of -1 in the cross-kernel
  double r1;
  double r2;
  int M;  // truncation order of the moment matrices
  SeriesPolicy pol;

  // derived, cached at construction
  cplx eps_half;     // principal sqrt(eps)
  cplx eps_quarter;  // principal sqrt(eps_half)
  double d1;         // D(q_1)
  double d2;         // D(q_2)

  // Annulus radii default to 0.49 D(q_a).
  static SewingConfig make(cplx tau1, cplx tau2, cplx eps, cplx xi, int M = 16,
                           SeriesPolicy pol = {});
  static SewingConfig make(cplx tau1, cplx tau2, cplx eps, cplx xi, double r1, double r2,
                           int M = 16, SeriesPolicy pol = {});

  const ModularParam& torus(int a) const;
  double r(int a) const;

  // Validated point on a torus: throws DomainViolation inside the excised
  // disk |z| < |eps| / r_{other}.
  SurfacePoint point(cplx z, int torus) const;
};

// |eps| < D(q_1) D(q_2) / 4.
bool in_domain(const SewingConfig& cfg);

// The 2M x 2M sewn moment matrix  Q = [[0, xi F_1], [-xi F_2, 0]]  built from
// the twisted moment blocks F_a; tw1, tw2 must be nondegenerate.
Eigen::MatrixXcd build_q(const SewingConfig& cfg, const TwistData& tw1, const TwistData& tw2);

// det(I - Q) by a full pivoted LU of the 2M x 2M matrix.  Independent of the
// choice of xi, and equal to det(I - F_1 F_2) (see det_i_minus_f1f2): the two
// off-diagonal blocks enter only through their product.
cplx det_i_minus_q(const SewingConfig& cfg, const TwistData& tw1, const TwistData& tw2);

// det(I - F_1 F_2) on the reduced M x M matrix.
cplx det_i_minus_f1f2(const SewingConfig& cfg, const TwistData& tw1, const TwistData& tw2);

// Genus-one Szego kernel P_1[theta,phi](x - y, tau); SingularPoint when x - y
// hits the lattice.  The twist must be nondegenerate.
cplx szego_g1(cplx x, cplx y, const TwistData& tw, const ModularParam& m,
              const SeriesPolicy& pol = {});

// Genus-two Szego kernel on the sewn surface:
//   x, y on the same torus a:
//     S(x,y) = P_1[t_a](x - y, tau_a) + h_a(x)^T (I - F_a' F_a)^{-1} F_a' hbar_a(y)
//   x on torus 1, y on torus 2:   S(x,y) = +xi h_1(x)^T (I - F_2 F_1)^{-1} hbar_2(y)
//   x on torus 2, y on torus 1:   S(x,y) = -xi h_2(x)^T (I - F_1 F_2)^{-1} hbar_1(y)
// with a' the other torus and h, hbar the half-form moment vectors.
cplx szego_g2(const SurfacePoint& x, const SurfacePoint& y, const SewingConfig& cfg,
              const TwistData& tw1, const TwistData& tw2);

// Same-torus kernel with its simple pole removed:
//   S(x,y) - 1/(x - y)
// evaluated without cancellation by replacing P_1 with its pole-subtracted
// Laurent part.  Requires x, y on the same torus with |x - y| inside the
// Laurent disk; finite at x == y.
cplx szego_g2_minus_pole(const SurfacePoint& x, const SurfacePoint& y, const SewingConfig& cfg,
                         const TwistData& tw1, const TwistData& tw2);

}  // namespace g2sew::sewing
