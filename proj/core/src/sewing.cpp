#include <g2sew/sewing.hpp>

#include <g2sew/coeffs.hpp>
#include <g2sew/qseries.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace g2sew::sewing {

namespace {

void require_nondegenerate(const TwistData& tw1, const TwistData& tw2, const char* who) {
  if (tw1.degenerate() || tw2.degenerate())
    throw DegenerateTwist(std::string(who) + ": twists must be nondegenerate ((theta,phi) != (1,1))");
}

// Solve (I - B) s = rhs with a pivoted LU, rejecting numerically singular
// systems.
Eigen::VectorXcd solve_i_minus(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& rhs,
                               const char* who) {
  const int n = int(b.rows());
  const Eigen::MatrixXcd sys = Eigen::MatrixXcd::Identity(n, n) - b;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys);
  const Eigen::VectorXcd u = lu.matrixLU().diagonal();
  double umax = 0.0, umin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    umax = std::max(umax, std::abs(u(i)));
    umin = std::min(umin, std::abs(u(i)));
  }
  if (!(umin > 1e-14 * umax))
    throw LinearSolveFailure(std::string(who) + ": I minus moment-matrix product is numerically singular");
  return lu.solve(rhs);
}

}  // namespace

SewingConfig SewingConfig::make(cplx tau1, cplx tau2, cplx eps, cplx xi, int M,
                                SeriesPolicy pol) {
  const double d1 = min_lattice_distance(ModularParam(tau1));
  const double d2 = min_lattice_distance(ModularParam(tau2));
  return make(tau1, tau2, eps, xi, 0.49 * d1, 0.49 * d2, M, pol);
}

SewingConfig SewingConfig::make(cplx tau1, cplx tau2, cplx eps, cplx xi, double r1, double r2,
                                int M, SeriesPolicy pol) {
  ModularParam m1(tau1), m2(tau2);
  const double d1 = min_lattice_distance(m1);
  const double d2 = min_lattice_distance(m2);
  if (xi != cplx(0.0, 1.0) && xi != cplx(0.0, -1.0))
    throw DomainViolation("SewingConfig: xi must be +i or -i exactly");
  if (M < 1) throw IndexOutOfRange("SewingConfig: truncation order M must be >= 1");
  if (!(r1 > 0.0 && r1 < 0.5 * d1) || !(r2 > 0.0 && r2 < 0.5 * d2))
    throw DomainViolation("SewingConfig: annulus radii must satisfy 0 < r_a < D(q_a)/2");
  if (!(std::abs(eps) <= r1 * r2))
    throw DomainViolation("SewingConfig: |eps| must not exceed r_1 r_2");
  SewingConfig cfg{m1,        m2,  eps, xi, r1, r2, M, pol,
                   std::sqrt(eps), cplx(0.0, 0.0), d1, d2};
  cfg.eps_quarter = std::sqrt(cfg.eps_half);
  return cfg;
}

const ModularParam& SewingConfig::torus(int a) const {
  if (a == 1) return t1;
  if (a == 2) return t2;
  throw IndexOutOfRange("SewingConfig::torus: index must be 1 or 2, got " + std::to_string(a));
}

double SewingConfig::r(int a) const {
  if (a == 1) return r1;
  if (a == 2) return r2;
  throw IndexOutOfRange("SewingConfig::r: index must be 1 or 2, got " + std::to_string(a));
}

SurfacePoint SewingConfig::point(cplx z, int torus_index) const {
  if (torus_index != 1 && torus_index != 2)
    throw IndexOutOfRange("SewingConfig::point: torus index must be 1 or 2, got " +
                          std::to_string(torus_index));
  const double r_other = (torus_index == 1) ? r2 : r1;
  if (std::abs(z) < std::abs(eps) / r_other)
    throw DomainViolation("SewingConfig::point: point lies inside the excised sewing disk");
  return SurfacePoint{z, torus_index};
}

bool in_domain(const SewingConfig& cfg) { return std::abs(cfg.eps) < 0.25 * cfg.d1 * cfg.d2; }

Eigen::MatrixXcd build_q(const SewingConfig& cfg, const TwistData& tw1, const TwistData& tw2) {
  require_nondegenerate(tw1, tw2, "build_q");
  const int M = cfg.M;
  const coeffs::TruncatedMatrix f1 = coeffs::f_matrix(1, cfg, tw1);
  const coeffs::TruncatedMatrix f2 = coeffs::f_matrix(2, cfg, tw2);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2 * M, 2 * M);
  q.block(0, M, M, M) = cfg.xi * f1.dense;
  q.block(M, 0, M, M) = -cfg.xi * f2.dense;
  return q;
}

cplx det_i_minus_q(const SewingConfig& cfg, const TwistData& tw1, const TwistData& tw2) {
  const Eigen::MatrixXcd q = build_q(cfg, tw1, tw2);
  const int n = int(q.rows());
  return (Eigen::MatrixXcd::Identity(n, n) - q).determinant();
}

cplx det_i_minus_f1f2(const SewingConfig& cfg, const TwistData& tw1, const TwistData& tw2) {
  require_nondegenerate(tw1, tw2, "det_i_minus_f1f2");
  const int M = cfg.M;
  const coeffs::TruncatedMatrix f1 = coeffs::f_matrix(1, cfg, tw1);
  const coeffs::TruncatedMatrix f2 = coeffs::f_matrix(2, cfg, tw2);
  return (Eigen::MatrixXcd::Identity(M, M) - f1.dense * f2.dense).determinant();
}

cplx szego_g1(cplx x, cplx y, const TwistData& tw, const ModularParam& m,
              const SeriesPolicy& pol) {
  if (tw.degenerate())
    throw DegenerateTwist("szego_g1: twist must be nondegenerate");
  return qseries::weierstrass_continued(1, tw, x - y, m, pol);
}

namespace {

// Correction term shared by the same-torus kernel and its pole-subtracted
// variant: h_a(x)^T (I - F_a' F_a)^{-1} F_a' hbar_a(y).
cplx same_torus_correction(int a, cplx xz, cplx yz, const SewingConfig& cfg,
                           const TwistData& tw1, const TwistData& tw2) {
  const TwistData& ta = (a == 1) ? tw1 : tw2;
  const int other = 3 - a;
  const coeffs::TruncatedMatrix fa = coeffs::f_matrix(a, cfg, ta);
  const coeffs::TruncatedMatrix fo = coeffs::f_matrix(other, cfg, (other == 1) ? tw1 : tw2);
  const coeffs::HalfFormVector h = coeffs::h_vector(a, xz, cfg, ta);
  const coeffs::HalfFormVector hb = coeffs::hbar_vector(a, yz, cfg, ta);
  const Eigen::VectorXcd s =
      solve_i_minus(fo.dense * fa.dense, Eigen::VectorXcd(fo.dense * hb.entries), "szego_g2");
  return h.entries.cwiseProduct(s).sum();
}

}  // namespace

cplx szego_g2(const SurfacePoint& x, const SurfacePoint& y, const SewingConfig& cfg,
              const TwistData& tw1, const TwistData& tw2) {
  require_nondegenerate(tw1, tw2, "szego_g2");
  if ((x.torus != 1 && x.torus != 2) || (y.torus != 1 && y.torus != 2))
    throw IndexOutOfRange("szego_g2: torus indices must be 1 or 2");
  // Re-validate: SurfacePoint is an open struct, so the excision bound is
  // enforced at use as well as at construction.
  (void)cfg.point(x.z, x.torus);
  (void)cfg.point(y.z, y.torus);

  const TwistData& tx = (x.torus == 1) ? tw1 : tw2;

  if (x.torus == y.torus) {
    const int a = x.torus;
    const cplx direct = qseries::weierstrass_continued(1, tx, x.z - y.z, cfg.torus(a), cfg.pol);
    return direct + same_torus_correction(a, x.z, y.z, cfg, tw1, tw2);
  }

  if (x.torus == 1) {
    // +xi h_1(x)^T (I - F_2 F_1)^{-1} hbar_2(y)
    const coeffs::TruncatedMatrix f1 = coeffs::f_matrix(1, cfg, tw1);
    const coeffs::TruncatedMatrix f2 = coeffs::f_matrix(2, cfg, tw2);
    const coeffs::HalfFormVector h = coeffs::h_vector(1, x.z, cfg, tw1);
    const coeffs::HalfFormVector hb = coeffs::hbar_vector(2, y.z, cfg, tw2);
    const Eigen::VectorXcd s = solve_i_minus(f2.dense * f1.dense, hb.entries, "szego_g2");
    return cfg.xi * h.entries.cwiseProduct(s).sum();
  }

  // x on torus 2, y on torus 1: -xi h_2(x)^T (I - F_1 F_2)^{-1} hbar_1(y)
  const coeffs::TruncatedMatrix f1 = coeffs::f_matrix(1, cfg, tw1);
  const coeffs::TruncatedMatrix f2 = coeffs::f_matrix(2, cfg, tw2);
  const coeffs::HalfFormVector h = coeffs::h_vector(2, x.z, cfg, tw2);
  const coeffs::HalfFormVector hb = coeffs::hbar_vector(1, y.z, cfg, tw1);
  const Eigen::VectorXcd s = solve_i_minus(f1.dense * f2.dense, hb.entries, "szego_g2");
  return -cfg.xi * h.entries.cwiseProduct(s).sum();
}

cplx szego_g2_minus_pole(const SurfacePoint& x, const SurfacePoint& y, const SewingConfig& cfg,
                         const TwistData& tw1, const TwistData& tw2) {
  require_nondegenerate(tw1, tw2, "szego_g2_minus_pole");
  if (x.torus != y.torus)
    throw IndexOutOfRange("szego_g2_minus_pole: points must lie on the same torus");
  (void)cfg.point(x.z, x.torus);
  (void)cfg.point(y.z, y.torus);
  const TwistData& ta = (x.torus == 1) ? tw1 : tw2;
  const cplx direct =
      qseries::weierstrass_minus_pole(1, ta, x.z - y.z, cfg.torus(x.torus), cfg.pol);
  return direct + same_torus_correction(x.torus, x.z, y.z, cfg, tw1, tw2);
}

}  // namespace g2sew::sewing
