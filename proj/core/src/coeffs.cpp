#include <g2sew/coeffs.hpp>

#include <g2sew/numeric.hpp>
#include <g2sew/qseries.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace g2sew::coeffs {

namespace {

void require_order(int k, int l, const char* who) {
  if (k < 1 || l < 1)
    throw IndexOutOfRange(std::string(who) + ": orders must be >= 1, got (" + std::to_string(k) +
                          ", " + std::to_string(l) + ")");
}

const ModularParam& pick_torus(int a, const sewing::SewingConfig& cfg, const char* who) {
  if (a != 1 && a != 2)
    throw IndexOutOfRange(std::string(who) + ": torus index must be 1 or 2, got " +
                          std::to_string(a));
  return a == 1 ? cfg.t1 : cfg.t2;
}

// Powers eps_half^0 .. eps_half^top.
std::vector<cplx> half_powers(const sewing::SewingConfig& cfg, int top) {
  std::vector<cplx> p(top + 1);
  p[0] = cplx(1.0, 0.0);
  for (int j = 1; j <= top; ++j) p[j] = p[j - 1] * cfg.eps_half;
  return p;
}

void require_outside_disk(int a, cplx x, const sewing::SewingConfig& cfg, const char* who) {
  const double r_other = (a == 1) ? cfg.r2 : cfg.r1;
  if (std::abs(x) < std::abs(cfg.eps) / r_other)
    throw DomainViolation(std::string(who) + ": point lies inside the excised sewing disk (|z| < |eps|/r)");
}

}  // namespace

cplx c_coeff(int k, int l, const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol) {
  require_order(k, l, "c_coeff");
  const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
  return sgn * binom(k + l - 2, k - 1) * qseries::eisenstein_twisted(k + l - 1, tw, m, pol);
}

cplx d_coeff(int k, int l, cplx z, const TwistData& tw, const ModularParam& m,
             const SeriesPolicy& pol) {
  require_order(k, l, "d_coeff");
  const double sgn = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
  return sgn * binom(k + l - 2, k - 1) * qseries::weierstrass_continued(k + l - 1, tw, z, m, pol);
}

TruncatedMatrix f_matrix(int a, const sewing::SewingConfig& cfg, const TwistData& tw) {
  const ModularParam& m = pick_torus(a, cfg, "f_matrix");
  const int M = cfg.M;
  // E_{k+l-1} ranges over orders 1 .. 2M-1; compute each once.
  std::vector<cplx> e(2 * M);
  for (int s = 1; s <= 2 * M - 1; ++s) e[s] = qseries::eisenstein_twisted(s, tw, m, cfg.pol);
  const std::vector<cplx> hp = half_powers(cfg, 2 * M - 1);

  TruncatedMatrix f{M, Eigen::MatrixXcd(M, M)};
  for (int k = 1; k <= M; ++k) {
    for (int l = 1; l <= M; ++l) {
      const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
      f.dense(k - 1, l - 1) = hp[k + l - 1] * sgn * binom(k + l - 2, k - 1) * e[k + l - 1];
    }
  }
  return f;
}

TruncatedMatrix a_matrix(int a, const sewing::SewingConfig& cfg) {
  const ModularParam& m = pick_torus(a, cfg, "a_matrix");
  const int M = cfg.M;
  // Untwisted E_{k+l} over orders 2 .. 2M (odd orders vanish identically but
  // are computed uniformly; they cost a constant-term evaluation).
  std::vector<cplx> e(2 * M + 1);
  for (int s = 2; s <= 2 * M; ++s) e[s] = qseries::eisenstein_classical(s, m, cfg.pol);
  const std::vector<cplx> hp = half_powers(cfg, 2 * M);

  TruncatedMatrix am{M, Eigen::MatrixXcd(M, M)};
  for (int k = 1; k <= M; ++k) {
    for (int l = 1; l <= M; ++l) {
      const double sgn = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
      const double w =
          factorial_ratio_kl(k, l) / std::sqrt(double(k) * double(l));
      am.dense(k - 1, l - 1) = hp[k + l] * sgn * w * e[k + l];
    }
  }
  return am;
}

HalfFormVector h_vector(int a, cplx x, const sewing::SewingConfig& cfg, const TwistData& tw) {
  const ModularParam& m = pick_torus(a, cfg, "h_vector");
  require_outside_disk(a, x, cfg, "h_vector");
  const int M = cfg.M;
  const Eigen::VectorXcd p = qseries::weierstrass_continued_batch(M, tw, x, m, cfg.pol);
  const std::vector<cplx> hp = half_powers(cfg, M);

  HalfFormVector h{M, Eigen::VectorXcd(M), x, a};
  for (int k = 1; k <= M; ++k) h.entries(k - 1) = cfg.eps_quarter * hp[k - 1] * p[k - 1];
  return h;
}

HalfFormVector hbar_vector(int a, cplx y, const sewing::SewingConfig& cfg, const TwistData& tw) {
  const ModularParam& m = pick_torus(a, cfg, "hbar_vector");
  require_outside_disk(a, y, cfg, "hbar_vector");
  const int M = cfg.M;
  const Eigen::VectorXcd p = qseries::weierstrass_continued_batch(M, tw, -y, m, cfg.pol);
  const std::vector<cplx> hp = half_powers(cfg, M);

  HalfFormVector h{M, Eigen::VectorXcd(M), y, a};
  for (int k = 1; k <= M; ++k) {
    const double sgn = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
    h.entries(k - 1) = cfg.eps_quarter * hp[k - 1] * sgn * p[k - 1];
  }
  return h;
}

}  // namespace g2sew::coeffs
