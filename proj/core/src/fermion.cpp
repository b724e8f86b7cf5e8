#include <g2sew/fermion.hpp>

#include <g2sew/coeffs.hpp>
#include <g2sew/numeric.hpp>
#include <g2sew/qseries.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

namespace g2sew::fermion {

namespace {

// Memoized twisted Eisenstein values for one (twist, tau) pair; determinant
// entries of neighboring Fock labels reuse the same handful of orders.
struct EisCache {
  const TwistData& tw;
  const ModularParam& m;
  const SeriesPolicy& pol;
  std::map<int, cplx> vals;
  cplx operator()(int n) {
    const auto it = vals.find(n);
    if (it != vals.end()) return it->second;
    const cplx v = qseries::eisenstein_twisted(n, tw, m, pol);
    vals.emplace(n, v);
    return v;
  }
};

cplx c_entry(int k, int l, EisCache& e) {
  const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
  return sgn * binom(k + l - 2, k - 1) * e(k + l - 1);
}

double parity_sign(long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

cplx ipow(cplx base, int n) {
  cplx out(1.0, 0.0);
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

// Strictly increasing lists of the given size with sum(2 v_i - 1) <= budget2,
// entries starting at min_next.
void rec_lists(int size, int min_next, int budget2, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (size == 0) {
    out.push_back(cur);
    return;
  }
  for (int v = min_next;; ++v) {
    // Cheapest completion from here: v, v+1, ..., v+size-1.
    const int floor_cost = size * (2 * v - 1) + size * (size - 1);
    if (floor_cost > budget2) break;
    cur.push_back(v);
    rec_lists(size - 1, v + 1, budget2 - (2 * v - 1), cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> lists_of_size(int size, int budget2) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (budget2 >= 0) rec_lists(size, 1, budget2, cur, out);
  return out;
}

cplx scaled_det_i_minus_f1f2(const sewing::SewingConfig& cfg, const CharPair& chars, double s) {
  const sewing::SewingConfig scaled = sewing::SewingConfig::make(
      cfg.t1.tau, cfg.t2.tau, s * cfg.eps, cfg.xi, cfg.r1, cfg.r2, cfg.M, cfg.pol);
  return sewing::det_i_minus_f1f2(scaled, chars.t1, chars.t2);
}

cplx scaled_det_i_minus_a1a2(const sewing::SewingConfig& cfg, double s) {
  const sewing::SewingConfig scaled = sewing::SewingConfig::make(
      cfg.t1.tau, cfg.t2.tau, s * cfg.eps, cfg.xi, cfg.r1, cfg.r2, cfg.M, cfg.pol);
  const Eigen::MatrixXcd a1 = coeffs::a_matrix(1, scaled).dense;
  const Eigen::MatrixXcd a2 = coeffs::a_matrix(2, scaled).dense;
  return (Eigen::MatrixXcd::Identity(cfg.M, cfg.M) - a1 * a2).determinant();
}

}  // namespace

FockLabel FockLabel::make(std::vector<int> k, std::vector<int> l) {
  for (const auto* lst : {&k, &l}) {
    for (std::size_t i = 0; i < lst->size(); ++i) {
      if ((*lst)[i] < 1)
        throw IndexOutOfRange("FockLabel: mode orders must be positive");
      if (i > 0 && (*lst)[i] <= (*lst)[i - 1])
        throw IndexOutOfRange("FockLabel: mode orders must be strictly increasing");
    }
  }
  return FockLabel{std::move(k), std::move(l)};
}

int FockLabel::weight2() const {
  int acc = -s() - t();
  for (int v : k) acc += 2 * v;
  for (int v : l) acc += 2 * v;
  return acc;
}

CharPair CharPair::make(const TwistData& t1, const TwistData& t2) {
  if (t1.degenerate() || t2.degenerate())
    throw DegenerateTwist("CharPair: both characteristics must be nondegenerate");
  return CharPair{t1, t2};
}

CutoffPolicy CutoffPolicy::make(double weight_cap, int max_insertions) {
  if (!(weight_cap >= 1.0))
    throw DomainViolation("CutoffPolicy: weight cap must be >= 1");
  if (max_insertions < 0)
    throw DomainViolation("CutoffPolicy: insertion cap must be >= 0");
  return CutoffPolicy{weight_cap, max_insertions};
}

std::vector<FockLabel> enumerate_labels(double weight_cap, int excess) {
  if (excess < 0) {
    std::vector<FockLabel> flipped = enumerate_labels(weight_cap, -excess);
    for (auto& lab : flipped) std::swap(lab.k, lab.l);
    std::sort(flipped.begin(), flipped.end(), [](const FockLabel& a, const FockLabel& b) {
      const int wa = a.weight2(), wb = b.weight2();
      return std::tie(wa, a.k, a.l) < std::tie(wb, b.k, b.l);
    });
    return flipped;
  }
  const int w2 = int(std::floor(2.0 * weight_cap + 1e-9));
  std::vector<FockLabel> out;
  for (int s = 0;; ++s) {
    const int t = s + excess;
    if (s * s + t * t > w2) break;  // minimal weight2 of sizes (s, t)
    for (auto& kl : lists_of_size(s, w2 - t * t)) {
      int used = -s;
      for (int v : kl) used += 2 * v;
      for (auto& ll : lists_of_size(t, w2 - used)) out.push_back(FockLabel{kl, ll});
    }
  }
  std::sort(out.begin(), out.end(), [](const FockLabel& a, const FockLabel& b) {
    const int wa = a.weight2(), wb = b.weight2();
    return std::tie(wa, a.k, a.l) < std::tie(wb, b.k, b.l);
  });
  return out;
}

cplx pairwise_sum(std::vector<cplx> terms) {
  if (terms.empty()) return cplx(0.0, 0.0);
  while (terms.size() > 1) {
    std::vector<cplx> next((terms.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next[i / 2] = terms[i] + terms[i + 1];
    if (terms.size() % 2 == 1) next.back() = terms.back();
    terms = std::move(next);
  }
  return terms[0];
}

cplx z1_partition(const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol) {
  // Exponents l - 1/2 - alpha grow without bound, so the product converges for
  // any alpha in [0, 1); for alpha > 1/2 the l = 1 factor merely has modulus
  // above one.  Keeping the stored alpha (rather than a shifted representative)
  // is what makes Z1 equal e^{-2 pi i alpha beta} theta[alpha, beta] / eta.
  const double a = tw.alpha;
  const cplx lead = m.q_pow(0.5 * a * a - 1.0 / 24.0);
  const cplx th = tw.theta();
  const cplx thi = tw.theta_inv();
  const double floor_dev = pol.rel_tol * (1.0 - std::abs(m.q));
  cplx prod(1.0, 0.0);
  for (long n = 1; n <= pol.max_terms; ++n) {
    const cplx qp = m.q_pow(n - 0.5 + a);
    const cplx qm = m.q_pow(n - 0.5 - a);
    prod *= (1.0 - thi * qp) * (1.0 - th * qm);
    if (std::abs(qp) + std::abs(qm) < floor_dev) return lead * prod;
  }
  throw NonConvergent("z1_partition: product did not converge within max_terms");
}

cplx z1_partition_rank1(const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol) {
  const bool a0 = (tw.alpha == 0.0), ah = (tw.alpha == 0.5);
  const bool b0 = (tw.beta == 0.0), bh = (tw.beta == 0.5);
  if (!((a0 || ah) && (b0 || bh)) || (ah && bh))
    throw DomainViolation(
        "z1_partition_rank1: characteristics must have alpha, beta in {0, 1/2}, not both 1/2");
  const double floor_dev = pol.rel_tol * (1.0 - std::abs(m.q));
  cplx prod(1.0, 0.0);
  if (a0) {
    const double sg = b0 ? 1.0 : -1.0;
    for (long n = 1; n <= pol.max_terms; ++n) {
      const cplx qp = m.q_pow(n - 0.5);
      prod *= 1.0 + sg * qp;
      if (std::abs(qp) < floor_dev) return m.q_pow(-1.0 / 48.0) * prod;
    }
  } else {
    for (long n = 1; n <= pol.max_terms; ++n) {
      const cplx qp = m.q_pow(double(n));
      prod *= 1.0 + qp;
      if (std::abs(qp) < floor_dev) return std::sqrt(2.0) * m.q_pow(1.0 / 24.0) * prod;
    }
  }
  throw NonConvergent("z1_partition_rank1: product did not converge within max_terms");
}

cplx z1_fock_onept(const FockLabel& label, const TwistData& tw, const ModularParam& m,
                   const SeriesPolicy& pol) {
  if (tw.degenerate()) throw DegenerateTwist("z1_fock_onept: twist must be nondegenerate");
  const int s = label.s();
  if (s != label.t()) return cplx(0.0, 0.0);
  const cplx z1 = z1_partition(tw, m, pol);
  if (s == 0) return z1;
  EisCache e{tw, m, pol, {}};
  Eigen::MatrixXcd c(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) c(i, j) = c_entry(label.k[i], label.l[j], e);
  return parity_sign(long(s) * (s - 1) / 2) * c.determinant() * z1;
}

cplx z1_gen_2npt(const std::vector<cplx>& ws, const std::vector<cplx>& zs, const TwistData& tw,
                 const ModularParam& m, const SeriesPolicy& pol) {
  if (tw.degenerate()) throw DegenerateTwist("z1_gen_2npt: twist must be nondegenerate");
  if (ws.size() != zs.size())
    throw IndexOutOfRange("z1_gen_2npt: point lists must have equal length");
  const int n = int(ws.size());
  const cplx z1 = z1_partition(tw, m, pol);
  if (n == 0) return z1;
  Eigen::MatrixXcd p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (ws[i] == zs[j])
        throw SingularPoint("z1_gen_2npt: coincident insertion points w_i = z_j");
      p(i, j) = qseries::weierstrass_twisted(1, tw, ws[i] - zs[j], m, pol);
    }
  return p.determinant() * z1;
}

cplx z1_dressed_onept(int side, const std::vector<cplx>& points, const FockLabel& label,
                      const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol) {
  if (tw.degenerate()) throw DegenerateTwist("z1_dressed_onept: twist must be nondegenerate");
  if (side != 1 && side != 2)
    throw IndexOutOfRange("z1_dressed_onept: side must be 1 or 2, got " + std::to_string(side));
  const int n = int(points.size());
  if (n == 0) return z1_fock_onept(label, tw, m, pol);
  const int s = label.s(), t = label.t();
  EisCache e{tw, m, pol, {}};

  if (side == 1) {
    if (t != s + n) return cplx(0.0, 0.0);
    int lmax = 1;
    for (int v : label.l) lmax = std::max(lmax, v);
    Eigen::MatrixXcd mat(t, t);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXcd pk = qseries::weierstrass_continued_batch(lmax, tw, points[i], m, pol);
      for (int j = 0; j < t; ++j) mat(i, j) = pk[label.l[j] - 1];
    }
    for (int i = n; i < t; ++i)
      for (int j = 0; j < t; ++j) mat(i, j) = c_entry(label.k[i - n], label.l[j], e);
    return parity_sign(long(t) * (t - 1) / 2) * mat.determinant() *
           z1_partition(tw, m, pol);
  }

  if (s != t + n) return cplx(0.0, 0.0);
  int kmax = 1;
  for (int v : label.k) kmax = std::max(kmax, v);
  Eigen::MatrixXcd mat(s, s);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXcd pk = qseries::weierstrass_continued_batch(kmax, tw, -points[j], m, pol);
    for (int i = 0; i < s; ++i)
      mat(i, j) = parity_sign(label.k[i] + 1) * pk[label.k[i] - 1];
  }
  for (int j = n; j < s; ++j)
    for (int i = 0; i < s; ++i) mat(i, j) = c_entry(label.k[i], label.l[j - n], e);
  return parity_sign(long(s) * (s + 1) / 2) * parity_sign(long(s) * t) * mat.determinant() *
         z1_partition(tw, m, pol);
}

cplx z2_partition(const sewing::SewingConfig& cfg, const CharPair& chars) {
  if (!sewing::in_domain(cfg)) throw DomainViolation("z2_partition: eps outside the sewing domain");
  return z1_partition(chars.t1, cfg.t1, cfg.pol) * z1_partition(chars.t2, cfg.t2, cfg.pol) *
         sewing::det_i_minus_q(cfg, chars.t1, chars.t2);
}

cplx z2_partition_rank1(const sewing::SewingConfig& cfg, const CharPair& chars) {
  const cplx zz = z1_partition_rank1(chars.t1, cfg.t1, cfg.pol) *
                  z1_partition_rank1(chars.t2, cfg.t2, cfg.pol);
  const cplx root = path_tracked_sqrt(
      [&](double s) { return scaled_det_i_minus_f1f2(cfg, chars, s); });
  return zz * root;
}

cplx z2_heisenberg(const sewing::SewingConfig& cfg) {
  const cplx root = path_tracked_sqrt([&](double s) { return scaled_det_i_minus_a1a2(cfg, s); });
  return 1.0 / (qseries::dedekind_eta(cfg.t1, cfg.pol) * qseries::dedekind_eta(cfg.t2, cfg.pol) *
                root);
}

cplx z2_fock_sum(const sewing::SewingConfig& cfg, const CharPair& chars, const CutoffPolicy& cut) {
  return gen_form_fock_sum({}, {}, cfg, chars, cut);
}

cplx gen_form_2n(const std::vector<sewing::SurfacePoint>& ws,
                 const std::vector<sewing::SurfacePoint>& zs, const sewing::SewingConfig& cfg,
                 const CharPair& chars) {
  if (ws.size() != zs.size())
    throw IndexOutOfRange("gen_form_2n: point lists must have equal length");
  const cplx z2 = z2_partition(cfg, chars);
  const int n = int(ws.size());
  if (n == 0) return z2;
  Eigen::MatrixXcd s2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s2(i, j) = sewing::szego_g2(ws[i], zs[j], cfg, chars.t1, chars.t2);
  return s2.determinant() * z2;
}

cplx gen_form_fock_sum(const std::vector<cplx>& ws, const std::vector<cplx>& zs,
                       const sewing::SewingConfig& cfg, const CharPair& chars,
                       const CutoffPolicy& cut) {
  if (ws.size() != zs.size())
    throw IndexOutOfRange("gen_form_fock_sum: point lists must have equal length");
  const int n = int(ws.size());
  if (n > cut.max_insertions)
    throw DomainViolation("gen_form_fock_sum: more insertion points than the cutoff allows");
  for (const cplx& w : ws) (void)cfg.point(w, 1);
  for (const cplx& z : zs) (void)cfg.point(z, 2);

  std::vector<cplx> terms;
  for (const FockLabel& lab : enumerate_labels(cut.weight_cap, n)) {
    const cplx d1 = z1_dressed_onept(1, ws, lab, chars.t1, cfg.t1, cfg.pol);
    if (d1 == cplx(0.0, 0.0)) continue;
    const cplx d2 = z1_dressed_onept(2, zs, lab.transpose(), chars.t2, cfg.t2, cfg.pol);
    const cplx xi_phase = (lab.parity() == 0) ? cplx(1.0, 0.0) : -cfg.xi;
    const cplx dual = parity_sign(long(lab.s()) * lab.t()) * xi_phase *
                      ipow(cfg.eps_half, lab.weight2());
    terms.push_back(dual * d1 * d2);
  }
  return parity_sign(long(n) * (n - 1) / 2) * pairwise_sum(std::move(terms));
}

cplx virasoro_onept(const sewing::SurfacePoint& z, const sewing::SewingConfig& cfg,
                    const CharPair& chars, cplx direction) {
  if (z.torus != 1)
    throw DomainViolation("virasoro_onept: the insertion point must lie on torus 1");
  (void)cfg.point(z.z, 1);
  const double dmag = std::abs(direction);
  if (!(dmag > 0.0)) throw DomainViolation("virasoro_onept: direction must be nonzero");
  const cplx dir = direction / dmag;

  const double h0 = 1e-3 * std::min(std::abs(z.z), cfg.d1 / two_pi);
  const auto central = [&](double h) {
    const cplx dh = h * dir;
    const sewing::SurfacePoint wp = cfg.point(z.z + dh, 1);
    const sewing::SurfacePoint xp = cfg.point(z.z - dh, 1);
    const cplx fwd = sewing::szego_g2_minus_pole(wp, xp, cfg, chars.t1, chars.t2);
    const cplx rev = sewing::szego_g2_minus_pole(xp, wp, cfg, chars.t1, chars.t2);
    return (fwd - rev) / (4.0 * dh);
  };
  const cplx a1 = central(h0);
  const cplx a2 = central(0.5 * h0);
  const cplx a3 = central(0.25 * h0);
  const cplx r1 = (4.0 * a2 - a1) / 3.0;
  const cplx r2 = (4.0 * a3 - a2) / 3.0;
  const double scale = std::max(std::abs(r2), 1e-300);
  if (std::abs(r1 - r2) / scale > 1e-5)
    throw LimitUnstable("virasoro_onept: Richardson extrapolants at h and h/2 disagree");
  return r2 * z2_partition(cfg, chars);
}

}  // namespace g2sew::fermion
