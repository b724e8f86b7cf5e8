// Modular group actions on the genus-one and sewn genus-two data, and the
// invariance checks built on them.  Conventions in modular.hpp.

#include <g2sew/modular.hpp>

#include <g2sew/qseries.hpp>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace g2sew::modular {

namespace {

// Relative discrepancy with an absolute floor so exact zeros compare equal.
double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

double rel_diff(cplx a, cplx b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// SL(2,Z)

SL2Element SL2Element::make(long a, long b, long c, long d) {
  if (a * d - b * c != 1) {
    std::ostringstream os;
    os << "SL2Element: determinant must be 1, got " << (a * d - b * c) << " for (" << a << " "
       << b << "; " << c << " " << d << ")";
    throw DomainViolation(os.str());
  }
  return SL2Element{a, b, c, d};
}

cplx SL2Element::automorphy(cplx tau) const {
  return static_cast<double>(c) * tau + static_cast<double>(d);
}

SL2Element operator*(const SL2Element& g, const SL2Element& h) {
  return SL2Element{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c,
                    g.c * h.b + g.d * h.d};
}

ModularParam act_tau(const SL2Element& g, const ModularParam& m) {
  const cplx num = static_cast<double>(g.a) * m.tau + static_cast<double>(g.b);
  return ModularParam(num / g.automorphy(m.tau));
}

TwistData act_char(const SL2Element& g, const TwistData& tw) {
  // [theta; phi] -> [theta^a phi^b; theta^c phi^d] is linear on the angles.
  const double u1 = frac1(static_cast<double>(g.a) * tw.u + static_cast<double>(g.b) * tw.lambda);
  const double l1 = frac1(static_cast<double>(g.c) * tw.u + static_cast<double>(g.d) * tw.lambda);
  // Invert the angle parameterization: lambda = frac(alpha + 1/2),
  // u = frac(1/2 - beta).
  TwistData image(frac1(l1 + 0.5), frac1(0.5 - u1));
  if (image.degenerate())
    throw DegenerateTwist("act_char: image characteristic is (1,1)");
  return image;
}

// ---------------------------------------------------------------------------
// Words in G

GElement GElement::then(const GElement& next) const {
  GElement out = *this;
  out.word.insert(out.word.end(), next.word.begin(), next.word.end());
  return out;
}

bool GElement::pure_beta() const {
  for (const auto& gen : word)
    if (gen.slot != 0) return false;
  return true;
}

cplx GAction::point_scale(int original_torus) const {
  if (original_torus == 1) return point_scale1;
  if (original_torus == 2) return point_scale2;
  throw IndexOutOfRange("GAction::point_scale: torus must be 1 or 2, got " +
                        std::to_string(original_torus));
}

GAction act_full(const GElement& g, const sewing::SewingConfig& cfg,
                 const fermion::CharPair& chars) {
  // Slot state: what currently sits in positions 1 and 2 of the moduli tuple.
  cplx tau[2] = {cfg.t1.tau, cfg.t2.tau};
  TwistData tw[2] = {chars.t1, chars.t2};
  cplx eps = cfg.eps;
  cplx xi = cfg.xi;
  // Accumulated coordinate scale per ORIGINAL torus; swapped tracks which
  // slot the points from original torus 1 currently occupy.
  cplx scale[2] = {cplx(1.0, 0.0), cplx(1.0, 0.0)};
  bool swapped = false;

  for (const auto& gen : g.word) {
    if (gen.slot == 0) {
      std::swap(tau[0], tau[1]);
      std::swap(tw[0], tw[1]);
      // The cross-kernel branch sign is tied to the torus ordering: with xi
      // held fixed, relabeling negates every cross-torus kernel value, so the
      // swap acts on the auxiliary sheet choice as xi -> -xi.
      xi = -xi;
      swapped = !swapped;
      continue;
    }
    if (gen.slot != 1 && gen.slot != 2)
      throw IndexOutOfRange("act_full: generator slot must be 0, 1 or 2, got " +
                            std::to_string(gen.slot));
    const int s = gen.slot - 1;
    const cplx j = gen.m.automorphy(tau[s]);
    tau[s] = act_tau(gen.m, ModularParam(tau[s])).tau;
    tw[s] = act_char(gen.m, tw[s]);
    eps /= j;
    // Points currently in slot s came from original torus s or its mirror.
    const int origin = (swapped ? 1 - s : s);
    scale[origin] *= j;
  }

  GAction out{sewing::SewingConfig::make(tau[0], tau[1], eps, xi, cfg.M, cfg.pol),
              fermion::CharPair::make(tw[0], tw[1]), scale[0], scale[1], swapped};
  return out;
}

std::pair<sewing::SewingConfig, fermion::CharPair> act_config(const GElement& g,
                                                              const sewing::SewingConfig& cfg,
                                                              const fermion::CharPair& chars) {
  GAction act = act_full(g, cfg, chars);
  return {act.cfg, act.chars};
}

sewing::SurfacePoint transport_point(const GAction& act, const sewing::SurfacePoint& p) {
  if (p.torus != 1 && p.torus != 2)
    throw IndexOutOfRange("transport_point: torus must be 1 or 2, got " +
                          std::to_string(p.torus));
  const int image_torus = act.swapped ? 3 - p.torus : p.torus;
  return act.cfg.point(p.z / act.point_scale(p.torus), image_torus);
}

// ---------------------------------------------------------------------------
// Invariance checks

InvarianceReport check_invariance(Quantity q, const GElement& g,
                                  const sewing::SewingConfig& cfg,
                                  const fermion::CharPair& chars, double tol,
                                  const std::vector<sewing::SurfacePoint>& ws,
                                  const std::vector<sewing::SurfacePoint>& zs) {
  InvarianceReport rep;

  std::optional<GAction> acted;
  std::vector<sewing::SurfacePoint> wi, zi;
  try {
    acted = act_full(g, cfg, chars);
    if (q == Quantity::genform) {
      wi.reserve(ws.size());
      zi.reserve(zs.size());
      for (const auto& p : ws) wi.push_back(transport_point(*acted, p));
      for (const auto& p : zs) zi.push_back(transport_point(*acted, p));
    }
  } catch (const DomainError& e) {
    rep.applicable = false;
    rep.detail = std::string("image rejected: ") + e.what();
    return rep;
  }
  const GAction& act = *acted;

  const bool exact = g.pure_beta();
  if (q == Quantity::z2) {
    rep.value_orig = fermion::z2_partition(cfg, chars);
    rep.value_image = fermion::z2_partition(act.cfg, act.chars);
    if (exact) {
      rep.discrepancy = rel_diff(rep.value_orig, rep.value_image);
      rep.detail = "pure-beta word: full complex comparison, multiplier 1";
    } else {
      rep.discrepancy = rel_diff(std::abs(rep.value_orig), std::abs(rep.value_image));
      rep.detail = "modulus comparison (U(1) multiplier not tracked)";
    }
  } else {
    rep.value_orig = fermion::gen_form_2n(ws, zs, cfg, chars);
    rep.value_image = fermion::gen_form_2n(wi, zi, act.cfg, act.chars);
    if (exact) {
      rep.discrepancy = rel_diff(rep.value_orig, rep.value_image);
      rep.detail = "pure-beta word: full complex comparison, multiplier 1";
    } else {
      // Each insertion is a half-form: the component function picks up
      // (c tau + d)^{1/2} per point when the coordinate is rescaled, so the
      // image modulus is scale times the original.
      double scale = 1.0;
      for (const auto& p : ws) scale *= std::sqrt(std::abs(act.point_scale(p.torus)));
      for (const auto& p : zs) scale *= std::sqrt(std::abs(act.point_scale(p.torus)));
      rep.discrepancy = rel_diff(scale * std::abs(rep.value_orig), std::abs(rep.value_image));
      rep.detail = "modulus comparison with half-form point weight";
    }
  }

  rep.applicable = true;
  rep.passed = rep.discrepancy <= tol;
  return rep;
}

InvarianceReport check_eisenstein_modularity(int k, const SL2Element& g, const TwistData& tw,
                                             const ModularParam& m, double tol) {
  InvarianceReport rep;
  TwistData img(0.0, 0.0);
  try {
    img = act_char(g, tw);
  } catch (const DomainError& e) {
    rep.applicable = false;
    rep.detail = std::string("image rejected: ") + e.what();
    return rep;
  }
  const ModularParam mi = act_tau(g, m);
  const cplx j = g.automorphy(m.tau);
  rep.value_orig = std::pow(j, static_cast<double>(k)) * qseries::eisenstein_twisted(k, tw, m);
  rep.value_image = qseries::eisenstein_twisted(k, img, mi);
  rep.discrepancy = rel_diff(rep.value_orig, rep.value_image);
  rep.detail = "E_k(image) vs (c tau + d)^k E_k, full complex";
  rep.applicable = true;
  rep.passed = rep.discrepancy <= tol;
  return rep;
}

InvarianceReport check_z1_invariance(const SL2Element& g, const TwistData& tw,
                                     const ModularParam& m, double tol) {
  InvarianceReport rep;
  TwistData img(0.0, 0.0);
  try {
    img = act_char(g, tw);
  } catch (const DomainError& e) {
    rep.applicable = false;
    rep.detail = std::string("image rejected: ") + e.what();
    return rep;
  }
  SeriesPolicy pol{};
  rep.value_orig = fermion::z1_partition(tw, m, pol);
  rep.value_image = fermion::z1_partition(img, act_tau(g, m), pol);
  rep.discrepancy = rel_diff(std::abs(rep.value_orig), std::abs(rep.value_image));
  rep.detail = "|Z| comparison (U(1) multiplier not tracked)";
  rep.applicable = true;
  rep.passed = rep.discrepancy <= tol;
  return rep;
}

}  // namespace g2sew::modular
