#pragma once
// Free-fermion partition and correlation functions on one torus and on the
// two-tori sewn surface.
//
// Fock basis: a label [k, l] stands for the state built from the charged
// fermion pair, with creation orders k_1 < ... < k_s for the + flavour and
// l_1 < ... < l_t for the - flavour (all positive integers).  Its weight is
// sum(k_i - 1/2) + sum(l_j - 1/2) and its parity (s + t) mod 2.  The dual of
// [k, l] is the transposed label [l, k] scaled by (-1)^{st} (-xi)^{parity}
// eps^{weight}; every truncated Fock sum below pairs a label on torus 1 with
// its scaled transpose on torus 2.
//
// Truncated sums enumerate labels by increasing weight (lexicographic within
// a weight shell), cut at the hard cap W, and accumulate terms pairwise so
// the result is independent of summation batching.

#include <g2sew/sewing.hpp>
#include <g2sew/types.hpp>

#include <vector>

namespace g2sew::fermion {

struct FockLabel {
  std::vector<int> k;
  std::vector<int> l;

  // Validates strict increase and positivity of both lists.
  static FockLabel make(std::vector<int> k, std::vector<int> l);

  int s() const { return int(k.size()); }
  int t() const { return int(l.size()); }
  // Twice the weight, exactly: 2*sum(k) + 2*sum(l) - s - t.
  int weight2() const;
  double weight() const { return 0.5 * weight2(); }
  int parity() const { return (s() + t()) % 2; }
  FockLabel transpose() const { return FockLabel{l, k}; }
};

// Characteristics for the two tori; both nondegenerate.
struct CharPair {
  TwistData t1;
  TwistData t2;
  static CharPair make(const TwistData& t1, const TwistData& t2);
};

// Truncation for Fock sums: hard weight wall W >= 1 and a cap on the number
// of insertion points a generating-form sum will accept.
struct CutoffPolicy {
  double weight_cap;
  int max_insertions;
  static CutoffPolicy make(double weight_cap, int max_insertions = 8);
};

// All labels with t - s == excess and weight <= weight_cap, ordered by
// (weight, k, l) with lists compared lexicographically.
std::vector<FockLabel> enumerate_labels(double weight_cap, int excess);

// Balanced pairwise reduction of the term list (deterministic association).
cplx pairwise_sum(std::vector<cplx> terms);

// ---------------------------------------------------------------------------
// One torus.

// Twisted partition function
//   q^{a^2/2 - 1/24} prod_{n>=1} (1 - theta^{-1} q^{n-1/2+a})(1 - theta q^{n-1/2-a})
// with a the representative of alpha in (-1/2, 1/2].  Degenerate twists are
// allowed and give an exact zero (the n = 1 factor vanishes).
cplx z1_partition(const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol = {});

// Single (real) fermion partition function; defined for the three twist pairs
// with alpha, beta in {0, 1/2} other than (1/2, 1/2).  Any other characteristic
// is rejected with DomainViolation.  Its square is z1_partition of the pair.
cplx z1_partition_rank1(const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol = {});

// One-point function of a Fock state: zero unless s == t, else
//   (-1)^{s(s-1)/2} det[ C(k_i, l_j) ] Z1.
cplx z1_fock_onept(const FockLabel& label, const TwistData& tw, const ModularParam& m,
                   const SeriesPolicy& pol = {});

// 2n-point generating function det[ P_1(w_i - z_j) ] Z1; the differences must
// lie in the expansion strip (no lattice continuation is applied here).
cplx z1_gen_2npt(const std::vector<cplx>& ws, const std::vector<cplx>& zs, const TwistData& tw,
                 const ModularParam& m, const SeriesPolicy& pol = {});

// One-point function of a Fock state dressed by n extra field insertions.
// side 1 (points w, + flavour fields): zero unless t == s + n, else
//   (-1)^{t(t-1)/2} det(E) Z1  with the t x t matrix
//   E(i,j) = P_{l_j}(w_i) for i <= n,  C(k_{i-n}, l_j) for i > n.
// side 2 (points z, - flavour fields): zero unless s == t + n, else
//   (-1)^{s(s+1)/2} (-1)^{st} det(E) Z1  with the s x s matrix
//   E(i,j) = D(k_i, 1, -z_j) for j <= n,  C(k_i, l_{j-n}) for j > n.
// n = 0 reduces both sides to z1_fock_onept.
cplx z1_dressed_onept(int side, const std::vector<cplx>& points, const FockLabel& label,
                      const TwistData& tw, const ModularParam& m, const SeriesPolicy& pol = {});

// ---------------------------------------------------------------------------
// Two sewn tori.

// Z1(t1) Z1(t2) det(I - Q).
cplx z2_partition(const sewing::SewingConfig& cfg, const CharPair& chars);

// Rank-one analogue Z1 Z1 det(I - Q)^{1/2}; the square root is path-tracked
// from 1 along s -> s*eps, s in [0,1].  Characteristics as z1_partition_rank1.
cplx z2_partition_rank1(const sewing::SewingConfig& cfg, const CharPair& chars);

// Free boson value 1 / (eta(tau1) eta(tau2) det(I - A_1 A_2)^{1/2}), square
// root path-tracked as in z2_partition_rank1.
cplx z2_heisenberg(const sewing::SewingConfig& cfg);

// Truncated Fock sum for the sewn partition function:
//   sum over labels with s == t, weight <= W of
//   (-1)^s eps^{weight} Z1_1([k,l]) Z1_2([l,k]).
cplx z2_fock_sum(const sewing::SewingConfig& cfg, const CharPair& chars, const CutoffPolicy& cut);

// Z2 det[ S2(w_i, z_j) ]; points may sit on either torus.
cplx gen_form_2n(const std::vector<sewing::SurfacePoint>& ws,
                 const std::vector<sewing::SurfacePoint>& zs, const sewing::SewingConfig& cfg,
                 const CharPair& chars);

// Truncated Fock sum for the generating form with all w on torus 1 and all z
// on torus 2 (local coordinates):
//   (-1)^{n(n-1)/2} sum over labels with t == s + n, weight <= W of
//   (-1)^{st} (-xi)^{parity} eps^{weight}
//     z1_dressed_onept(1, ws, [k,l]; tau1) z1_dressed_onept(2, zs, [l,k]; tau2).
cplx gen_form_fock_sum(const std::vector<cplx>& ws, const std::vector<cplx>& zs,
                       const sewing::SewingConfig& cfg, const CharPair& chars,
                       const CutoffPolicy& cut);

// Virasoro one-point function at a point on torus 1:
//   Z2 * lim_{w,x -> z} [ S2_reg(w, x) - S2_reg(x, w) ] / (2 (w - x))
// where S2_reg is the pole-subtracted same-torus kernel; the limit is a
// central finite difference along `direction` (unit modulus), Richardson
// extrapolated over step halvings.  Throws LimitUnstable if the h and h/2
// extrapolants disagree beyond 1e-5 relative.
cplx virasoro_onept(const sewing::SurfacePoint& z, const sewing::SewingConfig& cfg,
                    const CharPair& chars, cplx direction = cplx(1.0, 0.0));

}  // namespace g2sew::fermion
