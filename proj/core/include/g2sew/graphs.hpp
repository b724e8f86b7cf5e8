#pragma once
// Rotationless oriented cycle graphs and the infinite-product expansion of
// det(I - W1 W2) for truncated moment matrices.
//
// A cycle graph is an even-length label sequence (k_1, ..., k_{2n}) read
// cyclically, with edges weighted alternately by the two matrices:
//
//   zeta(N) = prod_{i=1..n} W1(k_{2i-1}, k_{2i}) * W2(k_{2i}, k_{2i+1}),
//
// indices wrapping (k_{2n+1} = k_1).  Only even rotations preserve the
// W1/W2 alternation, so cycles are identified up to even rotations; a graph
// is rotationless when no proper even rotation fixes its label sequence.
// Equivalently: read the sequence as a word over the alphabet of pairs
// (k_odd, k_even) — rotationless graphs are aperiodic necklaces, and the
// canonical representative (lexicographically least even rotation) is a
// Lyndon word over that alphabet.
//
// The product identity behind all of this:
//
//   det(I - W1 W2) = prod_{rotationless N} (1 - zeta(N)),
//
// an exact identity of formal power series; truncating the graph set by the
// leading eps-order of zeta makes both sides agree through that order.  The
// leading order of a graph is sum(labels) - rebate * halflen, where the
// rebate per matrix factor depends on the weight normalization: 0 for the
// bosonic A-type blocks (entry (k,l) of leading order (k+l)/2) and 1 for the
// fermionic F-type blocks (leading order (k+l-1)/2).

#include <g2sew/coeffs.hpp>
#include <g2sew/types.hpp>

#include <vector>

namespace g2sew::graphs {

struct CycleGraph {
  std::vector<int> labels;  // even length, canonical under even rotations
  bool rotationless = false;

  // Validates (even length >= 2, labels >= 1), rotates to the canonical
  // representative, and computes the rotationless flag.
  static CycleGraph make(std::vector<int> labels);

  int halflen() const { return int(labels.size()) / 2; }
  // Leading eps-order of zeta for this graph: sum(labels) - rebate * halflen.
  int min_order(int rebate) const;
};

// All rotationless graphs with halflen <= max_halflen and labels <= max_label,
// canonical, each exactly once, ordered by (halflen, labels lexicographically).
std::vector<CycleGraph> enumerate_rotationless(int max_halflen, int max_label);

// All rotationless graphs whose leading order sum(labels) - rebate * halflen
// is at most max_order (rebate 0 or 1).  Label values and lengths are bounded
// by the budget itself, so no separate caps are needed.
std::vector<CycleGraph> enumerate_up_to_order(int max_order, int rebate);

// The alternating edge-weight product with wraparound.  Throws
// IndexOutOfRange if a label exceeds either matrix truncation.
cplx zeta_weight(const CycleGraph& g, const coeffs::TruncatedMatrix& w1,
                 const coeffs::TruncatedMatrix& w2);

// prod (1 - zeta(N)) over the corresponding enumeration, in enumeration order.
cplx product_expansion(const coeffs::TruncatedMatrix& w1, const coeffs::TruncatedMatrix& w2,
                       int max_halflen, int max_label);
cplx product_expansion_up_to_order(const coeffs::TruncatedMatrix& w1,
                                   const coeffs::TruncatedMatrix& w2, int max_order,
                                   int rebate);

}  // namespace g2sew::graphs
