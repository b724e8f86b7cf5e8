#include <g2sew/graphs.hpp>

#include <algorithm>
#include <limits>
#include <utility>

namespace g2sew::graphs {
namespace {

struct PairAlphabet {
  std::vector<std::pair<int, int>> letters;  // sorted lexicographically
  std::vector<int> cost;                     // a + b - rebate
  int min_cost = 1;
};

PairAlphabet pair_alphabet(int max_label, int rebate, int budget) {
  PairAlphabet a;
  for (int x = 1; x <= max_label; ++x)
    for (int y = 1; y <= max_label; ++y) {
      const int c = x + y - rebate;
      if (c <= budget) {
        a.letters.emplace_back(x, y);
        a.cost.push_back(c);
      }
    }
  a.min_cost = 2 - rebate;
  return a;
}

// Exact-length-n Lyndon words over the pair alphabet in lexicographic order,
// pruned by the cumulative cost budget.  Prenecklace recursion: w[0..t-1] is
// a prenecklace whose longest Lyndon prefix has period p; at t == n the word
// is Lyndon iff p == n.  Cost is not monotone in the letter order, so the
// candidate loop filters rather than breaks.
void lyndon_exact(int n, const PairAlphabet& a, long budget, std::vector<int>& w, int t, int p,
                  long used, std::vector<CycleGraph>& out) {
  if (t == n) {
    if (p == n) {
      CycleGraph g;
      g.labels.reserve(2 * n);
      for (int i = 0; i < n; ++i) {
        g.labels.push_back(a.letters[w[i]].first);
        g.labels.push_back(a.letters[w[i]].second);
      }
      g.rotationless = true;  // Lyndon words are aperiodic
      out.push_back(std::move(g));
    }
    return;
  }
  const long remaining_min = long(n - t - 1) * a.min_cost;
  const int forced = w[t - p];
  if (used + a.cost[forced] + remaining_min <= budget) {
    w[t] = forced;
    lyndon_exact(n, a, budget, w, t + 1, p, used + a.cost[forced], out);
  }
  for (int c = forced + 1; c < int(a.letters.size()); ++c) {
    if (used + a.cost[c] + remaining_min > budget) continue;
    w[t] = c;
    lyndon_exact(n, a, budget, w, t + 1, t + 1, used + a.cost[c], out);
  }
}

std::vector<CycleGraph> enumerate_impl(int max_halflen, const PairAlphabet& a, long budget) {
  std::vector<CycleGraph> out;
  std::vector<int> w;
  for (int n = 1; n <= max_halflen; ++n) {
    if (long(n) * a.min_cost > budget) break;
    w.assign(n, 0);
    for (int c = 0; c < int(a.letters.size()); ++c) {
      if (a.cost[c] + long(n - 1) * a.min_cost > budget) continue;
      w[0] = c;
      lyndon_exact(n, a, budget, w, 1, 1, a.cost[c], out);
    }
  }
  return out;
}

void check_rebate(int rebate) {
  if (rebate != 0 && rebate != 1)
    throw DomainViolation("graphs: order rebate must be 0 (A-type) or 1 (F-type)");
}

}  // namespace

CycleGraph CycleGraph::make(std::vector<int> labels) {
  if (labels.size() < 2 || labels.size() % 2 != 0)
    throw IndexOutOfRange("CycleGraph: label sequence must have even length >= 2");
  for (int k : labels)
    if (k < 1) throw IndexOutOfRange("CycleGraph: labels must be positive");
  const int n = int(labels.size()) / 2;
  CycleGraph g;
  g.labels = labels;
  g.rotationless = true;
  std::vector<int> rot = labels;
  for (int j = 1; j < n; ++j) {
    std::rotate(rot.begin(), rot.begin() + 2, rot.end());
    if (rot == labels) g.rotationless = false;
    if (rot < g.labels) g.labels = rot;
  }
  return g;
}

int CycleGraph::min_order(int rebate) const {
  check_rebate(rebate);
  int sum = 0;
  for (int k : labels) sum += k;
  return sum - rebate * halflen();
}

std::vector<CycleGraph> enumerate_rotationless(int max_halflen, int max_label) {
  if (max_halflen < 1 || max_label < 1)
    throw DomainViolation("enumerate_rotationless: bounds must be >= 1");
  const long unbounded = std::numeric_limits<long>::max() / 4;
  return enumerate_impl(max_halflen, pair_alphabet(max_label, 0, int(1e9)), unbounded);
}

std::vector<CycleGraph> enumerate_up_to_order(int max_order, int rebate) {
  check_rebate(rebate);
  if (max_order < 1) throw DomainViolation("enumerate_up_to_order: budget must be >= 1");
  // A pair (k, 1) costs k + 1 - rebate, so no feasible label exceeds
  // max_order - 1 + rebate; the cheapest pair costs 2 - rebate.
  const int max_label = max_order - 1 + rebate;
  if (max_label < 1) return {};
  const int max_halflen = max_order / (2 - rebate);
  return enumerate_impl(max_halflen, pair_alphabet(max_label, rebate, max_order), max_order);
}

cplx zeta_weight(const CycleGraph& g, const coeffs::TruncatedMatrix& w1,
                 const coeffs::TruncatedMatrix& w2) {
  if (g.labels.size() < 2 || g.labels.size() % 2 != 0)
    throw IndexOutOfRange("zeta_weight: malformed cycle graph");
  const int n = int(g.labels.size()) / 2;
  cplx prod(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    prod *= w1.at(g.labels[2 * i], g.labels[2 * i + 1]);
    prod *= w2.at(g.labels[2 * i + 1], g.labels[(2 * i + 2) % (2 * n)]);
  }
  return prod;
}

cplx product_expansion(const coeffs::TruncatedMatrix& w1, const coeffs::TruncatedMatrix& w2,
                       int max_halflen, int max_label) {
  cplx prod(1.0, 0.0);
  for (const CycleGraph& g : enumerate_rotationless(max_halflen, max_label))
    prod *= 1.0 - zeta_weight(g, w1, w2);
  return prod;
}

cplx product_expansion_up_to_order(const coeffs::TruncatedMatrix& w1,
                                   const coeffs::TruncatedMatrix& w2, int max_order,
                                   int rebate) {
  cplx prod(1.0, 0.0);
  for (const CycleGraph& g : enumerate_up_to_order(max_order, rebate))
    prod *= 1.0 - zeta_weight(g, w1, w2);
  return prod;
}

}  // namespace g2sew::graphs
