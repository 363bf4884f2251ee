#pragma once
// Divisors, pseudo-divisors, polarizations and quasistability.

#include "graph.hpp"

#include <functional>

namespace tropabel {

using Polarization = RatVec;  // one exact rational per vertex

struct PseudoDivisor {
  EdgeSet E = 0;
  IntVec D;  // indexed by the vertices of subdivide(base, E).result
  auto operator<=>(const PseudoDivisor&) const = default;
};

inline Int degree(const IntVec& D) {
  Int s = 0;
  for (Int x : D) s = add_ck(s, x);
  return s;
}
inline Rational degree(const Polarization& mu) {
  Rational s = 0;
  for (const auto& x : mu) s += x;
  return s;
}

inline Polarization zero_polarization(const Graph& g) { return Polarization(g.nv(), Rational(0)); }

// μ^E on Γ^E: μ on the original vertices, 0 on exceptional ones.
inline Polarization lift_polarization(const Subdivision& s, const Polarization& mu) {
  Polarization out(s.result.nv(), Rational(0));
  for (std::size_t v = 0; v < s.base.nv(); ++v) out[v] = mu[v];
  return out;
}

// D^E on Γ^E: D on the original vertices, 0 on exceptional ones.
inline IntVec lift_divisor(const Subdivision& s, const IntVec& D) {
  IntVec out(s.result.nv(), 0);
  for (std::size_t v = 0; v < s.base.nv(); ++v) out[v] = D[v];
  return out;
}

inline Polarization pushforward_polarization(const Specialization& s, const Polarization& mu) {
  Polarization out(s.target.nv(), Rational(0));
  for (std::size_t v = 0; v < s.source.nv(); ++v) out[s.vertex_map[v]] += mu[v];
  return out;
}
inline IntVec pushforward_divisor(const Specialization& s, const IntVec& D) {
  IntVec out(s.target.nv(), 0);
  for (std::size_t v = 0; v < s.source.nv(); ++v) out[s.vertex_map[v]] += D[v];
  return out;
}

// β_D(V) = deg(D|_V) - μ(V) + δ_V/2
inline Rational beta(const Graph& g, const IntVec& D, const Polarization& mu, std::uint64_t V) {
  if (D.size() != g.nv() || mu.size() != g.nv()) throw ValidationError("beta: divisor/polarization size mismatch");
  Rational b = Rational(static_cast<Int>(delta(g, V)), 2);
  for (std::size_t v = 0; v < g.nv(); ++v)
    if ((V >> v) & 1u) b += Rational(D[v]) - mu[v];
  return b;
}

// Number of subset evaluations performed by quasistability checks, for the
// desk-scale cap.
struct CheckBudget {
  Int used = 0;
  Int cap = env_cap(Int(1) << 20);
  void spend(Int k) {
    used += k;
    if (used > cap)
      throw CapExceeded("more than " + std::to_string(cap) +
                        " subset checks: instance is beyond desk scale (raise with --cap or TAK_CAP)");
  }
};

// Precomputed subset data for repeated quasistability tests on one graph:
// everything is scaled by 2L (L = common denominator of μ) to stay integral.
class QuasistabilityTester {
 public:
  QuasistabilityTester(const Graph& g, const Polarization& mu, int v0) : g_(g), v0_(v0) {
    if (g.nv() > 24) throw CapExceeded("quasistability check over more than 2^24 vertex subsets");
    Int L = 1;
    for (const auto& q : mu) L = std::lcm(L, q.denominator());
    L_ = L;
    std::size_t n = g.nv();
    std::size_t N = std::size_t(1) << n;
    base_.assign(N, 0);
    // base_[V] = L*δ_V - 2L*μ(V)
    std::vector<Int> muL(n);
    for (std::size_t v = 0; v < n; ++v) muL[v] = mul_ck(2, (mu[v] * Rational(L)).numerator());
    std::vector<Int> musum(N, 0);
    for (std::size_t V = 1; V < N; ++V) {
      std::size_t low = __builtin_ctzll(V);
      musum[V] = musum[V & (V - 1)] + muL[low];
    }
    for (std::size_t V = 0; V < N; ++V) base_[V] = mul_ck(L, static_cast<Int>(delta(g, V))) - musum[V];
  }

  std::size_t subsets() const { return base_.size(); }

  bool operator()(const IntVec& D) const {
    std::size_t N = base_.size();
    std::vector<Int> deg(N, 0);
    Int twoL = 2 * L_;
    for (std::size_t V = 1; V + 1 < N; ++V) {
      std::size_t low = __builtin_ctzll(V);
      deg[V] = deg[V & (V - 1)] + D[low];
      Int b = deg[V] * twoL + base_[V];  // = 2L·β_D(V)
      bool strict = (V >> v0_) & 1u;
      if (b < 0 || (strict && b == 0)) return false;
    }
    return true;
  }

 private:
  const Graph& g_;
  int v0_;
  Int L_ = 1;
  std::vector<Int> base_;
};

// Direct definition: all proper subsets V of V(g), exact rationals.
inline bool is_quasistable_divisor(const Graph& g, const IntVec& D, const Polarization& mu, int v0) {
  if (g.nv() > 24) throw CapExceeded("quasistability check over more than 2^24 vertex subsets");
  std::uint64_t full = (std::uint64_t(1) << g.nv()) - 1;
  for (std::uint64_t V = 1; V < full; ++V) {
    int b = sgn(beta(g, D, mu, V));
    if (b < 0 || (((V >> v0) & 1u) && b == 0)) return false;
  }
  return true;
}

inline void check_pseudo_divisor(const Subdivision& s, const PseudoDivisor& pd) {
  if (pd.D.size() != s.result.nv()) throw ValidationError("pseudo-divisor has the wrong number of entries");
  for (std::size_t v = 0; v < s.result.nv(); ++v)
    if (s.is_exceptional[v] && pd.D[v] != -1)
      throw ValidationError("pseudo-divisor must be -1 on exceptional vertex '" + s.result.vid[v] + "'");
}

// Criterion on Γ_E: E nondisconnecting and D restricted to V(Γ) quasistable
// on Γ minus E for μ_E(v) = μ(v) + val_E(v)/2.
inline bool is_quasistable_via_removal(const Graph& g, const PseudoDivisor& pd, const Polarization& mu) {
  if (!nondisconnecting(g, pd.E)) return false;
  Graph h = g;
  h.eid.clear();
  h.ends.clear();
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (!has(pd.E, e)) {
      h.eid.push_back(g.eid[e]);
      h.ends.push_back(g.ends[e]);
    }
  Polarization muE(g.nv());
  IntVec DE(g.nv());
  for (std::size_t v = 0; v < g.nv(); ++v) {
    muE[v] = mu[v] + Rational(static_cast<Int>(valence(g, static_cast<int>(v), pd.E)), 2);
    DE[v] = pd.D[v];
  }
  return is_quasistable_divisor(h, DE, muE, g.v0());
}

// Quasistability of (E, D) on Γ^E, cross-checked against the Γ_E criterion.
inline bool is_quasistable(const Graph& g, const PseudoDivisor& pd, const Polarization& mu) {
  Subdivision s = subdivide(g, pd.E);
  check_pseudo_divisor(s, pd);
  bool a = is_quasistable_divisor(s.result, pd.D, lift_polarization(s, mu), g.v0());
  bool b = is_quasistable_via_removal(g, pd, mu);
  require(a == b, "quasistability: subdivision and edge-removal criteria disagree");
  return a;
}

// ι_*(E, D): contract the sub-edges over the contracted edges of ι.
inline PseudoDivisor pushforward(const Specialization& sp, const PseudoDivisor& pd) {
  const Graph& g = sp.source;
  Subdivision s = subdivide(g, pd.E);
  check_pseudo_divisor(s, pd);
  EdgeSet sub_contracted = 0;
  for (std::size_t f = 0; f < s.result.ne(); ++f)
    if (has(sp.contracted, s.over[f])) sub_contracted |= bit(f);
  Specialization inner = contract(s.result, sub_contracted);
  PseudoDivisor out;
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(pd.E, e) && !has(sp.contracted, e)) out.E |= bit(sp.edge_map[e]);
  Subdivision t = subdivide(sp.target, out.E);
  out.D.assign(t.result.nv(), 0);
  IntVec pushed = pushforward_divisor(inner, pd.D);
  for (std::size_t v = 0; v < inner.target.nv(); ++v) {
    int w = t.result.vertex_index(inner.target.vid[v]);
    if (w < 0) throw InvariantViolation("pushforward: vertex correspondence lost");
    out.D[w] += pushed[v];
  }
  return out;
}

// ---- enumeration of the quasistable poset ---------------------------------

struct QuasistablePoset {
  std::vector<PseudoDivisor> elements;            // sorted canonically
  std::vector<std::pair<int, int>> covers;        // (upper, lower)
};

// Canonical order: by |E|, then E as a bitmask, then D lexicographically.
inline bool canonical_less(const PseudoDivisor& a, const PseudoDivisor& b) {
  if (popcount(a.E) != popcount(b.E)) return popcount(a.E) < popcount(b.E);
  if (a.E != b.E) return a.E < b.E;
  return a.D < b.D;
}

// All D on Γ^E with D = -1 on exceptional vertices that are quasistable.
// Per-vertex values are pruned to the window μ(v) ± δ_v/2 before the full
// subset test.
inline std::vector<PseudoDivisor> quasistable_for(const Graph& g, EdgeSet E, const Polarization& mu, CheckBudget& budget) {
  std::vector<PseudoDivisor> out;
  Subdivision s = subdivide(g, E);
  const Graph& h = s.result;
  Polarization muE = lift_polarization(s, mu);
  Rational d = degree(mu);
  if (d.denominator() != 1) throw ValidationError("polarization degree must be an integer");
  QuasistabilityTester test(h, muE, g.v0());
  std::size_t n = g.nv();
  std::vector<Int> lo(n), hi(n);
  for (std::size_t v = 0; v < n; ++v) {
    Rational half = Rational(static_cast<Int>(delta(h, std::uint64_t(1) << v)), 2);
    lo[v] = ceil_q(muE[v] - half);
    hi[v] = floor_q(muE[v] + half);
  }
  Int target = d.numerator() + popcount(E);  // degree on the original vertices
  IntVec D(h.nv(), 0);
  for (std::size_t v = n; v < h.nv(); ++v) D[v] = -1;
  // suffix bounds for pruning the degree constraint
  std::vector<Int> suf_lo(n + 1, 0), suf_hi(n + 1, 0);
  for (std::size_t v = n; v-- > 0;) {
    suf_lo[v] = suf_lo[v + 1] + lo[v];
    suf_hi[v] = suf_hi[v + 1] + hi[v];
  }
  std::function<void(std::size_t, Int)> rec = [&](std::size_t v, Int acc) {
    if (v == n) {
      if (acc != target) return;
      budget.spend(static_cast<Int>(test.subsets()));
      if (test(D)) out.push_back({E, D});
      return;
    }
    for (Int x = lo[v]; x <= hi[v]; ++x) {
      Int rest = target - acc - x;
      if (rest < suf_lo[v + 1] || rest > suf_hi[v + 1]) continue;
      D[v] = x;
      rec(v + 1, acc + x);
    }
    D[v] = 0;
  };
  rec(0, 0);
  return out;
}

// Merging the exceptional vertex of e into endpoint ends[side].
inline PseudoDivisor merge_exceptional(const Graph& g, const PseudoDivisor& pd, std::size_t e, int side) {
  Subdivision s = subdivide(g, pd.E);
  PseudoDivisor out;
  out.E = pd.E & ~bit(e);
  Subdivision t = subdivide(g, out.E);
  out.D.assign(t.result.nv(), 0);
  for (std::size_t v = 0; v < s.result.nv(); ++v) {
    int target = static_cast<int>(v) == s.exceptional[e] ? g.ends[e][side] : t.result.vertex_index(s.result.vid[v]);
    out.D[target] += pd.D[v];
  }
  return out;
}

inline QuasistablePoset enumerate_quasistable(const Graph& g, const Polarization& mu, Int cap = 0) {
  if (mu.size() != g.nv()) throw ValidationError("polarization size mismatch");
  if (g.ne() > 20) throw CapExceeded("more than 2^20 edge subsets");
  CheckBudget budget;
  if (cap > 0) budget.cap = cap;
  QuasistablePoset P;
  for (EdgeSet E = 0; E <= g.all_edges(); ++E) {
    for (auto& pd : quasistable_for(g, E, mu, budget)) P.elements.push_back(std::move(pd));
    if (E == g.all_edges()) break;
  }
  std::sort(P.elements.begin(), P.elements.end(), [](const PseudoDivisor& a, const PseudoDivisor& b) { return canonical_less(a, b); });
  std::map<PseudoDivisor, int> index;
  for (std::size_t i = 0; i < P.elements.size(); ++i) index[P.elements[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < P.elements.size(); ++i) {
    const auto& pd = P.elements[i];
    std::set<int> lower;
    for (std::size_t e = 0; e < g.ne(); ++e) {
      if (!has(pd.E, e)) continue;
      for (int side = 0; side < 2; ++side) {
        PseudoDivisor q = merge_exceptional(g, pd, e, side);
        auto it = index.find(q);
        // specialization preserves quasistability, so the image must be present
        require(it != index.end(), "poset: specialization of a quasistable pseudo-divisor is not quasistable");
        lower.insert(it->second);
      }
    }
    for (int j : lower) P.covers.push_back({static_cast<int>(i), j});
  }
  return P;
}

// Orbits of the poset under permutations of parallel edges (edges with the
// same endpoints).  An orbit is determined by D on V(Γ) and the number of
// E-edges in each parallel class.
struct PosetOrbits {
  std::vector<std::pair<IntVec, std::vector<int>>> keys;  // (D on V(Γ), count per parallel class)
  std::vector<int> orbit_of;                              // element -> orbit
  std::vector<std::pair<int, int>> covers;
};

inline std::vector<int> parallel_classes(const Graph& g) {
  std::vector<int> cls(g.ne(), -1);
  int next = 0;
  for (std::size_t e = 0; e < g.ne(); ++e) {
    if (cls[e] >= 0) continue;
    cls[e] = next;
    auto key = [&](std::size_t f) {
      auto a = g.ends[f];
      if (a[0] > a[1]) std::swap(a[0], a[1]);
      return a;
    };
    for (std::size_t f = e + 1; f < g.ne(); ++f)
      if (cls[f] < 0 && key(f) == key(e)) cls[f] = next;
    ++next;
  }
  return cls;
}

inline PosetOrbits poset_orbits(const Graph& g, const QuasistablePoset& P) {
  PosetOrbits O;
  auto cls = parallel_classes(g);
  int ncls = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
  std::map<std::pair<IntVec, std::vector<int>>, int> idx;
  std::vector<std::pair<IntVec, std::vector<int>>> raw;
  for (const auto& pd : P.elements) {
    IntVec D(pd.D.begin(), pd.D.begin() + static_cast<long>(g.nv()));
    std::vector<int> cnt(ncls, 0);
    for (std::size_t e = 0; e < g.ne(); ++e)
      if (has(pd.E, e)) ++cnt[cls[e]];
    raw.push_back({D, cnt});
    idx.emplace(raw.back(), 0);
  }
  int k = 0;
  for (auto& [key, id] : idx) {
    id = k++;
    O.keys.push_back(key);
  }
  for (const auto& r : raw) O.orbit_of.push_back(idx[r]);
  std::set<std::pair<int, int>> cov;
  for (auto [a, b] : P.covers) cov.insert({O.orbit_of[a], O.orbit_of[b]});
  O.covers.assign(cov.begin(), cov.end());
  return O;
}

}  // namespace tropabel
