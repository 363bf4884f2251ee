#pragma once
// Integer flows, their divisors, acyclicity, sink-peeling enumeration and
// admissible pairs.

#include "divisor.hpp"

namespace tropabel {

// A flow on a graph is stored as one signed integer per edge, relative to the
// edge's reference orientation: ψ(e) > 0 means φ(e) = ψ(e) units from
// ends[0] to ends[1], ψ(e) < 0 the reverse, ψ(e) = 0 an unoriented zero edge.
// This is the canonical form: zero edges carry no orientation.
using SignedFlow = IntVec;

// div(φ)(v) = Σ_{t(e)=v} φ(e) - Σ_{s(e)=v} φ(e)
inline IntVec div_flow(const Graph& h, const SignedFlow& psi) { return incidence_apply(h, psi); }

// Contract the zero-flow edges; the remaining digraph must have no directed
// cycle.  A positive loop (after contraction) is a cycle.
inline bool is_acyclic_flow(const Graph& h, const SignedFlow& psi) {
  UnionFind uf(h.nv());
  for (std::size_t e = 0; e < h.ne(); ++e)
    if (psi[e] == 0) uf.unite(h.ends[e][0], h.ends[e][1]);
  std::vector<int> indeg(h.nv(), 0);
  std::vector<std::vector<int>> out(h.nv());
  for (std::size_t e = 0; e < h.ne(); ++e) {
    if (psi[e] == 0) continue;
    int a = uf.find(h.ends[e][0]), b = uf.find(h.ends[e][1]);
    if (psi[e] < 0) std::swap(a, b);
    if (a == b) return false;
    out[a].push_back(b);
    ++indeg[b];
  }
  std::vector<int> stack;
  std::size_t classes = 0, seen = 0;
  for (std::size_t v = 0; v < h.nv(); ++v)
    if (uf.find(static_cast<int>(v)) == static_cast<int>(v)) {
      ++classes;
      if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
    }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int w : out[v])
      if (--indeg[w] == 0) stack.push_back(w);
  }
  return seen == classes;
}

// A digraph on vertices 0..n-1 with arcs (src, dst).
struct Digraph {
  std::size_t n = 0;
  std::vector<std::array<int, 2>> arcs;
};

inline bool is_acyclic(const Digraph& dg) {
  std::vector<int> indeg(dg.n, 0);
  for (auto [a, b] : dg.arcs) {
    if (a == b) return false;
    ++indeg[b];
  }
  std::vector<int> stack;
  for (std::size_t v = 0; v < dg.n; ++v)
    if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
  std::size_t seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (auto [a, b] : dg.arcs)
      if (a == v && --indeg[b] == 0) stack.push_back(b);
  }
  return seen == dg.n;
}

// All nonnegative flows on the arcs of an acyclic digraph with div = D.
// Sink-peeling: a sink v must absorb D(v) through its incoming arcs; every
// splitting of D(v) over them is tried, v is removed, and each arc's source w
// is charged: the residual divisor is D'(w) = D(w) + φ(arc).
inline std::vector<IntVec> flows_with_divisor(const Digraph& dg, const IntVec& D, Int cap = 0) {
  if (!is_acyclic(dg)) throw ValidationError("flows_with_divisor: digraph has a directed cycle");
  if (D.size() != dg.n) throw ValidationError("flows_with_divisor: divisor size mismatch");
  if (degree(D) != 0) return {};
  Int limit = cap > 0 ? cap : env_cap(Int(1) << 22);
  std::vector<IntVec> out;
  IntVec phi(dg.arcs.size(), 0);
  std::vector<bool> alive(dg.n, true);
  IntVec residual = D;
  Int steps = 0;

  std::function<void(std::size_t)> peel = [&](std::size_t remaining) {
    if (++steps > limit) throw CapExceeded("flow enumeration exceeded " + std::to_string(limit) + " steps");
    if (remaining == 0) {
      out.push_back(phi);
      return;
    }
    // lowest-index sink among the alive vertices
    int sink = -1;
    for (std::size_t v = 0; v < dg.n && sink < 0; ++v) {
      if (!alive[v]) continue;
      bool has_out = false;
      for (auto [a, b] : dg.arcs)
        if (a == static_cast<int>(v) && alive[b]) {
          has_out = true;
          break;
        }
      if (!has_out) sink = static_cast<int>(v);
    }
    Int need = residual[sink];
    if (need < 0) return;
    std::vector<std::size_t> inc;
    for (std::size_t i = 0; i < dg.arcs.size(); ++i)
      if (dg.arcs[i][1] == sink && alive[dg.arcs[i][0]]) inc.push_back(i);
    if (inc.empty() && need != 0) return;
    alive[sink] = false;
    // distribute `need` over inc
    std::function<void(std::size_t, Int)> split = [&](std::size_t k, Int left) {
      if (k + 1 >= inc.size()) {
        if (inc.empty()) {
          peel(remaining - 1);
          return;
        }
        std::size_t a = inc[k];
        phi[a] = left;
        residual[dg.arcs[a][0]] += left;
        peel(remaining - 1);
        residual[dg.arcs[a][0]] -= left;
        phi[a] = 0;
        return;
      }
      std::size_t a = inc[k];
      for (Int x = 0; x <= left; ++x) {
        phi[a] = x;
        residual[dg.arcs[a][0]] += x;
        split(k + 1, left - x);
        residual[dg.arcs[a][0]] -= x;
      }
      phi[a] = 0;
    };
    split(0, need);
    alive[sink] = true;
  };
  peel(dg.n);
  std::sort(out.begin(), out.end());
  return out;
}

// Orientation of the non-loop edges of h: +1 follows the reference direction,
// -1 reverses it.  Loops are left out (an acyclic flow vanishes on them).
inline Digraph oriented(const Graph& h, const std::vector<int>& dir, std::vector<int>& arc_edge) {
  Digraph dg;
  dg.n = h.nv();
  arc_edge.clear();
  for (std::size_t e = 0; e < h.ne(); ++e) {
    if (h.is_loop(e)) continue;
    auto a = h.ends[e];
    if (dir[e] < 0) std::swap(a[0], a[1]);
    dg.arcs.push_back(a);
    arc_edge.push_back(static_cast<int>(e));
  }
  return dg;
}

// All acyclic orientations of the non-loop edges (2^m candidates filtered).
inline std::vector<std::vector<int>> acyclic_orientations(const Graph& h) {
  std::vector<int> idx;
  for (std::size_t e = 0; e < h.ne(); ++e)
    if (!h.is_loop(e)) idx.push_back(static_cast<int>(e));
  if (idx.size() > 22) throw CapExceeded("more than 2^22 orientations");
  std::vector<std::vector<int>> out;
  std::vector<int> dir(h.ne(), 0);
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << idx.size()); ++m) {
    for (std::size_t i = 0; i < idx.size(); ++i) dir[idx[i]] = ((m >> i) & 1u) ? -1 : 1;
    Digraph dg;
    dg.n = h.nv();
    for (int e : idx) {
      auto a = h.ends[e];
      if (dir[e] < 0) std::swap(a[0], a[1]);
      dg.arcs.push_back(a);
    }
    if (is_acyclic(dg)) out.push_back(dir);
  }
  return out;
}

// All acyclic flows ψ on h with div(ψ) = target.
inline std::vector<SignedFlow> acyclic_flows_with_divisor(const Graph& h, const IntVec& target) {
  std::set<SignedFlow> found;
  if (degree(target) != 0) return {};
  for (const auto& dir : acyclic_orientations(h)) {
    std::vector<int> arc_edge;
    Digraph dg = oriented(h, dir, arc_edge);
    for (const auto& phi : flows_with_divisor(dg, target)) {
      SignedFlow psi(h.ne(), 0);
      for (std::size_t i = 0; i < arc_edge.size(); ++i) psi[arc_edge[i]] = dir[arc_edge[i]] * phi[i];
      if (is_acyclic_flow(h, psi)) found.insert(psi);
    }
  }
  return {found.begin(), found.end()};
}

struct AdmissiblePair {
  EdgeSet E = 0;
  SignedFlow psi;  // on the edges of subdivide(base, E).result
  IntVec D;        // D0^E + div(ψ), on the vertices of Γ^E
  auto operator<=>(const AdmissiblePair&) const = default;
};

inline bool canonical_less(const AdmissiblePair& a, const AdmissiblePair& b) {
  if (popcount(a.E) != popcount(b.E)) return popcount(a.E) < popcount(b.E);
  if (a.E != b.E) return a.E < b.E;
  return a.psi < b.psi;
}

inline bool is_admissible(const Graph& g, const Polarization& mu, const IntVec& D0, const AdmissiblePair& p) {
  if (!nondisconnecting(g, p.E)) return false;
  Subdivision s = subdivide(g, p.E);
  if (p.psi.size() != s.result.ne()) return false;
  if (!is_acyclic_flow(s.result, p.psi)) return false;
  IntVec D = add(lift_divisor(s, D0), div_flow(s.result, p.psi));
  if (D != p.D) return false;
  for (std::size_t v = 0; v < s.result.nv(); ++v)
    if (s.is_exceptional[v] && D[v] != -1) return false;
  return is_quasistable(g, {p.E, D}, mu);
}

// Adm_Γ(D0): for each nondisconnecting E and each quasistable (E, D), the
// acyclic flows with div = D - D0^E.
inline std::vector<AdmissiblePair> enumerate_admissible(const Graph& g, const Polarization& mu, const IntVec& D0, Int cap = 0) {
  if (D0.size() != g.nv() || mu.size() != g.nv()) throw ValidationError("enumerate_admissible: size mismatch");
  if (Rational(degree(D0)) != degree(mu)) throw ValidationError("deg D0 must equal deg μ");
  if (g.ne() > 20) throw CapExceeded("more than 2^20 edge subsets");
  CheckBudget budget;
  if (cap > 0) budget.cap = cap;
  std::vector<AdmissiblePair> out;
  for (EdgeSet E = 0;; ++E) {
    if (nondisconnecting(g, E)) {
      auto pds = quasistable_for(g, E, mu, budget);
      if (!pds.empty()) {
        Subdivision s = subdivide(g, E);
        IntVec D0E = lift_divisor(s, D0);
        for (const auto& pd : pds)
          for (auto& psi : acyclic_flows_with_divisor(s.result, sub(pd.D, D0E)))
            out.push_back({E, std::move(psi), pd.D});
      }
    }
    if (E == g.all_edges()) break;
  }
  std::sort(out.begin(), out.end(), [](const AdmissiblePair& a, const AdmissiblePair& b) { return canonical_less(a, b); });
  return out;
}

}  // namespace tropabel
