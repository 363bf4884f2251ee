#pragma once
// Metric graphs, the divisor D_{Γ,A}, evaluation of the tropical Abel map by
// point location, and the tropical double-ramification locus.

#include "abel_cone.hpp"

namespace tropabel {

struct MetricGraph {
  Graph g;
  RatVec lengths;  // one positive length per edge
};

inline void validate(const MetricGraph& X) {
  if (X.lengths.size() != X.g.ne()) throw ValidationError("metric graph needs one length per edge");
  for (std::size_t e = 0; e < X.g.ne(); ++e)
    if (sgn(X.lengths[e]) <= 0) throw ValidationError("non-positive length on edge '" + X.g.eid[e] + "'");
}

// ω(v) = 2w(v) + val(v) − 2
inline IntVec canonical_divisor(const Graph& g) {
  IntVec w(g.nv());
  for (std::size_t v = 0; v < g.nv(); ++v)
    w[v] = 2 * g.weight[v] + static_cast<Int>(valence(g, static_cast<int>(v))) - 2;
  return w;
}

// A = (a_0, …, a_n, m): D = m·ω + Σ a_i·leg(i).
inline IntVec target_divisor(const Graph& g, const IntVec& A) {
  if (A.empty()) throw ValidationError("A must end with m");
  std::size_t n1 = A.size() - 1;
  if (n1 > g.legs.size()) throw ValidationError("A has " + std::to_string(n1) + " leg weights but the graph has " +
                                                std::to_string(g.legs.size()) + " legs (missing leg " +
                                                std::to_string(g.legs.size()) + ")");
  if (n1 < g.legs.size()) throw ValidationError("A has fewer leg weights than the graph has legs");
  IntVec D = scale(A.back(), canonical_divisor(g));
  for (std::size_t i = 0; i < n1; ++i) D[g.legs[i]] = add_ck(D[g.legs[i]], A[i]);
  return D;
}

inline Int abel_degree(const Graph& g, const IntVec& A) {
  Int d = mul_ck(A.back(), 2 * genus(g) - 2);
  for (std::size_t i = 0; i + 1 < A.size(); ++i) d = add_ck(d, A[i]);
  return d;
}

// A point of the metric graph: a vertex, or a point inside an edge at
// `offset` from the endpoint with the smaller id.
struct CurvePoint {
  std::string vertex;  // set for vertices
  std::string edge;    // set for edge-interior points
  Rational offset = 0;
  Int coeff = 0;
};

struct Split {
  std::string edge;
  Rational first, second;  // lengths of the halves "<e>/0" and "<e>/1"
  Rational offset;         // position of the exceptional point
};

struct AbelResult {
  StableReduction red;
  Graph model;          // the refinement Γ̂ of the stable model
  IntVec D0;            // D_{Γ,A} pushed to Γ̂
  Polarization mu;      // on Γ̂
  RatVec point;         // lengths of the edges of Γ̂
  std::vector<std::string> free_edges;  // contracted separating edges (free coordinates)
  Location loc;
  PseudoDivisor divisor;
  std::vector<Split> splits;
  std::vector<CurvePoint> support;
};

// μ may be given on Γ (pushed forward) or on the stable model (extended by 0
// to the vertices of Γ̂ erased in the stable model).
inline Polarization polarization_on_model(const Graph& g, const StableReduction& red, const Polarization& mu) {
  if (mu.size() == g.nv()) return pushforward_polarization(red.red, mu);
  if (mu.size() == red.st.nv()) {
    Polarization out(red.st_hat.nv(), Rational(0));
    std::size_t j = 0;
    for (std::size_t v = 0; v < red.st_hat.nv(); ++v)
      if (std::find(red.removed_vertices.begin(), red.removed_vertices.end(), static_cast<int>(v)) ==
          red.removed_vertices.end())
        out[v] = mu[j++];
    return out;
  }
  throw ValidationError("μ must have one entry per vertex of the graph or of its stable model");
}

inline AbelResult abel_eval(const MetricGraph& X, const IntVec& A, const Polarization& mu, bool reverse = false) {
  validate(X);
  const Graph& g = X.g;
  IntVec D = target_divisor(g, A);
  if (Rational(degree(D)) != degree(mu)) throw ValidationError("deg μ must equal Σa_i + m(2g−2)");
  AbelResult r;
  r.red = stable_reduction(forget_legs(g));
  r.model = r.red.st_hat;
  r.D0 = pushforward_divisor(r.red.red, D);
  r.mu = polarization_on_model(g, r.red, mu);
  for (int e : r.red.red.edge_embed) r.point.push_back(X.lengths[e]);
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(r.red.red.contracted, e)) r.free_edges.push_back(g.eid[e]);
  LocateResult L = locate_point(r.model, r.mu, r.D0, r.point, true, reverse);
  r.loc = L.loc;
  const auto& p = r.loc.pair;
  Subdivision s = subdivide(r.model, p.E);
  r.divisor = {p.E, p.D};
  require(sub(p.D, lift_divisor(s, r.D0)) == div_flow(s.result, p.psi), "D − D0^E is not div(φ)");
  require(is_quasistable(r.model, r.divisor, r.mu), "located divisor is not quasistable");
  for (std::size_t e = 0; e < r.model.ne(); ++e) {
    if (!has(p.E, e)) continue;
    Split sp;
    sp.edge = r.model.eid[e];
    sp.first = r.loc.preimage[s.sub[e][0]];
    sp.second = r.loc.preimage[s.sub[e][1]];
    require(sp.first + sp.second == r.point[e] && sgn(sp.first) > 0 && sgn(sp.second) > 0, "split does not cut the edge");
    const auto& ends = r.model.ends[e];
    sp.offset = r.model.vid[ends[0]] <= r.model.vid[ends[1]] ? sp.first : sp.second;
    r.splits.push_back(sp);
  }
  for (std::size_t v = 0; v < s.result.nv(); ++v) {
    if (p.D[v] == 0) continue;
    CurvePoint c;
    c.coeff = p.D[v];
    if (v < r.model.nv()) {
      c.vertex = r.model.vid[v];
    } else {
      for (const auto& sp : r.splits)
        if (s.result.vid[v] == "x:" + sp.edge) {
          c.edge = sp.edge;
          c.offset = sp.offset;
        }
    }
    r.support.push_back(c);
  }
  return r;
}

// Flows φ on Γ (E = ∅, acyclic) with D_{Γ,A} + div(φ) = 0, with their cones.
inline std::vector<AbelCone> drl_enumerate(const Graph& g, const IntVec& A) {
  IntVec D = target_divisor(g, A);
  if (degree(D) != 0) throw ValidationError("the double-ramification locus needs deg D_{Γ,A} = 0");
  std::vector<AbelCone> out;
  for (auto& psi : acyclic_flows_with_divisor(g, scale(-1, D))) {
    AdmissiblePair p{0, psi, IntVec(g.nv(), 0)};
    out.push_back(make_abel_cone(g, p));
  }
  return out;
}

}  // namespace tropabel
