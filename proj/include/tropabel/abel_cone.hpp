#pragma once
// The cones C and K of an admissible pair, their faces, the fan they form,
// and point location in it.

#include "cone.hpp"
#include "flow.hpp"

#include <optional>

namespace tropabel {

// Everything attached to one admissible pair (E, ψ) on Γ.
struct AbelCone {
  AdmissiblePair pair;
  Subdivision sub;
  CycleBasis cb;      // spanning tree avoiding E
  IntMat C_eqs;       // cycle equations on R^{E(Γ^E)}
  IntMat G;           // integral inverse of F: one row (covector on R^{E(Γ)}) per edge of Γ^E
  IntMat K_eqs;       // cycle equations of the non-E fundamental cycles, on R^{E(Γ)}
  ConeQQ C, K;

  std::size_t m() const { return sub.base.ne(); }
  std::size_t msub() const { return sub.result.ne(); }

  // F: sum the halves over each edge.
  IntVec F(const IntVec& x) const {
    IntVec u(m(), 0);
    for (std::size_t f = 0; f < msub(); ++f) u[sub.over[f]] = add_ck(u[sub.over[f]], x[f]);
    return u;
  }
  RatVec F(const RatVec& x) const {
    RatVec u(m(), Rational(0));
    for (std::size_t f = 0; f < msub(); ++f) u[sub.over[f]] += x[f];
    return u;
  }
  IntVec Ginv(const IntVec& u) const { return mat_vec(G, u); }
  RatVec Ginv(const RatVec& u) const {
    RatVec x(msub());
    for (std::size_t f = 0; f < msub(); ++f) x[f] = dot(G[f], u);
    return x;
  }

  // Open-cone membership through the explicit inverse: x ∈ K° iff the
  // non-E cycle equations hold and every split coordinate is positive.
  bool interior_via_inverse(const RatVec& u) const {
    for (const auto& a : K_eqs)
      if (sgn(dot(a, u)) != 0) return false;
    for (const auto& row : G)
      if (sgn(dot(row, u)) <= 0) return false;
    return true;
  }
};

// One equality per fundamental cycle γ of Γ: Σ_{e'} γ(b(e'))·ψ(e')·x_{e'} = 0.
inline IntMat cone_C_equations(const Subdivision& s, const CycleBasis& cb, const SignedFlow& psi) {
  IntMat eqs;
  for (const auto& gamma : cb.cycles) {
    IntVec row(s.result.ne(), 0);
    for (std::size_t f = 0; f < s.result.ne(); ++f) row[f] = mul_ck(gamma[s.over[f]], psi[f]);
    if (!is_zero(row)) eqs.push_back(primitive_line(row));
  }
  return eqs;
}

inline ConeQQ cone_C(const Graph& g, EdgeSet E, const SignedFlow& psi) {
  Subdivision s = subdivide(g, E);
  CycleBasis cb = cycle_basis(g, E);
  IntMat ineqs;
  for (std::size_t f = 0; f < s.result.ne(); ++f) ineqs.push_back(unit_vector(s.result.ne(), f));
  return make_cone(s.result.ne(), cone_C_equations(s, cb, psi), ineqs);
}

inline AbelCone make_abel_cone(const Graph& g, const AdmissiblePair& p, bool with_rays = true) {
  AbelCone ac;
  ac.pair = p;
  if (!nondisconnecting(g, p.E)) throw ValidationError("cone_K: E disconnects the graph");
  ac.sub = subdivide(g, p.E);
  ac.cb = cycle_basis(g, p.E);
  const auto& s = ac.sub;
  std::size_t m = g.ne(), ms = s.result.ne();
  if (p.psi.size() != ms) throw ValidationError("flow does not live on the subdivision");
  ac.C_eqs = cone_C_equations(s, ac.cb, p.psi);
  std::vector<int> cycle_of(m, -1);
  for (std::size_t i = 0; i < ac.cb.cycle_edge.size(); ++i) cycle_of[ac.cb.cycle_edge[i]] = static_cast<int>(i);
  ac.G.assign(ms, IntVec(m, 0));
  for (std::size_t e = 0; e < m; ++e) {
    if (!has(p.E, e)) {
      ac.G[s.sub[e][0]][e] = 1;
      continue;
    }
    int h0 = s.sub[e][0], h1 = s.sub[e][1];
    if (p.psi[h0] - p.psi[h1] != -1) throw ValidationError("div(φ) must be -1 on exceptional vertex of '" + g.eid[e] + "'");
    const IntVec& gamma = ac.cb.cycles[cycle_of[e]];
    IntVec row(m, 0);
    row[e] = p.psi[h1];
    for (std::size_t t = 0; t < m; ++t)
      if (has(ac.cb.tree, t) && gamma[t] != 0) row[t] = add_ck(row[t], mul_ck(gamma[t], p.psi[s.sub[t][0]]));
    ac.G[h0] = row;
    IntVec other = scale(-1, row);
    other[e] = add_ck(other[e], 1);
    ac.G[h1] = other;
  }
  for (std::size_t i = 0; i < ac.cb.cycle_edge.size(); ++i) {
    int e = ac.cb.cycle_edge[i];
    if (has(p.E, e)) continue;
    IntVec row(m, 0);
    for (std::size_t f = 0; f < m; ++f)
      if (ac.cb.cycles[i][f] != 0) row[f] = mul_ck(ac.cb.cycles[i][f], p.psi[s.sub[f][0]]);
    if (!is_zero(row)) ac.K_eqs.push_back(primitive_line(row));
  }
  if (with_rays) {
    IntMat orth;
    for (std::size_t f = 0; f < ms; ++f) orth.push_back(unit_vector(ms, f));
    ac.C = make_cone(ms, ac.C_eqs, orth);
    ac.K = make_cone(m, ac.K_eqs, ac.G);
    // F maps the rays of C bijectively onto the rays of K
    std::set<IntVec> img, kr(ac.K.rays.begin(), ac.K.rays.end());
    for (const auto& r : ac.C.rays) img.insert(ac.F(r));
    require(img == kr, "F does not map the rays of C onto the rays of K");
  }
  return ac;
}

// dim K = |E(Γ)| - |F| + b0(Γ_{E∪F}) - 1, F the non-E edges with nonzero flow.
inline std::size_t dimension_formula(const Graph& g, EdgeSet E, const SignedFlow& psi) {
  Subdivision s = subdivide(g, E);
  EdgeSet F = 0;
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (!has(E, e) && psi[s.sub[e][0]] != 0) F |= bit(e);
  return g.ne() - popcount(F) + b0(g, E | F) - 1;
}

// ---- faces as specializations ----------------------------------------------

// A face of C is cut out by setting a set S of sub-edge coordinates to zero.
// Contracting S gives a triple (Γ', E', φ'): Γ' = Γ / Z with Z the edges
// whose sub-edges all lie in S, E' the edges of E with no half in S.
struct FaceKey {
  EdgeSet Z = 0;
  EdgeSet Eprime = 0;  // indexed by E(Γ)
  IntVec psi;          // flow on Γ'^{E'} edges, in order (two entries per E' edge)
  auto operator<=>(const FaceKey&) const = default;
};

inline FaceKey face_key(const AbelCone& ac, EdgeSet S) {
  FaceKey k;
  const auto& s = ac.sub;
  for (std::size_t e = 0; e < ac.m(); ++e) {
    bool a = has(S, s.sub[e][0]);
    bool b = s.sub[e][1] < 0 ? a : has(S, s.sub[e][1]);
    if (a && b) {
      k.Z |= bit(e);
      continue;
    }
    if (s.sub[e][1] < 0) {
      k.psi.push_back(ac.pair.psi[s.sub[e][0]]);
    } else if (!a && !b) {
      k.Eprime |= bit(e);
      k.psi.push_back(ac.pair.psi[s.sub[e][0]]);
      k.psi.push_back(ac.pair.psi[s.sub[e][1]]);
    } else {
      k.psi.push_back(ac.pair.psi[s.sub[e][a ? 1 : 0]]);
    }
  }
  return k;
}

// Is the flow left on Γ^E / S acyclic?
inline bool contraction_is_acyclic(const AbelCone& ac, EdgeSet S) {
  const Graph& h = ac.sub.result;
  UnionFind uf(h.nv());
  for (std::size_t f = 0; f < h.ne(); ++f)
    if (has(S, f)) uf.unite(h.ends[f][0], h.ends[f][1]);
  Graph q;
  q.vid = h.vid;
  q.weight = h.weight;
  SignedFlow psi;
  for (std::size_t f = 0; f < h.ne(); ++f) {
    if (has(S, f)) continue;
    q.eid.push_back(h.eid[f]);
    q.ends.push_back({uf.find(h.ends[f][0]), uf.find(h.ends[f][1])});
    psi.push_back(ac.pair.psi[f]);
  }
  return is_acyclic_flow(q, psi);
}

// Zero sets of the faces of C, computed two ways: from the rays of C (closed
// coordinate sets) and from acyclicity of the contracted flow.
inline std::vector<EdgeSet> face_supports(const AbelCone& ac) {
  std::size_t ms = ac.msub();
  if (ms > 20) throw CapExceeded("face enumeration over more than 2^20 coordinate subsets");
  std::set<EdgeSet> closed, acyclic;
  for (EdgeSet S = 0; S < (EdgeSet(1) << ms); ++S) {
    EdgeSet cl = (EdgeSet(1) << ms) - 1;
    for (const auto& r : ac.C.rays) {
      bool in = true;
      for (std::size_t f = 0; f < ms && in; ++f)
        if (has(S, f) && r[f] != 0) in = false;
      if (!in) continue;
      for (std::size_t f = 0; f < ms; ++f)
        if (r[f] != 0) cl &= ~bit(f);
    }
    closed.insert(cl);
    if (contraction_is_acyclic(ac, S)) acyclic.insert(S);
  }
  require(closed == acyclic, "faces of C from rays and from acyclic contractions disagree");
  return {closed.begin(), closed.end()};
}

// Provenance of a face: the specialized graph and the pair on it.
struct FaceProvenance {
  Specialization spec;  // Γ -> Γ'
  AdmissiblePair pair;  // on Γ'
};

inline FaceProvenance face_provenance(const Graph& g, const IntVec& D0, const FaceKey& k) {
  FaceProvenance fp;
  fp.spec = contract(g, k.Z);
  const Graph& t = fp.spec.target;
  for (std::size_t e = 0; e < t.ne(); ++e)
    if (has(k.Eprime, fp.spec.edge_embed[e])) fp.pair.E |= bit(e);
  fp.pair.psi = k.psi;
  Subdivision s = subdivide(t, fp.pair.E);
  fp.pair.D = add(lift_divisor(s, pushforward_divisor(fp.spec, D0)), div_flow(s.result, fp.pair.psi));
  return fp;
}

// ---- the fan ---------------------------------------------------------------

struct FanCone {
  int id = 0;
  FaceKey key;
  int source_pair = 0;  // index into AbelFan::adm of a pair having this face
  EdgeSet S = 0;        // zero set in that pair's C
  ConeQQ K;             // in R^{E(Γ)}
  std::vector<int> faces;  // ids of proper faces
  bool maximal = false;    // provenance on Γ itself
};

struct AbelFan {
  Graph g;
  Polarization mu;
  IntVec D0;
  std::vector<AdmissiblePair> adm;
  std::vector<AbelCone> cones;  // one per admissible pair
  std::vector<FanCone> members;
  std::vector<int> maximal;
  std::map<FaceKey, int> by_key;
};

inline ConeQQ face_cone(const AbelCone& ac, EdgeSet S) {
  IntMat eqs = ac.K_eqs, ineqs;
  for (std::size_t f = 0; f < ac.msub(); ++f)
    (has(S, f) ? eqs : ineqs).push_back(ac.G[f]);
  if (ineqs.empty()) ineqs.push_back(IntVec(ac.m(), 0));
  return make_cone(ac.m(), eqs, ineqs);
}

inline AbelFan build_fan(const Graph& g, const Polarization& mu, const IntVec& D0, Int cap = 0) {
  AbelFan fan;
  fan.g = g;
  fan.mu = mu;
  fan.D0 = D0;
  fan.adm = enumerate_admissible(g, mu, D0, cap);
  for (const auto& p : fan.adm) fan.cones.push_back(make_abel_cone(g, p));
  for (std::size_t i = 0; i < fan.cones.size(); ++i) {
    const AbelCone& ac = fan.cones[i];
    auto supports = face_supports(ac);
    std::vector<int> ids;
    for (EdgeSet S : supports) {
      FaceKey k = face_key(ac, S);
      auto it = fan.by_key.find(k);
      if (it != fan.by_key.end()) {
        ids.push_back(it->second);
        continue;
      }
      FanCone fc;
      fc.id = static_cast<int>(fan.members.size());
      fc.key = k;
      fc.source_pair = static_cast<int>(i);
      fc.S = S;
      fc.K = face_cone(ac, S);
      // rays of the face are the images of the rays of C vanishing on S
      std::set<IntVec> img, kr(fc.K.rays.begin(), fc.K.rays.end());
      for (const auto& r : ac.C.rays) {
        bool in = true;
        for (std::size_t f = 0; f < ac.msub(); ++f)
          if (has(S, f) && r[f] != 0) in = false;
        if (in) img.insert(ac.F(r));
      }
      require(img == kr, "face of K and image of the face of C differ");
      fc.maximal = (S == 0);
      fan.by_key[k] = fc.id;
      ids.push_back(fc.id);
      fan.members.push_back(std::move(fc));
    }
    require(!ids.empty(), "cone without faces");
  }
  // face lists: S ⊆ S' within some pair means face(S') ⊆ face(S)
  for (std::size_t i = 0; i < fan.cones.size(); ++i) {
    const AbelCone& ac = fan.cones[i];
    auto supports = face_supports(ac);
    for (EdgeSet S : supports) {
      int a = fan.by_key[face_key(ac, S)];
      for (EdgeSet T : supports)
        if (T != S && (S & T) == S) fan.members[a].faces.push_back(fan.by_key[face_key(ac, T)]);
    }
  }
  for (auto& m : fan.members) {
    std::sort(m.faces.begin(), m.faces.end());
    m.faces.erase(std::unique(m.faces.begin(), m.faces.end()), m.faces.end());
    if (m.maximal) fan.maximal.push_back(m.id);
  }
  return fan;
}

// ---- point location -----------------------------------------------------------

struct Location {
  int index = -1;        // into the admissible list
  AdmissiblePair pair;
  RatVec preimage;       // point of C° over x (edge lengths of Γ^E)
};

// Scan the admissible pairs in canonical order; with `check_unique` the scan
// continues and a second hit is an error.
inline std::optional<Location> locate_in(const std::vector<AbelCone>& cones, const RatVec& x, bool check_unique = true,
                                         bool reverse = false) {
  std::optional<Location> hit;
  std::size_t n = cones.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = reverse ? n - 1 - k : k;
    if (!cones[i].interior_via_inverse(x)) continue;
    if (hit) throw InvariantViolation("point lies in two open cones of the fan");
    hit = Location{static_cast<int>(i), cones[i].pair, cones[i].Ginv(x)};
    if (!check_unique) break;
  }
  return hit;
}

struct LocateResult {
  Specialization spec;  // contraction of the zero coordinates
  Polarization mu;      // pushed to spec.target
  IntVec D0;            // pushed to spec.target
  Location loc;
};

// Locate x ∈ R^{E(Γ)}_{≥0}: zero coordinates are contracted first and the
// point is located in the fan of the specialized graph.
inline LocateResult locate_point(const Graph& g, const Polarization& mu, const IntVec& D0, const RatVec& x,
                                 bool check_unique = true, bool reverse = false) {
  if (x.size() != g.ne()) throw ValidationError("point has the wrong number of coordinates");
  EdgeSet Z = 0;
  for (std::size_t e = 0; e < g.ne(); ++e) {
    if (sgn(x[e]) < 0) throw ValidationError("negative coordinate at edge '" + g.eid[e] + "'");
    if (sgn(x[e]) == 0) Z |= bit(e);
  }
  LocateResult r;
  r.spec = contract(g, Z);
  r.mu = pushforward_polarization(r.spec, mu);
  r.D0 = pushforward_divisor(r.spec, D0);
  RatVec y;
  for (int e : r.spec.edge_embed) y.push_back(x[e]);
  auto adm = enumerate_admissible(r.spec.target, r.mu, r.D0);
  std::vector<AbelCone> cones;
  for (const auto& p : adm) cones.push_back(make_abel_cone(r.spec.target, p, false));
  auto hit = locate_in(cones, y, check_unique, reverse);
  if (!hit) throw InvariantViolation("point is not covered by the fan");
  r.loc = *hit;
  return r;
}

}  // namespace tropabel
