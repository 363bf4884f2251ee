#pragma once
// Random instances and the invariant checks run by `tropabel verify` and the
// acceptance suite.  Every check returns a tally instead of throwing so that
// a run reports all failures.

#include "semigroup.hpp"
#include "tropical_abel.hpp"

#include <random>

namespace tropabel {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(gen); }
  bool coin() { return uniform(0, 1) == 1; }
  Rational rational(Int pmin, Int pmax, Int qmax) { return Rational(uniform(pmin, pmax), uniform(1, qmax)); }
};

struct Tally {
  std::size_t checked = 0, failed = 0;
  std::vector<std::string> notes;  // first few failures
  void ok() { ++checked; }
  void fail(const std::string& what) {
    ++checked;
    ++failed;
    if (notes.size() < 8) notes.push_back(what);
  }
  void expect(bool cond, const std::string& what) { cond ? ok() : fail(what); }
  void merge(const Tally& t) {
    checked += t.checked;
    failed += t.failed;
    for (const auto& n : t.notes)
      if (notes.size() < 8) notes.push_back(n);
  }
  bool passed() const { return failed == 0 && checked > 0; }
};

// Connected multigraph with loops allowed, 1..max_v vertices, up to max_e
// edges, leg 0 at a random vertex.
inline Graph random_graph(Rng& rng, int max_v, int max_e, bool weights = false) {
  int nv = static_cast<int>(rng.uniform(1, max_v));
  int ne = static_cast<int>(rng.uniform(std::max(nv - 1, 1), std::max(max_e, nv - 1)));
  GraphSpec spec;
  for (int v = 0; v < nv; ++v) spec.vertices.push_back({"v" + std::to_string(v), weights ? rng.uniform(0, 1) : 0});
  int e = 0;
  auto name = [](int i) { return "e" + std::to_string(i); };
  for (int v = 1; v < nv; ++v) {  // random spanning tree
    int u = static_cast<int>(rng.uniform(0, v - 1));
    std::array<std::string, 2> ends{"v" + std::to_string(u), "v" + std::to_string(v)};
    if (rng.coin()) std::swap(ends[0], ends[1]);
    spec.edges.push_back({name(e++), ends});
  }
  while (e < ne) {
    int a = static_cast<int>(rng.uniform(0, nv - 1)), b = static_cast<int>(rng.uniform(0, nv - 1));
    spec.edges.push_back({name(e++), {"v" + std::to_string(a), "v" + std::to_string(b)}});
  }
  spec.legs[0] = "v" + std::to_string(rng.uniform(0, nv - 1));
  return build_graph(spec);
}

inline IntVec random_divisor(Rng& rng, std::size_t nv, Int lo, Int hi) {
  IntVec D(nv);
  for (auto& x : D) x = rng.uniform(lo, hi);
  return D;
}

inline Polarization random_polarization(Rng& rng, std::size_t nv, Int deg) {
  Polarization mu(nv);
  Rational rest = deg;
  for (std::size_t v = 0; v + 1 < nv; ++v) {
    mu[v] = rng.rational(-4, 4, 3);
    rest -= mu[v];
  }
  mu[nv - 1] = rest;
  return mu;
}

inline RatVec random_point(Rng& rng, std::size_t m) {
  RatVec x(m);
  for (auto& q : x) q = rng.rational(1, 24, 5);
  return x;
}

// ---- checks --------------------------------------------------------------

// Each sampled positive point lies in exactly one open cone K° among the
// admissible pairs, by the explicit inverse and by the H-representation,
// and point location returns that cone.
inline Tally partition_check(const AbelFan& fan, Rng& rng, std::size_t npoints) {
  Tally t;
  for (std::size_t k = 0; k < npoints; ++k) {
    RatVec x = random_point(rng, fan.g.ne());
    std::vector<int> a, b;
    for (std::size_t i = 0; i < fan.cones.size(); ++i) {
      if (fan.cones[i].interior_via_inverse(x)) a.push_back(static_cast<int>(i));
      if (fan.cones[i].K.in_relative_interior(x)) b.push_back(static_cast<int>(i));
    }
    std::optional<Location> loc;
    try {
      loc = locate_in(fan.cones, x, true);
    } catch (const InvariantViolation&) {
    }
    bool good = a.size() == 1 && a == b && loc && loc->index == a[0];
    t.expect(good, "point " + [&] {
      std::string s;
      for (const auto& q : x) s += to_string(q) + " ";
      return s;
    }() + "lies in " + std::to_string(a.size()) + "/" + std::to_string(b.size()) + " open cones");
  }
  return t;
}

// dim K from the rank equals |E| − |F| + b0(Γ_{E∪F}) − 1 on the provenance graph.
inline Tally dimension_check(const AbelFan& fan) {
  Tally t;
  for (const auto& m : fan.members) {
    FaceProvenance fp = face_provenance(fan.g, fan.D0, m.key);
    std::size_t f = dimension_formula(fp.spec.target, fp.pair.E, fp.pair.psi);
    std::size_t r = rank(m.K.rays, fan.g.ne());
    t.expect(f == m.K.dim && r == m.K.dim, "cone " + std::to_string(m.id) + ": formula " + std::to_string(f) +
                                               ", rank " + std::to_string(r) + ", dim " + std::to_string(m.K.dim));
  }
  return t;
}

inline std::set<IntVec> ray_set(const IntMat& rays) { return {rays.begin(), rays.end()}; }

// Every face of a cone is a cone of the fan, and any two cones meet in a
// common face which is again a cone of the fan.
inline Tally fan_axioms_check(const AbelFan& fan) {
  Tally t;
  std::set<std::set<IntVec>> members;
  for (const auto& m : fan.members) members.insert(ray_set(m.K.rays));
  t.expect(members.size() == fan.members.size(), "two fan cones have the same rays");
  for (const auto& m : fan.members)
    for (const auto& f : all_faces(m.K))
      t.expect(members.count(ray_set(f)) == 1, "a face of cone " + std::to_string(m.id) + " is missing from the fan");
  for (std::size_t i = 0; i < fan.members.size(); ++i)
    for (std::size_t j = i + 1; j < fan.members.size(); ++j) {
      const ConeQQ& a = fan.members[i].K;
      const ConeQQ& b = fan.members[j].K;
      ConeQQ c = intersect(a, b);
      bool good = is_face_of(c.rays, a) && is_face_of(c.rays, b) && members.count(ray_set(c.rays)) == 1;
      t.expect(good, "cones " + std::to_string(i) + " and " + std::to_string(j) + " do not meet in a common face");
    }
  return t;
}

// Unique solution of A x = b over Q (A has full column rank).
inline std::optional<RatVec> solve_unique(const IntMat& A, const RatVec& b, std::size_t n) {
  std::vector<RatVec> M;
  for (std::size_t i = 0; i < A.size(); ++i) {
    RatVec row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = A[i][j];
    row[n] = b[i];
    M.push_back(row);
  }
  std::size_t r = 0;
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < n && r < M.size(); ++c) {
    std::size_t p = r;
    while (p < M.size() && sgn(M[p][c]) == 0) ++p;
    if (p == M.size()) return std::nullopt;
    std::swap(M[p], M[r]);
    for (std::size_t i = 0; i < M.size(); ++i) {
      if (i == r || sgn(M[i][c]) == 0) continue;
      Rational f = M[i][c] / M[r][c];
      for (std::size_t j = c; j <= n; ++j) M[i][j] -= f * M[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  if (piv.size() != n) return std::nullopt;
  for (std::size_t i = r; i < M.size(); ++i)
    if (sgn(M[i][n]) != 0) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[piv[i]] = M[i][n] / M[i][piv[i]];
  return x;
}

// F: C → K is a lattice isomorphism: the integral inverse G undoes F on
// random lattice points of C, agrees with solving the cycle equations
// together with F x = u, and lands in C for random lattice points of K.
inline Tally isock_check(const AbelCone& ac, Rng& rng, std::size_t npoints) {
  Tally t;
  std::size_t ms = ac.msub(), m = ac.m();
  IntMat sys = ac.C_eqs;
  for (std::size_t e = 0; e < m; ++e) {
    IntVec row(ms, 0);
    for (std::size_t f = 0; f < ms; ++f)
      if (ac.sub.over[f] == static_cast<int>(e)) row[f] = 1;
    sys.push_back(row);
  }
  for (std::size_t k = 0; k < npoints; ++k) {
    IntVec x(ms, 0);
    for (const auto& r : ac.C.rays) x = add(x, scale(rng.uniform(0, 5), r));
    IntVec u = ac.F(x);
    t.expect(ac.Ginv(u) == x, "G(F(x)) != x");
    RatVec rhs(ac.C_eqs.size(), Rational(0));
    for (Int v : u) rhs.push_back(v);
    auto sol = solve_unique(sys, rhs, ms);
    bool same = sol.has_value();
    for (std::size_t f = 0; f < ms && same; ++f) same = (*sol)[f] == Rational(x[f]);
    t.expect(same, "solving C_eqs, F x = u does not give G(u)");
  }
  // lattice points of K: rational combinations of the rays, kept when integral
  std::size_t found = 0;
  for (std::size_t tries = 0; found < npoints && tries < 50 * npoints; ++tries) {
    RatVec u(m, Rational(0));
    for (const auto& r : ac.K.rays) {
      Rational c = rng.rational(0, 6, 3);
      for (std::size_t e = 0; e < m; ++e) u[e] += c * r[e];
    }
    bool integral = true;
    IntVec ui(m);
    for (std::size_t e = 0; e < m && integral; ++e) {
      integral = u[e].denominator() == 1;
      ui[e] = u[e].numerator();
    }
    if (!integral) continue;
    ++found;
    IntVec x = ac.Ginv(ui);
    t.expect(ac.C.contains(x) && ac.F(x) == ui, "G(u) is not an integral point of C over u");
  }
  return t;
}

// Rays: the provenance graph has two vertices and no loops with φ(e)r_e
// constant, or one vertex, one loop and zero flow.
inline Tally ray_classification_check(const AbelFan& fan) {
  Tally t;
  for (const auto& m : fan.members) {
    if (m.K.dim != 1) continue;
    FaceProvenance fp = face_provenance(fan.g, fan.D0, m.key);
    const Graph& h = fp.spec.target;
    const IntVec& r = m.K.rays.at(0);
    bool good = fp.pair.E == 0;
    if (good && h.nv() == 2) {
      std::set<Int> prod;
      for (std::size_t e = 0; e < h.ne(); ++e) {
        good &= !h.is_loop(e);
        prod.insert(mul_ck(std::abs(fp.pair.psi[e]), r[fp.spec.edge_embed[e]]));
      }
      good &= prod.size() == 1;
    } else if (good) {
      good = h.nv() == 1 && h.ne() == 1 && fp.pair.psi[0] == 0;
    }
    t.expect(good, "ray cone " + std::to_string(m.id) + " has unexpected provenance");
  }
  return t;
}

// Relabel the edges of g by a permutation of their ids; returns the graph
// and, for each new edge index, the old one.
inline std::pair<Graph, std::vector<int>> permute_edge_ids(const Graph& g, Rng& rng) {
  std::vector<std::string> ids = g.eid;
  std::shuffle(ids.begin(), ids.end(), rng.gen);
  GraphSpec spec;
  for (std::size_t v = 0; v < g.nv(); ++v) spec.vertices.push_back({g.vid[v], g.weight[v]});
  for (std::size_t e = 0; e < g.ne(); ++e) spec.edges.push_back({ids[e], {g.vid[g.ends[e][0]], g.vid[g.ends[e][1]]}});
  for (std::size_t i = 0; i < g.legs.size(); ++i) spec.legs[static_cast<int>(i)] = g.vid[g.legs[i]];
  Graph h = build_graph(spec);
  std::vector<int> old(h.ne());
  for (std::size_t e = 0; e < h.ne(); ++e)
    old[e] = static_cast<int>(std::find(ids.begin(), ids.end(), h.eid[e]) - ids.begin());
  return {h, old};
}

// Location is independent of scaling, of the scan order and of the edge
// labelling (hence of the spanning tree), and certifies D − D0^E = div φ.
inline Tally abel_uniqueness_check(const Graph& g, const Polarization& mu, const IntVec& D0, const RatVec& x, Rng& rng) {
  Tally t;
  auto key = [](const Location& l) { return std::make_tuple(l.pair.E, l.pair.psi, l.pair.D); };
  LocateResult a = locate_point(g, mu, D0, x, false, false);
  LocateResult b = locate_point(g, mu, D0, x, false, true);
  Rational lambda = rng.rational(1, 9, 4);
  RatVec y = x;
  for (auto& q : y) q *= lambda;
  LocateResult c = locate_point(g, mu, D0, y, false, false);
  t.expect(key(a.loc) == key(b.loc), "reversed scan order changed the located pair");
  t.expect(key(a.loc) == key(c.loc), "scaling by " + to_string(lambda) + " changed the located pair");
  Subdivision s = subdivide(g, a.loc.pair.E);
  t.expect(sub(a.loc.pair.D, lift_divisor(s, D0)) == div_flow(s.result, a.loc.pair.psi), "D − D0^E ≠ div φ");
  // relabelled copy: compare D on the original vertices and E by edge id
  auto [h, old] = permute_edge_ids(g, rng);
  RatVec xh(h.ne());
  for (std::size_t e = 0; e < h.ne(); ++e) xh[e] = x[old[e]];
  LocateResult d = locate_point(h, mu, D0, xh, false, false);
  std::set<std::string> Ea, Ed;
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(a.loc.pair.E, e)) Ea.insert(g.eid[e]);
  for (std::size_t e = 0; e < h.ne(); ++e)
    if (has(d.loc.pair.E, e)) Ed.insert(h.eid[old[e]] == h.eid[e] ? h.eid[e] : g.eid[old[e]]);
  IntVec Da(a.loc.pair.D.begin(), a.loc.pair.D.begin() + static_cast<long>(g.nv()));
  IntVec Dd(d.loc.pair.D.begin(), d.loc.pair.D.begin() + static_cast<long>(g.nv()));
  t.expect(Ea == Ed && Da == Dd, "relabelling the edges changed the located divisor");
  return t;
}

// A random metric graph with a leg at every vertex (after leg 0), so that any
// divisor is D_{Γ,A} for a suitable A, and a polarization of the right degree.
struct AbelInstance {
  MetricGraph X;
  IntVec A;
  Polarization mu;
};

inline AbelInstance random_abel_instance(Rng& rng, int max_v, int max_e) {
  Graph g0 = random_graph(rng, max_v, max_e, true);
  GraphSpec spec;
  for (std::size_t v = 0; v < g0.nv(); ++v) spec.vertices.push_back({g0.vid[v], g0.weight[v]});
  for (std::size_t e = 0; e < g0.ne(); ++e) spec.edges.push_back({g0.eid[e], {g0.vid[g0.ends[e][0]], g0.vid[g0.ends[e][1]]}});
  spec.legs[0] = g0.vid[g0.legs[0]];
  for (std::size_t v = 0; v < g0.nv(); ++v) spec.legs[static_cast<int>(v) + 1] = g0.vid[v];
  AbelInstance I;
  I.X.g = build_graph(spec);
  I.X.lengths = random_point(rng, I.X.g.ne());
  I.A.push_back(rng.uniform(-2, 2));
  for (std::size_t v = 0; v < g0.nv(); ++v) I.A.push_back(rng.uniform(-4, 4));
  I.A.push_back(rng.uniform(0, 1));
  I.mu = random_polarization(rng, I.X.g.nv(), abel_degree(I.X.g, I.A));
  return I;
}

// abel_eval returns the same (E, φ, D) under λ-scaling of the lengths and
// under the reversed scan order; the certificate D − D0^E = div φ and
// quasistability are asserted inside abel_eval itself.
inline Tally abel_eval_check(const AbelInstance& I, Rng& rng) {
  Tally t;
  try {
    AbelResult a = abel_eval(I.X, I.A, I.mu, false);
    AbelResult b = abel_eval(I.X, I.A, I.mu, true);
    MetricGraph Y = I.X;
    Rational lambda = rng.rational(1, 9, 4);
    for (auto& q : Y.lengths) q *= lambda;
    AbelResult c = abel_eval(Y, I.A, I.mu, false);
    t.expect(a.loc.pair == b.loc.pair, "reversed scan order changed the Abel image");
    t.expect(a.loc.pair == c.loc.pair, "scaling by " + to_string(lambda) + " changed the Abel image");
    bool splits_scale = a.splits.size() == c.splits.size();
    for (std::size_t i = 0; i < a.splits.size() && splits_scale; ++i)
      splits_scale = c.splits[i].first == lambda * a.splits[i].first;
    t.expect(splits_scale, "split positions do not scale with the lengths");
  } catch (const InvariantViolation& e) {
    t.fail(e.what());
  }
  return t;
}

// All flows on an acyclic digraph with divisor D by exhaustive search over
// [0, P]^arcs, P = Σ max(D, 0) (a flow on an acyclic digraph is a sum of
// paths, so no arc carries more than the total demand).
inline std::vector<IntVec> brute_force_flows(const Digraph& dg, const IntVec& D) {
  Int P = 0;
  for (Int d : D) P += std::max<Int>(d, 0);
  std::vector<IntVec> out;
  if (degree(D) != 0) return out;
  IntVec phi(dg.arcs.size(), 0);
  while (true) {
    IntVec div(dg.n, 0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      div[dg.arcs[i][1]] += phi[i];
      div[dg.arcs[i][0]] -= phi[i];
    }
    if (div == D) out.push_back(phi);
    std::size_t i = 0;
    while (i < phi.size() && phi[i] == P) phi[i++] = 0;
    if (i == phi.size()) break;
    ++phi[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All flows with |values| ≤ P on an acyclic digraph, bucketed by divisor;
// this finds every flow whose divisor has positive part summing to ≤ P.
inline std::map<IntVec, std::vector<IntVec>> brute_force_flow_table(const Digraph& dg, Int P) {
  std::map<IntVec, std::vector<IntVec>> table;
  IntVec phi(dg.arcs.size(), 0);
  while (true) {
    IntVec div(dg.n, 0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      div[dg.arcs[i][1]] += phi[i];
      div[dg.arcs[i][0]] -= phi[i];
    }
    table[div].push_back(phi);
    std::size_t i = 0;
    while (i < phi.size() && phi[i] == P) phi[i++] = 0;
    if (i == phi.size()) break;
    ++phi[i];
  }
  for (auto& [d, v] : table) std::sort(v.begin(), v.end());
  return table;
}

// Every multiset of at most `max_arcs` arcs i → j (i < j) on up to
// `max_vertices` vertices, i.e. every acyclic digraph up to relabelling, and
// every degree-0 divisor with entries in [−dmax, dmax].  Digraphs with more
// than `full_upto` vertices are only taken without isolated vertices (an
// isolated vertex just pins D there to 0, a case already met with fewer
// vertices).
inline Tally flow_oracle_check(std::size_t max_vertices, std::size_t max_arcs, Int dmax, std::size_t full_upto = 4) {
  Tally t;
  for (std::size_t n = 1; n <= max_vertices; ++n) {
    std::vector<std::array<int, 2>> pairs;
    for (int i = 0; i < static_cast<int>(n); ++i)
      for (int j = i + 1; j < static_cast<int>(n); ++j) pairs.push_back({i, j});
    std::vector<IntVec> divisors;
    Int P = 0;
    IntVec D(n, -dmax);
    while (true) {
      if (degree(D) == 0) {
        divisors.push_back(D);
        Int pos = 0;
        for (Int d : D) pos += std::max<Int>(d, 0);
        P = std::max(P, pos);
      }
      std::size_t i = 0;
      while (i < n && D[i] == dmax) D[i++] = -dmax;
      if (i == n) break;
      ++D[i];
    }
    auto check = [&](const Digraph& dg) {
      if (n > full_upto) {
        std::vector<bool> touched(n, false);
        for (auto [a, b] : dg.arcs) touched[a] = touched[b] = true;
        if (std::find(touched.begin(), touched.end(), false) != touched.end()) return;
      }
      auto table = brute_force_flow_table(dg, P);
      for (const auto& d : divisors) {
        auto a = flows_with_divisor(dg, d);
        auto it = table.find(d);
        const std::vector<IntVec> none;
        const auto& b = it == table.end() ? none : it->second;
        t.expect(a == b, "digraph with " + std::to_string(n) + " vertices, " + std::to_string(dg.arcs.size()) +
                             " arcs, D = " + vec_str(d) + ": " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + " flows");
      }
    };
    std::function<void(Digraph&, std::size_t)> rec = [&](Digraph& dg, std::size_t from) {
      check(dg);
      if (dg.arcs.size() == max_arcs) return;
      for (std::size_t k = from; k < pairs.size(); ++k) {
        dg.arcs.push_back(pairs[k]);
        rec(dg, k);
        dg.arcs.pop_back();
      }
    };
    Digraph dg;
    dg.n = n;
    rec(dg, 0);
  }
  return t;
}

// DRL flows are exactly the admissible pairs (∅, φ) with zero divisor in the
// fan of D_{Γ,A} (with μ = 0 the zero divisor is quasistable).
inline Tally drl_check(const Graph& g, const IntVec& A) {
  Tally t;
  std::set<IntVec> drl, fan;
  for (const auto& ac : drl_enumerate(g, A)) drl.insert(ac.pair.psi);
  IntVec D0 = target_divisor(g, A);
  for (const auto& p : enumerate_admissible(g, zero_polarization(g), D0))
    if (p.E == 0 && std::all_of(p.D.begin(), p.D.end(), [](Int v) { return v == 0; })) fan.insert(p.psi);
  t.expect(drl == fan, "DRL flows differ from the zero-divisor admissible pairs");
  for (const auto& psi : drl) t.expect(div_flow(g, psi) == scale(-1, D0), "DRL flow has the wrong divisor");
  return t;
}

}  // namespace tropabel
