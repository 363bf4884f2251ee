#pragma once
// Monomial computations in affine semigroup rings k[S], S = σ∨ ∩ M saturated
// and pointed: ideals are upward-closed subsets of S and are handled through
// their (unique) minimal generators.  No binomial relations are ever stored.

#include "abel_cone.hpp"

#include <functional>
#include <map>
#include <regex>
#include <set>

namespace tropabel {

// S = {w ∈ Z^k : ⟨w, ρ⟩ ≥ 0 for every ray ρ} with a finite generating set.
struct Monoid {
  std::size_t k = 0;
  IntMat rays;  // rays of σ, in the dual lattice
  IntMat gens;  // generate S as a monoid

  bool contains(const IntVec& w) const {
    for (const auto& r : rays)
      if (dot(r, w) < 0) return false;
    return true;
  }
  // v | w, i.e. w − v ∈ S
  bool divides(const IntVec& v, const IntVec& w) const { return contains(sub(w, v)); }
};

inline Monoid make_monoid(std::size_t k, const IntMat& rays, Int cap = 0) {
  Monoid M;
  M.k = k;
  M.rays = rays;
  DDResult dd = double_description(k, {}, rays);
  if (!dd.lines.empty()) throw ValidationError("make_monoid: the cone is not full-dimensional");
  M.gens = hilbert_basis(k, dd.rays, rays, cap);
  return M;
}

using Predicate = std::function<bool(const IntVec&)>;

struct MonomialIdeal {
  IntMat gens;  // minimal, sorted
  bool operator==(const MonomialIdeal&) const = default;
};

inline bool in_ideal(const Monoid& M, const MonomialIdeal& I, const IntVec& w) {
  for (const auto& g : I.gens)
    if (M.divides(g, w)) return true;
  return false;
}

inline MonomialIdeal minimalize(const Monoid& M, IntMat gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  MonomialIdeal I;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < gens.size() && !redundant; ++j)
      redundant = j != i && M.divides(gens[j], gens[i]);
    if (!redundant) I.gens.push_back(gens[i]);
  }
  return I;
}

inline bool same_ideal(const Monoid& M, const MonomialIdeal& I, const MonomialIdeal& J) {
  for (const auto& g : I.gens)
    if (!in_ideal(M, J, g)) return false;
  for (const auto& g : J.gens)
    if (!in_ideal(M, I, g)) return false;
  return true;
}

inline constexpr int kDefaultSearchBound = 12;

// Minimal elements of {w ∈ start + S : P(w)}, P upward closed.  Breadth-first
// over sums of at most bound+2 generators, extending only non-members; every
// minimal element is reached this way.  A minimal element first seen beyond
// `bound` means the search has not saturated.
inline IntMat minimal_elements(const Monoid& M, const IntVec& start, const Predicate& P, int bound = kDefaultSearchBound,
                               Int cap = 0) {
  if (P(start)) return {start};
  Int limit = cap > 0 ? cap : env_cap(Int(1) << 21);
  std::map<IntVec, int> level{{start, 0}};
  std::vector<IntVec> frontier{start}, members;
  for (int L = 1; L <= bound + 2 && !frontier.empty(); ++L) {
    std::vector<IntVec> next;
    for (const auto& w : frontier)
      for (const auto& g : M.gens) {
        IntVec v = add(w, g);
        if (!level.emplace(v, L).second) continue;
        if (static_cast<Int>(level.size()) > limit)
          throw CapExceeded("ideal search visited more than " + std::to_string(limit) + " monomials");
        (P(v) ? members : next).push_back(std::move(v));
      }
    frontier = std::move(next);
  }
  if (members.empty() && !frontier.empty())
    throw SearchBoundExceeded("no ideal member found within search bound " + std::to_string(bound));
  IntMat out;
  for (const auto& v : members) {
    bool minimal = true;
    for (const auto& g : M.gens) {
      IntVec u = sub(v, g);
      if (M.divides(start, u) && P(u)) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    if (level[v] > bound)
      throw SearchBoundExceeded("ideal generators not saturated at search bound " + std::to_string(bound));
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline MonomialIdeal ideal_from_predicate(const Monoid& M, const Predicate& P, int bound = kDefaultSearchBound) {
  return {minimal_elements(M, IntVec(M.k, 0), P, bound)};
}

// ⟨v⟩ ∩ ⟨w⟩: minimal elements above v that w divides.
inline IntMat join(const Monoid& M, const IntVec& v, const IntVec& w, int bound = kDefaultSearchBound) {
  if (M.divides(v, w)) return {w};
  if (M.divides(w, v)) return {v};
  return minimal_elements(M, v, [&](const IntVec& z) { return M.divides(w, z); }, bound);
}

// I ∩ J from pairwise joins of generators.
inline MonomialIdeal intersect_ideals(const Monoid& M, const MonomialIdeal& I, const MonomialIdeal& J,
                                      int bound = kDefaultSearchBound) {
  IntMat all;
  for (const auto& a : I.gens)
    for (const auto& b : J.gens)
      for (auto& z : join(M, a, b, bound)) all.push_back(std::move(z));
  MonomialIdeal out = minimalize(M, std::move(all));
  for (const auto& g : out.gens) require(in_ideal(M, I, g) && in_ideal(M, J, g), "join left the intersection");
  return out;
}

// I ∩ J from the conjunction of the membership predicates.
inline MonomialIdeal intersect_by_predicate(const Monoid& M, const std::vector<MonomialIdeal>& ideals,
                                            int bound = kDefaultSearchBound) {
  return ideal_from_predicate(
      M,
      [&](const IntVec& w) {
        for (const auto& I : ideals)
          if (!in_ideal(M, I, w)) return false;
        return true;
      },
      bound);
}

inline MonomialIdeal ideal_product(const Monoid& M, const MonomialIdeal& I, const MonomialIdeal& J) {
  IntMat all;
  for (const auto& a : I.gens)
    for (const auto& b : J.gens) all.push_back(add(a, b));
  return minimalize(M, std::move(all));
}

// χ^u ∈ ⟨χ^v⟩ decided by u − v ∈ S, and independently by writing u as v plus
// a bounded combination of generators.
inline bool monomial_in_principal(const Monoid& M, const IntVec& u, const IntVec& v) {
  if (!M.contains(u) || !M.contains(v)) throw ValidationError("monomial outside the semigroup");
  return M.divides(v, u);
}

inline bool in_principal_by_search(const Monoid& M, const IntVec& u, const IntVec& v, int bound = kDefaultSearchBound) {
  std::set<IntVec> seen{v};
  std::vector<IntVec> frontier{v};
  for (int L = 0; L <= bound; ++L) {
    std::vector<IntVec> next;
    for (const auto& w : frontier) {
      if (w == u) return true;
      for (const auto& g : M.gens) {
        IntVec z = add(w, g);
        if (seen.insert(z).second) next.push_back(z);
      }
    }
    frontier = std::move(next);
  }
  return false;
}

// λ^{-1}⟨χ^{u0}⟩ for the localization at a face τ of σ: the monomials u with
// u − u0 ∈ S_τ, i.e. ⟨u − u0, ρ⟩ ≥ 0 on the rays ρ of τ.
struct LocalizationPreimage {
  IntMat face_rays;
  IntVec u0;
  MonomialIdeal ideal;
  bool contains(const IntVec& u) const {
    IntVec d = sub(u, u0);
    for (const auto& r : face_rays)
      if (dot(r, d) < 0) return false;
    return true;
  }
};

inline LocalizationPreimage localization_preimage(const Monoid& M, const IntMat& face_rays, const IntVec& u0,
                                                  int bound = kDefaultSearchBound) {
  ConeQQ sigma = cone_from_rays(M.k, M.rays);
  IntMat fr;
  for (const auto& r : face_rays) fr.push_back(primitive(r));
  std::sort(fr.begin(), fr.end());
  fr.erase(std::unique(fr.begin(), fr.end()), fr.end());
  if (!is_face_of(fr, sigma)) throw ValidationError("localization_preimage: not a face");
  LocalizationPreimage lp;
  lp.face_rays = fr;
  lp.u0 = u0;
  for (const auto& r : fr)
    if (dot(r, u0) < 0) throw ValidationError("localization_preimage: u0 is not in the face semigroup");
  lp.ideal = ideal_from_predicate(M, [&](const IntVec& u) { return lp.contains(u); }, bound);
  return lp;
}

// ---- A_τ = A_K[x, y] / (xy − χ^ū) ----------------------------------------

// Exponents of A_τ live in (M_K) ⊕ Z: χ^u = (u, 0), y = (0, 1), x = (ū, −1).
// τ has rays (r, 0) and (r, ū(r)) over each ray r of K.  When K is not
// full-dimensional, M_K is the quotient by K^⊥ (span coordinates).
struct TauMonomial {
  Int a = 0, b = 0;  // exponents of x, y; min(a, b) = 0
  IntVec u;          // χ-part, in E(Γ) coordinates
  auto operator<=>(const TauMonomial&) const = default;
};

inline std::string to_string(const TauMonomial& m) {
  std::ostringstream os;
  os << "x^" << m.a << " y^" << m.b << " χ{";
  for (std::size_t i = 0; i < m.u.size(); ++i) os << (i ? "," : "") << m.u[i];
  os << "}";
  return os.str();
}

inline TauMonomial parse_tau_monomial(const std::string& s) {
  static const std::regex re(R"(^\s*x\^(\d+)\s+y\^(\d+)\s+χ\{([-0-9,\s]*)\}\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ValidationError("bad monomial '" + s + "' (expected x^a y^b χ{c1,...})");
  TauMonomial t;
  t.a = std::stoll(m[1]);
  t.b = std::stoll(m[2]);
  std::string body = m[3];
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (tok.find_first_not_of(" \t") != std::string::npos) t.u.push_back(std::stoll(tok));
  return t;
}

struct TauRing {
  std::size_t k = 0;   // rank of M_K
  Sublattice span;     // span(K) ∩ Z^m
  IntMat K_rays;       // span coordinates, same order as the source cone
  IntMat K_hilbert;    // Hilbert basis of S_K in M_K
  IntVec ubar;         // ū restricted to span(K)
  Monoid S_K, S;       // S_K in M_K; S = S_τ in M_K ⊕ Z

  IntVec chi(const IntVec& u) const {
    IntVec w = span.restrict_covector(u);
    w.push_back(0);
    return w;
  }
  IntVec y(Int n = 1) const {
    IntVec w(k + 1, 0);
    w[k] = n;
    return w;
  }
  IntVec x(Int n = 1) const {
    IntVec w = scale(n, ubar);
    w.push_back(-n);
    return w;
  }
  IntVec from(const TauMonomial& t) const { return add(add(chi(t.u), x(t.a)), y(t.b)); }
  TauMonomial canonical(const IntVec& v) const {
    TauMonomial t;
    Int c = v[k];
    IntVec w(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
    if (c >= 0) {
      t.b = c;
    } else {
      t.a = -c;
      w = sub(w, scale(t.a, ubar));
    }
    t.u = span.lift_covector(w);
    return t;
  }
  std::string str(const IntVec& v) const { return to_string(canonical(v)); }

  IntMat face_over(const IntVec& r) const {
    IntVec a = r, b = r;
    a.push_back(0);
    b.push_back(dot(ubar, r));
    return {a, b};
  }
  // x^a y^b χ^u ∈ I^{(n)}_r  ⇔  u(r) ≥ (n − b)·ū(r); on the combined
  // exponent this is ⟨v, (r, ū(r))⟩ ≥ n·ū(r).
  bool in_symbolic_power(const IntVec& v, const IntVec& r, Int n) const {
    IntVec rr = r;
    Int ur = dot(ubar, r);
    rr.push_back(ur);
    return dot(rr, v) >= mul_ck(n, ur);
  }
  MonomialIdeal symbolic_power(const IntVec& r, Int n, int bound = kDefaultSearchBound) const {
    return ideal_from_predicate(S, [&](const IntVec& v) { return in_symbolic_power(v, r, n); }, bound);
  }
};

inline TauRing make_tau_ring(Sublattice span, IntMat K_rays, IntMat K_hilbert, IntVec ubar, Int cap = 0) {
  TauRing R;
  R.k = span.dim();
  R.span = std::move(span);
  R.K_rays = std::move(K_rays);
  R.K_hilbert = std::move(K_hilbert);
  R.ubar = std::move(ubar);
  R.S_K.k = R.k;
  R.S_K.rays = R.K_rays;
  R.S_K.gens = R.K_hilbert;
  require(R.S_K.contains(R.ubar), "ū is not in S_K");
  std::set<IntVec> tr;
  for (const auto& r : R.K_rays)
    for (auto& q : R.face_over(r)) tr.insert(primitive(q));
  R.S = make_monoid(R.k + 1, IntMat(tr.begin(), tr.end()), cap);
  // S_τ is generated by S_K, x and y
  IntMat small = {R.x(), R.y()};
  for (const auto& h : R.K_hilbert) {
    IntVec w = h;
    w.push_back(0);
    small.push_back(w);
  }
  for (const auto& g : small) require(R.S.contains(g), "x, y or S_K not in S_τ");
  Monoid gen_small = R.S;
  gen_small.gens = small;
  for (const auto& h : R.S.gens)
    require(in_principal_by_search(gen_small, h, IntVec(R.k + 1, 0), 2 * kDefaultSearchBound),
            "S_τ is not generated by S_K, x and y");
  return R;
}

// A_τ for the cone K of an admissible pair and an edge e0 of Γ.
inline TauRing tau_ring(const ConeQQ& K, std::size_t e0, Int cap = 0) {
  DualAndHilbert dh = dual_and_hilbert(K, cap);
  IntVec ubar = dh.span.restrict_covector(unit_vector(K.n, e0));
  return make_tau_ring(dh.span, dh.rays_reduced, dh.hilbert_reduced, ubar, cap);
}

// k[x, y, u]/(xy − u^t): K a single ray in Z with ū = t.
inline TauRing model_ring(Int t) {
  if (t < 1) throw ValidationError("model ring needs t ≥ 1");
  return make_tau_ring(saturated_span({{1}}, 1), {{1}}, {{1}}, {t});
}

// ---- boundary functionals -------------------------------------------------

struct BoundaryFunctionals {
  std::size_t e0 = 0;
  int orientation = 1;  // +1 if the flow on e0 follows its reference orientation
  int half_s = -1, half_t = -1;  // sub-edges e0^s, e0^t
  Int phi_s = 0, phi_t = 0;
  IntVec u1, u2;  // u′, u″ on E(Γ)
};

// γ is the fundamental cycle of e0 for the tree avoiding E, oriented so that
// it runs along the flow on e0.
inline BoundaryFunctionals boundary_functionals(const AbelCone& ac, std::size_t e0) {
  const auto& s = ac.sub;
  const auto& psi = ac.pair.psi;
  if (e0 >= ac.m() || !has(ac.pair.E, e0)) throw ValidationError("boundary_functionals: edge is not in E");
  BoundaryFunctionals bf;
  bf.e0 = e0;
  int h0 = s.sub[e0][0], h1 = s.sub[e0][1];
  require(psi[h1] - psi[h0] == 1, "flow must drop by one at the exceptional vertex");
  bf.orientation = psi[h0] >= 0 ? 1 : -1;
  bf.half_s = bf.orientation > 0 ? h0 : h1;
  bf.half_t = bf.orientation > 0 ? h1 : h0;
  bf.phi_s = std::abs(psi[bf.half_s]);
  bf.phi_t = std::abs(psi[bf.half_t]);
  int ci = -1;
  for (std::size_t i = 0; i < ac.cb.cycle_edge.size(); ++i)
    if (ac.cb.cycle_edge[i] == static_cast<int>(e0)) ci = static_cast<int>(i);
  require(ci >= 0, "no fundamental cycle through e0");
  const IntVec& gamma = ac.cb.cycles[ci];
  bf.u1.assign(ac.m(), 0);
  bf.u2.assign(ac.m(), 0);
  for (std::size_t t = 0; t < ac.m(); ++t) {
    if (!has(ac.cb.tree, t) || gamma[t] == 0) continue;
    // γ(t)φ(t) with both measured along the flow: σ·γ_ref(t)·ψ(t)
    Int v = bf.orientation * gamma[t] * psi[s.sub[t][0]];
    bf.u1[t] = -v;
    bf.u2[t] = v;
  }
  bf.u1[e0] = -bf.phi_s;
  bf.u2[e0] = bf.phi_t;
  return bf;
}

// Every conclusion of the lemma on u′, u″, checked on the rays of K (and,
// for the contraction clauses, on the corresponding rays of C).
inline void check_boundary_functionals(const AbelCone& ac, const BoundaryFunctionals& bf) {
  const std::size_t m = ac.m();
  IntVec ev = unit_vector(m, bf.e0);
  require(add(bf.u1, bf.u2) == ev, "u′ + u″ ≠ e0∨");
  bool pos1 = false, pos2 = false;
  for (const auto& rc : ac.C.rays) {
    IntVec r = ac.F(rc);
    Int a = dot(bf.u1, r), b = dot(bf.u2, r);
    require(a >= 0 && b >= 0, "u′ or u″ is negative on a ray of K");
    require(a == 0 || b == 0, "u′ and u″ both positive on a ray of K");
    if (a == 0 && b == 0) require(r[bf.e0] == 0, "u′(r) = u″(r) = 0 but e0∨(r) ≠ 0");
    if (rc[bf.half_t] == 0) require(a == 0, "e0^t contracted but u′(r) ≠ 0");
    if (rc[bf.half_s] == 0) require(b == 0, "e0^s contracted but u″(r) ≠ 0");
    pos1 |= a > 0;
    pos2 |= b > 0;
  }
  require(pos1 && pos2, "u′ or u″ is invertible in S_K");
}

// ---- the intersection identity --------------------------------------------

struct IcapReport {
  std::size_t e0 = 0;
  bool in_E = false;
  Int n = 0;                         // φ(e0^s), or φ(e0) when e0 ∉ E
  std::optional<BoundaryFunctionals> bf;
  std::vector<IntVec> rays;          // rays of K (E(Γ) coordinates)
  std::vector<Int> powers;           // the symbolic power used at each ray (two entries when both vanish)
  std::vector<int> power_ray;        // ray index of each entry of `powers`
  std::vector<MonomialIdeal> per_ray;
  MonomialIdeal lhs, lhs_by_predicate, rhs;
  bool equal = false;
};

inline IcapReport icap_check(const AbelCone& ac, std::size_t e0, int bound = kDefaultSearchBound, Int cap = 0) {
  if (e0 >= ac.m()) throw ValidationError("icap: unknown edge");
  IcapReport rep;
  rep.e0 = e0;
  rep.in_E = has(ac.pair.E, e0);
  TauRing R = tau_ring(ac.K, e0, cap);
  rep.rays = ac.K.rays;
  auto add_power = [&](std::size_t i, Int n) {
    rep.powers.push_back(n);
    rep.power_ray.push_back(static_cast<int>(i));
    rep.per_ray.push_back(R.symbolic_power(R.K_rays[i], n, bound));
  };
  if (rep.in_E) {
    rep.bf = boundary_functionals(ac, e0);
    check_boundary_functionals(ac, *rep.bf);
    rep.n = rep.bf->phi_s;
    for (std::size_t i = 0; i < ac.K.rays.size(); ++i) {
      if (dot(rep.bf->u1, ac.K.rays[i]) == 0) add_power(i, rep.bf->phi_t);
      if (dot(rep.bf->u2, ac.K.rays[i]) == 0) add_power(i, rep.bf->phi_s);
    }
    rep.rhs = ideal_product(R.S, {{R.y(rep.n)}}, minimalize(R.S, {R.y(), R.chi(rep.bf->u2)}));
  } else {
    rep.n = std::abs(ac.pair.psi[ac.sub.sub[e0][0]]);
    for (std::size_t i = 0; i < ac.K.rays.size(); ++i) add_power(i, rep.n);
    rep.rhs = {{R.y(rep.n)}};
  }
  MonomialIdeal acc{{IntVec(R.k + 1, 0)}};
  for (const auto& I : rep.per_ray) acc = intersect_ideals(R.S, acc, I, bound);
  rep.lhs = acc;
  rep.lhs_by_predicate = intersect_by_predicate(R.S, rep.per_ray, bound);
  require(rep.lhs == rep.lhs_by_predicate, "intersection by joins and by predicate disagree");
  rep.equal = same_ideal(R.S, rep.lhs, rep.rhs);
  return rep;
}

// ---- the model ring identity I^{(tn)} = ⟨y^n⟩ ------------------------------

struct SymbolReport {
  Int t = 1, n = 1, m = 1;
  MonomialIdeal by_valuation;  // monomials of valuation ≥ m along ⟨y, u⟩
  MonomialIdeal by_saturation; // (⟨y, u⟩^m : x^∞)
  MonomialIdeal expected;      // ⟨y^n⟩
  bool equal = false;
};

inline SymbolReport symbol_check(Int t, Int n, int bound = kDefaultSearchBound) {
  if (n < 1) throw ValidationError("symbol_check needs n ≥ 1");
  SymbolReport rep;
  rep.t = t;
  rep.n = n;
  rep.m = mul_ck(t, n);
  TauRing R = model_ring(t);
  IntVec nu = {1, t};  // valuation of the prime ⟨y, u⟩: ν(u) = 1, ν(y) = t, ν(x) = 0
  rep.by_valuation = ideal_from_predicate(R.S, [&](const IntVec& v) { return dot(nu, v) >= rep.m; }, bound);
  IntMat pw;
  for (Int a = 0; a <= rep.m; ++a) pw.push_back({a, rep.m - a});  // u^a y^{m−a}
  MonomialIdeal Im = minimalize(R.S, pw);
  rep.by_saturation = ideal_from_predicate(
      R.S,
      [&](const IntVec& v) {
        for (Int j = 0; j <= bound; ++j)
          if (in_ideal(R.S, Im, add(v, R.x(j)))) return true;
        return false;
      },
      bound);
  rep.expected = {{R.y(n)}};
  rep.equal = rep.by_valuation == rep.expected && rep.by_saturation == rep.expected;
  return rep;
}

}  // namespace tropabel
