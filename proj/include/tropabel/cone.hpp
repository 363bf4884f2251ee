#pragma once
// Rational polyhedral cones: exact double description, facets, faces,
// intersections, duals and Hilbert bases.

#include "core.hpp"

#include <map>
#include <set>

namespace tropabel {

struct DDResult {
  IntMat lines;  // basis of the lineality space
  IntMat rays;   // extreme rays modulo lineality, primitive
};

// Double description for {x : eqs·x = 0, ineqs·x >= 0} in R^n, starting from
// the whole space and adding one half-space at a time.  Adjacency of rays is
// decided combinatorially: two rays are adjacent iff no third ray is tight on
// every constraint tight on both.
inline DDResult double_description(std::size_t n, const IntMat& eqs, const IntMat& ineqs) {
  IntMat cons;
  for (const auto& a : eqs) {
    cons.push_back(a);
    cons.push_back(scale(-1, a));
  }
  for (const auto& a : ineqs) cons.push_back(a);

  IntMat lines = identity(n);
  struct Ray {
    IntVec v;
    std::vector<char> zero;  // over processed constraints
  };
  std::vector<Ray> rays;
  std::size_t done = 0;
  for (const auto& a : cons) {
    if (a.size() != n) throw ValidationError("constraint has the wrong dimension");
    if (is_zero(a)) {
      for (auto& r : rays) r.zero.push_back(1);
      ++done;
      continue;
    }
    // a line not in the hyperplane turns into a ray
    int li = -1;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (dot(a, lines[i]) != 0) {
        li = static_cast<int>(i);
        break;
      }
    if (li >= 0) {
      IntVec l = lines[li];
      Int al = dot(a, l);
      if (al < 0) {
        l = scale(-1, l);
        al = -al;
      }
      IntMat nl;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (static_cast<int>(i) == li) continue;
        IntVec m = primitive_line(lincomb(al, lines[i], -dot(a, lines[i]), l));
        nl.push_back(m);
      }
      lines = nl;
      for (auto& r : rays) {
        r.v = primitive(lincomb(al, r.v, -dot(a, r.v), l));
        r.zero.push_back(1);
      }
      Ray nr{primitive(l), std::vector<char>(done, 1)};
      nr.zero.push_back(0);
      rays.push_back(std::move(nr));
      ++done;
      continue;
    }
    std::vector<Int> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) val[i] = dot(a, rays[i].v);
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (val[i] >= 0) {
        Ray r = rays[i];
        r.zero.push_back(val[i] == 0);
        next.push_back(std::move(r));
      }
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (val[q] >= 0) continue;
        std::vector<char> common(done);
        for (std::size_t k = 0; k < done; ++k) common[k] = rays[p].zero[k] && rays[q].zero[k];
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool contains = true;
          for (std::size_t k = 0; k < done && contains; ++k)
            if (common[k] && !rays[r].zero[k]) contains = false;
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr{primitive(lincomb(val[p], rays[q].v, -val[q], rays[p].v)), common};
        nr.zero.push_back(1);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
    ++done;
  }
  DDResult out;
  for (auto& l : lines) out.lines.push_back(primitive_line(l));
  std::set<IntVec> uniq;
  for (auto& r : rays) uniq.insert(primitive(r.v));
  out.rays.assign(uniq.begin(), uniq.end());
  std::sort(out.lines.begin(), out.lines.end());
  return out;
}

// A pointed cone with both representations.  `eqs` spans the orthogonal
// complement of the cone's span; `facets` lists one inequality per facet.
struct ConeQQ {
  std::size_t n = 0;
  IntMat eqs;
  IntMat ineqs;  // the defining inequalities as given (possibly redundant)
  IntMat rays;   // primitive, sorted
  IntMat facets;
  std::size_t dim = 0;

  bool contains(const IntVec& x) const {
    for (const auto& a : eqs)
      if (dot(a, x) != 0) return false;
    for (const auto& a : facets)
      if (dot(a, x) < 0) return false;
    return true;
  }
  bool contains(const RatVec& x) const {
    for (const auto& a : eqs)
      if (sgn(dot(a, x)) != 0) return false;
    for (const auto& a : facets)
      if (sgn(dot(a, x)) < 0) return false;
    return true;
  }
  bool in_relative_interior(const RatVec& x) const {
    for (const auto& a : eqs)
      if (sgn(dot(a, x)) != 0) return false;
    for (const auto& a : facets)
      if (sgn(dot(a, x)) <= 0) return false;
    return true;
  }
  bool in_relative_interior(const IntVec& x) const {
    for (const auto& a : eqs)
      if (dot(a, x) != 0) return false;
    for (const auto& a : facets)
      if (dot(a, x) <= 0) return false;
    return true;
  }
};

// Canonical equalities: a basis of span(rays)^⊥ ∩ Z^n.
inline IntMat orthogonal_basis(const IntMat& rays, std::size_t n) {
  IntMat nz;
  for (const auto& r : rays)
    if (!is_zero(r)) nz.push_back(r);
  IntMat k = nz.empty() ? identity(n) : integer_kernel(nz, n);
  IntMat out;
  for (auto& v : k) out.push_back(primitive_line(v));
  std::sort(out.begin(), out.end());
  return out;
}

// Facets of a pointed cone from a (possibly redundant) inequality list:
// keep inequalities whose tight rays span a hyperplane of the cone, one per
// distinct tight set.
inline IntMat facets_from(const IntMat& rays, const IntMat& ineqs, std::size_t n, std::size_t dim) {
  std::map<std::vector<char>, IntVec> by_tight;
  for (const auto& a : ineqs) {
    std::vector<char> tight(rays.size());
    IntMat tr;
    bool all = true;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      tight[i] = dot(a, rays[i]) == 0;
      if (tight[i]) tr.push_back(rays[i]);
      else all = false;
    }
    if (all) continue;
    if (rank(tr, n) + 1 != dim) continue;
    IntVec p = primitive(a);
    auto it = by_tight.find(tight);
    if (it == by_tight.end() || p < it->second) by_tight[tight] = p;
  }
  IntMat out;
  for (auto& [t, a] : by_tight) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

inline ConeQQ make_cone(std::size_t n, const IntMat& eqs, const IntMat& ineqs) {
  DDResult dd = double_description(n, eqs, ineqs);
  if (!dd.lines.empty()) throw ValidationError("make_cone: cone is not pointed");
  ConeQQ c;
  c.n = n;
  c.ineqs = ineqs;
  c.rays = dd.rays;
  c.dim = rank(c.rays, n);
  c.eqs = orthogonal_basis(c.rays, n);
  IntMat all = ineqs;
  c.facets = facets_from(c.rays, all, n, c.dim);
  return c;
}

// A pointed cone given by generators; facets come from the dual.
inline ConeQQ cone_from_rays(std::size_t n, const IntMat& gens) {
  ConeQQ c;
  c.n = n;
  IntMat nz;
  for (const auto& g : gens)
    if (!is_zero(g)) nz.push_back(g);
  if (nz.empty()) {
    c.eqs = identity(n);
    return c;
  }
  c.eqs = orthogonal_basis(nz, n);
  // inequalities: rays of the dual cone restricted to span
  DDResult dual = double_description(n, {}, nz);
  IntMat cand = dual.rays;
  c.dim = rank(nz, n);
  // the extreme generators are the rays of the cone
  DDResult primal = double_description(n, c.eqs, cand);
  c.rays = primal.rays;
  c.ineqs = cand;
  c.facets = facets_from(c.rays, cand, n, c.dim);
  return c;
}

inline ConeQQ intersect(const ConeQQ& a, const ConeQQ& b) {
  IntMat eqs = a.eqs, ineqs = a.facets;
  eqs.insert(eqs.end(), b.eqs.begin(), b.eqs.end());
  ineqs.insert(ineqs.end(), b.facets.begin(), b.facets.end());
  return make_cone(a.n, eqs, ineqs);
}

// The smallest face of `c` containing the rays `sub`, as a set of rays of c.
inline IntMat minimal_face_rays(const ConeQQ& c, const IntMat& sub) {
  IntMat tight_facets;
  for (const auto& f : c.facets) {
    bool t = true;
    for (const auto& r : sub)
      if (dot(f, r) != 0) t = false;
    if (t) tight_facets.push_back(f);
  }
  IntMat out;
  for (const auto& r : c.rays) {
    bool t = true;
    for (const auto& f : tight_facets)
      if (dot(f, r) != 0) t = false;
    if (t) out.push_back(r);
  }
  return out;
}

// Is `f` (given by its rays) a face of `c`?
inline bool is_face_of(const IntMat& f_rays, const ConeQQ& c) {
  for (const auto& r : f_rays)
    if (!c.contains(r)) return false;
  IntMat m = minimal_face_rays(c, f_rays);
  std::set<IntVec> a(f_rays.begin(), f_rays.end()), b(m.begin(), m.end());
  return a == b;
}

// All faces of a pointed cone, each as its sorted ray set (the zero face is
// the empty set).
inline std::vector<IntMat> all_faces(const ConeQQ& c) {
  std::set<std::vector<char>> seen;
  std::vector<IntMat> out;
  std::size_t F = c.facets.size();
  if (F > 20) throw CapExceeded("face enumeration over more than 2^20 facet subsets");
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << F); ++m) {
    std::vector<char> in(c.rays.size());
    for (std::size_t i = 0; i < c.rays.size(); ++i) {
      bool t = true;
      for (std::size_t j = 0; j < F && t; ++j)
        if (((m >> j) & 1u) && dot(c.facets[j], c.rays[i]) != 0) t = false;
      in[i] = t;
    }
    if (!seen.insert(in).second) continue;
    IntMat f;
    for (std::size_t i = 0; i < c.rays.size(); ++i)
      if (in[i]) f.push_back(c.rays[i]);
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- lattice points ---------------------------------------------------------

// Hilbert basis of the lattice points of a pointed rational cone
// {x in Z^k : a·x >= 0 for a in ineqs} generated by `gens`.  Every Hilbert
// basis element lies in the zonotope Σ[0,1]·gens; candidates are the lattice
// points of its bounding box, scanned in increasing degree, and an element is
// kept iff no kept element can be subtracted from it inside the cone.
inline IntMat hilbert_basis(std::size_t k, const IntMat& gens, const IntMat& ineqs, Int cap = 0) {
  Int limit = cap > 0 ? cap : env_cap(Int(1) << 22);
  IntVec lo(k, 0), hi(k, 0);
  for (const auto& g : gens)
    for (std::size_t i = 0; i < k; ++i) (g[i] > 0 ? hi[i] : lo[i]) += g[i];
  Int count = 1;
  for (std::size_t i = 0; i < k; ++i) {
    count = mul_ck(count, hi[i] - lo[i] + 1);
    if (count > limit)
      throw CapExceeded("Hilbert basis search box exceeds " + std::to_string(limit) + " lattice points");
  }
  IntVec grading(k, 0);
  for (const auto& a : ineqs) grading = add(grading, a);
  auto inside = [&](const IntVec& x) {
    for (const auto& a : ineqs)
      if (dot(a, x) < 0) return false;
    return true;
  };
  std::vector<std::pair<Int, IntVec>> cand;
  IntVec x = lo;
  for (;;) {
    if (!is_zero(x) && inside(x)) cand.push_back({dot(grading, x), x});
    std::size_t i = 0;
    while (i < k && x[i] == hi[i]) {
      x[i] = lo[i];
      ++i;
    }
    if (i == k) break;
    ++x[i];
  }
  std::sort(cand.begin(), cand.end());
  IntMat hb;
  for (const auto& [d, v] : cand) {
    if (d <= 0) throw InvariantViolation("hilbert_basis: grading is not positive on the cone");
    bool reducible = false;
    for (const auto& h : hb)
      if (inside(sub(v, h))) {
        reducible = true;
        break;
      }
    if (!reducible) hb.push_back(v);
  }
  std::sort(hb.begin(), hb.end());
  return hb;
}

// Minimality certificate: no element is a sum of two nonzero elements of the
// monoid.  Checked against the basis itself (sufficient because every monoid
// element is a sum of basis elements).
inline bool hilbert_basis_is_minimal(const IntMat& hb, const IntMat& ineqs) {
  auto inside = [&](const IntVec& x) {
    for (const auto& a : ineqs)
      if (dot(a, x) < 0) return false;
    return true;
  };
  for (std::size_t i = 0; i < hb.size(); ++i)
    for (std::size_t j = 0; j < hb.size(); ++j) {
      if (i == j) continue;
      IntVec d = sub(hb[i], hb[j]);
      if (!is_zero(d) && inside(d)) return false;
    }
  return true;
}

struct DualAndHilbert {
  Sublattice span;        // lattice of span(K); covectors are taken modulo K^⊥
  IntMat rays_reduced;    // rays of K in span coordinates
  IntMat dual_rays;       // rays of K∨ (in M/K^⊥, lifted to Z^n when K is full-dimensional)
  IntMat hilbert;         // Hilbert basis of S_K modulo units
  IntMat dual_rays_reduced, hilbert_reduced;
};

// K∨ and the Hilbert basis of S_K = K∨ ∩ M.  When K is not full-dimensional
// S_K contains the units K^⊥ ∩ M; everything is computed in the quotient
// M/(K^⊥ ∩ M) = Hom(span(K) ∩ Z^n, Z) where the dual cone is pointed.
inline DualAndHilbert dual_and_hilbert(const ConeQQ& K, Int cap = 0) {
  if (K.n > 8) throw CapExceeded("dual_and_hilbert: ambient dimension above 8");
  DualAndHilbert out;
  out.span = saturated_span(K.rays, K.n);
  std::size_t k = out.span.dim();
  for (const auto& r : K.rays) out.rays_reduced.push_back(out.span.to_coords(r));
  if (k == 0) return out;
  DDResult dd = double_description(k, {}, out.rays_reduced);
  if (!dd.lines.empty()) throw InvariantViolation("dual cone in span coordinates is not pointed");
  out.dual_rays_reduced = dd.rays;
  out.hilbert_reduced = hilbert_basis(k, dd.rays, out.rays_reduced, cap);
  require(hilbert_basis_is_minimal(out.hilbert_reduced, out.rays_reduced), "Hilbert basis is not minimal");
  for (const auto& w : out.dual_rays_reduced) out.dual_rays.push_back(out.span.lift_covector(w));
  for (const auto& w : out.hilbert_reduced) out.hilbert.push_back(out.span.lift_covector(w));
  std::sort(out.dual_rays.begin(), out.dual_rays.end());
  std::sort(out.hilbert.begin(), out.hilbert.end());
  return out;
}

}  // namespace tropabel
