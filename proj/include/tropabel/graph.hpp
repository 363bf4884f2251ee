#pragma once
// Labeled multigraphs with weights and legs; contractions, subdivisions,
// stable reduction, cycle bases.

#include "core.hpp"

#include <array>
#include <deque>
#include <iostream>
#include <map>
#include <optional>
#include <set>

namespace tropabel {

struct Graph {
  std::vector<std::string> vid;          // vertex ids
  std::vector<Int> weight;               // vertex weights
  std::vector<std::string> eid;          // edge ids
  std::vector<std::array<int, 2>> ends;  // endpoints; ends[0] -> ends[1] is the reference orientation
  std::vector<int> legs;                 // leg index -> vertex index

  std::size_t nv() const { return vid.size(); }
  std::size_t ne() const { return eid.size(); }
  int v0() const { return legs.empty() ? 0 : legs[0]; }
  bool is_loop(std::size_t e) const { return ends[e][0] == ends[e][1]; }
  EdgeSet all_edges() const { return ne() == 64 ? ~EdgeSet(0) : bit(ne()) - 1; }

  int vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vid.size(); ++i)
      if (vid[i] == id) return static_cast<int>(i);
    return -1;
  }
  int edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < eid.size(); ++i)
      if (eid[i] == id) return static_cast<int>(i);
    return -1;
  }
  EdgeSet edge_set(const std::vector<std::string>& ids) const {
    EdgeSet s = 0;
    for (const auto& id : ids) {
      int e = edge_index(id);
      if (e < 0) throw ValidationError("unknown edge id '" + id + "'");
      s |= bit(e);
    }
    return s;
  }
  std::vector<std::string> edge_ids(EdgeSet s) const {
    std::vector<std::string> out;
    for (std::size_t e = 0; e < ne(); ++e)
      if (has(s, e)) out.push_back(eid[e]);
    return out;
  }
  bool operator==(const Graph&) const = default;
};

// ---- construction ---------------------------------------------------------

struct GraphSpec {
  std::vector<std::pair<std::string, Int>> vertices;
  std::vector<std::pair<std::string, std::array<std::string, 2>>> edges;
  std::map<int, std::string> legs;
};

inline std::size_t b0(const Graph& g, EdgeSet removed = 0);

constexpr std::size_t kSoftEdgeCap = 16;

// Validates and canonicalizes (vertices and edges sorted by id).
inline Graph build_graph(const GraphSpec& spec, bool require_connected = true) {
  Graph g;
  std::set<std::string> seen;
  auto vs = spec.vertices;
  std::sort(vs.begin(), vs.end());
  for (const auto& [id, w] : vs) {
    if (!seen.insert(id).second) throw ValidationError("duplicate vertex id '" + id + "'");
    if (w < 0) throw ValidationError("negative weight on vertex '" + id + "'");
    g.vid.push_back(id);
    g.weight.push_back(w);
  }
  auto es = spec.edges;
  std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::set<std::string> eseen;
  for (const auto& [id, ends] : es) {
    if (!eseen.insert(id).second) throw ValidationError("duplicate edge id '" + id + "'");
    std::array<int, 2> idx{};
    for (int k = 0; k < 2; ++k) {
      idx[k] = g.vertex_index(ends[k]);
      if (idx[k] < 0)
        throw ValidationError("edge '" + id + "' references undeclared vertex '" + ends[k] + "'");
    }
    g.eid.push_back(id);
    g.ends.push_back(idx);
  }
  if (g.ne() > 64) throw ValidationError("more than 64 edges are not supported");
  if (!spec.legs.empty()) {
    int maxleg = spec.legs.rbegin()->first;
    if (spec.legs.begin()->first < 0) throw ValidationError("negative leg index");
    g.legs.assign(maxleg + 1, -1);
    for (const auto& [i, v] : spec.legs) {
      int vi = g.vertex_index(v);
      if (vi < 0) throw ValidationError("leg " + std::to_string(i) + " at undeclared vertex '" + v + "'");
      g.legs[i] = vi;
    }
    for (std::size_t i = 0; i < g.legs.size(); ++i)
      if (g.legs[i] < 0) throw ValidationError("leg indices must be 0..n without gaps; missing " + std::to_string(i));
  }
  if (g.nv() == 0) throw ValidationError("graph has no vertices");
  if (g.legs.empty()) throw ValidationError("leg 0 is required");
  if (require_connected && b0(g) != 1) throw ValidationError("graph is disconnected");
  if (g.ne() > kSoftEdgeCap)
    std::cerr << "warning: " << g.ne() << " edges; enumerations are exponential beyond "
              << kSoftEdgeCap << " edges\n";
  return g;
}

// ---- basic statistics -------------------------------------------------------

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    p[b] = a;  // smallest index is the representative
    return true;
  }
};

// Number of connected components of g with the edges in `removed` deleted.
inline std::size_t b0(const Graph& g, EdgeSet removed) {
  UnionFind uf(g.nv());
  std::size_t comps = g.nv();
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (!has(removed, e) && uf.unite(g.ends[e][0], g.ends[e][1])) --comps;
  return comps;
}

// First Betti number of the subgraph spanned by `kept` edges (all vertices).
inline std::size_t b1(const Graph& g, EdgeSet kept) {
  EdgeSet removed = g.all_edges() & ~kept;
  return popcount(kept) + b0(g, removed) - g.nv();
}
inline std::size_t b1(const Graph& g) { return b1(g, g.all_edges()); }

inline Int genus(const Graph& g) {
  Int w = 0;
  for (Int x : g.weight) w += x;
  return w + static_cast<Int>(b1(g));
}

inline bool nondisconnecting(const Graph& g, EdgeSet E) { return b0(g, E) == 1; }

// δ_V: number of non-loop edges with exactly one endpoint in V (bitmask).
inline std::size_t delta(const Graph& g, std::uint64_t V) {
  std::size_t d = 0;
  for (std::size_t e = 0; e < g.ne(); ++e) {
    bool a = (V >> g.ends[e][0]) & 1u, b = (V >> g.ends[e][1]) & 1u;
    d += (a != b);
  }
  return d;
}

// Valence of v in the edge set E (loops count twice).
inline std::size_t valence(const Graph& g, int v, EdgeSet E) {
  std::size_t d = 0;
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(E, e)) d += (g.ends[e][0] == v) + (g.ends[e][1] == v);
  return d;
}
inline std::size_t valence(const Graph& g, int v) { return valence(g, v, g.all_edges()); }

struct GraphStats {
  std::size_t b0 = 0, b1 = 0, delta_V = 0;
  std::vector<std::size_t> val_E;
  bool nondisconnecting = false;
};

inline GraphStats graph_stats(const Graph& g, std::uint64_t V, EdgeSet E) {
  GraphStats s;
  s.b0 = b0(g);
  s.b1 = b1(g);
  s.delta_V = delta(g, V);
  for (std::size_t v = 0; v < g.nv(); ++v) s.val_E.push_back(valence(g, static_cast<int>(v), E));
  s.nondisconnecting = nondisconnecting(g, E);
  // b1(Γ/E) = |F| - b0(Γ_F) + 1 for F the complement of E; Γ/E keeps the
  // F-edges, Γ_F deletes them.
  EdgeSet F = g.all_edges() & ~E;
  std::size_t lhs = popcount(F) + 1 - b0(g, F);  // cycle rank of the quotient, computed independently below
  UnionFind uf(g.nv());
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(E, e)) uf.unite(g.ends[e][0], g.ends[e][1]);
  std::set<int> classes;
  for (std::size_t v = 0; v < g.nv(); ++v) classes.insert(uf.find(static_cast<int>(v)));
  UnionFind uq(g.nv());
  std::size_t comps = classes.size();
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(F, e) && uq.unite(uf.find(g.ends[e][0]), uf.find(g.ends[e][1]))) --comps;
  std::size_t rhs = popcount(F) + comps - classes.size();
  if (s.b0 == 1) require(lhs == rhs, "Betti identity for the quotient graph failed");
  return s;
}

// ---- specializations ------------------------------------------------------

struct Specialization {
  Graph source, target;
  EdgeSet contracted = 0;
  std::vector<int> vertex_map;  // V(source) -> V(target)
  std::vector<int> edge_embed;  // E(target) -> E(source)
  std::vector<int> edge_map;    // E(source) -> E(target), -1 if contracted
};

inline Specialization contract(const Graph& g, EdgeSet E) {
  if (E & ~g.all_edges()) throw ValidationError("contract: unknown edge");
  Specialization s;
  s.source = g;
  s.contracted = E;
  UnionFind uf(g.nv());
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(E, e)) uf.unite(g.ends[e][0], g.ends[e][1]);
  std::vector<int> rep_to_new(g.nv(), -1);
  Graph& t = s.target;
  s.vertex_map.assign(g.nv(), -1);
  for (std::size_t v = 0; v < g.nv(); ++v) {
    int r = uf.find(static_cast<int>(v));
    if (rep_to_new[r] < 0) {
      rep_to_new[r] = static_cast<int>(t.nv());
      t.vid.push_back(g.vid[r]);
      t.weight.push_back(0);
    }
    s.vertex_map[v] = rep_to_new[r];
    t.weight[rep_to_new[r]] += g.weight[v];
  }
  // genus bookkeeping: each contracted edge closing a cycle adds 1
  UnionFind uf2(g.nv());
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(E, e) && !uf2.unite(g.ends[e][0], g.ends[e][1])) t.weight[s.vertex_map[g.ends[e][0]]] += 1;
  s.edge_map.assign(g.ne(), -1);
  for (std::size_t e = 0; e < g.ne(); ++e) {
    if (has(E, e)) continue;
    s.edge_map[e] = static_cast<int>(t.ne());
    s.edge_embed.push_back(static_cast<int>(e));
    t.eid.push_back(g.eid[e]);
    t.ends.push_back({s.vertex_map[g.ends[e][0]], s.vertex_map[g.ends[e][1]]});
  }
  for (int l : g.legs) t.legs.push_back(s.vertex_map[l]);
  return s;
}

// Composition s2 ∘ s1 as a single specialization of s1.source.
inline Specialization compose(const Specialization& s1, const Specialization& s2) {
  EdgeSet E = s1.contracted;
  for (std::size_t e = 0; e < s1.target.ne(); ++e)
    if (has(s2.contracted, e)) E |= bit(s1.edge_embed[e]);
  return contract(s1.source, E);
}

// ---- subdivisions ---------------------------------------------------------

inline std::string exceptional_id(const std::string& edge) { return "x:" + edge; }
inline std::string half_id(const std::string& edge, int k) { return edge + "/" + std::to_string(k); }

struct Subdivision {
  Graph base, result;
  EdgeSet E = 0;
  std::vector<int> over;                  // E(result) -> E(base)
  std::vector<int> half;                  // 0/1 for halves, -1 otherwise
  std::vector<std::array<int, 2>> sub;    // E(base) -> result edges (second = -1 if not subdivided)
  std::vector<int> exceptional;           // E(base) -> exceptional vertex index or -1
  std::vector<bool> is_exceptional;       // V(result)
};

// Halves of e are "<e>/0" : ends[0] -> x and "<e>/1" : x -> ends[1], so the
// reference orientation of both halves follows that of e.
inline Subdivision subdivide(const Graph& g, EdgeSet E) {
  if (E & ~g.all_edges()) throw ValidationError("subdivide: unknown edge");
  Subdivision s;
  s.base = g;
  s.E = E;
  Graph& r = s.result;
  r.vid = g.vid;
  r.weight = g.weight;
  r.legs = g.legs;
  s.is_exceptional.assign(g.nv(), false);
  s.exceptional.assign(g.ne(), -1);
  s.sub.assign(g.ne(), {-1, -1});
  for (std::size_t e = 0; e < g.ne(); ++e) {
    if (!has(E, e)) continue;
    s.exceptional[e] = static_cast<int>(r.nv());
    r.vid.push_back(exceptional_id(g.eid[e]));
    r.weight.push_back(0);
    s.is_exceptional.push_back(true);
  }
  for (std::size_t e = 0; e < g.ne(); ++e) {
    if (!has(E, e)) {
      s.sub[e][0] = static_cast<int>(r.ne());
      r.eid.push_back(g.eid[e]);
      r.ends.push_back(g.ends[e]);
      s.over.push_back(static_cast<int>(e));
      s.half.push_back(-1);
      continue;
    }
    int x = s.exceptional[e];
    for (int k = 0; k < 2; ++k) {
      s.sub[e][k] = static_cast<int>(r.ne());
      r.eid.push_back(half_id(g.eid[e], k));
      r.ends.push_back(k == 0 ? std::array<int, 2>{g.ends[e][0], x} : std::array<int, 2>{x, g.ends[e][1]});
      s.over.push_back(static_cast<int>(e));
      s.half.push_back(k);
    }
  }
  return s;
}

// ---- cycle bases ----------------------------------------------------------

struct CycleBasis {
  EdgeSet tree = 0;
  std::vector<int> cycle_edge;  // the non-tree edge generating each cycle
  IntMat cycles;                // signed incidence vectors over E(g)
};

// BFS spanning tree from vertex 0 (edges in canonical order, loops and
// `avoid` excluded); one fundamental cycle per non-tree edge e with γ_e(e)=+1
// following the reference orientation of e.
inline CycleBasis cycle_basis(const Graph& g, EdgeSet avoid = 0) {
  if (b0(g, avoid) != b0(g)) throw ValidationError("cycle_basis: the avoided edges disconnect the graph");
  CycleBasis cb;
  std::vector<int> parent_edge(g.nv(), -1), depth(g.nv(), -1);
  for (std::size_t root = 0; root < g.nv(); ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::deque<int> q{static_cast<int>(root)};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (std::size_t e = 0; e < g.ne(); ++e) {
        if (has(avoid, e) || g.is_loop(e)) continue;
        int a = g.ends[e][0], b = g.ends[e][1];
        if (a != v && b != v) continue;
        int w = a == v ? b : a;
        if (depth[w] >= 0) continue;
        depth[w] = depth[v] + 1;
        parent_edge[w] = static_cast<int>(e);
        cb.tree |= bit(e);
        q.push_back(w);
      }
    }
  }
  for (std::size_t e = 0; e < g.ne(); ++e) {
    if (has(cb.tree, e)) continue;
    IntVec c(g.ne(), 0);
    c[e] = 1;
    // walk from head back to tail through the tree: head=ends[1], tail=ends[0]
    int u = g.ends[e][1], w = g.ends[e][0];
    // path u -> w: climb both to their common ancestor
    std::vector<std::pair<int, int>> up_u, up_w;  // (edge, sign when walking toward the root)
    auto step = [&](int x, std::vector<std::pair<int, int>>& path) {
      int pe = parent_edge[x];
      int par = g.ends[pe][0] == x ? g.ends[pe][1] : g.ends[pe][0];
      // walking x -> par along pe: + if pe's reference orientation is x -> par
      path.push_back({pe, g.ends[pe][0] == x ? 1 : -1});
      return par;
    };
    while (u != w) {
      if (depth[u] >= depth[w]) u = step(u, up_u);
      else w = step(w, up_w);
    }
    for (auto [pe, sgn] : up_u) c[pe] += sgn;
    for (auto [pe, sgn] : up_w) c[pe] -= sgn;  // traversed in reverse
    cb.cycle_edge.push_back(static_cast<int>(e));
    cb.cycles.push_back(std::move(c));
  }
  return cb;
}

// d*: signed incidence operator, (d* x)(v) = Σ_{t(e)=v} x_e - Σ_{s(e)=v} x_e.
inline IntVec incidence_apply(const Graph& g, const IntVec& x) {
  IntVec d(g.nv(), 0);
  for (std::size_t e = 0; e < g.ne(); ++e) {
    d[g.ends[e][1]] = add_ck(d[g.ends[e][1]], x[e]);
    d[g.ends[e][0]] = sub_ck(d[g.ends[e][0]], x[e]);
  }
  return d;
}

// ---- stable reduction -----------------------------------------------------

struct StableReduction {
  Graph st;             // stable model
  Graph st_hat;         // refinement of st through which every specialization factors
  Specialization red;   // Γ -> st_hat
  // st_hat edge -> st edge; st_hat is a refinement of st, each st edge being
  // a chain of st_hat edges.
  std::vector<int> refine_over;
  std::vector<int> removed_vertices;  // st_hat vertices erased to obtain st
};

inline std::size_t legs_at(const Graph& g, int v) {
  return static_cast<std::size_t>(std::count(g.legs.begin(), g.legs.end(), v));
}

inline StableReduction stable_reduction(const Graph& g) {
  StableReduction out;
  // contract edges at valence-1, weight-0 vertices carrying at most one leg
  EdgeSet contracted = 0;
  for (;;) {
    Specialization cur = contract(g, contracted);
    const Graph& h = cur.target;
    int found = -1;
    for (std::size_t v = 0; v < h.nv() && found < 0; ++v) {
      if (h.weight[v] != 0 || valence(h, static_cast<int>(v)) != 1 || legs_at(h, static_cast<int>(v)) > 1) continue;
      for (std::size_t e = 0; e < h.ne(); ++e)
        if (h.ends[e][0] == static_cast<int>(v) || h.ends[e][1] == static_cast<int>(v)) {
          found = cur.edge_embed[e];
          break;
        }
    }
    if (found < 0) break;
    contracted |= bit(found);
  }
  out.red = contract(g, contracted);
  out.st_hat = out.red.target;
  // erase valence-2 weight-0 leg-free vertices of st_hat
  const Graph& h = out.st_hat;
  std::vector<bool> erased(h.nv(), false);
  for (std::size_t v = 0; v < h.nv(); ++v)
    if (h.weight[v] == 0 && valence(h, static_cast<int>(v)) == 2 && legs_at(h, static_cast<int>(v)) == 0) {
      // a lone vertex with a single loop has no neighbours to merge into
      bool loop_only = false;
      for (std::size_t e = 0; e < h.ne(); ++e)
        if (h.is_loop(e) && h.ends[e][0] == static_cast<int>(v)) loop_only = true;
      if (!loop_only) {
        erased[v] = true;
        out.removed_vertices.push_back(static_cast<int>(v));
      }
    }
  // chains: union st_hat edges through erased vertices
  UnionFind chain(h.ne());
  for (std::size_t v = 0; v < h.nv(); ++v) {
    if (!erased[v]) continue;
    int first = -1;
    for (std::size_t e = 0; e < h.ne(); ++e)
      if (h.ends[e][0] == static_cast<int>(v) || h.ends[e][1] == static_cast<int>(v)) {
        if (first < 0) first = static_cast<int>(e);
        else chain.unite(first, static_cast<int>(e));
      }
  }
  Graph st;
  std::vector<int> vmap(h.nv(), -1);
  for (std::size_t v = 0; v < h.nv(); ++v)
    if (!erased[v]) {
      vmap[v] = static_cast<int>(st.nv());
      st.vid.push_back(h.vid[v]);
      st.weight.push_back(h.weight[v]);
    }
  std::map<int, int> chain_to_edge;
  out.refine_over.assign(h.ne(), -1);
  for (std::size_t e = 0; e < h.ne(); ++e) {
    int c = chain.find(static_cast<int>(e));
    if (chain_to_edge.count(c)) {
      out.refine_over[e] = chain_to_edge[c];
      continue;
    }
    // endpoints of the chain: the non-erased vertices at its ends, taken in
    // the direction of the chain's first edge
    std::vector<int> members;
    for (std::size_t f = 0; f < h.ne(); ++f)
      if (chain.find(static_cast<int>(f)) == c) members.push_back(static_cast<int>(f));
    std::vector<int> term;
    for (int f : members)
      for (int k = 0; k < 2; ++k)
        if (!erased[h.ends[f][k]]) term.push_back(h.ends[f][k]);
    if (term.size() != 2) throw InvariantViolation("stable_reduction: malformed chain");
    int id = static_cast<int>(st.ne());
    chain_to_edge[c] = id;
    out.refine_over[e] = id;
    std::string name = h.eid[members[0]];
    for (int f : members) name = std::min(name, h.eid[f]);
    st.eid.push_back(name);
    st.ends.push_back({vmap[term[0]], vmap[term[1]]});
  }
  for (int l : h.legs) st.legs.push_back(vmap[l]);
  // canonical order of st edges
  std::vector<int> order(st.ne());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return st.eid[a] < st.eid[b]; });
  Graph sorted = st;
  std::vector<int> inv(st.ne());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.eid[i] = st.eid[order[i]];
    sorted.ends[i] = st.ends[order[i]];
    inv[order[i]] = static_cast<int>(i);
  }
  for (int& x : out.refine_over) x = inv[x];
  out.st = sorted;
  return out;
}

// Drop legs 1..n, keeping only leg 0.
inline Graph forget_legs(Graph g) {
  g.legs.resize(1);
  return g;
}

}  // namespace tropabel
