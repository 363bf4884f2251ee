#pragma once
// JSON encodings of graphs, pseudo-divisors, admissible pairs, cones, fans,
// ideals and Abel-map results.  Rationals are written as "p/q" strings.

#include "semigroup.hpp"
#include "tropical_abel.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace tropabel {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline Graph graph_from_json(const json& j) {
  try {
    GraphSpec spec;
    for (const auto& v : j.at("vertices")) spec.vertices.push_back({v.at("id").get<std::string>(), v.value("weight", Int(0))});
    for (const auto& e : j.at("edges")) {
      const auto& ends = e.at("ends");
      if (!ends.is_array() || ends.size() != 2) throw ValidationError("edge ends must be a pair of vertex ids");
      spec.edges.push_back({e.at("id").get<std::string>(), {ends[0].get<std::string>(), ends[1].get<std::string>()}});
    }
    if (j.contains("legs"))
      for (const auto& [k, v] : j.at("legs").items()) {
        std::size_t pos = 0;
        int idx = std::stoi(k, &pos);
        if (pos != k.size()) throw ValidationError("leg index '" + k + "' is not an integer");
        spec.legs[idx] = v.get<std::string>();
      }
    return build_graph(spec);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ValidationError("graph JSON: bad leg index");
  }
}

inline ordered_json graph_to_json(const Graph& g) {
  ordered_json j;
  j["vertices"] = ordered_json::array();
  for (std::size_t v = 0; v < g.nv(); ++v) j["vertices"].push_back({{"id", g.vid[v]}, {"weight", g.weight[v]}});
  j["edges"] = ordered_json::array();
  for (std::size_t e = 0; e < g.ne(); ++e)
    j["edges"].push_back({{"id", g.eid[e]}, {"ends", {g.vid[g.ends[e][0]], g.vid[g.ends[e][1]]}}});
  j["legs"] = ordered_json::object();
  for (std::size_t i = 0; i < g.legs.size(); ++i) j["legs"][std::to_string(i)] = g.vid[g.legs[i]];
  return j;
}

inline MetricGraph metric_graph_from_json(const json& j) {
  MetricGraph X;
  X.g = graph_from_json(j);
  if (!j.contains("lengths")) throw ValidationError("metric graph JSON needs \"lengths\"");
  X.lengths.assign(X.g.ne(), Rational(0));
  std::vector<bool> seen(X.g.ne(), false);
  for (const auto& [k, v] : j.at("lengths").items()) {
    int e = X.g.edge_index(k);
    if (e < 0) throw ValidationError("length for unknown edge '" + k + "'");
    X.lengths[e] = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<Int>());
    seen[e] = true;
  }
  for (std::size_t e = 0; e < X.g.ne(); ++e)
    if (!seen[e]) throw ValidationError("missing length for edge '" + X.g.eid[e] + "'");
  validate(X);
  return X;
}

inline ordered_json rat_json(const Rational& q) { return to_string(q); }

inline ordered_json rats_json(const RatVec& v) {
  ordered_json a = ordered_json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

inline ordered_json mat_json(const IntMat& m) {
  ordered_json a = ordered_json::array();
  for (const auto& r : m) a.push_back(r);
  return a;
}

inline ordered_json edge_ids_json(const Graph& g, EdgeSet E) {
  ordered_json a = ordered_json::array();
  for (std::size_t e = 0; e < g.ne(); ++e)
    if (has(E, e)) a.push_back(g.eid[e]);
  return a;
}

// {"E":[edge ids], "D":{vertex or "x:<edge>": int}}
inline ordered_json pseudo_divisor_json(const Graph& g, const PseudoDivisor& pd) {
  Subdivision s = subdivide(g, pd.E);
  ordered_json j;
  j["E"] = edge_ids_json(g, pd.E);
  j["D"] = ordered_json::object();
  for (std::size_t v = 0; v < s.result.nv(); ++v) j["D"][s.result.vid[v]] = pd.D[v];
  return j;
}

// φ as nonnegative values on the edges of Γ^E with the orientation each
// nonzero value flows along.
inline ordered_json pair_json(const Graph& g, const AdmissiblePair& p) {
  Subdivision s = subdivide(g, p.E);
  const Graph& h = s.result;
  ordered_json j;
  j["E"] = edge_ids_json(g, p.E);
  j["phi"] = ordered_json::object();
  j["orient"] = ordered_json::object();
  for (std::size_t f = 0; f < h.ne(); ++f) {
    j["phi"][h.eid[f]] = std::abs(p.psi[f]);
    if (p.psi[f] == 0) continue;
    int a = h.ends[f][0], b = h.ends[f][1];
    if (p.psi[f] < 0) std::swap(a, b);
    j["orient"][h.eid[f]] = {h.vid[a], h.vid[b]};
  }
  j["D"] = ordered_json::object();
  for (std::size_t v = 0; v < h.nv(); ++v) j["D"][h.vid[v]] = p.D[v];
  return j;
}

inline ordered_json cone_json(const ConeQQ& c) {
  ordered_json j;
  j["dim"] = c.dim;
  j["equalities"] = mat_json(c.eqs);
  j["inequalities"] = mat_json(c.facets);
  j["rays"] = mat_json(c.rays);
  return j;
}

inline ordered_json fan_json(const AbelFan& fan) {
  ordered_json j;
  j["ray_normalization"] = "primitive integer vectors";
  j["cones"] = ordered_json::array();
  for (const auto& m : fan.members) {
    ordered_json c = cone_json(m.K);
    FaceProvenance fp = face_provenance(fan.g, fan.D0, m.key);
    ordered_json prov = pair_json(fp.spec.target, fp.pair);
    prov["contracted"] = edge_ids_json(fan.g, m.key.Z);
    c["id"] = m.id;
    c["provenance"] = prov;
    c["faces"] = m.faces;
    c["maximal"] = m.maximal;
    j["cones"].push_back(c);
  }
  j["maximal"] = fan.maximal;
  return j;
}

inline ordered_json ideal_json(const TauRing& R, const MonomialIdeal& I) {
  ordered_json a = ordered_json::array();
  for (const auto& g : I.gens) a.push_back(R.str(g));
  return a;
}

inline ordered_json abel_json(const AbelResult& r) {
  ordered_json j;
  j["model"] = graph_to_json(r.model);
  j["free_edges"] = r.free_edges;
  j["D0"] = ordered_json::object();
  for (std::size_t v = 0; v < r.model.nv(); ++v) j["D0"][r.model.vid[v]] = r.D0[v];
  j["pair"] = pair_json(r.model, r.loc.pair);
  j["divisor"] = pseudo_divisor_json(r.model, r.divisor);
  j["splits"] = ordered_json::array();
  for (const auto& s : r.splits)
    j["splits"].push_back({{"edge", s.edge}, {"halves", {to_string(s.first), to_string(s.second)}}, {"offset", to_string(s.offset)}});
  j["support"] = ordered_json::array();
  for (const auto& c : r.support) {
    if (!c.vertex.empty()) j["support"].push_back({{"vertex", c.vertex}, {"coeff", c.coeff}});
    else j["support"].push_back({{"edge", c.edge}, {"offset", to_string(c.offset)}, {"coeff", c.coeff}});
  }
  return j;
}

// "4,-4" -> (4, -4)
inline IntVec parse_int_list(const std::string& s) {
  IntVec out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    Int v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw ValidationError("bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw ValidationError("bad integer '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline RatVec parse_rat_list(const std::string& s) {
  RatVec out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
  return out;
}

// A single "0" stands for the zero polarization.
inline Polarization parse_polarization(const std::string& s, std::size_t nv) {
  RatVec mu = parse_rat_list(s);
  if (mu.size() == 1 && sgn(mu[0]) == 0 && nv != 1) return Polarization(nv, Rational(0));
  return mu;
}

}  // namespace tropabel
