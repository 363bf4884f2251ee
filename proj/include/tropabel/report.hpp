#pragma once
// The theta instance and the JSON report of its worked examples (poset,
// flow, fan cone, ray flows, semigroup and ideals) diffed by
// `tropabel paper-examples` against tests/golden.

#include "json_io.hpp"

namespace tropabel {

// Two vertices v0, v1 joined by e0, e1, e2; leg 0 at v0 (and leg 1 at v1).
inline Graph theta_graph(bool two_legs = false) {
  GraphSpec gs;
  gs.vertices = {{"v0", 0}, {"v1", 0}};
  gs.edges = {{"e0", {"v0", "v1"}}, {"e1", {"v0", "v1"}}, {"e2", {"v0", "v1"}}};
  gs.legs[0] = "v0";
  if (two_legs) gs.legs[1] = "v1";
  return build_graph(gs);
}

inline ordered_json poset_json(const Graph& g, const QuasistablePoset& P, bool with_orbits) {
  ordered_json j;
  j["elements"] = ordered_json::array();
  for (const auto& pd : P.elements) j["elements"].push_back(pseudo_divisor_json(g, pd));
  j["covers"] = ordered_json::array();
  for (auto [a, b] : P.covers) j["covers"].push_back({a, b});
  if (with_orbits) {
    PosetOrbits O = poset_orbits(g, P);
    ordered_json o = ordered_json::array();
    for (const auto& [D, cnt] : O.keys) o.push_back({{"D", D}, {"E_per_parallel_class", cnt}});
    j["orbits"] = o;
    j["orbit_covers"] = ordered_json::array();
    for (auto [a, b] : O.covers) j["orbit_covers"].push_back({a, b});
  }
  return j;
}

// Index of the admissible pair whose open cone contains x.
inline int pair_through(const AbelFan& fan, const RatVec& x) {
  auto loc = locate_in(fan.cones, x, true);
  require(loc.has_value(), "point not in the fan");
  return loc->index;
}

inline ordered_json worked_examples_report() {
  ordered_json rep;
  Graph g = theta_graph();
  Polarization mu0 = zero_polarization(g);

  QuasistablePoset P = enumerate_quasistable(g, mu0);
  rep["poset"] = poset_json(g, P, true);

  IntVec D0{4, -4};
  AbelFan fan = build_fan(g, mu0, D0);
  int i = pair_through(fan, {2, 2, 3});
  const AbelCone& ac = fan.cones[i];
  rep["flow"] = pair_json(g, ac.pair);
  rep["cone"] = cone_json(ac.K);

  ordered_json rays = ordered_json::array();
  for (const auto& r : ac.K.rays) {
    FaceKey key;
    for (const auto& m : fan.members)
      if (m.K.dim == 1 && m.K.rays.at(0) == r) key = m.key;
    FaceProvenance fp = face_provenance(g, D0, key);
    ordered_json f = pair_json(fp.spec.target, fp.pair);
    rays.push_back({{"ray", r}, {"contracted", edge_ids_json(g, key.Z)}, {"flow", f["phi"]}});
  }
  rep["ray_flows"] = rays;

  DualAndHilbert dh = dual_and_hilbert(ac.K);
  ordered_json sg;
  sg["dual_rays"] = mat_json(dh.dual_rays);
  sg["hilbert_basis"] = mat_json(dh.hilbert);
  ordered_json fns = ordered_json::array();
  for (std::size_t e0 = 0; e0 < g.ne(); ++e0) {
    if (!has(ac.pair.E, e0)) continue;
    BoundaryFunctionals bf = boundary_functionals(ac, e0);
    fns.push_back({{"edge", g.eid[e0]}, {"u_prime", bf.u1}, {"u_double_prime", bf.u2}});
  }
  sg["functionals"] = fns;
  rep["semigroup"] = sg;

  TauRing R = tau_ring(ac.K, 0);
  ordered_json ideals;
  struct Item {
    const char* name;
    IntVec ray;
    Int n;
  };
  for (const auto& it : {Item{"I1", {1, 1, 1}, 2}, Item{"I2", {2, 1, 2}, 2}, Item{"I3", {1, 2, 2}, 1}, Item{"I4", {1, 1, 2}, 1}}) {
    MonomialIdeal I = R.symbolic_power(R.span.to_coords(it.ray), it.n);
    ideals[it.name] = {{"ray", it.ray}, {"n", it.n}, {"generators", ideal_json(R, I)}};
  }
  IcapReport ic = icap_check(ac, 0);
  ideals["intersection"] = ideal_json(R, ic.lhs);
  ideals["closed_form"] = ideal_json(R, ic.rhs);
  ideals["equal"] = ic.equal;
  rep["ideals"] = ideals;
  return rep;
}

}  // namespace tropabel
