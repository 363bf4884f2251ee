// tropabel: command-line front end.
//
// Exit status: 0 success, 1 validation error (bad input or flags), 2 desk
// scale cap or search bound exceeded, 3 golden mismatch or failed check,
// 4 internal invariant violation.

#include "tropabel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>

using namespace tropabel;

namespace {

struct Options {
  std::string graph, mu, D0, A, point, out, rays, edge, golden = TROPABEL_GOLDEN_DIR;
  Int cap = 0, t = 0, n = -1;
  int jobs = 1, pair = -1, points = 200;
  std::uint64_t seed = 1;
  bool orbits = false, update = false;
};

int mismatch_exit = 0;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Graph load_graph(const Options& o) {
  if (o.graph.empty()) throw ValidationError("--graph is required");
  return graph_from_json(read_json_file(o.graph));
}

Polarization load_mu(const Options& o, const Graph& g, Int deg) {
  Polarization mu = o.mu.empty() ? Polarization{Rational(0)} : parse_polarization(o.mu, g.nv());
  if (mu.size() == 1 && g.nv() != 1 && sgn(mu[0]) == 0) mu = zero_polarization(g);
  if (mu.size() != g.nv()) throw ValidationError("--mu needs one entry per vertex");
  if (degree(mu) != Rational(deg)) throw ValidationError("deg μ = " + to_string(degree(mu)) + " but deg D0 = " + std::to_string(deg));
  return mu;
}

IntVec load_D0(const Options& o, const Graph& g) {
  if (o.D0.empty()) throw ValidationError("--D0 is required");
  IntVec D0 = parse_int_list(o.D0);
  if (D0.size() != g.nv()) throw ValidationError("--D0 needs one entry per vertex");
  return D0;
}

IntMat parse_rays(const std::string& s) {
  IntMat rays;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) rays.push_back(parse_int_list(tok));
  if (rays.empty()) throw ValidationError("--rays is empty");
  for (const auto& r : rays)
    if (r.size() != rays[0].size()) throw ValidationError("--rays: rays of different lengths");
  return rays;
}

int edge_by_id(const Graph& g, const std::string& id) {
  int e = g.edge_index(id);
  if (e < 0) throw ValidationError("unknown edge '" + id + "'");
  return e;
}

void emit(const Options& o, const ordered_json& j) {
  std::string s = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << s;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ValidationError("cannot write '" + o.out + "'");
  f << s;
}

struct Instance {
  Graph g;
  IntVec D0;
  Polarization mu;
};

Instance load_instance(const Options& o) {
  Instance I;
  I.g = load_graph(o);
  I.D0 = load_D0(o, I.g);
  I.mu = load_mu(o, I.g, degree(I.D0));
  return I;
}

const AbelCone& select_pair(const AbelFan& fan, int i) {
  if (i < 0 || i >= static_cast<int>(fan.cones.size()))
    throw ValidationError("--pair must be in [0, " + std::to_string(fan.cones.size()) + ")");
  return fan.cones[i];
}

ordered_json icap_json(const Graph& g, const AbelCone& ac, std::size_t e0, const IcapReport& rep) {
  TauRing R = tau_ring(ac.K, e0);
  ordered_json j;
  j["edge"] = g.eid[e0];
  j["in_E"] = rep.in_E;
  j["n"] = rep.n;
  if (rep.bf) {
    const Graph& h = ac.sub.result;
    j["orientation"] = {{"s", h.eid[rep.bf->half_s]}, {"t", h.eid[rep.bf->half_t]},
                        {"phi_s", rep.bf->phi_s}, {"phi_t", rep.bf->phi_t}};
    j["u_prime"] = rep.bf->u1;
    j["u_double_prime"] = rep.bf->u2;
  }
  ordered_json pr = ordered_json::array();
  for (std::size_t k = 0; k < rep.powers.size(); ++k)
    pr.push_back({{"ray", rep.rays[rep.power_ray[k]]}, {"power", rep.powers[k]}, {"ideal", ideal_json(R, rep.per_ray[k])}});
  j["per_ray"] = pr;
  j["intersection"] = ideal_json(R, rep.lhs);
  j["closed_form"] = ideal_json(R, rep.rhs);
  j["equal"] = rep.equal;
  return j;
}

ordered_json tally_json(const Tally& t) {
  return {{"checked", t.checked}, {"failed", t.failed}, {"notes", t.notes}, {"passed", t.passed()}};
}

// ---- commands ----------------------------------------------------------------

void cmd_poset(const Options& o) {
  Graph g = load_graph(o);
  Polarization mu = o.mu.empty() ? zero_polarization(g) : parse_polarization(o.mu, g.nv());
  if (mu.size() != g.nv()) throw ValidationError("--mu needs one entry per vertex");
  Rational dq = degree(mu);
  if (dq.denominator() != 1) throw ValidationError("deg μ must be an integer");
  ordered_json j = poset_json(g, enumerate_quasistable(g, mu, o.cap), o.orbits);
  j["degree"] = dq.numerator();
  emit(o, j);
}

void cmd_admissible(const Options& o) {
  Instance I = load_instance(o);
  ordered_json a = ordered_json::array();
  for (const auto& p : enumerate_admissible(I.g, I.mu, I.D0, o.cap)) a.push_back(pair_json(I.g, p));
  emit(o, {{"pairs", a}});
}

void cmd_build_fan(const Options& o) {
  Instance I = load_instance(o);
  emit(o, fan_json(build_fan(I.g, I.mu, I.D0, o.cap)));
}

void cmd_locate(const Options& o) {
  if (!o.A.empty()) {
    if (o.graph.empty()) throw ValidationError("--graph is required");
    MetricGraph X;
    json gj = read_json_file(o.graph);
    if (o.point.empty()) {
      X = metric_graph_from_json(gj);
    } else {
      X.g = graph_from_json(gj);
      X.lengths = parse_rat_list(o.point);
    }
    IntVec A = parse_int_list(o.A);
    Polarization mu = o.mu.empty() ? zero_polarization(X.g) : parse_polarization(o.mu, X.g.nv());
    emit(o, abel_json(abel_eval(X, A, mu)));
    return;
  }
  Instance I = load_instance(o);
  if (o.point.empty()) throw ValidationError("--point is required");
  RatVec x = parse_rat_list(o.point);
  LocateResult r = locate_point(I.g, I.mu, I.D0, x);
  ordered_json j;
  j["contracted"] = edge_ids_json(I.g, r.spec.contracted);
  j["pair_index"] = r.loc.index;
  j["pair"] = pair_json(r.spec.target, r.loc.pair);
  const Graph& h = subdivide(r.spec.target, r.loc.pair.E).result;
  j["preimage"] = ordered_json::object();
  for (std::size_t f = 0; f < h.ne(); ++f) j["preimage"][h.eid[f]] = to_string(r.loc.preimage[f]);
  emit(o, j);
}

void cmd_dual_hilbert(const Options& o) {
  ConeQQ K;
  if (!o.rays.empty()) {
    IntMat rays = parse_rays(o.rays);
    K = cone_from_rays(rays[0].size(), rays);
  } else {
    Instance I = load_instance(o);
    AbelFan fan = build_fan(I.g, I.mu, I.D0, o.cap);
    K = select_pair(fan, o.pair).K;
  }
  DualAndHilbert dh = dual_and_hilbert(K, o.cap);
  ordered_json j;
  j["cone"] = cone_json(K);
  j["dual_rays"] = mat_json(dh.dual_rays);
  j["hilbert_basis"] = mat_json(dh.hilbert);
  j["unit_rank"] = K.n - K.dim;  // rank of K^⊥ ∩ M
  emit(o, j);
}

void cmd_icap(const Options& o) {
  Instance I = load_instance(o);
  AbelFan fan = build_fan(I.g, I.mu, I.D0, o.cap);
  ordered_json a = ordered_json::array();
  bool all = true;
  for (std::size_t i = 0; i < fan.cones.size(); ++i) {
    if (o.pair >= 0 && static_cast<int>(i) != o.pair) continue;
    for (std::size_t e0 = 0; e0 < I.g.ne(); ++e0) {
      if (!o.edge.empty() && static_cast<int>(e0) != edge_by_id(I.g, o.edge)) continue;
      IcapReport rep = icap_check(fan.cones[i], e0, kDefaultSearchBound, o.cap);
      all &= rep.equal;
      ordered_json j = icap_json(I.g, fan.cones[i], e0, rep);
      j["pair_index"] = i;
      a.push_back(j);
    }
  }
  if (o.pair >= static_cast<int>(fan.cones.size())) select_pair(fan, o.pair);
  emit(o, {{"checks", a}, {"all_equal", all}});
  if (!all) mismatch_exit = 3;
}

void cmd_symbolic_power(const Options& o) {
  if (o.t > 0) {
    if (o.n < 1) throw ValidationError("--n must be ≥ 1");
    SymbolReport rep = symbol_check(o.t, o.n);
    TauRing R = model_ring(o.t);
    emit(o, {{"t", rep.t},
             {"n", rep.n},
             {"m", rep.m},
             {"by_valuation", ideal_json(R, rep.by_valuation)},
             {"by_saturation", ideal_json(R, rep.by_saturation)},
             {"expected", ideal_json(R, rep.expected)},
             {"equal", rep.equal}});
    if (!rep.equal) mismatch_exit = 3;
    return;
  }
  Instance I = load_instance(o);
  if (o.edge.empty() || o.rays.empty() || o.n < 0) throw ValidationError("need --pair, --edge, --rays (one ray) and --n, or --t and --n");
  AbelFan fan = build_fan(I.g, I.mu, I.D0, o.cap);
  const AbelCone& ac = select_pair(fan, o.pair);
  IntMat r = parse_rays(o.rays);
  if (r.size() != 1 || std::find(ac.K.rays.begin(), ac.K.rays.end(), r[0]) == ac.K.rays.end())
    throw ValidationError("--rays must name one extremal ray of the cone");
  TauRing R = tau_ring(ac.K, edge_by_id(I.g, o.edge), o.cap);
  MonomialIdeal J = R.symbolic_power(R.span.to_coords(r[0]), o.n);
  emit(o, {{"ray", r[0]}, {"n", o.n}, {"generators", ideal_json(R, J)}});
}

void cmd_drl(const Options& o) {
  Graph g = load_graph(o);
  if (o.A.empty()) throw ValidationError("--A is required");
  IntVec A = parse_int_list(o.A);
  ordered_json a = ordered_json::array();
  for (const auto& ac : drl_enumerate(g, A)) {
    ordered_json c = cone_json(ac.K);
    c["flow"] = pair_json(g, ac.pair);
    a.push_back(c);
  }
  ordered_json j;
  j["D"] = target_divisor(g, A);
  j["cones"] = a;
  emit(o, j);
}

void cmd_verify(const Options& o) {
  Instance I = load_instance(o);
  AbelFan fan = build_fan(I.g, I.mu, I.D0, o.cap);
  int jobs = std::max(1, o.jobs);
  // point sampling split over jobs, each with its own seed
  std::vector<std::future<std::pair<Tally, Tally>>> parts;
  for (int k = 0; k < jobs; ++k) {
    std::size_t share = static_cast<std::size_t>(o.points / jobs + (k < o.points % jobs ? 1 : 0));
    parts.push_back(std::async(std::launch::async, [&, k, share] {
      Rng rng(o.seed + static_cast<std::uint64_t>(k));
      Tally u;
      Tally p = partition_check(fan, rng, share);
      for (std::size_t i = 0; i < share / 10 + 1; ++i)
        u.merge(abel_uniqueness_check(I.g, I.mu, I.D0, random_point(rng, I.g.ne()), rng));
      return std::make_pair(p, u);
    }));
  }
  Tally part, uniq;
  for (auto& f : parts) {
    auto [p, u] = f.get();
    part.merge(p);
    uniq.merge(u);
  }
  Rng rng(o.seed);
  Tally iso, icap;
  for (const auto& ac : fan.cones) {
    iso.merge(isock_check(ac, rng, 20));
    for (std::size_t e0 = 0; e0 < I.g.ne(); ++e0) {
      IcapReport rep = icap_check(ac, e0, kDefaultSearchBound, o.cap);
      icap.expect(rep.equal, "pair " + vec_str(ac.pair.psi) + ", edge " + I.g.eid[e0]);
    }
  }
  ordered_json j;
  j["admissible_pairs"] = fan.cones.size();
  j["fan_cones"] = fan.members.size();
  j["partition"] = tally_json(part);
  j["dimension"] = tally_json(dimension_check(fan));
  j["fan_axioms"] = tally_json(fan_axioms_check(fan));
  j["isomorphism"] = tally_json(iso);
  j["ray_classification"] = tally_json(ray_classification_check(fan));
  j["icap"] = tally_json(icap);
  j["uniqueness"] = tally_json(uniq);
  bool ok = true;
  for (const auto& [k, v] : j.items())
    if (v.is_object()) ok &= v["passed"].get<bool>();
  j["all_passed"] = ok;
  emit(o, j);
  if (!ok) mismatch_exit = 3;
}

void cmd_worked_examples(const Options& o) {
  ordered_json rep = worked_examples_report();
  std::string path = o.golden + "/worked_examples.json";
  if (o.update) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << rep.dump(2) << "\n";
  }
  json golden = read_json_file(path);
  ordered_json summary;
  summary["golden"] = path;
  ordered_json sections = ordered_json::array();
  bool all = true;
  for (const auto& [k, v] : rep.items()) {
    bool same = golden.contains(k) && json(v) == golden.at(k);
    all &= same;
    sections.push_back({{"section", k}, {"match", same}, {"value", v}});
  }
  for (const auto& [k, v] : golden.items())
    if (!rep.contains(k)) {
      all = false;
      sections.push_back({{"section", k}, {"match", false}, {"value", nullptr}});
    }
  summary["sections"] = sections;
  summary["all_match"] = all;
  emit(o, summary);
  if (!all) mismatch_exit = 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasistable divisors, admissible flows and the fan resolving the tropical Abel map"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s, bool instance) {
    s->add_option("--graph", o.graph, "graph JSON file");
    s->add_option("--out", o.out, "write the JSON result here instead of stdout");
    s->add_option("--cap", o.cap, "enumeration cap (overrides TAK_CAP)");
    if (instance) {
      s->add_option("--D0", o.D0, "divisor on the vertices, e.g. \"4,-4\"");
      s->add_option("--mu", o.mu, "polarization (rationals \"p/q\"), or 0");
    }
  };
  auto* poset = app.add_subcommand("quasistable-poset", "quasistable pseudo-divisors and their covering relations");
  common(poset, false);
  poset->add_option("--mu", o.mu, "polarization (rationals \"p/q\"), or 0");
  poset->add_flag("--orbits", o.orbits, "also report orbits under permutations of parallel edges");
  auto* adm = app.add_subcommand("admissible", "admissible pairs (E, φ)");
  common(adm, true);
  auto* fan = app.add_subcommand("build-fan", "cones of the fan with faces and provenance");
  common(fan, true);
  auto* loc = app.add_subcommand("locate", "locate a point of the orthant, or evaluate the Abel map with --A");
  common(loc, true);
  loc->add_option("--point", o.point, "edge lengths, e.g. \"2,2,3\" or \"1/2,1,1\"");
  loc->add_option("--A", o.A, "a_0,…,a_n,m: evaluate the Abel map of D = mω + Σ a_i leg(i)");
  auto* dh = app.add_subcommand("dual-hilbert", "dual cone and Hilbert basis of a cone");
  common(dh, true);
  dh->add_option("--pair", o.pair, "admissible pair index");
  dh->add_option("--rays", o.rays, "cone generators \"1,1,1;1,2,2\" instead of an instance");
  auto* icap = app.add_subcommand("icap-check", "intersection of symbolic powers against its closed form");
  common(icap, true);
  icap->add_option("--pair", o.pair, "only this admissible pair");
  icap->add_option("--edge", o.edge, "only this edge");
  auto* sp = app.add_subcommand("symbolic-power", "generators of a symbolic power, or the model-ring identity with --t");
  common(sp, true);
  sp->add_option("--pair", o.pair, "admissible pair index");
  sp->add_option("--edge", o.edge, "edge e0");
  sp->add_option("--rays", o.rays, "the extremal ray r");
  sp->add_option("--n", o.n, "power");
  sp->add_option("--t", o.t, "model ring k[x,y,u]/(xy − u^t)");
  auto* drl = app.add_subcommand("drl", "cones of the tropical double-ramification locus");
  common(drl, false);
  drl->add_option("--A", o.A, "a_0,…,a_n,m");
  auto* ver = app.add_subcommand("verify", "run the invariant checks on an instance");
  common(ver, true);
  ver->add_option("--points", o.points, "sampled points");
  ver->add_option("--seed", o.seed, "sampling seed");
  ver->add_option("--jobs", o.jobs, "worker threads for sampling");
  auto* pe = app.add_subcommand("paper-examples", "recompute the worked examples and diff against the golden file");
  pe->add_option("--golden", o.golden, "directory holding worked_examples.json");
  pe->add_option("--out", o.out, "write the report here instead of stdout");
  pe->add_flag("--update", o.update, "rewrite the golden file first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (o.cap > 0) setenv("TAK_CAP", std::to_string(o.cap).c_str(), 1);
    if (*poset) cmd_poset(o);
    else if (*adm) cmd_admissible(o);
    else if (*fan) cmd_build_fan(o);
    else if (*loc) cmd_locate(o);
    else if (*dh) cmd_dual_hilbert(o);
    else if (*icap) cmd_icap(o);
    else if (*sp) cmd_symbolic_power(o);
    else if (*drl) cmd_drl(o);
    else if (*ver) cmd_verify(o);
    else if (*pe) cmd_worked_examples(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    std::cerr << "cap: " << e.what() << "\n";
    return 2;
  } catch (const SearchBoundExceeded& e) {
    std::cerr << "search bound: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 4;
  }
  return mismatch_exit;
}
