// Randomized invariants on small instances.  Generators are the hand-rolled
// ones in verify.hpp; seeds are fixed so failures reproduce.

#include "common.hpp"

using namespace tropabel;
using namespace tropabel::testing;

namespace {

struct RandomInstance {
  Graph g;
  IntVec D0;
  Polarization mu;
};

RandomInstance random_instance(Rng& rng, int max_v = 3, int max_e = 4) {
  RandomInstance I;
  I.g = random_graph(rng, max_v, max_e, true);
  I.D0 = random_divisor(rng, I.g.nv(), -4, 4);
  I.mu = random_polarization(rng, I.g.nv(), degree(I.D0));
  return I;
}

}  // namespace

TEST(Property, QuasistabilityRoutesAgree) {
  Rng rng(11);
  for (int k = 0; k < 60; ++k) {
    RandomInstance I = random_instance(rng, 4, 5);
    for (EdgeSet E = 0; E < bit(I.g.ne()); ++E) {
      if (!nondisconnecting(I.g, E)) continue;
      Subdivision s = subdivide(I.g, E);
      IntVec D(s.result.nv(), -1);
      for (std::size_t v = 0; v < I.g.nv(); ++v) D[v] = I.D0[v];
      D[0] += popcount(E);
      PseudoDivisor pd{E, D};
      ASSERT_EQ(is_quasistable(I.g, pd, I.mu), is_quasistable_via_removal(I.g, pd, I.mu));
    }
  }
}

TEST(Property, PosetElementsAreQuasistableAndCoversSpecialize) {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    RandomInstance I = random_instance(rng);
    QuasistablePoset P = enumerate_quasistable(I.g, I.mu);
    ASSERT_FALSE(P.elements.empty());
    for (const auto& pd : P.elements) EXPECT_TRUE(is_quasistable(I.g, pd, I.mu));
    for (auto [a, b] : P.covers) EXPECT_EQ(popcount(P.elements[a].E), popcount(P.elements[b].E) + 1);
  }
}

TEST(Property, PartitionOnRandomFans) {
  Rng rng(13);
  for (int k = 0; k < 8; ++k) {
    RandomInstance I = random_instance(rng);
    AbelFan fan = build_fan(I.g, I.mu, I.D0);
    Tally t = partition_check(fan, rng, 150);
    EXPECT_TRUE(t.passed()) << (t.notes.empty() ? "" : t.notes[0]);
    Tally d = dimension_check(fan);
    EXPECT_TRUE(d.passed()) << (d.notes.empty() ? "" : d.notes[0]);
  }
}

TEST(Property, IsoCKRoundTrip) {
  Rng rng(14);
  for (int k = 0; k < 6; ++k) {
    RandomInstance I = random_instance(rng);
    AbelFan fan = build_fan(I.g, I.mu, I.D0);
    for (const auto& ac : fan.cones) {
      Tally t = isock_check(ac, rng, 10);
      EXPECT_TRUE(t.passed()) << (t.notes.empty() ? "" : t.notes[0]);
    }
  }
}

TEST(Property, FanAxiomsOnRandomFans) {
  Rng rng(15);
  for (int k = 0; k < 4; ++k) {
    RandomInstance I = random_instance(rng, 3, 3);
    AbelFan fan = build_fan(I.g, I.mu, I.D0);
    EXPECT_TRUE(fan_axioms_check(fan).passed());
    EXPECT_TRUE(ray_classification_check(fan).passed());
  }
}

TEST(Property, BoundaryFunctionalLemma) {
  Rng rng(16);
  std::size_t seen = 0;
  for (int k = 0; k < 40; ++k) {
    RandomInstance I = random_instance(rng, 3, 5);
    AbelFan fan = build_fan(I.g, I.mu, I.D0);
    for (const auto& ac : fan.cones)
      for (std::size_t e0 = 0; e0 < I.g.ne(); ++e0) {
        if (!has(ac.pair.E, e0)) continue;
        ++seen;
        BoundaryFunctionals bf = boundary_functionals(ac, e0);
        EXPECT_EQ(add(bf.u1, bf.u2), unit_vector(I.g.ne(), e0));
        for (const auto& r : ac.K.rays) {
          Int a = dot(bf.u1, r), b = dot(bf.u2, r);
          EXPECT_GE(a, 0);
          EXPECT_GE(b, 0);
          EXPECT_TRUE(a == 0 || b == 0);
          if (a == 0 && b == 0) EXPECT_EQ(r[e0], 0);
        }
        EXPECT_NO_THROW(check_boundary_functionals(ac, bf));
      }
  }
  EXPECT_GT(seen, 0u);
}

TEST(Property, IcapOnRandomFans) {
  Rng rng(17);
  for (int k = 0; k < 3; ++k) {
    RandomInstance I = random_instance(rng, 3, 3);
    AbelFan fan = build_fan(I.g, I.mu, I.D0);
    for (const auto& ac : fan.cones)
      for (std::size_t e0 = 0; e0 < I.g.ne(); ++e0) EXPECT_TRUE(icap_check(ac, e0).equal);
  }
}

// χ^u ∈ ⟨χ^v⟩ by the semigroup-difference test and by explicit search.
TEST(Property, PrincipalMembershipBiconditional) {
  ConeQQ K = cone_from_rays(3, {{1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {1, 1, 2}});
  Monoid SK = make_monoid(3, K.rays);
  Rng rng(18);
  auto random_monomial = [&] {
    IntVec w(3, 0);
    for (const auto& g : SK.gens) w = add(w, scale(rng.uniform(0, 2), g));
    return w;
  };
  for (int k = 0; k < 300; ++k) {
    IntVec u = random_monomial(), v = random_monomial();
    EXPECT_EQ(monomial_in_principal(SK, u, v), in_principal_by_search(SK, u, v, 24));
  }
}

// Generators of a localization preimage and the iff criterion agree on every
// monomial up to a degree bound.
TEST(Property, LocalizationPreimageCriterion) {
  ConeQQ K = cone_from_rays(3, {{1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {1, 1, 2}});
  TauRing R = tau_ring(K, 0);
  Rng rng(19);
  for (const auto& r : R.K_rays)
    for (Int n = 0; n <= 2; ++n) {
      IntVec u0 = R.y(n);
      LocalizationPreimage lp = localization_preimage(R.S, R.face_over(r), u0);
      std::set<IntVec> seen{IntVec(R.k + 1, 0)};
      std::vector<IntVec> frontier{IntVec(R.k + 1, 0)};
      for (int L = 0; L < 4; ++L) {
        std::vector<IntVec> next;
        for (const auto& w : frontier) {
          EXPECT_EQ(in_ideal(R.S, lp.ideal, w), lp.contains(w));
          EXPECT_EQ(lp.contains(w), R.in_symbolic_power(w, r, n));
          for (const auto& g : R.S.gens)
            if (seen.insert(add(w, g)).second) next.push_back(add(w, g));
        }
        frontier = std::move(next);
      }
    }
}

TEST(Property, AbelUniquenessScalingRelabelling) {
  Rng rng(20);
  for (int k = 0; k < 40; ++k) {
    RandomInstance I = random_instance(rng, 3, 4);
    Tally t = abel_uniqueness_check(I.g, I.mu, I.D0, random_point(rng, I.g.ne()), rng);
    EXPECT_TRUE(t.passed()) << (t.notes.empty() ? "" : t.notes[0]);
  }
}

// A point with a zero coordinate is located in the contracted graph's fan; the
// answer is the provenance of the fan cone whose relative interior holds it.
TEST(Property, SpecializationCompatibility) {
  Rng rng(21);
  for (int k = 0; k < 20; ++k) {
    RandomInstance I = random_instance(rng, 3, 4);
    AbelFan fan = build_fan(I.g, I.mu, I.D0);
    RatVec x = random_point(rng, I.g.ne());
    x[rng.uniform(0, static_cast<Int>(I.g.ne()) - 1)] = 0;
    LocateResult r = locate_point(I.g, I.mu, I.D0, x);
    int hits = 0;
    for (const auto& m : fan.members) {
      if (!m.K.in_relative_interior(x)) continue;
      ++hits;
      FaceProvenance fp = face_provenance(I.g, I.D0, m.key);
      EXPECT_EQ(fp.spec.contracted, r.spec.contracted);
      EXPECT_EQ(fp.pair, r.loc.pair);
    }
    EXPECT_EQ(hits, 1);
  }
}

TEST(Property, DeterministicJson) {
  Graph g = theta();
  auto a = fan_json(build_fan(g, zero_polarization(g), {4, -4})).dump();
  auto b = fan_json(build_fan(g, zero_polarization(g), {4, -4})).dump();
  EXPECT_EQ(a, b);
}

TEST(Property, GraphJsonRoundTrip) {
  Rng rng(22);
  for (int k = 0; k < 20; ++k) {
    Graph g = random_graph(rng, 4, 5, true);
    Graph h = graph_from_json(json::parse(graph_to_json(g).dump()));
    EXPECT_EQ(h.vid, g.vid);
    EXPECT_EQ(h.eid, g.eid);
    EXPECT_EQ(h.ends, g.ends);
    EXPECT_EQ(h.weight, g.weight);
    EXPECT_EQ(h.legs, g.legs);
  }
}
