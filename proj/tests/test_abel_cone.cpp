#include "common.hpp"

using namespace tropabel;
using namespace tropabel::testing;

class ThetaFan : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { fan_ = new AbelFan(build_fan(theta(), zero_polarization(theta()), {4, -4})); }
  static void TearDownTestSuite() { delete fan_; }
  static AbelFan* fan_;
  const AbelCone& example() const { return cone_through(*fan_, {2, 2, 3}); }
};
AbelFan* ThetaFan::fan_ = nullptr;

TEST_F(ThetaFan, ExamplePairCone) {
  const AbelCone& ac = example();
  EXPECT_EQ(ac.pair.E, bit(0) | bit(1));
  EXPECT_EQ(ac.pair.psi, (IntVec{1, 2, 1, 2, 1}));
  // x0 + 2y0 − z2 = 0 and x1 + 2y1 − z2 = 0 in the coordinates (x0, y0, x1, y1, z2)
  EXPECT_EQ(as_set(ac.C_eqs), as_set({{1, 2, 0, 0, -1}, {0, 0, 1, 2, -1}}));
  // 0 ≤ z2 − z0 ≤ z0, 0 ≤ z2 − z1 ≤ z1
  EXPECT_EQ(as_set(ac.K.facets), as_set({{-1, 0, 1}, {2, 0, -1}, {0, -1, 1}, {0, 2, -1}}));
  EXPECT_EQ(as_set(ac.K.rays), as_set({{1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {1, 1, 2}}));
}

TEST_F(ThetaFan, ExampleFacesAreSpecializations) {
  const AbelCone& ac = example();
  auto supports = face_supports(ac);
  for (EdgeSet S : supports) {
    FaceKey k = face_key(ac, S);
    FaceProvenance fp = face_provenance(fan_->g, fan_->D0, k);
    EXPECT_TRUE(is_admissible(fp.spec.target, pushforward_polarization(fp.spec, fan_->mu),
                              pushforward_divisor(fp.spec, fan_->D0), fp.pair));
  }
  // the apex: everything contracted to a single edgeless vertex
  FaceKey apex = face_key(ac, (EdgeSet(1) << ac.msub()) - 1);
  FaceProvenance fp = face_provenance(fan_->g, fan_->D0, apex);
  EXPECT_EQ(fp.spec.target.nv(), 1u);
  EXPECT_EQ(fp.spec.target.ne(), 0u);
}

TEST_F(ThetaFan, RayFlowsOfExampleCone) {
  std::set<std::vector<Int>> flows;
  for (const auto& r : example().K.rays)
    for (const auto& m : fan_->members)
      if (m.K.dim == 1 && m.K.rays[0] == r) {
        FaceProvenance fp = face_provenance(fan_->g, fan_->D0, m.key);
        EXPECT_EQ(fp.spec.target.nv(), 2u);
        std::vector<Int> mag;
        for (Int v : fp.pair.psi) mag.push_back(std::abs(v));
        flows.insert(mag);
      }
  EXPECT_EQ(flows, (std::set<std::vector<Int>>{{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {2, 2, 1}}));
}

TEST_F(ThetaFan, MaximalConesMatchAdmissibleCount) {
  EXPECT_EQ(fan_->maximal.size(), fan_->cones.size());
  EXPECT_EQ(fan_->cones.size(), enumerate_admissible(theta(), zero_polarization(theta()), {4, -4}).size());
}

TEST_F(ThetaFan, LocateExamples) {
  LocateResult a = locate_point(fan_->g, fan_->mu, fan_->D0, {1, 1, 1});
  EXPECT_EQ(a.loc.pair.E, 0u);
  EXPECT_EQ(a.loc.pair.psi, (IntVec{1, 1, 1}));
  EXPECT_EQ(a.loc.pair.D, (IntVec{1, -1}));
  LocateResult b = locate_point(fan_->g, fan_->mu, fan_->D0, {2, 2, 3});
  EXPECT_EQ(b.loc.pair.psi, (IntVec{1, 2, 1, 2, 1}));
  EXPECT_EQ(b.loc.preimage, (RatVec{1, 1, 1, 1, 3}));
}

TEST_F(ThetaFan, LocateOnSharedFacet) {
  // z2 = z0 lies on a facet of the example cone; it belongs to a lower cone
  LocateResult r = locate_point(fan_->g, fan_->mu, fan_->D0, {2, 3, 2});
  EXPECT_NE(r.loc.pair, example().pair);
  EXPECT_FALSE(example().interior_via_inverse(RatVec{2, 3, 2}));
}

TEST_F(ThetaFan, LocateWithZeroCoordinateContracts) {
  LocateResult r = locate_point(fan_->g, fan_->mu, fan_->D0, {0, 1, 1});
  EXPECT_EQ(r.spec.contracted, bit(0));
  EXPECT_EQ(r.spec.target.nv(), 1u);
  EXPECT_THROW(locate_point(fan_->g, fan_->mu, fan_->D0, {-1, 1, 1}), ValidationError);
}

TEST_F(ThetaFan, DimensionFormula) {
  Tally t = dimension_check(*fan_);
  EXPECT_TRUE(t.passed()) << (t.notes.empty() ? "" : t.notes[0]);
  std::map<std::size_t, int> by_dim;
  for (const auto& m : fan_->members) by_dim[m.K.dim]++;
  EXPECT_EQ(by_dim[0], 1);
}

TEST_F(ThetaFan, FanAxioms) {
  Tally t = fan_axioms_check(*fan_);
  EXPECT_TRUE(t.passed()) << (t.notes.empty() ? "" : t.notes[0]);
}

TEST_F(ThetaFan, RayClassification) {
  Tally t = ray_classification_check(*fan_);
  EXPECT_TRUE(t.passed()) << (t.notes.empty() ? "" : t.notes[0]);
}

TEST(AbelCone, TrivialCases) {
  Graph tree = make_graph({{"a", 0}, {"b", 0}, {"c", 0}}, {{"e", {"a", "b"}}, {"f", {"b", "c"}}}, {{0, "a"}});
  AbelFan fan = build_fan(tree, zero_polarization(tree), {0, 0, 0});
  ASSERT_EQ(fan.cones.size(), 1u);
  EXPECT_EQ(as_set(fan.cones[0].K.rays), as_set(identity(2)));
  Graph g = theta();
  AbelCone z = make_abel_cone(g, {0, {0, 0, 0}, {0, 0}});
  EXPECT_EQ(z.K.dim, 3u);
  EXPECT_TRUE(z.C_eqs.empty() || std::all_of(z.C_eqs.begin(), z.C_eqs.end(), is_zero));
}
