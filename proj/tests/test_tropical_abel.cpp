#include "common.hpp"

using namespace tropabel;
using namespace tropabel::testing;

TEST(TargetDivisor, Formula) {
  Graph g = theta_graph(true);
  EXPECT_EQ(target_divisor(g, {4, -4, 0}), (IntVec{4, -4}));
  EXPECT_EQ(target_divisor(g, {0, 0, 0}), (IntVec{0, 0}));
  EXPECT_EQ(target_divisor(g, {0, 0, 1}), (IntVec{1, 1}));
  EXPECT_EQ(abel_degree(g, {0, 0, 1}), 2);
  EXPECT_EQ(degree(target_divisor(g, {2, 1, 3})), abel_degree(g, {2, 1, 3}));
  EXPECT_THROW(target_divisor(g, {4, -4, 1, 0}), ValidationError);  // missing leg 2
  EXPECT_THROW(target_divisor(g, {4, 0}), ValidationError);
}

TEST(AbelEval, ThetaUnitLengths) {
  MetricGraph X{theta_graph(true), {1, 1, 1}};
  AbelResult r = abel_eval(X, {4, -4, 0}, zero_polarization(X.g));
  EXPECT_EQ(r.loc.pair.E, 0u);
  EXPECT_EQ(r.loc.pair.psi, (IntVec{1, 1, 1}));
  EXPECT_EQ(r.divisor.D, (IntVec{1, -1}));
  EXPECT_TRUE(r.splits.empty());
}

TEST(AbelEval, ThetaExampleLengths) {
  MetricGraph X{theta_graph(true), {2, 2, 3}};
  AbelResult r = abel_eval(X, {4, -4, 0}, zero_polarization(X.g));
  EXPECT_EQ(r.loc.pair.E, bit(0) | bit(1));
  EXPECT_EQ(r.loc.pair.psi, (IntVec{1, 2, 1, 2, 1}));
  ASSERT_EQ(r.splits.size(), 2u);
  for (const auto& s : r.splits) {
    EXPECT_EQ(s.first, Rational(1));
    EXPECT_EQ(s.second, Rational(1));
  }
  ASSERT_EQ(r.support.size(), 4u);
  EXPECT_EQ(r.support[2].edge, "e0");
  EXPECT_EQ(r.support[2].coeff, -1);
}

TEST(AbelEval, RationalSplits) {
  MetricGraph X{theta_graph(true), {Rational(3, 2), Rational(7, 4), 2}};
  AbelResult r = abel_eval(X, {4, -4, 0}, zero_polarization(X.g));
  Subdivision s = subdivide(r.model, r.loc.pair.E);
  EXPECT_EQ(sub(r.loc.pair.D, lift_divisor(s, r.D0)), div_flow(s.result, r.loc.pair.psi));
  for (const auto& sp : r.splits) {
    int e = r.model.edge_index(sp.edge);
    EXPECT_EQ(sp.first + sp.second, r.point[e]);
  }
}

TEST(AbelEval, QuasistableInputIsFixed) {
  MetricGraph X{theta_graph(true), {5, Rational(1, 3), 2}};
  AbelResult r = abel_eval(X, {1, -1, 0}, zero_polarization(X.g));
  EXPECT_EQ(r.loc.pair.E, 0u);
  EXPECT_TRUE(is_zero(r.loc.pair.psi));
  EXPECT_EQ(r.divisor.D, (IntVec{1, -1}));
}

TEST(AbelEval, StableReductionFirst) {
  // a tail edge t to a genus-0 one-leg-free vertex is contracted; its length is free
  Graph g = make_graph({{"a", 0}, {"b", 0}, {"c", 0}},
                       {{"e0", {"a", "b"}}, {"e1", {"a", "b"}}, {"e2", {"a", "b"}}, {"t", {"b", "c"}}},
                       {{0, "a"}, {1, "b"}});
  MetricGraph X{g, {2, 2, 3, 7}};
  AbelResult r = abel_eval(X, {4, -4, 0}, {0, 0, 0});
  EXPECT_EQ(r.free_edges, (std::vector<std::string>{"t"}));
  EXPECT_EQ(r.model.ne(), 3u);
  EXPECT_EQ(r.loc.pair.psi, (IntVec{1, 2, 1, 2, 1}));
  MetricGraph Y{g, {2, 2, 3, 1}};
  EXPECT_EQ(abel_eval(Y, {4, -4, 0}, {0, 0, 0}).loc.pair, r.loc.pair);
}

TEST(AbelEval, PolarizationOnStableModel) {
  Graph g = make_graph({{"a", 0}, {"b", 0}, {"c", 0}},
                       {{"e0", {"a", "b"}}, {"e1", {"a", "b"}}, {"e2", {"a", "b"}}, {"t", {"b", "c"}}},
                       {{0, "a"}, {1, "b"}});
  MetricGraph X{g, {2, 2, 3, 7}};
  AbelResult a = abel_eval(X, {4, -4, 0}, {0, 0, 0});
  AbelResult b = abel_eval(X, {4, -4, 0}, {0, 0});
  EXPECT_EQ(a.loc.pair, b.loc.pair);
  EXPECT_THROW(abel_eval(X, {4, -4, 0}, {0}), ValidationError);
}

TEST(AbelEval, RejectsBadLengths) {
  MetricGraph X{theta_graph(true), {1, 0, 1}};
  EXPECT_THROW(abel_eval(X, {4, -4, 0}, {0, 0}), ValidationError);
}

TEST(Drl, TwoParallelEdges) {
  Graph g = make_graph({{"a", 0}, {"b", 0}}, {{"e0", {"a", "b"}}, {"e1", {"a", "b"}}}, {{0, "a"}, {1, "b"}});
  // an acyclic flow must be positive on both parallel edges, so div = (−1, 1)
  // has no solution; div = (−2, 2) has exactly φ = (1, 1)
  EXPECT_TRUE(drl_enumerate(g, {1, -1, 0}).empty());
  auto two = drl_enumerate(g, {2, -2, 0});
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0].pair.psi, (IntVec{1, 1}));
  EXPECT_EQ(two[0].K.dim, 1u);
  auto zero = drl_enumerate(g, {0, 0, 0});
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(as_set(zero[0].K.rays), as_set(identity(2)));
  EXPECT_THROW(drl_enumerate(g, {1, 0, 0}), ValidationError);
  EXPECT_TRUE(drl_check(g, {3, -3, 0}).passed());
}

TEST(Drl, MatchesBruteForceFlows) {
  Graph g = theta_graph(true);
  for (Int a = 0; a <= 4; ++a) {
    auto cones = drl_enumerate(g, {a, -a, 0});
    Digraph dg{2, {{0, 1}, {0, 1}, {0, 1}}};
    std::size_t positive = 0;
    for (const auto& phi : brute_force_flows(dg, {-a, a}))
      positive += std::all_of(phi.begin(), phi.end(), [](Int v) { return v > 0; }) || a == 0;
    EXPECT_EQ(cones.size(), positive) << "a=" << a;
    EXPECT_TRUE(drl_check(g, {a, -a, 0}).passed());
  }
}
