#include "common.hpp"

using namespace tropabel;
using namespace tropabel::testing;

TEST(Graph, ThetaIsValid) {
  Graph g = theta();
  EXPECT_EQ(g.nv(), 2u);
  EXPECT_EQ(g.ne(), 3u);
  EXPECT_EQ(genus(g), 2);
  EXPECT_EQ(g.v0(), 0);
}

TEST(Graph, SingleVertex) {
  Graph g = make_graph({{"v", 0}}, {}, {{0, "v"}});
  EXPECT_EQ(g.ne(), 0u);
  EXPECT_EQ(genus(g), 0);
}

TEST(Graph, RejectsBadInput) {
  EXPECT_THROW(make_graph({{"v", 0}}, {{"e", {"v", "w"}}}), ValidationError);
  EXPECT_THROW(make_graph({{"v", 0}, {"v", 0}}, {}), ValidationError);
  EXPECT_THROW(make_graph({{"v", -1}}, {}), ValidationError);
  EXPECT_THROW(make_graph({{"a", 0}, {"b", 0}}, {}), ValidationError);  // disconnected
}

TEST(Graph, IdsAreSorted) {
  Graph g = make_graph({{"b", 0}, {"a", 1}}, {{"z", {"b", "a"}}, {"y", {"a", "a"}}});
  EXPECT_EQ(g.vid, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(g.eid, (std::vector<std::string>{"y", "z"}));
  EXPECT_TRUE(g.is_loop(0));
  EXPECT_EQ(g.ends[1][0], g.vertex_index("b"));  // reference orientation kept
}

TEST(Graph, ContractOneThetaEdge) {
  Graph g = theta();
  Specialization s = contract(g, bit(0));
  EXPECT_EQ(s.target.nv(), 1u);
  EXPECT_EQ(s.target.ne(), 2u);
  EXPECT_TRUE(s.target.is_loop(0) && s.target.is_loop(1));
  EXPECT_EQ(s.target.weight[0], 0);
  EXPECT_EQ(genus(s.target), genus(g));
  EXPECT_EQ(s.edge_map[0], -1);
}

TEST(Graph, ContractNothingOrEverything) {
  Graph g = theta();
  Specialization id = contract(g, 0);
  EXPECT_EQ(id.target.vid, g.vid);
  EXPECT_EQ(id.target.ends, g.ends);
  Specialization all = contract(g, g.all_edges());
  EXPECT_EQ(all.target.nv(), 1u);
  EXPECT_EQ(all.target.ne(), 0u);
  EXPECT_EQ(all.target.weight[0], genus(g));
}

TEST(Graph, SubdivideTwoThetaEdges) {
  Graph g = theta();
  Subdivision s = subdivide(g, bit(0) | bit(1));
  EXPECT_EQ(s.result.nv(), 4u);
  EXPECT_EQ(s.result.ne(), 5u);
  int x = s.exceptional[0];
  ASSERT_GE(x, 0);
  EXPECT_EQ(s.result.vid[x], "x:e0");
  EXPECT_EQ(s.result.eid[s.sub[0][0]], "e0/0");
  EXPECT_EQ(s.result.ends[s.sub[0][0]][1], x);
  EXPECT_EQ(s.result.ends[s.sub[0][1]][0], x);
  EXPECT_EQ(s.sub[2][1], -1);
  Subdivision none = subdivide(g, 0);
  EXPECT_EQ(none.result.ends, g.ends);
}

TEST(Graph, SubdividedLoopIsTwoCycle) {
  Graph g = make_graph({{"v", 0}}, {{"l", {"v", "v"}}});
  Subdivision s = subdivide(g, bit(0));
  EXPECT_EQ(s.result.nv(), 2u);
  EXPECT_FALSE(s.result.is_loop(0));
  EXPECT_FALSE(s.result.is_loop(1));
  EXPECT_EQ(b1(s.result), 1u);
}

TEST(Graph, StatsOnTheta) {
  Graph g = theta();
  EXPECT_EQ(delta(g, 0b01), 3u);
  EXPECT_TRUE(nondisconnecting(g, bit(0) | bit(1)));
  EXPECT_FALSE(nondisconnecting(g, g.all_edges()));
  EXPECT_EQ(b0(g, g.all_edges()), 2u);
}

TEST(Graph, CycleBasisAvoidingTwoEdges) {
  Graph g = theta();
  CycleBasis cb = cycle_basis(g, bit(0) | bit(1));
  EXPECT_EQ(cb.tree, bit(2));
  ASSERT_EQ(cb.cycles.size(), 2u);
  EXPECT_EQ(cb.cycles[0], (IntVec{1, 0, -1}));
  EXPECT_EQ(cb.cycles[1], (IntVec{0, 1, -1}));
}

TEST(Graph, CycleBasisTreeAndLoop) {
  Graph tree = make_graph({{"a", 0}, {"b", 0}, {"c", 0}}, {{"e", {"a", "b"}}, {"f", {"b", "c"}}});
  EXPECT_TRUE(cycle_basis(tree).cycles.empty());
  Graph loop = make_graph({{"v", 0}}, {{"l", {"v", "v"}}});
  CycleBasis cb = cycle_basis(loop);
  ASSERT_EQ(cb.cycles.size(), 1u);
  EXPECT_EQ(cb.cycles[0], (IntVec{1}));
}

// The three-graph picture: a theta with subdivided outer arcs, a weight-2
// vertex carrying the leg and a weight-0 tail both hanging off the bottom arc.
TEST(Graph, StableReductionExample) {
  Graph g = make_graph({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}, {"p", 2}, {"f", 0}},
                       {{"ac", {"a", "c"}},
                        {"cb", {"c", "b"}},
                        {"ab", {"a", "b"}},
                        {"ad", {"a", "d"}},
                        {"db", {"d", "b"}},
                        {"dp", {"d", "p"}},
                        {"df", {"d", "f"}}},
                       {{0, "p"}});
  StableReduction r = stable_reduction(g);
  EXPECT_EQ(r.st_hat.nv(), 5u);  // the tail f is gone
  EXPECT_EQ(r.st_hat.ne(), 6u);
  EXPECT_EQ(r.st.nv(), 4u);       // and the valence-2 vertex c is erased
  EXPECT_EQ(r.st.ne(), 5u);
  EXPECT_EQ(r.st_hat.vertex_index("f"), -1);
  EXPECT_EQ(r.st.vertex_index("c"), -1);
  EXPECT_EQ(genus(r.st), genus(g));
  EXPECT_EQ(r.red.contracted, bit(g.edge_index("df")));
}

TEST(Graph, StableGraphIsFixed) {
  Graph g = theta();
  StableReduction r = stable_reduction(g);
  EXPECT_EQ(r.st.ends, g.ends);
  EXPECT_EQ(r.st_hat.ends, g.ends);
  EXPECT_EQ(r.red.contracted, 0u);
}

TEST(Graph, StableReductionContractsPath) {
  // leg at one end, weight 2 at the other: every tail contraction fires and
  // the leg ends on the weight-2 vertex
  Graph g = make_graph({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 2}},
                       {{"ab", {"a", "b"}}, {"bc", {"b", "c"}}, {"cd", {"c", "d"}}}, {{0, "a"}});
  StableReduction r = stable_reduction(g);
  EXPECT_EQ(r.st.nv(), 1u);
  EXPECT_EQ(r.st.ne(), 0u);
  EXPECT_EQ(r.st.weight[0], 2);
  EXPECT_EQ(r.st.legs[0], 0);
}
