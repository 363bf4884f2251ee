#pragma once

#include "tropabel.hpp"

#include <gtest/gtest.h>

namespace tropabel::testing {

inline Graph make_graph(std::vector<std::pair<std::string, Int>> vertices,
                        std::vector<std::pair<std::string, std::array<std::string, 2>>> edges,
                        std::map<int, std::string> legs = {}) {
  // leg 0 defaults to the first listed vertex
  if (legs.empty() && !vertices.empty()) legs[0] = vertices.front().first;
  GraphSpec s;
  s.vertices = std::move(vertices);
  s.edges = std::move(edges);
  s.legs = std::move(legs);
  return build_graph(s);
}

inline Graph theta() { return theta_graph(); }

// Index of the admissible pair through an interior point.
inline const AbelCone& cone_through(const AbelFan& fan, const RatVec& x) { return fan.cones.at(pair_through(fan, x)); }

inline std::set<IntVec> as_set(const IntMat& m) { return {m.begin(), m.end()}; }

}  // namespace tropabel::testing
