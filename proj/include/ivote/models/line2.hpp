#pragma once

#include <cstdint>

#include "ivote/core/space_map.hpp"
#include "ivote/models/linear_graph.hpp"

namespace ivote {

// Dual of 2-d line fitting: a data point p turns into the line
// b = p2 - a * p1 in the (a, b) parameter plane (axis 0 = slope a,
// axis 1 = intercept b). Essential t = -p1, free f = p2; both rescaled when
// the (a, b) axes carry a non-identity physical range.
inline LinearGraphModel make_line2_model(const SpaceMap& space,
                                         double eps_prime_scale = 0.0) {
  const double r = space.scale(0) / space.scale(1);
  // p1 in [0,1] puts the essential in [-r, 0].
  return LinearGraphModel("line2", 2, 1, {{{0, 0, 1.0}}},
                          {Interval{-r, 0.0}},
                          eps_prime_scale > 0.0 ? eps_prime_scale : 0.35);
}

inline ParametricSurface line2_surface(const SpaceMap& space, double p1, double p2,
                                       std::uint32_t id) {
  ParametricSurface s;
  s.d = 2;
  s.k = 1;
  s.model_tag = "line2";
  const double sa = space.scale(0), sb = space.scale(1);
  s.t = {-p1 * sa / sb};
  s.f = {(p2 - p1 * space.lo[0] - space.lo[1]) / sb};
  s.source_ids = {id};
  return s;
}

}  // namespace ivote
