#pragma once

#include <cstdint>
#include <vector>

#include "ivote/core/space_map.hpp"
#include "ivote/models/linear_graph.hpp"

namespace ivote {

// Dual of hyperplane fitting in d-space: a data point x turns into the
// hyperplane  a_0 = x_d - sum_i a_i x_i  over the slope coordinates
// a_1..a_{d-1} (axes 0..d-2), with the offset a_0 on the last axis.
// Essentials t_i = -x_i, free f = x_d, rescaled through the axis map.
inline LinearGraphModel make_hyperplane_model(int d, const SpaceMap& space,
                                              double eps_prime_scale = 0.0) {
  std::vector<LinTerm> terms;
  std::vector<Interval> range;
  const double s0 = space.scale(d - 1);
  for (int i = 0; i < d - 1; ++i) {
    terms.push_back({i, i, 1.0});
    const double r = space.scale(i) / s0;
    range.push_back(Interval{-r, 0.0});  // x_i in [0,1]
  }
  return LinearGraphModel("hyperplane", d, d - 1, {terms}, range,
                          eps_prime_scale > 0.0 ? eps_prime_scale : 0.5);
}

inline ParametricSurface hyperplane_surface(const SpaceMap& space,
                                            const std::vector<double>& x,
                                            std::uint32_t id) {
  const int d = static_cast<int>(x.size());
  ParametricSurface s;
  s.d = d;
  s.k = d - 1;
  s.model_tag = "hyperplane";
  const double s0 = space.scale(d - 1);
  double f = x[d - 1] - space.lo[d - 1];
  s.t.resize(d - 1);
  for (int i = 0; i < d - 1; ++i) {
    s.t[i] = -x[i] * space.scale(i) / s0;
    f -= x[i] * space.lo[i];
  }
  s.f = {f / s0};
  s.source_ids = {id};
  return s;
}

}  // namespace ivote
