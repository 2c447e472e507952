#pragma once

#include <cstdint>

#include "ivote/core/space_map.hpp"
#include "ivote/models/linear_graph.hpp"

namespace ivote {

// Rays in 3-space written as graphs over x:  y = a x + b,  z = c x + d.
// Here the voting space IS the ambient space (find a point shared by many
// rays), so the surface is the ray itself: t = (a, c), f = (b, d).
// slope_cap bounds |a|, |c| of admissible rays (non-vertical form).
inline LinearGraphModel make_ray3_model(const SpaceMap& space, double slope_cap = 2.0,
                                        double eps_prime_scale = 0.0) {
  const double ra = slope_cap * space.scale(0) / space.scale(1);
  const double rc = slope_cap * space.scale(0) / space.scale(2);
  return LinearGraphModel("ray3", 3, 1, {{{0, 0, 1.0}}, {{1, 0, 1.0}}},
                          {Interval{-ra, ra}, Interval{-rc, rc}},
                          eps_prime_scale > 0.0 ? eps_prime_scale : 0.5);
}

inline ParametricSurface ray3_surface(const SpaceMap& space, double a, double b,
                                      double c, double d, std::uint32_t id) {
  ParametricSurface s;
  s.d = 3;
  s.k = 1;
  s.model_tag = "ray3";
  const double sx = space.scale(0), sy = space.scale(1), sz = space.scale(2);
  s.t = {a * sx / sy, c * sx / sz};
  s.f = {(a * space.lo[0] + b - space.lo[1]) / sy,
         (c * space.lo[0] + d - space.lo[2]) / sz};
  s.source_ids = {id};
  return s;
}

}  // namespace ivote
