#pragma once

#include <cstdint>
#include <stdexcept>

#include "ivote/core/space_map.hpp"
#include "ivote/models/linear_graph.hpp"

namespace ivote {

// Dual of 2-d similarity alignment. A transform (a,b,c,d) maps p to
//   q_x = a p_x + b p_y + c,   q_y = a p_y - b p_x + d,
// so a matched pair (p, q) constrains (a,b) linearly in (c,d):
//   a = u c + v d + f_a,   b = v c - u d + f_b,
// with u = -p_x/|p|^2, v = -p_y/|p|^2. Voting axes (c, d | a, b). The tied
// +-(u, v) coefficient pattern survives the axis maps only when the (c, d)
// axes share one scale and the (a, b) axes share another; the factories
// enforce that.
inline void check_sim2_space(const SpaceMap& space) {
  if (space.scale(0) != space.scale(1) || space.scale(2) != space.scale(3))
    throw std::invalid_argument("sim2: (c,d) axes and (a,b) axes must share scales");
}

inline LinearGraphModel make_sim2_model(const SpaceMap& space, double uv_cap = 4.0,
                                        double eps_prime_scale = 0.0) {
  check_sim2_space(space);
  const double r = uv_cap * space.scale(0) / space.scale(2);
  const Interval rng{-r, r};
  return LinearGraphModel("sim2", 4, 2,
                          {{{0, 0, 1.0}, {1, 1, 1.0}},    // a: u c + v d
                           {{1, 0, 1.0}, {0, 1, -1.0}}},  // b: v c - u d
                          {rng, rng},
                          eps_prime_scale > 0.0 ? eps_prime_scale : 0.5);
}

// p at the origin leaves (a,b) unconstrained; callers must reject |p|^2
// below their tolerance before building the surface.
inline ParametricSurface sim2_surface(const SpaceMap& space, double px, double py,
                                      double qx, double qy, std::uint32_t id) {
  check_sim2_space(space);
  const double n2 = px * px + py * py;
  if (n2 <= 0.0) throw std::domain_error("sim2: source point at origin");
  const double u = -px / n2, v = -py / n2;
  const double fa = (px * qx + py * qy) / n2;
  const double fb = (py * qx - px * qy) / n2;
  const double sc = space.scale(0), sa = space.scale(2);
  ParametricSurface s;
  s.d = 4;
  s.k = 2;
  s.model_tag = "sim2";
  s.t = {u * sc / sa, v * sc / sa};
  // Free parameters absorb the affine shifts of all four axes.
  const double ca = u * space.lo[0] + v * space.lo[1] + fa;
  const double cb = v * space.lo[0] - u * space.lo[1] + fb;
  s.f = {(ca - space.lo[2]) / sa, (cb - space.lo[3]) / sa};
  s.source_ids = {id};
  return s;
}

}  // namespace ivote
