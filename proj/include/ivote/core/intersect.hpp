#pragma once

#include <cmath>

#include "ivote/core/box.hpp"
#include "ivote/core/interval.hpp"
#include "ivote/core/surface.hpp"

namespace ivote {

// Conservative surface-vs-box test: bound each dependent coordinate of the
// surface above the box's independent face with interval arithmetic, inflate
// by the per-coordinate slack (vote spread plus accumulated drift), and
// require overlap with the box's dependent spans. One-sided guarantee: never
// false when the surface actually meets the slack-inflated box; may be true
// when it does not. A domain error anywhere over the face keeps the surface.
template <SurfaceModel M>
bool surface_intersects_box(const M& m, const double* t, const double* f,
                            const Box& box, const double* slack) {
  const int k = m.surface_dim();
  const int nd = m.ambient_dim() - k;
  Interval xs[kMaxDim];
  Interval dep[kMaxDependent];
  for (int j = 0; j < k; ++j) xs[j] = box.span(j);
  if (!m.bounds(t, xs, dep)) return true;
  for (int j = 0; j < nd; ++j) {
    const Interval v = dep[j] + f[j];
    if (!v.inflated(slack[j]).overlaps(box.span(k + j))) return false;
  }
  return true;
}

// Reference predicate for families with one dependent coordinate that is
// linear over the face (2-d lines, hyperplanes): the extreme values sit at
// face corners, so enumerating corners gives the exact image, making the
// test exact rather than conservative. Used to cross-check the interval
// predicate in tests.
template <SurfaceModel M>
bool linear_surface_intersects_box_exact(const M& m, const double* t, const double* f,
                                         const Box& box, const double* slack) {
  const int k = m.surface_dim();
  double lo = 0.0, hi = 0.0;
  double x[kMaxDim];
  double dep[kMaxDependent];
  for (unsigned corner = 0; corner < (1u << k); ++corner) {
    for (int j = 0; j < k; ++j) x[j] = (corner >> j) & 1u ? box.hi[j] : box.lo[j];
    if (!m.eval(t, x, dep)) return true;
    const double v = dep[0] + f[0];
    if (corner == 0) {
      lo = hi = v;
    } else {
      lo = std::fmin(lo, v);
      hi = std::fmax(hi, v);
    }
  }
  return Interval{lo, hi}.inflated(slack[0]).overlaps(box.span(k));
}

}  // namespace ivote
