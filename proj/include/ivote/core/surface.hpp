#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ivote/core/box.hpp"
#include "ivote/core/interval.hpp"

namespace ivote {

// Every surface family used here has at most this many essential parameters
// and dependent (ambient minus surface) dimensions.
inline constexpr int kMaxEssential = 5;
inline constexpr int kMaxDependent = 2;

// A k-dimensional surface in d-dimensional normalized space written as a
// graph over the first k coordinates:
//
//   x_j = F_j(x_1..x_k; t) + f_j            for j = k+1..d
//
// t are the essential parameters (they shape the surface), f are free
// parameters that enter purely additively, one per dependent coordinate.
// The functions F_j belong to the surface model named by model_tag; this
// struct only carries data.
struct ParametricSurface {
  int d = 0;                             // ambient dimension
  int k = 0;                             // surface dimension
  std::vector<double> t;                 // essential parameters
  std::vector<double> f;                 // free parameters, size d-k
  std::string model_tag;
  std::vector<std::uint32_t> source_ids; // input items this surface came from
};

// Requirements on a surface model type M. A model is a family of surfaces
// sharing the same F; per-surface data lives in (t, f) arrays.
//
//   eval(t, x, dep)    writes F_j(x; t) for each dependent coordinate,
//                      WITHOUT the free parameter (callers add f). Returns
//                      false on a domain error (e.g. vanishing denominator).
//   bounds(t, xs, dep) interval version over a box of the k independent
//                      coordinates; must contain the exact image (no false
//                      negatives downstream). Returns false when the image
//                      cannot be bounded (callers must treat the surface as
//                      potentially anywhere).
//   deviation_bound(t_old, t_new, box, out)
//                      writes, per dependent coordinate j, a sound upper
//                      bound on  sup_{x in box} |D_j(x) - D_j(center)| with
//                      D_j(x) = F_j(x;t_old) - F_j(x;t_new). This is what
//                      limits the error introduced by rounding essentials
//                      once the free parameter is re-fitted at the center.
//   essential_scale(i) reciprocal sensitivity of essential i: a change dt
//                      moves any dependent coordinate by at most about
//                      dt * delta / scale over a box of diameter delta.
//                      Rounding steps are scale * eps'/((l+1)*delta); every
//                      rounding is re-verified via deviation_bound, so these
//                      only tune merge rates, never soundness.
//   essential_range(i) range of essential i actually present in the data
//                      (set from the instance); sizes the canonical lattice.
//   dependent_bound(j) sup |F_j| over the declared parameter ranges and the
//                      unit domain; used for reporting and sanity checks.
template <class M>
concept SurfaceModel = requires(const M m, const double* t, const double* x,
                                double* dep, const Interval* xs, Interval* ds,
                                const Box& box, int i) {
  { m.ambient_dim() } -> std::convertible_to<int>;
  { m.surface_dim() } -> std::convertible_to<int>;
  { m.essential_count() } -> std::convertible_to<int>;
  { m.tag() } -> std::convertible_to<std::string_view>;
  { m.eval(t, x, dep) } -> std::convertible_to<bool>;
  { m.bounds(t, xs, ds) } -> std::convertible_to<bool>;
  { m.deviation_bound(t, t, box, dep) };
  { m.essential_scale(i) } -> std::convertible_to<double>;
  { m.essential_range(i) } -> std::convertible_to<Interval>;
  { m.dependent_bound(i) } -> std::convertible_to<double>;
  { m.default_eps_prime_scale() } -> std::convertible_to<double>;
};

// F + f at a point; false on domain error. dep must hold d-k slots.
template <SurfaceModel M>
bool evaluate_surface(const M& m, const ParametricSurface& s,
                      const double* x, double* dep) {
  if (!m.eval(s.t.data(), x, dep)) return false;
  const int nd = m.ambient_dim() - m.surface_dim();
  for (int j = 0; j < nd; ++j) dep[j] += s.f[j];
  return true;
}

}  // namespace ivote
