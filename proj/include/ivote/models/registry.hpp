#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ivote/core/space_map.hpp"
#include "ivote/models/hyperplane.hpp"
#include "ivote/models/line2.hpp"
#include "ivote/models/linear_graph.hpp"
#include "ivote/models/pose5.hpp"
#include "ivote/models/pose67.hpp"
#include "ivote/models/radial5.hpp"
#include "ivote/models/ray3.hpp"
#include "ivote/models/sim2.hpp"

namespace ivote {

using ModelVariant = std::variant<LinearGraphModel, Pose5Model, PinholePoseModel, Radial5Model>;

struct ModelDims {
  int d;
  int k;
  int l;  // essential parameter count
};

inline const std::vector<std::string>& model_tags() {
  static const std::vector<std::string> tags = {"line2",  "hyperplane", "pose5",
                                                "pose6",  "pose7",      "radial5",
                                                "ray3",   "sim2"};
  return tags;
}

inline bool known_model_tag(std::string_view tag) {
  for (const auto& t : model_tags())
    if (t == tag) return true;
  return false;
}

// (d, k, l) bookkeeping per family; hyperplane takes its ambient dimension
// from the caller, everything else is fixed.
inline ModelDims model_dims(std::string_view tag, int d_hint = 0) {
  if (tag == "line2") return {2, 1, 1};
  if (tag == "hyperplane") {
    const int d = d_hint > 0 ? d_hint : 3;
    if (d < 2) throw std::invalid_argument("hyperplane: need d >= 2");
    return {d, d - 1, d - 1};
  }
  if (tag == "pose5") return {5, 3, 4};
  if (tag == "pose6") return {6, 4, 5};
  if (tag == "pose7") return {7, 5, 5};
  if (tag == "radial5") return {5, 4, 5};
  if (tag == "ray3") return {3, 1, 2};
  if (tag == "sim2") return {4, 2, 2};
  throw std::invalid_argument("unknown model tag: " + std::string(tag));
}

// Stock physical axis ranges per family: desk-scale pose domains (lateral
// translation within +-2.5 m, depth up to 50 m, focal bracket [0.6, 1.3] of
// nominal, angle-axis cube), unit square/cube for the fitting duals.
inline SpaceMap default_space(std::string_view tag, int d_hint = 0) {
  const double pi = M_PI;
  if (tag == "line2") return SpaceMap::identity(2);
  if (tag == "hyperplane") {
    const int d = model_dims(tag, d_hint).d;
    std::vector<double> lo(d, -1.0), hi(d, 1.0);
    lo[d - 1] = -static_cast<double>(d - 1);
    hi[d - 1] = static_cast<double>(d);
    return SpaceMap(lo, hi);
  }
  if (tag == "pose5")
    return SpaceMap({-25, -25, 0.6, -1, -2.5}, {25, 25, 1.3, 1, 2.5});
  if (tag == "pose6")
    return SpaceMap({0, -pi, -pi, -pi, -2.5, -2.5}, {50, pi, pi, pi, 2.5, 2.5});
  if (tag == "pose7")
    return SpaceMap({0, -pi, -pi, -pi, 0.6, -2.5, -2.5}, {50, pi, pi, pi, 1.3, 2.5, 2.5});
  if (tag == "radial5")
    return SpaceMap({-2.5, -pi, -pi, -pi, -2.5}, {2.5, pi, pi, pi, 2.5});
  if (tag == "ray3") return SpaceMap::identity(3);
  if (tag == "sim2") return SpaceMap({-1, -1, -1.5, -1.5}, {1, 1, 1.5, 1.5});
  throw std::invalid_argument("unknown model tag: " + std::string(tag));
}

inline ModelVariant make_model(std::string_view tag, const SpaceMap& space,
                               double eps_prime_scale = 0.0) {
  ModelVariant m = [&]() -> ModelVariant {
    if (tag == "line2") return make_line2_model(space, eps_prime_scale);
    if (tag == "hyperplane")
      return make_hyperplane_model(space.dim(), space, eps_prime_scale);
    if (tag == "pose5") return Pose5Model(space);
    if (tag == "pose6") return PinholePoseModel(space, false);
    if (tag == "pose7") return PinholePoseModel(space, true);
    if (tag == "radial5") return Radial5Model(space);
    if (tag == "ray3") return make_ray3_model(space, 2.0, eps_prime_scale);
    if (tag == "sim2") return make_sim2_model(space, 4.0, eps_prime_scale);
    throw std::invalid_argument("unknown model tag: " + std::string(tag));
  }();
  const ModelDims dims = model_dims(tag, space.dim());
  std::visit(
      [&](const auto& mm) {
        if (mm.ambient_dim() != dims.d || mm.surface_dim() != dims.k ||
            mm.essential_count() != dims.l)
          throw std::logic_error("model dimension bookkeeping mismatch");
      },
      m);
  return m;
}

inline void set_model_ranges(ModelVariant& m, std::vector<Interval> ranges) {
  std::visit([&](auto& mm) { mm.set_essential_ranges(std::move(ranges)); }, m);
}

// Tightest essential ranges covering a surface set; used to scale rounding
// steps to the data actually present.
inline std::vector<Interval> observed_essential_ranges(
    const std::vector<ParametricSurface>& surfaces, int l) {
  std::vector<Interval> r(l, Interval{0.0, 0.0});
  bool first = true;
  for (const auto& s : surfaces) {
    for (int i = 0; i < l; ++i) {
      if (first) {
        r[i] = Interval::point(s.t[i]);
      } else {
        r[i].lo = std::min(r[i].lo, s.t[i]);
        r[i].hi = std::max(r[i].hi, s.t[i]);
      }
    }
    first = false;
  }
  return r;
}

}  // namespace ivote
