#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ivote/core/space_map.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/models/registry.hpp"

namespace ivote {

// One raw input item. kind is the record letter of the text format:
// P = point, C = world-point/observation pair, R = ray, M = point match.
struct Item {
  char kind = 'P';
  std::uint32_t id = 0;
  std::vector<double> v;
};

// A benchmark problem: raw data items plus the planted ground truth.
// Surfaces are rebuilt from the items on demand, so files stay small and
// human-readable. truth is the planted parameter point after normalization
// into [0,1]^d; truth_ids are the items generated to agree with it.
struct ProblemInstance {
  std::string model;
  int d = 0;
  int k = 0;
  SpaceMap space;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::vector<double> truth;
  std::vector<std::uint32_t> truth_ids;
  std::vector<Item> items;
  std::vector<std::pair<std::string, std::string>> config;
};

inline char item_kind_for(std::string_view model) {
  if (model == "line2" || model == "hyperplane") return 'P';
  if (model == "ray3") return 'R';
  if (model == "sim2") return 'M';
  if (model == "pose5" || model == "pose6" || model == "pose7" || model == "radial5")
    return 'C';
  throw std::invalid_argument("unknown model tag: " + std::string(model));
}

inline int item_arity_for(std::string_view model, int d) {
  if (model == "line2") return 2;
  if (model == "hyperplane") return d;
  if (model == "ray3") return 4;   // y = a x + b, z = c x + d
  if (model == "sim2") return 4;   // px py qx qy
  if (model == "pose5" || model == "pose6" || model == "pose7" || model == "radial5")
    return 5;                      // wx wy wz xi eta
  throw std::invalid_argument("unknown model tag: " + std::string(model));
}

inline std::vector<ParametricSurface> build_surfaces(const ProblemInstance& inst) {
  const char want = item_kind_for(inst.model);
  const int arity = item_arity_for(inst.model, inst.d);
  std::vector<ParametricSurface> out;
  out.reserve(inst.items.size());
  for (const Item& it : inst.items) {
    if (it.kind != want || static_cast<int>(it.v.size()) != arity)
      throw std::invalid_argument("instance item " + std::to_string(it.id) +
                                  " does not fit model " + inst.model);
    const double* v = it.v.data();
    if (inst.model == "line2") {
      out.push_back(line2_surface(inst.space, v[0], v[1], it.id));
    } else if (inst.model == "hyperplane") {
      out.push_back(hyperplane_surface(inst.space, it.v, it.id));
    } else if (inst.model == "ray3") {
      out.push_back(ray3_surface(inst.space, v[0], v[1], v[2], v[3], it.id));
    } else if (inst.model == "sim2") {
      out.push_back(sim2_surface(inst.space, v[0], v[1], v[2], v[3], it.id));
    } else if (inst.model == "pose5") {
      out.push_back(pose5_surface(inst.space, v, v[3], v[4], it.id));
    } else if (inst.model == "pose6") {
      out.push_back(pose6_surface(v, v[3], v[4], it.id));
    } else if (inst.model == "pose7") {
      out.push_back(pose7_surface(v, v[3], v[4], it.id));
    } else {
      out.push_back(radial5_surface(v, v[3], v[4], it.id));
    }
  }
  return out;
}

// Model configured for this instance: stock family over the instance's
// space, with the rounding lattice sized to the essentials actually present.
inline ModelVariant instance_model(const ProblemInstance& inst,
                                   const std::vector<ParametricSurface>& surfaces,
                                   double eps_prime_scale = 0.0) {
  ModelVariant m = make_model(inst.model, inst.space, eps_prime_scale);
  if (!surfaces.empty()) {
    const int l = model_dims(inst.model, inst.d).l;
    set_model_ranges(m, observed_essential_ranges(surfaces, l));
  }
  return m;
}

}  // namespace ivote
