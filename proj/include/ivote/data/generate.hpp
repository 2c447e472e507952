#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ivote/data/instance.hpp"
#include "ivote/data/random.hpp"
#include "ivote/models/rotation.hpp"

namespace ivote {

// Knobs for synthetic instances. n / inlier_fraction / noise drive the
// fitting-style families (line2, hyperplane, ray3, sim2): n items of which
// round(n * inlier_fraction) agree with a planted parameter point up to
// +-noise jitter in data units, the rest scattered. The pose families
// (pose5/6/7, radial5) are generated correspondence-free instead: n_obs
// observed features of n_world known world points, every (world, feature)
// pair becomes an item, so only the n_obs true pairs agree with the planted
// pose; noise jitters the observed directions. rot_half is the half-width of
// the rotation search box and rot_max bounds the planted rotation inside it.
struct GenConfig {
  std::string model = "line2";
  int d = 3;  // hyperplane ambient dimension
  std::size_t n = 1000;
  double inlier_fraction = 0.3;
  double noise = 0.0;
  std::uint64_t seed = 1;
  int n_world = 88;
  int n_obs = 30;
  double rot_half = 0.15;
  double rot_max = 0.1;
};

namespace detail {

// noise here is a Gaussian sigma on y. Inlier x values sit in two tight
// clusters so the planted duals span slope spread 2: cells more than about
// 1.5 eps off the truth lose a whole cluster's votes at once, which keeps
// the vote plateau well inside the 2 eps recovery band. Outliers scatter
// over a y window much taller than the (a,b) box so their duals mostly
// miss it and accidental accumulations stay far below the planted count.
inline ProblemInstance gen_line2(const GenConfig& g) {
  ProblemInstance inst;
  inst.model = "line2";
  inst.d = 2;
  inst.k = 1;
  inst.space = default_space("line2");
  inst.seed = g.seed;
  inst.noise = g.noise;
  Rng rng(g.seed);
  const double a0 = rng.uniform(0.15, 0.85);
  const double b0 = rng.uniform(0.15, 0.6);
  inst.truth = {a0, b0};
  const auto m = static_cast<std::size_t>(std::llround(g.inlier_fraction * g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    Item it;
    it.kind = 'P';
    it.id = static_cast<std::uint32_t>(i);
    double p1, p2;
    if (i < m) {
      p1 = (i % 2 == 0 ? -0.5 : 1.5) + rng.uniform(-0.05, 0.05);
      p2 = a0 * p1 + b0 + g.noise * rng.normal();
      inst.truth_ids.push_back(it.id);
    } else {
      p1 = rng.uniform(-0.6, 1.6);
      p2 = rng.uniform(-1.0, 2.5);
    }
    it.v = {p1, p2};
    inst.items.push_back(std::move(it));
  }
  return inst;
}

inline ProblemInstance gen_hyperplane(const GenConfig& g) {
  const int d = g.d;
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("hyperplane: bad dimension");
  ProblemInstance inst;
  inst.model = "hyperplane";
  inst.d = d;
  inst.k = d - 1;
  inst.space = default_space("hyperplane", d);
  inst.seed = g.seed;
  inst.noise = g.noise;
  Rng rng(g.seed);
  std::vector<double> planted(d);
  for (int i = 0; i < d - 1; ++i) planted[i] = rng.uniform(-0.75, 0.75);
  planted[d - 1] = rng.uniform(-0.3, 1.3);  // offset
  inst.truth.resize(d);
  for (int j = 0; j < d; ++j) inst.truth[j] = inst.space.to_unit(j, planted[j]);
  const auto m = static_cast<std::size_t>(std::llround(g.inlier_fraction * g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    Item it;
    it.kind = 'P';
    it.id = static_cast<std::uint32_t>(i);
    it.v.resize(d);
    for (int j = 0; j < d - 1; ++j) it.v[j] = rng.uniform();
    if (i < m) {
      double xd = planted[d - 1];
      for (int j = 0; j < d - 1; ++j) xd += planted[j] * it.v[j];
      it.v[d - 1] = xd + rng.uniform(-g.noise, g.noise);
      inst.truth_ids.push_back(it.id);
    } else {
      it.v[d - 1] = rng.uniform(-0.5, 1.5);
    }
    inst.items.push_back(std::move(it));
  }
  return inst;
}

inline ProblemInstance gen_ray3(const GenConfig& g) {
  ProblemInstance inst;
  inst.model = "ray3";
  inst.d = 3;
  inst.k = 1;
  inst.space = default_space("ray3");
  inst.seed = g.seed;
  inst.noise = g.noise;
  Rng rng(g.seed);
  const double x0 = rng.uniform(0.25, 0.75);
  const double y0 = rng.uniform(0.25, 0.75);
  const double z0 = rng.uniform(0.25, 0.75);
  inst.truth = {x0, y0, z0};
  const auto m = static_cast<std::size_t>(std::llround(g.inlier_fraction * g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    Item it;
    it.kind = 'R';
    it.id = static_cast<std::uint32_t>(i);
    const double a = rng.uniform(-1.4, 1.4);
    const double c = rng.uniform(-1.4, 1.4);
    double b, dd;
    if (i < m) {
      b = y0 - a * x0 + rng.uniform(-g.noise, g.noise);
      dd = z0 - c * x0 + rng.uniform(-g.noise, g.noise);
      inst.truth_ids.push_back(it.id);
    } else {
      const double px = rng.uniform(), py = rng.uniform(), pz = rng.uniform();
      b = py - a * px;
      dd = pz - c * px;
    }
    it.v = {a, b, c, dd};
    inst.items.push_back(std::move(it));
  }
  return inst;
}

inline ProblemInstance gen_sim2(const GenConfig& g) {
  ProblemInstance inst;
  inst.model = "sim2";
  inst.d = 4;
  inst.k = 2;
  inst.space = default_space("sim2");
  inst.seed = g.seed;
  inst.noise = g.noise;
  Rng rng(g.seed);
  const double th = rng.uniform(-0.5, 0.5);
  const double sc = rng.uniform(0.8, 1.2);
  const double a = sc * std::cos(th), b = sc * std::sin(th);
  const double c = rng.uniform(-0.6, 0.6), dd = rng.uniform(-0.6, 0.6);
  inst.truth = {inst.space.to_unit(0, c), inst.space.to_unit(1, dd),
                inst.space.to_unit(2, a), inst.space.to_unit(3, b)};
  const auto m = static_cast<std::size_t>(std::llround(g.inlier_fraction * g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    Item it;
    it.kind = 'M';
    it.id = static_cast<std::uint32_t>(i);
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    const double rad = rng.uniform(0.4, 1.2);
    const double px = rad * std::cos(ang), py = rad * std::sin(ang);
    double qx, qy;
    if (i < m) {
      qx = a * px + b * py + c + rng.uniform(-g.noise, g.noise);
      qy = a * py - b * px + dd + rng.uniform(-g.noise, g.noise);
      inst.truth_ids.push_back(it.id);
    } else {
      qx = rng.uniform(-2.0, 2.0);
      qy = rng.uniform(-2.0, 2.0);
    }
    it.v = {px, py, qx, qy};
    inst.items.push_back(std::move(it));
  }
  return inst;
}

// Shared scaffolding for the camera families: sample a planted pose, sample
// world points guaranteed visible under it, project the first n_obs of them
// (plus direction noise) and emit every (world, observation) pair.
inline void emit_pairs(ProblemInstance& inst, const std::vector<std::array<double, 3>>& world,
                       const std::vector<std::pair<double, double>>& obs) {
  const int nw = static_cast<int>(world.size());
  for (int j = 0; j < static_cast<int>(obs.size()); ++j) {
    for (int i = 0; i < nw; ++i) {
      Item it;
      it.kind = 'C';
      it.id = static_cast<std::uint32_t>(j * nw + i);
      it.v = {world[i][0], world[i][1], world[i][2], obs[j].first, obs[j].second};
      inst.items.push_back(std::move(it));
      if (i == j) inst.truth_ids.push_back(it.id);
    }
  }
}

inline ProblemInstance gen_pinhole_pose(const GenConfig& g, bool focal) {
  ProblemInstance inst;
  inst.model = focal ? "pose7" : "pose6";
  inst.d = focal ? 7 : 6;
  inst.k = inst.d - 2;
  inst.seed = g.seed;
  inst.noise = g.noise;
  const double r = g.rot_half;
  if (focal)
    inst.space = SpaceMap({0, -r, -r, -r, 0.6, -2.5, -2.5}, {50, r, r, r, 1.3, 2.5, 2.5});
  else
    inst.space = SpaceMap({0, -r, -r, -r, -2.5, -2.5}, {50, r, r, r, 2.5, 2.5});
  if (g.n_obs > g.n_world) throw std::invalid_argument("pose: n_obs > n_world");
  Rng rng(g.seed);
  Vec3 phi;
  for (int i = 0; i < 3; ++i) phi[i] = rng.uniform(-g.rot_max, g.rot_max);
  const Mat3 rot = rotation_from_angle_axis(phi);
  const double f0 = focal ? rng.uniform(0.8, 1.25) : 1.0;
  const double tx = rng.uniform(-2.0, 2.0), ty = rng.uniform(-2.0, 2.0);
  const double tz = rng.uniform(5.0, 35.0);
  if (focal)
    inst.truth = {inst.space.to_unit(0, tz), inst.space.to_unit(1, phi[0]),
                  inst.space.to_unit(2, phi[1]), inst.space.to_unit(3, phi[2]),
                  inst.space.to_unit(4, f0),    inst.space.to_unit(5, tx),
                  inst.space.to_unit(6, ty)};
  else
    inst.truth = {inst.space.to_unit(0, tz), inst.space.to_unit(1, phi[0]),
                  inst.space.to_unit(2, phi[1]), inst.space.to_unit(3, phi[2]),
                  inst.space.to_unit(4, tx),    inst.space.to_unit(5, ty)};

  const Mat3 rt = mat3_transpose(rot);
  std::vector<std::array<double, 3>> world(g.n_world);
  std::vector<std::pair<double, double>> obs(g.n_obs);
  // Scene prior: keep every point inside a forward cone, in front of any
  // camera the translation domain and rotation box can propose. Without it
  // a point passing near a candidate camera center collapses all bearings
  // onto one translation cell and sign-free votes pile up there.
  const double cone = 2.0 * g.rot_half;
  for (int i = 0; i < g.n_world; ++i) {
    Vec3 w{};
    do {
      const double xi = rng.uniform(-0.6, 0.6), eta = rng.uniform(-0.6, 0.6);
      const double depth = rng.uniform(8.0, 60.0);
      const Vec3 vcam = {xi * depth / f0, eta * depth / f0, depth};
      w = rotate(rt, {vcam[0] - tx, vcam[1] - ty, vcam[2] - tz});
    } while (w[2] < cone * std::hypot(w[0], w[1]) + 3.0);
    world[i] = {w[0], w[1], w[2]};
    if (i < g.n_obs) {
      const Vec3 v = rotate(rot, {w[0], w[1], w[2]});
      const double v3 = v[2] + tz;
      obs[i] = {f0 * (v[0] + tx) / v3 + rng.uniform(-g.noise, g.noise),
                f0 * (v[1] + ty) / v3 + rng.uniform(-g.noise, g.noise)};
    }
  }
  emit_pairs(inst, world, obs);
  return inst;
}

inline ProblemInstance gen_pose5(const GenConfig& g) {
  ProblemInstance inst;
  inst.model = "pose5";
  inst.d = 5;
  inst.k = 3;
  inst.space = default_space("pose5");
  inst.seed = g.seed;
  inst.noise = g.noise;
  if (g.n_obs > g.n_world) throw std::invalid_argument("pose: n_obs > n_world");
  Rng rng(g.seed);
  const double x0 = rng.uniform(-15.0, 15.0), y0 = rng.uniform(-15.0, 15.0);
  const double f0 = rng.uniform(0.75, 1.2);
  const double kappa = rng.uniform(-0.6, 0.6);
  const double z0 = rng.uniform(-1.8, 1.8);
  inst.truth = {inst.space.to_unit(0, x0), inst.space.to_unit(1, y0),
                inst.space.to_unit(2, f0), inst.space.to_unit(3, kappa),
                inst.space.to_unit(4, z0)};
  std::vector<std::array<double, 3>> world(g.n_world);
  std::vector<std::pair<double, double>> obs(g.n_obs);
  for (int i = 0; i < g.n_world; ++i) {
    double dx, dy, den, xi;
    do {
      const double ang = rng.uniform(0.0, 2.0 * M_PI);
      const double rad = rng.uniform(4.0, 18.0);
      dx = rad * std::cos(ang);
      dy = rad * std::sin(ang);
      den = f0 * (dx + kappa * dy);
      xi = (dy - kappa * dx) / den;
    } while (std::fabs(den) < 1.0 || std::fabs(xi) > 3.0);
    const double w3 = z0 + rng.uniform(-1.5, 1.5);
    world[i] = {x0 + dx, y0 + dy, w3};
    if (i < g.n_obs) {
      const double eta = (w3 - z0) / (f0 * std::hypot(dx, dy));
      obs[i] = {xi + rng.uniform(-g.noise, g.noise),
                eta + rng.uniform(-g.noise, g.noise)};
    }
  }
  emit_pairs(inst, world, obs);
  return inst;
}

inline ProblemInstance gen_radial5(const GenConfig& g) {
  ProblemInstance inst;
  inst.model = "radial5";
  inst.d = 5;
  inst.k = 4;
  inst.seed = g.seed;
  inst.noise = g.noise;
  const double r = g.rot_half;
  inst.space = SpaceMap({-2.5, -r, -r, -r, -2.5}, {2.5, r, r, r, 2.5});
  if (g.n_obs > g.n_world) throw std::invalid_argument("pose: n_obs > n_world");
  Rng rng(g.seed);
  Vec3 phi;
  for (int i = 0; i < 3; ++i) phi[i] = rng.uniform(-g.rot_max, g.rot_max);
  const Mat3 rot = rotation_from_angle_axis(phi);
  const double x0 = rng.uniform(-2.0, 2.0), y0 = rng.uniform(-2.0, 2.0);
  inst.truth = {inst.space.to_unit(0, y0), inst.space.to_unit(1, phi[0]),
                inst.space.to_unit(2, phi[1]), inst.space.to_unit(3, phi[2]),
                inst.space.to_unit(4, x0)};
  std::vector<std::array<double, 3>> world(g.n_world);
  std::vector<std::pair<double, double>> obs(g.n_obs);
  for (int i = 0; i < g.n_world; ++i) {
    double eta = 0.0, xi = 0.0;
    Vec3 w{};
    do {
      for (int j = 0; j < 3; ++j) w[j] = rng.uniform(-10.0, 10.0);
      const Vec3 v = rotate(rot, w);
      if (std::fabs(v[0] - y0) < 1.0) continue;
      xi = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.4, 1.5);
      eta = xi * (x0 + v[1]) / (v[0] - y0);
    } while (std::fabs(eta) > 3.0 || eta == 0.0);
    world[i] = {w[0], w[1], w[2]};
    if (i < g.n_obs)
      obs[i] = {xi + rng.uniform(-g.noise, g.noise),
                eta + rng.uniform(-g.noise, g.noise)};
  }
  emit_pairs(inst, world, obs);
  return inst;
}

}  // namespace detail

inline ProblemInstance generate_instance(const GenConfig& g) {
  if (g.model == "line2") return detail::gen_line2(g);
  if (g.model == "hyperplane") return detail::gen_hyperplane(g);
  if (g.model == "ray3") return detail::gen_ray3(g);
  if (g.model == "sim2") return detail::gen_sim2(g);
  if (g.model == "pose6") return detail::gen_pinhole_pose(g, false);
  if (g.model == "pose7") return detail::gen_pinhole_pose(g, true);
  if (g.model == "pose5") return detail::gen_pose5(g);
  if (g.model == "radial5") return detail::gen_radial5(g);
  throw std::invalid_argument("unknown model: " + g.model);
}

}  // namespace ivote
