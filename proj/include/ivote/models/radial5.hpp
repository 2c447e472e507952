#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ivote/core/box.hpp"
#include "ivote/core/interval.hpp"
#include "ivote/core/space_map.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/models/rotation.hpp"

namespace ivote {

// First stage of radial-camera pose: rotation plus the translation components
// orthogonal to the optical axis, from the radial alignment constraint
//
//   x = (eta/xi) (r1 w - y) - r2 w.
//
// Voting axes in order: y, phi1, phi2, phi3 (independent), then x (dependent,
// artificial free parameter 0). Essentials t = (w1, w2, w3, xi, eta) physical.
// Focal length and optical-axis translation are left to a later refinement
// and never voted on here.
class Radial5Model {
 public:
  explicit Radial5Model(SpaceMap space, double xi_min = 1e-6)
      : space_(std::move(space)), xi_min_(xi_min) {
    if (space_.dim() != 5) throw std::invalid_argument("radial5: need 5 axes");
    range_ = {Interval{-10, 10}, Interval{-10, 10}, Interval{-10, 10},
              Interval{-1, 1}, Interval{-1, 1}};
  }

  int ambient_dim() const { return 5; }
  int surface_dim() const { return 4; }
  int essential_count() const { return 5; }
  std::string_view tag() const { return "radial5"; }

  bool eval(const double* t, const double* x, double* dep) const {
    if (std::fabs(t[3]) < xi_min_) return false;
    const double y = space_.to_phys(0, x[0]);
    const Vec3 phi{space_.to_phys(1, x[1]), space_.to_phys(2, x[2]),
                   space_.to_phys(3, x[3])};
    const Mat3 r = rotation_from_angle_axis(phi);
    const Vec3 w{t[0], t[1], t[2]};
    const Vec3 rw = rotate(r, w);
    const double a = t[4] / t[3];
    dep[0] = (a * (rw[0] - y) - rw[1] - space_.lo[4]) / space_.scale(4);
    return true;
  }

  bool bounds(const double* t, const Interval* xs, Interval* dep) const {
    if (std::fabs(t[3]) < xi_min_) return false;
    const Interval Y = phys(0, xs[0]);
    Mat3 rc;
    double rho;
    rotation_at_center(xs, rc, rho);
    const Vec3 w{t[0], t[1], t[2]};
    const Interval R1W = rotated_component(rc, rho, w, 0);
    const Interval R2W = rotated_component(rc, rho, w, 1);
    const double a = t[4] / t[3];
    dep[0] = (1.0 / space_.scale(4)) * (a * (R1W - Y) - R2W - space_.lo[4]);
    return true;
  }

  void deviation_bound(const double* to, const double* tn, const Box& box,
                       double* out) const {
    if (std::fabs(to[3]) < xi_min_ || std::fabs(tn[3]) < xi_min_) {
      out[0] = kUnbounded;
      return;
    }
    const Interval Y = phys(0, box.span(0));
    const Interval phis[4] = {box.span(0), box.span(1), box.span(2), box.span(3)};
    Mat3 rc;
    double rho;
    rotation_at_center(phis, rc, rho);
    const Vec3 wo{to[0], to[1], to[2]};
    const Vec3 dw{to[0] - tn[0], to[1] - tn[1], to[2] - tn[2]};
    const double ao = to[4] / to[3], an = tn[4] / tn[3], da = ao - an;
    // x_old - x_new = da (r1 w_old - y) + a_new (r1 dw) - r2 dw
    const Interval R1Wo = rotated_component(rc, rho, wo, 0);
    const Interval R1DW = rotated_component(rc, rho, dw, 0);
    const Interval R2DW = rotated_component(rc, rho, dw, 1);
    const Interval D = da * (R1Wo - Y) + an * R1DW - R2DW;
    out[0] = D.width() / space_.scale(4);
  }

  // Reciprocal sensitivities (see Pose5Model::essential_scale). The effective
  // slope a = eta/xi makes xi the stiffest parameter; xi_lo_ is the smallest
  // magnitude the step sizing assumes (verification covers anything smaller).
  double essential_scale(int i) const {
    const double cphi =
        0.5 * std::sqrt(space_.scale(1) * space_.scale(1) + space_.scale(2) * space_.scale(2) +
                        space_.scale(3) * space_.scale(3));
    const double wmax = std::max(1e-6, std::sqrt(mag(range_[0]) * mag(range_[0]) +
                                                 mag(range_[1]) * mag(range_[1]) +
                                                 mag(range_[2]) * mag(range_[2])));
    const double xilo = std::max({xi_min_, ivote::abs(range_[3]).lo, 0.05});
    const double etam = std::max(mag(range_[4]), 1e-3);
    const double amax = etam / xilo;
    const double var = cphi * wmax + space_.scale(0);
    const double sx = space_.scale(4);
    if (i < 3) return sx / (cphi * (1.0 + amax));
    if (i == 3) return sx * xilo * xilo / (etam * var);
    return sx * xilo / var;
  }

  Interval essential_range(int i) const { return range_[i]; }

  double dependent_bound(int) const {
    const double wmax =
        std::sqrt(mag(range_[0]) * mag(range_[0]) + mag(range_[1]) * mag(range_[1]) +
                  mag(range_[2]) * mag(range_[2]));
    const double ymax = std::max(std::fabs(space_.lo[0]), std::fabs(space_.hi[0]));
    const double amax = mag(range_[4]) / xi_min_;
    return (amax * (wmax + ymax) + wmax) / space_.scale(4);
  }

  double default_eps_prime_scale() const { return 1.0; }

  void set_essential_ranges(std::vector<Interval> r) { range_ = std::move(r); }
  const SpaceMap& space() const { return space_; }

  static constexpr double kUnbounded = 1e300;

 private:
  Interval phys(int j, Interval u) const {
    return {space_.to_phys(j, u.lo), space_.to_phys(j, u.hi)};
  }

  void rotation_at_center(const Interval* xs, Mat3& rc, double& rho) const {
    Vec3 c, hw;
    for (int j = 0; j < 3; ++j) {
      const Interval p = phys(1 + j, xs[1 + j]);
      c[j] = p.mid();
      hw[j] = 0.5 * p.width();
    }
    rc = rotation_from_angle_axis(c);
    rho = rotation_ball_radius(hw);
  }

  static Interval rotated_component(const Mat3& rc, double rho, const Vec3& v, int row) {
    const double center = rc[3 * row] * v[0] + rc[3 * row + 1] * v[1] + rc[3 * row + 2] * v[2];
    const double m = rho * norm3(v);
    return {center - m, center + m};
  }

  SpaceMap space_;
  double xi_min_;
  std::vector<Interval> range_;
};

inline ParametricSurface radial5_surface(const double w[3], double xi, double eta,
                                         std::uint32_t id) {
  ParametricSurface s;
  s.d = 5;
  s.k = 4;
  s.model_tag = "radial5";
  s.t = {w[0], w[1], w[2], xi, eta};
  s.f = {0.0};
  s.source_ids = {id};
  return s;
}

}  // namespace ivote
