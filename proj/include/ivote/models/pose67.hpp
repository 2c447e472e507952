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

// Full pinhole camera pose from one correspondence (w, xi, eta), with the
// camera-frame translation (x, y, z) split so (x, y) are dependent:
//
//   x = xi (r3 w + z) / f - r1 w,     y = eta (r3 w + z) / f - r2 w,
//
// r1..r3 being the rows of R(phi). Voting axes in order: z, phi1, phi2, phi3,
// then f when the focal is unknown (7-DoF), then x, y. The 6-DoF variant pins
// f = 1 and drops the focal axis. Essentials t = (w1, w2, w3, xi, eta) in
// physical units; the free parameters of (x, y) are artificial (identically
// zero). Axis values are normalized through the axis map.
class PinholePoseModel {
 public:
  PinholePoseModel(SpaceMap space, bool focal_axis, double f_min = 1e-3)
      : space_(std::move(space)), focal_(focal_axis), f_min_(f_min) {
    if (space_.dim() != ambient_dim())
      throw std::invalid_argument("pose: axis map dimension mismatch");
    range_ = {Interval{-10, 10}, Interval{-10, 10}, Interval{-10, 10},
              Interval{-1, 1}, Interval{-1, 1}};
  }

  int ambient_dim() const { return focal_ ? 7 : 6; }
  int surface_dim() const { return focal_ ? 5 : 4; }
  int essential_count() const { return 5; }
  std::string_view tag() const { return focal_ ? "pose7" : "pose6"; }

  bool eval(const double* t, const double* x, double* dep) const {
    const double z = space_.to_phys(0, x[0]);
    const Vec3 phi{space_.to_phys(1, x[1]), space_.to_phys(2, x[2]),
                   space_.to_phys(3, x[3])};
    const double f = focal_ ? space_.to_phys(4, x[4]) : 1.0;
    if (f < f_min_) return false;
    const Mat3 r = rotation_from_angle_axis(phi);
    const Vec3 w{t[0], t[1], t[2]};
    const Vec3 rw = rotate(r, w);
    const double s = (rw[2] + z) / f;
    const int xa = surface_dim();
    dep[0] = (t[3] * s - rw[0] - space_.lo[xa]) / space_.scale(xa);
    dep[1] = (t[4] * s - rw[1] - space_.lo[xa + 1]) / space_.scale(xa + 1);
    return true;
  }

  bool bounds(const double* t, const Interval* xs, Interval* dep) const {
    const Interval Z = phys(0, xs[0]);
    const Interval F = focal_ ? phys(4, xs[4]) : Interval::point(1.0);
    if (F.lo < f_min_) return false;
    Interval rw[3];
    rotated_span(t, xs, rw);
    const Interval S = (rw[2] + Z) / F;
    const int xa = surface_dim();
    dep[0] = (1.0 / space_.scale(xa)) * (t[3] * S - rw[0] - space_.lo[xa]);
    dep[1] = (1.0 / space_.scale(xa + 1)) * (t[4] * S - rw[1] - space_.lo[xa + 1]);
    return true;
  }

  void deviation_bound(const double* to, const double* tn, const Box& box,
                       double* out) const {
    const Interval Z = phys(0, box.span(0));
    const Interval F = focal_ ? phys(4, box.span(4)) : Interval::point(1.0);
    if (F.lo < f_min_) {
      out[0] = out[1] = kUnbounded;
      return;
    }
    const Interval phis[5] = {box.span(0), box.span(1), box.span(2), box.span(3),
                              focal_ ? box.span(4) : Interval::point(0.0)};
    Mat3 rc;
    double rho;
    rotation_at_center(phis, rc, rho);
    const Vec3 wo{to[0], to[1], to[2]};
    const Vec3 dw{to[0] - tn[0], to[1] - tn[1], to[2] - tn[2]};
    const Interval R3Wo = rotated_component(rc, rho, wo, 2);
    const Interval R1DW = rotated_component(rc, rho, dw, 0);
    const Interval R2DW = rotated_component(rc, rho, dw, 1);
    const Interval R3DW = rotated_component(rc, rho, dw, 2);
    // x_old - x_new = [dxi (r3 w_old + z) + xi_new (r3 dw)] / f - r1 dw
    const double dxi = to[3] - tn[3], deta = to[4] - tn[4];
    const Interval Dx = (dxi * (R3Wo + Z) + tn[3] * R3DW) / F - R1DW;
    const Interval Dy = (deta * (R3Wo + Z) + tn[4] * R3DW) / F - R2DW;
    const int xa = surface_dim();
    out[0] = Dx.width() / space_.scale(xa);
    out[1] = Dy.width() / space_.scale(xa + 1);
  }

  // Reciprocal sensitivities (see Pose5Model::essential_scale). Uniform in
  // the box diameter: the response of (x, y) to rounding w scales with the
  // rotation spread across the box, itself proportional to the box size.
  double essential_scale(int i) const {
    const double cphi =
        0.5 * std::sqrt(space_.scale(1) * space_.scale(1) + space_.scale(2) * space_.scale(2) +
                        space_.scale(3) * space_.scale(3));
    const double feff = focal_ ? space_.lo[4] : 1.0;
    const double sf = focal_ ? space_.scale(4) : 0.0;
    const double wmax = std::max(wnorm_max(), 1e-6);
    const double xim = std::max(std::max(mag(range_[3]), mag(range_[4])), 1e-3);
    const double zmax = std::max(std::fabs(space_.lo[0]), std::fabs(space_.hi[0]));
    const int xa = surface_dim();
    const double sdep = std::min(space_.scale(xa), space_.scale(xa + 1));
    if (i < 3) return sdep / (cphi * (1.0 + xim / feff));
    const double var = (cphi * wmax + space_.scale(0) + (wmax + zmax) * sf / feff) / feff;
    return sdep / var;
  }

  Interval essential_range(int i) const { return range_[i]; }

  double dependent_bound(int j) const {
    const double wmax = wnorm_max();
    const double zmax = std::max(std::fabs(space_.lo[0]), std::fabs(space_.hi[0]));
    const double img = mag(range_[j == 0 ? 3 : 4]);
    const int xa = surface_dim();
    return (img * (wmax + zmax) / f_min_ + wmax) / space_.scale(xa + j);
  }

  double default_eps_prime_scale() const { return 1.0; }

  void set_essential_ranges(std::vector<Interval> r) { range_ = std::move(r); }
  const SpaceMap& space() const { return space_; }
  bool has_focal_axis() const { return focal_; }

  static constexpr double kUnbounded = 1e300;

 private:
  Interval phys(int j, Interval u) const {
    return {space_.to_phys(j, u.lo), space_.to_phys(j, u.hi)};
  }

  double wnorm_max() const {
    return std::sqrt(mag(range_[0]) * mag(range_[0]) + mag(range_[1]) * mag(range_[1]) +
                     mag(range_[2]) * mag(range_[2]));
  }

  // Center rotation of the phi sub-box plus a radius bounding the deflection
  // of any rotated vector across the box: |R v - R_c v| <= rho |v|.
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

  void rotated_span(const double* t, const Interval* xs, Interval out[3]) const {
    Mat3 rc;
    double rho;
    rotation_at_center(xs, rc, rho);
    const Vec3 w{t[0], t[1], t[2]};
    for (int row = 0; row < 3; ++row) out[row] = rotated_component(rc, rho, w, row);
  }

  SpaceMap space_;
  bool focal_;
  double f_min_;
  std::vector<Interval> range_;
};

inline ParametricSurface pose_surface(bool focal, const double w[3], double xi,
                                      double eta, std::uint32_t id) {
  ParametricSurface s;
  s.d = focal ? 7 : 6;
  s.k = s.d - 2;
  s.model_tag = focal ? "pose7" : "pose6";
  s.t = {w[0], w[1], w[2], xi, eta};
  s.f = {0.0, 0.0};
  s.source_ids = {id};
  return s;
}

inline ParametricSurface pose6_surface(const double w[3], double xi, double eta,
                                       std::uint32_t id) {
  return pose_surface(false, w, xi, eta, id);
}

inline ParametricSurface pose7_surface(const double w[3], double xi, double eta,
                                       std::uint32_t id) {
  return pose_surface(true, w, xi, eta, id);
}

// Angle between the observed bearing (xi, eta, f) in the camera frame and the
// world point expressed in that frame, v = R w + t. Exposes cheirality:
// points behind the camera come out near pi. Degenerate direction -> pi.
inline double reprojection_angular_error(const Mat3& r, const Vec3& t_cam, double f,
                                         const Vec3& w, double xi, double eta) {
  const Vec3 rw = rotate(r, w);
  const Vec3 v{rw[0] + t_cam[0], rw[1] + t_cam[1], rw[2] + t_cam[2]};
  const Vec3 b{xi, eta, f};
  const double nv = norm3(v), nb = norm3(b);
  if (nv < 1e-12 || nb < 1e-12) return M_PI;
  double c = (v[0] * b[0] + v[1] * b[1] + v[2] * b[2]) / (nv * nb);
  c = std::fmax(-1.0, std::fmin(1.0, c));
  return std::acos(c);
}

}  // namespace ivote
