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

namespace ivote {

// Gravity-aligned 5-DoF camera pose from one 3-d/2-d correspondence
// (w, xi, eta). Voting axes, in order: camera center x, y, focal f
// (independent), then kappa = tan(yaw) and camera height z (dependent):
//
//   kappa = ((w2-y) - xi f (w1-x)) / ((w1-x) + xi f (w2-y))
//   z     = w3 - eta f sqrt((w1-x)^2 + (w2-y)^2)
//
// Essentials t = (w1, w2, xi, eta), kept in physical units. w3 enters z
// purely additively (the free parameter); kappa gets an artificial free
// parameter fixed at 0 so both dependent coordinates obey the same law.
// All voting-axis values are normalized through the axis map.
class Pose5Model {
 public:
  explicit Pose5Model(SpaceMap space, double den_floor_rel = 1e-6)
      : space_(std::move(space)) {
    if (space_.dim() != 5) throw std::invalid_argument("pose5: need 5 axes");
    den_floor_ = den_floor_rel * std::max(space_.scale(0), space_.scale(1));
    range_ = {Interval{-10, 10}, Interval{-10, 10}, Interval{-1, 1}, Interval{-1, 1}};
  }

  int ambient_dim() const { return 5; }
  int surface_dim() const { return 3; }
  int essential_count() const { return 4; }
  std::string_view tag() const { return "pose5"; }

  bool eval(const double* t, const double* x, double* dep) const {
    const double px = space_.to_phys(0, x[0]);
    const double py = space_.to_phys(1, x[1]);
    const double pf = space_.to_phys(2, x[2]);
    const double a = t[0] - px, b = t[1] - py;
    const double xif = t[2] * pf;
    const double den = a + xif * b;
    if (std::fabs(den) < den_floor_) return false;
    const double kappa = (b - xif * a) / den;
    const double rho = std::hypot(a, b);
    dep[0] = (kappa - space_.lo[3]) / space_.scale(3);
    dep[1] = -t[3] * pf * rho / space_.scale(4);
    return true;
  }

  bool bounds(const double* t, const Interval* xs, Interval* dep) const {
    const Interval X = phys(0, xs[0]), Y = phys(1, xs[1]), F = phys(2, xs[2]);
    const Interval A = Interval::point(t[0]) - X;
    const Interval B = Interval::point(t[1]) - Y;
    const Interval D = A + t[2] * (F * B);
    if (D.lo < den_floor_ && D.hi > -den_floor_) return false;  // singular band
    const Interval N = B - t[2] * (F * A);
    const Interval K = N / D;
    dep[0] = (1.0 / space_.scale(3)) * (K - space_.lo[3]);
    const Interval P = ivote::sqrt(square(A) + square(B));
    dep[1] = (-t[3] / space_.scale(4)) * (F * P);
    return true;
  }

  void deviation_bound(const double* to, const double* tn, const Box& box,
                       double* out) const {
    const Interval X = phys(0, box.span(0)), Y = phys(1, box.span(1)),
                   F = phys(2, box.span(2));
    const double dw1 = to[0] - tn[0], dw2 = to[1] - tn[1];
    const double dxi = to[2] - tn[2], deta = to[3] - tn[3];
    const Interval Ao = Interval::point(to[0]) - X;
    const Interval Bo = Interval::point(to[1]) - Y;
    const Interval Do = Ao + to[2] * (F * Bo);
    const Interval An = Interval::point(tn[0]) - X;
    const Interval Dn = An + tn[2] * (F * (Interval::point(tn[1]) - Y));
    if ((Do.lo < den_floor_ && Do.hi > -den_floor_) ||
        (Dn.lo < den_floor_ && Dn.hi > -den_floor_)) {
      out[0] = out[1] = kUnbounded;
      return;
    }
    // kappa_old - kappa_new = (dN - kappa_old dD) / D_new, with
    // dN = dw2 - f (dxi A_old + xi_new dw1), dD = dw1 + f (dxi B_old + xi_new dw2).
    const Interval dN = Interval::point(dw2) - F * (dxi * Ao + Interval::point(tn[2] * dw1));
    const Interval dD = Interval::point(dw1) + F * (dxi * Bo + Interval::point(tn[2] * dw2));
    const Interval Ko = (Bo - to[2] * (F * Ao)) / Do;
    const Interval dk = (dN - Ko * dD) / Dn;
    out[0] = dk.width() / space_.scale(3);
    // z deviation: -f (deta rho_old + eta_new (rho_old - rho_new)). Enclosing
    // the rho difference as Po - Pn keeps the bound shrinking with the box;
    // intersecting with the Lipschitz bound |dw1| + |dw2| keeps it from
    // blowing up when the box still spans a wide (x, y) range.
    const Interval Po = ivote::sqrt(square(Ao) + square(Bo));
    const Interval Bn = Interval::point(tn[1]) - Y;
    const Interval Pn = ivote::sqrt(square(An) + square(Bn));
    const double dr = std::fabs(dw1) + std::fabs(dw2);
    Interval dP = Po - Pn;
    dP.lo = std::max(dP.lo, -dr);
    dP.hi = std::min(dP.hi, dr);
    const Interval T = deta * Po + tn[3] * dP;
    out[1] = (F * T).width() / space_.scale(4);
  }

  // Reciprocal sensitivities: a change dt in essential i moves a dependent
  // coordinate by roughly dt * delta / scale over a box of diameter delta.
  // They size the rounding steps; soundness never rests on them because every
  // rounding is re-verified through deviation_bound.
  double essential_scale(int i) const {
    const double fmax = std::max(std::fabs(space_.lo[2]), std::fabs(space_.hi[2]));
    const double xim = std::max(mag(range_[2]), 1e-3);
    const double amax = mag(range_[0]) + std::max(std::fabs(space_.lo[0]), std::fabs(space_.hi[0]));
    const double bmax = mag(range_[1]) + std::max(std::fabs(space_.lo[1]), std::fabs(space_.hi[1]));
    const double mmax = std::max({amax, bmax, 1e-6});
    const double dref = 0.25 * std::min(space_.scale(0), space_.scale(1));
    const double kcap = std::max(std::fabs(space_.lo[3]), std::fabs(space_.hi[3]));
    const double s3 = space_.scale(3);
    if (i < 2) return s3 * dref / (1.0 + xim * fmax + kcap);
    if (i == 2) return s3 * dref / (fmax * mmax * (1.0 + kcap));
    return space_.scale(4) / (fmax * std::hypot(amax, bmax));
  }

  Interval essential_range(int i) const { return range_[i]; }

  double dependent_bound(int j) const {
    if (j == 0) return 1.0;  // kappa axis spans its own map
    const double rx = mag(range_[0]) + std::max(std::fabs(space_.lo[0]), std::fabs(space_.hi[0]));
    const double ry = mag(range_[1]) + std::max(std::fabs(space_.lo[1]), std::fabs(space_.hi[1]));
    const double fmax = std::max(std::fabs(space_.lo[2]), std::fabs(space_.hi[2]));
    return mag(range_[3]) * fmax * std::hypot(rx, ry) / space_.scale(4);
  }

  double default_eps_prime_scale() const { return 1.0; }

  void set_essential_ranges(std::vector<Interval> r) { range_ = std::move(r); }
  const SpaceMap& space() const { return space_; }

  static constexpr double kUnbounded = 1e300;

 private:
  Interval phys(int j, Interval u) const {
    return {space_.to_phys(j, u.lo), space_.to_phys(j, u.hi)};
  }

  SpaceMap space_;
  double den_floor_;
  std::vector<Interval> range_;
};

inline ParametricSurface pose5_surface(const SpaceMap& space, const double w[3],
                                       double xi, double eta, std::uint32_t id) {
  ParametricSurface s;
  s.d = 5;
  s.k = 3;
  s.model_tag = "pose5";
  s.t = {w[0], w[1], xi, eta};
  s.f = {0.0, (w[2] - space.lo[4]) / space.scale(4)};
  s.source_ids = {id};
  return s;
}

}  // namespace ivote
