#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "ivote/core/box.hpp"
#include "ivote/core/interval.hpp"
#include "ivote/core/surface.hpp"

namespace ivote {

// One additive term  sign * x[axis] * t[t_index]  of a dependent coordinate.
struct LinTerm {
  int t_index;
  int axis;
  double sign;
};

// Surface family whose dependent coordinates are linear in the essential
// parameters with coefficients drawn from the independent coordinates:
//
//   F_j(x; t) = sum over terms(j) of  sign * x[axis] * t[t_index]
//
// Covers the duals of point/line/hyperplane fitting, ray intersection and
// 2-d similarity alignment. Deviation bounds are exact for this family.
class LinearGraphModel {
 public:
  LinearGraphModel(std::string tag, int d, int k,
                   std::vector<std::vector<LinTerm>> terms,
                   std::vector<Interval> essential_range,
                   double eps_prime_scale)
      : tag_(std::move(tag)),
        d_(d),
        k_(k),
        terms_(std::move(terms)),
        range_(std::move(essential_range)),
        eps_prime_scale_(eps_prime_scale) {}

  int ambient_dim() const { return d_; }
  int surface_dim() const { return k_; }
  int essential_count() const { return static_cast<int>(range_.size()); }
  std::string_view tag() const { return tag_; }

  bool eval(const double* t, const double* x, double* dep) const {
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      double v = 0.0;
      for (const LinTerm& tm : terms_[j]) v += tm.sign * x[tm.axis] * t[tm.t_index];
      dep[j] = v;
    }
    return true;
  }

  bool bounds(const double* t, const Interval* xs, Interval* dep) const {
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      Interval v = Interval::point(0.0);
      for (const LinTerm& tm : terms_[j]) v = v + (tm.sign * t[tm.t_index]) * xs[tm.axis];
      dep[j] = v;
    }
    return true;
  }

  // D_j(x) - D_j(center) = sum sign * dt[i] * (x[axis] - center[axis]), so the
  // supremum over the box is the absolute row sum against the half-widths.
  void deviation_bound(const double* t_old, const double* t_new, const Box& box,
                       double* out) const {
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      double b = 0.0;
      for (const LinTerm& tm : terms_[j])
        b += std::fabs(t_old[tm.t_index] - t_new[tm.t_index]) * 0.5 * box.side(tm.axis);
      out[j] = b;
    }
  }

  // Reciprocal sensitivity: dep response to dt over a box of diameter delta
  // is at most dt * side(axis)/2 <= dt * delta / 2, exactly, for every term.
  double essential_scale(int) const { return 2.0; }

  Interval essential_range(int i) const { return range_[i]; }

  double dependent_bound(int j) const {
    double b = 0.0;
    for (const LinTerm& tm : terms_[j]) b += mag(range_[tm.t_index]);
    return b;
  }

  double default_eps_prime_scale() const { return eps_prime_scale_; }

  void set_essential_ranges(std::vector<Interval> r) { range_ = std::move(r); }
  const std::vector<Interval>& essential_ranges() const { return range_; }
  const std::vector<std::vector<LinTerm>>& terms() const { return terms_; }

 private:
  std::string tag_;
  int d_;
  int k_;
  std::vector<std::vector<LinTerm>> terms_;  // one list per dependent coordinate
  std::vector<Interval> range_;
  double eps_prime_scale_;
};

}  // namespace ivote
