#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ivote {

// Closed interval [lo, hi] with outward-conservative arithmetic. Used by the
// surface-box intersection predicate; every operation must return an interval
// containing the exact image, never a subset.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }

  Interval operator-() const { return {-hi, -lo}; }

  friend Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend Interval operator+(Interval a, double s) { return {a.lo + s, a.hi + s}; }
  friend Interval operator-(Interval a, double s) { return {a.lo - s, a.hi - s}; }

  friend Interval operator*(double s, Interval a) {
    return s >= 0.0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
  }

  friend Interval operator*(Interval a, Interval b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
  }

  // Division is only defined away from zero; callers must branch on
  // contains_zero() first (a zero-straddling denominator is a domain error).
  friend Interval operator/(Interval a, Interval b) {
    const Interval inv{1.0 / b.hi, 1.0 / b.lo};
    return a * inv;
  }

  // Expand by a nonnegative margin on both sides.
  Interval inflated(double m) const { return {lo - m, hi + m}; }

  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  // Distance from this interval to a point (0 when inside).
  double distance_to(double v) const {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
  }
};

inline Interval square(Interval a) {
  const double l2 = a.lo * a.lo, h2 = a.hi * a.hi;
  if (a.contains_zero()) return {0.0, std::max(l2, h2)};
  return {std::min(l2, h2), std::max(l2, h2)};
}

inline Interval sqrt(Interval a) {
  const double lo = a.lo > 0.0 ? std::sqrt(a.lo) : 0.0;
  const double hi = a.hi > 0.0 ? std::sqrt(a.hi) : 0.0;
  return {lo, hi};
}

inline Interval abs(Interval a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}

// Largest absolute value attained on the interval.
inline double mag(Interval a) { return std::max(std::fabs(a.lo), std::fabs(a.hi)); }

}  // namespace ivote
