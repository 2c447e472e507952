#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ivote/core/interval.hpp"

namespace ivote {

// Axis-aligned box in d dimensions, d <= kMaxDim. Voting always happens in a
// normalized search space, so coordinates are typically inside [0,1] but the
// type itself does not require it.
inline constexpr int kMaxDim = 7;

struct Box {
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  int dim = 0;

  Box() = default;
  Box(std::vector<double> mn, std::vector<double> mx) {
    if (mn.size() != mx.size() || mn.empty() || mn.size() > kMaxDim)
      throw std::invalid_argument("Box: bad corner dimensions");
    dim = static_cast<int>(mn.size());
    for (int j = 0; j < dim; ++j) {
      if (!(mn[j] <= mx[j])) throw std::invalid_argument("Box: min exceeds max");
      lo[j] = mn[j];
      hi[j] = mx[j];
    }
  }

  static Box unit(int d) {
    Box b;
    b.dim = d;
    for (int j = 0; j < d; ++j) {
      b.lo[j] = 0.0;
      b.hi[j] = 1.0;
    }
    return b;
  }

  double side(int j) const { return hi[j] - lo[j]; }
  double center(int j) const { return 0.5 * (lo[j] + hi[j]); }

  // Diameter is the longest side (the quantity the rounding steps scale with).
  double diameter() const {
    double d = 0.0;
    for (int j = 0; j < dim; ++j) d = std::max(d, side(j));
    return d;
  }

  Interval span(int j) const { return {lo[j], hi[j]}; }

  std::vector<double> center_point() const {
    std::vector<double> c(dim);
    for (int j = 0; j < dim; ++j) c[j] = center(j);
    return c;
  }

  bool contains(const std::vector<double>& p) const {
    for (int j = 0; j < dim; ++j)
      if (p[j] < lo[j] || p[j] > hi[j]) return false;
    return true;
  }
};

// Splits every axis at its midpoint. Children come back in octant order:
// child index o has bit j set when the child takes the upper half of axis j,
// so for d=2 the order is (low,low), (high,low), (low,high), (high,high).
inline std::vector<Box> subdivide(const Box& b) {
  const int n = 1 << b.dim;
  std::vector<Box> out(n);
  for (int o = 0; o < n; ++o) {
    Box c;
    c.dim = b.dim;
    for (int j = 0; j < b.dim; ++j) {
      const double mid = b.center(j);
      if (o >> j & 1) {
        c.lo[j] = mid;
        c.hi[j] = b.hi[j];
      } else {
        c.lo[j] = b.lo[j];
        c.hi[j] = mid;
      }
    }
    out[o] = c;
  }
  return out;
}

}  // namespace ivote
