#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ivote {

// Per-axis affine map between an application's physical parameter ranges and
// the normalized [0,1]^d search space. Tolerances are always expressed after
// normalization.
struct SpaceMap {
  std::vector<double> lo;
  std::vector<double> hi;

  SpaceMap() = default;
  SpaceMap(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("SpaceMap: size mismatch");
    for (std::size_t j = 0; j < lo.size(); ++j)
      if (!(hi[j] > lo[j])) throw std::invalid_argument("SpaceMap: empty axis range");
  }

  static SpaceMap identity(int d) {
    return SpaceMap(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
  }

  int dim() const { return static_cast<int>(lo.size()); }
  double scale(int j) const { return hi[j] - lo[j]; }

  double to_unit(int j, double v) const { return (v - lo[j]) / scale(j); }
  double to_phys(int j, double u) const { return lo[j] + u * scale(j); }

  std::vector<double> to_phys(const std::vector<double>& u) const {
    std::vector<double> p(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) p[j] = to_phys(static_cast<int>(j), u[j]);
    return p;
  }

  std::vector<double> to_unit(const std::vector<double>& p) const {
    std::vector<double> u(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) u[j] = to_unit(static_cast<int>(j), p[j]);
    return u;
  }

  bool is_identity() const {
    for (int j = 0; j < dim(); ++j)
      if (lo[j] != 0.0 || hi[j] != 1.0) return false;
    return true;
  }
};

}  // namespace ivote
