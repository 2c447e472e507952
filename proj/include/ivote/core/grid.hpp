#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ivote/core/box.hpp"
#include "ivote/core/tolerance.hpp"

namespace ivote {

// The effective voting grid over a query box. Cell widths are snapped so the
// grid tiles the box exactly: n_j = side_j/eps_j rounded when that ratio is
// within 1e-9 of an integer, otherwise rounded up, and the effective width is
// side_j/n_j (never larger than requested). All algorithms share this grid,
// which is what makes their winning cells comparable.
struct GridSpec {
  Box box;
  std::array<std::int64_t, kMaxDim> cells{};
  std::array<double, kMaxDim> eff{};
  int dim = 0;

  static GridSpec make(const Box& box, const Tolerance& tol) {
    if (tol.dim() != box.dim) throw std::invalid_argument("GridSpec: eps/box dimension mismatch");
    GridSpec g;
    g.box = box;
    g.dim = box.dim;
    for (int j = 0; j < box.dim; ++j) {
      const double ratio = box.side(j) / tol.eps[j];
      const double rounded = std::round(ratio);
      std::int64_t n;
      if (std::fabs(ratio - rounded) < 1e-9 && rounded >= 1.0)
        n = static_cast<std::int64_t>(rounded);
      else
        n = static_cast<std::int64_t>(std::ceil(ratio));
      n = std::max<std::int64_t>(n, 1);
      g.cells[j] = n;
      g.eff[j] = box.side(j) / static_cast<double>(n);
    }
    return g;
  }

  double center(int axis, std::int64_t i) const {
    return box.lo[axis] + (static_cast<double>(i) + 0.5) * eff[axis];
  }

  Interval span(int axis, std::int64_t i) const {
    return {box.lo[axis] + static_cast<double>(i) * eff[axis],
            box.lo[axis] + static_cast<double>(i + 1) * eff[axis]};
  }

  // Index of the cell containing v; boundary values go to the upper cell.
  std::int64_t index(int axis, double v) const {
    return static_cast<std::int64_t>(
        std::floor((v - box.lo[axis]) / eff[axis] + kGridBoundaryTol));
  }

  std::int64_t clamp_index(int axis, std::int64_t i) const {
    if (i < 0) return 0;
    if (i >= cells[axis]) return cells[axis] - 1;
    return i;
  }

  // Total cell count, guarded against overflow (throws when the dense grid
  // would be unreasonably large; the naive algorithm materializes it).
  std::uint64_t total_cells(std::uint64_t limit) const {
    std::uint64_t total = 1;
    for (int j = 0; j < dim; ++j) {
      const auto n = static_cast<std::uint64_t>(cells[j]);
      if (total > limit / n) throw std::invalid_argument("grid too large for dense voting");
      total *= n;
    }
    return total;
  }
};

}  // namespace ivote
