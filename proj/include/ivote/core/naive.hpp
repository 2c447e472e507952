#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ivote/core/grid.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/core/tolerance.hpp"
#include "ivote/core/vote_result.hpp"

namespace ivote {

// Cells overlapped by [v - r, v + r] on one axis, as a clamped index range;
// empty (first > second) when the interval misses the grid. Boundary-grazing
// cells are included, matching GridSpec::index.
inline std::pair<std::int64_t, std::int64_t> vote_index_range(const GridSpec& g, int axis,
                                                              double v, double r) {
  std::int64_t lo = g.index(axis, v - r);
  std::int64_t hi = g.index(axis, v + r);
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, g.cells[axis] - 1);
  return {lo, hi};
}

// Dense-grid voting: every surface is evaluated at the center of each cell of
// the independent-axis grid and votes for all cells the +-1.5 eps interval of
// each dependent coordinate overlaps (at most one vote per surface per cell
// by construction: one evaluation per independent cell, contiguous index
// ranges per dependent axis). Winner is the maximum count; ties go to the
// lexicographically smallest cell index. Charges surface_evaluations per
// evaluation and cells_touched per vote written; the id-collection pass over
// the winning cell charges evaluations as well.
template <SurfaceModel M>
VoteResult naive_vote(const M& m, const std::vector<ParametricSurface>& surfaces,
                      const Box& box, const Tolerance& tol,
                      std::uint64_t max_cells = (std::uint64_t(1) << 28)) {
  const GridSpec grid = GridSpec::make(box, tol);
  const int d = m.ambient_dim(), k = m.surface_dim(), nd = d - k;
  const std::uint64_t total = grid.total_cells(max_cells);

  // Row-major strides, axis 0 most significant: lexicographic order on the
  // multi-index equals numeric order on the linear index.
  std::uint64_t stride[kMaxDim];
  stride[d - 1] = 1;
  for (int j = d - 2; j >= 0; --j)
    stride[j] = stride[j + 1] * static_cast<std::uint64_t>(grid.cells[j + 1]);

  VoteResult res;
  res.truncated = false;
  std::vector<std::uint32_t> votes(total, 0);

  std::int64_t kcell[kMaxDim];
  double x[kMaxDim];
  double dep[kMaxDependent];
  for (const ParametricSurface& s : surfaces) {
    for (int j = 0; j < k; ++j) kcell[j] = 0;
    bool done = false;
    while (!done) {
      for (int j = 0; j < k; ++j) x[j] = grid.center(j, kcell[j]);
      ++res.ops.surface_evaluations;
      if (evaluate_surface(m, s, x, dep)) {
        std::uint64_t base = 0;
        for (int j = 0; j < k; ++j) base += stride[j] * static_cast<std::uint64_t>(kcell[j]);
        // Dependent axes form a small product of contiguous index ranges.
        std::int64_t lo[kMaxDependent], hi[kMaxDependent], cur[kMaxDependent];
        bool any = true;
        for (int j = 0; j < nd; ++j) {
          auto [l, h] = vote_index_range(grid, k + j, dep[j], 1.5 * grid.eff[k + j]);
          lo[j] = cur[j] = l;
          hi[j] = h;
          if (l > h) any = false;
        }
        while (any) {
          std::uint64_t idx = base;
          for (int j = 0; j < nd; ++j) idx += stride[k + j] * static_cast<std::uint64_t>(cur[j]);
          ++votes[idx];
          ++res.ops.cells_touched;
          int j = nd - 1;
          for (; j >= 0; --j) {
            if (++cur[j] <= hi[j]) break;
            cur[j] = lo[j];
          }
          if (j < 0) break;
        }
      }
      int j = k - 1;
      for (; j >= 0; --j) {
        if (++kcell[j] < grid.cells[j]) break;
        kcell[j] = 0;
      }
      if (j < 0) done = true;
    }
  }

  std::uint64_t win = 0;
  std::uint32_t best = 0;
  for (std::uint64_t i = 0; i < total; ++i)
    if (votes[i] > best) {
      best = votes[i];
      win = i;
    }
  res.count = best;

  // Unpack the winning cell and collect the ids voting for it.
  std::int64_t cell[kMaxDim];
  {
    std::uint64_t rem = win;
    for (int j = 0; j < d; ++j) {
      cell[j] = static_cast<std::int64_t>(rem / stride[j]);
      rem %= stride[j];
    }
  }
  res.point.resize(d);
  for (int j = 0; j < d; ++j) res.point[j] = grid.center(j, cell[j]);
  if (best > 0) {
    for (int j = 0; j < k; ++j) x[j] = grid.center(j, cell[j]);
    for (const ParametricSurface& s : surfaces) {
      ++res.ops.surface_evaluations;
      if (!evaluate_surface(m, s, x, dep)) continue;
      bool in = true;
      for (int j = 0; j < nd && in; ++j) {
        auto [l, h] = vote_index_range(grid, k + j, dep[j], 1.5 * grid.eff[k + j]);
        in = l <= cell[k + j] && cell[k + j] <= h;
      }
      if (in)
        res.inlier_ids.insert(res.inlier_ids.end(), s.source_ids.begin(), s.source_ids.end());
    }
    std::sort(res.inlier_ids.begin(), res.inlier_ids.end());
    res.inlier_ids.erase(std::unique(res.inlier_ids.begin(), res.inlier_ids.end()),
                         res.inlier_ids.end());
  }
  return res;
}

}  // namespace ivote
