#pragma once

// Brute-force reference voter, written against the documented grid contract
// rather than the library internals: walk every cell of the dense grid by
// multi-index, evaluate each surface at the cell's independent-axis center,
// and vote when every dependent coordinate lands within 1.5 cell widths of
// the cell center (cell overlap of the +-1.5 eff vote interval). Winner is
// the maximum count at the lexicographically smallest multi-index. Only the
// model's eval and the grid sizing rule are shared with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ivote/core/grid.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/core/vote_result.hpp"

namespace oracle {

struct Winner {
  std::vector<std::int64_t> cell;
  std::vector<double> point;
  std::size_t count = 0;
  std::vector<std::uint32_t> ids;
};

template <class Model>
bool cell_votes(const Model& m, const ivote::ParametricSurface& s, const ivote::GridSpec& g,
                const std::vector<std::int64_t>& cell, int k, int nd) {
  double x[ivote::kMaxDim];
  double dep[ivote::kMaxDependent];
  for (int j = 0; j < k; ++j) x[j] = g.center(j, cell[j]);
  if (!m.eval(s.t.data(), x, dep)) return false;
  for (int j = 0; j < nd; ++j) {
    const double v = dep[j] + s.f[j];
    const double c = g.center(k + j, cell[k + j]);
    const double w = g.eff[k + j];
    if (std::fabs(v - c) > 1.5 * w + 0.5 * w) return false;
  }
  return true;
}

template <class Model>
Winner brute_force_vote(const Model& m, const std::vector<ivote::ParametricSurface>& surfaces,
                        const ivote::Box& box, const ivote::Tolerance& tol) {
  const ivote::GridSpec g = ivote::GridSpec::make(box, tol);
  const int d = m.ambient_dim();
  const int k = m.surface_dim();
  const int nd = d - k;
  Winner best;
  std::vector<std::int64_t> cell(d, 0);
  bool more = true;
  while (more) {
    std::size_t cnt = 0;
    for (const auto& s : surfaces)
      if (cell_votes(m, s, g, cell, k, nd)) ++cnt;
    if (cnt > best.count || best.cell.empty()) {
      best.count = cnt;
      best.cell = cell;
    }
    int j = d - 1;
    for (; j >= 0; --j) {
      if (++cell[j] < g.cells[j]) break;
      cell[j] = 0;
    }
    more = j >= 0;
  }
  best.point.resize(d);
  for (int j = 0; j < d; ++j) best.point[j] = g.center(j, best.cell[j]);
  for (const auto& s : surfaces)
    if (cell_votes(m, s, g, best.cell, k, nd))
      best.ids.insert(best.ids.end(), s.source_ids.begin(), s.source_ids.end());
  std::sort(best.ids.begin(), best.ids.end());
  best.ids.erase(std::unique(best.ids.begin(), best.ids.end()), best.ids.end());
  return best;
}

}  // namespace oracle
