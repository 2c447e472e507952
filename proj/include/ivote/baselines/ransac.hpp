#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ivote/core/box.hpp"
#include "ivote/core/grid.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/core/tolerance.hpp"
#include "ivote/core/vote_result.hpp"
#include "ivote/models/linear_graph.hpp"

namespace ivote {

// Smallest N with 1 - (1 - b^k)^N >= confidence: the standard trial count
// for drawing at least one all-inlier sample of size k with probability
// confidence when the inlier fraction is b. Saturates at uint64 max when b^k
// underflows or N overflows. Evaluated in extended precision so the ceil is
// exact for every realistic input.
inline std::uint64_t ransac_iterations(double inlier_fraction, int sample_size,
                                       double confidence) {
  if (sample_size < 1) throw std::invalid_argument("ransac_iterations: sample size < 1");
  if (!(inlier_fraction > 0.0))
    throw std::invalid_argument("ransac_iterations: inlier fraction must be positive");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("ransac_iterations: confidence must be in (0,1)");
  if (inlier_fraction >= 1.0) return 1;
  long double w = 1.0L;
  for (int i = 0; i < sample_size; ++i) w *= static_cast<long double>(inlier_fraction);
  const long double denom = std::log1p(-w);  // log P(sample has an outlier), < 0
  if (!(denom < 0.0L)) return std::numeric_limits<std::uint64_t>::max();
  const long double est = std::log(1.0L - static_cast<long double>(confidence)) / denom;
  if (!(est < 1.8e19L)) return std::numeric_limits<std::uint64_t>::max();
  const auto n = static_cast<std::uint64_t>(std::ceil(est));
  return std::max<std::uint64_t>(n, 1);
}

namespace detail {

// Stateless-seedable generator; one instance per trial keeps trials
// reproducible and order-independent.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

// Gaussian elimination with partial pivoting on an n x n row-major system.
// False when the pivot degenerates (sample does not determine the point).
inline bool solve_linear(int n, std::vector<double>& a, std::vector<double>& rhs) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) < 1e-12) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double m = a[r * n + col] * inv;
      if (m == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= m * a[col * n + c];
      rhs[r] -= m * rhs[col];
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    double v = rhs[col];
    for (int c = col + 1; c < n; ++c) v -= a[col * n + c] * rhs[c];
    rhs[col] = v / a[col * n + col];
  }
  return true;
}

}  // namespace detail

struct RansacConfig {
  double inlier_fraction = 0.1;  // assumed fraction b sizing the trial count
  double confidence = 0.99;
  std::uint64_t seed = 1;
  std::uint64_t max_iterations = 10'000'000;  // executed-trial cap
};

// Number of surfaces a minimal sample needs: each surface contributes one
// equation per dependent coordinate and the sample must determine all d
// parameter coordinates exactly.
inline int ransac_sample_size(const LinearGraphModel& m) {
  const int d = m.ambient_dim(), nd = d - m.surface_dim();
  if (d % nd != 0)
    throw std::invalid_argument("ransac: family has no square minimal system");
  return d / nd;
}

// Classic hypothesize-and-verify baseline in the shared normalized parameter
// space. Each trial samples just enough surfaces to pin down a parameter
// point, solves the resulting square linear system, and scores the point by
// counting surfaces passing within the same +-1.5 cell-width window the
// voting algorithms use. Only surface families linear in their essential
// parameters have such a solver here (lines, hyperplanes, 2-d similarity).
//
// The trial count comes from ransac_iterations with the configured assumed
// inlier fraction and is never adapted during the run; trials capped by
// max_iterations set the truncated flag. Degenerate or out-of-box fits
// consume their trial. Counters: cells_touched per solver call,
// surface_evaluations per residual check. Ties keep the earliest trial.
inline VoteResult ransac_fit(const LinearGraphModel& m,
                             const std::vector<ParametricSurface>& surfaces,
                             const Box& box, const Tolerance& tol,
                             const RansacConfig& cfg = {}) {
  const GridSpec grid = GridSpec::make(box, tol);
  const int d = m.ambient_dim(), k = m.surface_dim(), nd = d - k;
  const int l = m.essential_count();
  const int sample = ransac_sample_size(m);
  for (const ParametricSurface& s : surfaces)
    if (s.d != d || s.k != k || static_cast<int>(s.t.size()) != l ||
        static_cast<int>(s.f.size()) != nd)
      throw std::invalid_argument("ransac_fit: surface does not match model shape");

  VoteResult res;
  res.point = box.center_point();
  const std::size_t n = surfaces.size();
  if (n < static_cast<std::size_t>(sample)) return res;

  const std::uint64_t want = ransac_iterations(cfg.inlier_fraction, sample, cfg.confidence);
  const std::uint64_t trials = std::min(want, cfg.max_iterations);
  res.truncated = trials < want;

  std::vector<double> a(static_cast<std::size_t>(d) * d), rhs(d), theta(d), best_theta;
  std::size_t pick[kMaxDim];
  double dep[kMaxDependent];
  std::uint64_t best = 0;

  auto inlier = [&](const ParametricSurface& s, const std::vector<double>& th) {
    ++res.ops.surface_evaluations;
    if (!evaluate_surface(m, s, th.data(), dep)) return false;
    for (int j = 0; j < nd; ++j)
      if (std::fabs(dep[j] - th[k + j]) > 1.5 * grid.eff[k + j]) return false;
    return true;
  };

  for (std::uint64_t it = 0; it < trials; ++it) {
    detail::SplitMix64 rng(cfg.seed ^ it);
    for (int s = 0; s < sample;) {
      const std::size_t r = static_cast<std::size_t>(rng.next() % n);
      bool dup = false;
      for (int t = 0; t < s; ++t) dup = dup || pick[t] == r;
      if (!dup) pick[s++] = r;
    }
    std::fill(a.begin(), a.end(), 0.0);
    int row = 0;
    for (int s = 0; s < sample; ++s) {
      const ParametricSurface& sf = surfaces[pick[s]];
      for (int j = 0; j < nd; ++j, ++row) {
        a[static_cast<std::size_t>(row) * d + (k + j)] = 1.0;
        for (const LinTerm& tm : m.terms()[j])
          a[static_cast<std::size_t>(row) * d + tm.axis] -= tm.sign * sf.t[tm.t_index];
        rhs[row] = sf.f[j];
      }
    }
    ++res.ops.cells_touched;
    if (!detail::solve_linear(d, a, rhs)) continue;
    theta.assign(rhs.begin(), rhs.end());
    if (!box.contains(theta)) continue;
    std::uint64_t cnt = 0;
    for (const ParametricSurface& s : surfaces)
      if (inlier(s, theta)) ++cnt;
    if (cnt > best) {
      best = cnt;
      best_theta = theta;
    }
  }

  if (best > 0) {
    res.count = best;
    res.point = best_theta;
    for (const ParametricSurface& s : surfaces)
      if (inlier(s, best_theta))
        res.inlier_ids.insert(res.inlier_ids.end(), s.source_ids.begin(), s.source_ids.end());
    std::sort(res.inlier_ids.begin(), res.inlier_ids.end());
    res.inlier_ids.erase(std::unique(res.inlier_ids.begin(), res.inlier_ids.end()),
                         res.inlier_ids.end());
  }
  return res;
}

}  // namespace ivote
