#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ivote/core/tolerance.hpp"
#include "ivote/core/vote_result.hpp"
#include "ivote/data/instance.hpp"
#include "ivote/models/rotation.hpp"

namespace ivote {

// Pass criteria for a result against an instance's planted truth: the
// winning point within tol_mult eps of the truth on every axis, and the
// winning count at least min_fraction of the planted count.
struct VerifySpec {
  double tol_mult = 2.0;
  double min_fraction = 0.9;
};

struct VerifyReport {
  bool pass = false;
  bool located = false;
  bool counted = false;
  double worst_axis_err = 0.0;  // max per-axis |point - truth| / eps
  std::size_t count = 0;
  std::size_t planted = 0;
};

inline VerifyReport verify_result(const ProblemInstance& inst, const VoteResult& res,
                                  const Tolerance& tol, const VerifySpec& spec = {}) {
  if (inst.truth.empty())
    throw std::invalid_argument("verify: instance has no ground truth");
  VerifyReport rep;
  rep.count = res.count;
  rep.planted = inst.truth_ids.size();
  rep.located = true;
  for (int j = 0; j < inst.d; ++j) {
    const double err = std::fabs(res.point[j] - inst.truth[j]) / tol.eps[j];
    rep.worst_axis_err = std::max(rep.worst_axis_err, err);
    if (err > spec.tol_mult) rep.located = false;
  }
  rep.counted = rep.planted == 0 ||
                static_cast<double>(res.count) >= spec.min_fraction * static_cast<double>(rep.planted);
  rep.pass = rep.located && rep.counted;
  return rep;
}

// Angular re-verification: keep only the reported inliers whose reprojection
// error under the reported pose is within ang_tol; the count follows the
// surviving set. Cheirality lives here and not in the vote, so a winner
// assembled from behind-camera coincidences collapses under this check while
// a genuine pose keeps its support.
inline VoteResult verify_inliers(const ProblemInstance& inst, VoteResult res, double ang_tol) {
  const bool focal = inst.model == "pose7";
  if (!focal && inst.model != "pose6")
    throw std::invalid_argument("angular check applies to pose6/pose7 only");
  auto phys = [&](int j) { return inst.space.to_phys(j, res.point[j]); };
  const Vec3 phi = {phys(1), phys(2), phys(3)};
  const Mat3 rot = rotation_from_angle_axis(phi);
  const double f = focal ? phys(4) : 1.0;
  const Vec3 t_cam = {phys(focal ? 5 : 4), phys(focal ? 6 : 5), phys(0)};
  std::vector<std::uint32_t> kept;
  kept.reserve(res.inlier_ids.size());
  for (const Item& it : inst.items) {
    if (!std::binary_search(res.inlier_ids.begin(), res.inlier_ids.end(), it.id)) continue;
    const Vec3 w = {it.v[0], it.v[1], it.v[2]};
    if (reprojection_angular_error(rot, t_cam, f, w, it.v[3], it.v[4]) <= ang_tol)
      kept.push_back(it.id);
  }
  std::sort(kept.begin(), kept.end());
  res.inlier_ids = std::move(kept);
  res.count = res.inlier_ids.size();
  return res;
}

// For the pinhole families: how many items see their world point within
// ang_tol radians of the observed bearing under the pose at the given
// normalized point. ids, when non-null (sorted), restricts the check.
inline std::size_t count_angular_inliers(const ProblemInstance& inst,
                                         const std::vector<double>& point, double ang_tol,
                                         const std::vector<std::uint32_t>* ids = nullptr) {
  const bool focal = inst.model == "pose7";
  if (!focal && inst.model != "pose6")
    throw std::invalid_argument("angular check applies to pose6/pose7 only");
  auto phys = [&](int j) { return inst.space.to_phys(j, point[j]); };
  const Vec3 phi = {phys(1), phys(2), phys(3)};
  const Mat3 rot = rotation_from_angle_axis(phi);
  const double f = focal ? phys(4) : 1.0;
  const Vec3 t_cam = {phys(focal ? 5 : 4), phys(focal ? 6 : 5), phys(0)};
  std::size_t n = 0;
  for (const Item& it : inst.items) {
    if (ids && !std::binary_search(ids->begin(), ids->end(), it.id)) continue;
    const Vec3 w = {it.v[0], it.v[1], it.v[2]};
    if (reprojection_angular_error(rot, t_cam, f, w, it.v[3], it.v[4]) <= ang_tol) ++n;
  }
  return n;
}

}  // namespace ivote
