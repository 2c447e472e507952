#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ivote/core/counters.hpp"

namespace ivote {

// One runner-up cell: its center point and pooled vote count.
struct VoteCandidate {
  std::uint64_t count = 0;
  std::vector<double> point;
};

// Outcome of a voting run. point is the winning cell center in the
// normalized search space and always lies inside the query box; inlier_ids
// are the original input-item identifiers behind the winning count, sorted
// ascending, with count == inlier_ids.size(). truncated is set when the
// recursion hit its depth cap before reaching cell size. candidates holds
// the keep_top highest-count cells (winner included, count descending, cell
// order breaking ties) when the engine was asked to keep them; callers
// re-rank these with a domain check that the vote itself cannot express,
// e.g. cheirality for camera families.
struct VoteResult {
  std::vector<double> point;
  std::size_t count = 0;
  std::vector<std::uint32_t> inlier_ids;
  std::vector<VoteCandidate> candidates;
  OperationCounts ops;
  bool truncated = false;
};

}  // namespace ivote
