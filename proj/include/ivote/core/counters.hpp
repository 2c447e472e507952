#pragma once

#include <cstdint>

namespace ivote {

// Operation counters shared by every algorithm so cost curves are
// comparable. Each algorithm charges its dominant work here:
//   naive voting      -> cells_touched (one per tallied vote) and
//                        surface_evaluations
//   recursive voting  -> box_intersection_calls (one per surface/child
//                        predicate test), surface_evaluations for
//                        canonization and leaf checks, cells_touched for
//                        admitted leaf entries
//   RANSAC            -> cells_touched (one per minimal-solver invocation,
//                        i.e. per candidate examined) and
//                        surface_evaluations (one per item residual check)
// Counters are plain sums, so per-task counters merged in any order give
// identical totals.
struct OperationCounts {
  std::uint64_t box_intersection_calls = 0;
  std::uint64_t surface_evaluations = 0;
  std::uint64_t cells_touched = 0;

  OperationCounts& operator+=(const OperationCounts& o) {
    box_intersection_calls += o.box_intersection_calls;
    surface_evaluations += o.surface_evaluations;
    cells_touched += o.cells_touched;
    return *this;
  }

  std::uint64_t total() const {
    return box_intersection_calls + surface_evaluations + cells_touched;
  }

  friend bool operator==(const OperationCounts&, const OperationCounts&) = default;
};

}  // namespace ivote
