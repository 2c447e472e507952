#pragma once

#include <vector>

#include "ivote/core/generalized.hpp"

namespace ivote {

// Best-first style exact search: the subdivision engine with canonization
// off and subtree pruning on. Counts match the dense scan exactly; pruning
// only skips subtrees whose pooled surface weight cannot beat the incumbent.
template <SurfaceModel M>
VoteResult branch_and_bound_vote(const M& m, const std::vector<ParametricSurface>& surfaces,
                                 const Box& box, const Tolerance& tol, int threads = 1) {
  GeneralizedConfig cfg;
  cfg.canonize = false;
  cfg.prune = true;
  cfg.threads = threads;
  return generalized_vote(m, surfaces, box, tol, cfg);
}

}  // namespace ivote
