#pragma once

#include "ivote/core/box.hpp"
#include "ivote/core/canonize.hpp"
#include "ivote/core/counters.hpp"
#include "ivote/core/generalized.hpp"
#include "ivote/core/grid.hpp"
#include "ivote/core/intersect.hpp"
#include "ivote/core/interval.hpp"
#include "ivote/core/naive.hpp"
#include "ivote/core/space_map.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/core/tolerance.hpp"
#include "ivote/core/vote_result.hpp"

#include "ivote/models/hyperplane.hpp"
#include "ivote/models/line2.hpp"
#include "ivote/models/linear_graph.hpp"
#include "ivote/models/pose5.hpp"
#include "ivote/models/pose67.hpp"
#include "ivote/models/radial5.hpp"
#include "ivote/models/ray3.hpp"
#include "ivote/models/registry.hpp"
#include "ivote/models/rotation.hpp"
#include "ivote/models/sim2.hpp"

#include "ivote/baselines/branch_and_bound.hpp"
#include "ivote/baselines/ransac.hpp"

#include "ivote/data/generate.hpp"
#include "ivote/data/instance.hpp"
#include "ivote/data/io.hpp"
#include "ivote/data/random.hpp"

#include "ivote/bench/compare.hpp"
#include "ivote/bench/experiment.hpp"
#include "ivote/bench/verify.hpp"
