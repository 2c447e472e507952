#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "ivote/baselines/branch_and_bound.hpp"
#include "ivote/baselines/ransac.hpp"
#include "ivote/core/naive.hpp"
#include "ivote/data/generate.hpp"
#include "ivote/data/instance.hpp"
#include "ivote/models/registry.hpp"

using namespace ivote;

namespace {

Box unit_box(int d) {
  return Box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
}

}  // namespace

TEST_CASE("trial count table matches independent closed-form values") {
  // N = ceil(ln(1-conf) / ln(1-b^k)), frozen against a separate calculation
  CHECK(ransac_iterations(0.5, 2, 0.99) == 17);
  CHECK(ransac_iterations(0.04, 2, 0.99) == 2876);
  CHECK(ransac_iterations(1.0, 3, 0.99) == 1);
  CHECK(ransac_iterations(0.1, 4, 0.99) == 46050);
  CHECK(ransac_iterations(0.02, 8, 0.999) == 269834190585237ull);
  CHECK(ransac_iterations(0.3, 2, 0.99) == 49);
  CHECK(ransac_iterations(0.25, 4, 0.999) == 1765);
  CHECK(ransac_iterations(0.01, 2, 0.9) == 23025);
  CHECK(ransac_iterations(0.5, 7, 0.999999) == 1762);
}

TEST_CASE("trial count rejects bad arguments and saturates cleanly") {
  CHECK_THROWS_AS(ransac_iterations(0.5, 0, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(ransac_iterations(0.0, 2, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(ransac_iterations(-0.1, 2, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(ransac_iterations(0.5, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ransac_iterations(0.5, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ransac_iterations(0.5, 2, -0.5), std::invalid_argument);
  CHECK(ransac_iterations(1.5, 3, 0.99) == 1);  // fraction >= 1: first sample wins
  // b^k underflows the success probability: no finite trial count suffices
  CHECK(ransac_iterations(1e-9, 8, 0.999) == std::numeric_limits<std::uint64_t>::max());
  CHECK(ransac_iterations(1e-300, 2, 0.99) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("minimal sample size needs a square system") {
  CHECK(ransac_sample_size(make_line2_model(SpaceMap::identity(2))) == 2);
  CHECK(ransac_sample_size(make_sim2_model(default_space("sim2"))) == 2);
  CHECK(ransac_sample_size(make_hyperplane_model(4, default_space("hyperplane", 4))) == 4);
  // a ray pins 2 of 3 coordinates: 3 % 2 != 0, no sample count fits exactly
  CHECK_THROWS_AS(ransac_sample_size(make_ray3_model(default_space("ray3"))),
                  std::invalid_argument);
}

TEST_CASE("hypothesize-and-verify recovers an easy planted line") {
  GenConfig g;
  g.model = "line2";
  g.n = 300;
  g.inlier_fraction = 0.4;
  g.noise = 0.001;
  g.seed = 7;
  const ProblemInstance inst = generate_instance(g);
  const auto surfaces = build_surfaces(inst);
  const ModelVariant mv = instance_model(inst, surfaces);
  const auto& m = std::get<LinearGraphModel>(mv);
  const Tolerance tol = Tolerance::uniform(2, 0.04);

  RansacConfig cfg;
  cfg.inlier_fraction = 0.3;  // assumed fraction below the actual 0.4
  cfg.confidence = 0.99;
  cfg.seed = 5;
  const VoteResult res = ransac_fit(m, surfaces, unit_box(2), tol, cfg);

  CHECK_FALSE(res.truncated);
  CHECK(res.ops.cells_touched == 49);  // one solver call per trial, never adapted
  CHECK(res.count >= static_cast<std::uint64_t>(0.9 * 120));
  CHECK(res.inlier_ids.size() == res.count);  // one item per surface here
  REQUIRE(res.point.size() == 2);
  CHECK(std::fabs(res.point[0] - inst.truth[0]) < 0.08);
  CHECK(std::fabs(res.point[1] - inst.truth[1]) < 0.08);
  std::size_t planted_found = 0;
  for (std::uint32_t id : res.inlier_ids)
    if (id < 120) ++planted_found;
  CHECK(planted_found >= 108);  // 90% of the planted items score as inliers

  // same seed, same result: trials are seeded per index, not sequentially
  const VoteResult res2 = ransac_fit(m, surfaces, unit_box(2), tol, cfg);
  CHECK(res2.count == res.count);
  CHECK(res2.point == res.point);
  CHECK(res2.inlier_ids == res.inlier_ids);
}

TEST_CASE("trial cap sets the truncated flag and stops the loop") {
  GenConfig g;
  g.model = "line2";
  g.n = 150;
  g.inlier_fraction = 0.4;
  g.noise = 0.001;
  g.seed = 9;
  const ProblemInstance inst = generate_instance(g);
  const auto surfaces = build_surfaces(inst);
  const ModelVariant mv = instance_model(inst, surfaces);
  const auto& m = std::get<LinearGraphModel>(mv);
  RansacConfig cfg;
  cfg.inlier_fraction = 0.3;
  cfg.max_iterations = 10;  // want is 49
  const VoteResult res = ransac_fit(m, surfaces, unit_box(2), Tolerance::uniform(2, 0.05), cfg);
  CHECK(res.truncated);
  CHECK(res.ops.cells_touched == 10);
}

TEST_CASE("degenerate and undersized samples are handled without scoring") {
  const SpaceMap space = SpaceMap::identity(2);
  const auto m = make_line2_model(space);
  const Tolerance tol = Tolerance::uniform(2, 0.1);

  // fewer surfaces than a minimal sample: nothing to try
  const std::vector<ParametricSurface> one{line2_surface(space, 0.4, 0.6, 0)};
  const VoteResult r1 = ransac_fit(m, one, unit_box(2), tol);
  CHECK(r1.count == 0);
  CHECK_FALSE(r1.truncated);
  CHECK(r1.ops.cells_touched == 0);
  CHECK(r1.point == unit_box(2).center_point());

  // two copies of the same point: every sample is rank-deficient, each trial
  // still burns a solver call but no residual pass runs
  const std::vector<ParametricSurface> twins{line2_surface(space, 0.4, 0.6, 0),
                                             line2_surface(space, 0.4, 0.6, 1)};
  RansacConfig cfg;
  cfg.inlier_fraction = 0.5;  // 17 trials
  const VoteResult r2 = ransac_fit(m, twins, unit_box(2), tol, cfg);
  CHECK(r2.count == 0);
  CHECK(r2.ops.cells_touched == 17);
  CHECK(r2.ops.surface_evaluations == 0);
}

TEST_CASE("subtree pruning never changes the winning count") {
  struct Case {
    const char* model;
    int d;
    std::size_t n;
    double eps;
  };
  const Case cases[] = {{"line2", 2, 120, 0.07},
                        {"hyperplane", 3, 100, 0.11},
                        {"ray3", 3, 90, 0.09},
                        {"sim2", 4, 80, 0.11}};
  for (const Case& c : cases) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      GenConfig g;
      g.model = c.model;
      g.d = c.d;
      g.n = c.n;
      g.inlier_fraction = 0.3;
      g.noise = 0.002;
      g.seed = seed;
      const ProblemInstance inst = generate_instance(g);
      const auto surfaces = build_surfaces(inst);
      const ModelVariant mv = instance_model(inst, surfaces);
      const Tolerance tol = Tolerance::uniform(inst.d, c.eps);
      std::visit(
          [&](const auto& m) {
            const VoteResult nv = naive_vote(m, surfaces, unit_box(inst.d), tol);
            const VoteResult bb = branch_and_bound_vote(m, surfaces, unit_box(inst.d), tol);
            INFO(c.model << " seed " << seed);
            REQUIRE(bb.count == nv.count);
          },
          mv);
    }
  }
}

TEST_CASE("subtree pruning matches the dense scan on a camera family") {
  GenConfig g;
  g.model = "pose5";
  g.n_world = 12;
  g.n_obs = 9;
  g.noise = 0.002;
  g.seed = 3;
  const ProblemInstance inst = generate_instance(g);
  const auto surfaces = build_surfaces(inst);
  const ModelVariant mv = instance_model(inst, surfaces);
  const auto& m = std::get<Pose5Model>(mv);
  const Tolerance tol = Tolerance::uniform(5, 0.26);
  const VoteResult nv = naive_vote(m, surfaces, unit_box(5), tol);
  const VoteResult bb = branch_and_bound_vote(m, surfaces, unit_box(5), tol);
  CHECK(bb.count == nv.count);
  CHECK(bb.ops.box_intersection_calls > 0);
}
