#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ivote/bench/compare.hpp"
#include "ivote/bench/experiment.hpp"
#include "ivote/bench/verify.hpp"
#include "ivote/data/generate.hpp"

using namespace ivote;
using Catch::Matchers::ContainsSubstring;

namespace {

RunOutcome sample_row(double value, const std::string& algo, std::uint64_t box_calls,
                      std::uint64_t evals, std::uint64_t cells) {
  RunOutcome r;
  r.sweep_value = value;
  r.algo = algo;
  r.model = "line2";
  r.eps_min = 0.01;
  r.result.count = 42;
  r.result.ops = {box_calls, evals, cells};
  r.wall_ms = 1.25;
  return r;
}

OpsSample mk(double value, const std::string& algo, std::uint64_t total) {
  OpsSample s;
  s.sweep_value = value;
  s.algo = algo;
  s.ops = {total, 0, 0};
  return s;
}

}  // namespace

TEST_CASE("sweep CSV column set is pinned") {
  CHECK(std::string(csv_header()) ==
        "sweep_value,algo,model,eps_min,count,box_intersection_calls,"
        "surface_evaluations,cells_touched,wall_ms,truncated");
}

TEST_CASE("sweep CSV rows survive a write/read cycle") {
  const std::vector<RunOutcome> rows = {sample_row(100, "naive", 1, 2, 3),
                                        sample_row(100, "gv", 40, 50, 60),
                                        sample_row(1000, "gv", 7, 8, 9)};
  std::stringstream ss;
  write_csv(ss, rows);
  const auto back = read_csv_samples(ss);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].sweep_value == rows[i].sweep_value);
    CHECK(back[i].algo == rows[i].algo);
    CHECK(back[i].ops.box_intersection_calls == rows[i].result.ops.box_intersection_calls);
    CHECK(back[i].ops.surface_evaluations == rows[i].result.ops.surface_evaluations);
    CHECK(back[i].ops.cells_touched == rows[i].result.ops.cells_touched);
  }

  std::stringstream bad1("algo,count\n");
  CHECK_THROWS_WITH(read_csv_samples(bad1), ContainsSubstring("unexpected header"));
  std::stringstream bad2(std::string(csv_header()) + "\n1,gv,line2\n");
  CHECK_THROWS_WITH(read_csv_samples(bad2), ContainsSubstring("expected 10 columns"));
}

TEST_CASE("tolerance assembly expands and validates axis counts") {
  RunSpec spec;
  spec.eps = 0.02;
  const Tolerance uni = run_tolerance(spec, 3);
  CHECK(uni.eps == std::vector<double>{0.02, 0.02, 0.02});
  spec.eps_axes = {0.1, 0.2, 0.3};
  CHECK(run_tolerance(spec, 3).eps == spec.eps_axes);
  CHECK_THROWS_WITH(run_tolerance(spec, 4), ContainsSubstring("axis count"));
}

TEST_CASE("algorithm dispatch agrees across exact methods") {
  GenConfig g;
  g.model = "line2";
  g.n = 260;
  g.inlier_fraction = 0.35;
  g.noise = 0.001;
  g.seed = 11;
  const ProblemInstance inst = generate_instance(g);
  const auto surfaces = build_surfaces(inst);

  RunSpec spec;
  spec.eps = 0.04;
  spec.algo = "naive";
  const RunOutcome nv = run_algorithm(inst, surfaces, spec);
  spec.algo = "gv";
  const RunOutcome gv = run_algorithm(inst, surfaces, spec);
  spec.algo = "bnb";
  const RunOutcome bb = run_algorithm(inst, surfaces, spec);
  spec.algo = "ransac";
  spec.ransac.inlier_fraction = 0.3;
  spec.ransac.seed = 2;
  const RunOutcome rs = run_algorithm(inst, surfaces, spec);

  CHECK(nv.model == "line2");
  CHECK(nv.n_items == 260);
  CHECK(nv.eps_min == 0.04);
  CHECK(gv.result.count >= nv.result.count);  // canonization may pool votes
  CHECK(bb.result.count == nv.result.count);
  CHECK(bb.result.point == nv.result.point);
  CHECK(rs.result.count > 0);
  CHECK(rs.result.ops.cells_touched == 49);

  spec.algo = "nope";
  CHECK_THROWS_WITH(run_algorithm(inst, surfaces, spec), ContainsSubstring("unknown algorithm"));
}

TEST_CASE("sampling baseline refuses families it cannot solve") {
  GenConfig g;
  g.model = "pose5";
  g.n_world = 6;
  g.n_obs = 4;
  g.seed = 3;
  const ProblemInstance inst = generate_instance(g);
  const auto surfaces = build_surfaces(inst);
  RunSpec spec;
  spec.algo = "ransac";
  spec.eps = 0.25;
  CHECK_THROWS_WITH(run_algorithm(inst, surfaces, spec),
                    ContainsSubstring("linear in its parameters"));
}

TEST_CASE("sweeps vary exactly the requested knob") {
  SweepSpec sweep;
  sweep.param = "bogus";
  CHECK_THROWS_WITH(run_sweep(sweep), ContainsSubstring("sweep parameter"));

  sweep.param = "n";
  sweep.values = {60, 120};
  sweep.gen.model = "line2";
  sweep.gen.inlier_fraction = 0.4;
  sweep.gen.noise = 0.001;
  sweep.gen.seed = 5;
  RunSpec naive_spec;
  naive_spec.algo = "naive";
  naive_spec.eps = 0.05;
  RunSpec gv_spec;
  gv_spec.algo = "gv";
  gv_spec.eps = 0.05;
  sweep.runs = {naive_spec, gv_spec};
  const auto rows = run_sweep(sweep);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].sweep_value == 60);
  CHECK(rows[0].algo == "naive");
  CHECK(rows[1].sweep_value == 60);
  CHECK(rows[1].algo == "gv");
  CHECK(rows[3].sweep_value == 120);
  CHECK(rows[2].n_items == 120);  // n is the generator knob

  SweepSpec es;
  es.param = "eps";
  es.values = {0.1, 0.05};
  es.gen = sweep.gen;
  es.gen.n = 80;
  es.runs = {naive_spec};
  const auto erows = run_sweep(es);
  REQUIRE(erows.size() == 2);
  CHECK(erows[0].eps_min == 0.1);
  CHECK(erows[1].eps_min == 0.05);
  CHECK(erows[0].n_items == erows[1].n_items);  // eps sweeps reuse the instance
}

TEST_CASE("result verification scores location and count separately") {
  ProblemInstance inst;
  inst.model = "line2";
  inst.d = 2;
  inst.truth = {0.5, 0.5};
  inst.truth_ids = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const Tolerance tol = Tolerance::uniform(2, 0.01);

  VoteResult res;
  res.count = 10;
  res.point = {0.512, 0.495};
  VerifyReport rep = verify_result(inst, res, tol);
  CHECK(rep.located);  // worst axis off by 1.2 eps < 2 eps
  CHECK(rep.counted);
  CHECK(rep.pass);
  CHECK(rep.worst_axis_err == Catch::Approx(1.2));
  CHECK(rep.planted == 10);

  res.point = {0.525, 0.5};  // 2.5 eps off
  rep = verify_result(inst, res, tol);
  CHECK_FALSE(rep.located);
  CHECK_FALSE(rep.pass);

  res.point = {0.5, 0.5};
  res.count = 8;  // below 0.9 * 10
  rep = verify_result(inst, res, tol);
  CHECK(rep.located);
  CHECK_FALSE(rep.counted);
  CHECK_FALSE(rep.pass);

  VerifySpec loose;
  loose.min_fraction = 0.7;
  CHECK(verify_result(inst, res, tol, loose).pass);

  inst.truth.clear();
  CHECK_THROWS_WITH(verify_result(inst, res, tol), ContainsSubstring("no ground truth"));
}

TEST_CASE("angular inlier count finds the diagonal pairs at the true pose") {
  GenConfig g;
  g.model = "pose6";
  g.n_world = 9;
  g.n_obs = 6;
  g.noise = 0.0;
  g.seed = 13;
  const ProblemInstance inst = generate_instance(g);
  const std::size_t hits = count_angular_inliers(inst, inst.truth, 1e-6);
  CHECK(hits == 6);  // exactly the matching pairs at zero noise

  std::vector<std::uint32_t> ids = inst.truth_ids;  // already ascending
  CHECK(count_angular_inliers(inst, inst.truth, 1e-6, &ids) == 6);
  const std::vector<std::uint32_t> none = {1, 2};  // off-diagonal pairs
  CHECK(count_angular_inliers(inst, inst.truth, 1e-6, &none) == 0);

  ProblemInstance wrong;
  wrong.model = "line2";
  CHECK_THROWS_WITH(count_angular_inliers(wrong, {0.5, 0.5}, 0.1),
                    ContainsSubstring("pose6/pose7 only"));
}

TEST_CASE("crossover reports where an algorithm stays cheapest") {
  CHECK(total_ops({3, 4, 5}) == 12);

  // gv dips cheapest in the middle, drops out, then holds to the end
  const std::vector<OpsSample> samples = {
      mk(10, "naive", 5),    mk(10, "gv", 50),   mk(100, "naive", 40),
      mk(100, "gv", 20),     mk(1000, "naive", 300), mk(1000, "gv", 400),
      mk(10000, "naive", 900), mk(10000, "gv", 100)};
  const auto rows = compare_rows(samples);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].cheapest == "naive");
  CHECK(rows[1].cheapest == "gv");
  CHECK(rows[2].cheapest == "naive");
  CHECK(rows[3].cheapest == "gv");
  CHECK(crossover_value(rows, "gv") == 10000);  // the mid-sweep dip does not count
  CHECK(crossover_value(rows, "bnb") != crossover_value(rows, "bnb"));  // NaN
  CHECK(crossover_value(rows, "naive") != crossover_value(rows, "naive"));

  const auto one = compare_rows({mk(7, "gv", 1), mk(7, "naive", 2)});
  CHECK(crossover_value(one, "gv") == 7);

  std::stringstream table;
  write_compare_table(table, rows, "gv");
  CHECK_THAT(table.str(), ContainsSubstring("sweep_value\tnaive\tgv\tcheapest"));
  CHECK_THAT(table.str(), ContainsSubstring("# gv cheapest from sweep_value=10000 on"));
  std::stringstream never;
  write_compare_table(never, rows, "bnb");
  CHECK_THAT(never.str(), ContainsSubstring("# bnb never becomes cheapest"));
}
