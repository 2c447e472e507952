#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ivote/baselines/branch_and_bound.hpp"
#include "ivote/baselines/ransac.hpp"
#include "ivote/bench/experiment.hpp"
#include "ivote/bench/verify.hpp"
#include "ivote/core/canonize.hpp"
#include "ivote/core/generalized.hpp"
#include "ivote/core/grid.hpp"
#include "ivote/core/naive.hpp"
#include "ivote/data/generate.hpp"
#include "ivote/data/instance.hpp"
#include "ivote/data/random.hpp"
#include "ivote/models/registry.hpp"
#include "oracle.hpp"

using namespace ivote;

// Each case prints exactly one PASS/FAIL line so the run log doubles as the
// acceptance checklist; the CHECKs carry the same verdict into the exit code.

namespace {

void report(int criterion, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << ": criterion " << criterion << " - " << what
            << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Box random_subbox(Rng& rng, int d, double min_side, double max_side) {
  std::vector<double> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    const double side = rng.uniform(min_side, max_side);
    lo[j] = rng.uniform(0.0, 1.0 - side);
    hi[j] = lo[j] + side;
  }
  return Box(lo, hi);
}

}  // namespace

TEST_CASE("criterion 1: line recovery at the benchmark tolerance") {
  const double fractions[3] = {0.01, 0.02, 0.04};
  const double eps = 0.002;
  bool all_ok = true;
  for (int i = 0; i < 3; ++i) {
    GenConfig g;
    g.model = "line2";
    g.n = 10000;
    g.inlier_fraction = fractions[i];
    g.noise = 0.001;
    g.seed = static_cast<std::uint64_t>(i + 1);
    const ProblemInstance inst = generate_instance(g);
    const auto surfaces = build_surfaces(inst);
    RunSpec spec;
    spec.algo = "gv";
    spec.eps = eps;
    const RunOutcome out = run_algorithm(inst, surfaces, spec);
    double worst = 0.0;
    for (int j = 0; j < 2; ++j)
      worst = std::max(worst, std::fabs(out.result.point[j] - inst.truth[j]));
    const bool located = worst <= 2.0 * eps;
    const bool supported =
        static_cast<double>(out.result.count) >= 0.9 * static_cast<double>(inst.truth_ids.size());
    const bool fast = out.wall_ms < 10000.0;
    INFO("fraction " << fractions[i] << ": err/eps=" << worst / eps << " count="
                     << out.result.count << "/" << inst.truth_ids.size()
                     << " wall=" << out.wall_ms << "ms");
    CHECK(located);
    CHECK(supported);
    CHECK(fast);
    all_ok = all_ok && located && supported && fast;
  }
  report(1, all_ok,
         "line fit at eps=0.002 lands within 2*eps with >=90% of planted support in <10 s per run");
}

TEST_CASE("criterion 2: dense voter equals an independent brute force") {
  struct Variant {
    std::string model;
    int d;
  };
  const std::vector<Variant> variants = {
      {"line2", 2}, {"hyperplane", 2}, {"hyperplane", 3}, {"ray3", 3}};
  bool all_ok = true;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (int i = 0; i < 50; ++i) {
      Rng rng(1000 * (v + 1) + static_cast<std::uint64_t>(i));
      GenConfig g;
      g.model = variants[v].model;
      g.d = variants[v].d;
      g.n = static_cast<std::size_t>(rng.uniform(30.0, 200.0));
      g.inlier_fraction = rng.uniform(0.15, 0.5);
      g.noise = 0.003;
      g.seed = 77 + 50 * v + static_cast<std::uint64_t>(i);
      const ProblemInstance inst = generate_instance(g);
      const auto surfaces = build_surfaces(inst);
      const Tolerance tol(std::vector<double>(inst.d, rng.uniform(0.06, 0.12)));
      const Box box = Box::unit(inst.d);
      const ModelVariant mv = instance_model(inst, surfaces);
      bool ok = true;
      std::visit(
          [&](const auto& m) {
            const VoteResult nv = naive_vote(m, surfaces, box, tol);
            const oracle::Winner ref = oracle::brute_force_vote(m, surfaces, box, tol);
            const VoteResult gv = generalized_vote(m, surfaces, box, tol);
            ok = nv.count == ref.count && nv.point == ref.point && nv.inlier_ids == ref.ids &&
                 gv.count >= nv.count;
          },
          mv);
      INFO(variants[v].model << " d=" << variants[v].d << " instance " << i);
      CHECK(ok);
      all_ok = all_ok && ok;
    }
  }
  report(2, all_ok,
         "dense scan matches the reference voter exactly on 200 small instances; "
         "hierarchical count never drops below dense");
}

TEST_CASE("criterion 3: operation-count crossover on 1% line inliers") {
  SweepSpec sw;
  sw.param = "n";
  sw.values = {100, 1000, 10000, 100000};
  sw.gen.model = "line2";
  sw.gen.inlier_fraction = 0.01;
  sw.gen.noise = 0.001;
  sw.gen.seed = 1;
  RunSpec nv;
  nv.algo = "naive";
  nv.eps = 0.01;
  RunSpec gv;
  gv.algo = "gv";
  gv.eps = 0.01;
  RunSpec rs;
  rs.algo = "ransac";
  rs.eps = 0.01;
  rs.ransac.inlier_fraction = 0.01;
  rs.ransac.confidence = 0.99;
  rs.ransac.seed = 1;
  sw.runs = {nv, gv, rs};
  const std::vector<RunOutcome> rows = run_sweep(sw);
  REQUIRE(rows.size() == 12);

  // dominant operation per algorithm: cell updates for the dense scan, box
  // predicates for the hierarchical search, residual checks for sampling
  const auto dense = [&](int i) { return rows[3 * i + 0].result.ops.cells_touched; };
  const auto hier = [&](int i) { return rows[3 * i + 1].result.ops.box_intersection_calls; };
  const auto samp = [&](int i) { return rows[3 * i + 2].result.ops.surface_evaluations; };

  const bool starts_above = hier(0) > dense(0);
  const bool ends_below_dense = hier(3) < dense(3);
  const bool ends_below_sampling = hier(3) < samp(3);
  const bool dense_below_sampling = dense(3) < samp(3);
  for (int i = 0; i < 4; ++i) {
    INFO("n=" << sw.values[i] << " dense=" << dense(i) << " hier=" << hier(i)
              << " sampling=" << samp(i));
    CHECK(rows[3 * i].result.count > 0);
  }
  CHECK(starts_above);
  CHECK(ends_below_dense);
  CHECK(ends_below_sampling);
  CHECK(dense_below_sampling);
  const bool ok = starts_above && ends_below_dense && ends_below_sampling && dense_below_sampling;
  report(3, ok,
         "hierarchical box calls start above the dense cell count and undercut both "
         "dense and sampling at n=1e5");
}

namespace {

// criterion 4 part one: a canonized representative stays within the eps'
// allocation of its original everywhere in the box, sampled pointwise.
template <class M>
void canon_deviation_case(const M& m, const std::vector<ParametricSurface>& surfaces,
                          Rng& rng, std::size_t& violations, std::size_t& sampled) {
  const int d = m.ambient_dim(), k = m.surface_dim(), nd = d - k;
  const Tolerance tol(std::vector<double>(d, 0.05));
  const GridSpec grid = GridSpec::make(Box::unit(d), tol);
  double epsp[kMaxDependent];
  for (int j = 0; j < nd; ++j) epsp[j] = eps_prime(grid.eff[k + j], m.default_eps_prime_scale());

  for (int pair = 0; pair < 1000; ++pair) {
    const ParametricSurface& orig = surfaces[pair % surfaces.size()];
    const Box box = random_subbox(rng, d, 0.1, 0.6);
    CanonSurface cs;
    cs.s = orig;
    OperationCounts ops;
    const auto reps = canonize_surfaces(m, {cs}, box, epsp, ops);
    REQUIRE(reps.size() == 1);
    const ParametricSurface& rep = reps[0].s;
    double x[kMaxDim] = {}, dep_o[kMaxDependent], dep_r[kMaxDependent];
    for (int p = 0; p < 1000; ++p) {
      for (int j = 0; j < k; ++j) x[j] = rng.uniform(box.lo[j], box.hi[j]);
      if (!evaluate_surface(m, orig, x, dep_o)) continue;
      if (!evaluate_surface(m, rep, x, dep_r)) continue;
      ++sampled;
      for (int j = 0; j < nd; ++j)
        if (std::fabs(dep_r[j] - dep_o[j]) > epsp[j] + 1e-12) ++violations;
    }
  }
}

// criterion 4 part two: recorded per-level list sizes against the analytic
// lattice capacity of the unclipped node box at that level.
template <class M>
bool level_bound_case(const M& m, const std::vector<ParametricSurface>& surfaces,
                      const Tolerance& tol, std::vector<double>& caps_out) {
  const Box box = Box::unit(m.ambient_dim());
  const GridSpec grid = GridSpec::make(box, tol);
  const int d = m.ambient_dim(), k = m.surface_dim(), nd = d - k;
  double epsp[kMaxDependent], slack[kMaxDependent];
  for (int j = 0; j < nd; ++j) {
    epsp[j] = eps_prime(grid.eff[k + j], m.default_eps_prime_scale());
    slack[j] = 1.5 * grid.eff[k + j] + epsp[j];
  }
  EngineStats st;
  GeneralizedConfig cfg;
  cfg.canonize = true;
  cfg.stats = &st;
  generalized_vote(m, surfaces, box, tol, cfg);
  REQUIRE(st.fallback == 0);

  std::int64_t padded[kMaxDim];
  for (int j = 0; j < d; ++j)
    padded[j] = std::bit_ceil(static_cast<std::uint64_t>(grid.cells[j]));
  bool ok = true;
  caps_out.clear();
  for (int q = 0; q <= st.max_level; ++q) {
    if (st.level_nodes[q] == 0) continue;
    std::vector<double> lo(d, 0.0), hi(d);
    for (int j = 0; j < d; ++j)
      hi[j] = grid.eff[j] * static_cast<double>(std::max<std::int64_t>(padded[j] >> q, 1));
    const double cap = canonical_capacity(m, Box(lo, hi), epsp, slack);
    caps_out.push_back(cap);
    const double bound = static_cast<double>(st.level_nodes[q]) * cap;
    INFO("level " << q << ": surfaces=" << st.level_surfaces[q] << " bound=" << bound);
    CHECK(static_cast<double>(st.level_surfaces[q]) <= bound);
    ok = ok && static_cast<double>(st.level_surfaces[q]) <= bound;
  }
  return ok;
}

GenConfig canon_config(const std::string& model, std::uint64_t seed) {
  GenConfig g;
  g.model = model;
  if (model.rfind("pose", 0) == 0 || model == "radial5") {
    g.n_world = 40;
    g.n_obs = 25;
  } else {
    g.n = 1000;
  }
  g.inlier_fraction = 0.3;
  g.noise = 0.005;
  g.seed = seed;
  return g;
}

}  // namespace

TEST_CASE("criterion 4: canonization deviation and per-level lattice bound") {
  std::size_t violations = 0, sampled = 0;
  std::uint64_t seed = 401;
  for (const std::string& tag : model_tags()) {
    const ProblemInstance inst = generate_instance(canon_config(tag, seed++));
    const auto surfaces = build_surfaces(inst);
    REQUIRE(surfaces.size() == 1000);
    Rng rng(seed * 31);
    const ModelVariant mv = instance_model(inst, surfaces);
    std::visit([&](const auto& m) { canon_deviation_case(m, surfaces, rng, violations, sampled); },
               mv);
  }
  INFO("sampled " << sampled << " points, " << violations << " deviation violations");
  CHECK(violations == 0);
  CHECK(sampled > 1000000);

  // level bound, with the essential ranges pinned by the larger dataset so
  // the capacity is identical for n and 2n
  bool levels_ok = true;
  bool caps_equal = true;
  {
    GenConfig g;
    g.model = "line2";
    g.n = 8000;
    g.inlier_fraction = 0.05;
    g.noise = 0.001;
    g.seed = 5;
    const ProblemInstance inst = generate_instance(g);
    const auto all = build_surfaces(inst);
    const std::vector<ParametricSurface> half(all.begin(), all.begin() + 4000);
    const ModelVariant mv = instance_model(inst, all);
    const auto& m = std::get<LinearGraphModel>(mv);
    const Tolerance tol(std::vector<double>{0.01, 0.01});
    std::vector<double> caps_half, caps_all;
    levels_ok = level_bound_case(m, half, tol, caps_half) && levels_ok;
    levels_ok = level_bound_case(m, all, tol, caps_all) && levels_ok;
    caps_equal = caps_equal && caps_half == caps_all;
  }
  {
    GenConfig g;
    g.model = "hyperplane";
    g.d = 3;
    g.n = 6000;
    g.inlier_fraction = 0.08;
    g.noise = 0.002;
    g.seed = 9;
    const ProblemInstance inst = generate_instance(g);
    const auto all = build_surfaces(inst);
    const std::vector<ParametricSurface> half(all.begin(), all.begin() + 3000);
    const ModelVariant mv = instance_model(inst, all);
    const auto& m = std::get<LinearGraphModel>(mv);
    const Tolerance tol(std::vector<double>{0.04, 0.04, 0.04});
    std::vector<double> caps_half, caps_all;
    levels_ok = level_bound_case(m, half, tol, caps_half) && levels_ok;
    levels_ok = level_bound_case(m, all, tol, caps_all) && levels_ok;
    caps_equal = caps_equal && caps_half == caps_all;
  }
  CHECK(caps_equal);
  const bool ok = violations == 0 && levels_ok && caps_equal;
  report(4, ok,
         "canonical representatives stay within eps' pointwise; per-level canonical "
         "counts obey the n-independent lattice bound");
}

namespace {

// criterion 5 pipeline: hierarchical vote with runner-up cells kept, then
// angular re-verification picks the consensus the sign-free vote may have
// buried, and the tied plateau refines the estimate.
struct PoseRecovery {
  double rot_err = 0.0;
  double t_err = 0.0;
  double secs = 0.0;
};

PoseRecovery recover_pose(unsigned seed) {
  GenConfig g;
  g.model = "pose6";
  g.n_world = 88;
  g.n_obs = 30;
  g.noise = 0.001;
  g.seed = seed;
  g.rot_half = 0.1;
  g.rot_max = 0.1;
  const ProblemInstance inst = generate_instance(g);
  const auto surfaces = build_surfaces(inst);
  const ModelVariant mv = instance_model(inst, surfaces);
  const auto& m = std::get<PinholePoseModel>(mv);
  const Tolerance tol(std::vector<double>{0.045, 0.14, 0.14, 0.14, 0.045, 0.045});
  const Box box = Box::unit(6);
  const GridSpec grid = GridSpec::make(box, tol);
  GeneralizedConfig cfg;
  cfg.canonize = true;
  cfg.prune = true;
  cfg.threads = 1;
  cfg.keep_top = 512;

  std::unordered_map<std::uint32_t, const Item*> by_id;
  for (const Item& it : inst.items) by_id[it.id] = &it;

  const auto t0 = std::chrono::steady_clock::now();
  const VoteResult res = generalized_vote(m, surfaces, box, tol, cfg);

  // verified support of a cell: voted surfaces whose pair also reprojects
  // within 0.1 rad under the cell-center pose (this is where cheirality acts)
  auto verified = [&](const std::vector<double>& pt, double* mean_dep) -> std::size_t {
    std::array<std::int64_t, kMaxDim> cell{};
    for (int j = 0; j < 6; ++j) cell[j] = grid.clamp_index(j, grid.index(j, pt[j]));
    double x[kMaxDim] = {}, dep[kMaxDependent] = {};
    for (int j = 0; j < 4; ++j) x[j] = grid.center(j, cell[j]);
    auto phys = [&](int j) { return inst.space.to_phys(j, pt[j]); };
    const Mat3 rot = rotation_from_angle_axis({phys(1), phys(2), phys(3)});
    const Vec3 t_cam = {phys(4), phys(5), phys(0)};
    std::size_t n = 0;
    double acc[2] = {0.0, 0.0};
    for (const ParametricSurface& s : surfaces) {
      if (!evaluate_surface(m, s, x, dep)) continue;
      bool in = true;
      for (int j = 0; j < 2 && in; ++j) {
        const auto [l, h] = vote_index_range(grid, 4 + j, dep[j], 1.5 * grid.eff[4 + j]);
        in = l <= cell[4 + j] && cell[4 + j] <= h;
      }
      if (!in) continue;
      const Item* it = by_id.at(s.source_ids[0]);
      const Vec3 w = {it->v[0], it->v[1], it->v[2]};
      if (reprojection_angular_error(rot, t_cam, 1.0, w, it->v[3], it->v[4]) > 0.1) continue;
      ++n;
      acc[0] += dep[0];
      acc[1] += dep[1];
    }
    if (mean_dep && n) {
      mean_dep[0] = acc[0] / static_cast<double>(n);
      mean_dep[1] = acc[1] / static_cast<double>(n);
    }
    return n;
  };

  std::size_t best_v = 0;
  for (const VoteCandidate& c : res.candidates)
    best_v = std::max(best_v, verified(c.point, nullptr));
  std::vector<double> ans(6, 0.0);
  double dep_acc[2] = {0.0, 0.0};
  std::size_t ties = 0;
  for (const VoteCandidate& c : res.candidates) {
    double md[2] = {0.0, 0.0};
    if (verified(c.point, md) == best_v) {
      for (int j = 0; j < 6; ++j) ans[j] += c.point[j];
      dep_acc[0] += md[0];
      dep_acc[1] += md[1];
      ++ties;
    }
  }
  REQUIRE(ties > 0);
  for (int j = 0; j < 6; ++j) ans[j] /= static_cast<double>(ties);
  ans[4] = dep_acc[0] / static_cast<double>(ties);
  ans[5] = dep_acc[1] / static_cast<double>(ties);

  PoseRecovery rec;
  rec.secs = seconds_since(t0);
  auto phys = [&](const std::vector<double>& p, int j) { return inst.space.to_phys(j, p[j]); };
  const Mat3 rf = rotation_from_angle_axis({phys(ans, 1), phys(ans, 2), phys(ans, 3)});
  const Mat3 rt = rotation_from_angle_axis(
      {phys(inst.truth, 1), phys(inst.truth, 2), phys(inst.truth, 3)});
  rec.rot_err = geodesic_angle(rf, rt);
  double t2 = 0.0;
  for (int j : {0, 4, 5}) {
    const double dn = ans[j] - inst.truth[j];
    t2 += dn * dn;
  }
  rec.t_err = std::sqrt(t2);
  return rec;
}

}  // namespace

TEST_CASE("criterion 5: correspondence-free 6-DoF posing over ten seeds") {
  int passes = 0;
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const PoseRecovery rec = recover_pose(seed);
    const bool ok = rec.rot_err < 0.1 && rec.t_err < 0.1 && rec.secs < 120.0;
    std::cout << "  seed " << seed << ": rot_err=" << rec.rot_err << " t_err=" << rec.t_err
              << " wall=" << rec.secs << "s " << (ok ? "ok" : "miss") << std::endl;
    if (ok) ++passes;
  }
  const bool ok = passes >= 8;
  CHECK(passes >= 8);
  report(5, ok,
         "88 points x 30 bearings over a 50x5x5 m translation domain: rotation < 0.1 rad "
         "and normalized translation < 0.1 on >= 8/10 seeds, < 120 s per seed");
}

namespace {

bool same_result(const VoteResult& a, const VoteResult& b) {
  if (a.count != b.count || a.point != b.point || a.inlier_ids != b.inlier_ids) return false;
  if (a.truncated != b.truncated) return false;
  if (a.ops.box_intersection_calls != b.ops.box_intersection_calls) return false;
  if (a.ops.surface_evaluations != b.ops.surface_evaluations) return false;
  if (a.ops.cells_touched != b.ops.cells_touched) return false;
  if (a.candidates.size() != b.candidates.size()) return false;
  for (std::size_t i = 0; i < a.candidates.size(); ++i)
    if (a.candidates[i].count != b.candidates[i].count ||
        a.candidates[i].point != b.candidates[i].point)
      return false;
  return true;
}

template <class M>
bool threads_invariant(const M& m, const std::vector<ParametricSurface>& surfaces,
                       const Tolerance& tol) {
  const Box box = Box::unit(m.ambient_dim());
  GeneralizedConfig cfg;
  cfg.canonize = true;
  cfg.prune = true;
  cfg.keep_top = 32;
  cfg.threads = 1;
  const VoteResult one = generalized_vote(m, surfaces, box, tol, cfg);
  cfg.threads = 8;
  const VoteResult eight = generalized_vote(m, surfaces, box, tol, cfg);
  const VoteResult bb1 = branch_and_bound_vote(m, surfaces, box, tol, 1);
  const VoteResult bb8 = branch_and_bound_vote(m, surfaces, box, tol, 8);
  const VoteResult nv1 = naive_vote(m, surfaces, box, tol);
  const VoteResult nv2 = naive_vote(m, surfaces, box, tol);
  return same_result(one, eight) && same_result(bb1, bb8) && same_result(nv1, nv2);
}

}  // namespace

TEST_CASE("criterion 6: identical output across thread counts") {
  bool ok = true;
  {
    GenConfig g;
    g.model = "line2";
    g.n = 3000;
    g.inlier_fraction = 0.03;
    g.noise = 0.002;
    g.seed = 21;
    const ProblemInstance inst = generate_instance(g);
    const auto surfaces = build_surfaces(inst);
    const ModelVariant mv = instance_model(inst, surfaces);
    const auto& m = std::get<LinearGraphModel>(mv);
    ok = threads_invariant(m, surfaces, Tolerance(std::vector<double>{0.01, 0.01})) && ok;

    RunSpec rs;
    rs.algo = "ransac";
    rs.eps = 0.01;
    rs.ransac.inlier_fraction = 0.03;
    rs.ransac.seed = 9;
    const RunOutcome a = run_algorithm(inst, surfaces, rs);
    const RunOutcome b = run_algorithm(inst, surfaces, rs);
    ok = same_result(a.result, b.result) && ok;
  }
  {
    GenConfig g;
    g.model = "pose6";
    g.n_world = 20;
    g.n_obs = 12;
    g.noise = 0.002;
    g.seed = 4;
    const ProblemInstance inst = generate_instance(g);
    const auto surfaces = build_surfaces(inst);
    const ModelVariant mv = instance_model(inst, surfaces);
    const auto& m = std::get<PinholePoseModel>(mv);
    const Tolerance tol(std::vector<double>{0.08, 0.25, 0.25, 0.25, 0.08, 0.08});
    ok = threads_invariant(m, surfaces, tol) && ok;
  }
  CHECK(ok);
  report(6, ok, "vote results, ids, counters and runner-up lists are bit-identical for "
                "threads {1,8} and across reruns");
}

TEST_CASE("criterion 7: sampling iteration formula against the frozen table") {
  struct Row {
    double b;
    int k;
    double conf;
    std::uint64_t want;
  };
  const std::vector<Row> table = {
      {0.5, 2, 0.99, 17},
      {0.04, 2, 0.99, 2876},
      {1.0, 3, 0.99, 1},
      {0.1, 4, 0.99, 46050},
      {0.02, 8, 0.999, 269834190585237},
      {0.3, 2, 0.99, 49},
      {0.25, 4, 0.999, 1765},
      {0.01, 2, 0.9, 23025},
      {0.5, 7, 0.999999, 1762},
  };
  bool ok = true;
  for (const Row& r : table) {
    const std::uint64_t got = ransac_iterations(r.b, r.k, r.conf);
    INFO("b=" << r.b << " k=" << r.k << " conf=" << r.conf << " got=" << got);
    CHECK(got == r.want);
    ok = ok && got == r.want;
  }
  report(7, ok, "trial-count formula matches the independent table to exact integers");
}
