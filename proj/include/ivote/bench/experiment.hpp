#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ivote/baselines/branch_and_bound.hpp"
#include "ivote/baselines/ransac.hpp"
#include "ivote/core/generalized.hpp"
#include "ivote/core/naive.hpp"
#include "ivote/data/generate.hpp"
#include "ivote/data/instance.hpp"

namespace ivote {

// One algorithm invocation. eps is the uniform per-axis tolerance in the
// normalized space (eps_axes overrides it per axis when non-empty).
struct RunSpec {
  std::string algo = "gv";  // naive | gv | bnb | ransac
  double eps = 0.05;
  std::vector<double> eps_axes;
  double eps_prime_scale = 0.0;
  int threads = 1;
  bool prune = false;
  double canonize_gate = 1.0;
  std::uint64_t max_cells = std::uint64_t(1) << 28;  // dense-scan guard
  RansacConfig ransac;
};

struct RunOutcome {
  std::string algo;
  std::string model;
  double sweep_value = 0.0;
  double eps_min = 0.0;
  VoteResult result;
  double wall_ms = 0.0;
  std::size_t n_items = 0;
};

inline Tolerance run_tolerance(const RunSpec& spec, int d) {
  std::vector<double> eps = spec.eps_axes;
  if (eps.empty()) eps.assign(d, spec.eps);
  if (static_cast<int>(eps.size()) != d)
    throw std::invalid_argument("eps axis count does not match model dimension");
  return Tolerance(std::move(eps), spec.eps_prime_scale);
}

inline RunOutcome run_algorithm(const ProblemInstance& inst,
                                const std::vector<ParametricSurface>& surfaces,
                                const RunSpec& spec) {
  const ModelVariant mv = instance_model(inst, surfaces, spec.eps_prime_scale);
  const Tolerance tol = run_tolerance(spec, inst.d);
  const Box box = Box::unit(inst.d);

  RunOutcome out;
  out.algo = spec.algo;
  out.model = inst.model;
  out.n_items = inst.items.size();
  out.eps_min = tol.eps[0];
  for (double e : tol.eps) out.eps_min = std::min(out.eps_min, e);

  const auto start = std::chrono::steady_clock::now();
  if (spec.algo == "naive") {
    std::visit([&](const auto& m) { out.result = naive_vote(m, surfaces, box, tol, spec.max_cells); },
               mv);
  } else if (spec.algo == "gv") {
    GeneralizedConfig cfg;
    cfg.canonize = true;
    cfg.prune = spec.prune;
    cfg.threads = spec.threads;
    cfg.canonize_gate = spec.canonize_gate;
    std::visit([&](const auto& m) { out.result = generalized_vote(m, surfaces, box, tol, cfg); },
               mv);
  } else if (spec.algo == "bnb") {
    std::visit(
        [&](const auto& m) { out.result = branch_and_bound_vote(m, surfaces, box, tol, spec.threads); },
        mv);
  } else if (spec.algo == "ransac") {
    const auto* lin = std::get_if<LinearGraphModel>(&mv);
    if (!lin)
      throw std::invalid_argument("ransac needs a family linear in its parameters (line2, hyperplane, sim2)");
    out.result = ransac_fit(*lin, surfaces, box, tol, spec.ransac);
  } else {
    throw std::invalid_argument("unknown algorithm: " + spec.algo);
  }
  const auto stop = std::chrono::steady_clock::now();
  out.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return out;
}

// Sweep one generator knob (n or eps), rerunning every RunSpec at each value.
// Sweeping n regenerates the instance per value; sweeping eps reuses it.
struct SweepSpec {
  std::string param = "n";  // n | eps
  std::vector<double> values;
  GenConfig gen;
  std::vector<RunSpec> runs;
};

inline std::vector<RunOutcome> run_sweep(const SweepSpec& sweep) {
  if (sweep.param != "n" && sweep.param != "eps")
    throw std::invalid_argument("sweep parameter must be 'n' or 'eps'");
  std::vector<RunOutcome> out;
  for (double value : sweep.values) {
    GenConfig g = sweep.gen;
    if (sweep.param == "n") g.n = static_cast<std::size_t>(value);
    const ProblemInstance inst = generate_instance(g);
    const std::vector<ParametricSurface> surfaces = build_surfaces(inst);
    for (const RunSpec& base : sweep.runs) {
      RunSpec spec = base;
      if (sweep.param == "eps") {
        spec.eps = value;
        spec.eps_axes.clear();
      }
      RunOutcome o = run_algorithm(inst, surfaces, spec);
      o.sweep_value = value;
      out.push_back(std::move(o));
    }
  }
  return out;
}

// Fixed column set; downstream tooling keys on these names.
inline const char* csv_header() {
  return "sweep_value,algo,model,eps_min,count,box_intersection_calls,"
         "surface_evaluations,cells_touched,wall_ms,truncated";
}

inline void write_csv(std::ostream& os, const std::vector<RunOutcome>& rows) {
  os << csv_header() << '\n';
  for (const RunOutcome& r : rows) {
    os << r.sweep_value << ',' << r.algo << ',' << r.model << ',' << r.eps_min << ','
       << r.result.count << ',' << r.result.ops.box_intersection_calls << ','
       << r.result.ops.surface_evaluations << ',' << r.result.ops.cells_touched << ','
       << r.wall_ms << ',' << (r.result.truncated ? 1 : 0) << '\n';
  }
}

}  // namespace ivote
