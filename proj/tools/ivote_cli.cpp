// ivote: generate benchmark instances, run voting algorithms on them, and
// compare operation counts across a sweep.
//
// Exit codes: 0 success, 1 run/verify failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ivote/ivote.hpp"

namespace {

using nlohmann::json;

// Generator knobs shared by gen / run / sweep / verify.
struct GenCli {
  ivote::GenConfig cfg;
  CLI::Option* model_opt = nullptr;

  void attach(CLI::App* a) {
    model_opt = a->add_option("--model", cfg.model, "model tag (see `ivote gen --help`)")
                    ->capture_default_str();
    a->add_option("-n,--items", cfg.n, "number of items")->capture_default_str();
    a->add_option("-d,--dim", cfg.d, "ambient dimension (hyperplane only)")->capture_default_str();
    a->add_option("--inlier-fraction", cfg.inlier_fraction, "planted inlier fraction")
        ->capture_default_str();
    a->add_option("--noise", cfg.noise, "observation noise amplitude")->capture_default_str();
    a->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
    a->add_option("--n-world", cfg.n_world, "pose families: world point count")
        ->capture_default_str();
    a->add_option("--n-obs", cfg.n_obs, "pose families: observation count")->capture_default_str();
    a->add_option("--rot-half", cfg.rot_half, "pose families: rotation search half-width (rad)")
        ->capture_default_str();
    a->add_option("--rot-max", cfg.rot_max, "pose families: planted rotation bound (rad)")
        ->capture_default_str();
  }
};

// Algorithm knobs shared by run / sweep / verify.
struct RunCli {
  ivote::RunSpec spec;

  void attach(CLI::App* a) {
    a->add_option("--algo", spec.algo, "naive | gv | bnb | ransac")->capture_default_str();
    a->add_option("--eps", spec.eps, "uniform tolerance in normalized space")
        ->capture_default_str();
    a->add_option("--eps-axis", spec.eps_axes, "per-axis tolerances (overrides --eps)")
        ->delimiter(',');
    a->add_option("--eps-prime-scale", spec.eps_prime_scale,
                  "canonization tolerance scale c (0 = model default)")
        ->capture_default_str();
    a->add_option("--threads", spec.threads, "worker threads (env IVOTE_THREADS overrides)")
        ->capture_default_str();
    a->add_flag("--prune", spec.prune, "prune subtrees that cannot beat the incumbent");
    a->add_option("--gate", spec.canonize_gate,
                  "canonize only when items exceed gate * canonical capacity")
        ->capture_default_str();
    a->add_option("--max-cells", spec.max_cells, "naive dense-grid cell cap")
        ->capture_default_str();
    a->add_option("--ransac-b", spec.ransac.inlier_fraction, "ransac: assumed inlier fraction")
        ->capture_default_str();
    a->add_option("--ransac-confidence", spec.ransac.confidence, "ransac: success confidence")
        ->capture_default_str();
    a->add_option("--ransac-seed", spec.ransac.seed, "ransac: sampling seed")
        ->capture_default_str();
    a->add_option("--ransac-max-iters", spec.ransac.max_iterations, "ransac: executed-trial cap")
        ->capture_default_str();
  }

  void apply_env() {
    if (const char* env = std::getenv("IVOTE_THREADS")) {
      const int t = std::atoi(env);
      if (t > 0) spec.threads = t;
    }
  }
};

ivote::ProblemInstance load_or_generate(const std::string& input, const GenCli& gen) {
  if (!input.empty()) return ivote::load_instance(input);
  if (gen.model_opt == nullptr || gen.model_opt->count() == 0)
    throw std::invalid_argument("need an instance: pass -i FILE or --model TAG");
  return ivote::generate_instance(gen.cfg);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

json outcome_json(const ivote::ProblemInstance& inst, const ivote::RunOutcome& out,
                  const ivote::Tolerance& tol) {
  const ivote::VoteResult& res = out.result;
  json j;
  j["model"] = out.model;
  j["algo"] = out.algo;
  j["n_items"] = out.n_items;
  j["eps_min"] = out.eps_min;
  j["count"] = res.count;
  j["point"] = res.point;
  j["inlier_ids"] = res.inlier_ids;
  j["truncated"] = res.truncated;
  j["wall_ms"] = out.wall_ms;
  j["ops"] = {{"box_intersection_calls", res.ops.box_intersection_calls},
              {"surface_evaluations", res.ops.surface_evaluations},
              {"cells_touched", res.ops.cells_touched},
              {"total", ivote::total_ops(res.ops)}};
  if (!inst.truth.empty()) {
    double worst = 0.0;
    for (int a = 0; a < inst.d; ++a)
      worst = std::max(worst, std::fabs(res.point[a] - inst.truth[a]) / tol.eps[a]);
    j["truth"] = {{"point", inst.truth},
                  {"planted", inst.truth_ids.size()},
                  {"worst_axis_err_eps", worst}};
  }
  return j;
}

int cmd_gen(const GenCli& gen, const std::string& out_path) {
  const ivote::ProblemInstance inst = ivote::generate_instance(gen.cfg);
  ivote::save_instance(inst, out_path);
  std::cout << "wrote " << out_path << ": " << inst.model << ", " << inst.items.size()
            << " items, seed " << inst.seed << "\n";
  return 0;
}

int cmd_run(const std::string& input, const GenCli& gen, RunCli& run, const std::string& out_path) {
  run.apply_env();
  const ivote::ProblemInstance inst = load_or_generate(input, gen);
  const std::vector<ivote::ParametricSurface> surfaces = ivote::build_surfaces(inst);
  const ivote::RunOutcome out = ivote::run_algorithm(inst, surfaces, run.spec);
  const ivote::Tolerance tol = ivote::run_tolerance(run.spec, inst.d);
  std::ofstream file;
  open_output(out_path, file) << outcome_json(inst, out, tol).dump(2) << "\n";
  return 0;
}

int cmd_sweep(const GenCli& gen, RunCli& run, const std::string& param,
              const std::vector<double>& values, const std::vector<std::string>& algos,
              const std::string& out_path) {
  run.apply_env();
  ivote::SweepSpec sweep;
  sweep.param = param;
  sweep.values = values;
  sweep.gen = gen.cfg;
  for (const std::string& algo : algos) {
    ivote::RunSpec spec = run.spec;
    spec.algo = algo;
    sweep.runs.push_back(std::move(spec));
  }
  const std::vector<ivote::RunOutcome> rows = ivote::run_sweep(sweep);
  std::ofstream file;
  ivote::write_csv(open_output(out_path, file), rows);
  return 0;
}

int cmd_verify(const std::string& input, const GenCli& gen, RunCli& run,
               const ivote::VerifySpec& vspec, double angular_tol) {
  run.apply_env();
  const ivote::ProblemInstance inst = load_or_generate(input, gen);
  const std::vector<ivote::ParametricSurface> surfaces = ivote::build_surfaces(inst);
  const ivote::RunOutcome out = ivote::run_algorithm(inst, surfaces, run.spec);
  const ivote::Tolerance tol = ivote::run_tolerance(run.spec, inst.d);
  const ivote::VerifyReport rep = ivote::verify_result(inst, out.result, tol, vspec);
  std::cout << "model " << inst.model << ", algo " << out.algo << ", count " << rep.count
            << " / planted " << rep.planted << "\n";
  std::cout << "located: " << (rep.located ? "yes" : "no") << " (worst axis err "
            << rep.worst_axis_err << " eps, limit " << vspec.tol_mult << ")\n";
  bool pass = rep.pass;
  if (angular_tol > 0.0) {
    const std::size_t hits =
        ivote::count_angular_inliers(inst, out.result.point, angular_tol, &out.result.inlier_ids);
    const bool angular_ok =
        static_cast<double>(hits) >= vspec.min_fraction * static_cast<double>(rep.planted);
    std::cout << "angular inliers (tol " << angular_tol << " rad): " << hits << " / "
              << rep.planted << "\n";
    pass = pass && angular_ok;
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_compare(const std::string& input, const std::string& focus) {
  std::vector<ivote::OpsSample> samples;
  if (input.empty() || input == "-") {
    samples = ivote::read_csv_samples(std::cin);
  } else {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open input file: " + input);
    samples = ivote::read_csv_samples(in);
  }
  ivote::write_compare_table(std::cout, ivote::compare_rows(samples), focus);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inlier voting over parametric surface families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ivote 1.0.0");

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance file");
  GenCli gen_gen;
  gen_gen.attach(gen_cmd);
  std::string gen_out;
  gen_cmd->add_option("-o,--output", gen_out, "instance file to write")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "run one algorithm, print a JSON report");
  GenCli run_gen;
  RunCli run_run;
  std::string run_in, run_out;
  run_cmd->add_option("-i,--input", run_in, "instance file (else --model generates one)");
  run_gen.attach(run_cmd);
  run_run.attach(run_cmd);
  run_cmd->add_option("-o,--output", run_out, "report file (default stdout)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "rerun algorithms over a knob sweep, emit CSV");
  GenCli sweep_gen;
  RunCli sweep_run;
  std::string sweep_param = "n", sweep_out;
  std::vector<double> sweep_values;
  std::vector<std::string> sweep_algos{"naive", "gv"};
  sweep_cmd->add_option("--param", sweep_param, "swept knob: n | eps")->capture_default_str();
  sweep_cmd->add_option("--values", sweep_values, "swept values")->required()->delimiter(',');
  sweep_cmd->add_option("--algos", sweep_algos, "algorithms to rerun at each value")
      ->capture_default_str()
      ->delimiter(',');
  sweep_gen.attach(sweep_cmd);
  sweep_run.attach(sweep_cmd);
  sweep_cmd->add_option("-o,--output", sweep_out, "CSV file (default stdout)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run and check against planted truth");
  GenCli verify_gen;
  RunCli verify_run;
  ivote::VerifySpec vspec;
  std::string verify_in;
  double angular_tol = 0.0;
  verify_cmd->add_option("-i,--input", verify_in, "instance file (else --model generates one)");
  verify_gen.attach(verify_cmd);
  verify_run.attach(verify_cmd);
  verify_cmd->add_option("--tol-mult", vspec.tol_mult, "pass when within tol_mult * eps per axis")
      ->capture_default_str();
  verify_cmd->add_option("--min-fraction", vspec.min_fraction, "required fraction of planted count")
      ->capture_default_str();
  verify_cmd->add_option("--angular", angular_tol,
                         "pose6/pose7: also require angular reprojection inliers (radians)");

  CLI::App* compare_cmd = app.add_subcommand("compare", "summarize a sweep CSV by cheapest algo");
  std::string compare_in, compare_focus = "gv";
  compare_cmd->add_option("-i,--input", compare_in, "sweep CSV ('-' or empty reads stdin)");
  compare_cmd->add_option("--focus", compare_focus, "algorithm to report the crossover for")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen_gen, gen_out);
    if (run_cmd->parsed()) return cmd_run(run_in, run_gen, run_run, run_out);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_gen, sweep_run, sweep_param, sweep_values, sweep_algos, sweep_out);
    if (verify_cmd->parsed()) return cmd_verify(verify_in, verify_gen, verify_run, vspec, angular_tol);
    if (compare_cmd->parsed()) return cmd_compare(compare_in, compare_focus);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
