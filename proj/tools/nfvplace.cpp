#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nfv/absa.hpp"
#include "nfv/delay.hpp"
#include "nfv/errors.hpp"
#include "nfv/exact.hpp"
#include "nfv/harness.hpp"
#include "nfv/mldg.hpp"
#include "nfv/scenario_io.hpp"
#include "nfv/validate.hpp"

using nlohmann::json;
using namespace nfv;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

int cmd_solve(const std::string& path, const std::string& solver, double theta,
              double gap, double time_limit, bool enumerate_all,
              const AnnealConfig& absa_cfg, const std::string& out_path) {
  Scenario s = load_scenario(path);
  if (theta > 0) s.theta = theta;

  Deployment d;
  ValidateOptions vopt;
  vopt.delay = scenario_delay_options(s);
  auto t0 = std::chrono::steady_clock::now();
  if (solver == "mldg") {
    d = run_mldg(s).deployment;
  } else if (solver == "absa") {
    d = run_absa(s, absa_cfg).deployment;
    vopt.delay.mode = DelayMode::Fixed;
    vopt.delay.fixed_node_delay = s.fixed_node_delay;
  } else if (solver == "exact") {
    d = (enumerate_all ? enumerate_exact(s) : solve_exact(s, gap, time_limit))
            .deployment;
  } else {
    std::cerr << "unknown solver: " << solver << "\n";
    return kUsage;
  }
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  ViolationReport vr = validate(s, d, vopt);
  if (!vr.feasible()) {
    for (const auto& v : vr.entries)
      std::cerr << v.constraint << " @ " << v.location << " by " << v.magnitude << "\n";
    return kInfeasible;
  }
  EconomicReport eco = economics(s, d, vopt);
  int accepted = 0;
  json acc_ids = json::array();
  for (int r = 0; r < (int)s.requests.size(); ++r)
    if (d.accepted[r]) {
      ++accepted;
      acc_ids.push_back(s.requests[r].id);
    }
  json out = {
      {"solver", solver},
      {"gain", eco.gain()},
      {"revenue", eco.revenue},
      {"node_activation_cost", eco.node_activation_cost},
      {"license_cost", eco.license_cost},
      {"bandwidth_cost", eco.bandwidth_cost},
      {"accepted", acc_ids},
      {"acceptance_rate",
       s.requests.empty() ? 0.0 : (double)accepted / (double)s.requests.size()},
      {"wall_time", wall}};
  std::cout << out.dump(2) << "\n";
  if (!out_path.empty()) save_deployment(s, d, out_path);
  return kOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& csv_path,
              int jobs, const std::string& report_path,
              const std::string& format) {
  SweepSpec spec = load_sweep_spec(spec_path);
  if (jobs > 0) spec.jobs = jobs;
  auto records = run_sweep(spec, csv_path);
  if (report_path.empty()) {
    report(records, format, std::cout, spec.axis);
  } else {
    std::ofstream out(report_path);
    if (!out) throw ParseError("cannot open report file: " + report_path);
    report(records, format, out, spec.axis);
  }
  bool any_failed = false;
  for (const auto& r : records) any_failed |= r.failed;
  return any_failed ? kInfeasible : kOk;
}

int cmd_gen(const ScenarioTemplate& tmpl, unsigned seed,
            const std::string& out_path) {
  Scenario s = generate_scenario(tmpl, seed);
  if (out_path.empty())
    std::cout << scenario_to_json(s) << "\n";
  else
    save_scenario(s, out_path);
  return kOk;
}

int cmd_validate(const std::string& scenario_path,
                 const std::string& deployment_path) {
  Scenario s = load_scenario(scenario_path);
  Deployment d = load_deployment(s, deployment_path);
  ValidateOptions vopt;
  vopt.delay = scenario_delay_options(s);
  ViolationReport vr = validate(s, d, vopt);
  json out = {{"feasible", vr.feasible()}, {"violations", json::array()}};
  for (const auto& v : vr.entries)
    out["violations"].push_back(
        {{"constraint", v.constraint}, {"location", v.location}, {"magnitude", v.magnitude}});
  if (vr.feasible()) out["gain"] = economics(s, d, vopt).gain();
  std::cout << out.dump(2) << "\n";
  return vr.feasible() ? kOk : kInfeasible;
}

int cmd_import(const std::string& graphml_path, const std::string& out_path) {
  SubstrateNetwork net = import_graphml(graphml_path, {});
  json out = {{"nodes", net.nodes.size()},
              {"links", net.links.size()},
              {"connected", is_connected(net)}};
  std::cout << out.dump(2) << "\n";
  if (!out_path.empty()) {
    Scenario s;
    s.substrate = std::move(net);
    save_scenario(s, out_path);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Service-function-chain placement toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, deployment_path, out_path, solver = "mldg";
  double theta = -1, gap = 0.05, time_limit = 0;
  bool enumerate_all = false;
  AnnealConfig absa_cfg;
  unsigned seed = 0;

  auto* solve = app.add_subcommand("solve", "Solve one scenario file");
  solve->add_option("scenario", scenario_path, "scenario JSON")->required();
  solve->add_option("--solver", solver, "mldg|absa|exact");
  solve->add_option("--theta", theta, "override capacity scale factor");
  solve->add_option("--gap", gap, "exact-solver optimality gap");
  solve->add_option("--time-limit", time_limit, "exact-solver seconds");
  solve->add_flag("--enumerate", enumerate_all, "exhaustive oracle");
  solve->add_option("--absa-temp", absa_cfg.initial_temperature);
  solve->add_option("--absa-cooling", absa_cfg.cooling_rate);
  solve->add_option("--absa-lambda", absa_cfg.lambda_param);
  solve->add_option("--seed", seed, "annealing seed");
  solve->add_option("--out", out_path, "write deployment JSON");

  std::string spec_path, csv_path, report_path, format = "csv";
  int jobs = 0;
  if (const char* env = std::getenv("NFVPLACE_JOBS")) jobs = std::atoi(env);
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  sweep->add_option("spec", spec_path, "sweep spec JSON")->required();
  sweep->add_option("--csv", csv_path, "crash-safe record file (resumes)");
  sweep->add_option("--jobs", jobs, "parallel runs");
  sweep->add_option("--report", report_path, "report file (default stdout)");
  sweep->add_option("--format", format, "csv|json");

  ScenarioTemplate tmpl;
  auto* gen = app.add_subcommand("gen", "Generate a scenario from a template");
  gen->add_option("template", tmpl.topology, "small6|bteurope|tiny|graphml")
      ->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--num-sfcs", tmpl.num_sfcs);
  gen->add_option("--sfc-length", tmpl.sfc_length);
  gen->add_option("--theta", tmpl.theta);
  gen->add_option("--flow", tmpl.flow_rate);
  gen->add_option("--revenue", tmpl.revenue);
  gen->add_option("--threshold", tmpl.delay_threshold);
  gen->add_option("--graphml", tmpl.graphml_path, "topology for 'graphml'");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* val = app.add_subcommand("validate", "Validate a deployment");
  val->add_option("scenario", scenario_path)->required();
  val->add_option("deployment", deployment_path)->required();

  auto* imp = app.add_subcommand("import-topo", "Import a GraphML topology");
  imp->add_option("graphml", scenario_path)->required();
  imp->add_option("--out", out_path, "write substrate-only scenario JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    absa_cfg.seed = seed;
    if (solve->parsed())
      return cmd_solve(scenario_path, solver, theta, gap, time_limit,
                       enumerate_all, absa_cfg, out_path);
    if (sweep->parsed())
      return cmd_sweep(spec_path, csv_path, jobs, report_path, format);
    if (gen->parsed()) return cmd_gen(tmpl, seed, out_path);
    if (val->parsed()) return cmd_validate(scenario_path, deployment_path);
    if (imp->parsed()) return cmd_import(scenario_path, out_path);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const InstabilityError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
