#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nfv/absa.hpp"
#include "nfv/model.hpp"

namespace nfv {

// Built-in scenario generators. "small6" is a fully disclosed 6-node topology
// for comparisons against the exact solver (queuing delays); "bteurope" is the
// 24-node European backbone with the fixed-delay baseline settings; "tiny" is
// a randomized scenario small enough for exhaustive enumeration; "graphml"
// imports an arbitrary topology and applies the bteurope-style workload.
struct ScenarioTemplate {
  std::string topology = "small6";  // small6 | bteurope | tiny | graphml
  std::string graphml_path;         // for topology == "graphml"
  int num_sfcs = 10;
  int sfc_length = -1;        // -1 = template default (small6: 3, bteurope: 4)
  double theta = 0.7;
  double flow_rate = -1;      // -1 = template default
  double revenue = -1;        // -1 = template rule
  double delay_threshold = -1;
};

Scenario generate_scenario(const ScenarioTemplate& tmpl, unsigned seed);

struct SweepSpec {
  std::string axis = "num_sfcs";  // num_sfcs | sfc_length | theta
  std::vector<double> values;
  std::vector<unsigned> seeds;
  std::vector<std::string> solvers;  // subset of {mldg, absa, exact}
  ScenarioTemplate tmpl;
  double gap = 0.05;        // exact-solver optimality gap
  double time_limit = 120;  // exact-solver per-run seconds, 0 = none
  AnnealConfig absa;        // seed field is overridden per run
  int jobs = 1;

  void check() const;
};

SweepSpec load_sweep_spec(const std::string& path);
SweepSpec parse_sweep_spec(const std::string& json_text);

struct RunRecord {
  std::string solver;
  double axis_value = 0;
  unsigned seed = 0;
  double gain = 0;
  double acceptance_rate = 0;
  double wall_time = 0;
  std::vector<double> delay_margins;  // per accepted chain, threshold - total
  bool failed = false;
  std::string error;
};

// One record per (solver, axis value, seed); deployments are validated before
// recording and failures become failed records, never aborts. When csv_path is
// non-empty, finished records append to it immediately and records already
// present in the file are skipped on restart.
std::vector<RunRecord> run_sweep(const SweepSpec& spec,
                                 const std::string& csv_path = "");

// Data rows plus per-(solver, axis value) aggregates (mean, stddev of gain and
// acceptance rate); failed rows carry status "failed" and are excluded from
// the aggregates. format: "csv" or "json".
void report(const std::vector<RunRecord>& records, const std::string& format,
            std::ostream& out, const std::string& axis = "");

}  // namespace nfv
