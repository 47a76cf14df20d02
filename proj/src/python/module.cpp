#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nfv/absa.hpp"
#include "nfv/errors.hpp"
#include "nfv/delay.hpp"
#include "nfv/exact.hpp"
#include "nfv/harness.hpp"
#include "nfv/mldg.hpp"
#include "nfv/scenario_io.hpp"
#include "nfv/validate.hpp"

namespace py = pybind11;
using namespace nfv;

namespace {

py::dict result_dict(const Scenario& s, const Deployment& d,
                     const ValidateOptions& vopt) {
  EconomicReport eco = economics(s, d, vopt);
  py::list accepted;
  int count = 0;
  for (size_t r = 0; r < s.requests.size(); ++r)
    if (d.accepted[r]) {
      accepted.append(s.requests[r].id);
      ++count;
    }
  py::dict out;
  out["gain"] = eco.gain();
  out["revenue"] = eco.revenue;
  out["node_activation_cost"] = eco.node_activation_cost;
  out["license_cost"] = eco.license_cost;
  out["bandwidth_cost"] = eco.bandwidth_cost;
  out["accepted"] = accepted;
  out["acceptance_rate"] =
      s.requests.empty() ? 0.0 : (double)count / (double)s.requests.size();
  out["deployment_json"] = deployment_to_json(s, d);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Service-function-chain placement core";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure",
                                           PyExc_ArithmeticError);

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_json", &parse_scenario, py::arg("text"))
      .def_static("from_file", &load_scenario, py::arg("path"))
      .def_static(
          "generate",
          [](const std::string& topology, unsigned seed, int num_sfcs,
             int sfc_length, double theta, double flow_rate, double revenue,
             double delay_threshold, const std::string& graphml_path) {
            ScenarioTemplate t;
            t.topology = topology;
            t.num_sfcs = num_sfcs;
            t.sfc_length = sfc_length;
            t.theta = theta;
            t.flow_rate = flow_rate;
            t.revenue = revenue;
            t.delay_threshold = delay_threshold;
            t.graphml_path = graphml_path;
            return generate_scenario(t, seed);
          },
          py::arg("topology"), py::arg("seed") = 0, py::arg("num_sfcs") = 5,
          py::arg("sfc_length") = -1, py::arg("theta") = 0.7,
          py::arg("flow_rate") = -1, py::arg("revenue") = -1,
          py::arg("delay_threshold") = -1, py::arg("graphml_path") = "")
      .def("to_json", &scenario_to_json)
      .def("save", &save_scenario, py::arg("path"))
      .def_property_readonly(
          "num_requests",
          [](const Scenario& s) { return s.requests.size(); })
      .def_property_readonly(
          "num_nodes",
          [](const Scenario& s) { return s.substrate.nodes.size(); })
      .def_readwrite("theta", &Scenario::theta)
      .def("__repr__", [](const Scenario& s) {
        return "<Scenario " + std::to_string(s.substrate.nodes.size()) +
               " nodes, " + std::to_string(s.requests.size()) + " chains>";
      });

  m.def(
      "run_mldg",
      [](const Scenario& s) {
        MldgResult r = run_mldg(s);
        ValidateOptions vopt;
        vopt.delay = scenario_delay_options(s);
        py::dict out = result_dict(s, r.deployment, vopt);
        out["resolves"] = r.resolves;
        out["numerical_issue"] = r.numerical_issue;
        py::list eta;
        for (int e : r.plan.eta) eta.append(e);
        out["eta"] = eta;
        return out;
      },
      py::arg("scenario"));

  m.def(
      "run_absa",
      [](const Scenario& s, double initial_temperature, double cooling_rate,
         int lambda_param, int max_iterations, unsigned seed) {
        AnnealConfig cfg;
        cfg.initial_temperature = initial_temperature;
        cfg.cooling_rate = cooling_rate;
        cfg.lambda_param = lambda_param;
        cfg.max_iterations = max_iterations;
        cfg.seed = seed;
        AbsaResult r = run_absa(s, cfg);
        ValidateOptions vopt;
        vopt.delay.mode = DelayMode::Fixed;
        vopt.delay.fixed_node_delay = s.fixed_node_delay;
        py::dict out = result_dict(s, r.deployment, vopt);
        out["iterations"] = r.iterations;
        return out;
      },
      py::arg("scenario"), py::arg("initial_temperature") = 1000.0,
      py::arg("cooling_rate") = 0.05, py::arg("lambda_param") = 3,
      py::arg("max_iterations") = 1500, py::arg("seed") = 0);

  m.def(
      "solve_exact",
      [](const Scenario& s, double gap, double time_limit) {
        ExactResult r = solve_exact(s, gap, time_limit);
        ValidateOptions vopt;
        vopt.delay = scenario_delay_options(s);
        py::dict out = result_dict(s, r.deployment, vopt);
        out["bound"] = r.bound;
        out["gap"] = r.gap;
        out["nodes_explored"] = r.nodes_explored;
        out["timed_out"] = r.timed_out;
        return out;
      },
      py::arg("scenario"), py::arg("gap") = 0.0, py::arg("time_limit") = 0.0);

  m.def(
      "enumerate_exact",
      [](const Scenario& s) {
        ExactResult r = enumerate_exact(s);
        ValidateOptions vopt;
        vopt.delay = scenario_delay_options(s);
        py::dict out = result_dict(s, r.deployment, vopt);
        out["combinations"] = r.combinations;
        return out;
      },
      py::arg("scenario"));

  m.def(
      "validate_deployment",
      [](const Scenario& s, const std::string& deployment_path) {
        Deployment d = load_deployment(s, deployment_path);
        ValidateOptions vopt;
        vopt.delay = scenario_delay_options(s);
        ViolationReport vr = validate(s, d, vopt);
        py::list violations;
        for (const auto& v : vr.entries) {
          py::dict e;
          e["constraint"] = v.constraint;
          e["location"] = v.location;
          e["magnitude"] = v.magnitude;
          violations.append(e);
        }
        py::dict out;
        out["feasible"] = vr.feasible();
        out["violations"] = violations;
        if (vr.feasible()) out["gain"] = economics(s, d, vopt).gain();
        return out;
      },
      py::arg("scenario"), py::arg("deployment_path"));
}
