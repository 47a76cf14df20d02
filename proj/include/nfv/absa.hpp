#pragma once

#include "nfv/model.hpp"
#include "nfv/validate.hpp"

namespace nfv {

struct AnnealConfig {
  double initial_temperature = 1000;
  double cooling_rate = 0.05;  // geometric schedule: T <- T * (1 - rate)
  int lambda_param = 3;        // candidate neighbors sampled per iteration
  int max_iterations = 1500;
  unsigned seed = 0;
};

struct AbsaResult {
  Deployment deployment;
  EconomicReport economics;
  long iterations = 0;
};

// Simulated-annealing baseline: per-chain VNF-to-node assignment with one
// dedicated instance per mapped VNF (no instance sharing), fixed-delay
// feasibility, shortest-propagation-delay routing during the search. Neighbor
// moves reassign one VNF or toggle one chain's acceptance; each iteration
// samples lambda_param candidates and Metropolis-accepts the best one. The
// best feasible state seen is returned and passes validate() in fixed-delay
// mode. Temperature 0 degrades to a strict hill-climber.
AbsaResult run_absa(const Scenario& s, const AnnealConfig& cfg = {});

}  // namespace nfv
