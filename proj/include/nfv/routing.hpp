#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nfv/delay.hpp"
#include "nfv/model.hpp"

namespace nfv {

struct RoutingResult {
  bool feasible = false;
  // delta: [r][virtual link] -> (physical link, fraction); empty for rejected
  // chains and for virtual links whose endpoints share a node
  std::vector<std::vector<std::vector<std::pair<int, double>>>> flow_split;
  std::vector<double> allocated_bw;  // per physical link
  double bandwidth_cost = 0;
};

// Minimum-bandwidth-cost routing of all accepted chains at once: given each
// chain's VNF-to-node mapping (empty vector = rejected), split every virtual
// link's unit flow over physical links subject to flow conservation, shared
// link capacities, and a per-chain budget on the flow-weighted propagation
// delay. Returned flows are cleaned by path decomposition, so conservation
// holds to machine precision and no flow runs in cycles.
RoutingResult route_chains(const Scenario& s,
                           const std::vector<std::vector<int>>& vnf_node,
                           const std::vector<double>& delay_budget);

// Decompose a conservation-feasible unit flow from `src` to `dst` into simple
// paths, dropping cycles and renormalizing so the fractions sum to exactly 1.
// `flow` holds (physical link, fraction) entries. Returns the cleaned split;
// empty when src == dst or decomposition recovers no throughput.
std::vector<std::pair<int, double>> decompose_flow(
    const SubstrateNetwork& net, int src, int dst,
    const std::vector<std::pair<int, double>>& flow);

// Finish an integral (A, s, p) decision in place: check queue caps, compute
// exact delays, route flows at minimum bandwidth cost within the exact
// per-chain budgets, and validate. Returns the deployment's gain, or nullopt
// when the decision is infeasible.
std::optional<double> finalize_deployment(const Scenario& s,
                                          const DelayOptions& delay,
                                          Deployment& d);

}  // namespace nfv
