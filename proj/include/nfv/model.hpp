#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nfv/errors.hpp"

namespace nfv {

// Physical server. Rates are traffic-units/second, capacities in cores/GB.
struct PhysicalNode {
  std::string id;
  double cpu_capacity = 0;      // theta_n^CPU
  double mem_capacity = 0;      // theta_n^mem
  double strg_capacity = 0;     // theta_n^strg
  double hypervisor_rate = 0;   // mu_n
  double activation_cost = 0;   // sigma_n
};

// Directed physical link; undirected input edges expand to two of these.
struct PhysicalLink {
  int from = -1;
  int to = -1;
  double capacity = 0;          // theta_(n,m)
  double prop_delay = 0;        // d_(n,m), seconds
};

struct SubstrateNetwork {
  std::vector<PhysicalNode> nodes;
  std::vector<PhysicalLink> links;
  double bandwidth_fee = 0;     // rho, money per traffic-unit

  int node_index(const std::string& id) const;
  // Directed link lookup; -1 if absent.
  int link_index(int from, int to) const;
  void check() const;           // referential integrity + invariants

  // Outgoing/incoming link ids per node, built lazily by check().
  std::vector<std::vector<int>> out_links, in_links;
};

struct VnfType {
  std::string id;
  double cpu_req = 0;
  double mem_req = 0;
  double strg_req = 0;
  double service_rate = 0;      // mu_t
  double license_cost = 0;      // C_t
  int max_instances = 0;        // |I_t|; 0 means "derive from sizing plan"
};

struct SfcRequest {
  std::string id;
  std::vector<int> vnf_types;          // type indices, chain order
  double flow_rate = 0;                // f_r
  std::vector<double> link_bandwidths; // w_(u,u+1)^r, size = len-1
  double revenue = 0;
  double delay_threshold = 0;          // d_r^th, seconds
};

struct Scenario {
  SubstrateNetwork substrate;
  std::vector<VnfType> types;
  std::vector<SfcRequest> requests;
  double theta = 0.7;
  // Delay accounting for this scenario's experiments: M/M/1 queuing (default)
  // or the baseline-comparison constant per-node delay.
  bool fixed_delay = false;
  double fixed_node_delay = 3e-6;

  int type_index(const std::string& id) const;
  void check() const;

  double total_traffic() const;  // sum_r f_r * |N_v^r|, the generic big-M
  double max_threshold() const;
};

struct InstanceRef {
  int type = -1;
  int index = -1;
  bool valid() const { return type >= 0 && index >= 0; }
};

// The complete decision. Instance indices are dense per type; the number of
// instances in play is instance_node[t].size().
struct Deployment {
  std::vector<char> accepted;                       // A_r
  std::vector<std::vector<InstanceRef>> vnf_map;    // s: [r][u]
  std::vector<std::vector<int>> instance_node;      // p: [t][i] -> node, -1 unplaced
  // delta: [r][virtual link u] -> (physical link, fraction)
  std::vector<std::vector<std::vector<std::pair<int, double>>>> flow_split;
  std::vector<double> allocated_bw;                 // bw per physical link

  static Deployment empty(const Scenario& s);
  bool is_empty() const;
};

struct DerivedLoads {
  std::vector<std::vector<double>> instance_load;   // lambda_{i,t}: [t][i]
  std::vector<double> node_load;                    // lambda_n
  std::vector<std::vector<char>> node_touched;      // alpha_n^r: [r][n]
  std::vector<std::vector<int>> vnf_on_node;        // [r][u] -> node or -1
  std::vector<std::vector<char>> instance_active;   // x_t^i: [t][i]

  // y_n^{i,t}: lambda_{i,t} when the instance sits on n, else 0.
  double node_instance_flow(int n, int t, int i, const Deployment& d) const {
    if (t < 0 || t >= (int)instance_load.size() ||
        i < 0 || i >= (int)instance_load[t].size())
      throw ReferenceError("node_instance_flow: unknown instance");
    return d.instance_node[t][i] == n ? instance_load[t][i] : 0.0;
  }
};

// Eq-style load accounting: lambda_{i,t} = sum of f_r over VNFs mapped to
// (t,i); lambda_n = sum of instance loads hosted on n. Pure function.
DerivedLoads derive_loads(const Scenario& s, const Deployment& d);

}  // namespace nfv
