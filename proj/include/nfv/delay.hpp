#pragma once

#include "nfv/model.hpp"

namespace nfv {

struct DelayBreakdown {
  double hypervisor = 0;  // d_r^hyp
  double instance = 0;    // d_r^ins
  double link = 0;        // d_r^link
  double total() const { return hypervisor + instance + link; }
};

enum class DelayMode {
  Queuing,  // M/M/1 at hypervisors and instances
  Fixed,    // constant per-node delay, no instance term (baseline comparison)
};

struct DelayOptions {
  DelayMode mode = DelayMode::Queuing;
  // Stability margin: a queue is treated as unstable once
  // lambda >= mu - eps_stab_factor * mu.
  double eps_stab_factor = 1e-6;
  double fixed_node_delay = 3e-6;  // d_n in fixed mode
};

inline DelayOptions scenario_delay_options(const Scenario& s) {
  DelayOptions o;
  o.mode = s.fixed_delay ? DelayMode::Fixed : DelayMode::Queuing;
  o.fixed_node_delay = s.fixed_node_delay;
  return o;
}

// 1/(mu - lambda). Throws InstabilityError when lambda crosses the margin.
double mm1_delay(double mu, double lambda, double eps_stab_factor = 1e-6);

double node_delay(const Scenario& s, int n, const DerivedLoads& loads,
                  const DelayOptions& opt = {});
double instance_delay(const Scenario& s, int t, int i, const DerivedLoads& loads,
                      const DelayOptions& opt = {});

// Per-chain delay aggregation: hypervisor charged once per touched node,
// instance delay per VNF, link delay as the delay-weighted flow split.
// Requires the chain accepted and all its VNFs mapped to placed instances.
DelayBreakdown chain_delay(const Scenario& s, const Deployment& d, int r,
                           const DelayOptions& opt = {});
DelayBreakdown chain_delay(const Scenario& s, const Deployment& d, int r,
                           const DerivedLoads& loads, const DelayOptions& opt = {});

}  // namespace nfv
