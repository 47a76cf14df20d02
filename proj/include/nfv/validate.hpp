#pragma once

#include <string>
#include <vector>

#include "nfv/delay.hpp"
#include "nfv/model.hpp"

namespace nfv {

struct EconomicReport {
  double revenue = 0;
  double node_activation_cost = 0;
  double license_cost = 0;
  double bandwidth_cost = 0;
  double total_cost() const {
    return node_activation_cost + license_cost + bandwidth_cost;
  }
  double gain() const { return revenue - total_cost(); }
};

struct Violation {
  std::string constraint;  // e.g. "eq27", "eq46", "stability", "structure"
  std::string location;
  double magnitude = 0;
};

struct ViolationReport {
  std::vector<Violation> entries;
  bool feasible() const { return entries.empty(); }
  std::string to_string() const;
};

struct ValidateOptions {
  DelayOptions delay;
  // Node activation charging: per-node (default) or the literal per-chain
  // sigma_n * alpha_n^r reading.
  bool per_chain_sigma = false;
  double flow_tol = 1e-9;   // absolute slack on flows and loads
  double delay_tol = 1e-9;  // absolute slack on delays, seconds
};

// Checks every model constraint; violations are data, not failures.
ViolationReport validate(const Scenario& s, const Deployment& d,
                         const ValidateOptions& opt = {});

// Per-chain threshold check over precomputed delay triples; the same routine
// validate() uses internally for the end-to-end delay constraint.
void check_delay_thresholds(const std::vector<DelayBreakdown>& breakdowns,
                            const std::vector<double>& thresholds,
                            const std::vector<std::string>& chain_ids,
                            double delay_tol, ViolationReport& out);

EconomicReport economics(const Scenario& s, const Deployment& d,
                         const ValidateOptions& opt = {});

}  // namespace nfv
