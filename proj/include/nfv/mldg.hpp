#pragma once

#include <vector>

#include "nfv/model.hpp"
#include "nfv/sp2cv.hpp"
#include "nfv/validate.hpp"

namespace nfv {

// Per-type instance counts from the capacity-scaled sizing rule:
// ceil(total traffic of the type / (theta * mu_t)); 0 for unrequested types.
struct SizingPlan {
  std::vector<int> eta;
  double theta = 0.7;
};

struct MldgOptions {
  Sp2Options sp2;
  // Shrink thresholds in the relaxation so rounded solutions survive exact
  // re-validation; negative = pick automatically from the delay mode.
  double threshold_margin = -1;
  // Cap on relaxation re-solves; once hit, remaining chains are rejected.
  // 0 = unlimited.
  int max_resolve = 0;
};

struct MldgResult {
  Deployment deployment;
  EconomicReport economics;
  SizingPlan plan;
  std::vector<std::vector<int>> placement;  // [t][i] -> node
  int resolves = 0;        // relaxation solves performed by the mapping stage
  bool numerical_issue = false;  // some chain was rejected on solver failure
};

SizingPlan size_instances(const Scenario& s);

// Most-connected-cluster placement: repeatedly open the spare node with the
// highest CPU capacity, seed it with the max-priority type, then greedily add
// the type with the highest adjacency to the cluster while capacity and the
// plan allow. Throws SubstrateExhausted when planned instances do not fit.
std::vector<std::vector<int>> place_instances(const Scenario& s,
                                              const SizingPlan& plan);

// Iterative rounding over the relaxation with the placement fixed: pick the
// most-integral unprocessed chain, tentatively accept it, round its largest
// fractional assignment one VNF at a time re-solving in between, and reject
// the chain when a re-solve turns infeasible. The returned deployment passes
// validate().
MldgResult map_chains(const Scenario& s,
                      const std::vector<std::vector<int>>& placement,
                      const MldgOptions& opt = {});

// size_instances -> place_instances -> map_chains.
MldgResult run_mldg(const Scenario& s, const MldgOptions& opt = {});

}  // namespace nfv
