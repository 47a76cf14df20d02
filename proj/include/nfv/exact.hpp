#pragma once

#include <vector>

#include "nfv/model.hpp"
#include "nfv/sp2cv.hpp"

namespace nfv {

struct ExactResult {
  Deployment deployment;
  double gain = 0;
  double bound = 0;      // best relaxation bound at termination
  double gap = 0;        // (bound - gain) / max(|bound|, 1)
  long nodes_explored = 0;
  long combinations = 0;  // enumeration mode: (A, s, p) combinations evaluated
  double wall_time = 0;   // seconds
  bool timed_out = false;
};

struct ExactOptions {
  double gap_limit = 0;   // stop once the relative gap is provably below this
  double time_limit = 0;  // seconds; 0 = unlimited
  Sp2Options sp2;         // bounding-relaxation options (delay mode, cut tol)
  // hard caps for enumerate_exact
  int cap_requests = 4;
  int cap_chain_len = 3;
  int cap_instances = 2;
  int cap_nodes = 4;
};

// Candidate instances per type: the declared |I_t| when given, otherwise the
// sizing-plan count ceil(traffic_t / (theta * mu_t)) capped by the number of
// VNF occurrences of the type (more instances than occurrences never help).
std::vector<int> default_instance_counts(const Scenario& s);

// Depth-first branch-and-bound over {A, s, p} with the convex relaxation as
// bounding oracle. Deterministic; anytime (the incumbent only improves); the
// returned deployment passes validate().
ExactResult solve_exact(const Scenario& s, const ExactOptions& opt);
ExactResult solve_exact(const Scenario& s, double gap_limit = 0,
                        double time_limit = 0);

// Independent oracle: exhaustively enumerates acceptance subsets, VNF-to-
// instance assignments (up to instance relabeling within a type), and
// placements, solving the min-cost routing subproblem per combination.
// Throws CapExceeded beyond the configured limits.
ExactResult enumerate_exact(const Scenario& s, const ExactOptions& opt = {});

}  // namespace nfv
