#pragma once

#include <string>
#include <vector>

#include "nfv/delay.hpp"
#include "nfv/lp.hpp"
#include "nfv/model.hpp"

namespace nfv {

struct Sp2Options {
  DelayOptions delay;
  double cut_tol = 1e-6;      // relative tangent-cut violation threshold
  int max_cut_rounds = 200;
  // Shrink every chain's delay threshold by this absolute margin so that
  // solutions sitting exactly on the LP-feasible boundary still re-validate
  // with exact arithmetic. Zero for bounding use.
  double threshold_margin = 0;
  lp::SolveParams lp;
};

enum class Sp2Status { Optimal, Infeasible, NumericalFailure };

struct RelaxedSolution {
  Sp2Status status = Sp2Status::NumericalFailure;
  double objective = 0;  // relaxed gain; upper-bounds any integral completion
  std::vector<double> accept;                             // [r]
  std::vector<std::vector<std::vector<double>>> assign;   // s: [r][u][i]
  // delta: [r][virtual link] -> (physical link, fraction), nonzeros only
  std::vector<std::vector<std::vector<std::pair<int, double>>>> flows;
  std::vector<std::vector<double>> instance_load;         // [t][i]
  std::vector<double> node_load;                          // [n]
  std::vector<std::vector<double>> instance_delay;        // [t][i], true 1/(mu-lambda)
  std::vector<double> node_delay;                         // [n]
  // free-placement form only: p values [t][i][n]
  std::vector<std::vector<std::vector<double>>> place;
  long lp_iterations = 0;
  int cut_rounds = 0;
};

// The gain-maximization model with binaries relaxed to [0,1], solved by
// successive linearization: each 1/(mu - lambda) epigraph is outer-approximated
// by tangent cuts on an LP, re-solved until no cut is violated. The solver
// keeps the LP and its basis alive across solves, so the fix/release calls
// used during iterative rounding re-solve warm.
class Sp2Solver {
 public:
  // Placement-fixed form: placement[t][i] is the hosting node of instance i of
  // type t (entries >= 0 only). Throws ValidationError if the placement
  // violates node capacities.
  Sp2Solver(const Scenario& s, std::vector<std::vector<int>> placement,
            Sp2Options opt = {});
  // Free-placement form for branch-and-bound: instance_counts[t] candidate
  // instances per type; placement is decided by (relaxed) p variables.
  Sp2Solver(const Scenario& s, const std::vector<int>& instance_counts,
            Sp2Options opt = {});

  int instances(int t) const { return (int)inst_node_[t].size(); }

  void fix_accept(int r, int value);
  void fix_assign(int r, int u, int i, int value);
  void fix_place(int t, int i, int n, int value);  // free-placement form only
  // Undo a single fixing (back to [0,1]); branch-and-bound backtracking.
  void unfix_accept(int r);
  void unfix_assign(int r, int u, int i);
  void unfix_place(int t, int i, int n);
  // Pin A_r and every s of chain r to zero (a rejected chain leaves no trace).
  void reject_chain(int r);
  // Drop all fixings of chain r back to [0,1].
  void release_chain(int r);

  RelaxedSolution solve();

  // The current LP (with accumulated cuts) in LP text interchange format.
  std::string dump_lp() const;

 private:
  void build();
  void add_initial_cuts();
  bool add_violated_cuts(const std::vector<double>& x, int* added);
  RelaxedSolution extract(const lp::Solution& sol) const;
  double expr_value(const std::vector<std::pair<int, double>>& e,
                    const std::vector<double>& x) const;

  const Scenario& scn_;
  Sp2Options opt_;
  bool free_placement_ = false;
  std::vector<std::vector<int>> inst_node_;  // [t][i] -> node (fixed form) or -1

  lp::Model m_;
  lp::Basis basis_;
  bool have_basis_ = false;

  double big_m_traffic_ = 0, big_m_delay_ = 0;

  // variable ids
  std::vector<int> vA_;
  std::vector<std::vector<std::vector<int>>> vS_;      // [r][u][i]
  std::vector<std::vector<std::vector<int>>> vDelta_;  // [r][vl][e]
  std::vector<int> vDn_;                               // [n]
  std::vector<std::vector<int>> vDi_;                  // [t][i]
  std::vector<std::vector<int>> vL_;                   // [r][n], -1 where absent
  std::vector<std::vector<int>> vQ_;                   // [r][u]
  std::vector<std::vector<int>> vAct_;                 // [t][i]
  std::vector<int> vNu_;                               // [n]
  std::vector<std::vector<std::vector<int>>> vP_;      // [t][i][n] (free form)
  std::vector<std::vector<std::vector<int>>> vY_;      // [t][i][n] (free form)
  std::vector<std::vector<std::vector<std::vector<int>>>> vZ_;  // [r][u][i][n]

  // lambda expressions over LP variables
  std::vector<std::vector<std::vector<std::pair<int, double>>>> inst_lambda_;  // [t][i]
  std::vector<std::vector<std::pair<int, double>>> node_lambda_;               // [n]
  std::vector<std::vector<std::vector<double>>> inst_cut_at_;  // lambdas cut, [t][i]
  std::vector<std::vector<double>> node_cut_at_;               // [n]
};

}  // namespace nfv
