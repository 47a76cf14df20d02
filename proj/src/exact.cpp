#include "nfv/exact.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "nfv/errors.hpp"
#include "nfv/routing.hpp"
#include "nfv/validate.hpp"

namespace nfv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct BranchAndBound {
  const Scenario& s;
  const ExactOptions& opt;
  DelayOptions delay;
  Sp2Solver solver;
  Deployment best_dep;
  double best_gain = 0;
  double open_bound = -std::numeric_limits<double>::infinity();
  long nodes = 0;
  bool timed_out = false;
  Clock::time_point t0 = Clock::now();

  BranchAndBound(const Scenario& s_, const std::vector<int>& counts,
                 const ExactOptions& opt_, Sp2Options sp2)
      : s(s_), opt(opt_), delay(sp2.delay), solver(s_, counts, sp2),
        best_dep(Deployment::empty(s_)) {}

  bool out_of_time() const {
    return opt.time_limit > 0 && seconds_since(t0) >= opt.time_limit;
  }

  void try_incumbent(const RelaxedSolution& sol) {
    Deployment d = Deployment::empty(s);
    for (int t = 0; t < (int)s.types.size(); ++t)
      d.instance_node[t].assign(sol.place[t].size(), -1);
    for (int r = 0; r < (int)s.requests.size(); ++r) {
      if (sol.accept[r] < 0.5) continue;
      d.accepted[r] = 1;
      for (int u = 0; u < (int)s.requests[r].vnf_types.size(); ++u) {
        int t = s.requests[r].vnf_types[u];
        for (int i = 0; i < (int)sol.assign[r][u].size(); ++i)
          if (sol.assign[r][u][i] > 0.5) {
            d.vnf_map[r][u] = {t, i};
            break;
          }
        if (!d.vnf_map[r][u].valid()) return;
      }
    }
    for (int t = 0; t < (int)s.types.size(); ++t)
      for (int i = 0; i < (int)sol.place[t].size(); ++i) {
        bool used = false;
        for (int r = 0; r < (int)s.requests.size() && !used; ++r)
          for (int u = 0; u < (int)s.requests[r].vnf_types.size(); ++u)
            if (d.vnf_map[r][u].type == t && d.vnf_map[r][u].index == i &&
                d.accepted[r]) {
              used = true;
              break;
            }
        if (!used) continue;
        for (int n = 0; n < (int)s.substrate.nodes.size(); ++n)
          if (sol.place[t][i][n] > 0.5) {
            d.instance_node[t][i] = n;
            break;
          }
        if (d.instance_node[t][i] < 0) return;
      }
    auto gain = finalize_deployment(s, delay, d);
    if (gain && *gain > best_gain) {
      best_gain = *gain;
      best_dep = std::move(d);
    }
  }

  void dfs() {
    RelaxedSolution sol = solver.solve();
    ++nodes;
    if (sol.status == Sp2Status::Infeasible) return;
    if (sol.status != Sp2Status::Optimal)
      throw NumericalFailure("solve_exact: relaxation did not converge");
    const double obj = sol.objective;
    if (out_of_time()) {
      timed_out = true;
      open_bound = std::max(open_bound, obj);
      return;
    }
    const double tol = 1e-9 * std::max(1.0, std::fabs(best_gain));
    if (obj <= best_gain + tol ||
        (opt.gap_limit > 0 &&
         obj - best_gain <= opt.gap_limit * std::max(std::fabs(obj), 1.0))) {
      open_bound = std::max(open_bound, obj);
      return;
    }

    // branch: fractional A by descending revenue, then most-fractional s,
    // then most-fractional p of an instance that carries load; ties to the
    // lowest identifier
    const double itol = 1e-6;
    auto frac = [&](double v) { return std::min(v, 1 - v); };
    int br_r = -1;
    for (int r = 0; r < (int)s.requests.size(); ++r)
      if (frac(sol.accept[r]) > itol &&
          (br_r < 0 || s.requests[r].revenue > s.requests[br_r].revenue))
        br_r = r;
    if (br_r >= 0) {
      int first = sol.accept[br_r] >= 0.5 ? 1 : 0;
      for (int v : {first, 1 - first}) {
        if (timed_out) {
          open_bound = std::max(open_bound, obj);
          break;
        }
        solver.fix_accept(br_r, v);
        dfs();
        solver.unfix_accept(br_r);
      }
      return;
    }
    int bs_r = -1, bs_u = -1, bs_i = -1;
    double bs_frac = itol;
    for (int r = 0; r < (int)s.requests.size(); ++r)
      for (int u = 0; u < (int)sol.assign[r].size(); ++u)
        for (int i = 0; i < (int)sol.assign[r][u].size(); ++i)
          if (frac(sol.assign[r][u][i]) > bs_frac) {
            bs_frac = frac(sol.assign[r][u][i]);
            bs_r = r, bs_u = u, bs_i = i;
          }
    if (bs_r >= 0) {
      int first = sol.assign[bs_r][bs_u][bs_i] >= 0.5 ? 1 : 0;
      for (int v : {first, 1 - first}) {
        if (timed_out) {
          open_bound = std::max(open_bound, obj);
          break;
        }
        solver.fix_assign(bs_r, bs_u, bs_i, v);
        dfs();
        solver.unfix_assign(bs_r, bs_u, bs_i);
      }
      return;
    }
    int bp_t = -1, bp_i = -1, bp_n = -1;
    double bp_frac = itol;
    for (int t = 0; t < (int)sol.place.size(); ++t)
      for (int i = 0; i < (int)sol.place[t].size(); ++i) {
        bool loaded = sol.instance_load[t][i] > 1e-9;
        if (!loaded) continue;
        bool placed = false;
        for (double p : sol.place[t][i]) placed |= p > 1 - itol;
        if (placed) continue;
        for (int n = 0; n < (int)sol.place[t][i].size(); ++n)
          if (frac(sol.place[t][i][n]) > bp_frac) {
            bp_frac = frac(sol.place[t][i][n]);
            bp_t = t, bp_i = i, bp_n = n;
          }
      }
    if (bp_t >= 0) {
      int first = sol.place[bp_t][bp_i][bp_n] >= 0.5 ? 1 : 0;
      for (int v : {first, 1 - first}) {
        if (timed_out) {
          open_bound = std::max(open_bound, obj);
          break;
        }
        solver.fix_place(bp_t, bp_i, bp_n, v);
        dfs();
        solver.unfix_place(bp_t, bp_i, bp_n);
      }
      return;
    }

    // integral leaf: harvest an incumbent; the node is fathomed, but its
    // objective stays in the bound ledger since extraction re-solves delays
    // and routing exactly
    try_incumbent(sol);
    open_bound = std::max(open_bound, obj);
  }
};

struct Enumerator {
  const Scenario& s;
  const ExactOptions& opt;
  DelayOptions delay;
  std::vector<int> counts;
  Deployment best_dep;
  double best_gain = 0;
  long combinations = 0;

  // flattened list of (chain, position, type) for accepted VNFs
  struct Slot {
    int r, u, t;
  };
  std::vector<Slot> slots;
  Deployment work;
  std::vector<int> used;  // instances of each type in play (restricted growth)

  Enumerator(const Scenario& s_, const ExactOptions& opt_)
      : s(s_), opt(opt_), delay(scenario_delay_options(s_)),
        counts(default_instance_counts(s_)), best_dep(Deployment::empty(s_)),
        work(Deployment::empty(s_)) {}

  void evaluate() {
    ++combinations;
    Deployment d = work;
    auto gain = finalize_deployment(s, delay, d);
    if (gain && *gain > best_gain) {
      best_gain = *gain;
      best_dep = std::move(d);
    }
  }

  void place(size_t k, std::vector<double>& cpu, std::vector<double>& mem,
             std::vector<double>& strg) {
    // next used instance in (type, index) order
    int t = -1, i = -1;
    size_t seen = 0;
    for (int tt = 0; tt < (int)s.types.size() && t < 0; ++tt)
      for (int ii = 0; ii < used[tt]; ++ii)
        if (seen++ == k) {
          t = tt, i = ii;
          break;
        }
    if (t < 0) {
      evaluate();
      return;
    }
    const VnfType& ty = s.types[t];
    for (int n = 0; n < (int)s.substrate.nodes.size(); ++n) {
      if (cpu[n] < ty.cpu_req || mem[n] < ty.mem_req || strg[n] < ty.strg_req)
        continue;
      cpu[n] -= ty.cpu_req;
      mem[n] -= ty.mem_req;
      strg[n] -= ty.strg_req;
      work.instance_node[t][i] = n;
      place(k + 1, cpu, mem, strg);
      work.instance_node[t][i] = -1;
      cpu[n] += ty.cpu_req;
      mem[n] += ty.mem_req;
      strg[n] += ty.strg_req;
    }
  }

  void assign(size_t k) {
    if (k == slots.size()) {
      std::vector<double> cpu, mem, strg;
      for (auto& n : s.substrate.nodes) {
        cpu.push_back(n.cpu_capacity);
        mem.push_back(n.mem_capacity);
        strg.push_back(n.strg_capacity);
      }
      place(0, cpu, mem, strg);
      return;
    }
    const Slot& sl = slots[k];
    // instances of one type are interchangeable: only canonical labelings
    // where a fresh instance takes the next unused index
    int limit = std::min(counts[sl.t] - 1, used[sl.t]);
    for (int i = 0; i <= limit; ++i) {
      work.vnf_map[sl.r][sl.u] = {sl.t, i};
      bool fresh = i == used[sl.t];
      if (fresh) ++used[sl.t];
      assign(k + 1);
      if (fresh) --used[sl.t];
      work.vnf_map[sl.r][sl.u] = {};
    }
  }

  void run() {
    const int R = (int)s.requests.size();
    for (int t = 0; t < (int)s.types.size(); ++t)
      work.instance_node[t].assign(counts[t], -1);
    best_dep = work;  // all-reject baseline
    used.assign(s.types.size(), 0);
    for (unsigned mask = 0; mask < (1u << R); ++mask) {
      slots.clear();
      for (int r = 0; r < R; ++r) {
        work.accepted[r] = (mask >> r) & 1u;
        if (work.accepted[r])
          for (int u = 0; u < (int)s.requests[r].vnf_types.size(); ++u)
            slots.push_back({r, u, s.requests[r].vnf_types[u]});
      }
      assign(0);
    }
  }
};

}  // namespace

std::vector<int> default_instance_counts(const Scenario& s) {
  std::vector<int> counts(s.types.size(), 0);
  std::vector<int> occ(s.types.size(), 0);
  std::vector<double> traffic(s.types.size(), 0.0);
  for (const auto& req : s.requests)
    for (int t : req.vnf_types) {
      ++occ[t];
      traffic[t] += req.flow_rate;
    }
  for (int t = 0; t < (int)s.types.size(); ++t) {
    if (s.types[t].max_instances > 0) {
      counts[t] = s.types[t].max_instances;
    } else if (occ[t] > 0) {
      int plan = (int)std::ceil(traffic[t] / (s.theta * s.types[t].service_rate));
      counts[t] = std::min(occ[t], std::max(1, plan));
    }
  }
  return counts;
}

ExactResult solve_exact(const Scenario& s, const ExactOptions& opt) {
  Clock::time_point t0 = Clock::now();
  Sp2Options sp2 = opt.sp2;
  sp2.delay = scenario_delay_options(s);  // the scenario owns delay accounting
  sp2.threshold_margin = 0;
  BranchAndBound bnb(s, default_instance_counts(s), opt, sp2);
  bnb.t0 = t0;
  bnb.dfs();

  ExactResult res;
  res.deployment = std::move(bnb.best_dep);
  res.gain = bnb.best_gain;
  res.bound = std::max(bnb.best_gain, bnb.open_bound);
  res.gap = std::max(0.0, (res.bound - res.gain) /
                              std::max(std::fabs(res.bound), 1.0));
  res.nodes_explored = bnb.nodes;
  res.timed_out = bnb.timed_out;
  res.wall_time = seconds_since(t0);
  return res;
}

ExactResult solve_exact(const Scenario& s, double gap_limit, double time_limit) {
  ExactOptions opt;
  opt.gap_limit = gap_limit;
  opt.time_limit = time_limit;
  return solve_exact(s, opt);
}

ExactResult enumerate_exact(const Scenario& s, const ExactOptions& opt) {
  Clock::time_point t0 = Clock::now();
  if ((int)s.requests.size() > opt.cap_requests)
    throw CapExceeded("enumerate_exact: " + std::to_string(s.requests.size()) +
                      " requests exceed the cap of " +
                      std::to_string(opt.cap_requests));
  for (const auto& req : s.requests)
    if ((int)req.vnf_types.size() > opt.cap_chain_len)
      throw CapExceeded("enumerate_exact: chain " + req.id + " length " +
                        std::to_string(req.vnf_types.size()) +
                        " exceeds the cap of " +
                        std::to_string(opt.cap_chain_len));
  if ((int)s.substrate.nodes.size() > opt.cap_nodes)
    throw CapExceeded("enumerate_exact: " +
                      std::to_string(s.substrate.nodes.size()) +
                      " nodes exceed the cap of " +
                      std::to_string(opt.cap_nodes));
  std::vector<int> counts = default_instance_counts(s);
  for (int t = 0; t < (int)s.types.size(); ++t)
    if (counts[t] > opt.cap_instances)
      throw CapExceeded("enumerate_exact: type " + s.types[t].id + " has " +
                        std::to_string(counts[t]) +
                        " candidate instances, cap is " +
                        std::to_string(opt.cap_instances));

  Enumerator en(s, opt);
  en.run();
  ExactResult res;
  res.deployment = std::move(en.best_dep);
  res.gain = en.best_gain;
  res.bound = en.best_gain;
  res.combinations = en.combinations;
  res.wall_time = seconds_since(t0);
  return res;
}

}  // namespace nfv
