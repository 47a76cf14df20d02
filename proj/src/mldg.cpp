#include "nfv/mldg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nfv/errors.hpp"
#include "nfv/routing.hpp"

namespace nfv {

namespace {

// Lambda^t: number of virtual links with an endpoint of type t. Types that
// appear only in single-VNF chains get a floor of 1 so their priority stays
// nonzero until every planned instance is placed.
std::vector<double> link_incidence(const Scenario& s) {
  std::vector<double> lam(s.types.size(), 0.0);
  for (const auto& req : s.requests)
    for (size_t u = 0; u + 1 < req.vnf_types.size(); ++u) {
      int a = req.vnf_types[u], b = req.vnf_types[u + 1];
      lam[a] += 1;
      if (b != a) lam[b] += 1;
    }
  return lam;
}

}  // namespace

SizingPlan size_instances(const Scenario& s) {
  if (!(s.theta > 0 && s.theta < 1))
    throw ValidationError("theta", "capacity scale factor must be in (0, 1)");
  SizingPlan plan;
  plan.theta = s.theta;
  plan.eta.assign(s.types.size(), 0);
  std::vector<double> traffic(s.types.size(), 0.0);
  for (const auto& req : s.requests)
    for (int t : req.vnf_types) traffic[t] += req.flow_rate;
  for (size_t t = 0; t < s.types.size(); ++t)
    if (traffic[t] > 0) {
      plan.eta[t] =
          (int)std::ceil(traffic[t] / (s.theta * s.types[t].service_rate));
      if (s.types[t].max_instances > 0)
        plan.eta[t] = std::min(plan.eta[t], s.types[t].max_instances);
    }
  return plan;
}

std::vector<std::vector<int>> place_instances(const Scenario& s,
                                              const SizingPlan& plan) {
  const int T = (int)s.types.size();
  const int N = (int)s.substrate.nodes.size();
  std::vector<double> lam = link_incidence(s);
  // type-to-type adjacency: number of virtual links between the two types
  std::vector<std::vector<double>> adj(T, std::vector<double>(T, 0.0));
  for (const auto& req : s.requests)
    for (size_t u = 0; u + 1 < req.vnf_types.size(); ++u) {
      int a = req.vnf_types[u], b = req.vnf_types[u + 1];
      adj[a][b] += 1;
      if (a != b) adj[b][a] += 1;
    }

  std::vector<int> remaining = plan.eta;
  std::vector<std::vector<int>> placement(T);
  // node opening order: descending CPU capacity, ties by index
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return s.substrate.nodes[a].cpu_capacity > s.substrate.nodes[b].cpu_capacity;
  });

  auto outstanding = [&] {
    return std::any_of(remaining.begin(), remaining.end(),
                       [](int e) { return e > 0; });
  };

  size_t next_node = 0;
  while (outstanding()) {
    if (next_node >= order.size())
      throw SubstrateExhausted(
          "place_instances: planned instances exceed substrate capacity");
    int n = order[next_node++];
    double cpu = s.substrate.nodes[n].cpu_capacity;
    double mem = s.substrate.nodes[n].mem_capacity;
    double strg = s.substrate.nodes[n].strg_capacity;
    auto fits = [&](int t) {
      return remaining[t] > 0 && s.types[t].cpu_req <= cpu &&
             s.types[t].mem_req <= mem && s.types[t].strg_req <= strg;
    };
    std::vector<char> in_cluster(T, 0);
    bool first = true;
    while (true) {
      int pick = -1;
      double best = -1;
      for (int t = 0; t < T; ++t) {
        if (!fits(t)) continue;
        // seed by priority (remaining * incidence), then grow by belonginess
        double score = first ? remaining[t] * std::max(lam[t], 1.0) : 0.0;
        if (!first)
          for (int t2 = 0; t2 < T; ++t2)
            if (in_cluster[t2]) score += adj[t2][t];
        if (score > best) {
          best = score;
          pick = t;
        }
      }
      if (pick < 0) break;
      placement[pick].push_back(n);
      --remaining[pick];
      cpu -= s.types[pick].cpu_req;
      mem -= s.types[pick].mem_req;
      strg -= s.types[pick].strg_req;
      in_cluster[pick] = 1;
      first = false;
    }
    if (first && outstanding() && next_node >= order.size())
      throw SubstrateExhausted(
          "place_instances: no node fits the remaining instances");
  }
  return placement;
}

MldgResult map_chains(const Scenario& s,
                      const std::vector<std::vector<int>>& placement,
                      const MldgOptions& opt) {
  const int R = (int)s.requests.size();
  MldgResult res;
  res.placement = placement;
  if (R == 0) {
    res.deployment = Deployment::empty(s);
    res.deployment.instance_node = placement;
    res.economics = economics(s, res.deployment, {});
    return res;
  }

  Sp2Options sp2 = opt.sp2;
  sp2.delay = scenario_delay_options(s);
  const bool queuing = sp2.delay.mode == DelayMode::Queuing;
  if (opt.threshold_margin >= 0) {
    sp2.threshold_margin = opt.threshold_margin;
  } else if (queuing) {
    // default margin: absorb the tangent-cut approximation error so rounded
    // chains survive exact re-validation, yet stay negligible vs thresholds
    double min_th = std::numeric_limits<double>::infinity();
    for (const auto& req : s.requests)
      if (req.delay_threshold > 0)
        min_th = std::min(min_th, req.delay_threshold);
    sp2.threshold_margin =
        std::isfinite(min_th) ? std::min(1e-4, 1e-3 * min_th) : 0;
  } else {
    sp2.threshold_margin = 0;  // fixed-mode delays are exact in the LP
  }

  Sp2Solver solver(s, placement, sp2);
  const double eps = sp2.delay.eps_stab_factor;

  enum { Unprocessed, Accepted, Rejected };
  std::vector<int> state(R, Unprocessed);
  std::vector<std::vector<InstanceRef>> chosen(R);
  std::vector<std::vector<double>> committed(s.types.size());
  for (size_t t = 0; t < placement.size(); ++t)
    committed[t].assign(placement[t].size(), 0.0);

  auto solve_counted = [&]() {
    ++res.resolves;
    return solver.solve();
  };
  auto budget_left = [&] {
    return opt.max_resolve == 0 || res.resolves < opt.max_resolve;
  };

  while (true) {
    if (!budget_left()) {
      for (int r = 0; r < R; ++r)
        if (state[r] == Unprocessed) {
          solver.reject_chain(r);
          state[r] = Rejected;
        }
      break;
    }
    RelaxedSolution sol = solve_counted();
    if (sol.status != Sp2Status::Optimal) {
      res.numerical_issue |= sol.status == Sp2Status::NumericalFailure;
      for (int r = 0; r < R; ++r)
        if (state[r] == Unprocessed) {
          solver.reject_chain(r);
          state[r] = Rejected;
        }
      break;
    }

    // outer selection: most integral unprocessed chain
    int pick = -1;
    double best_theta = -1;
    for (int r = 0; r < R; ++r) {
      if (state[r] != Unprocessed) continue;
      double theta_r = 0;
      for (const auto& per_i : sol.assign[r])
        if (!per_i.empty())
          theta_r += *std::max_element(per_i.begin(), per_i.end());
      theta_r /= (double)s.requests[r].vnf_types.size();
      if (theta_r > best_theta + 1e-12) {
        best_theta = theta_r;
        pick = r;
      }
    }
    if (pick < 0) break;  // every chain accepted or rejected

    const auto& req = s.requests[pick];
    const int L = (int)req.vnf_types.size();
    solver.fix_accept(pick, 1);
    chosen[pick].assign(L, InstanceRef{});
    std::vector<std::pair<int, int>> fixed_here;  // (u, i) roundings
    bool rejected = false;

    while (true) {
      // viable candidate: instance still has service capacity for the flow
      auto viable = [&](int u, int i) {
        int t = req.vnf_types[u];
        return committed[t][i] + req.flow_rate <
               s.types[t].service_rate * (1 - eps);
      };
      // batch-fix every already-integral assignment, else round the largest
      // fractional one
      bool fixed_any = false;
      int frac_u = -1, frac_i = -1;
      double frac_best = -1;
      for (int u = 0; u < L; ++u) {
        if (chosen[pick][u].valid()) continue;
        int t = req.vnf_types[u];
        for (int i = 0; i < (int)sol.assign[pick][u].size(); ++i) {
          double v = sol.assign[pick][u][i];
          if (!viable(u, i)) continue;
          if (v > 1 - 1e-6) {
            solver.fix_assign(pick, u, i, 1);
            chosen[pick][u] = {t, i};
            committed[t][i] += req.flow_rate;
            fixed_here.push_back({u, i});
            fixed_any = true;
            break;
          }
          if (v > frac_best + 1e-12) {
            frac_best = v;
            frac_u = u;
            frac_i = i;
          }
        }
      }
      if (!fixed_any) {
        bool done = std::all_of(chosen[pick].begin(), chosen[pick].end(),
                                [](const InstanceRef& c) { return c.valid(); });
        if (done) break;
        if (frac_u < 0) {
          rejected = true;  // no viable candidate for some VNF
          break;
        }
        int t = req.vnf_types[frac_u];
        solver.fix_assign(pick, frac_u, frac_i, 1);
        chosen[pick][frac_u] = {t, frac_i};
        committed[t][frac_i] += req.flow_rate;
        fixed_here.push_back({frac_u, frac_i});
      }
      if (!budget_left()) {
        rejected = true;
        break;
      }
      RelaxedSolution next = solve_counted();
      if (next.status != Sp2Status::Optimal) {
        res.numerical_issue |= next.status == Sp2Status::NumericalFailure;
        rejected = true;
        break;
      }
      sol = std::move(next);
      bool done = std::all_of(chosen[pick].begin(), chosen[pick].end(),
                              [](const InstanceRef& c) { return c.valid(); });
      if (done) break;
    }

    if (rejected) {
      for (auto& [u, i] : fixed_here)
        committed[req.vnf_types[u]][i] -= req.flow_rate;
      chosen[pick].clear();
      solver.reject_chain(pick);
      state[pick] = Rejected;
    } else {
      state[pick] = Accepted;
    }
  }

  // extraction: rebuild flows exactly (minimum-cost routing under exact
  // residual budgets, path-decomposed), then validate; if the margin was too
  // thin the lowest-revenue accepted chain is dropped and extraction retried
  ValidateOptions vopt;
  vopt.delay = sp2.delay;
  while (true) {
    Deployment d = Deployment::empty(s);
    d.instance_node = placement;
    for (int r = 0; r < R; ++r)
      if (state[r] == Accepted) {
        d.accepted[r] = 1;
        d.vnf_map[r] = chosen[r];
      }
    if (auto gain = finalize_deployment(s, sp2.delay, d)) {
      (void)gain;
      res.economics = economics(s, d, vopt);
      res.deployment = std::move(d);
      break;
    }
    int drop = -1;
    for (int r = 0; r < R; ++r)
      if (state[r] == Accepted &&
          (drop < 0 || s.requests[r].revenue < s.requests[drop].revenue))
        drop = r;
    if (drop < 0) {  // cannot happen: the all-reject deployment is feasible
      res.deployment = Deployment::empty(s);
      res.deployment.instance_node = placement;
      res.economics = economics(s, res.deployment, vopt);
      break;
    }
    state[drop] = Rejected;
    chosen[drop].clear();
  }
  return res;
}

MldgResult run_mldg(const Scenario& s, const MldgOptions& opt) {
  SizingPlan plan = size_instances(s);
  std::vector<std::vector<int>> placement = place_instances(s, plan);
  MldgResult res = map_chains(s, placement, opt);
  res.plan = std::move(plan);
  return res;
}

}  // namespace nfv
