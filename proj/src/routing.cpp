#include "nfv/routing.hpp"

#include <algorithm>
#include <cmath>

#include "nfv/errors.hpp"
#include "nfv/lp.hpp"
#include "nfv/validate.hpp"

namespace nfv {

namespace {

constexpr double kFlowEps = 1e-9;

}  // namespace

std::vector<std::pair<int, double>> decompose_flow(
    const SubstrateNetwork& net, int src, int dst,
    const std::vector<std::pair<int, double>>& flow) {
  std::vector<std::pair<int, double>> out;
  if (src == dst) return out;

  std::vector<double> residual(net.links.size(), 0.0);
  for (auto& [e, v] : flow)
    if (v > kFlowEps) residual[e] += v;

  std::vector<double> merged(net.links.size(), 0.0);
  double total = 0;
  std::vector<int> path;        // link ids
  std::vector<char> on_path(net.links.size(), 0);
  while (true) {
    // greedy walk src -> dst along the max-residual outgoing link; flow
    // conservation guarantees the walk reaches dst or closes a cycle
    path.clear();
    std::fill(on_path.begin(), on_path.end(), 0);
    std::vector<char> seen(net.nodes.size(), 0);
    int at = src;
    bool reached = false;
    while (true) {
      if (at == dst) {
        reached = true;
        break;
      }
      if (seen[at]) break;  // cycle: abandon this walk, flow on it is dropped
      seen[at] = 1;
      int pick = -1;
      for (int e : net.out_links[at])
        if (residual[e] > kFlowEps && (pick < 0 || residual[e] > residual[pick]))
          pick = e;
      if (pick < 0) break;
      path.push_back(pick);
      on_path[pick] = 1;
      at = net.links[pick].to;
    }
    if (!reached) {
      if (path.empty()) break;
      // remove the stuck walk's minimum so progress is guaranteed
      double f = residual[path[0]];
      for (int e : path) f = std::min(f, residual[e]);
      for (int e : path) residual[e] -= f;
      continue;
    }
    double f = residual[path[0]];
    for (int e : path) f = std::min(f, residual[e]);
    if (f <= kFlowEps) break;
    for (int e : path) {
      residual[e] -= f;
      merged[e] += f;
    }
    total += f;
    if (total >= 1.0 - kFlowEps) break;
  }
  if (total <= kFlowEps) return out;
  for (int e = 0; e < (int)net.links.size(); ++e)
    if (merged[e] > kFlowEps) out.emplace_back(e, merged[e] / total);
  return out;
}

RoutingResult route_chains(const Scenario& s,
                           const std::vector<std::vector<int>>& vnf_node,
                           const std::vector<double>& delay_budget) {
  const auto& net = s.substrate;
  const int R = (int)s.requests.size();
  const int E = (int)net.links.size();
  RoutingResult res;
  res.flow_split.resize(R);
  for (int r = 0; r < R; ++r)
    res.flow_split[r].resize(s.requests[r].link_bandwidths.size());
  res.allocated_bw.assign(E, 0.0);

  lp::Model m;
  // var ids per (chain, virtual link): E delta variables, or empty if colocated
  struct VLink {
    int r, u, a, b;
    int base;  // first delta variable id
  };
  std::vector<VLink> vls;
  for (int r = 0; r < R; ++r) {
    if (vnf_node[r].empty()) continue;
    // hypervisor and instance delays alone already exceed the threshold
    if (delay_budget[r] < 0) return res;
    const auto& req = s.requests[r];
    for (int u = 0; u + 1 < (int)req.vnf_types.size(); ++u) {
      int a = vnf_node[r][u], b = vnf_node[r][u + 1];
      if (a == b) continue;
      VLink vl{r, u, a, b, m.cols()};
      // minimizing bandwidth fee; the uniform epsilon keeps the LP objective
      // proportional to the true cost while breaking ties toward short routes
      double coef = (net.bandwidth_fee + 1e-6) * req.link_bandwidths[u];
      for (int e = 0; e < E; ++e) m.add_var(0, 1, coef);
      vls.push_back(vl);
    }
  }

  for (auto& vl : vls) {
    for (int n = 0; n < (int)net.nodes.size(); ++n) {
      std::vector<std::pair<int, double>> row;
      for (int e : net.out_links[n]) row.emplace_back(vl.base + e, 1.0);
      for (int e : net.in_links[n]) row.emplace_back(vl.base + e, -1.0);
      double rhs = (n == vl.a ? 1.0 : 0.0) - (n == vl.b ? 1.0 : 0.0);
      m.add_row(std::move(row), rhs, rhs);
    }
  }
  for (int e = 0; e < E; ++e) {
    std::vector<std::pair<int, double>> row;
    for (auto& vl : vls)
      row.emplace_back(vl.base + e, s.requests[vl.r].link_bandwidths[vl.u]);
    if (!row.empty()) m.add_row(std::move(row), -lp::kInf, net.links[e].capacity);
  }
  for (int r = 0; r < R; ++r) {
    std::vector<std::pair<int, double>> row;
    for (auto& vl : vls)
      if (vl.r == r)
        for (int e = 0; e < E; ++e)
          if (net.links[e].prop_delay != 0)
            row.emplace_back(vl.base + e, net.links[e].prop_delay);
    if (!row.empty()) m.add_row(std::move(row), -lp::kInf, delay_budget[r]);
  }

  std::vector<double> x;
  if (m.cols() > 0) {
    lp::Solution sol = lp::solve(m);
    if (sol.status == lp::Status::Infeasible) return res;
    if (sol.status != lp::Status::Optimal)
      throw NumericalFailure("route_chains: LP did not converge");
    x = std::move(sol.x);
  }

  for (auto& vl : vls) {
    std::vector<std::pair<int, double>> raw;
    for (int e = 0; e < E; ++e)
      if (x[vl.base + e] > kFlowEps) raw.emplace_back(e, x[vl.base + e]);
    auto split = decompose_flow(net, vl.a, vl.b, raw);
    if (split.empty()) return res;  // degenerate LP throughput; treat as infeasible
    double w = s.requests[vl.r].link_bandwidths[vl.u];
    for (auto& [e, frac] : split) res.allocated_bw[e] += w * frac;
    res.flow_split[vl.r][vl.u] = std::move(split);
  }
  double total_bw = 0;
  for (double bw : res.allocated_bw) total_bw += bw;
  res.bandwidth_cost = net.bandwidth_fee * total_bw;
  res.feasible = true;
  return res;
}


std::optional<double> finalize_deployment(const Scenario& s,
                                          const DelayOptions& delay,
                                          Deployment& d) {
  DerivedLoads loads = derive_loads(s, d);
  const double eps = delay.eps_stab_factor;
  // instance service-rate cap (stability in queuing mode; the relaxation
  // enforces the same cap in fixed mode)
  for (int t = 0; t < (int)s.types.size(); ++t)
    for (double lam : loads.instance_load[t])
      if (lam >= s.types[t].service_rate * (1 - eps)) return std::nullopt;
  if (delay.mode == DelayMode::Queuing)
    for (int n = 0; n < (int)s.substrate.nodes.size(); ++n)
      if (loads.node_load[n] >= s.substrate.nodes[n].hypervisor_rate * (1 - eps))
        return std::nullopt;

  const int R = (int)s.requests.size();
  std::vector<std::vector<int>> vnf_node(R);
  std::vector<double> budget(R, 0.0);
  for (int r = 0; r < R; ++r) {
    if (!d.accepted[r]) continue;
    double used = 0;
    for (int n = 0; n < (int)s.substrate.nodes.size(); ++n)
      if (loads.node_touched[r][n]) used += node_delay(s, n, loads, delay);
    const auto& req = s.requests[r];
    vnf_node[r].resize(req.vnf_types.size());
    for (int u = 0; u < (int)req.vnf_types.size(); ++u) {
      const InstanceRef& ref = d.vnf_map[r][u];
      used += instance_delay(s, ref.type, ref.index, loads, delay);
      vnf_node[r][u] = d.instance_node[ref.type][ref.index];
    }
    budget[r] = req.delay_threshold - used;
  }

  RoutingResult routed = route_chains(s, vnf_node, budget);
  if (!routed.feasible) return std::nullopt;
  d.flow_split = std::move(routed.flow_split);
  d.allocated_bw = std::move(routed.allocated_bw);

  ValidateOptions vopt;
  vopt.delay = delay;
  if (!validate(s, d, vopt).feasible()) return std::nullopt;
  return economics(s, d, vopt).gain();
}

}  // namespace nfv
