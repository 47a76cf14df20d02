#include "nfv/validate.hpp"

#include <cmath>
#include <sstream>

namespace nfv {

namespace {

void add(ViolationReport& rep, std::string constraint, std::string where,
         double magnitude) {
  rep.entries.push_back({std::move(constraint), std::move(where), magnitude});
}

}  // namespace

std::string ViolationReport::to_string() const {
  std::ostringstream ss;
  if (entries.empty()) {
    ss << "feasible (0 violations)\n";
    return ss.str();
  }
  for (const auto& v : entries)
    ss << v.constraint << "  " << v.location << "  magnitude " << v.magnitude << "\n";
  return ss.str();
}

void check_delay_thresholds(const std::vector<DelayBreakdown>& breakdowns,
                            const std::vector<double>& thresholds,
                            const std::vector<std::string>& chain_ids,
                            double delay_tol, ViolationReport& out) {
  for (size_t k = 0; k < breakdowns.size(); ++k) {
    double total = breakdowns[k].total();
    if (total > thresholds[k] + delay_tol)
      add(out, "eq46", "request " + chain_ids[k], total - thresholds[k]);
  }
}

ViolationReport validate(const Scenario& s, const Deployment& d,
                         const ValidateOptions& opt) {
  ViolationReport rep;
  const int R = (int)s.requests.size();
  const int N = (int)s.substrate.nodes.size();
  const int E = (int)s.substrate.links.size();

  if ((int)d.accepted.size() != R || (int)d.vnf_map.size() != R ||
      (int)d.instance_node.size() != (int)s.types.size()) {
    add(rep, "structure", "deployment shape mismatch", 0);
    return rep;
  }

  DerivedLoads loads;
  try {
    loads = derive_loads(s, d);
  } catch (const ReferenceError& e) {
    add(rep, "structure", e.what(), 0);
    return rep;
  }

  // (27) accepted chains fully mapped, types matching; rejected chains clean
  for (int r = 0; r < R; ++r) {
    const auto& req = s.requests[r];
    for (size_t u = 0; u < req.vnf_types.size(); ++u) {
      const InstanceRef m = d.vnf_map[r][u];
      if (d.accepted[r]) {
        if (!m.valid()) {
          add(rep, "eq27", "request " + req.id + " vnf " + std::to_string(u), 1);
        } else if (m.type != req.vnf_types[u]) {
          add(rep, "eq27", "request " + req.id + " vnf " + std::to_string(u) +
                   " mapped to wrong type", 1);
        }
      } else if (m.valid()) {
        add(rep, "eq27", "rejected request " + req.id + " has mapped vnf " +
                 std::to_string(u), 1);
      }
    }
    if (!d.accepted[r]) {
      for (size_t vl = 0; vl < d.flow_split[r].size(); ++vl)
        if (!d.flow_split[r][vl].empty())
          add(rep, "structure", "rejected request " + req.id + " carries flow", 1);
    }
  }

  // (28) every used instance placed
  for (size_t t = 0; t < d.instance_node.size(); ++t)
    for (size_t i = 0; i < d.instance_node[t].size(); ++i)
      if (loads.instance_active[t][i] && d.instance_node[t][i] < 0)
        add(rep, "eq28", "instance (" + s.types[t].id + "," + std::to_string(i) + ")", 1);

  // fraction bounds
  for (int r = 0; r < R; ++r)
    for (size_t vl = 0; vl < d.flow_split[r].size(); ++vl)
      for (const auto& [e, frac] : d.flow_split[r][vl])
        if (frac < -opt.flow_tol || frac > 1 + opt.flow_tol)
          add(rep, "structure", "fraction out of [0,1] on request " + s.requests[r].id,
              std::max(-frac, frac - 1));

  // (29) flow conservation per accepted chain, virtual link, node
  for (int r = 0; r < R; ++r) {
    if (!d.accepted[r]) continue;
    const auto& req = s.requests[r];
    for (size_t vl = 0; vl + 1 < req.vnf_types.size(); ++vl) {
      std::vector<double> net_out(N, 0.0);
      for (const auto& [e, frac] : d.flow_split[r][vl]) {
        net_out[s.substrate.links[e].from] += frac;
        net_out[s.substrate.links[e].to] -= frac;
      }
      int nu = loads.vnf_on_node[r][vl];
      int nv = loads.vnf_on_node[r][vl + 1];
      for (int n = 0; n < N; ++n) {
        double rhs = (n == nu ? 1.0 : 0.0) - (n == nv ? 1.0 : 0.0);
        if (std::abs(net_out[n] - rhs) > opt.flow_tol)
          add(rep, "eq29", "request " + req.id + " vlink " + std::to_string(vl) +
                   " node " + s.substrate.nodes[n].id,
              std::abs(net_out[n] - rhs));
      }
    }
  }

  // (30)-(31) allocated bandwidth consistency and link capacity
  std::vector<double> bw(E, 0.0);
  for (int r = 0; r < R; ++r) {
    if (!d.accepted[r]) continue;
    const auto& req = s.requests[r];
    for (size_t vl = 0; vl < d.flow_split[r].size(); ++vl)
      for (const auto& [e, frac] : d.flow_split[r][vl])
        bw[e] += req.link_bandwidths[vl] * frac;
  }
  for (int e = 0; e < E; ++e) {
    const auto& l = s.substrate.links[e];
    std::string loc = "link " + s.substrate.nodes[l.from].id + "->" +
                      s.substrate.nodes[l.to].id;
    if (std::abs(bw[e] - d.allocated_bw[e]) > opt.flow_tol * std::max(1.0, bw[e]))
      add(rep, "eq30", loc, std::abs(bw[e] - d.allocated_bw[e]));
    if (bw[e] > l.capacity + opt.flow_tol)
      add(rep, "eq31", loc, bw[e] - l.capacity);
  }

  // (32)-(34) node capacities over placed instances
  for (int n = 0; n < N; ++n) {
    double cpu = 0, mem = 0, strg = 0;
    for (size_t t = 0; t < d.instance_node.size(); ++t)
      for (size_t i = 0; i < d.instance_node[t].size(); ++i)
        if (d.instance_node[t][i] == n) {
          cpu += s.types[t].cpu_req;
          mem += s.types[t].mem_req;
          strg += s.types[t].strg_req;
        }
    const auto& nd = s.substrate.nodes[n];
    if (cpu > nd.cpu_capacity + opt.flow_tol)
      add(rep, "eq32", "node " + nd.id, cpu - nd.cpu_capacity);
    if (strg > nd.strg_capacity + opt.flow_tol)
      add(rep, "eq33", "node " + nd.id, strg - nd.strg_capacity);
    if (mem > nd.mem_capacity + opt.flow_tol)
      add(rep, "eq34", "node " + nd.id, mem - nd.mem_capacity);
  }

  // stability (domain of eq38/eq39); only meaningful in queuing mode
  if (opt.delay.mode == DelayMode::Queuing) {
    for (size_t t = 0; t < d.instance_node.size(); ++t) {
      double mu = s.types[t].service_rate;
      double cap = mu - opt.delay.eps_stab_factor * mu;
      for (size_t i = 0; i < loads.instance_load[t].size(); ++i)
        if (loads.instance_load[t][i] > cap + opt.flow_tol)
          add(rep, "stability", "instance (" + s.types[t].id + "," + std::to_string(i) + ")",
              loads.instance_load[t][i] - cap);
    }
    for (int n = 0; n < N; ++n) {
      double mu = s.substrate.nodes[n].hypervisor_rate;
      double cap = mu - opt.delay.eps_stab_factor * mu;
      if (loads.node_load[n] > cap + opt.flow_tol)
        add(rep, "stability", "node " + s.substrate.nodes[n].id,
            loads.node_load[n] - cap);
    }
  }

  // (46) end-to-end delay per accepted chain; skipped if earlier structural
  // defects make the delay undefined for that chain
  std::vector<DelayBreakdown> breakdowns;
  std::vector<double> thresholds;
  std::vector<std::string> ids;
  for (int r = 0; r < R; ++r) {
    if (!d.accepted[r]) continue;
    try {
      breakdowns.push_back(chain_delay(s, d, r, loads, opt.delay));
      thresholds.push_back(s.requests[r].delay_threshold);
      ids.push_back(s.requests[r].id);
    } catch (const std::exception&) {
      // already reported as eq27/stability above
    }
  }
  check_delay_thresholds(breakdowns, thresholds, ids, opt.delay_tol, rep);
  return rep;
}

EconomicReport economics(const Scenario& s, const Deployment& d,
                         const ValidateOptions& opt) {
  EconomicReport rep;
  DerivedLoads loads = derive_loads(s, d);

  for (size_t r = 0; r < s.requests.size(); ++r)
    if (d.accepted[r]) rep.revenue += s.requests[r].revenue;

  // license: once per activated instance (eq42 indicator)
  for (size_t t = 0; t < loads.instance_active.size(); ++t)
    for (size_t i = 0; i < loads.instance_active[t].size(); ++i)
      if (loads.instance_active[t][i]) rep.license_cost += s.types[t].license_cost;

  if (opt.per_chain_sigma) {
    // literal eq26 reading: sigma_n * alpha_n^r summed over chains
    for (size_t r = 0; r < s.requests.size(); ++r)
      for (size_t n = 0; n < s.substrate.nodes.size(); ++n)
        if (loads.node_touched[r][n])
          rep.node_activation_cost += s.substrate.nodes[n].activation_cost;
  } else {
    // default: a node is activated once if it hosts any active instance
    std::vector<char> active(s.substrate.nodes.size(), 0);
    for (size_t t = 0; t < d.instance_node.size(); ++t)
      for (size_t i = 0; i < d.instance_node[t].size(); ++i)
        if (loads.instance_active[t][i] && d.instance_node[t][i] >= 0)
          active[d.instance_node[t][i]] = 1;
    for (size_t n = 0; n < active.size(); ++n)
      if (active[n]) rep.node_activation_cost += s.substrate.nodes[n].activation_cost;
  }

  for (size_t e = 0; e < d.allocated_bw.size(); ++e)
    rep.bandwidth_cost += s.substrate.bandwidth_fee * d.allocated_bw[e];
  return rep;
}

}  // namespace nfv
