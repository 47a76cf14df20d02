#include "nfv/model.hpp"

#include <algorithm>
#include <set>

namespace nfv {

int SubstrateNetwork::node_index(const std::string& id) const {
  for (int i = 0; i < (int)nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return -1;
}

int SubstrateNetwork::link_index(int from, int to) const {
  for (int i = 0; i < (int)links.size(); ++i)
    if (links[i].from == from && links[i].to == to) return i;
  return -1;
}

void SubstrateNetwork::check() const {
  std::set<std::string> ids;
  for (const auto& n : nodes) {
    if (!ids.insert(n.id).second)
      throw ValidationError("substrate.nodes", "duplicate node id " + n.id);
    if (n.cpu_capacity <= 0) throw ValidationError("substrate.nodes." + n.id + ".cpu", "must be > 0");
    if (n.mem_capacity <= 0) throw ValidationError("substrate.nodes." + n.id + ".mem", "must be > 0");
    if (n.strg_capacity <= 0) throw ValidationError("substrate.nodes." + n.id + ".strg", "must be > 0");
    if (n.hypervisor_rate <= 0) throw ValidationError("substrate.nodes." + n.id + ".mu", "must be > 0");
    if (n.activation_cost < 0) throw ValidationError("substrate.nodes." + n.id + ".sigma", "must be >= 0");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& l : links) {
    if (l.from < 0 || l.from >= (int)nodes.size() || l.to < 0 || l.to >= (int)nodes.size())
      throw ValidationError("substrate.links", "link endpoint out of range");
    if (l.from == l.to)
      throw ValidationError("substrate.links", "self-loop at " + nodes[l.from].id);
    if (!seen.insert({l.from, l.to}).second)
      throw ValidationError("substrate.links", "duplicate directed link " +
                            nodes[l.from].id + "->" + nodes[l.to].id);
    if (l.capacity <= 0) throw ValidationError("substrate.links.capacity", "must be > 0");
    if (l.prop_delay < 0) throw ValidationError("substrate.links.delay", "must be >= 0");
  }
  auto* self = const_cast<SubstrateNetwork*>(this);
  self->out_links.assign(nodes.size(), {});
  self->in_links.assign(nodes.size(), {});
  for (int e = 0; e < (int)links.size(); ++e) {
    self->out_links[links[e].from].push_back(e);
    self->in_links[links[e].to].push_back(e);
  }
}

int Scenario::type_index(const std::string& id) const {
  for (int i = 0; i < (int)types.size(); ++i)
    if (types[i].id == id) return i;
  return -1;
}

void Scenario::check() const {
  substrate.check();
  std::set<std::string> tids;
  for (const auto& t : types) {
    if (!tids.insert(t.id).second)
      throw ValidationError("types", "duplicate type id " + t.id);
    if (t.service_rate <= 0) throw ValidationError("types." + t.id + ".mu", "must be > 0");
    if (t.cpu_req < 0 || t.mem_req < 0 || t.strg_req < 0)
      throw ValidationError("types." + t.id, "requirements must be >= 0");
    if (t.license_cost < 0) throw ValidationError("types." + t.id + ".license", "must be >= 0");
    if (t.max_instances < 0) throw ValidationError("types." + t.id + ".max_instances", "must be >= 0");
  }
  std::set<std::string> rids;
  for (const auto& r : requests) {
    if (!rids.insert(r.id).second)
      throw ValidationError("requests", "duplicate request id " + r.id);
    if (r.vnf_types.empty())
      throw ValidationError("requests." + r.id + ".vnfs", "sequence length must be >= 1");
    for (int t : r.vnf_types)
      if (t < 0 || t >= (int)types.size())
        throw ValidationError("requests." + r.id + ".vnfs", "unknown type index");
    if (r.link_bandwidths.size() + 1 != r.vnf_types.size())
      throw ValidationError("requests." + r.id + ".bandwidths",
                            "length must be sequence length - 1");
    if (r.flow_rate <= 0) throw ValidationError("requests." + r.id + ".flow", "must be > 0");
    if (r.delay_threshold <= 0)
      throw ValidationError("requests." + r.id + ".delay_threshold", "must be > 0");
  }
  if (!(theta > 0.0 && theta < 1.0))
    throw ValidationError("params.theta", "theta out of (0,1)");
}

double Scenario::total_traffic() const {
  double m = 0;
  for (const auto& r : requests) m += r.flow_rate * (double)r.vnf_types.size();
  return m;
}

double Scenario::max_threshold() const {
  double m = 0;
  for (const auto& r : requests) m = std::max(m, r.delay_threshold);
  return m;
}

Deployment Deployment::empty(const Scenario& s) {
  Deployment d;
  d.accepted.assign(s.requests.size(), 0);
  d.vnf_map.resize(s.requests.size());
  for (size_t r = 0; r < s.requests.size(); ++r)
    d.vnf_map[r].assign(s.requests[r].vnf_types.size(), InstanceRef{});
  d.instance_node.assign(s.types.size(), {});
  d.flow_split.resize(s.requests.size());
  for (size_t r = 0; r < s.requests.size(); ++r)
    d.flow_split[r].resize(s.requests[r].link_bandwidths.size());
  d.allocated_bw.assign(s.substrate.links.size(), 0.0);
  return d;
}

bool Deployment::is_empty() const {
  return std::none_of(accepted.begin(), accepted.end(), [](char a) { return a; });
}

DerivedLoads derive_loads(const Scenario& s, const Deployment& d) {
  DerivedLoads out;
  const int R = (int)s.requests.size();
  const int T = (int)s.types.size();
  const int N = (int)s.substrate.nodes.size();
  if ((int)d.accepted.size() != R || (int)d.vnf_map.size() != R ||
      (int)d.instance_node.size() != T)
    throw ReferenceError("derive_loads: deployment shape does not match scenario");

  out.instance_load.resize(T);
  out.instance_active.resize(T);
  for (int t = 0; t < T; ++t) {
    out.instance_load[t].assign(d.instance_node[t].size(), 0.0);
    out.instance_active[t].assign(d.instance_node[t].size(), 0);
  }
  out.node_load.assign(N, 0.0);
  out.node_touched.assign(R, std::vector<char>(N, 0));
  out.vnf_on_node.resize(R);

  for (int r = 0; r < R; ++r) {
    const auto& req = s.requests[r];
    out.vnf_on_node[r].assign(req.vnf_types.size(), -1);
    if (!d.accepted[r]) continue;
    for (size_t u = 0; u < req.vnf_types.size(); ++u) {
      InstanceRef m = d.vnf_map[r][u];
      if (!m.valid()) continue;  // structural defect; the validator reports it
      if (m.type >= T || m.index >= (int)d.instance_node[m.type].size())
        throw ReferenceError("derive_loads: request " + req.id + " vnf " +
                             std::to_string(u) + " maps to unknown instance");
      out.instance_load[m.type][m.index] += req.flow_rate;
      out.instance_active[m.type][m.index] = 1;
      int n = d.instance_node[m.type][m.index];
      if (n < -1 || n >= N)
        throw ReferenceError("derive_loads: instance on unknown node");
      out.vnf_on_node[r][u] = n;
      if (n >= 0) out.node_touched[r][n] = 1;
    }
  }
  for (int t = 0; t < T; ++t)
    for (size_t i = 0; i < out.instance_load[t].size(); ++i) {
      int n = d.instance_node[t][i];
      if (n >= 0) out.node_load[n] += out.instance_load[t][i];
    }
  return out;
}

}  // namespace nfv
