#include "nfv/delay.hpp"

namespace nfv {

double mm1_delay(double mu, double lambda, double eps_stab_factor) {
  if (mu <= 0) throw InstabilityError(mu, lambda);
  if (lambda < 0) throw ValidationError("lambda", "arrival rate must be >= 0");
  if (lambda >= mu - eps_stab_factor * mu) throw InstabilityError(mu, lambda);
  return 1.0 / (mu - lambda);
}

double node_delay(const Scenario& s, int n, const DerivedLoads& loads,
                  const DelayOptions& opt) {
  if (n < 0 || n >= (int)s.substrate.nodes.size())
    throw ReferenceError("node_delay: unknown node");
  if (opt.mode == DelayMode::Fixed) return opt.fixed_node_delay;
  return mm1_delay(s.substrate.nodes[n].hypervisor_rate, loads.node_load[n],
                   opt.eps_stab_factor);
}

double instance_delay(const Scenario& s, int t, int i, const DerivedLoads& loads,
                      const DelayOptions& opt) {
  if (t < 0 || t >= (int)s.types.size() ||
      i < 0 || i >= (int)loads.instance_load[t].size())
    throw ReferenceError("instance_delay: unknown instance");
  if (opt.mode == DelayMode::Fixed) return 0.0;
  return mm1_delay(s.types[t].service_rate, loads.instance_load[t][i],
                   opt.eps_stab_factor);
}

DelayBreakdown chain_delay(const Scenario& s, const Deployment& d, int r,
                           const DerivedLoads& loads, const DelayOptions& opt) {
  if (r < 0 || r >= (int)s.requests.size())
    throw ReferenceError("chain_delay: unknown request");
  const auto& req = s.requests[r];
  DelayBreakdown out;

  // hypervisor: once per touched node (alpha_n^r), not once per VNF
  for (int n = 0; n < (int)s.substrate.nodes.size(); ++n)
    if (loads.node_touched[r][n]) out.hypervisor += node_delay(s, n, loads, opt);

  for (size_t u = 0; u < req.vnf_types.size(); ++u) {
    InstanceRef m = d.vnf_map[r][u];
    if (!m.valid() || loads.vnf_on_node[r][u] < 0)
      throw ReferenceError("chain_delay: request " + req.id + " vnf " +
                           std::to_string(u) + " is unmapped");
    out.instance += instance_delay(s, m.type, m.index, loads, opt);
  }

  // co-located consecutive VNFs have no flow split entries, contributing zero
  for (size_t vl = 0; vl < d.flow_split[r].size(); ++vl)
    for (const auto& [e, frac] : d.flow_split[r][vl])
      out.link += s.substrate.links[e].prop_delay * frac;
  return out;
}

DelayBreakdown chain_delay(const Scenario& s, const Deployment& d, int r,
                           const DelayOptions& opt) {
  return chain_delay(s, d, r, derive_loads(s, d), opt);
}

}  // namespace nfv
