#pragma once

#include <random>
#include <string>
#include <vector>

#include "nfv/model.hpp"

namespace nfv::test {

// Fully connected substrate with homogeneous nodes; link delay in seconds.
inline Scenario base_scenario(int nodes, double cpu, double mem, double strg,
                              double mu_n, double sigma, double link_cap,
                              double link_delay, double rho) {
  Scenario s;
  for (int i = 0; i < nodes; ++i) {
    PhysicalNode n;
    n.id = std::string(1, char('A' + i));
    n.cpu_capacity = cpu;
    n.mem_capacity = mem;
    n.strg_capacity = strg;
    n.hypervisor_rate = mu_n;
    n.activation_cost = sigma;
    s.substrate.nodes.push_back(n);
  }
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j)
      if (i != j) s.substrate.links.push_back({i, j, link_cap, link_delay});
  s.substrate.bandwidth_fee = rho;
  return s;
}

// VNF-type catalog and SFC batch of the worked example (4 types, 5 chains).
inline Scenario tables34_scenario(int nodes = 4) {
  Scenario s = base_scenario(nodes, 400, 1000, 2000, 2000, 0.0, 1000, 1e-6, 0.0);
  const double lic[4] = {100, 150, 120, 140};
  for (int t = 0; t < 4; ++t) {
    VnfType ty;
    ty.id = std::to_string(t + 1);
    ty.cpu_req = 100;
    ty.mem_req = 150;
    ty.strg_req = 300;
    ty.service_rate = 100;
    ty.license_cost = lic[t];
    s.types.push_back(ty);
  }
  struct Row { const char* seq; double f, rev, th; };
  const Row rows[5] = {{"413", 20, 1050, 0.3},
                       {"123", 30, 1050, 0.3},
                       {"24", 30, 700, 0.2},
                       {"21", 40, 700, 0.2},
                       {"3412", 40, 1400, 0.4}};
  for (int r = 0; r < 5; ++r) {
    SfcRequest req;
    req.id = std::to_string(r);
    for (const char* p = rows[r].seq; *p; ++p) req.vnf_types.push_back(*p - '1');
    req.flow_rate = rows[r].f;
    req.link_bandwidths.assign(req.vnf_types.size() - 1, rows[r].f);
    req.revenue = rows[r].rev;
    req.delay_threshold = rows[r].th;
    s.requests.push_back(req);
  }
  s.theta = 0.7;
  s.check();
  return s;
}

// Small randomized scenario within the enumeration caps: 2-3 nodes, 2 types
// with 1-2 instances each, 1-3 chains of length 1-3. Thresholds and capacities
// are drawn wide enough that both accept and reject outcomes occur across
// seeds.
inline Scenario random_tiny_scenario(unsigned seed) {
  std::mt19937 rng(seed);
  auto real = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  auto integer = [&](int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
  };
  int nodes = integer(2, 3);
  Scenario s = base_scenario(nodes, real(150, 250), 600, 1200, real(800, 1500),
                             real(0, 100), real(200, 400), real(1e-4, 1e-3),
                             real(0, 0.5));
  for (int t = 0; t < 2; ++t) {
    VnfType ty;
    ty.id = std::to_string(t + 1);
    ty.cpu_req = real(50, 90);
    ty.mem_req = 100;
    ty.strg_req = 200;
    ty.service_rate = real(80, 150);
    ty.license_cost = real(50, 150);
    ty.max_instances = integer(1, 2);
    s.types.push_back(ty);
  }
  int chains = integer(1, 3);
  for (int r = 0; r < chains; ++r) {
    SfcRequest req;
    req.id = std::to_string(r);
    int len = integer(1, 3);
    for (int u = 0; u < len; ++u) req.vnf_types.push_back(integer(0, 1));
    req.flow_rate = real(10, 40);
    req.link_bandwidths.assign(len - 1, req.flow_rate);
    req.revenue = real(300, 1200);
    req.delay_threshold = real(0.05, 0.3);
    s.requests.push_back(req);
  }
  s.check();
  return s;
}

}  // namespace nfv::test
