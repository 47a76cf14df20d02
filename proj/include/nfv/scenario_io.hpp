#pragma once

#include <string>

#include "nfv/model.hpp"

namespace nfv {

// Scenario files are JSON with sections substrate/types/requests/economics/
// params. All delays are seconds, rates traffic-units/s, capacities in
// cores/GB. Undirected links ("directed": false, the default) expand to two
// directed PhysicalLinks.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
void save_scenario(const Scenario& s, const std::string& path);
std::string scenario_to_json(const Scenario& s);

// Deployment files pair with a scenario; ids are resolved on load.
Deployment load_deployment(const Scenario& s, const std::string& path);
void save_deployment(const Scenario& s, const Deployment& d, const std::string& path);
std::string deployment_to_json(const Scenario& s, const Deployment& d);

// Fill-in values for GraphML nodes/edges that carry no attributes.
struct ResourceProfile {
  double cpu = 24, mem = 256, strg = 10000;   // BtEurope NFVI defaults
  double mu_n = 2000, sigma = 1000;
  double link_capacity = 10000;
  double link_delay = 0.5e-6;
  double bandwidth_fee = 10;
};

// Minimal GraphML subset: <node id=...>, <edge source=... target=...>,
// numeric <data> attributes cpu/mem/strg/mu_n on nodes and capacity/delay on
// edges. Each undirected edge becomes two directed links.
SubstrateNetwork import_graphml(const std::string& path, const ResourceProfile& defaults);
SubstrateNetwork parse_graphml(const std::string& xml_text, const ResourceProfile& defaults);

// True when every node can reach every other along directed links.
bool is_connected(const SubstrateNetwork& net);

}  // namespace nfv
