#include "nfv/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nfv {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << text;
}

double num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ParseError(where + ": missing field '" + key + "'");
  if (!j[key].is_number())
    throw ParseError(where + ": field '" + key + "' must be numeric");
  return j[key].get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j[key].get<double>() : fallback;
}

std::string str(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j[key].is_string() ? j[key].get<std::string>()
                            : j[key].dump();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  Scenario s;
  const json& sub = j.value("substrate", json::object());
  for (const auto& jn : sub.value("nodes", json::array())) {
    PhysicalNode n;
    n.id = str(jn, "id", "substrate.nodes");
    n.cpu_capacity = num(jn, "cpu", "node " + n.id);
    n.mem_capacity = num(jn, "mem", "node " + n.id);
    n.strg_capacity = num(jn, "strg", "node " + n.id);
    n.hypervisor_rate = num(jn, "mu", "node " + n.id);
    n.activation_cost = num_or(jn, "sigma", 0.0);
    s.substrate.nodes.push_back(n);
  }
  for (const auto& jl : sub.value("links", json::array())) {
    std::string from = str(jl, "from", "substrate.links");
    std::string to = str(jl, "to", "substrate.links");
    int a = s.substrate.node_index(from), b = s.substrate.node_index(to);
    if (a < 0) throw ParseError("substrate.links: unknown node " + from);
    if (b < 0) throw ParseError("substrate.links: unknown node " + to);
    PhysicalLink l;
    l.from = a;
    l.to = b;
    l.capacity = num(jl, "capacity", "link " + from + "-" + to);
    l.prop_delay = num(jl, "delay", "link " + from + "-" + to);
    s.substrate.links.push_back(l);
    if (!jl.value("directed", false)) {
      std::swap(l.from, l.to);
      s.substrate.links.push_back(l);
    }
  }
  const json& eco = j.value("economics", json::object());
  s.substrate.bandwidth_fee = num_or(eco, "bandwidth_fee", 0.0);

  for (const auto& jt : j.value("types", json::array())) {
    VnfType t;
    t.id = str(jt, "id", "types");
    t.cpu_req = num(jt, "cpu", "type " + t.id);
    t.mem_req = num(jt, "mem", "type " + t.id);
    t.strg_req = num(jt, "strg", "type " + t.id);
    t.service_rate = num(jt, "mu", "type " + t.id);
    t.license_cost = num(jt, "license", "type " + t.id);
    t.max_instances = (int)num_or(jt, "max_instances", 0);
    s.types.push_back(t);
  }
  for (const auto& jr : j.value("requests", json::array())) {
    SfcRequest r;
    r.id = str(jr, "id", "requests");
    if (!jr.contains("vnfs") || !jr["vnfs"].is_array())
      throw ParseError("request " + r.id + ": missing vnfs list");
    for (const auto& tv : jr["vnfs"]) {
      std::string tid = tv.is_string() ? tv.get<std::string>() : tv.dump();
      int ti = s.type_index(tid);
      if (ti < 0)
        throw ValidationError("requests." + r.id + ".vnfs", "unknown type " + tid);
      r.vnf_types.push_back(ti);
    }
    r.flow_rate = num(jr, "flow", "request " + r.id);
    if (jr.contains("bandwidths")) {
      for (const auto& w : jr["bandwidths"]) r.link_bandwidths.push_back(w.get<double>());
    } else {
      // default: each virtual link carries the chain's flow
      r.link_bandwidths.assign(r.vnf_types.size() > 0 ? r.vnf_types.size() - 1 : 0,
                               r.flow_rate);
    }
    r.revenue = num(jr, "revenue", "request " + r.id);
    r.delay_threshold = num(jr, "delay_threshold", "request " + r.id);
    s.requests.push_back(r);
  }
  const json& par = j.value("params", json::object());
  s.theta = num_or(par, "theta", 0.7);
  s.fixed_delay = par.value("delay_model", "queuing") == std::string("fixed");
  s.fixed_node_delay = num_or(par, "fixed_node_delay", 3e-6);
  s.check();
  return s;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(read_file(path));
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["substrate"]["nodes"] = json::array();
  for (const auto& n : s.substrate.nodes)
    j["substrate"]["nodes"].push_back({{"id", n.id},
                                       {"cpu", n.cpu_capacity},
                                       {"mem", n.mem_capacity},
                                       {"strg", n.strg_capacity},
                                       {"mu", n.hypervisor_rate},
                                       {"sigma", n.activation_cost}});
  // emitted in directed form to keep the round-trip exact
  j["substrate"]["links"] = json::array();
  for (const auto& l : s.substrate.links)
    j["substrate"]["links"].push_back({{"from", s.substrate.nodes[l.from].id},
                                       {"to", s.substrate.nodes[l.to].id},
                                       {"capacity", l.capacity},
                                       {"delay", l.prop_delay},
                                       {"directed", true}});
  j["types"] = json::array();
  for (const auto& t : s.types)
    j["types"].push_back({{"id", t.id},
                          {"cpu", t.cpu_req},
                          {"mem", t.mem_req},
                          {"strg", t.strg_req},
                          {"mu", t.service_rate},
                          {"license", t.license_cost},
                          {"max_instances", t.max_instances}});
  j["requests"] = json::array();
  for (const auto& r : s.requests) {
    json jr = {{"id", r.id},
               {"flow", r.flow_rate},
               {"revenue", r.revenue},
               {"delay_threshold", r.delay_threshold},
               {"bandwidths", r.link_bandwidths}};
    jr["vnfs"] = json::array();
    for (int t : r.vnf_types) jr["vnfs"].push_back(s.types[t].id);
    j["requests"].push_back(jr);
  }
  j["economics"] = {{"bandwidth_fee", s.substrate.bandwidth_fee}};
  j["params"] = {{"theta", s.theta},
                 {"delay_model", s.fixed_delay ? "fixed" : "queuing"},
                 {"fixed_node_delay", s.fixed_node_delay},
                 {"units", {{"delay", "seconds"},
                            {"rate", "traffic-units/s"},
                            {"capacity", "cores-or-GB"}}}};
  return j.dump(2);
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_file(path, scenario_to_json(s));
}

Deployment load_deployment(const Scenario& s, const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("deployment: ") + e.what());
  }
  Deployment d = Deployment::empty(s);
  for (const auto& rid : j.value("accepted", json::array())) {
    std::string id = rid.get<std::string>();
    bool found = false;
    for (size_t r = 0; r < s.requests.size(); ++r)
      if (s.requests[r].id == id) { d.accepted[r] = 1; found = true; }
    if (!found) throw ReferenceError("deployment: unknown request " + id);
  }
  for (const auto& ji : j.value("instances", json::array())) {
    int t = s.type_index(str(ji, "type", "instances"));
    if (t < 0) throw ReferenceError("deployment: unknown type");
    int i = (int)num(ji, "index", "instances");
    int n = s.substrate.node_index(str(ji, "node", "instances"));
    if (n < 0) throw ReferenceError("deployment: unknown node");
    if ((int)d.instance_node[t].size() <= i) d.instance_node[t].resize(i + 1, -1);
    d.instance_node[t][i] = n;
  }
  for (const auto& jm : j.value("vnf_map", json::array())) {
    std::string rid = str(jm, "request", "vnf_map");
    int r = -1;
    for (size_t k = 0; k < s.requests.size(); ++k)
      if (s.requests[k].id == rid) r = (int)k;
    if (r < 0) throw ReferenceError("deployment: unknown request " + rid);
    int u = (int)num(jm, "position", "vnf_map");
    int t = s.type_index(str(jm, "type", "vnf_map"));
    int i = (int)num(jm, "instance", "vnf_map");
    if (u < 0 || u >= (int)d.vnf_map[r].size())
      throw ReferenceError("deployment: position out of range for " + rid);
    if (t < 0) throw ReferenceError("deployment: unknown type in vnf_map");
    d.vnf_map[r][u] = {t, i};
  }
  for (const auto& jf : j.value("flows", json::array())) {
    std::string rid = str(jf, "request", "flows");
    int r = -1;
    for (size_t k = 0; k < s.requests.size(); ++k)
      if (s.requests[k].id == rid) r = (int)k;
    if (r < 0) throw ReferenceError("deployment: unknown request " + rid);
    int vl = (int)num(jf, "vlink", "flows");
    int a = s.substrate.node_index(str(jf, "from", "flows"));
    int b = s.substrate.node_index(str(jf, "to", "flows"));
    int e = s.substrate.link_index(a, b);
    if (e < 0) throw ReferenceError("deployment: unknown physical link in flows");
    if (vl < 0 || vl >= (int)d.flow_split[r].size())
      throw ReferenceError("deployment: vlink out of range for " + rid);
    d.flow_split[r][vl].push_back({e, num(jf, "fraction", "flows")});
  }
  if (j.contains("allocated_bw")) {
    for (const auto& jb : j["allocated_bw"]) {
      int a = s.substrate.node_index(str(jb, "from", "allocated_bw"));
      int b = s.substrate.node_index(str(jb, "to", "allocated_bw"));
      int e = s.substrate.link_index(a, b);
      if (e < 0) throw ReferenceError("deployment: unknown link in allocated_bw");
      d.allocated_bw[e] = num(jb, "bw", "allocated_bw");
    }
  }
  return d;
}

std::string deployment_to_json(const Scenario& s, const Deployment& d) {
  json j;
  j["accepted"] = json::array();
  for (size_t r = 0; r < s.requests.size(); ++r)
    if (d.accepted[r]) j["accepted"].push_back(s.requests[r].id);
  j["instances"] = json::array();
  for (size_t t = 0; t < d.instance_node.size(); ++t)
    for (size_t i = 0; i < d.instance_node[t].size(); ++i)
      if (d.instance_node[t][i] >= 0)
        j["instances"].push_back({{"type", s.types[t].id},
                                  {"index", (int)i},
                                  {"node", s.substrate.nodes[d.instance_node[t][i]].id}});
  j["vnf_map"] = json::array();
  for (size_t r = 0; r < d.vnf_map.size(); ++r)
    for (size_t u = 0; u < d.vnf_map[r].size(); ++u)
      if (d.vnf_map[r][u].valid())
        j["vnf_map"].push_back({{"request", s.requests[r].id},
                                {"position", (int)u},
                                {"type", s.types[d.vnf_map[r][u].type].id},
                                {"instance", d.vnf_map[r][u].index}});
  j["flows"] = json::array();
  for (size_t r = 0; r < d.flow_split.size(); ++r)
    for (size_t vl = 0; vl < d.flow_split[r].size(); ++vl)
      for (const auto& [e, frac] : d.flow_split[r][vl])
        j["flows"].push_back({{"request", s.requests[r].id},
                              {"vlink", (int)vl},
                              {"from", s.substrate.nodes[s.substrate.links[e].from].id},
                              {"to", s.substrate.nodes[s.substrate.links[e].to].id},
                              {"fraction", frac}});
  j["allocated_bw"] = json::array();
  for (size_t e = 0; e < d.allocated_bw.size(); ++e)
    if (d.allocated_bw[e] > 0)
      j["allocated_bw"].push_back({{"from", s.substrate.nodes[s.substrate.links[e].from].id},
                                   {"to", s.substrate.nodes[s.substrate.links[e].to].id},
                                   {"bw", d.allocated_bw[e]}});
  return j.dump(2);
}

void save_deployment(const Scenario& s, const Deployment& d, const std::string& path) {
  write_file(path, deployment_to_json(s, d));
}

bool is_connected(const SubstrateNetwork& net) {
  if (net.nodes.empty()) return true;
  std::vector<std::vector<int>> adj(net.nodes.size());
  for (const auto& l : net.links) adj[l.from].push_back(l.to);
  for (int start = 0; start < (int)net.nodes.size(); ++start) {
    std::vector<char> seen(net.nodes.size(), 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    size_t count = 1;
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      for (int m : adj[n])
        if (!seen[m]) { seen[m] = 1; ++count; stack.push_back(m); }
    }
    if (count != net.nodes.size()) return false;
  }
  return true;
}

}  // namespace nfv
