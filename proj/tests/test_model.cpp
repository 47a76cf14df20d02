#include <doctest.h>

#include "fixtures.hpp"
#include "nfv/scenario_io.hpp"

using namespace nfv;

TEST_CASE("tables 3/4 scenario shape") {
  Scenario s = test::tables34_scenario();
  CHECK(s.requests.size() == 5);
  CHECK(s.types.size() == 4);
  CHECK(s.total_traffic() == doctest::Approx(3 * 20 + 3 * 30 + 2 * 30 + 2 * 40 + 4 * 40));
}

TEST_CASE("scenario json round-trip") {
  Scenario s = test::tables34_scenario();
  Scenario t = parse_scenario(scenario_to_json(s));
  REQUIRE(t.requests.size() == s.requests.size());
  REQUIRE(t.types.size() == s.types.size());
  REQUIRE(t.substrate.nodes.size() == s.substrate.nodes.size());
  REQUIRE(t.substrate.links.size() == s.substrate.links.size());
  for (size_t r = 0; r < s.requests.size(); ++r) {
    CHECK(t.requests[r].id == s.requests[r].id);
    CHECK(t.requests[r].vnf_types == s.requests[r].vnf_types);
    CHECK(t.requests[r].flow_rate == s.requests[r].flow_rate);
    CHECK(t.requests[r].revenue == s.requests[r].revenue);
    CHECK(t.requests[r].delay_threshold == s.requests[r].delay_threshold);
    CHECK(t.requests[r].link_bandwidths == s.requests[r].link_bandwidths);
  }
  CHECK(t.theta == s.theta);
  CHECK(t.substrate.bandwidth_fee == s.substrate.bandwidth_fee);
}

TEST_CASE("theta out of range rejected") {
  Scenario s = test::tables34_scenario();
  s.theta = 1.2;
  CHECK_THROWS_WITH_AS(s.check(), doctest::Contains("theta out of (0,1)"),
                       ValidationError);
}

TEST_CASE("empty request list is a valid scenario") {
  Scenario s = test::tables34_scenario();
  s.requests.clear();
  CHECK_NOTHROW(s.check());
  Scenario t = parse_scenario(scenario_to_json(s));
  CHECK(t.requests.empty());
}

TEST_CASE("malformed scenario file") {
  CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"substrate":{"nodes":[{"id":"A"}]}})"), ParseError);
}

TEST_CASE("derive_loads sums flows per instance") {
  Scenario s = test::tables34_scenario();
  Deployment d = Deployment::empty(s);
  d.instance_node = {{0}, {0}, {0}, {0}};  // one instance per type on node A
  // two VNFs with f=30 each mapped to instance (t=2 zero-based 1, i=0)
  d.accepted[1] = 1;  // chain 1: types 1,2,3 with f=30
  d.vnf_map[1][0] = {0, 0};
  d.vnf_map[1][1] = {1, 0};
  d.vnf_map[1][2] = {2, 0};
  d.accepted[2] = 1;  // chain 2: types 2,4 with f=30
  d.vnf_map[2][0] = {1, 0};
  d.vnf_map[2][1] = {3, 0};
  DerivedLoads loads = derive_loads(s, d);
  CHECK(loads.instance_load[1][0] == doctest::Approx(60));  // 30 + 30
  // chain 2 (f=30, types 2 and 4) both on node A -> contributes 60 to node A
  CHECK(loads.node_load[0] == doctest::Approx(30 * 3 + 30 * 2));
  CHECK(loads.node_touched[2][0] == 1);
  CHECK(loads.node_touched[2][1] == 0);
  CHECK(loads.instance_active[0][0] == 1);
  CHECK(loads.node_instance_flow(0, 1, 0, d) == doctest::Approx(60));
  CHECK(loads.node_instance_flow(1, 1, 0, d) == 0.0);

  // pure function: identical inputs, identical outputs
  DerivedLoads again = derive_loads(s, d);
  CHECK(again.instance_load == loads.instance_load);
  CHECK(again.node_load == loads.node_load);
}

TEST_CASE("derive_loads on empty deployment is all zero") {
  Scenario s = test::tables34_scenario();
  Deployment d = Deployment::empty(s);
  DerivedLoads loads = derive_loads(s, d);
  for (double v : loads.node_load) CHECK(v == 0.0);
}

TEST_CASE("derive_loads rejects dangling instance reference") {
  Scenario s = test::tables34_scenario();
  Deployment d = Deployment::empty(s);
  d.accepted[0] = 1;
  d.vnf_map[0][0] = {3, 5};  // instance 5 does not exist
  CHECK_THROWS_AS(derive_loads(s, d), ReferenceError);
}

TEST_CASE("graphml import expands undirected edges") {
  const char* xml = R"(<?xml version="1.0"?>
<graphml><graph edgedefault="undirected">
  <node id="a"/><node id="b"/>
  <edge source="a" target="b"/>
</graph></graphml>)";
  SubstrateNetwork net = parse_graphml(xml, ResourceProfile{});
  CHECK(net.nodes.size() == 2);
  CHECK(net.links.size() == 2);
  CHECK(net.nodes[0].cpu_capacity == 24);
  CHECK(net.nodes[0].mem_capacity == 256);
  CHECK(net.nodes[0].strg_capacity == 10000);
  CHECK(net.links[0].capacity == 10000);
  CHECK(net.links[0].prop_delay == doctest::Approx(0.5e-6));
  CHECK(is_connected(net));
}

TEST_CASE("graphml node attributes override defaults") {
  const char* xml = R"(<graphml>
<key id="d0" for="node" attr.name="cpu"/>
<graph edgedefault="undirected">
  <node id="a"><data key="d0">64</data></node>
  <node id="b"/>
  <edge source="a" target="b"/>
</graph></graphml>)";
  SubstrateNetwork net = parse_graphml(xml, ResourceProfile{});
  CHECK(net.nodes[0].cpu_capacity == 64);
  CHECK(net.nodes[1].cpu_capacity == 24);
}

TEST_CASE("graphml edge to undeclared node fails") {
  const char* xml = R"(<graphml><graph>
  <node id="a"/><edge source="a" target="ghost"/>
</graph></graphml>)";
  CHECK_THROWS_AS(parse_graphml(xml, ResourceProfile{}), ParseError);
}

TEST_CASE("bundled bteurope topology loads") {
  SubstrateNetwork net =
      import_graphml(std::string(NFV_TEST_DATA_DIR) + "/bteurope.graphml",
                     ResourceProfile{});
  CHECK(net.nodes.size() == 24);
  CHECK(net.links.size() == 2 * 37);
  CHECK(is_connected(net));
  for (const auto& n : net.nodes) {
    CHECK(n.cpu_capacity == 24);
    CHECK(n.hypervisor_rate == 2000);
  }
}

TEST_CASE("deployment json round-trip") {
  Scenario s = test::tables34_scenario();
  Deployment d = Deployment::empty(s);
  d.instance_node = {{0, 1}, {1}, {-1}, {2}};
  d.accepted[2] = 1;
  d.vnf_map[2][0] = {1, 0};
  d.vnf_map[2][1] = {3, 0};
  int e = s.substrate.link_index(1, 2);
  d.flow_split[2][0].push_back({e, 1.0});
  d.allocated_bw[e] = 30;
  std::string tmp = "/tmp/nfv_test_deployment.json";
  save_deployment(s, d, tmp);
  Deployment d2 = load_deployment(s, tmp);
  CHECK(d2.accepted == d.accepted);
  CHECK(d2.vnf_map[2][0].type == 1);
  CHECK(d2.instance_node[0] == d.instance_node[0]);
  CHECK(d2.flow_split[2][0] == d.flow_split[2][0]);
  CHECK(d2.allocated_bw[e] == 30);
}
