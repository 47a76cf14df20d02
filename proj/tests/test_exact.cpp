#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nfv/errors.hpp"
#include "nfv/exact.hpp"
#include "nfv/validate.hpp"

using namespace nfv;

namespace {

// one node, one chain of one VNF, ample resources
Scenario one_chain_scenario(double revenue) {
  Scenario s = test::base_scenario(1, 400, 1000, 2000, 2000, 50, 1000, 1e-6, 0);
  VnfType t;
  t.id = "1";
  t.cpu_req = 100;
  t.mem_req = 150;
  t.strg_req = 300;
  t.service_rate = 100;
  t.license_cost = 120;
  t.max_instances = 1;
  s.types.push_back(t);
  SfcRequest r;
  r.id = "0";
  r.vnf_types = {0};
  r.flow_rate = 50;
  r.revenue = revenue;
  r.delay_threshold = 0.1;
  s.requests.push_back(r);
  s.check();
  return s;
}

void check_result(const Scenario& s, const ExactResult& res) {
  ValidateOptions vopt;
  vopt.delay = scenario_delay_options(s);
  CHECK(validate(s, res.deployment, vopt).feasible());
  CHECK(res.gap >= 0);
  CHECK(res.bound >= res.gain - 1e-9);
  CHECK(economics(s, res.deployment, vopt).gain() ==
        doctest::Approx(res.gain).epsilon(1e-9));
}

}  // namespace

TEST_CASE("profitable single chain is accepted, gain = rev - license - sigma") {
  Scenario s = one_chain_scenario(1000);
  // accepted: 1000 - 120 (license) - 50 (node activation) = 830
  ExactResult en = enumerate_exact(s);
  CHECK(en.gain == doctest::Approx(830).epsilon(1e-9));
  CHECK(en.deployment.accepted[0] == 1);
  CHECK(en.combinations == 2);  // reject + one placement
  ExactResult bb = solve_exact(s);
  CHECK(bb.gain == doctest::Approx(830).epsilon(1e-6));
  CHECK(bb.deployment.accepted[0] == 1);
  check_result(s, en);
  check_result(s, bb);
}

TEST_CASE("chain with revenue below cost is rejected") {
  Scenario s = one_chain_scenario(150);  // cost is 170
  ExactResult en = enumerate_exact(s);
  CHECK(en.gain == doctest::Approx(0).epsilon(1e-12));
  CHECK(en.deployment.is_empty());
  ExactResult bb = solve_exact(s);
  CHECK(bb.gain == doctest::Approx(0).epsilon(1e-12));
  CHECK(bb.deployment.is_empty());
}

TEST_CASE("enumeration combination count: 1 chain, 1 instance, 2 nodes") {
  Scenario s = one_chain_scenario(1000);
  PhysicalNode second = s.substrate.nodes[0];
  second.id = "B";
  s.substrate.nodes.push_back(second);
  s.substrate.links.push_back({0, 1, 1000, 1e-6});
  s.substrate.links.push_back({1, 0, 1000, 1e-6});
  s.check();
  ExactResult en = enumerate_exact(s);
  CHECK(en.combinations == 3);  // reject + 2 placements
  CHECK(en.gain == doctest::Approx(830).epsilon(1e-9));
}

TEST_CASE("enumeration caps raise cap-exceeded") {
  Scenario many = test::random_tiny_scenario(1);
  while (many.requests.size() <= 4) {
    SfcRequest req = many.requests[0];
    req.id = std::to_string(many.requests.size());
    many.requests.push_back(req);
  }
  many.check();
  CHECK_THROWS_AS(enumerate_exact(many), CapExceeded);

  Scenario deep = test::random_tiny_scenario(1);
  deep.requests[0].vnf_types = {0, 1, 0, 1};
  deep.requests[0].link_bandwidths.assign(3, deep.requests[0].flow_rate);
  deep.check();
  CHECK_THROWS_AS(enumerate_exact(deep), CapExceeded);

  Scenario wide = test::tables34_scenario(5);
  CHECK_THROWS_AS(enumerate_exact(wide), CapExceeded);
}

TEST_CASE("branch-and-bound matches the enumeration oracle on 30 tiny scenarios") {
  int accepted_somewhere = 0;
  for (unsigned seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    Scenario s = test::random_tiny_scenario(seed);
    ExactResult en = enumerate_exact(s);
    ExactResult bb = solve_exact(s);
    CHECK(std::fabs(bb.gain - en.gain) <=
          1e-6 * std::max({1.0, std::fabs(bb.gain), std::fabs(en.gain)}));
    check_result(s, en);
    check_result(s, bb);
    if (!en.deployment.is_empty()) ++accepted_somewhere;
  }
  CHECK(accepted_somewhere > 10);  // the corpus is not trivially all-reject
}

TEST_CASE("appending a request never lowers the optimal gain") {
  for (unsigned seed = 40; seed < 46; ++seed) {
    CAPTURE(seed);
    Scenario full = test::random_tiny_scenario(seed);
    if (full.requests.size() < 2) continue;
    Scenario prefix = full;
    prefix.requests.pop_back();
    prefix.check();
    ExactResult small = solve_exact(prefix);
    ExactResult big = solve_exact(full);
    CHECK(big.gain >= small.gain - 1e-9);
  }
}

TEST_CASE("deterministic search: identical reruns bit for bit") {
  Scenario s = test::random_tiny_scenario(7);
  ExactResult a = solve_exact(s);
  ExactResult b = solve_exact(s);
  CHECK(a.gain == b.gain);
  CHECK(a.bound == b.bound);
  CHECK(a.nodes_explored == b.nodes_explored);
}

TEST_CASE("worked-example batch solves to proven optimality") {
  Scenario s = test::tables34_scenario();
  ExactResult res = solve_exact(s, 0.0, 300.0);
  REQUIRE(!res.timed_out);
  CHECK(res.gain == doctest::Approx(4140).epsilon(1e-6));
  CHECK(res.gap <= 1e-6);
  for (char a : res.deployment.accepted) CHECK(a == 1);
  check_result(s, res);
}

TEST_CASE("time limit returns an honest incumbent") {
  Scenario s = test::tables34_scenario();
  ExactResult res = solve_exact(s, 0.0, 0.5);
  check_result(s, res);
  if (res.timed_out) CHECK(res.gap > 0);
  CHECK(res.wall_time < 30);
}
