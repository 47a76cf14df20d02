#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nfv/errors.hpp"
#include "nfv/exact.hpp"
#include "nfv/mldg.hpp"
#include "nfv/validate.hpp"

using namespace nfv;

namespace {

void check_result(const Scenario& s, const MldgResult& res) {
  ValidateOptions vopt;
  vopt.delay = scenario_delay_options(s);
  Deployment d = res.deployment;
  CHECK(validate(s, d, vopt).feasible());
  CHECK(economics(s, d, vopt).gain() ==
        doctest::Approx(res.economics.gain()).epsilon(1e-9));
}

}  // namespace

TEST_CASE("sizing: ceil(traffic / (theta * mu)) per requested type") {
  Scenario s = test::tables34_scenario();
  SizingPlan plan = size_instances(s);
  // type 1 carries 20+30+40+40 = 130 traffic units -> ceil(130/70) = 2
  CHECK(plan.eta == std::vector<int>{2, 2, 2, 2});
  CHECK(plan.theta == 0.7);

  SUBCASE("an unrequested type gets zero instances") {
    VnfType idle = s.types[0];
    idle.id = "5";
    s.types.push_back(idle);
    s.check();
    CHECK(size_instances(s).eta == std::vector<int>{2, 2, 2, 2, 0});
  }

  SUBCASE("exact-multiple traffic sits on the ceil boundary") {
    s.requests.resize(1);
    s.requests[0].vnf_types = {0};
    s.requests[0].link_bandwidths.clear();
    s.requests[0].flow_rate = 70;  // = theta * mu exactly
    s.check();
    CHECK(size_instances(s).eta == std::vector<int>{1, 0, 0, 0});
  }

  SUBCASE("max_instances caps the plan") {
    s.types[0].max_instances = 1;
    s.check();
    CHECK(size_instances(s).eta == std::vector<int>{1, 2, 2, 2});
  }

  SUBCASE("theta outside (0,1) is rejected") {
    s.theta = 1.0;
    CHECK_THROWS_AS(size_instances(s), ValidationError);
  }
}

TEST_CASE("placement: highest-priority type seeds the first cluster") {
  Scenario s = test::tables34_scenario();
  auto placement = place_instances(s, size_instances(s));
  // priorities eta*Lambda: type1 2*6=12, type2 2*5=10, type4 2*4=8, type3 2*3=6;
  // homogeneous nodes so the first opened node is node 0 and type 1 seeds it
  REQUIRE(placement.size() == 4);
  for (const auto& p : placement) CHECK(p.size() == 2);
  CHECK(placement[0][0] == 0);
  // 8 instances at 100 cpu on 400-cpu nodes: exactly two nodes opened
  for (const auto& p : placement)
    for (int n : p) CHECK(n <= 1);
}

TEST_CASE("placement: adjacent types share a node when capacity allows") {
  // two types always chained together, one node big enough for both
  Scenario s = test::base_scenario(2, 220, 1000, 2000, 2000, 0, 1000, 1e-6, 0);
  for (int t = 0; t < 2; ++t) {
    VnfType ty;
    ty.id = std::to_string(t + 1);
    ty.cpu_req = 100;
    ty.mem_req = 150;
    ty.strg_req = 300;
    ty.service_rate = 100;
    ty.license_cost = 100;
    s.types.push_back(ty);
  }
  SfcRequest r;
  r.id = "0";
  r.vnf_types = {0, 1};
  r.flow_rate = 30;
  r.link_bandwidths = {30};
  r.revenue = 900;
  r.delay_threshold = 0.2;
  s.requests.push_back(r);
  s.check();
  auto placement = place_instances(s, size_instances(s));
  REQUIRE(placement[0].size() == 1);
  REQUIRE(placement[1].size() == 1);
  CHECK(placement[0][0] == placement[1][0]);
}

TEST_CASE("placement: exhausted substrate throws") {
  Scenario s = test::tables34_scenario(1);  // 8 instances, one 400-cpu node
  CHECK_THROWS_AS(place_instances(s, size_instances(s)), SubstrateExhausted);

  SUBCASE("an instance too large for any node also throws") {
    Scenario big = test::tables34_scenario();
    big.types[2].cpu_req = 500;
    big.check();
    CHECK_THROWS_AS(place_instances(big, size_instances(big)),
                    SubstrateExhausted);
  }
}

TEST_CASE("mapping: empty request batch yields the empty deployment") {
  Scenario s = test::tables34_scenario();
  s.requests.clear();
  MldgResult res = run_mldg(s);
  CHECK(res.deployment.is_empty());
  CHECK(res.economics.gain() == 0);
  CHECK(!res.numerical_issue);
}

TEST_CASE("worked-example batch: every chain lands, validator-clean") {
  Scenario s = test::tables34_scenario();
  MldgResult res = run_mldg(s);
  check_result(s, res);
  CHECK(!res.numerical_issue);
  for (char a : res.deployment.accepted) CHECK(a == 1);
  // optimum is 4140; the heuristic may pay extra activations but not much
  CHECK(res.economics.gain() >= 0.9 * 4140);
  CHECK(res.economics.gain() <= 4140 + 1e-6);
}

TEST_CASE("heuristic never beats the exact optimum, stays near it on average") {
  double ratio_sum = 0;
  int compared = 0;
  for (unsigned seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    Scenario s = test::random_tiny_scenario(seed);
    ExactResult en = enumerate_exact(s);
    MldgResult heur = [&] {
      try {
        return run_mldg(s);
      } catch (const SubstrateExhausted&) {
        MldgResult empty;
        empty.deployment = Deployment::empty(s);
        return empty;
      }
    }();
    double mg = heur.economics.gain();
    CHECK(mg <= en.gain + 1e-9 * std::max(1.0, std::fabs(en.gain)));
    if (!heur.deployment.instance_node.empty()) check_result(s, heur);
    if (en.gain > 0) {
      ratio_sum += mg / en.gain;
      ++compared;
    }
  }
  REQUIRE(compared > 5);
  CHECK(ratio_sum / compared >= 0.9);
}

TEST_CASE("resolve budget: exhausting it rejects the remaining chains") {
  Scenario s = test::tables34_scenario();
  MldgOptions opt;
  opt.max_resolve = 1;  // only the root relaxation
  MldgResult res = run_mldg(s, opt);
  check_result(s, res);
  CHECK(res.resolves == 1);
  for (char a : res.deployment.accepted) CHECK(a == 0);
}

TEST_CASE("deterministic: identical reruns bit for bit") {
  Scenario s = test::tables34_scenario();
  MldgResult a = run_mldg(s);
  MldgResult b = run_mldg(s);
  CHECK(a.economics.gain() == b.economics.gain());
  CHECK(a.resolves == b.resolves);
  CHECK(a.placement == b.placement);
  CHECK(a.deployment.accepted == b.deployment.accepted);
}

TEST_CASE("capacity scaling: theta sweeps run clean at every setting") {
  for (double theta : {0.3, 0.5, 0.7, 0.9}) {
    CAPTURE(theta);
    Scenario s = test::tables34_scenario();
    s.theta = theta;
    MldgResult res = run_mldg(s);
    check_result(s, res);
    CHECK(res.economics.gain() >= 0);
  }
}
