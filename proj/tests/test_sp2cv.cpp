#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nfv/sp2cv.hpp"
#include "nfv/validate.hpp"

using namespace nfv;

namespace {

// capacity-feasible placement for the worked-example scenario: two instances
// of each type, types 1/2 on nodes A,B and types 3/4 on nodes C,D
std::vector<std::vector<int>> tables34_placement() {
  return {{0, 1}, {0, 1}, {2, 3}, {2, 3}};
}

}  // namespace

TEST_CASE("zero requests solve to objective zero") {
  Scenario s = test::tables34_scenario();
  s.requests.clear();
  Sp2Solver solver(s, tables34_placement());
  RelaxedSolution sol = solver.solve();
  REQUIRE(sol.status == Sp2Status::Optimal);
  CHECK(sol.objective == doctest::Approx(0).epsilon(1e-9));
}

TEST_CASE("placement violating node capacity is rejected up front") {
  Scenario s = test::tables34_scenario();
  // five instances of 100 cpu each on one 400-cpu node
  CHECK_THROWS_AS(Sp2Solver(s, std::vector<std::vector<int>>{{0, 0, 0}, {0, 0}, {}, {}}),
                  ValidationError);
}

TEST_CASE("forced-accept chain with zero delay threshold is infeasible") {
  Scenario s = test::tables34_scenario();
  s.requests.resize(1);  // chain 0: types 4,1,3
  s.requests[0].delay_threshold = 0;
  Sp2Solver solver(s, std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
  solver.fix_accept(0, 1);
  RelaxedSolution sol = solver.solve();
  CHECK(sol.status == Sp2Status::Infeasible);
}

TEST_CASE("degenerate fixing reproduces a known deployment's gain") {
  Scenario s = test::tables34_scenario();
  // only chain 2 (types 2,4) accepted, co-located: gain 700 - 290 = 410
  Sp2Solver solver(s, std::vector<std::vector<int>>{{}, {0}, {}, {0}});
  for (int r : {0, 1, 3, 4}) solver.reject_chain(r);
  solver.fix_accept(2, 1);
  solver.fix_assign(2, 0, 0, 1);
  solver.fix_assign(2, 1, 0, 1);
  RelaxedSolution sol = solver.solve();
  REQUIRE(sol.status == Sp2Status::Optimal);
  CHECK(sol.objective == doctest::Approx(410).epsilon(1e-6));
  CHECK(sol.accept[2] == doctest::Approx(1));
  // at the integral fixing the extracted delays are the exact queuing values
  CHECK(sol.instance_load[1][0] == doctest::Approx(30));
  CHECK(sol.instance_delay[1][0] == doctest::Approx(1.0 / 70).epsilon(1e-9));
  CHECK(sol.node_load[0] == doctest::Approx(60));
  CHECK(sol.node_delay[0] == doctest::Approx(1.0 / 1940).epsilon(1e-9));
}

TEST_CASE("infeasible fixing: two VNFs forced onto an over-capacity instance") {
  Scenario s = test::tables34_scenario();
  s.requests.resize(1);
  s.requests[0].vnf_types = {0, 0};  // same type twice
  s.requests[0].flow_rate = 60;      // 2*60 > mu_t = 100
  s.requests[0].link_bandwidths = {60};
  Sp2Solver solver(s, std::vector<std::vector<int>>{{0}, {}, {}, {}});
  solver.fix_accept(0, 1);
  solver.fix_assign(0, 0, 0, 1);
  solver.fix_assign(0, 1, 0, 1);
  RelaxedSolution sol = solver.solve();
  CHECK(sol.status == Sp2Status::Infeasible);
}

TEST_CASE("root relaxation bounds integral completions and fixings only hurt") {
  Scenario s = test::tables34_scenario();
  Sp2Solver solver(s, tables34_placement());
  RelaxedSolution root = solver.solve();
  REQUIRE(root.status == Sp2Status::Optimal);
  CHECK(root.objective >= 410 - 1e-6);  // one known integral completion

  // relaxation dominance: every fixing can only lower the objective
  double prev = root.objective;
  solver.fix_accept(2, 1);
  RelaxedSolution a = solver.solve();
  REQUIRE(a.status == Sp2Status::Optimal);
  CHECK(a.objective <= prev + 1e-6);
  solver.fix_assign(2, 0, 0, 1);
  RelaxedSolution b = solver.solve();
  REQUIRE(b.status == Sp2Status::Optimal);
  CHECK(b.objective <= a.objective + 1e-6);

  // and releasing restores the root value
  solver.release_chain(2);
  RelaxedSolution again = solver.solve();
  REQUIRE(again.status == Sp2Status::Optimal);
  CHECK(again.objective == doctest::Approx(root.objective).epsilon(1e-6));
}

TEST_CASE("two-node split matches a dense grid-search oracle") {
  // one chain, one VNF, an instance of its type on each of two nodes with
  // different activation costs; the relaxation trades activation cost against
  // the delay of concentrating load
  Scenario s = test::base_scenario(2, 400, 1000, 2000, 2000, 0, 1000, 1e-6, 0);
  s.substrate.nodes[0].activation_cost = 50;
  s.substrate.nodes[1].activation_cost = 200;
  VnfType t;
  t.id = "1";
  t.cpu_req = 100;
  t.mem_req = 150;
  t.strg_req = 300;
  t.service_rate = 100;
  t.license_cost = 100;
  s.types.push_back(t);
  SfcRequest r;
  r.id = "0";
  r.vnf_types = {0};
  r.flow_rate = 80;
  r.revenue = 1000;
  r.delay_threshold = 0.03;
  s.requests.push_back(r);
  s.check();

  Sp2Solver solver(s, std::vector<std::vector<int>>{{0, 1}});
  RelaxedSolution sol = solver.solve();
  REQUIRE(sol.status == Sp2Status::Optimal);

  // oracle over (A, s0) with s1 = A - s0, replicating the model's big-M
  const double mu_t = 100, mu_n = 2000, f = 80, th = 0.03;
  const double M = std::max({th, 1 / mu_n, 1 / mu_t});
  // loaded queues never exceed the delay the largest threshold allows
  const double cap_t = std::min(mu_t * (1 - 1e-6), mu_t - 1 / th);
  const double cap_n = std::min(mu_n * (1 - 1e-6), mu_n - 1 / th);
  double best = 0;
  for (int ai = 0; ai <= 100; ++ai) {
    double A = ai / 100.0;
    for (int k = 0; k <= 20000; ++k) {
      double s0 = A * k / 20000.0, s1 = A - s0;
      if (f * s0 > cap_t || f * s1 > cap_t) continue;
      if (f * (s0 + s1) > 2 * cap_n) continue;
      double q = std::max({0.0, 1 / (mu_t - f * s0) - M * (1 - s0),
                           1 / (mu_t - f * s1) - M * (1 - s1)});
      double l0 = std::max(0.0, 1 / (mu_n - f * s0) - M * (1 - s0));
      double l1 = std::max(0.0, 1 / (mu_n - f * s1) - M * (1 - s1));
      if (q + l0 + l1 > th) continue;
      (void)cap_n;
      double gain = 1000 * A - 100 * (s0 + s1) - 50 * s0 - 200 * s1;
      best = std::max(best, gain);
    }
  }
  CHECK(sol.objective == doctest::Approx(best).epsilon(1e-4));
  // the split is genuinely fractional (integral placements are infeasible)
  CHECK(sol.assign[0][0][0] < 1 - 1e-3);
  CHECK(sol.assign[0][0][0] > 1e-3);
}

TEST_CASE("fixed-delay mode: full acceptance infeasible under a tiny threshold") {
  Scenario s = test::tables34_scenario();
  s.fixed_delay = true;
  s.requests.resize(1);
  s.requests[0].delay_threshold = 1e-6;  // below the 3us fixed node delay
  Sp2Options opt;
  opt.delay = scenario_delay_options(s);
  Sp2Solver solver(s, std::vector<std::vector<int>>{{0}, {1}, {2}, {3}}, opt);
  RelaxedSolution relaxed = solver.solve();
  REQUIRE(relaxed.status == Sp2Status::Optimal);
  CHECK(relaxed.accept[0] < 0.5);  // fractional acceptance only
  CHECK(relaxed.cut_rounds == 0);  // no queuing cuts in fixed mode
  solver.fix_accept(0, 1);
  RelaxedSolution forced = solver.solve();
  CHECK(forced.status == Sp2Status::Infeasible);
}

TEST_CASE("fixed-delay mode accepts when the threshold covers the constants") {
  Scenario s = test::tables34_scenario();
  s.fixed_delay = true;
  for (auto& r : s.requests) r.delay_threshold = 1e-3;
  Sp2Options opt;
  opt.delay = scenario_delay_options(s);
  Sp2Solver solver(s, tables34_placement(), opt);
  RelaxedSolution sol = solver.solve();
  REQUIRE(sol.status == Sp2Status::Optimal);
  CHECK(sol.objective > 0);
}

TEST_CASE("free-placement form: single profitable chain") {
  Scenario s = test::base_scenario(2, 400, 1000, 2000, 2000, 100, 1000, 1e-6, 0);
  VnfType t;
  t.id = "1";
  t.cpu_req = 100;
  t.mem_req = 150;
  t.strg_req = 300;
  t.service_rate = 100;
  t.license_cost = 300;
  s.types.push_back(t);
  SfcRequest r;
  r.id = "0";
  r.vnf_types = {0};
  r.flow_rate = 20;
  r.revenue = 1000;
  r.delay_threshold = 0.3;
  s.requests.push_back(r);
  s.check();
  Sp2Solver solver(s, std::vector<int>{1});
  RelaxedSolution sol = solver.solve();
  REQUIRE(sol.status == Sp2Status::Optimal);
  // relaxed optimum can only exceed the best integral gain 1000-300-100 = 600
  CHECK(sol.objective >= 600 - 1e-6);
  CHECK(sol.objective <= 1000 + 1e-6);
  CHECK(sol.accept[0] == doctest::Approx(1).epsilon(1e-6));
  REQUIRE(sol.place.size() == 1);
  double placed = sol.place[0][0][0] + sol.place[0][0][1];
  CHECK(placed >= 1 - 1e-6);
}

TEST_CASE("free-placement fixing drives the model to a concrete node") {
  Scenario s = test::base_scenario(2, 400, 1000, 2000, 2000, 100, 1000, 1e-6, 0);
  s.substrate.nodes[1].activation_cost = 500;
  VnfType t;
  t.id = "1";
  t.cpu_req = 100;
  t.mem_req = 150;
  t.strg_req = 300;
  t.service_rate = 100;
  t.license_cost = 300;
  s.types.push_back(t);
  SfcRequest r;
  r.id = "0";
  r.vnf_types = {0};
  r.flow_rate = 20;
  r.revenue = 1000;
  r.delay_threshold = 0.3;
  s.requests.push_back(r);
  s.check();
  Sp2Solver solver(s, std::vector<int>{1});
  solver.fix_place(0, 0, 0, 0);  // forbid the cheap node
  solver.fix_accept(0, 1);
  RelaxedSolution sol = solver.solve();
  REQUIRE(sol.status == Sp2Status::Optimal);
  CHECK(sol.objective == doctest::Approx(1000 - 300 - 500).epsilon(1e-6));
  CHECK(sol.place[0][0][1] == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("lp dump is well formed") {
  Scenario s = test::tables34_scenario();
  Sp2Solver solver(s, tables34_placement());
  std::string text = solver.dump_lp();
  CHECK(text.find("Minimize") == 0);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("determinism of repeated solves") {
  Scenario s = test::tables34_scenario();
  Sp2Solver a(s, tables34_placement());
  Sp2Solver b(s, tables34_placement());
  RelaxedSolution x = a.solve(), y = b.solve();
  REQUIRE(x.status == Sp2Status::Optimal);
  REQUIRE(y.status == Sp2Status::Optimal);
  CHECK(x.objective == y.objective);
  CHECK(x.accept == y.accept);
  CHECK(x.assign == y.assign);
}
