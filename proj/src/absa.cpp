#include "nfv/absa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <random>

#include "nfv/delay.hpp"
#include "nfv/errors.hpp"
#include "nfv/routing.hpp"

namespace nfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// All-pairs shortest paths by propagation delay; path[a][b] lists link ids.
struct ShortestPaths {
  std::vector<std::vector<double>> dist;
  std::vector<std::vector<std::vector<int>>> path;

  explicit ShortestPaths(const SubstrateNetwork& net) {
    const int N = (int)net.nodes.size();
    dist.assign(N, std::vector<double>(N, kInf));
    path.assign(N, std::vector<std::vector<int>>(N));
    for (int src = 0; src < N; ++src) {
      std::vector<double>& d = dist[src];
      std::vector<int> via(N, -1);  // incoming link on the shortest path
      d[src] = 0;
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      pq.push({0, src});
      while (!pq.empty()) {
        auto [dd, n] = pq.top();
        pq.pop();
        if (dd > d[n]) continue;
        for (int e : net.out_links[n]) {
          int m = net.links[e].to;
          double nd = dd + net.links[e].prop_delay;
          if (nd < d[m]) {
            d[m] = nd;
            via[m] = e;
            pq.push({nd, m});
          }
        }
      }
      for (int dst = 0; dst < N; ++dst) {
        if (dst == src || via[dst] < 0) continue;
        for (int at = dst; at != src; at = net.links[via[at]].from)
          path[src][dst].push_back(via[at]);
        std::reverse(path[src][dst].begin(), path[src][dst].end());
      }
    }
  }
};

struct State {
  std::vector<char> accepted;            // [r]
  std::vector<std::vector<int>> assign;  // [r][u] -> node (kept when rejected)
};

struct Eval {
  double gain = 0;
  double violation = 0;  // 0 = feasible; relative constraint overshoots
};

struct Evaluator {
  const Scenario& s;
  const ShortestPaths& sp;
  DelayOptions delay;

  // Gain of a state under dedicated instances, fixed delays, and
  // shortest-delay routing, plus a relative infeasibility measure so the
  // annealer can traverse infeasible states. Conservative versus the final
  // extraction: the routing LP can only lower the bandwidth cost.
  Eval evaluate(const State& st) const {
    const auto& net = s.substrate;
    const int N = (int)net.nodes.size();
    std::vector<double> cpu(N, 0), mem(N, 0), strg(N, 0);
    std::vector<double> bw(net.links.size(), 0);
    std::vector<char> node_used(N, 0);
    std::vector<int> instances(s.types.size(), 0);
    Eval ev;
    double revenue = 0, license = 0;
    const double eps = delay.eps_stab_factor;
    auto over = [&](double used, double cap) {
      if (used > cap) {
        // saturating relative overshoot: bounded by 1 per constraint so a
        // profitable chain can enter infeasibly, yet still sloped so repair
        // moves stay energy-downhill
        double v = (used - cap) / std::max(cap, 1e-12);
        ev.violation += v / (1 + v);
      }
    };

    for (int r = 0; r < (int)s.requests.size(); ++r) {
      if (!st.accepted[r]) continue;
      const auto& req = s.requests[r];
      std::vector<char> touched(N, 0);
      double d_total = 0;
      for (int u = 0; u < (int)req.vnf_types.size(); ++u) {
        const VnfType& t = s.types[req.vnf_types[u]];
        over(req.flow_rate, t.service_rate * (1 - eps) - 1e-12);
        // dedicated instances still respect the scenario's per-type cap
        if (t.max_instances > 0 &&
            ++instances[req.vnf_types[u]] > t.max_instances)
          ev.violation += 1;
        int n = st.assign[r][u];
        cpu[n] += t.cpu_req;
        mem[n] += t.mem_req;
        strg[n] += t.strg_req;
        license += t.license_cost;
        node_used[n] = 1;
        if (!touched[n]) {
          touched[n] = 1;
          d_total += delay.fixed_node_delay;
        }
      }
      for (int u = 0; u + 1 < (int)req.vnf_types.size(); ++u) {
        int a = st.assign[r][u], b = st.assign[r][u + 1];
        if (a == b) continue;
        if (sp.dist[a][b] == kInf) {
          ev.violation += 1;
          continue;
        }
        d_total += sp.dist[a][b];
        for (int e : sp.path[a][b]) bw[e] += req.link_bandwidths[u];
      }
      over(d_total, req.delay_threshold);
      revenue += req.revenue;
    }

    for (int n = 0; n < N; ++n) {
      over(cpu[n], net.nodes[n].cpu_capacity);
      over(mem[n], net.nodes[n].mem_capacity);
      over(strg[n], net.nodes[n].strg_capacity);
    }
    double total_bw = 0;
    for (int e = 0; e < (int)net.links.size(); ++e) {
      over(bw[e], net.links[e].capacity);
      total_bw += bw[e];
    }
    double activation = 0;
    for (int n = 0; n < N; ++n)
      if (node_used[n]) activation += net.nodes[n].activation_cost;
    ev.gain = revenue - license - activation - net.bandwidth_fee * total_bw;
    return ev;
  }
};

}  // namespace

AbsaResult run_absa(const Scenario& s, const AnnealConfig& cfg) {
  if (!(cfg.initial_temperature >= 0))
    throw ValidationError("initial_temperature", "must be >= 0");
  if (!(cfg.cooling_rate > 0 && cfg.cooling_rate < 1))
    throw ValidationError("cooling_rate", "must be in (0, 1)");
  const int R = (int)s.requests.size();
  const int N = (int)s.substrate.nodes.size();

  ShortestPaths sp(s.substrate);
  DelayOptions delay;
  delay.mode = DelayMode::Fixed;
  delay.fixed_node_delay = s.fixed_node_delay;
  Evaluator eval{s, sp, delay};

  std::mt19937 rng(cfg.seed);
  auto rand_node = [&] {
    return std::uniform_int_distribution<int>(0, N - 1)(rng);
  };

  State cur;
  cur.accepted.assign(R, 0);  // all-reject start, always feasible
  cur.assign.resize(R);
  for (int r = 0; r < R; ++r) {
    cur.assign[r].resize(s.requests[r].vnf_types.size());
    for (int& n : cur.assign[r]) n = rand_node();
  }
  // energy = -gain + W * violation, with W on the scale of one chain's
  // revenue: newly toggled-on chains start slightly uphill and the search
  // repairs them by reassignment; best-seen only ever tracks feasible states
  double W = 1;
  for (const auto& req : s.requests) W = std::max(W, req.revenue);
  auto energy = [&](const Eval& ev) { return -ev.gain + W * ev.violation; };

  double cur_energy = 0;  // all-reject: gain 0, no violations
  State best = cur;
  double best_gain = 0;

  AbsaResult res;
  double T = cfg.initial_temperature;
  for (int iter = 0; R > 0 && iter < cfg.max_iterations; ++iter) {
    ++res.iterations;
    State cand_best;
    Eval cand_eval;
    double cand_energy = kInf;
    for (int k = 0; k < std::max(1, cfg.lambda_param); ++k) {
      State cand = cur;
      int r = std::uniform_int_distribution<int>(0, R - 1)(rng);
      bool toggle = !cand.accepted[r] ||
                    std::uniform_real_distribution<double>(0, 1)(rng) < 0.5;
      if (toggle) {
        cand.accepted[r] ^= 1;
        // entering chains start colocated on a random node: the chain is
        // near-feasible immediately and reassign moves spread it afterwards
        if (cand.accepted[r]) {
          int n = rand_node();
          for (int& an : cand.assign[r]) an = n;
        }
      } else {
        int u = std::uniform_int_distribution<int>(
            0, (int)cand.assign[r].size() - 1)(rng);
        cand.assign[r][u] = rand_node();
      }
      Eval ev = eval.evaluate(cand);
      double e = energy(ev);
      if (e < cand_energy) {
        cand_energy = e;
        cand_eval = ev;
        cand_best = std::move(cand);
      }
    }
    if (cand_energy < kInf) {
      double delta = cand_energy - cur_energy;
      bool take = delta <= 0;
      if (!take && T > 0)
        take = std::uniform_real_distribution<double>(0, 1)(rng) <
               std::exp(-delta / T);
      if (take) {
        cur = std::move(cand_best);
        cur_energy = cand_energy;
        if (cand_eval.violation == 0 && cand_eval.gain > best_gain) {
          best = cur;
          best_gain = cand_eval.gain;
        }
      }
    }
    T *= 1 - cfg.cooling_rate;
  }

  // extraction: materialize dedicated instances for the best state and rebuild
  // flows exactly; if that ever fails, shed the lowest-revenue chain and retry
  ValidateOptions vopt;
  vopt.delay = delay;
  while (true) {
    Deployment d = Deployment::empty(s);
    d.instance_node.assign(s.types.size(), {});
    for (int r = 0; r < R; ++r) {
      if (!best.accepted[r]) continue;
      d.accepted[r] = 1;
      const auto& req = s.requests[r];
      d.vnf_map[r].resize(req.vnf_types.size());
      for (int u = 0; u < (int)req.vnf_types.size(); ++u) {
        int t = req.vnf_types[u];
        d.vnf_map[r][u] = {t, (int)d.instance_node[t].size()};
        d.instance_node[t].push_back(best.assign[r][u]);
      }
    }
    if (finalize_deployment(s, delay, d)) {
      res.economics = economics(s, d, vopt);
      res.deployment = std::move(d);
      break;
    }
    int drop = -1;
    for (int r = 0; r < R; ++r)
      if (best.accepted[r] &&
          (drop < 0 || s.requests[r].revenue < s.requests[drop].revenue))
        drop = r;
    if (drop < 0) {
      res.deployment = Deployment::empty(s);
      res.economics = economics(s, res.deployment, vopt);
      break;
    }
    best.accepted[drop] = 0;
  }
  return res;
}

}  // namespace nfv
