#include "nfv/sp2cv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nfv {

namespace {

double stability_cap(double mu, double eps_factor) {
  return mu - eps_factor * mu;
}

// Load cap implied by the delay thresholds: any loaded queue serves some
// accepted chain, whose threshold bounds the queue's 1/(mu - lambda) delay.
// Keeps every integral feasible point while matching the big-M delay bound.
double threshold_load_cap(double mu, double eps_factor, double th_max) {
  double cap = stability_cap(mu, eps_factor);
  if (th_max > 0) cap = std::min(cap, mu - 1.0 / th_max);
  return std::max(cap, 0.0);
}

}  // namespace

Sp2Solver::Sp2Solver(const Scenario& s, std::vector<std::vector<int>> placement,
                     Sp2Options opt)
    : scn_(s), opt_(std::move(opt)), free_placement_(false),
      inst_node_(std::move(placement)) {
  if ((int)inst_node_.size() != (int)s.types.size())
    throw ValidationError("placement", "one instance list per type required");
  const int N = (int)s.substrate.nodes.size();
  std::vector<double> cpu(N, 0), mem(N, 0), strg(N, 0);
  for (size_t t = 0; t < inst_node_.size(); ++t)
    for (int n : inst_node_[t]) {
      if (n < 0 || n >= N)
        throw ValidationError("placement", "instance on unknown node");
      cpu[n] += s.types[t].cpu_req;
      mem[n] += s.types[t].mem_req;
      strg[n] += s.types[t].strg_req;
    }
  for (int n = 0; n < N; ++n) {
    const auto& nd = s.substrate.nodes[n];
    if (cpu[n] > nd.cpu_capacity + 1e-9 || mem[n] > nd.mem_capacity + 1e-9 ||
        strg[n] > nd.strg_capacity + 1e-9)
      throw ValidationError("placement",
                            "placement-infeasible: node " + nd.id + " over capacity");
  }
  build();
}

Sp2Solver::Sp2Solver(const Scenario& s, const std::vector<int>& instance_counts,
                     Sp2Options opt)
    : scn_(s), opt_(std::move(opt)), free_placement_(true) {
  if ((int)instance_counts.size() != (int)s.types.size())
    throw ValidationError("instance_counts", "one count per type required");
  inst_node_.resize(instance_counts.size());
  for (size_t t = 0; t < inst_node_.size(); ++t)
    inst_node_[t].assign(std::max(0, instance_counts[t]), -1);
  build();
}

void Sp2Solver::build() {
  const Scenario& s = scn_;
  const int R = (int)s.requests.size();
  const int N = (int)s.substrate.nodes.size();
  const int E = (int)s.substrate.links.size();
  const int T = (int)s.types.size();
  const bool queuing = opt_.delay.mode == DelayMode::Queuing;
  const double eps = opt_.delay.eps_stab_factor;
  const double rho = s.substrate.bandwidth_fee;

  big_m_traffic_ = std::max(1.0, s.total_traffic());
  big_m_delay_ = s.max_threshold();
  if (queuing) {
    for (const auto& nd : s.substrate.nodes)
      big_m_delay_ = std::max(big_m_delay_, 1.0 / nd.hypervisor_rate);
    for (const auto& ty : s.types)
      big_m_delay_ = std::max(big_m_delay_, 1.0 / ty.service_rate);
  } else {
    big_m_delay_ = std::max(big_m_delay_, opt_.delay.fixed_node_delay);
  }

  // --- variables -----------------------------------------------------------
  vA_.resize(R);
  for (int r = 0; r < R; ++r)
    vA_[r] = m_.add_var(0, 1, -s.requests[r].revenue);

  vS_.resize(R);
  for (int r = 0; r < R; ++r) {
    const auto& req = s.requests[r];
    vS_[r].resize(req.vnf_types.size());
    for (size_t u = 0; u < req.vnf_types.size(); ++u) {
      int t = req.vnf_types[u];
      vS_[r][u].resize(inst_node_[t].size());
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        vS_[r][u][i] = m_.add_var(0, 1, 0);
    }
  }

  vDelta_.resize(R);
  for (int r = 0; r < R; ++r) {
    const auto& req = s.requests[r];
    size_t vls = req.vnf_types.empty() ? 0 : req.vnf_types.size() - 1;
    vDelta_[r].resize(vls);
    for (size_t vl = 0; vl < vls; ++vl) {
      vDelta_[r][vl].resize(E);
      for (int e = 0; e < E; ++e)
        vDelta_[r][vl][e] = m_.add_var(0, 1, rho * req.link_bandwidths[vl]);
    }
  }

  vDn_.resize(N);
  for (int n = 0; n < N; ++n) {
    if (queuing)
      vDn_[n] = m_.add_var(1.0 / s.substrate.nodes[n].hypervisor_rate,
                           big_m_delay_, 0);
    else
      vDn_[n] = m_.add_var(opt_.delay.fixed_node_delay,
                           opt_.delay.fixed_node_delay, 0);
  }
  vDi_.resize(T);
  for (int t = 0; t < T; ++t) {
    vDi_[t].resize(inst_node_[t].size());
    for (size_t i = 0; i < inst_node_[t].size(); ++i)
      vDi_[t][i] = queuing
                       ? m_.add_var(1.0 / s.types[t].service_rate, big_m_delay_, 0)
                       : m_.add_var(0, 0, 0);
  }

  // chain-relevant nodes: in the placement-fixed form only nodes hosting
  // instances of a type the chain uses can be touched
  std::vector<std::vector<char>> type_on_node(T, std::vector<char>(N, 0));
  if (!free_placement_)
    for (int t = 0; t < T; ++t)
      for (int n : inst_node_[t]) type_on_node[t][n] = 1;

  vL_.assign(R, std::vector<int>(N, -1));
  for (int r = 0; r < R; ++r)
    for (int n = 0; n < N; ++n) {
      bool relevant = free_placement_;
      if (!relevant)
        for (int t : s.requests[r].vnf_types)
          if (type_on_node[t][n]) { relevant = true; break; }
      if (relevant) vL_[r][n] = m_.add_var(0, big_m_delay_, 0);
    }

  vQ_.resize(R);
  for (int r = 0; r < R; ++r) {
    vQ_[r].resize(s.requests[r].vnf_types.size());
    for (size_t u = 0; u < vQ_[r].size(); ++u)
      vQ_[r][u] = m_.add_var(0, big_m_delay_, 0);
  }

  vAct_.resize(T);
  for (int t = 0; t < T; ++t) {
    vAct_[t].resize(inst_node_[t].size());
    for (size_t i = 0; i < inst_node_[t].size(); ++i)
      vAct_[t][i] = m_.add_var(0, 1, s.types[t].license_cost);
  }
  vNu_.resize(N);
  for (int n = 0; n < N; ++n)
    vNu_[n] = m_.add_var(0, 1, s.substrate.nodes[n].activation_cost);

  if (free_placement_) {
    vP_.resize(T);
    vY_.resize(T);
    for (int t = 0; t < T; ++t) {
      vP_[t].resize(inst_node_[t].size());
      vY_[t].resize(inst_node_[t].size());
      for (size_t i = 0; i < inst_node_[t].size(); ++i) {
        vP_[t][i].resize(N);
        vY_[t][i].resize(N);
        for (int n = 0; n < N; ++n) {
          vP_[t][i][n] = m_.add_var(0, 1, 0);
          vY_[t][i][n] = m_.add_var(0, big_m_traffic_, 0);
        }
      }
    }
    vZ_.resize(R);
    for (int r = 0; r < R; ++r) {
      const auto& req = s.requests[r];
      vZ_[r].resize(req.vnf_types.size());
      for (size_t u = 0; u < req.vnf_types.size(); ++u) {
        int t = req.vnf_types[u];
        vZ_[r][u].resize(inst_node_[t].size());
        for (size_t i = 0; i < inst_node_[t].size(); ++i) {
          vZ_[r][u][i].resize(N);
          for (int n = 0; n < N; ++n)
            vZ_[r][u][i][n] = m_.add_var(0, 1, 0);
        }
      }
    }
  }

  // --- load expressions ----------------------------------------------------
  inst_lambda_.resize(T);
  for (int t = 0; t < T; ++t) inst_lambda_[t].resize(inst_node_[t].size());
  for (int r = 0; r < R; ++r) {
    const auto& req = s.requests[r];
    for (size_t u = 0; u < req.vnf_types.size(); ++u) {
      int t = req.vnf_types[u];
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        inst_lambda_[t][i].push_back({vS_[r][u][i], req.flow_rate});
    }
  }
  node_lambda_.assign(N, {});
  if (free_placement_) {
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        for (int n = 0; n < N; ++n)
          node_lambda_[n].push_back({vY_[t][i][n], 1.0});
  } else {
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        for (const auto& term : inst_lambda_[t][i])
          node_lambda_[inst_node_[t][i]].push_back(term);
  }

  // x_n^{u,r} as an expression appended onto a row under construction
  auto append_x = [&](std::vector<std::pair<int, double>>& row, int r, size_t u,
                      int n, double coef) {
    int t = s.requests[r].vnf_types[u];
    if (free_placement_) {
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        row.push_back({vZ_[r][u][i][n], coef});
    } else {
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        if (inst_node_[t][i] == n) row.push_back({vS_[r][u][i], coef});
    }
  };

  // --- rows ----------------------------------------------------------------
  const double inf = lp::kInf;

  // full mapping of accepted chains (and none for rejected ones)
  for (int r = 0; r < R; ++r)
    for (size_t u = 0; u < vS_[r].size(); ++u) {
      std::vector<std::pair<int, double>> row;
      for (int v : vS_[r][u]) row.push_back({v, 1.0});
      row.push_back({vA_[r], -1.0});
      m_.add_row(std::move(row), 0, 0);
    }

  if (free_placement_) {
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i < inst_node_[t].size(); ++i) {
        std::vector<std::pair<int, double>> row;
        for (int n = 0; n < N; ++n) row.push_back({vP_[t][i][n], 1.0});
        m_.add_row(std::move(row), -inf, 1);  // an instance sits on one node
      }
    // used instances must be placed
    for (int r = 0; r < R; ++r)
      for (size_t u = 0; u < vS_[r].size(); ++u) {
        int t = s.requests[r].vnf_types[u];
        for (size_t i = 0; i < inst_node_[t].size(); ++i) {
          std::vector<std::pair<int, double>> row{{vS_[r][u][i], 1.0}};
          for (int n = 0; n < N; ++n) row.push_back({vP_[t][i][n], -1.0});
          m_.add_row(std::move(row), -inf, 0);
        }
      }
    // z = s * p linearization
    for (int r = 0; r < R; ++r)
      for (size_t u = 0; u < vS_[r].size(); ++u) {
        int t = s.requests[r].vnf_types[u];
        for (size_t i = 0; i < inst_node_[t].size(); ++i)
          for (int n = 0; n < N; ++n) {
            int z = vZ_[r][u][i][n];
            m_.add_row({{z, 1.0}, {vS_[r][u][i], -1.0}}, -inf, 0);
            m_.add_row({{z, 1.0}, {vP_[t][i][n], -1.0}}, -inf, 0);
            m_.add_row({{vS_[r][u][i], 1.0}, {vP_[t][i][n], 1.0}, {z, -1.0}},
                       -inf, 1);
          }
      }
    // y = p * lambda linearization
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        for (int n = 0; n < N; ++n) {
          int y = vY_[t][i][n];
          m_.add_row({{y, 1.0}, {vP_[t][i][n], -big_m_traffic_}}, -inf, 0);
          std::vector<std::pair<int, double>> up{{y, 1.0}};
          for (const auto& [v, c] : inst_lambda_[t][i]) up.push_back({v, -c});
          m_.add_row(std::move(up), -inf, 0);
          std::vector<std::pair<int, double>> lo{{y, 1.0},
                                                {vP_[t][i][n], -big_m_traffic_}};
          for (const auto& [v, c] : inst_lambda_[t][i]) lo.push_back({v, -c});
          m_.add_row(std::move(lo), -big_m_traffic_, inf);
        }
    // node resource capacities
    for (int n = 0; n < N; ++n) {
      std::vector<std::pair<int, double>> cpu, mem, strg;
      for (int t = 0; t < T; ++t)
        for (size_t i = 0; i < inst_node_[t].size(); ++i) {
          cpu.push_back({vP_[t][i][n], s.types[t].cpu_req});
          mem.push_back({vP_[t][i][n], s.types[t].mem_req});
          strg.push_back({vP_[t][i][n], s.types[t].strg_req});
        }
      const auto& nd = s.substrate.nodes[n];
      if (!cpu.empty()) {
        m_.add_row(std::move(cpu), -inf, nd.cpu_capacity);
        m_.add_row(std::move(strg), -inf, nd.strg_capacity);
        m_.add_row(std::move(mem), -inf, nd.mem_capacity);
      }
    }
    // instance interchangeability: order same-type instances by load
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i + 1 < inst_node_[t].size(); ++i) {
        std::vector<std::pair<int, double>> row;
        for (const auto& [v, c] : inst_lambda_[t][i]) row.push_back({v, c});
        for (const auto& [v, c] : inst_lambda_[t][i + 1]) row.push_back({v, -c});
        if (!row.empty()) m_.add_row(std::move(row), 0, inf);
      }
  }

  // flow conservation per (chain, virtual link, node)
  for (int r = 0; r < R; ++r)
    for (size_t vl = 0; vl < vDelta_[r].size(); ++vl)
      for (int n = 0; n < N; ++n) {
        std::vector<std::pair<int, double>> row;
        for (int e : s.substrate.out_links[n])
          row.push_back({vDelta_[r][vl][e], 1.0});
        for (int e : s.substrate.in_links[n])
          row.push_back({vDelta_[r][vl][e], -1.0});
        append_x(row, r, vl, n, -1.0);
        append_x(row, r, vl + 1, n, 1.0);
        if (!row.empty()) m_.add_row(std::move(row), 0, 0);
      }

  // link capacities over allocated bandwidth
  for (int e = 0; e < E; ++e) {
    std::vector<std::pair<int, double>> row;
    for (int r = 0; r < R; ++r)
      for (size_t vl = 0; vl < vDelta_[r].size(); ++vl)
        row.push_back({vDelta_[r][vl][e], s.requests[r].link_bandwidths[vl]});
    if (!row.empty())
      m_.add_row(std::move(row), -inf, s.substrate.links[e].capacity);
  }

  // stability / instance throughput caps
  const double th_max = s.max_threshold();
  for (int t = 0; t < T; ++t)
    for (size_t i = 0; i < inst_node_[t].size(); ++i)
      if (!inst_lambda_[t][i].empty())
        m_.add_row(std::vector<std::pair<int, double>>(inst_lambda_[t][i]), -inf,
                   queuing ? threshold_load_cap(s.types[t].service_rate, eps, th_max)
                           : stability_cap(s.types[t].service_rate, eps));
  if (queuing)
    for (int n = 0; n < N; ++n)
      if (!node_lambda_[n].empty())
        m_.add_row(std::vector<std::pair<int, double>>(node_lambda_[n]), -inf,
                   threshold_load_cap(s.substrate.nodes[n].hypervisor_rate, eps,
                                      th_max));

  // hypervisor delay pickup: l_n^r >= d_n - M(1 - x_n^{u,r})
  for (int r = 0; r < R; ++r)
    for (int n = 0; n < N; ++n) {
      if (vL_[r][n] < 0) continue;
      for (size_t u = 0; u < vS_[r].size(); ++u) {
        std::vector<std::pair<int, double>> row{{vL_[r][n], 1.0},
                                               {vDn_[n], -1.0}};
        size_t before = row.size();
        append_x(row, r, u, n, -big_m_delay_);
        if (row.size() == before) continue;  // no instance of this type here
        m_.add_row(std::move(row), -big_m_delay_, inf);
      }
    }

  // instance delay pickup: q_u^r >= d_{i,t} - M(1 - s)
  for (int r = 0; r < R; ++r)
    for (size_t u = 0; u < vS_[r].size(); ++u) {
      int t = s.requests[r].vnf_types[u];
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        m_.add_row({{vQ_[r][u], 1.0},
                    {vDi_[t][i], -1.0},
                    {vS_[r][u][i], -big_m_delay_}},
                   -big_m_delay_, inf);
    }

  // end-to-end delay thresholds
  for (int r = 0; r < R; ++r) {
    std::vector<std::pair<int, double>> row;
    for (int n = 0; n < N; ++n)
      if (vL_[r][n] >= 0) row.push_back({vL_[r][n], 1.0});
    for (size_t u = 0; u < vQ_[r].size(); ++u) row.push_back({vQ_[r][u], 1.0});
    for (size_t vl = 0; vl < vDelta_[r].size(); ++vl)
      for (int e = 0; e < E; ++e)
        row.push_back({vDelta_[r][vl][e], s.substrate.links[e].prop_delay});
    if (!row.empty())
      m_.add_row(std::move(row), -inf,
                 s.requests[r].delay_threshold - opt_.threshold_margin);
  }

  // instance activation indicators (license cost)
  for (int r = 0; r < R; ++r)
    for (size_t u = 0; u < vS_[r].size(); ++u) {
      int t = s.requests[r].vnf_types[u];
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        m_.add_row({{vAct_[t][i], 1.0}, {vS_[r][u][i], -1.0}}, 0, inf);
    }

  // node activation indicators (per-node sigma)
  if (free_placement_) {
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        for (int n = 0; n < N; ++n)
          m_.add_row({{vNu_[n], 1.0},
                      {vAct_[t][i], -1.0},
                      {vP_[t][i][n], -1.0}},
                     -1, inf);
  } else {
    for (int t = 0; t < T; ++t)
      for (size_t i = 0; i < inst_node_[t].size(); ++i)
        m_.add_row({{vNu_[inst_node_[t][i]], 1.0}, {vAct_[t][i], -1.0}}, 0, inf);
  }

  inst_cut_at_.resize(T);
  for (int t = 0; t < T; ++t) inst_cut_at_[t].resize(inst_node_[t].size());
  node_cut_at_.resize(N);
  if (queuing) add_initial_cuts();
}

void Sp2Solver::add_initial_cuts() {
  // tangents at lambda = 0 seed the epigraph outer approximation
  const Scenario& s = scn_;
  for (size_t t = 0; t < inst_lambda_.size(); ++t) {
    double mu = s.types[t].service_rate;
    for (size_t i = 0; i < inst_lambda_[t].size(); ++i) {
      if (inst_lambda_[t][i].empty()) continue;
      double f = 1.0 / mu, fp = 1.0 / (mu * mu);
      std::vector<std::pair<int, double>> row{{vDi_[t][i], 1.0}};
      for (const auto& [v, c] : inst_lambda_[t][i]) row.push_back({v, -fp * c});
      m_.add_row(std::move(row), f, lp::kInf);
    }
  }
  for (size_t n = 0; n < node_lambda_.size(); ++n) {
    if (node_lambda_[n].empty()) continue;
    double mu = s.substrate.nodes[n].hypervisor_rate;
    double f = 1.0 / mu, fp = 1.0 / (mu * mu);
    std::vector<std::pair<int, double>> row{{vDn_[n], 1.0}};
    for (const auto& [v, c] : node_lambda_[n]) row.push_back({v, -fp * c});
    m_.add_row(std::move(row), f, lp::kInf);
  }
}

double Sp2Solver::expr_value(const std::vector<std::pair<int, double>>& e,
                             const std::vector<double>& x) const {
  double v = 0;
  for (const auto& [j, c] : e) v += c * x[j];
  return v;
}

bool Sp2Solver::add_violated_cuts(const std::vector<double>& x, int* added) {
  const Scenario& s = scn_;
  const double eps = opt_.delay.eps_stab_factor;
  bool violated = false;
  const double th_max = s.max_threshold();
  auto cut = [&](int dvar, const std::vector<std::pair<int, double>>& expr,
                 double mu, std::vector<double>& cut_at) {
    double lam = std::clamp(expr_value(expr, x), 0.0,
                            threshold_load_cap(mu, eps, th_max));
    double f = 1.0 / (mu - lam);
    if (x[dvar] >= f - opt_.cut_tol * std::max(1.0, f)) return;
    violated = true;
    for (double prev : cut_at)
      if (std::abs(prev - lam) <= 1e-10 * mu) return;  // already cut here
    cut_at.push_back(lam);
    double fp = f * f;
    std::vector<std::pair<int, double>> row{{dvar, 1.0}};
    for (const auto& [v, c] : expr) row.push_back({v, -fp * c});
    m_.add_row(std::move(row), f - fp * lam, lp::kInf);
    ++*added;
  };
  for (size_t t = 0; t < inst_lambda_.size(); ++t)
    for (size_t i = 0; i < inst_lambda_[t].size(); ++i)
      if (!inst_lambda_[t][i].empty())
        cut(vDi_[t][i], inst_lambda_[t][i], s.types[t].service_rate,
            inst_cut_at_[t][i]);
  for (size_t n = 0; n < node_lambda_.size(); ++n)
    if (!node_lambda_[n].empty())
      cut(vDn_[n], node_lambda_[n], s.substrate.nodes[n].hypervisor_rate,
          node_cut_at_[n]);
  return violated;
}

RelaxedSolution Sp2Solver::solve() {
  RelaxedSolution out;
  long iters = 0;
  const bool queuing = opt_.delay.mode == DelayMode::Queuing;
  for (int round = 0; round <= opt_.max_cut_rounds; ++round) {
    lp::Solution sol = lp::solve(m_, have_basis_ ? &basis_ : nullptr, opt_.lp);
    iters += sol.iterations;
    if (sol.status != lp::Status::Optimal &&
        sol.status != lp::Status::Infeasible && have_basis_) {
      // warm start led the simplex astray; retry the round cold
      have_basis_ = false;
      sol = lp::solve(m_, nullptr, opt_.lp);
      iters += sol.iterations;
    }
    if (sol.status == lp::Status::Infeasible) {
      basis_ = std::move(sol.basis);
      have_basis_ = true;
      out.status = Sp2Status::Infeasible;
      out.lp_iterations = iters;
      out.cut_rounds = round;
      return out;
    }
    if (sol.status != lp::Status::Optimal) {
      if (std::getenv("NFV_SP2_DEBUG"))
        std::fprintf(stderr, "sp2: lp status %d after %ld iters (round %d)\n",
                     (int)sol.status, sol.iterations, round);
      out.status = Sp2Status::NumericalFailure;
      out.lp_iterations = iters;
      return out;
    }
    basis_ = sol.basis;
    have_basis_ = true;
    int added = 0;
    bool violated = queuing && add_violated_cuts(sol.x, &added);
    if (!violated) {
      out = extract(sol);
      out.lp_iterations = iters;
      out.cut_rounds = round;
      return out;
    }
    if (added == 0) {
      // every violated tangent is already present: the LP satisfied it only
      // to its own feasibility tolerance, so the point has converged
      out = extract(sol);
      out.lp_iterations = iters;
      out.cut_rounds = round;
      return out;
    }
  }
  out.status = Sp2Status::NumericalFailure;
  out.lp_iterations = iters;
  return out;
}

RelaxedSolution Sp2Solver::extract(const lp::Solution& sol) const {
  const Scenario& s = scn_;
  const auto& x = sol.x;
  const bool queuing = opt_.delay.mode == DelayMode::Queuing;
  const double eps = opt_.delay.eps_stab_factor;
  const double th_max = s.max_threshold();
  RelaxedSolution out;
  out.status = Sp2Status::Optimal;
  out.objective = -sol.objective;

  out.accept.resize(vA_.size());
  for (size_t r = 0; r < vA_.size(); ++r) out.accept[r] = x[vA_[r]];

  out.assign.resize(vS_.size());
  for (size_t r = 0; r < vS_.size(); ++r) {
    out.assign[r].resize(vS_[r].size());
    for (size_t u = 0; u < vS_[r].size(); ++u) {
      out.assign[r][u].resize(vS_[r][u].size());
      for (size_t i = 0; i < vS_[r][u].size(); ++i)
        out.assign[r][u][i] = x[vS_[r][u][i]];
    }
  }

  out.flows.resize(vDelta_.size());
  for (size_t r = 0; r < vDelta_.size(); ++r) {
    out.flows[r].resize(vDelta_[r].size());
    for (size_t vl = 0; vl < vDelta_[r].size(); ++vl)
      for (size_t e = 0; e < vDelta_[r][vl].size(); ++e)
        if (x[vDelta_[r][vl][e]] > 1e-9)
          out.flows[r][vl].push_back({(int)e, x[vDelta_[r][vl][e]]});
  }

  out.instance_load.resize(inst_lambda_.size());
  out.instance_delay.resize(inst_lambda_.size());
  for (size_t t = 0; t < inst_lambda_.size(); ++t) {
    double mu = s.types[t].service_rate;
    out.instance_load[t].resize(inst_lambda_[t].size());
    out.instance_delay[t].resize(inst_lambda_[t].size());
    for (size_t i = 0; i < inst_lambda_[t].size(); ++i) {
      double lam = queuing ? std::clamp(expr_value(inst_lambda_[t][i], x), 0.0,
                                        threshold_load_cap(mu, eps, th_max))
                           : expr_value(inst_lambda_[t][i], x);
      out.instance_load[t][i] = lam;
      out.instance_delay[t][i] = queuing ? 1.0 / (mu - lam) : 0.0;
    }
  }
  out.node_load.resize(node_lambda_.size());
  out.node_delay.resize(node_lambda_.size());
  for (size_t n = 0; n < node_lambda_.size(); ++n) {
    double mu = s.substrate.nodes[n].hypervisor_rate;
    double lam = queuing ? std::clamp(expr_value(node_lambda_[n], x), 0.0,
                                      threshold_load_cap(mu, eps, th_max))
                         : expr_value(node_lambda_[n], x);
    out.node_load[n] = lam;
    out.node_delay[n] = queuing ? 1.0 / (mu - lam) : opt_.delay.fixed_node_delay;
  }

  if (free_placement_) {
    out.place.resize(vP_.size());
    for (size_t t = 0; t < vP_.size(); ++t) {
      out.place[t].resize(vP_[t].size());
      for (size_t i = 0; i < vP_[t].size(); ++i) {
        out.place[t][i].resize(vP_[t][i].size());
        for (size_t n = 0; n < vP_[t][i].size(); ++n)
          out.place[t][i][n] = x[vP_[t][i][n]];
      }
    }
  }
  return out;
}

void Sp2Solver::fix_accept(int r, int value) {
  m_.lo[vA_[r]] = m_.up[vA_[r]] = value;
}

void Sp2Solver::fix_assign(int r, int u, int i, int value) {
  int v = vS_[r][u][i];
  m_.lo[v] = m_.up[v] = value;
}

void Sp2Solver::fix_place(int t, int i, int n, int value) {
  if (!free_placement_)
    throw ValidationError("fix_place", "placement is fixed in this form");
  int v = vP_[t][i][n];
  m_.lo[v] = m_.up[v] = value;
}

void Sp2Solver::unfix_accept(int r) {
  m_.lo[vA_[r]] = 0;
  m_.up[vA_[r]] = 1;
}

void Sp2Solver::unfix_assign(int r, int u, int i) {
  int v = vS_[r][u][i];
  m_.lo[v] = 0;
  m_.up[v] = 1;
}

void Sp2Solver::unfix_place(int t, int i, int n) {
  int v = vP_[t][i][n];
  m_.lo[v] = 0;
  m_.up[v] = 1;
}

void Sp2Solver::reject_chain(int r) {
  fix_accept(r, 0);
  for (auto& per_u : vS_[r])
    for (int v : per_u) {
      m_.lo[v] = 0;
      m_.up[v] = 0;
    }
}

void Sp2Solver::release_chain(int r) {
  m_.lo[vA_[r]] = 0;
  m_.up[vA_[r]] = 1;
  for (auto& per_u : vS_[r])
    for (int v : per_u) {
      m_.lo[v] = 0;
      m_.up[v] = 1;
    }
}

std::string Sp2Solver::dump_lp() const {
  std::ostringstream ss;
  ss.precision(17);
  auto term = [&](double c, int j, bool first) {
    if (c >= 0 && !first) ss << " + ";
    if (c < 0) ss << " - ";
    ss << std::abs(c) << " x" << j;
  };
  ss << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < m_.cols(); ++j)
    if (m_.c[j] != 0) {
      term(m_.c[j], j, first);
      first = false;
    }
  ss << "\nSubject To\n";
  for (int i = 0; i < m_.rows(); ++i) {
    auto body = [&] {
      for (size_t k = 0; k < m_.row_idx[i].size(); ++k)
        term(m_.row_val[i][k], m_.row_idx[i][k], k == 0);
    };
    if (m_.row_lo[i] == m_.row_up[i]) {
      ss << " c" << i << ":";
      body();
      ss << " = " << m_.row_lo[i] << "\n";
    } else {
      if (m_.row_lo[i] != -lp::kInf) {
        ss << " c" << i << "l:";
        body();
        ss << " >= " << m_.row_lo[i] << "\n";
      }
      if (m_.row_up[i] != lp::kInf) {
        ss << " c" << i << "u:";
        body();
        ss << " <= " << m_.row_up[i] << "\n";
      }
    }
  }
  ss << "Bounds\n";
  for (int j = 0; j < m_.cols(); ++j)
    ss << " " << m_.lo[j] << " <= x" << j << " <= " << m_.up[j] << "\n";
  ss << "End\n";
  return ss.str();
}

}  // namespace nfv
