#include "nfv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace nfv::lp {

namespace {

struct Eta {
  int r;                                      // pivot position in basis
  std::vector<std::pair<int, double>> w;      // B^-1 a_q, sparse
  double wr;                                  // w[r]
};

class Worker {
 public:
  Worker(const Model& model, const SolveParams& params) : M(model), P(params) {
    n = M.cols();
    m = M.rows();
    ntot = n + m;
    build_columns();
    scale();
    if (P.max_iters == 0) P.max_iters = std::max<long>(5000, 40L * (n + m));
  }

  Solution run(const Basis* warm) {
    Solution sol;
    if (!init_basis(warm)) {
      sol.status = Status::Singular;
      return sol;
    }
    if (!refactor()) {
      // damaged warm basis; retry cold
      cold_basis();
      if (!refactor()) {
        sol.status = Status::Singular;
        return sol;
      }
    }
    compute_basics();

    long iters = 0;
    int degenerate_streak = 0;
    int cold_restarts = 0;
    bool bland = false;
    double ph1_best = kInf;
    long ph1_mark = 0;
    long piv_window = 0, degen_window = 0;
    const bool trace = std::getenv("NFV_LP_TRACE") != nullptr;
    long tr_ph1 = 0, tr_flips = 0, tr_pivots = 0, tr_degen = 0, tr_reentry = 0;
    bool tr_prev_ph1 = false;
    std::vector<char> banned(ntot, 0);  // stale-pricing rejects, per basis
    Status status = Status::IterLimit;

    int refac_interval = P.refactor_interval;
    for (int attempt = 0; attempt < 6; ++attempt) {
    if (attempt > 0) {
      // drift recurred: keep the factors fresher on the retry
      refac_interval = std::max(5, refac_interval / 2);
      refactor();
      compute_basics();
    }
    while (iters < P.max_iters) {
      ++iters;
      bool phase1 = false;
      double max_viol = 0, sum_viol = 0;
      for (int k = 0; k < m; ++k) {
        int j = basic[k];
        double v = x[j];
        double viol = std::max(clo[j] - v, v - cup[j]);
        if (viol > max_viol) max_viol = viol;
        if (viol > 0) sum_viol += viol;
      }
      phase1 = max_viol > P.feas_tol;

      // phase-1 stall watchdog: if the infeasibility sum stops improving the
      // vertex is degenerate beyond what pivot selection can untangle; random
      // outward bound perturbation breaks the ties, and a cold restart is the
      // last resort
      if (phase1) {
        if (sum_viol < ph1_best - 1e-12) {
          ph1_best = sum_viol;
          ph1_mark = iters;
        } else if (iters - ph1_mark > 2000) {
          if (perturb_count < 10) {
            perturb_bounds();
          } else {
            status = Status::IterLimit;
            break;
          }
          if (!refresh(cold_restarts)) { status = Status::Singular; break; }
          compute_basics();
          std::fill(banned.begin(), banned.end(), 0);
          ph1_best = kInf;
          ph1_mark = iters;
          continue;
        }
      } else {
        ph1_best = kInf;
        ph1_mark = iters;
      }
      if (trace) {
        if (phase1) ++tr_ph1;
        if (phase1 && !tr_prev_ph1 && iters > 1) ++tr_reentry;
        tr_prev_ph1 = phase1;
        if (iters % 5000 == 0)
          std::fprintf(stderr,
                       "trace it=%ld ph1=%d viol=%.3e ph1it=%ld flips=%ld "
                       "piv=%ld degen=%ld reentry=%ld bland=%d etas=%zu\n",
                       iters, (int)phase1, max_viol, tr_ph1, tr_flips,
                       tr_pivots, tr_degen, tr_reentry, (int)bland,
                       etas.size());
      }

      // pricing: y = B^-T g, reduced cost d_j = g_j - y.a_j
      Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
      for (int k = 0; k < m; ++k) {
        int j = basic[k];
        if (phase1) {
          if (x[j] > cup[j] + P.feas_tol) g[k] = 1.0;
          else if (x[j] < clo[j] - P.feas_tol) g[k] = -1.0;
        } else {
          g[k] = cost[j];
        }
      }
      btran(g);

      int q = -1, q_dir = 0;
      double best = P.opt_tol;
      for (int j = 0; j < ntot; ++j) {
        if (vstat[j] == VStat::Basic) continue;
        if (clo[j] == cup[j]) continue;  // fixed
        if (banned[j]) continue;
        double cj = phase1 ? 0.0 : cost[j];
        double d = cj - col_dot(g, j);
        double score = 0;
        int dir = 0;
        if (vstat[j] == VStat::AtLower || vstat[j] == VStat::FreeZero) {
          if (d < -best) { score = -d; dir = +1; }
        }
        if (vstat[j] == VStat::AtUpper || vstat[j] == VStat::FreeZero) {
          if (d > best && (dir == 0 || d > score)) { score = d; dir = -1; }
        }
        if (dir != 0) {
          if (bland) { q = j; q_dir = dir; break; }
          if (score > best) { best = score; q = j; q_dir = dir; }
        }
      }

      if (q < 0) {
        if (!phase1 && perturbed) {
          // optimal for the perturbed bounds: restore the exact ones and keep
          // iterating; the cleanup starts from a near-optimal vertex
          restore_bounds();
          if (!refresh(cold_restarts)) { status = Status::Singular; break; }
          compute_basics();
          std::fill(banned.begin(), banned.end(), 0);
          piv_window = degen_window = 0;
          continue;
        }
        status = phase1 ? Status::Infeasible : Status::Optimal;
        break;
      }

      // FTRAN entering column
      Eigen::VectorXd w = dense_column(q);
      ftran(w);

      // ratio test: x_basic -= dir * t * w, t >= 0
      double t_limit = kInf;
      int leave_pos = -1;
      double leave_bound = 0;
      double flip_t = (std::isfinite(clo[q]) && std::isfinite(cup[q]))
                          ? cup[q] - clo[q] : kInf;
      const double tie = 1e-9;
      if (phase1) {
        // the BTRAN'd reduced cost can be stale on ill-conditioned bases;
        // recompute the true directional derivative of the infeasibility sum
        // from the FTRAN'd column and refuse columns that do not improve it
        double dF = 0;
        for (int k = 0; k < m; ++k) {
          int j = basic[k];
          if (x[j] > cup[j] + P.feas_tol)
            dF += -q_dir * w[k];
          else if (x[j] < clo[j] - P.feas_tol)
            dF -= -q_dir * w[k];
        }
        if (dF > -P.opt_tol) {
          banned[q] = 1;
          continue;
        }
        best = -dF;
        // long-step test over the piecewise-linear infeasibility sum: pass
        // breakpoints while the directional slope stays negative, then leave
        // at the blocking bound where it crosses zero
        struct Bp {
          double t, winc, bound;
          int k;
        };
        std::vector<Bp> bps;
        for (int k = 0; k < m; ++k) {
          double wk = w[k];
          if (std::abs(wk) < 1e-12) continue;
          int j = basic[k];
          double rate = -q_dir * wk;  // d x_bk / d t
          double xb = x[j];
          auto add = [&](double bound) {
            double t = (bound - xb) / rate;
            bps.push_back({std::max(t, 0.0), std::abs(wk), bound, k});
          };
          if (xb > cup[j] + P.feas_tol) {
            if (rate < 0) {
              if (std::isfinite(cup[j])) add(cup[j]);
              if (std::isfinite(clo[j])) add(clo[j]);
            }
          } else if (xb < clo[j] - P.feas_tol) {
            if (rate > 0) {
              if (std::isfinite(clo[j])) add(clo[j]);
              if (std::isfinite(cup[j])) add(cup[j]);
            }
          } else if (rate > 0) {
            if (std::isfinite(cup[j])) add(cup[j]);
          } else if (rate < 0) {
            if (std::isfinite(clo[j])) add(clo[j]);
          }
        }
        std::sort(bps.begin(), bps.end(),
                  [](const Bp& a, const Bp& b) { return a.t < b.t; });
        double slope = -best;
        int stop = -1;
        for (int i = 0; i < (int)bps.size(); ++i) {
          if (bps[i].t >= flip_t) break;  // the entering bound blocks first
          slope += bps[i].winc;
          if (slope >= -P.opt_tol) {
            stop = i;
            break;
          }
        }
        if (stop < 0 && !bps.empty() && !std::isfinite(flip_t)) {
          // drifted pricing can leave the slope formally negative through all
          // breakpoints; the last one still decreases the true phase-1
          // objective, so stop there instead of declaring the ray unbounded
          stop = (int)bps.size() - 1;
        }
        if (stop >= 0) {
          int pick = stop;  // prefer a numerically safe pivot at an earlier t
          if (bps[stop].winc < 1e-6)
            for (int i = stop - 1; i >= 0; --i)
              if (bps[i].winc >= 1e-6) {
                pick = i;
                break;
              }
          t_limit = bps[pick].t;
          leave_pos = bps[pick].k;
          leave_bound = bps[pick].bound;
        }
      } else {
        // Harris two-pass ratio test: pass 1 finds the step limit with every
        // bound relaxed by feas_tol, pass 2 picks the largest pivot element
        // whose exact ratio fits within it; tiny pivots are what drive the
        // eta file and the refactorization singular
        auto blocking = [&](int k, double& rate, double& bound) {
          double wk = w[k];
          if (std::abs(wk) < P.pivot_tol) return false;
          int j = basic[k];
          rate = -q_dir * wk;  // d x_bk / d t
          double xb = x[j];
          if (xb < clo[j] - P.feas_tol) {
            if (rate <= 0) return false;  // moving away; not blocking
            bound = clo[j];
          } else if (xb > cup[j] + P.feas_tol) {
            if (rate >= 0) return false;
            bound = cup[j];
          } else if (rate > 0) {
            if (!std::isfinite(cup[j])) return false;
            bound = cup[j];
          } else {
            if (!std::isfinite(clo[j])) return false;
            bound = clo[j];
          }
          return true;
        };
        double t_max = flip_t;
        for (int k = 0; k < m; ++k) {
          double rate, bound;
          if (!blocking(k, rate, bound)) continue;
          // half the feasibility tolerance, so overshoot introduced here can
          // never trip the phase-1 trigger on its own
          double slack = (rate > 0 ? 0.5 : -0.5) * P.feas_tol;
          double tr = (bound + slack - x[basic[k]]) / rate;
          t_max = std::min(t_max, std::max(tr, 0.0));
        }
        double best_pivot = 0;
        for (int k = 0; k < m; ++k) {
          double rate, bound;
          if (!blocking(k, rate, bound)) continue;
          double t = std::max((bound - x[basic[k]]) / rate, 0.0);
          if (t <= t_max + tie && std::abs(w[k]) > best_pivot) {
            best_pivot = std::abs(w[k]);
            t_limit = t;
            leave_pos = k;
            leave_bound = bound;
          }
        }
      }

      if (!std::isfinite(t_limit) && !std::isfinite(flip_t)) {
        if (phase1 && !etas.empty()) {
          // an improving direction with no blocking bound cannot be a real
          // ray (the infeasibility sum is bounded below); refresh and retry
          refactor();
          compute_basics();
          std::fill(banned.begin(), banned.end(), 0);
          continue;
        }
        if (std::getenv("NFV_LP_DEBUG"))
          std::fprintf(stderr, "lp: no blocking ratio at iter %ld (phase1=%d q=%d)\n",
                       iters, (int)phase1, q);
        status = phase1 ? Status::IterLimit : Status::Unbounded;
        break;
      }

      if (flip_t <= t_limit) {
        // bound flip, basis unchanged
        for (int k = 0; k < m; ++k)
          if (std::abs(w[k]) > 0) x[basic[k]] -= q_dir * flip_t * w[k];
        x[q] = (q_dir > 0) ? cup[q] : clo[q];
        vstat[q] = (q_dir > 0) ? VStat::AtUpper : VStat::AtLower;
        ++tr_flips;
        degenerate_streak = 0;
        // keep `banned` across flips: the basis (and hence the stale pricing
        // that earned the ban) is unchanged, and clearing it here lets a
        // mispriced column flip back and forth forever
        continue;
      }

      double t = t_limit;
      for (int k = 0; k < m; ++k)
        if (std::abs(w[k]) > 0) x[basic[k]] -= q_dir * t * w[k];
      x[q] = nonbasic_value(q) + q_dir * t;

      int lv = basic[leave_pos];
      x[lv] = leave_bound;  // snap to the bound it blocked at
      vstat[lv] = (leave_bound == clo[lv]) ? VStat::AtLower : VStat::AtUpper;
      basic[leave_pos] = q;
      vstat[q] = VStat::Basic;

      Eta eta;
      eta.r = leave_pos;
      eta.wr = w[leave_pos];
      for (int k = 0; k < m; ++k)
        if (w[k] != 0.0) eta.w.push_back({k, w[k]});
      etas.push_back(std::move(eta));
      std::fill(banned.begin(), banned.end(), 0);

      ++tr_pivots;
      ++piv_window;
      if (t <= tie) {
        ++tr_degen;
        ++degen_window;
        if (++degenerate_streak > 60) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      // mostly zero-length steps over a whole window: the vertex is massively
      // degenerate and tiny pivots poison the eta file long before cycling
      // rules help, so break the ties at the source
      if (piv_window >= 1000 && degen_window * 2 > piv_window &&
          (!perturbed || perturb_count < 10)) {
        perturb_bounds();
        if (!refresh(cold_restarts)) { status = Status::Singular; break; }
        compute_basics();
        std::fill(banned.begin(), banned.end(), 0);
        degenerate_streak = 0;
        bland = false;
        piv_window = degen_window = 0;
        continue;
      }
      if (piv_window >= 1000) piv_window = degen_window = 0;

      if ((int)etas.size() >= refac_interval) {
        if (!refresh(cold_restarts)) { status = Status::Singular; break; }
        compute_basics();
      }
    }

    // clean pass: recompute the basic solution from fresh factors; if the
    // eta updates drifted, resume iterating instead of reporting a sloppy
    // optimum
    if (status != Status::Optimal) break;
    refactor();
    compute_basics();
    double max_viol = 0;
    for (int k = 0; k < m; ++k) {
      int j = basic[k];
      max_viol = std::max(max_viol, std::max(clo[j] - x[j], x[j] - cup[j]));
    }
    if (max_viol <= P.feas_tol) break;
    status = Status::IterLimit;  // stands if the retry budget runs out
    }

    sol.status = status;
    sol.iterations = iters;
    sol.x.assign(n, 0.0);
    double obj = 0;
    for (int j = 0; j < n; ++j) {
      sol.x[j] = x[j] * col_scale[j];
      obj += M.c[j] * sol.x[j];
    }
    sol.objective = obj;
    sol.basis.basic = basic;
    sol.basis.vstat = vstat;
    return sol;
  }

 private:
  const Model& M;
  SolveParams P;
  int n = 0, m = 0, ntot = 0;

  // scaled CSC structural columns
  std::vector<int> col_start, col_row;
  std::vector<double> col_val;
  std::vector<double> cost, clo, cup;  // per variable (scaled)
  std::vector<double> row_scale, col_scale;

  std::vector<double> x;      // ntot, scaled space
  std::vector<int> basic;
  std::vector<VStat> vstat;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  std::vector<Eta> etas;

  // anti-degeneracy bound perturbation (active between perturb/restore);
  // magnitude escalates on every engagement so repeated stalls break through
  // instead of ping-ponging at one scale
  bool perturbed = false;
  int perturb_count = 0;
  double perturb_scale = 1e-6;
  std::vector<double> clo_exact, cup_exact;
  unsigned long prng = 0x9e3779b97f4a7c15ULL;

  double u01() {  // deterministic U[0, 1)
    prng = prng * 6364136223846793005ULL + 1442695040888963407ULL;
    return (double)(prng >> 11) / 9007199254740992.0;
  }

  double prand() { return 0.5 + u01(); }  // U[0.5, 1.5)

  void perturb_bounds() {
    if (!perturbed) {
      clo_exact = clo;
      cup_exact = cup;
    } else {  // re-perturb from the exact bounds, never compound
      clo = clo_exact;
      cup = cup_exact;
    }
    const double s = perturb_scale;
    perturb_scale = std::min(perturb_scale * 10, 1e-4);
    ++perturb_count;
    for (int j = 0; j < ntot; ++j) {
      if (clo[j] == cup[j]) continue;  // fixed vars stay exact
      if (std::isfinite(clo[j])) clo[j] -= s * prand() * (1 + std::abs(clo[j]));
      if (std::isfinite(cup[j])) cup[j] += s * prand() * (1 + std::abs(cup[j]));
    }
    perturbed = true;
    if (std::getenv("NFV_LP_TRACE"))
      std::fprintf(stderr, "trace perturb scale=%.0e\n", s);
  }

  void restore_bounds() {
    clo = clo_exact;
    cup = cup_exact;
    perturbed = false;
    if (std::getenv("NFV_LP_TRACE")) std::fprintf(stderr, "trace restore\n");
  }

  // demote every basic structural to its nearest bound and reload the logical
  // basis: always factorizable, and unlike a cold restart it keeps the
  // nonbasic statuses, so the solve resumes near the current point
  void soft_basis() {
    for (int k = 0; k < m; ++k) {
      int j = basic[k];
      if (!std::isfinite(clo[j]) && !std::isfinite(cup[j]))
        vstat[j] = VStat::FreeZero;
      else if (!std::isfinite(cup[j]) ||
               (std::isfinite(clo[j]) && x[j] - clo[j] <= cup[j] - x[j]))
        vstat[j] = VStat::AtLower;
      else
        vstat[j] = VStat::AtUpper;
    }
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      vstat[n + i] = VStat::Basic;
    }
  }

  // refactor with the cold-basis fallback: tiny pivots can leave the current
  // basis numerically singular, in which case restarting from the all-logical
  // basis beats giving up
  bool refresh(int& soft_restarts) {
    if (refactor()) return true;
    if (std::getenv("NFV_LP_TRACE"))
      std::fprintf(stderr, "trace refactor failed, soft_restarts=%d\n",
                   soft_restarts);
    if (++soft_restarts > 8) return false;
    soft_basis();
    return refactor();
  }

  void build_columns() {
    std::vector<int> count(n, 0);
    for (int i = 0; i < m; ++i)
      for (int j : M.row_idx[i]) ++count[j];
    col_start.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) col_start[j + 1] = col_start[j] + count[j];
    col_row.assign(col_start[n], 0);
    col_val.assign(col_start[n], 0.0);
    std::vector<int> fill(col_start.begin(), col_start.end() - 1);
    for (int i = 0; i < m; ++i)
      for (size_t k = 0; k < M.row_idx[i].size(); ++k) {
        int j = M.row_idx[i][k];
        col_row[fill[j]] = i;
        col_val[fill[j]] = M.row_val[i][k];
        ++fill[j];
      }
  }

  static double pow2_round(double v) {
    if (v <= 0 || !std::isfinite(v)) return 1.0;
    return std::exp2(std::round(std::log2(v)));
  }

  void scale() {
    row_scale.assign(m, 1.0);
    col_scale.assign(n, 1.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < m; ++i) {
        double mx = 0;
        for (size_t k = 0; k < M.row_idx[i].size(); ++k)
          mx = std::max(mx, std::abs(M.row_val[i][k] * row_scale[i] *
                                     col_scale[M.row_idx[i][k]]));
        if (mx > 0) row_scale[i] = pow2_round(row_scale[i] / mx);
      }
      std::vector<double> cmx(n, 0.0);
      for (int i = 0; i < m; ++i)
        for (size_t k = 0; k < M.row_idx[i].size(); ++k) {
          int j = M.row_idx[i][k];
          cmx[j] = std::max(cmx[j], std::abs(M.row_val[i][k] * row_scale[i] * col_scale[j]));
        }
      for (int j = 0; j < n; ++j)
        if (cmx[j] > 0) col_scale[j] = pow2_round(col_scale[j] / cmx[j]);
    }
    // apply: scaled column entry = r_i * a_ij * s_j; x_scaled = x / s_j
    for (int j = 0; j < n; ++j)
      for (int k = col_start[j]; k < col_start[j + 1]; ++k)
        col_val[k] *= row_scale[col_row[k]] * col_scale[j];
    cost.assign(ntot, 0.0);
    clo.assign(ntot, 0.0);
    cup.assign(ntot, 0.0);
    for (int j = 0; j < n; ++j) {
      cost[j] = M.c[j] * col_scale[j];
      clo[j] = M.lo[j] / col_scale[j];
      cup[j] = M.up[j] / col_scale[j];
    }
    for (int i = 0; i < m; ++i) {
      clo[n + i] = M.row_lo[i] * row_scale[i];
      cup[n + i] = M.row_up[i] * row_scale[i];
    }
  }

  Eigen::VectorXd dense_column(int j) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    if (j < n) {
      for (int k = col_start[j]; k < col_start[j + 1]; ++k)
        v[col_row[k]] = col_val[k];
    } else {
      v[j - n] = -1.0;
    }
    return v;
  }

  double col_dot(const Eigen::VectorXd& y, int j) const {
    if (j >= n) return -y[j - n];
    double s = 0;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k)
      s += y[col_row[k]] * col_val[k];
    return s;
  }

  double nonbasic_value(int j) const {
    switch (vstat[j]) {
      case VStat::AtLower: return clo[j];
      case VStat::AtUpper: return cup[j];
      default: return 0.0;
    }
  }

  void cold_basis() {
    basic.resize(m);
    vstat.assign(ntot, VStat::AtLower);
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      vstat[n + i] = VStat::Basic;
    }
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(clo[j])) vstat[j] = VStat::AtLower;
      else if (std::isfinite(cup[j])) vstat[j] = VStat::AtUpper;
      else vstat[j] = VStat::FreeZero;
    }
  }

  bool init_basis(const Basis* warm) {
    if (warm && !warm->empty() && (int)warm->basic.size() == m &&
        (int)warm->vstat.size() == ntot) {
      std::vector<char> seen(ntot, 0);
      bool ok = true;
      for (int j : warm->basic) {
        if (j < 0 || j >= ntot || seen[j]) { ok = false; break; }
        seen[j] = 1;
      }
      if (ok) {
        basic = warm->basic;
        vstat = warm->vstat;
        for (int i = 0; i < m; ++i) vstat[basic[i]] = VStat::Basic;
        for (int j = 0; j < ntot; ++j) {
          if (vstat[j] == VStat::Basic && !seen[j]) vstat[j] = VStat::AtLower;
          if (vstat[j] != VStat::Basic) {
            // snap nonbasic status to a representable bound
            if (vstat[j] == VStat::AtLower && !std::isfinite(clo[j]))
              vstat[j] = std::isfinite(cup[j]) ? VStat::AtUpper : VStat::FreeZero;
            if (vstat[j] == VStat::AtUpper && !std::isfinite(cup[j]))
              vstat[j] = std::isfinite(clo[j]) ? VStat::AtLower : VStat::FreeZero;
          }
        }
        return true;
      }
    }
    cold_basis();
    return true;
  }

  bool refactor() {
    etas.clear();
    Eigen::SparseMatrix<double> B(m, m);
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < m; ++k) {
      int j = basic[k];
      if (j < n) {
        for (int p = col_start[j]; p < col_start[j + 1]; ++p)
          trip.emplace_back(col_row[p], k, col_val[p]);
      } else {
        trip.emplace_back(j - n, k, -1.0);
      }
    }
    B.setFromTriplets(trip.begin(), trip.end());
    lu.compute(B);
    return lu.info() == Eigen::Success;
  }

  void ftran(Eigen::VectorXd& v) {
    v = lu.solve(v).eval();
    for (const Eta& e : etas) {
      double p = v[e.r] / e.wr;
      if (p != 0.0) {
        for (const auto& [i, wi] : e.w) v[i] -= wi * p;
      }
      v[e.r] = p;
    }
  }

  void btran(Eigen::VectorXd& v) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      // v' = v E^-1 with E = I + (w - e_r) e_r^T: only entry r changes,
      // v'_r = v_r - (v.w - v_r) / w_r
      double dot = 0;
      for (const auto& [i, wi] : it->w) dot += v[i] * wi;
      v[it->r] = v[it->r] - (dot - v[it->r]) / it->wr;
    }
    v = lu.adjoint().solve(v).eval();
  }

  void compute_basics() {
    x.assign(ntot, 0.0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < ntot; ++j) {
      if (vstat[j] == VStat::Basic) continue;
      double v = nonbasic_value(j);
      x[j] = v;
      if (v == 0.0) continue;
      if (j < n) {
        for (int k = col_start[j]; k < col_start[j + 1]; ++k)
          rhs[col_row[k]] -= col_val[k] * v;
      } else {
        rhs[j - n] += v;
      }
    }
    ftran(rhs);
    for (int k = 0; k < m; ++k) x[basic[k]] = rhs[k];
  }
};

}  // namespace

Solution solve(const Model& model, const Basis* warm, const SolveParams& params) {
  // Row equilibration: scale each row by a power of two so its largest
  // coefficient lands in [1, 2). Solutions are unaffected (x is unscaled) and
  // powers of two keep the arithmetic exact; without this, rows mixing
  // magnitudes (microsecond delays vs. multi-thousand capacities) defeat the
  // factorization's pivot tolerances.
  Model scaled = model;
  for (int i = 0; i < scaled.rows(); ++i) {
    double amax = 0;
    for (double v : scaled.row_val[i]) amax = std::max(amax, std::fabs(v));
    if (amax <= 0) continue;
    double f = std::exp2(-std::floor(std::log2(amax)));
    if (f == 1.0) continue;
    for (double& v : scaled.row_val[i]) v *= f;
    if (std::isfinite(scaled.row_lo[i])) scaled.row_lo[i] *= f;
    if (std::isfinite(scaled.row_up[i])) scaled.row_up[i] *= f;
  }
  Worker w(scaled, params);
  Solution sol = w.run(warm);
  if (sol.status != Status::Optimal && sol.status != Status::Infeasible) {
    if (const char* path = std::getenv("NFV_LP_DUMP")) {
      FILE* f = std::fopen(path, "w");
      if (f) {
        std::fprintf(f, "%d %d\n", model.cols(), model.rows());
        for (int j = 0; j < model.cols(); ++j)
          std::fprintf(f, "%.17g %.17g %.17g\n", model.c[j], model.lo[j],
                       model.up[j]);
        for (int i = 0; i < model.rows(); ++i) {
          std::fprintf(f, "%.17g %.17g %zu", model.row_lo[i], model.row_up[i],
                       model.row_idx[i].size());
          for (size_t k = 0; k < model.row_idx[i].size(); ++k)
            std::fprintf(f, " %d %.17g", model.row_idx[i][k],
                         model.row_val[i][k]);
          std::fprintf(f, "\n");
        }
        std::fclose(f);
      }
    }
  }
  return sol;
}

double primal_residual(const Model& m, const std::vector<double>& x) {
  double res = 0;
  for (int j = 0; j < m.cols(); ++j) {
    res = std::max(res, m.lo[j] - x[j]);
    res = std::max(res, x[j] - m.up[j]);
  }
  for (int i = 0; i < m.rows(); ++i) {
    double ax = 0;
    for (size_t k = 0; k < m.row_idx[i].size(); ++k)
      ax += m.row_val[i][k] * x[m.row_idx[i][k]];
    res = std::max(res, m.row_lo[i] - ax);
    res = std::max(res, ax - m.row_up[i]);
  }
  return res;
}

}  // namespace nfv::lp
