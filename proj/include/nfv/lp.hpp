#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace nfv::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize c.x  subject to  row_lo <= A x <= row_up,  lo <= x <= up
// Rows are stored sparse; equality rows have row_lo == row_up.
struct Model {
  std::vector<double> c, lo, up;
  std::vector<std::vector<int>> row_idx;
  std::vector<std::vector<double>> row_val;
  std::vector<double> row_lo, row_up;

  int cols() const { return (int)c.size(); }
  int rows() const { return (int)row_lo.size(); }

  int add_var(double lo_, double up_, double obj = 0.0) {
    c.push_back(obj);
    lo.push_back(lo_);
    up.push_back(up_);
    return cols() - 1;
  }
  int add_row(std::vector<std::pair<int, double>> entries, double lo_, double up_) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    row_idx.emplace_back();
    row_val.emplace_back();
    for (auto& [j, v] : entries) {
      if (!row_idx.back().empty() && row_idx.back().back() == j)
        row_val.back().back() += v;  // merge duplicate columns
      else {
        row_idx.back().push_back(j);
        row_val.back().push_back(v);
      }
    }
    row_lo.push_back(lo_);
    row_up.push_back(up_);
    return rows() - 1;
  }
};

enum class Status { Optimal, Infeasible, Unbounded, IterLimit, Singular };

// Variable status; logicals (slacks) are numbered cols()..cols()+rows()-1.
enum class VStat : uint8_t { Basic, AtLower, AtUpper, FreeZero };

struct Basis {
  std::vector<int> basic;      // m variable indices
  std::vector<VStat> vstat;    // n + m entries
  bool empty() const { return basic.empty(); }
};

struct Solution {
  Status status = Status::IterLimit;
  double objective = 0;
  std::vector<double> x;       // structural variable values
  Basis basis;
  long iterations = 0;
};

struct SolveParams {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double pivot_tol = 1e-8;
  long max_iters = 0;          // 0: automatic from problem size
  int refactor_interval = 80;
};

// Bounded-variable primal simplex (composite phase 1/2) over a sparse basis
// kept as an LU factorization plus product-form eta updates. Deterministic;
// supports warm starting from a previous basis after bound changes or row
// additions (new logicals join the basis).
Solution solve(const Model& m, const Basis* warm = nullptr, const SolveParams& p = {});

// max_i |violation| of rows and bounds at x; test helper.
double primal_residual(const Model& m, const std::vector<double>& x);

}  // namespace nfv::lp
