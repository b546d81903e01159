#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace typeprior {

enum class LpStatus { optimal, infeasible, unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// minimize c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
};

// Dense two-phase tableau simplex with Bland's rule. Meant for the small
// programs built here (a few dozen variables), where determinism matters
// more than speed.
class DenseSimplex {
 public:
  explicit DenseSimplex(double eps = 1e-11) : eps_(eps) {}

  LpResult solve(const LinearProgram& lp) {
    const std::size_t n = lp.c.size();
    const std::size_t m_ub = lp.a_ub.size();
    const std::size_t m_eq = lp.a_eq.size();
    if (lp.b_ub.size() != m_ub || lp.b_eq.size() != m_eq) throw std::invalid_argument("LP right-hand side size mismatch");
    for (const auto& r : lp.a_ub)
      if (r.size() != n) throw std::invalid_argument("LP inequality row has wrong width");
    for (const auto& r : lp.a_eq)
      if (r.size() != n) throw std::invalid_argument("LP equality row has wrong width");

    const std::size_t m = m_ub + m_eq;
    // Columns: original n, one slack per inequality, then artificials.
    std::vector<std::vector<double>> rows(m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      const bool ub = i < m_ub;
      const auto& src = ub ? lp.a_ub[i] : lp.a_eq[i - m_ub];
      double b = ub ? lp.b_ub[i] : lp.b_eq[i - m_ub];
      std::vector<double> row(n + m_ub, 0.0);
      for (std::size_t j = 0; j < n; ++j) row[j] = src[j];
      if (ub) row[n + i] = 1.0;
      if (b < 0) {
        for (auto& v : row) v = -v;
        b = -b;
      }
      rows[i] = std::move(row);
      rhs[i] = b;
    }
    const std::size_t n_struct = n + m_ub;
    std::vector<std::size_t> basis(m);
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i < m_ub && rows[i][n + i] == 1.0) {
        basis[i] = n + i;
      } else {
        basis[i] = n_struct + n_art++;
      }
    }
    const std::size_t width = n_struct + n_art;
    tab_.assign(m + 1, std::vector<double>(width + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n_struct; ++j) tab_[i][j] = rows[i][j];
      if (basis[i] >= n_struct) tab_[i][basis[i]] = 1.0;
      tab_[i][width] = rhs[i];
    }
    basis_ = basis;
    m_ = m;
    width_ = width;

    LpResult out;
    if (n_art > 0) {
      // Phase 1: minimize the sum of artificials.
      std::vector<double> cost(width, 0.0);
      for (std::size_t j = n_struct; j < width; ++j) cost[j] = 1.0;
      set_objective(cost);
      if (!run(width)) throw std::runtime_error("phase-one simplex reported unbounded");
      if (tab_[m][width] < -1e-9 * std::max(1.0, max_rhs())) {
        out.status = LpStatus::infeasible;
        return out;
      }
      drive_out_artificials(n_struct);
    }
    std::vector<double> cost(width, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
    set_objective(cost);
    if (!run(n_struct)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis_[i] < n) out.x[basis_[i]] = tab_[i][width];
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.objective += lp.c[j] * out.x[j];
    return out;
  }

 private:
  double max_rhs() const {
    double mx = 0;
    for (std::size_t i = 0; i < m_; ++i) mx = std::max(mx, std::abs(tab_[i][width_]));
    return mx;
  }

  // Reduced-cost row for `cost` given the current basis.
  void set_objective(const std::vector<double>& cost) {
    auto& z = tab_[m_];
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t j = 0; j < width_; ++j) z[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= width_; ++j) z[j] -= cb * tab_[i][j];
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    const double inv = 1.0 / tab_[r][col];
    for (auto& v : tab_[r]) v *= inv;
    tab_[r][col] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = tab_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= width_; ++j) tab_[i][j] -= f * tab_[r][j];
      tab_[i][col] = 0.0;
    }
    basis_[r] = col;
  }

  // Bland's rule over columns [0, allowed). Returns false when unbounded.
  bool run(std::size_t allowed) {
    for (std::size_t iter = 0; iter < 100000; ++iter) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (tab_[m_][j] < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (tab_[i][enter] > eps_) {
          const double ratio = tab_[i][width_] / tab_[i][enter];
          if (ratio < best - eps_ || (std::abs(ratio - best) <= eps_ && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  void drive_out_artificials(std::size_t n_struct) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_struct) continue;
      for (std::size_t j = 0; j < n_struct; ++j) {
        if (std::abs(tab_[i][j]) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
      // A row left with its artificial basic is redundant; its value is 0.
    }
  }

  double eps_;
  std::vector<std::vector<double>> tab_;
  std::vector<std::size_t> basis_;
  std::size_t m_ = 0;
  std::size_t width_ = 0;
};

inline LpResult solve_lp(const LinearProgram& lp) {
  DenseSimplex solver;
  return solver.solve(lp);
}

}  // namespace typeprior
