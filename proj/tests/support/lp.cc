#include "support/lp.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subjfair::testing {
namespace {

constexpr double kEps = 1e-11;

struct Tableau {
  int rows = 0;
  int cols = 0;  // variables, excluding the rhs column
  std::vector<std::vector<double>> t;  // rows x (cols + 1)
  std::vector<int> basis;

  void Pivot(int r, int c) {
    const double p = t[r][c];
    for (double& v : t[r]) v /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || t[i][c] == 0.0) continue;
      const double f = t[i][c];
      for (int k = 0; k <= cols; ++k) t[i][k] -= f * t[r][k];
    }
    basis[r] = c;
  }

  // Minimises cost.x over the current basis. `allowed` masks columns that
  // may enter.
  void Optimise(const std::vector<double>& cost,
                const std::vector<bool>& allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      // Reduced costs d_j = c_j - c_B B^-1 A_j.
      int enter = -1;
      for (int j = 0; j < cols && enter < 0; ++j) {
        if (!allowed[j]) continue;
        double d = cost[j];
        for (int i = 0; i < rows; ++i) d -= cost[basis[i]] * t[i][j];
        if (d < -1e-10) enter = j;
      }
      if (enter < 0) return;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        if (t[i][enter] > kEps) {
          const double ratio = t[i][cols] / t[i][enter];
          if (ratio < best - 1e-12 ||
              (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("unbounded linear program");
      Pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit");
  }
};

}  // namespace

LpSolution SolveLp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int m_ub = static_cast<int>(lp.a_ub.size());
  const int m_eq = static_cast<int>(lp.a_eq.size());
  const int rows = m_ub + m_eq;
  // Columns: x (n), slacks (m_ub), artificials (rows).
  const int cols = n + m_ub + rows;
  Tableau tab;
  tab.rows = rows;
  tab.cols = cols;
  tab.t.assign(rows, std::vector<double>(cols + 1, 0.0));
  tab.basis.assign(rows, 0);
  for (int r = 0; r < rows; ++r) {
    const bool ub = r < m_ub;
    const auto& a = ub ? lp.a_ub[r] : lp.a_eq[r - m_ub];
    const double b = ub ? lp.b_ub[r] : lp.b_eq[r - m_ub];
    const double sign = b < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.t[r][j] = sign * a[j];
    if (ub) tab.t[r][n + r] = sign;
    tab.t[r][n + m_ub + r] = 1.0;
    tab.t[r][cols] = sign * b;
    tab.basis[r] = n + m_ub + r;
  }

  std::vector<double> phase1(cols, 0.0);
  for (int r = 0; r < rows; ++r) phase1[n + m_ub + r] = 1.0;
  std::vector<bool> all(cols, true);
  tab.Optimise(phase1, all);
  double infeasibility = 0;
  for (int r = 0; r < rows; ++r) {
    infeasibility += phase1[tab.basis[r]] * tab.t[r][cols];
  }
  LpSolution sol;
  if (infeasibility > 1e-9) return sol;

  // Drive zero-level artificials out of the basis where possible.
  for (int r = 0; r < rows; ++r) {
    if (tab.basis[r] < n + m_ub) continue;
    for (int j = 0; j < n + m_ub; ++j) {
      if (std::abs(tab.t[r][j]) > 1e-9) {
        tab.Pivot(r, j);
        break;
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = lp.c[j];
  std::vector<bool> real(cols, false);
  for (int j = 0; j < n + m_ub; ++j) real[j] = true;
  tab.Optimise(phase2, real);

  sol.feasible = true;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < rows; ++r) {
    if (tab.basis[r] < n) sol.x[tab.basis[r]] = tab.t[r][cols];
  }
  for (int j = 0; j < n; ++j) sol.value += lp.c[j] * sol.x[j];
  return sol;
}

}  // namespace subjfair::testing
