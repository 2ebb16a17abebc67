#include "hypersg/lp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>

#include "hypersg/errors.hpp"

namespace hypersg {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-9;

void check_row(const std::vector<double>& row, int d, const char* what) {
  if (static_cast<int>(row.size()) != d)
    throw SpecError(std::string(what) + ": row length does not match variable count");
  for (double v : row)
    if (!std::isfinite(v)) throw SpecError(std::string(what) + ": non-finite coefficient");
}

std::atomic<double> g_max_residual{0.0};
std::atomic<long long> g_solves{0};

void note_residual(double r) {
  double cur = g_max_residual.load(std::memory_order_relaxed);
  while (r > cur &&
         !g_max_residual.compare_exchange_weak(cur, r, std::memory_order_relaxed)) {
  }
}

// Dense tableau. Rows 0..m-1 are constraints (all equalities with rhs >= 0
// after setup), row m is the objective in reduced-cost form.
struct Tableau {
  int m = 0;
  int cols = 0;  // structural + slack + artificial
  std::vector<double> t;  // (m + 1) x (cols + 1), last column = rhs
  std::vector<int> basis;  // basis variable per row

  double& at(int r, int c) { return t[static_cast<std::size_t>(r) * (cols + 1) + c]; }
  double at(int r, int c) const { return t[static_cast<std::size_t>(r) * (cols + 1) + c]; }
  double& rhs(int r) { return t[static_cast<std::size_t>(r) * (cols + 1) + cols]; }
  double rhs(int r) const { return t[static_cast<std::size_t>(r) * (cols + 1) + cols]; }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    const double inv = 1.0 / p;
    double* prow = &t[static_cast<std::size_t>(pr) * (cols + 1)];
    for (int c = 0; c <= cols; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= m; ++r) {
      if (r == pr) continue;
      double* row = &t[static_cast<std::size_t>(r) * (cols + 1)];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // Bland: entering = lowest-index admissible column with positive reduced
  // cost; leaving = min ratio, ties to the lowest basis variable index.
  // Returns Optimal or Unbounded.
  LpStatus run(const std::vector<char>& allowed) {
    for (;;) {
      int enter = -1;
      for (int c = 0; c < cols; ++c) {
        if (!allowed[c]) continue;
        if (at(m, c) > kCostEps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m; ++r) {
        const double a = at(r, enter);
        if (a > kPivotEps) {
          const double ratio = rhs(r) / a;
          if (leave < 0 || ratio < best_ratio - 1e-12 ||
              (std::abs(ratio - best_ratio) <= 1e-12 && basis[r] < basis[leave])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LinearProgram::LinearProgram(int nv) : num_vars(nv) {
  if (nv <= 0) throw SpecError("LinearProgram: need at least one variable");
  objective.assign(nv, 0.0);
  lower.assign(nv, 0.0);
  upper.assign(nv, kLpInfinity);
}

void LinearProgram::add_eq(std::vector<double> row, double rhs) {
  check_row(row, num_vars, "add_eq");
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(rhs);
}

void LinearProgram::add_le(std::vector<double> row, double rhs) {
  check_row(row, num_vars, "add_le");
  le_rows.push_back(std::move(row));
  le_rhs.push_back(rhs);
}

LpSolution solve_lp(const LinearProgram& lp) {
  const int d = lp.num_vars;
  if (static_cast<int>(lp.objective.size()) != d ||
      static_cast<int>(lp.lower.size()) != d || static_cast<int>(lp.upper.size()) != d)
    throw SpecError("solve_lp: inconsistent vector sizes");
  check_row(lp.objective, d, "objective");
  if (lp.eq_rows.size() != lp.eq_rhs.size() || lp.le_rows.size() != lp.le_rhs.size())
    throw SpecError("solve_lp: rhs count mismatch");
  for (const auto& r : lp.eq_rows) check_row(r, d, "eq row");
  for (const auto& r : lp.le_rows) check_row(r, d, "le row");
  for (double b : lp.eq_rhs)
    if (!std::isfinite(b)) throw SpecError("solve_lp: non-finite rhs");
  for (double b : lp.le_rhs)
    if (!std::isfinite(b)) throw SpecError("solve_lp: non-finite rhs");
  for (int j = 0; j < d; ++j) {
    if (!std::isfinite(lp.lower[j])) throw SpecError("solve_lp: lower bound must be finite");
    if (lp.upper[j] < lp.lower[j]) return {LpStatus::Infeasible, {}, 0.0, 0.0};
  }

  // Shift to w = z - lower >= 0; finite upper bounds become extra <= rows.
  std::vector<std::pair<int, double>> ub_rows;
  for (int j = 0; j < d; ++j)
    if (std::isfinite(lp.upper[j])) ub_rows.emplace_back(j, lp.upper[j] - lp.lower[j]);

  const int n_eq = static_cast<int>(lp.eq_rows.size());
  const int n_le = static_cast<int>(lp.le_rows.size()) + static_cast<int>(ub_rows.size());
  const int m = n_eq + n_le;

  // Column layout: [w (d)] [slack (n_le)] [artificial (<= m)]
  Tableau tab;
  tab.m = m;
  std::vector<std::vector<double>> rows(m, std::vector<double>(d, 0.0));
  std::vector<double> rhs(m, 0.0);
  std::vector<int> kind(m, 0);  // 0 = eq, 1 = le
  {
    int r = 0;
    for (int i = 0; i < n_eq; ++i, ++r) {
      rows[r] = lp.eq_rows[i];
      double b = lp.eq_rhs[i];
      for (int j = 0; j < d; ++j) b -= rows[r][j] * lp.lower[j];
      rhs[r] = b;
      kind[r] = 0;
    }
    for (std::size_t i = 0; i < lp.le_rows.size(); ++i, ++r) {
      rows[r] = lp.le_rows[i];
      double b = lp.le_rhs[i];
      for (int j = 0; j < d; ++j) b -= rows[r][j] * lp.lower[j];
      rhs[r] = b;
      kind[r] = 1;
    }
    for (const auto& [j, cap] : ub_rows) {
      rows[r].assign(d, 0.0);
      rows[r][j] = 1.0;
      rhs[r] = cap;
      kind[r] = 1;
      ++r;
    }
  }

  std::vector<double> slack_sign(m, 0.0);
  std::vector<char> needs_artificial(m, 0);
  {
    int slack_idx = 0;
    for (int r = 0; r < m; ++r) {
      const bool neg = rhs[r] < 0.0;
      if (neg) {
        for (double& v : rows[r]) v = -v;
        rhs[r] = -rhs[r];
      }
      if (kind[r] == 1) {
        slack_sign[r] = neg ? -1.0 : 1.0;
        needs_artificial[r] = neg ? 1 : 0;
        (void)slack_idx;
      } else {
        needs_artificial[r] = 1;
      }
    }
  }

  int n_art = 0;
  for (int r = 0; r < m; ++r) n_art += needs_artificial[r];
  const int slack_base = d;
  const int art_base = d + n_le;
  tab.cols = d + n_le + n_art;
  tab.t.assign(static_cast<std::size_t>(m + 1) * (tab.cols + 1), 0.0);
  tab.basis.assign(m, -1);

  {
    int slack_idx = 0;
    int art_idx = 0;
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < d; ++j) tab.at(r, j) = rows[r][j];
      tab.rhs(r) = rhs[r];
      if (kind[r] == 1) {
        tab.at(r, slack_base + slack_idx) = slack_sign[r];
        if (!needs_artificial[r]) tab.basis[r] = slack_base + slack_idx;
        ++slack_idx;
      }
      if (needs_artificial[r]) {
        tab.at(r, art_base + art_idx) = 1.0;
        tab.basis[r] = art_base + art_idx;
        ++art_idx;
      }
    }
  }

  std::vector<char> allowed(tab.cols, 1);

  // Phase 1: maximize -(sum of artificials). Reduced costs start as the sum
  // of artificial-basic rows.
  if (n_art > 0) {
    for (int c = 0; c <= tab.cols; ++c) tab.at(m, c) = 0.0;
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] >= art_base) {
        for (int c = 0; c <= tab.cols; ++c) tab.at(m, c) += tab.at(r, c);
      }
    }
    for (int c = art_base; c < tab.cols; ++c) tab.at(m, c) = 0.0;
    const LpStatus st = tab.run(allowed);
    if (st == LpStatus::Unbounded) throw InternalError("phase-1 simplex unbounded");
    if (tab.rhs(m) > 1e-9) {
      ++g_solves;
      return {LpStatus::Infeasible, {}, 0.0, 0.0};
    }
    // Drive remaining artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] < art_base) continue;
      int pc = -1;
      for (int c = 0; c < art_base; ++c) {
        if (std::abs(tab.at(r, c)) > kPivotEps) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) tab.pivot(r, pc);
      // Otherwise the row is redundant; the artificial stays basic at zero.
    }
    for (int c = art_base; c < tab.cols; ++c) allowed[c] = 0;
  }

  // Phase 2: real objective on w (same coefficients after the shift).
  for (int c = 0; c <= tab.cols; ++c) tab.at(m, c) = 0.0;
  for (int j = 0; j < d; ++j) tab.at(m, j) = lp.objective[j];
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis[r];
    if (b >= 0 && b < tab.cols) {
      const double cb = tab.at(m, b);
      if (cb != 0.0) {
        for (int c = 0; c <= tab.cols; ++c) tab.at(m, c) -= cb * tab.at(r, c);
      }
    }
  }
  const LpStatus st = tab.run(allowed);
  ++g_solves;
  if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, {}, 0.0, 0.0};

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.z.assign(d, 0.0);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] >= 0 && tab.basis[r] < d) sol.z[tab.basis[r]] = tab.rhs(r);
  for (int j = 0; j < d; ++j) sol.z[j] += lp.lower[j];

  double obj = 0.0;
  for (int j = 0; j < d; ++j) obj += lp.objective[j] * sol.z[j];
  sol.objective = obj;

  double resid = 0.0;
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
    double v = -lp.eq_rhs[i];
    for (int j = 0; j < d; ++j) v += lp.eq_rows[i][j] * sol.z[j];
    resid = std::max(resid, std::abs(v));
  }
  for (std::size_t i = 0; i < lp.le_rows.size(); ++i) {
    double v = -lp.le_rhs[i];
    for (int j = 0; j < d; ++j) v += lp.le_rows[i][j] * sol.z[j];
    resid = std::max(resid, v);
  }
  for (int j = 0; j < d; ++j) {
    resid = std::max(resid, lp.lower[j] - sol.z[j]);
    if (std::isfinite(lp.upper[j])) resid = std::max(resid, sol.z[j] - lp.upper[j]);
  }
  sol.max_residual = resid;
  note_residual(resid);
  return sol;
}

LambdaResult max_lambda_feasibility(const LambdaSystem& system) {
  const int d = system.num_vars;
  if (d < 0) throw SpecError("max_lambda_feasibility: bad variable count");
  if (system.rows.size() != system.rhs_const.size() ||
      system.rows.size() != system.rhs_lambda.size())
    throw SpecError("max_lambda_feasibility: row/rhs size mismatch");

  LinearProgram lp(d + 1);
  const int lam = d;
  lp.objective[lam] = 1.0;
  lp.upper[lam] = system.lambda_cap;
  for (std::size_t i = 0; i < system.rows.size(); ++i) {
    check_row(system.rows[i], d, "lambda system row");
    std::vector<double> row(d + 1, 0.0);
    for (int j = 0; j < d; ++j) row[j] = system.rows[i][j];
    row[lam] = -system.rhs_lambda[i];
    lp.add_eq(std::move(row), system.rhs_const[i]);
  }
  for (const auto& block : system.blocks) {
    std::vector<double> row(d + 1, 0.0);
    for (int j : block.vars) {
      if (j < 0 || j >= d) throw SpecError("max_lambda_feasibility: block index out of range");
      row[j] = 1.0;
    }
    lp.add_eq(std::move(row), block.resource);
  }

  const LpSolution sol = solve_lp(lp);
  LambdaResult out;
  out.status = sol.status;
  if (sol.status == LpStatus::Optimal) {
    out.lambda = sol.z[lam];
    out.witness.assign(sol.z.begin(), sol.z.begin() + d);
  }
  return out;
}

namespace lp_stats {
void reset() {
  g_max_residual.store(0.0);
  g_solves.store(0);
}
double max_residual() { return g_max_residual.load(); }
long long solve_count() { return g_solves.load(); }
}  // namespace lp_stats

}  // namespace hypersg
