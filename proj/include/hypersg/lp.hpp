#pragma once

#include <limits>
#include <string>
#include <vector>

namespace hypersg {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Dense linear program, maximization form:
///   max c.z  s.t.  A_eq z = b_eq,  A_le z <= b_le,  lower <= z <= upper.
/// Lower bounds default to 0, upper bounds to +inf.
struct LinearProgram {
  explicit LinearProgram(int num_vars);

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> le_rows;
  std::vector<double> le_rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  void add_eq(std::vector<double> row, double rhs);
  void add_le(std::vector<double> row, double rhs);
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> z;       // populated when Optimal (a basic/vertex point)
  double objective = 0.0;      // c.z when Optimal
  double max_residual = 0.0;   // worst constraint violation at z
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule. Output is
/// deterministic in the input. Throws SpecError for malformed programs.
LpSolution solve_lp(const LinearProgram& lp);

/// One simplex block: the listed variables must be nonnegative and sum to
/// `resource`.
struct SimplexBlock {
  std::vector<int> vars;
  double resource = 0.0;
};

/// System linear in (z, lambda) jointly:
///   A z = b0 + lambda * b1,  blocks partition z onto simplices,
///   0 <= lambda <= lambda_cap.
/// Maximizes lambda and reports the witness z.
struct LambdaSystem {
  int num_vars = 0;
  std::vector<std::vector<double>> rows;  // A
  std::vector<double> rhs_const;          // b0
  std::vector<double> rhs_lambda;         // b1
  std::vector<SimplexBlock> blocks;
  double lambda_cap = 1e6;
};

struct LambdaResult {
  LpStatus status = LpStatus::Infeasible;
  double lambda = 0.0;
  std::vector<double> witness;
};

LambdaResult max_lambda_feasibility(const LambdaSystem& system);

/// Process-wide LP diagnostics (post-solve residual tracking).
namespace lp_stats {
void reset();
double max_residual();
long long solve_count();
}  // namespace lp_stats

constexpr double kLpResidualTol = 1e-9;
constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

}  // namespace hypersg
