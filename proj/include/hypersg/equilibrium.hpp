#pragma once

#include <optional>
#include <vector>

#include "hypersg/model.hpp"

namespace hypersg {

/// A computed equilibrium. Followers are canonicalized to pure attacks
/// (full resource on one target); theta_used records the observation the
/// followers best-responded to.
struct EquilibriumResult {
  StrategyProfile profile;
  double leader_value = 0.0;
  std::vector<double> follower_perceived;  // utilities at theta_used
  std::vector<double> follower_actual;     // utilities at theta0
  std::vector<TargetId> chosen_targets;
  std::vector<double> theta_used;
  /// All target assignments tied at the optimum, lexicographic order.
  std::vector<StrategyProfile> tiebreak_trace;
};

/// Leader-optimal commitment against followers best-responding under theta
/// with optimistic tie-breaking; one incentive-constrained LP per target
/// assignment. solve_msse(spec, theta0) is the SSE.
EquilibriumResult solve_msse(const SecurityGameSpec& spec, const std::vector<double>& theta);

/// SSE shorthand: solve at the true observation.
EquilibriumResult solve_sse(const SecurityGameSpec& spec);

/// Big-M incentive formulation data (binary y, continuous x and a).
struct MilpInstance {
  double big_m = 1e9;
  int n = 0;
  int K = 0;
  /// Checks the big-M system on a candidate point: y binary one-hot rows,
  /// 0 <= a_i - R_i g_i(x, theta, k) <= (1 - y_i^k) M, simplex rows.
  bool feasible(const SecurityGameSpec& spec, const std::vector<double>& theta,
                const std::vector<double>& x, const std::vector<std::vector<int>>& y_binary,
                const std::vector<double>& a, double tol = 1e-6) const;
};

MilpInstance build_milp_instance(const SecurityGameSpec& spec);

enum class MilpStatus { Solved, BudgetExceeded };

struct MilpOutcome {
  MilpStatus status = MilpStatus::Solved;
  EquilibriumResult result;   // incumbent
  double upper_bound = 0.0;   // best bound at termination
  long long nodes = 0;
};

/// Branch-and-bound over the binary attack choices with LP relaxations per
/// node; terminates when the relative gap closes below 1e-6 or when the node
/// budget is exhausted (status BudgetExceeded, incumbent + bound reported).
MilpOutcome solve_msse_milp(const SecurityGameSpec& spec, const std::vector<double>& theta,
                            long long node_budget = 1'000'000);

struct DsseResult {
  std::vector<double> theta_star;
  long long theta_grid_index = 0;
  EquilibriumResult result;
};

/// Argmax of the MSSE leader value over the theta grid (smallest grid index
/// on ties), with a local grid-halving refinement for low-dimensional boxes.
DsseResult solve_dsse(const SecurityGameSpec& spec);

struct HneViolation {
  int player = 0;  // 0 = leader, 1..n = follower index
  double improving_value = 0.0;
};

/// Targets the leader may cover without breaking stability: the tolerant
/// argmax of the per-target coefficients (sum_i y_i^k)(U_l^c - U_l^u), plus
/// targets whose coefficient is zero (idle coverage carries no weight, so
/// reallocating it is stability-neutral in the hypergame reading).
struct HneCertificate {
  bool is_hne = false;
  std::vector<TargetId> leader_br_targets;
  std::vector<std::vector<TargetId>> follower_br_sets;
  std::optional<HneViolation> violation;
};

HneCertificate check_hne(const SecurityGameSpec& spec, const StrategyProfile& profile,
                         const std::vector<double>& theta_observed);

/// Same predicate with both sides at one observation.
bool check_ne(const SecurityGameSpec& spec, const StrategyProfile& profile,
              const std::vector<double>& theta);

/// Independent oracle: enumerate leader allocations on a simplex lattice of
/// the given step and let followers best-respond leader-favorably.
EquilibriumResult brute_force_sse(const SecurityGameSpec& spec, const std::vector<double>& theta,
                                  double grid_step);

/// Bound on how much the oracle can undershoot the LP optimum per unit of
/// lattice step (leader-objective sensitivity times a simplex-detour factor).
double brute_force_slack_per_step(const SecurityGameSpec& spec);

/// K^n assignment count, saturating; used by budget guards.
double assignment_count(const SecurityGameSpec& spec);

}  // namespace hypersg
