#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypersg/serialization.hpp"

namespace hypersg {

/// Batch ratio study. Case ids:
///   case1  P(hyper-stable | SOL nonempty)          misperception instances
///   case2  P(SOL nonempty | hyper-stable)          misperception instances
///   case3  P(hyper-stable | trickable)             deception instances
///   case4  P(trickable    | hyper-stable)          deception instances
struct ExperimentPlan {
  std::string case_id;        // case1..case4
  char axis = 'K';            // sweep axis: 'n' or 'K'
  std::vector<int> sweep;     // values along the axis
  int fixed_other = 2;        // the non-swept parameter
  int instances_per_point = 20;
  std::uint64_t base_seed = 0;
  bool use_milp = false;
  double max_assignments = 1e5;  // refuse points with K^n beyond this
};

struct ExperimentRow {
  int sweep_value = 0;
  long long numerator = 0;
  long long denominator = 0;
  std::optional<double> ratio;  // empty when the denominator is zero
  double wall_time_s = 0.0;
};

struct InstanceVerdict {
  std::uint64_t seed = 0;
  int n = 0;
  int K = 0;
  bool sol_nonempty = false;
  bool msse_hne = false;
  bool trick = false;
  bool dsse_hne = false;
};

struct ExperimentOutcome {
  ExperimentPlan plan;
  std::vector<ExperimentRow> rows;
  std::vector<InstanceVerdict> verdicts;
  bool partial = false;  // some instance hit a solver budget
};

ExperimentOutcome run_cases(const ExperimentPlan& plan);

/// Deterministic CSV for the rows; wall times live in the verdict log only so
/// identical plans produce byte-identical tables.
std::string cases_csv(const ExperimentOutcome& outcome);
Json verdict_log(const ExperimentOutcome& outcome);

ExperimentPlan plan_from_json(const Json& j);
Json plan_to_json(const ExperimentPlan& plan);

/// theta sweep of a fixture: per-observation utilities plus the bound and the
/// sampled invariance radius, as the data behind the robustness bar charts.
struct RobustnessScan {
  std::string fixture;
  std::string which;  // "msse" | "dsse"
  std::vector<double> thetas;
  std::vector<std::vector<double>> utilities;  // per theta: followers or {leader}
  double delta_theta = 0.0;
  double empirical_radius = 0.0;
};

RobustnessScan run_robustness(const std::string& fixture_name, const std::string& which);
std::string robustness_csv(const RobustnessScan& scan);

/// Worker count for instance-level parallelism (HYPERSG_WORKERS, default 1).
int worker_count();

}  // namespace hypersg
