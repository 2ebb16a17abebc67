#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypersg/model.hpp"

namespace hypersg {

/// Per-follower pieces of the robustness bounds: the two most attractive
/// target tiers at (x_SSE, theta0), their attack values, and the largest
/// attack-value gradient norm over the first tier.
struct FollowerIngredients {
  std::vector<TargetId> gamma1;
  std::vector<TargetId> gamma2;
  double g1 = 0.0;
  double g2 = 0.0;
  double grad_star = 0.0;
  bool degenerate = false;  // every target tied: gamma2 empty, g2 := g1
};

struct RobustnessIngredients {
  std::vector<FollowerIngredients> per_follower;
  double sigma = 0.0;  // payoff Lipschitz constant over theta
  std::string sigma_provenance;  // "analytic-exact" | "grid-sampled" | "user-override"
  double theta_radius_cap = 0.0;
  bool premise_convex = true;  // all families convex in theta by construction
};

RobustnessIngredients robustness_ingredients(const SecurityGameSpec& spec,
                                             const LeaderStrategy& x_sse,
                                             std::optional<double> sigma_override = std::nullopt);

/// min_i (g1_i - g2_i) / (grad*_i + sigma R_l); degenerate followers pin it to
/// zero; a vanishing denominator with a positive gap caps at the theta radius.
double delta_theta_msse(const RobustnessIngredients& ing, double leader_resource);

/// min_i (g1_i - g2_i) / (2 sigma R_l), same conventions.
double delta_theta_dsse(const RobustnessIngredients& ing, double leader_resource);

struct EmpiricalConfig {
  int directions = 32;
  int shells = 16;
  int bisection_rounds = 3;
  std::uint64_t seed = 0;
};

struct EmpiricalScan {
  double radius = 0.0;       // largest tested radius with no violation inside
  double span = 0.0;         // outermost tested shell
  double shell_width = 0.0;  // sampling resolution
};

/// Largest sampled radius around theta0 inside which every follower keeps its
/// true-parameter utility when re-best-responding to the fixed x_sse under a
/// misperceived observation.
EmpiricalScan empirical_invariance_msse(const SecurityGameSpec& spec, const LeaderStrategy& x_sse,
                                        const EmpiricalConfig& cfg = {});

/// Largest sampled radius such that restricting the deceptive set to the ball
/// leaves the grid-DSSE leader value equal to the SSE value.
EmpiricalScan empirical_invariance_dsse(const SecurityGameSpec& spec,
                                        const EmpiricalConfig& cfg = {});

enum class RobustnessSide { Msse, Dsse };

struct RobustnessReport {
  RobustnessIngredients ingredients;
  double delta_msse = 0.0;
  double delta_dsse = 0.0;
  std::optional<EmpiricalScan> empirical;
  bool bound_respected = false;  // empirical covers the relevant bound
  bool degenerate = false;
};

/// Full pipeline: solve the SSE, assemble ingredients, evaluate both bounds,
/// and run the empirical scan for the requested side.
RobustnessReport robustness_report(const SecurityGameSpec& spec, RobustnessSide side,
                                   std::optional<double> sigma_override = std::nullopt,
                                   const EmpiricalConfig& cfg = {});

}  // namespace hypersg
