#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hypersg {

/// 1-based target label t_1..t_K.
struct TargetId {
  int index = 0;
  friend bool operator==(TargetId a, TargetId b) { return a.index == b.index; }
  friend bool operator<(TargetId a, TargetId b) { return a.index < b.index; }
};

enum class PayoffFamily { Constant, Affine, Polynomial, ScaledAffine };

/// One payoff entry as a function of the observation theta.
///   Constant:     value
///   Affine:       constant + slope . theta
///   Polynomial:   sum_j poly[j] * theta^j  (scalar theta, degree <= 4)
///   ScaledAffine: (constant + slope . theta) * base
/// Every family has an analytic gradient.
struct ParametricPayoff {
  PayoffFamily family = PayoffFamily::Constant;
  double constant = 0.0;
  std::vector<double> slope;
  std::vector<double> poly;
  double base = 1.0;

  static ParametricPayoff make_constant(double value);
  static ParametricPayoff make_affine(double constant, std::vector<double> slope);
  static ParametricPayoff make_polynomial(std::vector<double> coefficients);
  static ParametricPayoff make_scaled_affine(double base, double constant,
                                             std::vector<double> slope);

  double value(const std::vector<double>& theta) const;
  std::vector<double> gradient(const std::vector<double>& theta) const;
  /// True when the gradient does not depend on theta (constant/affine forms).
  bool gradient_is_constant() const { return family != PayoffFamily::Polynomial; }
  /// Convex in theta for every family except a general polynomial.
  bool known_convex() const { return family != PayoffFamily::Polynomial; }

  friend bool operator==(const ParametricPayoff&, const ParametricPayoff&) = default;
};

/// Observation space: true value theta0 plus either a boxed grid or an
/// explicit finite point set. theta0 is required to sit on the grid so that
/// deception-vs-truth comparisons are exact.
struct ThetaSpace {
  int dim = 1;
  std::vector<double> true_value;
  bool is_box = false;
  std::vector<double> lo, hi;
  std::vector<int> grid_counts;
  std::vector<std::vector<double>> points;  // set domain

  static ThetaSpace box(std::vector<double> true_value, std::vector<double> lo,
                        std::vector<double> hi, std::vector<int> grid_counts);
  static ThetaSpace finite_set(std::vector<double> true_value,
                               std::vector<std::vector<double>> points);
  /// Trivial one-point space {theta0}.
  static ThetaSpace singleton(std::vector<double> true_value);

  bool contains(const std::vector<double>& theta) const;
  long long grid_size() const;
  std::vector<double> grid_point(long long index) const;
  /// Largest distance from theta0 to any point of the domain.
  double radius_cap() const;

  friend bool operator==(const ThetaSpace&, const ThetaSpace&) = default;
};

/// Full SLMF security game: K targets, one leader, n followers with
/// theta-parametric payoffs.
struct SecurityGameSpec {
  int K = 0;
  int n = 0;
  double leader_resource = 0.0;
  std::vector<double> follower_resources;
  std::vector<double> leader_covered;    // U_l^c per target
  std::vector<double> leader_uncovered;  // U_l^u per target
  // follower_payoffs[i][k] = {covered, uncovered}
  std::vector<std::vector<std::pair<ParametricPayoff, ParametricPayoff>>> follower_payoffs;
  ThetaSpace theta;

  void validate_shapes() const;  // throws SpecError
  const ParametricPayoff& covered(int i, int k) const { return follower_payoffs[i][k].first; }
  const ParametricPayoff& uncovered(int i, int k) const { return follower_payoffs[i][k].second; }

  friend bool operator==(const SecurityGameSpec&, const SecurityGameSpec&) = default;
};

struct LeaderStrategy {
  std::vector<double> x;
  friend bool operator==(const LeaderStrategy&, const LeaderStrategy&) = default;
};

struct FollowerStrategy {
  std::vector<double> y;
  friend bool operator==(const FollowerStrategy&, const FollowerStrategy&) = default;
};

struct StrategyProfile {
  LeaderStrategy x;
  std::vector<FollowerStrategy> followers;
  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

constexpr double kSimplexTol = 1e-9;
constexpr double kTieRelTol = 1e-7;
constexpr double kSupportTol = 1e-9;

/// Checked constructors: nonnegative entries summing to the resource within
/// 1e-9 absolute. Throw SpecError otherwise.
LeaderStrategy make_leader_strategy(std::vector<double> x, double leader_resource);
FollowerStrategy make_follower_strategy(std::vector<double> y, double follower_resource);
StrategyProfile make_profile(const SecurityGameSpec& spec, std::vector<double> x,
                             std::vector<std::vector<double>> ys);

/// Eq-(3) style leader utility: sum_k (sum_i y_i^k)(x^k U_l^c + (R_l - x^k) U_l^u).
double leader_utility(const SecurityGameSpec& spec, const LeaderStrategy& x,
                      const std::vector<FollowerStrategy>& ys);

/// Follower i's (perceived) utility under observation theta.
double follower_utility(const SecurityGameSpec& spec, const LeaderStrategy& x,
                        const FollowerStrategy& y_i, int i,
                        const std::vector<double>& theta);

/// Per-target attractiveness g_i(x, theta, k) = x^k U_i^c + (R_l - x^k) U_i^u.
double attack_value(const SecurityGameSpec& spec, const LeaderStrategy& x,
                    const std::vector<double>& theta, int i, int k);

/// Analytic gradient of a payoff entry at theta.
std::vector<double> parametric_gradient(const ParametricPayoff& payoff,
                                        const std::vector<double>& theta);

/// All targets within relative tolerance 1e-7 of the best attack value
/// (0-based helper plus the TargetId-typed public form).
std::vector<int> best_response_targets(const SecurityGameSpec& spec, const LeaderStrategy& x,
                                       const std::vector<double>& theta, int i);
std::vector<TargetId> best_response_set(const SecurityGameSpec& spec, const LeaderStrategy& x,
                                        const std::vector<double>& theta, int i);

/// Advisory assumption flags. a1: compact/convex theta box with interior and
/// theta0 inside; a2: payoffs differentiable (always, by construction);
/// a3: U_l^c > U_l^u everywhere; a4: U_i^c < U_i^u on the whole grid;
/// a6: some target is most attractive to every follower at theta0.
struct AssumptionReport {
  bool shapes_ok = false;
  bool a1 = false;
  bool a2 = false;
  bool a3 = false;
  bool a4 = false;
  bool a6 = false;
  std::vector<std::string> notes;
};

AssumptionReport validate_spec(const SecurityGameSpec& spec);

/// Throws DomainError unless theta is in the space (or equals theta0).
void require_theta_in_domain(const SecurityGameSpec& spec, const std::vector<double>& theta);

}  // namespace hypersg
