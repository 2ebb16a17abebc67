#include "hypersg/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypersg/equilibrium.hpp"
#include "hypersg/errors.hpp"
#include "hypersg/rng.hpp"

namespace hypersg {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Gradient of g_i(x, theta, k) in theta.
std::vector<double> attack_gradient(const SecurityGameSpec& spec, const LeaderStrategy& x,
                                    const std::vector<double>& theta, int i, int k) {
  const std::vector<double> gc = spec.covered(i, k).gradient(theta);
  const std::vector<double> gu = spec.uncovered(i, k).gradient(theta);
  std::vector<double> g(theta.size());
  for (std::size_t d = 0; d < theta.size(); ++d)
    g[d] = x.x[k] * gc[d] + (spec.leader_resource - x.x[k]) * gu[d];
  return g;
}

// Payoff Lipschitz constant: sup over theta of the largest payoff gradient
// norm. Exact for the families with constant gradients; the polynomial family
// is sampled on a dense sweep of its (scalar) domain.
std::pair<double, std::string> lipschitz_constant(const SecurityGameSpec& spec) {
  double sigma = 0.0;
  bool sampled = false;
  std::vector<std::vector<double>> sample_points;
  const auto ensure_samples = [&]() {
    if (!sample_points.empty()) return;
    if (spec.theta.is_box && spec.theta.dim == 1) {
      const int n = 257;
      for (int j = 0; j < n; ++j)
        sample_points.push_back(
            {spec.theta.lo[0] + (spec.theta.hi[0] - spec.theta.lo[0]) * j / (n - 1)});
    } else {
      const long long gs = spec.theta.grid_size();
      for (long long gi = 0; gi < gs; ++gi) sample_points.push_back(spec.theta.grid_point(gi));
    }
  };
  const auto account = [&](const ParametricPayoff& p) {
    if (p.gradient_is_constant()) {
      sigma = std::max(sigma, norm2(p.gradient(spec.theta.true_value)));
    } else {
      sampled = true;
      ensure_samples();
      for (const auto& th : sample_points) sigma = std::max(sigma, norm2(p.gradient(th)));
    }
  };
  for (int i = 0; i < spec.n; ++i)
    for (int k = 0; k < spec.K; ++k) {
      account(spec.covered(i, k));
      account(spec.uncovered(i, k));
    }
  return {sigma, sampled ? "grid-sampled" : "analytic-exact"};
}

}  // namespace

RobustnessIngredients robustness_ingredients(const SecurityGameSpec& spec,
                                             const LeaderStrategy& x_sse,
                                             std::optional<double> sigma_override) {
  spec.validate_shapes();
  if (static_cast<int>(x_sse.x.size()) != spec.K)
    throw SpecError("robustness_ingredients: x size mismatch");

  RobustnessIngredients ing;
  ing.theta_radius_cap = spec.theta.radius_cap();
  ing.per_follower.resize(spec.n);
  const std::vector<double>& theta0 = spec.theta.true_value;

  for (int i = 0; i < spec.n; ++i) {
    FollowerIngredients& f = ing.per_follower[i];
    std::vector<double> g(spec.K);
    double best = -std::numeric_limits<double>::infinity();
    double mag = 0.0;
    for (int k = 0; k < spec.K; ++k) {
      g[k] = attack_value(spec, x_sse, theta0, i, k);
      best = std::max(best, g[k]);
      mag = std::max(mag, std::abs(g[k]));
    }
    const double tol = kTieRelTol * mag;
    double second = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.K; ++k) {
      if (g[k] >= best - tol)
        f.gamma1.push_back(TargetId{k + 1});
      else
        second = std::max(second, g[k]);
    }
    f.g1 = best;
    if (f.gamma1.size() == static_cast<std::size_t>(spec.K)) {
      f.degenerate = true;
      f.g2 = best;
    } else {
      for (int k = 0; k < spec.K; ++k) {
        const bool in_g1 = g[k] >= best - tol;
        if (!in_g1 && g[k] >= second - tol) f.gamma2.push_back(TargetId{k + 1});
      }
      f.g2 = second;
    }
    f.grad_star = 0.0;
    for (const TargetId& t : f.gamma1)
      f.grad_star =
          std::max(f.grad_star, norm2(attack_gradient(spec, x_sse, theta0, i, t.index - 1)));
  }

  if (sigma_override) {
    if (!(*sigma_override >= 0.0)) throw SpecError("sigma override must be nonnegative");
    ing.sigma = *sigma_override;
    ing.sigma_provenance = "user-override";
  } else {
    const auto [sigma, provenance] = lipschitz_constant(spec);
    ing.sigma = sigma;
    ing.sigma_provenance = provenance;
  }

  ing.premise_convex = true;
  for (int i = 0; i < spec.n; ++i)
    for (int k = 0; k < spec.K; ++k)
      ing.premise_convex = ing.premise_convex && spec.covered(i, k).known_convex() &&
                           spec.uncovered(i, k).known_convex();
  return ing;
}

namespace {

double delta_theta(const RobustnessIngredients& ing, double denominator_base,
                   bool add_grad_star) {
  double best = std::numeric_limits<double>::infinity();
  for (const FollowerIngredients& f : ing.per_follower) {
    if (f.degenerate) return 0.0;
    const double gap = f.g1 - f.g2;
    const double denom = denominator_base + (add_grad_star ? f.grad_star : 0.0);
    double v;
    if (denom <= 0.0) {
      v = gap > 0.0 ? ing.theta_radius_cap : 0.0;
    } else {
      v = gap / denom;
    }
    best = std::min(best, v);
  }
  if (!std::isfinite(best)) return 0.0;
  return std::max(best, 0.0);
}

}  // namespace

double delta_theta_msse(const RobustnessIngredients& ing, double leader_resource) {
  return delta_theta(ing, ing.sigma * leader_resource, true);
}

double delta_theta_dsse(const RobustnessIngredients& ing, double leader_resource) {
  return delta_theta(ing, 2.0 * ing.sigma * leader_resource, false);
}

namespace {

std::vector<std::vector<double>> unit_directions(int count, int dim, std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  if (dim == 1) {
    for (int j = 0; j < count; ++j) dirs.push_back({j % 2 == 0 ? 1.0 : -1.0});
    return dirs;
  }
  RandomStream rs(seed, 101);
  while (static_cast<int>(dirs.size()) < count) {
    std::vector<double> d(dim);
    for (int q = 0; q < dim; ++q) d[q] = rs.normal();
    const double n = norm2(d);
    if (n < 1e-9) continue;
    for (double& v : d) v /= n;
    dirs.push_back(std::move(d));
  }
  return dirs;
}

// Leader-favorable best-response pick for follower i at fixed x.
int favored_pick(const SecurityGameSpec& spec, const LeaderStrategy& x,
                 const std::vector<double>& theta, int i) {
  std::vector<double> g(spec.K);
  double best = -std::numeric_limits<double>::infinity();
  double mag = 0.0;
  for (int k = 0; k < spec.K; ++k) {
    g[k] = x.x[k] * spec.covered(i, k).value(theta) +
           (spec.leader_resource - x.x[k]) * spec.uncovered(i, k).value(theta);
    best = std::max(best, g[k]);
    mag = std::max(mag, std::abs(g[k]));
  }
  const double tol = kTieRelTol * mag;
  int pick = -1;
  double gain = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < spec.K; ++k) {
    if (g[k] < best - tol) continue;
    const double lv = x.x[k] * spec.leader_covered[k] +
                      (spec.leader_resource - x.x[k]) * spec.leader_uncovered[k];
    if (lv > gain + 1e-15) {
      gain = lv;
      pick = k;
    }
  }
  return pick;
}

double pick_span(double cap, double bound) {
  if (bound > 0.0 && std::isfinite(bound)) return std::min(cap, 4.0 * bound);
  return cap;
}

// Ascending shell sweep plus a few bisection rounds between the last passing
// and first failing shells.
template <typename ShellPredicate>
EmpiricalScan sweep_shells(double span, const EmpiricalConfig& cfg, ShellPredicate&& passes) {
  EmpiricalScan scan;
  scan.span = span;
  scan.shell_width = cfg.shells > 0 ? span / cfg.shells : span;
  if (span <= 0.0) return scan;
  double last_pass = 0.0;
  double first_fail = -1.0;
  for (int j = 1; j <= cfg.shells; ++j) {
    const double r = span * j / cfg.shells;
    if (passes(r)) {
      last_pass = r;
    } else {
      first_fail = r;
      break;
    }
  }
  if (first_fail > 0.0) {
    double lo = last_pass, hi = first_fail;
    for (int round = 0; round < cfg.bisection_rounds; ++round) {
      const double mid = 0.5 * (lo + hi);
      if (passes(mid))
        lo = mid;
      else
        hi = mid;
    }
    last_pass = lo;
  }
  scan.radius = last_pass;
  return scan;
}

}  // namespace

EmpiricalScan empirical_invariance_msse(const SecurityGameSpec& spec, const LeaderStrategy& x_sse,
                                        const EmpiricalConfig& cfg) {
  spec.validate_shapes();
  const std::vector<double>& theta0 = spec.theta.true_value;
  const RobustnessIngredients ing = robustness_ingredients(spec, x_sse);
  const double span = pick_span(ing.theta_radius_cap, delta_theta_msse(ing, spec.leader_resource));

  std::vector<double> baseline(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.K; ++k)
      best = std::max(best, attack_value(spec, x_sse, theta0, i, k));
    baseline[i] = spec.follower_resources[i] * best;
  }

  const std::vector<std::vector<double>> dirs =
      unit_directions(cfg.directions, spec.theta.dim, cfg.seed);

  const auto shell_passes = [&](double r) {
    for (const auto& dir : dirs) {
      std::vector<double> th(theta0.size());
      for (std::size_t d = 0; d < th.size(); ++d) th[d] = theta0[d] + r * dir[d];
      if (!spec.theta.contains(th)) continue;  // outside the observation set
      for (int i = 0; i < spec.n; ++i) {
        const int pick = favored_pick(spec, x_sse, th, i);
        const double actual =
            spec.follower_resources[i] * attack_value(spec, x_sse, theta0, i, pick);
        if (std::abs(actual - baseline[i]) > 1e-9) return false;
      }
    }
    return true;
  };
  return sweep_shells(span, cfg, shell_passes);
}

EmpiricalScan empirical_invariance_dsse(const SecurityGameSpec& spec, const EmpiricalConfig& cfg) {
  spec.validate_shapes();
  const std::vector<double>& theta0 = spec.theta.true_value;
  const EquilibriumResult sse = solve_msse(spec, theta0);
  const double sse_value = sse.leader_value;

  const long long gs = spec.theta.grid_size();
  std::vector<double> dist(gs, 0.0);
  std::vector<double> value(gs, 0.0);
  for (long long gi = 0; gi < gs; ++gi) {
    const std::vector<double> th = spec.theta.grid_point(gi);
    double s = 0.0;
    for (int d = 0; d < spec.theta.dim; ++d) {
      const double r = th[d] - theta0[d];
      s += r * r;
    }
    dist[gi] = std::sqrt(s);
    value[gi] = solve_msse(spec, th).leader_value;
  }

  const RobustnessIngredients ing = robustness_ingredients(spec, sse.profile.x);
  const double span = pick_span(ing.theta_radius_cap, delta_theta_dsse(ing, spec.leader_resource));

  const auto shell_passes = [&](double r) {
    for (long long gi = 0; gi < gs; ++gi) {
      if (dist[gi] < r && value[gi] > sse_value + 1e-9) return false;
    }
    return true;
  };
  return sweep_shells(span, cfg, shell_passes);
}

RobustnessReport robustness_report(const SecurityGameSpec& spec, RobustnessSide side,
                                   std::optional<double> sigma_override,
                                   const EmpiricalConfig& cfg) {
  spec.validate_shapes();
  const EquilibriumResult sse = solve_msse(spec, spec.theta.true_value);

  RobustnessReport rep;
  rep.ingredients = robustness_ingredients(spec, sse.profile.x, sigma_override);
  rep.delta_msse = delta_theta_msse(rep.ingredients, spec.leader_resource);
  rep.delta_dsse = delta_theta_dsse(rep.ingredients, spec.leader_resource);
  for (const FollowerIngredients& f : rep.ingredients.per_follower)
    rep.degenerate = rep.degenerate || f.degenerate;

  EmpiricalScan scan = side == RobustnessSide::Msse
                           ? empirical_invariance_msse(spec, sse.profile.x, cfg)
                           : empirical_invariance_dsse(spec, cfg);
  const double bound = side == RobustnessSide::Msse ? rep.delta_msse : rep.delta_dsse;
  const double capped = std::min(bound, rep.ingredients.theta_radius_cap);
  rep.bound_respected = scan.radius >= capped - scan.shell_width - 1e-12;
  rep.empirical = scan;
  return rep;
}

}  // namespace hypersg
