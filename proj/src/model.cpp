#include "hypersg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hypersg/errors.hpp"

namespace hypersg {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw SpecError(std::string(what) + ": non-finite entry");
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

ParametricPayoff ParametricPayoff::make_constant(double value) {
  ParametricPayoff p;
  p.family = PayoffFamily::Constant;
  p.constant = value;
  return p;
}

ParametricPayoff ParametricPayoff::make_affine(double constant, std::vector<double> slope) {
  if (slope.empty()) throw SpecError("affine payoff: empty slope");
  check_finite(slope, "affine slope");
  ParametricPayoff p;
  p.family = PayoffFamily::Affine;
  p.constant = constant;
  p.slope = std::move(slope);
  return p;
}

ParametricPayoff ParametricPayoff::make_polynomial(std::vector<double> coefficients) {
  if (coefficients.empty() || coefficients.size() > 5)
    throw SpecError("polynomial payoff: need 1..5 coefficients (degree <= 4)");
  check_finite(coefficients, "polynomial coefficients");
  ParametricPayoff p;
  p.family = PayoffFamily::Polynomial;
  p.poly = std::move(coefficients);
  return p;
}

ParametricPayoff ParametricPayoff::make_scaled_affine(double base, double constant,
                                                      std::vector<double> slope) {
  if (slope.empty()) throw SpecError("scaled-affine payoff: empty slope");
  check_finite(slope, "scaled-affine slope");
  ParametricPayoff p;
  p.family = PayoffFamily::ScaledAffine;
  p.base = base;
  p.constant = constant;
  p.slope = std::move(slope);
  return p;
}

double ParametricPayoff::value(const std::vector<double>& theta) const {
  switch (family) {
    case PayoffFamily::Constant:
      return constant;
    case PayoffFamily::Affine: {
      if (theta.size() != slope.size()) throw SpecError("affine payoff: theta dimension mismatch");
      double v = constant;
      for (std::size_t d = 0; d < slope.size(); ++d) v += slope[d] * theta[d];
      return v;
    }
    case PayoffFamily::Polynomial: {
      if (theta.size() != 1) throw SpecError("polynomial payoff: theta must be scalar");
      double v = 0.0;
      for (std::size_t j = poly.size(); j-- > 0;) v = v * theta[0] + poly[j];
      return v;
    }
    case PayoffFamily::ScaledAffine: {
      if (theta.size() != slope.size())
        throw SpecError("scaled-affine payoff: theta dimension mismatch");
      double v = constant;
      for (std::size_t d = 0; d < slope.size(); ++d) v += slope[d] * theta[d];
      return v * base;
    }
  }
  throw InternalError("unreachable payoff family");
}

std::vector<double> ParametricPayoff::gradient(const std::vector<double>& theta) const {
  switch (family) {
    case PayoffFamily::Constant:
      return std::vector<double>(theta.size(), 0.0);
    case PayoffFamily::Affine:
      if (theta.size() != slope.size()) throw SpecError("affine payoff: theta dimension mismatch");
      return slope;
    case PayoffFamily::Polynomial: {
      if (theta.size() != 1) throw SpecError("polynomial payoff: theta must be scalar");
      double v = 0.0;
      for (std::size_t j = poly.size(); j-- > 1;)
        v = v * theta[0] + static_cast<double>(j) * poly[j];
      return {v};
    }
    case PayoffFamily::ScaledAffine: {
      if (theta.size() != slope.size())
        throw SpecError("scaled-affine payoff: theta dimension mismatch");
      std::vector<double> g(slope.size());
      for (std::size_t d = 0; d < slope.size(); ++d) g[d] = slope[d] * base;
      return g;
    }
  }
  throw InternalError("unreachable payoff family");
}

ThetaSpace ThetaSpace::box(std::vector<double> true_value, std::vector<double> lo,
                           std::vector<double> hi, std::vector<int> grid_counts) {
  ThetaSpace t;
  t.dim = static_cast<int>(true_value.size());
  if (t.dim <= 0) throw SpecError("theta space: dimension must be positive");
  if (lo.size() != true_value.size() || hi.size() != true_value.size() ||
      grid_counts.size() != true_value.size())
    throw SpecError("theta box: lo/hi/grid size mismatch");
  check_finite(true_value, "theta true value");
  check_finite(lo, "theta lo");
  check_finite(hi, "theta hi");
  for (int d = 0; d < t.dim; ++d) {
    if (lo[d] > hi[d]) throw SpecError("theta box: lo > hi");
    if (grid_counts[d] < 1) throw SpecError("theta box: grid count must be >= 1");
    if (grid_counts[d] == 1 && lo[d] != hi[d] && true_value[d] != lo[d])
      throw SpecError("theta box: one-point grid must start at the true value");
  }
  t.is_box = true;
  t.true_value = std::move(true_value);
  t.lo = std::move(lo);
  t.hi = std::move(hi);
  t.grid_counts = std::move(grid_counts);
  // theta0 must land on a grid coordinate in every dimension.
  for (int d = 0; d < t.dim; ++d) {
    const int c = t.grid_counts[d];
    bool found = false;
    for (int j = 0; j < c && !found; ++j) {
      const double coord =
          c == 1 ? t.lo[d] : t.lo[d] + (t.hi[d] - t.lo[d]) * static_cast<double>(j) / (c - 1);
      found = close(coord, t.true_value[d], 1e-9);
    }
    if (!found) throw SpecError("theta box: true value not on the grid");
  }
  return t;
}

ThetaSpace ThetaSpace::finite_set(std::vector<double> true_value,
                                  std::vector<std::vector<double>> points) {
  ThetaSpace t;
  t.dim = static_cast<int>(true_value.size());
  if (t.dim <= 0) throw SpecError("theta space: dimension must be positive");
  if (points.empty()) throw SpecError("theta set: needs at least one point");
  check_finite(true_value, "theta true value");
  for (const auto& p : points) {
    if (p.size() != true_value.size()) throw SpecError("theta set: point dimension mismatch");
    check_finite(p, "theta set point");
  }
  t.true_value = std::move(true_value);
  t.points = std::move(points);
  bool found = false;
  for (const auto& p : t.points) {
    bool eq = true;
    for (int d = 0; d < t.dim; ++d) eq = eq && close(p[d], t.true_value[d], 1e-12);
    found = found || eq;
  }
  if (!found) throw SpecError("theta set: true value not in the set");
  return t;
}

ThetaSpace ThetaSpace::singleton(std::vector<double> true_value) {
  std::vector<std::vector<double>> pts{true_value};
  return finite_set(std::move(true_value), std::move(pts));
}

bool ThetaSpace::contains(const std::vector<double>& theta) const {
  if (static_cast<int>(theta.size()) != dim) return false;
  bool is_true = true;
  for (int d = 0; d < dim; ++d) is_true = is_true && close(theta[d], true_value[d], 1e-9);
  if (is_true) return true;
  if (is_box) {
    for (int d = 0; d < dim; ++d) {
      const double tol = 1e-9 * std::max({1.0, std::abs(lo[d]), std::abs(hi[d])});
      if (theta[d] < lo[d] - tol || theta[d] > hi[d] + tol) return false;
    }
    return true;
  }
  for (const auto& p : points) {
    bool eq = true;
    for (int d = 0; d < dim; ++d) eq = eq && close(p[d], theta[d], 1e-9);
    if (eq) return true;
  }
  return false;
}

long long ThetaSpace::grid_size() const {
  if (!is_box) return static_cast<long long>(points.size());
  long long s = 1;
  for (int c : grid_counts) {
    s *= c;
    if (s > (1LL << 40)) throw BudgetError("theta grid too large to enumerate");
  }
  return s;
}

std::vector<double> ThetaSpace::grid_point(long long index) const {
  if (index < 0 || index >= grid_size()) throw SpecError("theta grid index out of range");
  if (!is_box) return points[static_cast<std::size_t>(index)];
  std::vector<double> theta(dim, 0.0);
  long long rem = index;
  for (int d = dim - 1; d >= 0; --d) {
    const int c = grid_counts[d];
    const long long j = rem % c;
    rem /= c;
    theta[d] = c == 1 ? lo[d]
                      : lo[d] + (hi[d] - lo[d]) * static_cast<double>(j) / (c - 1);
  }
  return theta;
}

double ThetaSpace::radius_cap() const {
  double s = 0.0;
  if (is_box) {
    for (int d = 0; d < dim; ++d) {
      const double r = std::max(std::abs(lo[d] - true_value[d]), std::abs(hi[d] - true_value[d]));
      s += r * r;
    }
    return std::sqrt(s);
  }
  double best = 0.0;
  for (const auto& p : points) {
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double r = p[d] - true_value[d];
      acc += r * r;
    }
    best = std::max(best, std::sqrt(acc));
  }
  return best;
}

void SecurityGameSpec::validate_shapes() const {
  if (K < 1) throw SpecError("spec: K must be >= 1");
  if (n < 1) throw SpecError("spec: n must be >= 1");
  if (!(leader_resource > 0.0) || !std::isfinite(leader_resource))
    throw SpecError("spec: leader resource must be positive");
  if (static_cast<int>(follower_resources.size()) != n)
    throw SpecError("spec: follower resource count != n");
  for (double r : follower_resources)
    if (!(r > 0.0) || !std::isfinite(r)) throw SpecError("spec: follower resource must be positive");
  if (static_cast<int>(leader_covered.size()) != K ||
      static_cast<int>(leader_uncovered.size()) != K)
    throw SpecError("spec: leader payoff tables must have K entries");
  check_finite(leader_covered, "leader covered");
  check_finite(leader_uncovered, "leader uncovered");
  if (static_cast<int>(follower_payoffs.size()) != n)
    throw SpecError("spec: follower payoff tensor must have n rows");
  for (const auto& row : follower_payoffs)
    if (static_cast<int>(row.size()) != K)
      throw SpecError("spec: follower payoff row must have K entries");
  if (theta.dim < 1) throw SpecError("spec: theta space missing");
  // Every payoff must evaluate at theta0 (catches dimension mismatches).
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) {
      covered(i, k).value(theta.true_value);
      uncovered(i, k).value(theta.true_value);
    }
}

LeaderStrategy make_leader_strategy(std::vector<double> x, double leader_resource) {
  check_finite(x, "leader strategy");
  double s = 0.0;
  for (double v : x) {
    if (v < -kSimplexTol) throw SpecError("leader strategy: negative allocation");
    s += v;
  }
  if (std::abs(s - leader_resource) > kSimplexTol)
    throw SpecError("leader strategy: allocations must sum to the leader resource");
  return LeaderStrategy{std::move(x)};
}

FollowerStrategy make_follower_strategy(std::vector<double> y, double follower_resource) {
  check_finite(y, "follower strategy");
  double s = 0.0;
  for (double v : y) {
    if (v < -kSimplexTol) throw SpecError("follower strategy: negative allocation");
    s += v;
  }
  if (std::abs(s - follower_resource) > kSimplexTol)
    throw SpecError("follower strategy: allocations must sum to the follower resource");
  return FollowerStrategy{std::move(y)};
}

StrategyProfile make_profile(const SecurityGameSpec& spec, std::vector<double> x,
                             std::vector<std::vector<double>> ys) {
  if (static_cast<int>(x.size()) != spec.K) throw SpecError("profile: x must have K entries");
  if (static_cast<int>(ys.size()) != spec.n) throw SpecError("profile: need n follower strategies");
  StrategyProfile p;
  p.x = make_leader_strategy(std::move(x), spec.leader_resource);
  p.followers.reserve(ys.size());
  for (int i = 0; i < spec.n; ++i) {
    if (static_cast<int>(ys[i].size()) != spec.K)
      throw SpecError("profile: follower strategy must have K entries");
    p.followers.push_back(make_follower_strategy(std::move(ys[i]), spec.follower_resources[i]));
  }
  return p;
}

double leader_utility(const SecurityGameSpec& spec, const LeaderStrategy& x,
                      const std::vector<FollowerStrategy>& ys) {
  if (static_cast<int>(x.x.size()) != spec.K) throw SpecError("leader_utility: x size mismatch");
  if (static_cast<int>(ys.size()) != spec.n)
    throw SpecError("leader_utility: follower count mismatch");
  double total = 0.0;
  for (int k = 0; k < spec.K; ++k) {
    double mass = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      if (static_cast<int>(ys[i].y.size()) != spec.K)
        throw SpecError("leader_utility: follower strategy size mismatch");
      mass += ys[i].y[k];
    }
    total += mass * (x.x[k] * spec.leader_covered[k] +
                     (spec.leader_resource - x.x[k]) * spec.leader_uncovered[k]);
  }
  return total;
}

void require_theta_in_domain(const SecurityGameSpec& spec, const std::vector<double>& theta) {
  if (!spec.theta.contains(theta))
    throw DomainError("theta outside the declared observation space");
}

double follower_utility(const SecurityGameSpec& spec, const LeaderStrategy& x,
                        const FollowerStrategy& y_i, int i,
                        const std::vector<double>& theta) {
  if (i < 0 || i >= spec.n) throw SpecError("follower_utility: follower index out of range");
  if (static_cast<int>(x.x.size()) != spec.K || static_cast<int>(y_i.y.size()) != spec.K)
    throw SpecError("follower_utility: strategy size mismatch");
  require_theta_in_domain(spec, theta);
  double total = 0.0;
  for (int k = 0; k < spec.K; ++k) {
    total += y_i.y[k] * (x.x[k] * spec.covered(i, k).value(theta) +
                         (spec.leader_resource - x.x[k]) * spec.uncovered(i, k).value(theta));
  }
  return total;
}

double attack_value(const SecurityGameSpec& spec, const LeaderStrategy& x,
                    const std::vector<double>& theta, int i, int k) {
  if (i < 0 || i >= spec.n || k < 0 || k >= spec.K)
    throw SpecError("attack_value: index out of range");
  require_theta_in_domain(spec, theta);
  return x.x[k] * spec.covered(i, k).value(theta) +
         (spec.leader_resource - x.x[k]) * spec.uncovered(i, k).value(theta);
}

std::vector<double> parametric_gradient(const ParametricPayoff& payoff,
                                        const std::vector<double>& theta) {
  return payoff.gradient(theta);
}

std::vector<int> best_response_targets(const SecurityGameSpec& spec, const LeaderStrategy& x,
                                       const std::vector<double>& theta, int i) {
  require_theta_in_domain(spec, theta);
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
  std::vector<int> out;
  for (int k = 0; k < spec.K; ++k)
    if (g[k] >= best - tol) out.push_back(k);
  return out;
}

std::vector<TargetId> best_response_set(const SecurityGameSpec& spec, const LeaderStrategy& x,
                                        const std::vector<double>& theta, int i) {
  std::vector<TargetId> out;
  for (int k : best_response_targets(spec, x, theta, i)) out.push_back(TargetId{k + 1});
  return out;
}

AssumptionReport validate_spec(const SecurityGameSpec& spec) {
  AssumptionReport rep;
  try {
    spec.validate_shapes();
    rep.shapes_ok = true;
  } catch (const SpecError& e) {
    rep.notes.push_back(e.what());
    return rep;
  }

  const ThetaSpace& t = spec.theta;
  rep.a1 = t.is_box;
  if (t.is_box) {
    for (int d = 0; d < t.dim; ++d)
      if (!(t.lo[d] < t.hi[d])) rep.a1 = false;
    if (!rep.a1) rep.notes.push_back("A1: theta box has empty interior");
  } else {
    rep.notes.push_back("A1: finite theta sets are not convex with interior");
  }

  rep.a2 = true;  // every supported family is differentiable

  rep.a3 = true;
  for (int k = 0; k < spec.K; ++k) {
    if (!(spec.leader_covered[k] > spec.leader_uncovered[k])) {
      rep.a3 = false;
      rep.notes.push_back("A3 fails at t_" + std::to_string(k + 1));
    }
  }

  rep.a4 = true;
  const long long gs = t.grid_size();
  for (long long gi = 0; gi < gs && rep.a4; ++gi) {
    const std::vector<double> th = t.grid_point(gi);
    for (int i = 0; i < spec.n && rep.a4; ++i)
      for (int k = 0; k < spec.K; ++k) {
        if (!(spec.covered(i, k).value(th) < spec.uncovered(i, k).value(th))) {
          rep.a4 = false;
          rep.notes.push_back("A4 fails for follower " + std::to_string(i + 1) + " at t_" +
                              std::to_string(k + 1));
          break;
        }
      }
  }

  rep.a6 = false;
  for (int k = 0; k < spec.K && !rep.a6; ++k) {
    bool ok = true;
    for (int i = 0; i < spec.n && ok; ++i) {
      const double ck = spec.covered(i, k).value(t.true_value);
      for (int l = 0; l < spec.K && ok; ++l) {
        if (l == k) continue;
        ok = ck >= spec.uncovered(i, l).value(t.true_value);
      }
    }
    rep.a6 = ok;
  }
  if (!rep.a6) rep.notes.push_back("A6: no single most-attractive target at theta0");
  return rep;
}

}  // namespace hypersg
