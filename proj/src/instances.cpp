#include "hypersg/instances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "hypersg/errors.hpp"
#include "hypersg/rng.hpp"

namespace hypersg {

namespace {

// Stream ids, one per generated tensor.
enum Stream : std::uint64_t {
  kLeaderCovered = 1,
  kLeaderUncovered = 2,
  kFollowerCovered = 3,
  kFollowerUncovered = 4,
  kResources = 5,
  kScale = 6,
};

std::vector<int> deception_grid_counts(int n, int K, const std::vector<double>& leader_covered) {
  const int m = n * K;
  // Full two-point-per-axis grid while it stays enumerable; otherwise only the
  // axes pointing at the leader's best-covered target keep both endpoints.
  if (m <= 10) return std::vector<int>(m, 2);
  int kmax = 0;
  for (int k = 1; k < K; ++k)
    if (leader_covered[k] > leader_covered[kmax]) kmax = k;
  std::vector<int> counts(m, 1);
  for (int i = 0; i < n; ++i) counts[i * K + kmax] = 2;
  return counts;
}

}  // namespace

SecurityGameSpec generate_random(const InstanceGenConfig& cfg) {
  if (cfg.n < 1 || cfg.K < 1) throw SpecError("generate_random: need n >= 1 and K >= 1");

  SecurityGameSpec spec;
  spec.n = cfg.n;
  spec.K = cfg.K;

  RandomStream lc(cfg.seed, kLeaderCovered);
  RandomStream lu(cfg.seed, kLeaderUncovered);
  RandomStream fc(cfg.seed, kFollowerCovered);
  RandomStream fu(cfg.seed, kFollowerUncovered);
  RandomStream rr(cfg.seed, kResources);

  spec.leader_covered.resize(cfg.K);
  spec.leader_uncovered.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    spec.leader_covered[k] = lc.uniform(cfg.leader_covered_lo, cfg.leader_covered_hi);
    spec.leader_uncovered[k] = lu.uniform(cfg.leader_uncovered_lo, cfg.leader_uncovered_hi);
  }
  spec.leader_resource = rr.uniform(cfg.resource_lo, cfg.resource_hi);
  spec.follower_resources.resize(cfg.n);
  for (int i = 0; i < cfg.n; ++i)
    spec.follower_resources[i] = rr.uniform(cfg.resource_lo, cfg.resource_hi);

  spec.follower_payoffs.assign(cfg.n, {});
  const int m = cfg.n * cfg.K;
  for (int i = 0; i < cfg.n; ++i) {
    spec.follower_payoffs[i].reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
      const double c = fc.uniform(cfg.follower_covered_lo, cfg.follower_covered_hi);
      const double u = fu.uniform(cfg.follower_uncovered_lo, cfg.follower_uncovered_hi);
      if (cfg.mode == GenMode::Misperception) {
        spec.follower_payoffs[i].push_back(
            {ParametricPayoff::make_constant(c), ParametricPayoff::make_constant(u)});
      } else {
        std::vector<double> axis(m, 0.0);
        axis[i * cfg.K + k] = 1.0;
        spec.follower_payoffs[i].push_back({ParametricPayoff::make_affine(c, axis),
                                            ParametricPayoff::make_affine(u, axis)});
      }
    }
  }

  if (cfg.mode == GenMode::Misperception) {
    spec.theta = ThetaSpace::singleton({0.0});
  } else {
    spec.theta = ThetaSpace::box(std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                                 std::vector<double>(m, cfg.shift_hi),
                                 deception_grid_counts(cfg.n, cfg.K, spec.leader_covered));
  }
  spec.validate_shapes();
  return spec;
}

SecurityGameSpec fixture_example1() {
  SecurityGameSpec spec;
  spec.K = 2;
  spec.n = 1;
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0};
  spec.leader_covered = {1.0, 0.0};
  spec.leader_uncovered = {0.0, 0.0};
  spec.follower_payoffs = {{
      {ParametricPayoff::make_affine(-1.0, {1.0}), ParametricPayoff::make_affine(0.0, {1.0})},
      {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(0.0)},
  }};
  // The open unit interval admits no optimum; the playable closure [0, 0.9]
  // keeps the deception argmax well defined.
  spec.theta = ThetaSpace::box({0.0}, {0.0}, {0.9}, {10});
  spec.validate_shapes();
  return spec;
}

SecurityGameSpec fixture_example2() {
  SecurityGameSpec spec;
  spec.K = 2;
  spec.n = 2;
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0, 1.0};
  spec.leader_covered = {1.0, 1.0};
  spec.leader_uncovered = {2.0, 3.0};
  spec.follower_payoffs = {
      {
          {ParametricPayoff::make_affine(0.0, {1.0}), ParametricPayoff::make_affine(0.0, {1.0})},
          {ParametricPayoff::make_affine(1.0, {-1.0}), ParametricPayoff::make_affine(1.0, {-1.0})},
      },
      {
          {ParametricPayoff::make_constant(1.0), ParametricPayoff::make_constant(0.0)},
          {ParametricPayoff::make_constant(1.0), ParametricPayoff::make_constant(0.0)},
      },
  };
  spec.theta = ThetaSpace::finite_set({0.0}, {{0.0}, {1.0}});
  spec.validate_shapes();
  return spec;
}

SecurityGameSpec fixture_mtd(double a) {
  // Quartic follower-2 forms; expand ((t - 1/2)^2 + b)^2 into raw
  // coefficients so gradients stay analytic.
  const auto quartic = [](double scale, double b, double offset) {
    // scale * (t^2 - t + (b + 1/4))^2 + offset
    const double q = b + 0.25;
    return ParametricPayoff::make_polynomial({scale * q * q + offset, -2.0 * scale * q,
                                              scale * (1.0 + 2.0 * q), -2.0 * scale,
                                              scale});
  };
  SecurityGameSpec spec;
  spec.K = 2;
  spec.n = 2;
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0, 1.0};
  spec.leader_covered = {5.0, 5.0};
  spec.leader_uncovered = {0.0, 0.0};
  spec.follower_payoffs = {
      {
          {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(6.0)},
          {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(4.0)},
      },
      {
          {quartic(0.041, a - 10.0, 4.305), quartic(-0.05, 10.0 - a, 5.1532)},
          {ParametricPayoff::make_constant(0.0), quartic(-0.004, a - 10.0, 0.82)},
      },
  };
  spec.theta = ThetaSpace::box({0.5}, {0.0}, {1.0}, {21});
  spec.validate_shapes();
  return spec;
}

SecurityGameSpec fixture_counterterrorism(std::uint64_t seed) {
  SecurityGameSpec spec;
  spec.n = 6;  // attack forms
  spec.K = 5;  // ranked cities
  spec.leader_resource = 1.0;
  spec.follower_resources.assign(spec.n, 1.0);

  RandomStream lc(seed, kLeaderCovered);
  RandomStream lu(seed, kLeaderUncovered);
  RandomStream fc(seed, kFollowerCovered);
  RandomStream fu(seed, kFollowerUncovered);
  RandomStream dd(seed, kScale);

  spec.leader_covered.resize(spec.K);
  spec.leader_uncovered.resize(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    spec.leader_covered[k] = lc.uniform(0.0, 0.7);
    spec.leader_uncovered[k] = lu.uniform(0.0, 0.7);
  }
  spec.follower_payoffs.assign(spec.n, {});
  for (int i = 0; i < spec.n; ++i) {
    for (int k = 0; k < spec.K; ++k) {
      double c = fc.uniform(0.0, 0.7);
      double u = fu.uniform(0.0, 0.7);
      if (c > u) std::swap(c, u);  // attacking an open target must pay more
      const double d = dd.uniform(-1.0, 1.0);
      // Perceived success rate p(theta) = d * theta + 0.2 multiplies both
      // entries of the cell.
      spec.follower_payoffs[i].push_back({ParametricPayoff::make_scaled_affine(c, 0.2, {d}),
                                          ParametricPayoff::make_scaled_affine(u, 0.2, {d})});
    }
  }
  spec.theta = ThetaSpace::box({0.0}, {-0.2}, {0.2}, {41});
  spec.validate_shapes();
  return spec;
}

SecurityGameSpec fixture_cps(std::uint64_t seed, double d_lo, double d_hi) {
  if (!(d_hi >= d_lo)) throw SpecError("cps fixture: bad d range");
  SecurityGameSpec spec;
  spec.n = 1;  // the hacker
  spec.K = 9;  // attack surfaces
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0};

  RandomStream lc(seed, kLeaderCovered);
  RandomStream lu(seed, kLeaderUncovered);
  RandomStream fc(seed, kFollowerCovered);
  RandomStream fu(seed, kFollowerUncovered);
  RandomStream dd(seed, kScale);

  spec.leader_covered.resize(spec.K);
  spec.leader_uncovered.resize(spec.K);
  spec.follower_payoffs.assign(1, {});
  for (int k = 0; k < spec.K; ++k) {
    spec.leader_covered[k] = lc.uniform(0.0, 2.5);
    spec.leader_uncovered[k] = lu.uniform(0.0, 2.5);
    const double c = fc.uniform(0.0, 2.5);
    const double u = fu.uniform(0.0, 2.5);
    // Same unit draw for every D range so matched seeds scale d_k linearly.
    const double d = d_lo + (d_hi - d_lo) * dd.uniform();
    spec.follower_payoffs[0].push_back({ParametricPayoff::make_constant(c),
                                        ParametricPayoff::make_polynomial({u, 0.0, d})});
  }
  spec.theta = ThetaSpace::box({0.0}, {-1.0}, {1.0}, {41});
  spec.validate_shapes();
  return spec;
}

SecurityGameSpec fixture(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.empty()) throw SpecError("fixture: empty name");
  const std::string& head = parts[0];
  const auto want_args = [&](std::size_t want) {
    if (parts.size() != want + 1)
      throw SpecError("fixture " + head + ": expected " + std::to_string(want) + " argument(s)");
  };
  try {
    if (head == "example1") {
      want_args(0);
      return fixture_example1();
    }
    if (head == "example2") {
      want_args(0);
      return fixture_example2();
    }
    if (head == "mtd") {
      want_args(1);
      return fixture_mtd(std::stod(parts[1]));
    }
    if (head == "counterterrorism") {
      want_args(1);
      return fixture_counterterrorism(std::stoull(parts[1]));
    }
    if (head == "cps") {
      want_args(3);
      return fixture_cps(std::stoull(parts[1]), std::stod(parts[2]), std::stod(parts[3]));
    }
  } catch (const std::invalid_argument&) {
    throw SpecError("fixture " + head + ": malformed numeric argument");
  } catch (const std::out_of_range&) {
    throw SpecError("fixture " + head + ": numeric argument out of range");
  }
  throw SpecError("fixture: unknown name '" + head + "'");
}

}  // namespace hypersg
