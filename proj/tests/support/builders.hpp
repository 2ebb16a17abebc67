// Shared hand-built games and biased generators used across the test suites.
#pragma once

#include <cstdint>
#include <vector>

#include "hypersg/instances.hpp"
#include "hypersg/model.hpp"
#include "hypersg/rng.hpp"

namespace testsupport {

using hypersg::ParametricPayoff;
using hypersg::SecurityGameSpec;
using hypersg::ThetaSpace;

/// Single follower, two targets, no theta dependence: the follower strongly
/// prefers open targets (uncovered 10 vs 4), the leader gains 5 per covered
/// attack. Optimum: x = [5/7, 2/7], attack on t_1, value 25/7.
inline SecurityGameSpec slsf_two_targets() {
  SecurityGameSpec spec;
  spec.K = 2;
  spec.n = 1;
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0};
  spec.leader_covered = {5.0, 5.0};
  spec.leader_uncovered = {0.0, 0.0};
  spec.follower_payoffs = {{
      {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(10.0)},
      {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(4.0)},
  }};
  spec.theta = ThetaSpace::singleton({0.0});
  return spec;
}

/// Two followers pinned on different targets with distinct utility ratios, so
/// the stability system forces two incompatible scalings at once.
inline SecurityGameSpec mismatched_ratio_pair() {
  SecurityGameSpec spec;
  spec.K = 2;
  spec.n = 2;
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0, 1.0};
  spec.leader_covered = {5.0, 5.0};
  spec.leader_uncovered = {0.0, 0.0};
  // ratio(t_1, follower 1) = 10/5 = 2, ratio(t_2, follower 2) = 15/5 = 3.
  spec.follower_payoffs = {
      {
          {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(10.0)},
          {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(1.0)},
      },
      {
          {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(1.0)},
          {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(15.0)},
      },
  };
  spec.theta = ThetaSpace::singleton({0.0});
  return spec;
}

/// Robustness workbench: coverage on t_1 mutes the follower entirely, the
/// leader's unique optimum is x = [1, 0] (value 2 on the uncovered side of
/// t_2), and only t_1's open payoff moves with theta.
inline SecurityGameSpec robustness_bench() {
  SecurityGameSpec spec;
  spec.K = 2;
  spec.n = 1;
  spec.leader_resource = 1.0;
  spec.follower_resources = {1.0};
  spec.leader_covered = {0.0, 0.0};
  spec.leader_uncovered = {0.0, 2.0};
  spec.follower_payoffs = {{
      {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_affine(2.0, {1.0})},
      {ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(1.0)},
  }};
  spec.theta = ThetaSpace::box({0.0}, {-1.0}, {1.0}, {9});
  return spec;
}

/// Random misperception instance where target t_1 is emphatically best for
/// everyone: every follower's open payoff peaks there and the leader's
/// covered and uncovered rewards dominate, so the optimum sends all attacks
/// to t_1.
inline SecurityGameSpec same_target_biased(int n, int K, std::uint64_t seed) {
  hypersg::RandomStream fc(seed, 11), fu(seed, 12), lc(seed, 13), lu(seed, 14), rr(seed, 15);
  SecurityGameSpec spec;
  spec.n = n;
  spec.K = K;
  spec.leader_resource = rr.uniform(1.0, 5.0);
  for (int i = 0; i < n; ++i) spec.follower_resources.push_back(rr.uniform(1.0, 5.0));
  spec.leader_covered.assign(K, 0.0);
  spec.leader_uncovered.assign(K, 0.0);
  spec.leader_covered[0] = 10.0;
  spec.leader_uncovered[0] = 8.0;
  for (int k = 1; k < K; ++k) {
    spec.leader_covered[k] = lc.uniform(5.0, 6.0);
    spec.leader_uncovered[k] = lu.uniform(0.0, 1.0);
  }
  spec.follower_payoffs.assign(n, {});
  for (int i = 0; i < n; ++i) {
    spec.follower_payoffs[i].push_back(
        {ParametricPayoff::make_constant(5.0), ParametricPayoff::make_constant(10.0)});
    for (int k = 1; k < K; ++k) {
      const double u = fu.uniform(5.0, 9.0);
      const double c = fc.uniform(0.0, 5.0);
      spec.follower_payoffs[i].push_back(
          {ParametricPayoff::make_constant(c), ParametricPayoff::make_constant(u)});
    }
  }
  spec.theta = ThetaSpace::singleton({0.0});
  return spec;
}

/// Affine deception instance with a focal target: at the true observation one
/// target's covered payoff beats every other open payoff for all followers
/// (the most-attractive-target premise), and the observation shifts both
/// entries of each cell additively.
inline SecurityGameSpec focal_affine_deception(int n, int K, std::uint64_t seed) {
  hypersg::RandomStream fc(seed, 21), fu(seed, 22), lc(seed, 23), lu(seed, 24), rr(seed, 25);
  SecurityGameSpec spec;
  spec.n = n;
  spec.K = K;
  spec.leader_resource = rr.uniform(1.0, 5.0);
  for (int i = 0; i < n; ++i) spec.follower_resources.push_back(rr.uniform(1.0, 5.0));
  for (int k = 0; k < K; ++k) {
    spec.leader_covered.push_back(lc.uniform(5.0, 10.0));
    spec.leader_uncovered.push_back(lu.uniform(0.0, 5.0));
  }
  const int m = n * K;
  spec.follower_payoffs.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      double c, u;
      if (k == 0) {  // focal target: covered payoff above every other open payoff
        c = fc.uniform(6.0, 7.0);
        u = fu.uniform(8.0, 10.0);
      } else {
        c = fc.uniform(0.0, 1.5);
        u = fu.uniform(2.0, 5.0);
      }
      std::vector<double> axis(m, 0.0);
      axis[i * K + k] = 1.0;
      spec.follower_payoffs[i].push_back(
          {ParametricPayoff::make_affine(c, axis), ParametricPayoff::make_affine(u, axis)});
    }
  }
  std::vector<int> counts(m, m <= 10 ? 2 : 1);
  if (m > 10)
    for (int i = 0; i < n; ++i) counts[i * K] = 2;
  spec.theta = ThetaSpace::box(std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                               std::vector<double>(m, 5.0), counts);
  return spec;
}

/// Uniform point on the resource simplex (exponential spacing trick).
inline std::vector<double> random_simplex(hypersg::RandomStream& rs, int K, double resource) {
  std::vector<double> v(K);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    double u = rs.uniform();
    while (u <= 0.0) u = rs.uniform();
    v[k] = -std::log(u);
    sum += v[k];
  }
  for (double& x : v) x *= resource / sum;
  return v;
}

}  // namespace testsupport
