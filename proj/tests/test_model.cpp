#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hypersg/errors.hpp"
#include "hypersg/instances.hpp"
#include "hypersg/model.hpp"
#include "hypersg/rng.hpp"
#include "support/builders.hpp"

using namespace hypersg;

namespace {

SecurityGameSpec constant_payoff_spec(int K, int n, double c) {
  SecurityGameSpec spec;
  spec.K = K;
  spec.n = n;
  spec.leader_resource = 2.0;
  spec.follower_resources.assign(n, 1.5);
  spec.leader_covered.assign(K, c);
  spec.leader_uncovered.assign(K, c);
  spec.follower_payoffs.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k)
      spec.follower_payoffs[i].push_back(
          {ParametricPayoff::make_constant(c), ParametricPayoff::make_constant(c)});
  spec.theta = ThetaSpace::singleton({0.0});
  return spec;
}

}  // namespace

TEST_CASE("leader utility on the two-point deception game") {
  const SecurityGameSpec spec = fixture_example2();
  const StrategyProfile p = make_profile(spec, {0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK(leader_utility(spec, p.x, p.followers) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("flat leader tables collapse to c * R_l * sum R_i") {
  const SecurityGameSpec spec = constant_payoff_spec(3, 2, 0.75);
  RandomStream rs(42, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = testsupport::random_simplex(rs, spec.K, spec.leader_resource);
    std::vector<std::vector<double>> ys;
    for (int i = 0; i < spec.n; ++i)
      ys.push_back(testsupport::random_simplex(rs, spec.K, spec.follower_resources[i]));
    const StrategyProfile p = make_profile(spec, x, ys);
    CHECK(leader_utility(spec, p.x, p.followers) ==
          doctest::Approx(0.75 * 2.0 * 3.0).epsilon(1e-12));
  }
}

TEST_CASE("single-follower two-target game pays the leader theta") {
  const SecurityGameSpec spec = fixture_example1();
  for (double t : {0.1, 0.4, 0.9}) {
    const StrategyProfile p = make_profile(spec, {t, 1.0 - t}, {{1.0, 0.0}});
    CHECK(leader_utility(spec, p.x, p.followers) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("follower utility vanishes at the indifference allocation") {
  const SecurityGameSpec spec = fixture_example1();
  const double t = 0.6;
  const StrategyProfile p = make_profile(spec, {t, 1.0 - t}, {{1.0, 0.0}});
  CHECK(follower_utility(spec, p.x, p.followers[0], 0, {t}) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("flat follower tables make coverage irrelevant") {
  const SecurityGameSpec spec = constant_payoff_spec(3, 1, 1.25);
  RandomStream rs(43, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = testsupport::random_simplex(rs, spec.K, spec.leader_resource);
    const auto y = testsupport::random_simplex(rs, spec.K, spec.follower_resources[0]);
    const StrategyProfile p = make_profile(spec, x, {y});
    CHECK(follower_utility(spec, p.x, p.followers[0], 0, {0.0}) ==
          doctest::Approx(1.25 * 2.0 * 1.5).epsilon(1e-12));
  }
}

TEST_CASE("first follower of the two-point game earns 1 under the high observation") {
  const SecurityGameSpec spec = fixture_example2();
  RandomStream rs(44, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = testsupport::random_simplex(rs, spec.K, spec.leader_resource);
    const StrategyProfile p = make_profile(spec, x, {{1.0, 0.0}, {0.5, 0.5}});
    CHECK(follower_utility(spec, p.x, p.followers[0], 0, {1.0}) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("attack value equals theta minus coverage on the toy game") {
  const SecurityGameSpec spec = fixture_example1();
  for (double x1 : {0.0, 0.2, 0.7}) {
    const LeaderStrategy x = make_leader_strategy({x1, 1.0 - x1}, 1.0);
    CHECK(attack_value(spec, x, {0.5}, 0, 0) == doctest::Approx(0.5 - x1).epsilon(1e-12));
  }
}

TEST_CASE("uncovered target is worth R_l times its open payoff") {
  SecurityGameSpec spec = constant_payoff_spec(2, 1, 0.0);
  spec.follower_payoffs[0][1] = {ParametricPayoff::make_constant(0.0),
                                 ParametricPayoff::make_constant(3.5)};
  const LeaderStrategy x = make_leader_strategy({2.0, 0.0}, 2.0);
  CHECK(attack_value(spec, x, {0.0}, 0, 1) == doctest::Approx(2.0 * 3.5).epsilon(1e-12));
}

TEST_CASE("second follower of the two-point game reads back the coverage") {
  const SecurityGameSpec spec = fixture_example2();
  for (double v : {0.0, 0.3, 1.0}) {
    const LeaderStrategy x = make_leader_strategy({v, 1.0 - v}, 1.0);
    CHECK(attack_value(spec, x, {1.0}, 1, 0) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("gradients: affine slope, constant zero, quartic stationary point") {
  const ParametricPayoff affine = ParametricPayoff::make_affine(2.0, {3.0, -1.5});
  const auto ga = parametric_gradient(affine, {0.4, 0.7});
  CHECK(ga[0] == doctest::Approx(3.0));
  CHECK(ga[1] == doctest::Approx(-1.5));

  const ParametricPayoff flat = ParametricPayoff::make_constant(9.0);
  const auto gz = parametric_gradient(flat, {0.1, 0.2, 0.3});
  for (double g : gz) CHECK(g == doctest::Approx(0.0));

  // Migration-cost quartic: the inner square is stationary at 0.5.
  const SecurityGameSpec mtd = fixture_mtd(0.3);
  const auto gq = parametric_gradient(mtd.covered(1, 0), {0.5});
  CHECK(gq[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mtd.covered(1, 0).value({0.5}) ==
        doctest::Approx(0.041 * (0.0 - 10.0 + 0.3) * (0.0 - 10.0 + 0.3) + 4.305));
}

TEST_CASE("gradients agree with central finite differences") {
  RandomStream rs(45, 1);
  const double h = 1e-6;
  std::vector<ParametricPayoff> payoffs = {
      ParametricPayoff::make_constant(2.0),
      ParametricPayoff::make_affine(1.0, {0.5, -2.0, 3.0}),
      ParametricPayoff::make_polynomial({0.3, -1.2, 0.8, 0.05, -0.4}),
      ParametricPayoff::make_scaled_affine(1.7, 0.2, {-0.9, 0.1, 0.6}),
  };
  for (const ParametricPayoff& p : payoffs) {
    const int m = p.family == PayoffFamily::Polynomial ? 1 : 3;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> theta(m);
      for (double& v : theta) v = rs.uniform(-1.0, 1.0);
      const auto grad = parametric_gradient(p, theta);
      for (int d = 0; d < m; ++d) {
        std::vector<double> lo = theta, hi = theta;
        lo[d] -= h;
        hi[d] += h;
        const double fd = (p.value(hi) - p.value(lo)) / (2.0 * h);
        CHECK(std::abs(grad[d] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("best response singles out the observed target") {
  const SecurityGameSpec spec = fixture_example2();
  RandomStream rs(46, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const LeaderStrategy x{testsupport::random_simplex(rs, 2, 1.0)};
    const auto br = best_response_set(spec, x, {1.0}, 0);
    REQUIRE(br.size() == 1);
    CHECK(br[0].index == 1);
  }
}

TEST_CASE("total tie yields the full target set") {
  const SecurityGameSpec spec = constant_payoff_spec(4, 1, 1.0);
  const LeaderStrategy x = make_leader_strategy({0.5, 0.5, 0.5, 0.5}, 2.0);
  CHECK(best_response_set(spec, x, {0.0}, 0).size() == 4);
}

TEST_CASE("toy game: strictly positive margin picks t_1") {
  const SecurityGameSpec spec = fixture_example1();
  const LeaderStrategy x = make_leader_strategy({0.2, 0.8}, 1.0);
  const auto br = best_response_set(spec, x, {0.5}, 0);
  REQUIRE(br.size() == 1);
  CHECK(br[0].index == 1);
}

TEST_CASE("assumption flags on the named games") {
  const AssumptionReport r1 = validate_spec(fixture_example1());
  CHECK(r1.shapes_ok);
  CHECK_FALSE(r1.a3);  // t_2 covered == uncovered
  bool mentions_t2 = false;
  for (const auto& note : r1.notes) mentions_t2 = mentions_t2 || note.find("t_2") != std::string::npos;
  CHECK(mentions_t2);

  InstanceGenConfig cfg;
  cfg.n = 3;
  cfg.K = 4;
  cfg.seed = 99;
  const AssumptionReport r2 = validate_spec(generate_random(cfg));
  CHECK(r2.shapes_ok);
  CHECK(r2.a3);
  CHECK(r2.a4);

  const AssumptionReport r3 = validate_spec(fixture_example2());
  CHECK_FALSE(r3.a4);  // follower 2 prefers covered targets
}

TEST_CASE("strategy constructors enforce the simplex invariants") {
  CHECK_THROWS_AS(make_leader_strategy({0.5, 0.6}, 1.0), SpecError);
  CHECK_THROWS_AS(make_leader_strategy({-0.1, 1.1}, 1.0), SpecError);
  CHECK_THROWS_AS(make_follower_strategy({0.2, 0.2}, 1.0), SpecError);
  const LeaderStrategy ok = make_leader_strategy({0.5 + 4e-10, 0.5}, 1.0);
  CHECK(ok.x.size() == 2);
}

TEST_CASE("utility decomposes over attack values") {
  InstanceGenConfig cfg;
  cfg.n = 2;
  cfg.K = 5;
  cfg.mode = GenMode::Deception;
  RandomStream rs(47, 1);
  for (int trial = 0; trial < 30; ++trial) {
    cfg.seed = 1000 + trial;
    const SecurityGameSpec spec = generate_random(cfg);
    const LeaderStrategy x{testsupport::random_simplex(rs, spec.K, spec.leader_resource)};
    std::vector<double> theta(spec.theta.dim);
    for (double& v : theta) v = rs.uniform(0.0, 5.0);
    for (int i = 0; i < spec.n; ++i) {
      const FollowerStrategy y{
          testsupport::random_simplex(rs, spec.K, spec.follower_resources[i])};
      double recomposed = 0.0;
      for (int k = 0; k < spec.K; ++k) recomposed += y.y[k] * attack_value(spec, x, theta, i, k);
      const double direct = follower_utility(spec, x, y, i, theta);
      CHECK(std::abs(direct - recomposed) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("best-response support dominates random mixtures") {
  InstanceGenConfig cfg;
  cfg.n = 2;
  cfg.K = 4;
  cfg.seed = 7;
  const SecurityGameSpec spec = generate_random(cfg);
  RandomStream rs(48, 1);
  const LeaderStrategy x{testsupport::random_simplex(rs, spec.K, spec.leader_resource)};
  for (int i = 0; i < spec.n; ++i) {
    const auto br = best_response_targets(spec, x, {0.0}, i);
    std::vector<double> y(spec.K, 0.0);
    y[br[0]] = spec.follower_resources[i];
    const double best = follower_utility(spec, x, FollowerStrategy{y}, i, {0.0});
    for (int s = 0; s < 1000; ++s) {
      const FollowerStrategy probe{
          testsupport::random_simplex(rs, spec.K, spec.follower_resources[i])};
      CHECK(best >= follower_utility(spec, x, probe, i, {0.0}) - 1e-9);
    }
  }
}

TEST_CASE("theta outside the declared space is rejected") {
  const SecurityGameSpec spec = fixture_example1();
  const StrategyProfile p = make_profile(spec, {0.5, 0.5}, {{1.0, 0.0}});
  CHECK_THROWS_AS(follower_utility(spec, p.x, p.followers[0], 0, {2.0}), DomainError);
  CHECK_THROWS_AS(best_response_set(spec, p.x, {-0.5}, 0), DomainError);
}
