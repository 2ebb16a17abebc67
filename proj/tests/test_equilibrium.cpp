#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hypersg/equilibrium.hpp"
#include "hypersg/errors.hpp"
#include "hypersg/instances.hpp"
#include "hypersg/rng.hpp"
#include "support/builders.hpp"

using namespace hypersg;

namespace {

SecurityGameSpec single_target_game() {
  SecurityGameSpec spec;
  spec.K = 1;
  spec.n = 2;
  spec.leader_resource = 2.0;
  spec.follower_resources = {1.0, 3.0};
  spec.leader_covered = {4.0};
  spec.leader_uncovered = {1.0};
  spec.follower_payoffs = {
      {{ParametricPayoff::make_constant(0.0), ParametricPayoff::make_constant(5.0)}},
      {{ParametricPayoff::make_constant(1.0), ParametricPayoff::make_constant(6.0)}},
  };
  spec.theta = ThetaSpace::singleton({0.0});
  return spec;
}

}  // namespace

TEST_CASE("commitment optimum rides the incentive boundary") {
  const SecurityGameSpec spec = testsupport::slsf_two_targets();
  const EquilibriumResult res = solve_msse(spec, {0.0});
  CHECK(res.leader_value == doctest::Approx(25.0 / 7.0).epsilon(1e-9));
  CHECK(res.profile.x.x[0] == doctest::Approx(5.0 / 7.0).epsilon(1e-9));
  CHECK(res.profile.x.x[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-9));
  REQUIRE(res.chosen_targets.size() == 1);
  CHECK(res.chosen_targets[0].index == 1);

  // Independent lattice search lands within its step-resolution slack.
  const EquilibriumResult oracle = brute_force_sse(spec, {0.0}, 1e-3);
  CHECK(std::abs(oracle.leader_value - 25.0 / 7.0) <= 5e-3);
  CHECK(oracle.leader_value <= res.leader_value + 1e-9);
}

TEST_CASE("single target forces the whole allocation") {
  const SecurityGameSpec spec = single_target_game();
  const EquilibriumResult res = solve_msse(spec, {0.0});
  CHECK(res.profile.x.x[0] == doctest::Approx(2.0));
  CHECK(res.leader_value == doctest::Approx(2.0 * 4.0 * (1.0 + 3.0)).epsilon(1e-12));
  const EquilibriumResult oracle = brute_force_sse(spec, {0.0}, 0.1);
  CHECK(oracle.leader_value == doctest::Approx(res.leader_value).epsilon(1e-12));
}

TEST_CASE("toy deception game pays exactly the observed value") {
  const SecurityGameSpec spec = fixture_example1();
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const EquilibriumResult res = solve_msse(spec, {t});
    CHECK(res.leader_value == doctest::Approx(t).epsilon(1e-9));
    CHECK(res.profile.x.x[0] == doctest::Approx(t).epsilon(1e-9));
    CHECK(res.chosen_targets[0].index == 1);
  }
}

TEST_CASE("branch and bound reproduces the enumerated optimum") {
  const SecurityGameSpec spec = testsupport::slsf_two_targets();
  const MilpOutcome milp = solve_msse_milp(spec, {0.0});
  CHECK(milp.status == MilpStatus::Solved);
  CHECK(milp.result.leader_value == doctest::Approx(25.0 / 7.0).epsilon(1e-6));

  const MilpOutcome trivial = solve_msse_milp(single_target_game(), {0.0});
  CHECK(trivial.result.leader_value == doctest::Approx(32.0).epsilon(1e-9));
  CHECK(trivial.nodes <= 2);
}

TEST_CASE("branch-and-bound value matches enumeration on random games") {
  for (int trial = 0; trial < 12; ++trial) {
    InstanceGenConfig cfg;
    cfg.n = 1 + trial % 3;
    cfg.K = 2 + trial % 4;
    cfg.seed = 500 + trial;
    const SecurityGameSpec spec = generate_random(cfg);
    const EquilibriumResult enumd = solve_msse(spec, spec.theta.true_value);
    const MilpOutcome milp = solve_msse_milp(spec, spec.theta.true_value);
    CHECK(milp.status == MilpStatus::Solved);
    CHECK(std::abs(milp.result.leader_value - enumd.leader_value) <=
          1e-6 * std::max(1.0, std::abs(enumd.leader_value)));
  }
}

TEST_CASE("milp node budget reports the incumbent and bound") {
  InstanceGenConfig cfg;
  cfg.n = 3;
  cfg.K = 4;
  cfg.seed = 11;
  const SecurityGameSpec spec = generate_random(cfg);
  const MilpOutcome out = solve_msse_milp(spec, spec.theta.true_value, 2);
  CHECK(out.status == MilpStatus::BudgetExceeded);
  CHECK(out.upper_bound >= out.result.leader_value - 1e-9);
}

TEST_CASE("big-M instance data accepts the solved point and rejects broken ones") {
  const SecurityGameSpec spec = testsupport::slsf_two_targets();
  const EquilibriumResult res = solve_msse(spec, {0.0});
  const MilpInstance milp = build_milp_instance(spec);
  std::vector<std::vector<int>> y_bin(spec.n, std::vector<int>(spec.K, 0));
  std::vector<double> a(spec.n, 0.0);
  for (int i = 0; i < spec.n; ++i) {
    const int k = res.chosen_targets[i].index - 1;
    y_bin[i][k] = 1;
    a[i] = res.follower_perceived[i];
  }
  CHECK(milp.feasible(spec, {0.0}, res.profile.x.x, y_bin, a));
  // Under full coverage of t_1 the follower strictly prefers t_2, so pinning
  // the attack on t_1 breaks the a_i floor on the other row.
  std::vector<std::vector<int>> wrong = {{1, 0}};
  const LeaderStrategy full = make_leader_strategy({1.0, 0.0}, 1.0);
  std::vector<double> a_wrong = {attack_value(spec, full, {0.0}, 0, 0) *
                                 spec.follower_resources[0]};
  CHECK_FALSE(milp.feasible(spec, {0.0}, full.x, wrong, a_wrong));
}

TEST_CASE("one-point observation set makes deception vacuous") {
  const SecurityGameSpec spec = testsupport::slsf_two_targets();
  const DsseResult dsse = solve_dsse(spec);
  const EquilibriumResult sse = solve_msse(spec, spec.theta.true_value);
  CHECK(dsse.result.leader_value == doctest::Approx(sse.leader_value).epsilon(1e-12));
  CHECK(dsse.theta_star == std::vector<double>{0.0});
}

TEST_CASE("deception argmax lands on the top of the closed grid") {
  const SecurityGameSpec spec = fixture_example1();
  const DsseResult dsse = solve_dsse(spec);
  CHECK(dsse.theta_star[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(dsse.result.leader_value == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("deception value dominates the truthful solve") {
  for (int trial = 0; trial < 6; ++trial) {
    InstanceGenConfig cfg;
    cfg.n = 1 + trial % 2;
    cfg.K = 2 + trial % 3;
    cfg.mode = GenMode::Deception;
    cfg.seed = 900 + trial;
    const SecurityGameSpec spec = generate_random(cfg);
    const DsseResult dsse = solve_dsse(spec);
    const EquilibriumResult sse = solve_msse(spec, spec.theta.true_value);
    CHECK(dsse.result.leader_value >= sse.leader_value);
  }
}

TEST_CASE("single-target profiles are always equilibria") {
  const SecurityGameSpec spec = single_target_game();
  const StrategyProfile p = make_profile(spec, {2.0}, {{1.0}, {3.0}});
  CHECK(check_ne(spec, p, {0.0}));
  CHECK(check_hne(spec, p, {0.0}).is_hne);
}

TEST_CASE("stated optimal deception of the two-point game fails the equilibrium checks") {
  const SecurityGameSpec spec = fixture_example2();
  const StrategyProfile p = make_profile(spec, {0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK_FALSE(check_ne(spec, p, {1.0}));
  const HneCertificate cert = check_hne(spec, p, {1.0});
  CHECK_FALSE(cert.is_hne);
  REQUIRE(cert.violation.has_value());
  CHECK(cert.violation->player == 0);
  CHECK(cert.violation->improving_value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("flat leader tables reduce the check to follower rationality") {
  SecurityGameSpec spec = testsupport::slsf_two_targets();
  spec.leader_covered = {2.0, 2.0};
  spec.leader_uncovered = {2.0, 2.0};
  RandomStream rs(49, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const LeaderStrategy x{testsupport::random_simplex(rs, 2, 1.0)};
    const auto br = best_response_targets(spec, x, {0.0}, 0);
    std::vector<double> y(2, 0.0);
    y[br[0]] = 1.0;
    const StrategyProfile good = make_profile(spec, x.x, {y});
    CHECK(check_ne(spec, good, {0.0}));
  }
  // A follower parked off its best response breaks it.
  const StrategyProfile bad = make_profile(spec, {1.0, 0.0}, {{1.0, 0.0}});
  CHECK_FALSE(check_ne(spec, bad, {0.0}));  // g = (0, 4): t_2 is the BR
}

TEST_CASE("hyper-stability holds at the boundary optimum of the single-follower game") {
  const SecurityGameSpec spec = testsupport::slsf_two_targets();
  const EquilibriumResult res = solve_msse(spec, {0.0});
  const HneCertificate cert = check_hne(spec, res.profile, {0.0});
  CHECK(cert.is_hne);
}

TEST_CASE("lattice oracle stays below the LP optimum on random games") {
  RandomStream rs(50, 1);
  for (int trial = 0; trial < 100; ++trial) {
    InstanceGenConfig cfg;
    cfg.n = 1 + static_cast<int>(rs.below(2));
    cfg.K = 2 + static_cast<int>(rs.below(2));
    cfg.seed = 2000 + trial;
    const SecurityGameSpec spec = generate_random(cfg);
    const double step = spec.leader_resource / 64.0;
    const EquilibriumResult oracle = brute_force_sse(spec, {0.0}, step);
    const EquilibriumResult lp = solve_msse(spec, {0.0});
    CHECK(oracle.leader_value <= lp.leader_value + 1e-7);
    CHECK(oracle.leader_value >= lp.leader_value - brute_force_slack_per_step(spec) * step);
  }
}

TEST_CASE("oracle and solver agree within the sensitivity slack at fine steps") {
  for (int trial = 0; trial < 5; ++trial) {
    InstanceGenConfig cfg;
    cfg.n = 2;
    cfg.K = 2 + trial % 2;
    cfg.seed = 3000 + trial;
    const SecurityGameSpec spec = generate_random(cfg);
    // K = 4 keeps a coarser lattice; the slack scales with the step.
    const long long units = cfg.K <= 3 ? 1000 : 60;
    const double step = spec.leader_resource / static_cast<double>(units);
    const EquilibriumResult oracle = brute_force_sse(spec, {0.0}, step);
    const EquilibriumResult lp = solve_msse(spec, {0.0});
    CHECK(std::abs(oracle.leader_value - lp.leader_value) <=
          brute_force_slack_per_step(spec) * step + 1e-7);
  }
  InstanceGenConfig cfg;
  cfg.n = 2;
  cfg.K = 4;
  cfg.seed = 3100;
  const SecurityGameSpec spec = generate_random(cfg);
  const double step = spec.leader_resource / 60.0;
  const EquilibriumResult oracle = brute_force_sse(spec, {0.0}, step);
  const EquilibriumResult lp = solve_msse(spec, {0.0});
  CHECK(std::abs(oracle.leader_value - lp.leader_value) <=
        brute_force_slack_per_step(spec) * step + 1e-7);
}

TEST_CASE("oversized lattices are refused") {
  InstanceGenConfig cfg;
  cfg.n = 1;
  cfg.K = 8;
  cfg.seed = 4;
  const SecurityGameSpec spec = generate_random(cfg);
  CHECK_THROWS_AS(brute_force_sse(spec, {0.0}, spec.leader_resource / 5000.0), BudgetError);
}

TEST_CASE("chosen targets are best responses at the solving observation") {
  for (int trial = 0; trial < 15; ++trial) {
    InstanceGenConfig cfg;
    cfg.n = 1 + trial % 3;
    cfg.K = 2 + trial % 5;
    cfg.seed = 4000 + trial;
    const SecurityGameSpec spec = generate_random(cfg);
    const EquilibriumResult res = solve_msse(spec, spec.theta.true_value);
    for (int i = 0; i < spec.n; ++i) {
      const auto br = best_response_targets(spec, res.profile.x, res.theta_used, i);
      CHECK(std::find(br.begin(), br.end(), res.chosen_targets[i].index - 1) != br.end());
    }
  }
}

TEST_CASE("identical inputs give identical outputs including the tie trace") {
  SecurityGameSpec spec = testsupport::slsf_two_targets();
  // Symmetric follower tables force a genuine cross-assignment tie.
  spec.follower_payoffs[0][1] = spec.follower_payoffs[0][0];
  const EquilibriumResult a = solve_msse(spec, {0.0});
  const EquilibriumResult b = solve_msse(spec, {0.0});
  CHECK(a.profile == b.profile);
  CHECK(a.leader_value == b.leader_value);
  REQUIRE(a.tiebreak_trace.size() == b.tiebreak_trace.size());
  CHECK(a.tiebreak_trace.size() >= 2);
  for (std::size_t i = 0; i < a.tiebreak_trace.size(); ++i)
    CHECK(a.tiebreak_trace[i] == b.tiebreak_trace[i]);
  // Lexicographic preference: the winner attacks t_1.
  CHECK(a.chosen_targets[0].index == 1);
}

TEST_CASE("observations outside the space are rejected up front") {
  const SecurityGameSpec spec = fixture_example1();
  CHECK_THROWS_AS(solve_msse(spec, {5.0}), DomainError);
}
