#include "hypersg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "hypersg/equilibrium.hpp"
#include "hypersg/errors.hpp"
#include "hypersg/instances.hpp"
#include "hypersg/robustness.hpp"
#include "hypersg/rng.hpp"
#include "hypersg/stability.hpp"

namespace hypersg {

int worker_count() {
  const char* env = std::getenv("HYPERSG_WORKERS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

namespace {

// Runs fn(i) for i in [0, count) on `workers` threads; results are indexed,
// so the reduction order downstream stays deterministic.
template <typename Fn>
void parallel_for_ordered(int count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int spawn = std::min(workers, count);
  pool.reserve(spawn);
  for (int w = 0; w < spawn; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

std::uint64_t instance_seed(std::uint64_t base, int sweep_value, int index) {
  return mix64(base ^ mix64(static_cast<std::uint64_t>(sweep_value) * 0x1000193 + index));
}

struct CaseKind {
  bool deception = false;
  bool num_over_condition = false;  // case1/case3 divide by the condition count
};

CaseKind classify(const std::string& case_id) {
  if (case_id == "case1") return {false, true};
  if (case_id == "case2") return {false, false};
  if (case_id == "case3") return {true, true};
  if (case_id == "case4") return {true, false};
  throw ConfigError("unknown experiment case '" + case_id + "'");
}

}  // namespace

ExperimentOutcome run_cases(const ExperimentPlan& plan) {
  const CaseKind kind = classify(plan.case_id);
  if (plan.sweep.empty()) throw ConfigError("experiment plan: empty sweep");
  if (plan.instances_per_point < 1) throw ConfigError("experiment plan: no instances requested");
  if (plan.axis != 'n' && plan.axis != 'K') throw ConfigError("experiment plan: axis must be n or K");

  // Refuse enumeration-hostile points up front.
  for (int v : plan.sweep) {
    const int n = plan.axis == 'n' ? v : plan.fixed_other;
    const int K = plan.axis == 'K' ? v : plan.fixed_other;
    if (n < 1 || K < 1) throw ConfigError("experiment plan: sweep produced empty game");
    if (!plan.use_milp && std::pow(static_cast<double>(K), n) > plan.max_assignments)
      throw BudgetError("experiment plan: K^n exceeds the enumeration budget; pass the MILP flag");
  }

  ExperimentOutcome outcome;
  outcome.plan = plan;
  const int workers = worker_count();

  for (int v : plan.sweep) {
    const int n = plan.axis == 'n' ? v : plan.fixed_other;
    const int K = plan.axis == 'K' ? v : plan.fixed_other;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<InstanceVerdict> verdicts(plan.instances_per_point);
    std::atomic<bool> partial{false};
    parallel_for_ordered(plan.instances_per_point, workers, [&](int idx) {
      InstanceGenConfig cfg;
      cfg.n = n;
      cfg.K = K;
      cfg.mode = kind.deception ? GenMode::Deception : GenMode::Misperception;
      cfg.seed = instance_seed(plan.base_seed, v, idx);
      const SecurityGameSpec spec = generate_random(cfg);

      InstanceVerdict verdict;
      verdict.seed = cfg.seed;
      verdict.n = n;
      verdict.K = K;
      if (!kind.deception) {
        StabilityReport rep = certify_msse_stability(spec, spec.theta.true_value);
        verdict.sol_nonempty = rep.condition_holds;
        verdict.msse_hne = rep.hne.is_hne;
      } else {
        StabilityReport rep = certify_dsse_stability(spec);
        verdict.trick = rep.condition_holds;
        verdict.dsse_hne = rep.hne.is_hne;
      }
      verdicts[idx] = verdict;
    });

    ExperimentRow row;
    row.sweep_value = v;
    for (const InstanceVerdict& verdict : verdicts) {
      const bool condition = kind.deception ? verdict.trick : verdict.sol_nonempty;
      const bool hne = kind.deception ? verdict.dsse_hne : verdict.msse_hne;
      const bool both = condition && hne;
      row.numerator += both ? 1 : 0;
      row.denominator += (kind.num_over_condition ? condition : hne) ? 1 : 0;
      outcome.verdicts.push_back(verdict);
    }
    if (row.denominator > 0)
      row.ratio = static_cast<double>(row.numerator) / static_cast<double>(row.denominator);
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    outcome.rows.push_back(row);
    outcome.partial = outcome.partial || partial.load();
  }
  return outcome;
}

std::string cases_csv(const ExperimentOutcome& outcome) {
  std::ostringstream out;
  out << "case,axis,sweep_value,instances,numerator,denominator,ratio\n";
  for (const ExperimentRow& row : outcome.rows) {
    out << outcome.plan.case_id << ',' << outcome.plan.axis << ',' << row.sweep_value << ','
        << outcome.plan.instances_per_point << ',' << row.numerator << ',' << row.denominator
        << ',';
    if (row.ratio)
      out << format_float(*row.ratio);
    else
      out << "undefined";
    out << '\n';
  }
  return out.str();
}

Json verdict_log(const ExperimentOutcome& outcome) {
  Json j;
  j["plan"] = plan_to_json(outcome.plan);
  j["partial"] = outcome.partial;
  Json rows = Json::array();
  for (const ExperimentRow& row : outcome.rows) {
    Json r = {{"sweep_value", row.sweep_value},
              {"numerator", row.numerator},
              {"denominator", row.denominator},
              {"wall_time_s", row.wall_time_s}};
    if (row.ratio)
      r["ratio"] = *row.ratio;
    else
      r["ratio"] = "undefined";
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  Json verdicts = Json::array();
  for (const InstanceVerdict& v : outcome.verdicts) {
    verdicts.push_back({{"seed", v.seed},
                        {"n", v.n},
                        {"K", v.K},
                        {"sol_nonempty", v.sol_nonempty},
                        {"msse_hne", v.msse_hne},
                        {"trick", v.trick},
                        {"dsse_hne", v.dsse_hne}});
  }
  j["verdicts"] = std::move(verdicts);
  return j;
}

ExperimentPlan plan_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("plan: expected an object");
  ExperimentPlan plan;
  for (const auto& [key, value] : j.items()) {
    if (key == "case")
      plan.case_id = value.get<std::string>();
    else if (key == "axis") {
      const std::string a = value.get<std::string>();
      if (a != "n" && a != "K") throw ConfigError("plan: axis must be 'n' or 'K'");
      plan.axis = a[0];
    } else if (key == "sweep")
      plan.sweep = value.get<std::vector<int>>();
    else if (key == "fixed")
      plan.fixed_other = value.get<int>();
    else if (key == "instances_per_point")
      plan.instances_per_point = value.get<int>();
    else if (key == "base_seed")
      plan.base_seed = value.get<std::uint64_t>();
    else if (key == "milp")
      plan.use_milp = value.get<bool>();
    else if (key == "max_assignments")
      plan.max_assignments = value.get<double>();
    else
      throw ConfigError("plan: unknown key '" + key + "'");
  }
  if (plan.case_id.empty()) throw ConfigError("plan: missing 'case'");
  if (plan.sweep.empty()) throw ConfigError("plan: missing 'sweep'");
  return plan;
}

Json plan_to_json(const ExperimentPlan& plan) {
  return Json{{"case", plan.case_id},
              {"axis", std::string(1, plan.axis)},
              {"sweep", plan.sweep},
              {"fixed", plan.fixed_other},
              {"instances_per_point", plan.instances_per_point},
              {"base_seed", plan.base_seed},
              {"milp", plan.use_milp},
              {"max_assignments", plan.max_assignments}};
}

RobustnessScan run_robustness(const std::string& fixture_name, const std::string& which) {
  if (which != "msse" && which != "dsse")
    throw ConfigError("run_robustness: 'which' must be msse or dsse");
  const SecurityGameSpec spec = fixture(fixture_name);
  const EquilibriumResult sse = solve_msse(spec, spec.theta.true_value);

  RobustnessScan scan;
  scan.fixture = fixture_name;
  scan.which = which;

  const RobustnessReport rep = robustness_report(
      spec, which == "msse" ? RobustnessSide::Msse : RobustnessSide::Dsse);
  scan.delta_theta = which == "msse" ? rep.delta_msse : rep.delta_dsse;
  scan.empirical_radius = rep.empirical ? rep.empirical->radius : 0.0;

  const long long gs = spec.theta.grid_size();
  for (long long gi = 0; gi < gs; ++gi) {
    const std::vector<double> th = spec.theta.grid_point(gi);
    scan.thetas.push_back(th.size() == 1 ? th[0] : static_cast<double>(gi));
    if (which == "msse") {
      // Followers re-best-respond to the fixed SSE coverage; report their
      // true-parameter utilities.
      std::vector<double> utilities(spec.n, 0.0);
      for (int i = 0; i < spec.n; ++i) {
        const std::vector<int> br = best_response_targets(spec, sse.profile.x, th, i);
        int pick = br[0];
        double gain = -1e300;
        for (int k : br) {
          const double lv = sse.profile.x.x[k] * spec.leader_covered[k] +
                            (spec.leader_resource - sse.profile.x.x[k]) * spec.leader_uncovered[k];
          if (lv > gain + 1e-15) {
            gain = lv;
            pick = k;
          }
        }
        utilities[i] = spec.follower_resources[i] *
                       attack_value(spec, sse.profile.x, spec.theta.true_value, i, pick);
      }
      scan.utilities.push_back(std::move(utilities));
    } else {
      scan.utilities.push_back({solve_msse(spec, th).leader_value});
    }
  }
  return scan;
}

std::string robustness_csv(const RobustnessScan& scan) {
  std::ostringstream out;
  out << "theta";
  const std::size_t players = scan.utilities.empty() ? 0 : scan.utilities[0].size();
  if (scan.which == "msse") {
    for (std::size_t i = 0; i < players; ++i) out << ",follower_" << (i + 1) << "_actual";
  } else {
    out << ",leader_value";
  }
  out << ",delta_theta,empirical_radius\n";
  for (std::size_t row = 0; row < scan.thetas.size(); ++row) {
    out << format_float(scan.thetas[row]);
    for (double u : scan.utilities[row]) out << ',' << format_float(u);
    out << ',' << format_float(scan.delta_theta) << ',' << format_float(scan.empirical_radius)
        << '\n';
  }
  return out.str();
}

}  // namespace hypersg
