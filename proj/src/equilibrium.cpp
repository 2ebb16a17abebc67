#include "hypersg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>

#include "hypersg/errors.hpp"
#include "hypersg/lp.hpp"

namespace hypersg {

namespace {

// Per-theta tables used by the assignment LPs.
struct PayoffTables {
  int n, K;
  double R_l;
  std::vector<double> R;
  std::vector<std::vector<double>> fc, fu;  // follower covered / uncovered at theta
  std::vector<double> lc, lu;               // leader tables
};

PayoffTables tables_at(const SecurityGameSpec& spec, const std::vector<double>& theta) {
  PayoffTables t;
  t.n = spec.n;
  t.K = spec.K;
  t.R_l = spec.leader_resource;
  t.R = spec.follower_resources;
  t.lc = spec.leader_covered;
  t.lu = spec.leader_uncovered;
  t.fc.assign(spec.n, std::vector<double>(spec.K));
  t.fu.assign(spec.n, std::vector<double>(spec.K));
  for (int i = 0; i < spec.n; ++i)
    for (int k = 0; k < spec.K; ++k) {
      t.fc[i][k] = spec.covered(i, k).value(theta);
      t.fu[i][k] = spec.uncovered(i, k).value(theta);
    }
  return t;
}

// Incentive rows for follower i attacking target k:
//   g_i(x, l) <= g_i(x, k)  for all l != k.
void add_incentive_rows(LinearProgram& lp, const PayoffTables& t, int i, int k) {
  const double dk = t.fc[i][k] - t.fu[i][k];
  for (int l = 0; l < t.K; ++l) {
    if (l == k) continue;
    std::vector<double> row(t.K, 0.0);
    const double dl = t.fc[i][l] - t.fu[i][l];
    row[l] += dl;
    row[k] -= dk;
    lp.add_le(std::move(row), t.R_l * (t.fu[i][k] - t.fu[i][l]));
  }
}

struct AssignmentSolve {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

// Leader LP for a fixed target assignment. Objective constant is folded in.
AssignmentSolve solve_assignment(const PayoffTables& t, const std::vector<int>& assign) {
  LinearProgram lp(t.K);
  lp.add_eq(std::vector<double>(t.K, 1.0), t.R_l);
  double constant = 0.0;
  for (int i = 0; i < t.n; ++i) {
    const int k = assign[i];
    lp.objective[k] += t.R[i] * (t.lc[k] - t.lu[k]);
    constant += t.R[i] * t.R_l * t.lu[k];
    add_incentive_rows(lp, t, i, k);
  }
  const LpSolution sol = solve_lp(lp);
  AssignmentSolve out;
  if (sol.status == LpStatus::Optimal) {
    out.feasible = true;
    out.value = sol.objective + constant;
    out.x = sol.z;
  } else if (sol.status == LpStatus::Unbounded) {
    throw InternalError("assignment LP unbounded on a compact simplex");
  }
  return out;
}

// Upper bound on follower i's contribution when sent to target k.
double contribution_cap(const PayoffTables& t, int i, int k) {
  return t.R[i] * t.R_l * std::max(t.lc[k], t.lu[k]);
}

// Which (i, k) incentive regions are nonempty at all.
std::vector<std::vector<char>> feasible_targets(const PayoffTables& t) {
  std::vector<std::vector<char>> mask(t.n, std::vector<char>(t.K, 0));
  for (int i = 0; i < t.n; ++i)
    for (int k = 0; k < t.K; ++k) {
      LinearProgram lp(t.K);
      lp.add_eq(std::vector<double>(t.K, 1.0), t.R_l);
      add_incentive_rows(lp, t, i, k);
      mask[i][k] = solve_lp(lp).status == LpStatus::Optimal ? 1 : 0;
    }
  return mask;
}

EquilibriumResult build_result(const SecurityGameSpec& spec, const PayoffTables& t,
                               const std::vector<double>& theta, const std::vector<int>& assign,
                               const std::vector<double>& x, double value) {
  EquilibriumResult res;
  std::vector<std::vector<double>> ys(spec.n, std::vector<double>(spec.K, 0.0));
  for (int i = 0; i < spec.n; ++i) ys[i][assign[i]] = spec.follower_resources[i];
  std::vector<double> xs = x;
  // Clip LP round-off so the simplex invariants hold exactly enough.
  for (double& v : xs) v = std::max(v, 0.0);
  res.profile = make_profile(spec, std::move(xs), std::move(ys));
  res.leader_value = value;
  res.theta_used = theta;
  res.chosen_targets.reserve(spec.n);
  res.follower_perceived.reserve(spec.n);
  res.follower_actual.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const int k = assign[i];
    res.chosen_targets.push_back(TargetId{k + 1});
    const double g_theta = res.profile.x.x[k] * t.fc[i][k] +
                           (t.R_l - res.profile.x.x[k]) * t.fu[i][k];
    res.follower_perceived.push_back(spec.follower_resources[i] * g_theta);
    const double g0 = attack_value(spec, res.profile.x, spec.theta.true_value, i, k);
    res.follower_actual.push_back(spec.follower_resources[i] * g0);
  }
  return res;
}

StrategyProfile assignment_profile(const SecurityGameSpec& spec, const std::vector<int>& assign,
                                   const std::vector<double>& x) {
  std::vector<std::vector<double>> ys(spec.n, std::vector<double>(spec.K, 0.0));
  for (int i = 0; i < spec.n; ++i) ys[i][assign[i]] = spec.follower_resources[i];
  std::vector<double> xs = x;
  for (double& v : xs) v = std::max(v, 0.0);
  return make_profile(spec, std::move(xs), std::move(ys));
}

}  // namespace

double assignment_count(const SecurityGameSpec& spec) {
  return std::pow(static_cast<double>(spec.K), static_cast<double>(spec.n));
}

EquilibriumResult solve_msse(const SecurityGameSpec& spec, const std::vector<double>& theta) {
  spec.validate_shapes();
  require_theta_in_domain(spec, theta);
  const PayoffTables t = tables_at(spec, theta);
  const std::vector<std::vector<char>> mask = feasible_targets(t);
  for (int i = 0; i < t.n; ++i)
    if (std::find(mask[i].begin(), mask[i].end(), 1) == mask[i].end())
      throw InternalError("no inducible target for a follower");

  std::vector<std::vector<double>> cap(t.n, std::vector<double>(t.K, 0.0));
  double value_scale = 0.0;
  for (int i = 0; i < t.n; ++i) {
    double row_max = 0.0;
    for (int k = 0; k < t.K; ++k) {
      cap[i][k] = contribution_cap(t, i, k);
      row_max = std::max(row_max, std::abs(cap[i][k]));
    }
    value_scale += row_max;
  }

  double best = -std::numeric_limits<double>::infinity();

  // Warm-start the incumbent with the same-target assignments so the bound
  // prune bites early in the lexicographic sweep.
  for (int k = 0; k < t.K; ++k) {
    bool ok = true;
    for (int i = 0; i < t.n; ++i) ok = ok && mask[i][k];
    if (!ok) continue;
    const AssignmentSolve s = solve_assignment(t, std::vector<int>(t.n, k));
    if (s.feasible) best = std::max(best, s.value);
  }

  struct Candidate {
    std::vector<int> assign;
    std::vector<double> x;
    double value;
  };
  std::vector<Candidate> candidates;

  // The prune margin must dominate the final tie tolerance no matter how the
  // incumbent evolves, so scale it by the global value cap as well.
  const double keep_margin = 1e-7 * std::max(1.0, value_scale) + 1e-9;

  std::vector<int> assign(t.n, 0);
  bool done = false;
  while (!done) {
    bool assignment_ok = true;
    double ub = 0.0;
    for (int i = 0; i < t.n; ++i) {
      if (!mask[i][assign[i]]) {
        assignment_ok = false;
        break;
      }
      ub += cap[i][assign[i]];
    }
    if (assignment_ok && ub >= best - keep_margin) {
      const AssignmentSolve s = solve_assignment(t, assign);
      if (s.feasible) {
        if (s.value > best) best = s.value;
        if (s.value >= best - keep_margin)
          candidates.push_back(Candidate{assign, s.x, s.value});
      }
    }
    // Odometer increment, last follower fastest.
    int pos = t.n - 1;
    while (pos >= 0) {
      if (++assign[pos] < t.K) break;
      assign[pos] = 0;
      --pos;
    }
    done = pos < 0;
  }

  if (candidates.empty()) throw InternalError("no feasible assignment found");

  const double tie_tol = 1e-9 * std::max(1.0, std::abs(best));
  const Candidate* chosen = nullptr;
  std::vector<StrategyProfile> trace;
  for (const Candidate& c : candidates) {
    if (c.value >= best - tie_tol) {
      if (!chosen) chosen = &c;
      trace.push_back(assignment_profile(spec, c.assign, c.x));
    }
  }

  EquilibriumResult res = build_result(spec, t, theta, chosen->assign, chosen->x, chosen->value);
  res.tiebreak_trace = std::move(trace);
  return res;
}

EquilibriumResult solve_sse(const SecurityGameSpec& spec) {
  return solve_msse(spec, spec.theta.true_value);
}

MilpInstance build_milp_instance(const SecurityGameSpec& spec) {
  MilpInstance m;
  m.n = spec.n;
  m.K = spec.K;
  return m;
}

bool MilpInstance::feasible(const SecurityGameSpec& spec, const std::vector<double>& theta,
                            const std::vector<double>& x,
                            const std::vector<std::vector<int>>& y_binary,
                            const std::vector<double>& a, double tol) const {
  if (static_cast<int>(x.size()) != K || static_cast<int>(y_binary.size()) != n ||
      static_cast<int>(a.size()) != n)
    return false;
  double sx = 0.0;
  for (double v : x) {
    if (v < -tol) return false;
    sx += v;
  }
  if (std::abs(sx - spec.leader_resource) > tol) return false;
  const LeaderStrategy lx{x};
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(y_binary[i].size()) != K) return false;
    int ones = 0;
    for (int k = 0; k < K; ++k) {
      const int b = y_binary[i][k];
      if (b != 0 && b != 1) return false;
      ones += b;
      const double slack = a[i] - spec.follower_resources[i] * attack_value(spec, lx, theta, i, k);
      if (slack < -tol) return false;
      if (slack > (1.0 - b) * big_m + tol) return false;
    }
    if (ones != 1) return false;
  }
  return true;
}

MilpOutcome solve_msse_milp(const SecurityGameSpec& spec, const std::vector<double>& theta,
                            long long node_budget) {
  spec.validate_shapes();
  require_theta_in_domain(spec, theta);
  const PayoffTables t = tables_at(spec, theta);
  const std::vector<std::vector<char>> mask = feasible_targets(t);
  std::vector<double> tail_cap(t.n + 1, 0.0);  // optimistic value of followers >= i
  for (int i = t.n - 1; i >= 0; --i) {
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < t.K; ++k)
      if (mask[i][k]) m = std::max(m, contribution_cap(t, i, k));
    if (!std::isfinite(m)) throw InternalError("no inducible target for a follower");
    tail_cap[i] = tail_cap[i + 1] + m;
  }

  struct Node {
    double bound;
    long long id;
    std::vector<int> prefix;
  };
  const auto cmp = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;  // FIFO among equal bounds
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);

  long long next_id = 0;
  open.push(Node{tail_cap[0], next_id++, {}});

  double incumbent = -std::numeric_limits<double>::infinity();
  std::vector<int> inc_assign;
  std::vector<double> inc_x;

  // Greedy dive for an initial incumbent: extend the prefix one follower at a
  // time with the largest-cap target that keeps the joint region nonempty.
  {
    std::vector<int> assign;
    bool ok = true;
    for (int i = 0; i < t.n && ok; ++i) {
      std::vector<int> order;
      for (int k = 0; k < t.K; ++k)
        if (mask[i][k]) order.push_back(k);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return contribution_cap(t, i, a) > contribution_cap(t, i, b);
      });
      ok = false;
      for (int k : order) {
        assign.push_back(k);
        LinearProgram lp(t.K);
        lp.add_eq(std::vector<double>(t.K, 1.0), t.R_l);
        for (std::size_t j = 0; j < assign.size(); ++j) add_incentive_rows(lp, t, static_cast<int>(j), assign[j]);
        if (solve_lp(lp).status == LpStatus::Optimal) {
          ok = true;
          break;
        }
        assign.pop_back();
      }
    }
    if (ok) {
      const AssignmentSolve leaf = solve_assignment(t, assign);
      if (leaf.feasible) {
        incumbent = leaf.value;
        inc_assign = assign;
        inc_x = leaf.x;
      }
    }
  }
  long long nodes = 0;
  const double gap_tol = 1e-6;

  MilpOutcome out;
  out.upper_bound = tail_cap[0];
  for (;;) {
    if (open.empty()) {
      out.upper_bound = incumbent;
      break;
    }
    const Node node = open.top();
    const double upper = std::max(node.bound, incumbent);
    out.upper_bound = upper;
    if (std::isfinite(incumbent) &&
        (upper - incumbent) / std::max(std::abs(incumbent), 1e-9) < gap_tol) {
      break;
    }
    open.pop();
    ++nodes;
    if (nodes > node_budget) {
      out.status = MilpStatus::BudgetExceeded;
      break;
    }
    const int depth = static_cast<int>(node.prefix.size());
    for (int k = 0; k < t.K; ++k) {
      if (!mask[depth][k]) continue;
      std::vector<int> assign = node.prefix;
      assign.push_back(k);
      // LP over the fixed prefix; unfixed followers enter as constant caps.
      LinearProgram lp(t.K);
      lp.add_eq(std::vector<double>(t.K, 1.0), t.R_l);
      double constant = 0.0;
      for (int j = 0; j <= depth; ++j) {
        lp.objective[assign[j]] += t.R[j] * (t.lc[assign[j]] - t.lu[assign[j]]);
        constant += t.R[j] * t.R_l * t.lu[assign[j]];
        add_incentive_rows(lp, t, j, assign[j]);
      }
      const LpSolution sol = solve_lp(lp);
      if (sol.status != LpStatus::Optimal) continue;
      const double fixed_value = sol.objective + constant;
      if (depth + 1 == t.n) {
        if (fixed_value > incumbent) {
          incumbent = fixed_value;
          inc_assign = assign;
          inc_x = sol.z;
        }
      } else {
        const double bound = fixed_value + tail_cap[depth + 1];
        if (!std::isfinite(incumbent) || bound > incumbent) {
          open.push(Node{bound, next_id++, std::move(assign)});
        }
      }
    }
  }

  if (!std::isfinite(incumbent)) throw InternalError("branch and bound found no incumbent");
  out.nodes = nodes;
  out.result = build_result(spec, t, theta, inc_assign, inc_x, incumbent);
  out.result.tiebreak_trace.push_back(out.result.profile);
  return out;
}

DsseResult solve_dsse(const SecurityGameSpec& spec) {
  spec.validate_shapes();
  const long long gs = spec.theta.grid_size();
  if (gs <= 0) throw ConfigError("solve_dsse: empty theta grid");

  DsseResult best;
  bool have = false;
  for (long long gi = 0; gi < gs; ++gi) {
    const std::vector<double> th = spec.theta.grid_point(gi);
    EquilibriumResult res = solve_msse(spec, th);
    if (!have || res.leader_value > best.result.leader_value) {
      have = true;
      best.theta_star = th;
      best.theta_grid_index = gi;
      best.result = std::move(res);
    }
  }

  // Local grid-halving refinement for boxed low-dimensional spaces. High
  // dimensions keep the declared grid (the scan is grid-exact by contract).
  if (spec.theta.is_box && spec.theta.dim <= 3) {
    std::vector<double> step(spec.theta.dim, 0.0);
    for (int d = 0; d < spec.theta.dim; ++d) {
      const int c = spec.theta.grid_counts[d];
      step[d] = c > 1 ? (spec.theta.hi[d] - spec.theta.lo[d]) / (c - 1) : 0.0;
    }
    for (int round = 0; round < 3; ++round) {
      for (double& s : step) s *= 0.5;
      std::vector<double> center = best.theta_star;
      std::vector<int> counts(spec.theta.dim, 1);
      std::vector<std::vector<double>> axes(spec.theta.dim);
      for (int d = 0; d < spec.theta.dim; ++d) {
        if (step[d] <= 0.0) {
          axes[d] = {center[d]};
          continue;
        }
        for (int j = -2; j <= 2; ++j) {
          const double v = center[d] + j * step[d];
          if (v >= spec.theta.lo[d] - 1e-12 && v <= spec.theta.hi[d] + 1e-12) {
            const double clamped = std::clamp(v, spec.theta.lo[d], spec.theta.hi[d]);
            if (axes[d].empty() || std::abs(axes[d].back() - clamped) > 1e-15)
              axes[d].push_back(clamped);
          }
        }
      }
      std::vector<std::size_t> idx(spec.theta.dim, 0);
      bool done = false;
      while (!done) {
        std::vector<double> th(spec.theta.dim);
        for (int d = 0; d < spec.theta.dim; ++d) th[d] = axes[d][idx[d]];
        EquilibriumResult res = solve_msse(spec, th);
        if (res.leader_value > best.result.leader_value) {
          best.theta_star = th;
          best.result = std::move(res);
        }
        int pos = spec.theta.dim - 1;
        while (pos >= 0) {
          if (++idx[pos] < axes[pos].size()) break;
          idx[pos] = 0;
          --pos;
        }
        done = pos < 0;
      }
    }
  }
  return best;
}

HneCertificate check_hne(const SecurityGameSpec& spec, const StrategyProfile& profile,
                         const std::vector<double>& theta_observed) {
  spec.validate_shapes();
  require_theta_in_domain(spec, theta_observed);
  if (static_cast<int>(profile.x.x.size()) != spec.K ||
      static_cast<int>(profile.followers.size()) != spec.n)
    throw SpecError("check_hne: profile shape mismatch");

  HneCertificate cert;

  // Leader side: per-target coefficient of x in Eq.(3) against the fixed y.
  std::vector<double> coef(spec.K, 0.0);
  double base = 0.0;
  for (int k = 0; k < spec.K; ++k) {
    double mass = 0.0;
    for (int i = 0; i < spec.n; ++i) mass += profile.followers[i].y[k];
    coef[k] = mass * (spec.leader_covered[k] - spec.leader_uncovered[k]);
    base += mass * spec.leader_resource * spec.leader_uncovered[k];
  }
  double cmax = *std::max_element(coef.begin(), coef.end());
  double cmag = 0.0;
  for (double c : coef) cmag = std::max(cmag, std::abs(c));
  const double tol = kTieRelTol * std::max(1.0, cmag);
  std::vector<char> allowed(spec.K, 0);
  for (int k = 0; k < spec.K; ++k)
    allowed[k] = (coef[k] >= cmax - tol) || (std::abs(coef[k]) <= tol) ? 1 : 0;
  bool leader_ok = true;
  for (int k = 0; k < spec.K; ++k) {
    if (profile.x.x[k] > kSupportTol && !allowed[k]) leader_ok = false;
    if (allowed[k]) cert.leader_br_targets.push_back(TargetId{k + 1});
  }
  if (!leader_ok)
    cert.violation = HneViolation{0, spec.leader_resource * cmax + base};

  bool followers_ok = true;
  cert.follower_br_sets.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const std::vector<int> br = best_response_targets(spec, profile.x, theta_observed, i);
    for (int k : br) cert.follower_br_sets[i].push_back(TargetId{k + 1});
    for (int k = 0; k < spec.K; ++k) {
      if (profile.followers[i].y[k] > kSupportTol &&
          std::find(br.begin(), br.end(), k) == br.end()) {
        followers_ok = false;
        if (!cert.violation) {
          double gbest = -std::numeric_limits<double>::infinity();
          for (int l = 0; l < spec.K; ++l)
            gbest = std::max(gbest, attack_value(spec, profile.x, theta_observed, i, l));
          cert.violation = HneViolation{i + 1, spec.follower_resources[i] * gbest};
        }
        break;
      }
    }
  }

  cert.is_hne = leader_ok && followers_ok;
  return cert;
}

bool check_ne(const SecurityGameSpec& spec, const StrategyProfile& profile,
              const std::vector<double>& theta) {
  return check_hne(spec, profile, theta).is_hne;
}

double brute_force_slack_per_step(const SecurityGameSpec& spec) {
  double dmax = 0.0;
  for (int k = 0; k < spec.K; ++k)
    dmax = std::max(dmax, std::abs(spec.leader_covered[k] - spec.leader_uncovered[k]));
  double rsum = 0.0;
  for (double r : spec.follower_resources) rsum += r;
  return 2.0 * spec.K * rsum * dmax;
}

EquilibriumResult brute_force_sse(const SecurityGameSpec& spec, const std::vector<double>& theta,
                                  double grid_step) {
  spec.validate_shapes();
  require_theta_in_domain(spec, theta);
  if (!(grid_step > 0.0)) throw SpecError("brute_force_sse: step must be positive");
  const long long N = std::llround(spec.leader_resource / grid_step);
  if (N < 1) throw SpecError("brute_force_sse: step larger than the leader resource");

  // Lattice size C(N + K - 1, K - 1); refuse hopeless budgets.
  double count = 1.0;
  for (int j = 1; j < spec.K; ++j) count *= static_cast<double>(N + j) / j;
  if (count > 4e7) throw BudgetError("brute_force_sse: lattice too large");

  const PayoffTables t = tables_at(spec, theta);
  const double step = spec.leader_resource / static_cast<double>(N);

  std::vector<double> x(spec.K, 0.0);
  std::vector<int> best_assign(spec.n, 0);
  std::vector<double> best_x;
  double best_value = -std::numeric_limits<double>::infinity();

  std::vector<double> g(spec.K);
  const auto evaluate = [&]() {
    double total = 0.0;
    std::vector<int> assign(spec.n, 0);
    for (int i = 0; i < t.n; ++i) {
      double gb = -std::numeric_limits<double>::infinity();
      double mag = 0.0;
      for (int k = 0; k < t.K; ++k) {
        g[k] = x[k] * t.fc[i][k] + (t.R_l - x[k]) * t.fu[i][k];
        gb = std::max(gb, g[k]);
        mag = std::max(mag, std::abs(g[k]));
      }
      const double tol = kTieRelTol * mag;
      int pick = -1;
      double pick_gain = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < t.K; ++k) {
        if (g[k] < gb - tol) continue;
        const double gain = x[k] * t.lc[k] + (t.R_l - x[k]) * t.lu[k];
        if (gain > pick_gain + 1e-15) {
          pick_gain = gain;
          pick = k;
        }
      }
      assign[i] = pick;
      total += t.R[i] * pick_gain;
    }
    if (total > best_value) {
      best_value = total;
      best_assign = assign;
      best_x = x;
    }
  };

  // Recursive composition of N units over K coordinates.
  const auto rec = [&](auto&& self, int k, long long remaining) -> void {
    if (k == spec.K - 1) {
      x[k] = remaining * step;
      evaluate();
      return;
    }
    for (long long j = 0; j <= remaining; ++j) {
      x[k] = j * step;
      self(self, k + 1, remaining - j);
    }
  };
  rec(rec, 0, N);

  return build_result(spec, t, theta, best_assign, best_x, best_value);
}

}  // namespace hypersg
