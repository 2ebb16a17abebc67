#include "hypersg/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

#include "hypersg/errors.hpp"

namespace hypersg {

namespace {

void require_object_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
  if (!j.is_object()) throw SpecError(std::string(where) + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw SpecError(std::string(where) + ": unknown key '" + key + "'");
  }
}

const Json& require_key(const Json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw SpecError(std::string(where) + ": missing key '" + key + "'");
  return j.at(key);
}

double as_number(const Json& j, const char* where) {
  if (!j.is_number()) throw SpecError(std::string(where) + ": expected a number");
  return j.get<double>();
}

int as_int(const Json& j, const char* where) {
  if (!j.is_number_integer()) throw SpecError(std::string(where) + ": expected an integer");
  return j.get<int>();
}

std::vector<double> as_vector(const Json& j, const char* where) {
  if (!j.is_array()) throw SpecError(std::string(where) + ": expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(as_number(e, where));
  return v;
}

std::vector<int> as_int_vector(const Json& j, const char* where) {
  if (!j.is_array()) throw SpecError(std::string(where) + ": expected an array");
  std::vector<int> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(as_int(e, where));
  return v;
}

Json payoff_to_json(const ParametricPayoff& p) {
  Json j;
  switch (p.family) {
    case PayoffFamily::Constant:
      j["family"] = "constant";
      j["value"] = p.constant;
      break;
    case PayoffFamily::Affine:
      j["family"] = "affine";
      j["constant"] = p.constant;
      j["slope"] = p.slope;
      break;
    case PayoffFamily::Polynomial:
      j["family"] = "polynomial";
      j["coefficients"] = p.poly;
      break;
    case PayoffFamily::ScaledAffine:
      j["family"] = "scaled_affine";
      j["base"] = p.base;
      j["constant"] = p.constant;
      j["slope"] = p.slope;
      break;
  }
  return j;
}

ParametricPayoff payoff_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("payoff: expected an object");
  const std::string family = require_key(j, "family", "payoff").get<std::string>();
  if (family == "constant") {
    require_object_keys(j, {"family", "value"}, "constant payoff");
    return ParametricPayoff::make_constant(as_number(require_key(j, "value", "payoff"), "value"));
  }
  if (family == "affine") {
    require_object_keys(j, {"family", "constant", "slope"}, "affine payoff");
    return ParametricPayoff::make_affine(
        as_number(require_key(j, "constant", "payoff"), "constant"),
        as_vector(require_key(j, "slope", "payoff"), "slope"));
  }
  if (family == "polynomial") {
    require_object_keys(j, {"family", "coefficients"}, "polynomial payoff");
    return ParametricPayoff::make_polynomial(
        as_vector(require_key(j, "coefficients", "payoff"), "coefficients"));
  }
  if (family == "scaled_affine") {
    require_object_keys(j, {"family", "base", "constant", "slope"}, "scaled-affine payoff");
    return ParametricPayoff::make_scaled_affine(
        as_number(require_key(j, "base", "payoff"), "base"),
        as_number(require_key(j, "constant", "payoff"), "constant"),
        as_vector(require_key(j, "slope", "payoff"), "slope"));
  }
  throw SpecError("payoff: unknown family '" + family + "'");
}

}  // namespace

Json game_to_json(const SecurityGameSpec& spec) {
  spec.validate_shapes();
  Json j;
  j["K"] = spec.K;
  j["leader"] = {
      {"R", spec.leader_resource},
      {"covered", spec.leader_covered},
      {"uncovered", spec.leader_uncovered},
  };
  Json followers = Json::array();
  for (int i = 0; i < spec.n; ++i) {
    Json payoffs = Json::array();
    for (int k = 0; k < spec.K; ++k) {
      payoffs.push_back({{"covered", payoff_to_json(spec.covered(i, k))},
                         {"uncovered", payoff_to_json(spec.uncovered(i, k))}});
    }
    followers.push_back({{"R", spec.follower_resources[i]}, {"payoffs", std::move(payoffs)}});
  }
  j["followers"] = std::move(followers);
  Json theta;
  theta["dim"] = spec.theta.dim;
  theta["true"] = spec.theta.true_value;
  if (spec.theta.is_box) {
    theta["box"] = {
        {"lo", spec.theta.lo}, {"hi", spec.theta.hi}, {"grid", spec.theta.grid_counts}};
  } else {
    theta["set"] = spec.theta.points;
  }
  j["theta"] = std::move(theta);
  return j;
}

SecurityGameSpec game_from_json(const Json& j) {
  require_object_keys(j, {"K", "leader", "followers", "theta"}, "game");
  SecurityGameSpec spec;
  spec.K = as_int(require_key(j, "K", "game"), "K");

  const Json& leader = require_key(j, "leader", "game");
  require_object_keys(leader, {"R", "covered", "uncovered"}, "leader");
  spec.leader_resource = as_number(require_key(leader, "R", "leader"), "leader.R");
  spec.leader_covered = as_vector(require_key(leader, "covered", "leader"), "leader.covered");
  spec.leader_uncovered =
      as_vector(require_key(leader, "uncovered", "leader"), "leader.uncovered");

  const Json& followers = require_key(j, "followers", "game");
  if (!followers.is_array() || followers.empty())
    throw SpecError("game: 'followers' must be a nonempty array");
  spec.n = static_cast<int>(followers.size());
  for (const Json& f : followers) {
    require_object_keys(f, {"R", "payoffs"}, "follower");
    spec.follower_resources.push_back(as_number(require_key(f, "R", "follower"), "follower.R"));
    const Json& payoffs = require_key(f, "payoffs", "follower");
    if (!payoffs.is_array() || static_cast<int>(payoffs.size()) != spec.K)
      throw SpecError("game: follower payoffs must list exactly K cells");
    std::vector<std::pair<ParametricPayoff, ParametricPayoff>> row;
    for (const Json& cell : payoffs) {
      require_object_keys(cell, {"covered", "uncovered"}, "payoff cell");
      row.emplace_back(payoff_from_json(require_key(cell, "covered", "cell")),
                       payoff_from_json(require_key(cell, "uncovered", "cell")));
    }
    spec.follower_payoffs.push_back(std::move(row));
  }

  const Json& theta = require_key(j, "theta", "game");
  require_object_keys(theta, {"dim", "true", "box", "set"}, "theta");
  const int dim = as_int(require_key(theta, "dim", "theta"), "theta.dim");
  std::vector<double> true_value = as_vector(require_key(theta, "true", "theta"), "theta.true");
  if (static_cast<int>(true_value.size()) != dim)
    throw SpecError("theta: 'true' must have 'dim' entries");
  const bool has_box = theta.contains("box");
  const bool has_set = theta.contains("set");
  if (has_box == has_set) throw SpecError("theta: provide exactly one of 'box' or 'set'");
  if (has_box) {
    const Json& box = theta.at("box");
    require_object_keys(box, {"lo", "hi", "grid"}, "theta.box");
    spec.theta = ThetaSpace::box(std::move(true_value),
                                 as_vector(require_key(box, "lo", "box"), "box.lo"),
                                 as_vector(require_key(box, "hi", "box"), "box.hi"),
                                 as_int_vector(require_key(box, "grid", "box"), "box.grid"));
  } else {
    const Json& set = theta.at("set");
    if (!set.is_array()) throw SpecError("theta.set: expected an array of points");
    std::vector<std::vector<double>> points;
    for (const Json& p : set) points.push_back(as_vector(p, "theta.set point"));
    spec.theta = ThetaSpace::finite_set(std::move(true_value), std::move(points));
  }

  spec.validate_shapes();
  return spec;
}

SecurityGameSpec load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open game file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("game file parse error: " + std::string(e.what()));
  }
  return game_from_json(j);
}

void save_game_file(const SecurityGameSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write game file: " + path);
  out << game_to_json(spec).dump(2) << "\n";
}

Json equilibrium_to_json(const EquilibriumResult& res, const std::string& mode) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "equilibrium";
  j["mode"] = mode;
  j["theta_used"] = res.theta_used;
  j["leader_value"] = res.leader_value;
  j["x"] = res.profile.x.x;
  Json fs = Json::array();
  for (std::size_t i = 0; i < res.profile.followers.size(); ++i) {
    fs.push_back({{"y", res.profile.followers[i].y},
                  {"target", res.chosen_targets[i].index},
                  {"perceived_value", res.follower_perceived[i]},
                  {"actual_value", res.follower_actual[i]}});
  }
  j["followers"] = std::move(fs);
  Json trace = Json::array();
  for (const StrategyProfile& p : res.tiebreak_trace) {
    Json ys = Json::array();
    for (const FollowerStrategy& y : p.followers) ys.push_back(y.y);
    trace.push_back({{"x", p.x.x}, {"followers", std::move(ys)}});
  }
  j["tiebreak_trace"] = std::move(trace);
  return j;
}

EquilibriumResult equilibrium_from_json(const SecurityGameSpec& spec, const Json& j) {
  require_object_keys(j,
                      {"schema_version", "kind", "mode", "theta_used", "theta_star",
                       "leader_value", "x", "followers", "tiebreak_trace", "milp"},
                      "result");
  if (as_int(require_key(j, "schema_version", "result"), "schema_version") != 1)
    throw SpecError("result: unsupported schema version");
  EquilibriumResult res;
  res.theta_used = as_vector(require_key(j, "theta_used", "result"), "theta_used");
  res.leader_value = as_number(require_key(j, "leader_value", "result"), "leader_value");
  std::vector<double> x = as_vector(require_key(j, "x", "result"), "x");
  const Json& fs = require_key(j, "followers", "result");
  std::vector<std::vector<double>> ys;
  for (const Json& f : fs) {
    require_object_keys(f, {"y", "target", "perceived_value", "actual_value"},
                        "result follower");
    ys.push_back(as_vector(require_key(f, "y", "result"), "follower.y"));
    res.chosen_targets.push_back(TargetId{as_int(require_key(f, "target", "result"), "target")});
    res.follower_perceived.push_back(
        as_number(require_key(f, "perceived_value", "result"), "perceived_value"));
    res.follower_actual.push_back(
        as_number(require_key(f, "actual_value", "result"), "actual_value"));
  }
  res.profile = make_profile(spec, std::move(x), std::move(ys));
  return res;
}

Json hne_to_json(const HneCertificate& cert) {
  Json j;
  j["is_hne"] = cert.is_hne;
  Json lead = Json::array();
  for (const TargetId& t : cert.leader_br_targets) lead.push_back(t.index);
  j["leader_br_targets"] = std::move(lead);
  Json sets = Json::array();
  for (const auto& s : cert.follower_br_sets) {
    Json one = Json::array();
    for (const TargetId& t : s) one.push_back(t.index);
    sets.push_back(std::move(one));
  }
  j["follower_br_sets"] = std::move(sets);
  if (cert.violation) {
    j["violation"] = {{"player", cert.violation->player == 0
                                     ? Json("leader")
                                     : Json("follower_" + std::to_string(cert.violation->player))},
                      {"improving_value", cert.violation->improving_value}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

Json stability_to_json(const StabilityReport& rep) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "stability";
  j["condition_holds"] = rep.condition_holds;
  j["theorem_respected"] = rep.theorem_respected;
  j["hne"] = hne_to_json(rep.hne);
  j["equilibrium"] = equilibrium_to_json(rep.equilibrium, "msse");
  if (rep.sol_certificate) {
    j["sol_certificate"] = {{"lambda", rep.sol_certificate->lambda},
                            {"y_prime", rep.sol_certificate->y_prime}};
  }
  if (rep.trick) {
    j["trick"] = {{"theta", rep.trick->theta}, {"target", rep.trick->target.index}};
  }
  if (rep.value_matches_bound) j["value_matches_bound"] = *rep.value_matches_bound;
  return j;
}

Json robustness_to_json(const RobustnessReport& rep) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "robustness";
  Json per = Json::array();
  for (const FollowerIngredients& f : rep.ingredients.per_follower) {
    Json g1 = Json::array(), g2 = Json::array();
    for (const TargetId& t : f.gamma1) g1.push_back(t.index);
    for (const TargetId& t : f.gamma2) g2.push_back(t.index);
    per.push_back({{"gamma1", std::move(g1)},
                   {"gamma2", std::move(g2)},
                   {"g1", f.g1},
                   {"g2", f.g2},
                   {"grad_star", f.grad_star},
                   {"degenerate", f.degenerate}});
  }
  j["ingredients"] = {{"per_follower", std::move(per)},
                      {"sigma", rep.ingredients.sigma},
                      {"sigma_provenance", rep.ingredients.sigma_provenance},
                      {"theta_radius_cap", rep.ingredients.theta_radius_cap},
                      {"premise_convex", rep.ingredients.premise_convex}};
  j["delta_theta_msse"] = rep.delta_msse;
  j["delta_theta_dsse"] = rep.delta_dsse;
  j["degenerate"] = rep.degenerate;
  if (rep.empirical) {
    j["empirical"] = {{"radius", rep.empirical->radius},
                      {"span", rep.empirical->span},
                      {"shell_width", rep.empirical->shell_width}};
  }
  j["bound_respected"] = rep.bound_respected;
  return j;
}

std::string json_to_string(const Json& j) { return j.dump(2); }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("JSON parse error: " + std::string(e.what()));
  }
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace hypersg
