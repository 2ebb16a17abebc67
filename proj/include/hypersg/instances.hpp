#pragma once

#include <cstdint>
#include <string>

#include "hypersg/model.hpp"

namespace hypersg {

enum class GenMode { Misperception, Deception };

/// Seeded random-instance protocol. Misperception mode draws the follower
/// tables directly at the (unmodeled) observed value; deception mode adds an
/// independent additive shift theta'_{i,k} in [0,5] to both follower entries
/// of every (i,k) cell, so the observation space is [0,5]^{nK}.
struct InstanceGenConfig {
  int n = 1;
  int K = 2;
  GenMode mode = GenMode::Misperception;
  std::uint64_t seed = 0;
  double leader_covered_lo = 5.0, leader_covered_hi = 10.0;
  double leader_uncovered_lo = 0.0, leader_uncovered_hi = 5.0;
  double follower_covered_lo = 0.0, follower_covered_hi = 5.0;
  double follower_uncovered_lo = 5.0, follower_uncovered_hi = 10.0;
  double resource_lo = 1.0, resource_hi = 5.0;
  double shift_hi = 5.0;  // deception-mode shift range [0, shift_hi]
};

SecurityGameSpec generate_random(const InstanceGenConfig& config);

/// Named game setups used across the experiments:
///   example1                    2-target single-follower deception toy
///   example2                    2x2 game with a two-point deceptive set
///   mtd:<a>                     moving-target-defense quartics, migration cost a
///   counterterrorism:<seed>     6 attack forms x 5 cities, scaled success rate
///   cps:<seed>:<dlo>:<dhi>      administrator vs hacker over 9 attack surfaces
SecurityGameSpec fixture_example1();
SecurityGameSpec fixture_example2();
SecurityGameSpec fixture_mtd(double a);
SecurityGameSpec fixture_counterterrorism(std::uint64_t seed);
SecurityGameSpec fixture_cps(std::uint64_t seed, double d_lo, double d_hi);

/// Parses the "name[:arg[:arg...]]" fixture syntax above.
SecurityGameSpec fixture(const std::string& name);

}  // namespace hypersg
