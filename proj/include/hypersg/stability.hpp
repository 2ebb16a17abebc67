#pragma once

#include <optional>
#include <vector>

#include "hypersg/equilibrium.hpp"
#include "hypersg/model.hpp"

namespace hypersg {

/// The linear system behind SOL(y, theta'):
///   A1(theta') y' = lambda B y,  A2 y' = 0,  y' on the follower simplices.
/// A1 stacks per-follower diagonal blocks of the ratios
/// (U_i^u - U_i^c) / (U_l^c - U_l^u); A2 selects the coordinates where the
/// reference profile puts no mass; B sums followers per target.
struct SolSystem {
  int n = 0;
  int K = 0;
  std::vector<std::vector<double>> ratios;  // [i][k]
  std::vector<std::vector<char>> forced_zero;  // A2 mask: y_i^k == 0
  std::vector<double> target_mass;             // (B y)_k
  std::vector<double> resources;
};

/// Builds the system; requires Assumption A3 strictly on every target
/// (otherwise the ratio denominators vanish) -> AssumptionError.
SolSystem build_sol_system(const SecurityGameSpec& spec,
                           const std::vector<FollowerStrategy>& y,
                           const std::vector<double>& theta_observed);

struct SolCertificate {
  std::vector<std::vector<double>> y_prime;  // [i][k], zeros off support
  double lambda = 0.0;
};

/// Max residual of A1 y' = lambda B y at the certificate (A2 holds
/// structurally by construction).
double sol_residual(const SolSystem& system, const SolCertificate& cert);

constexpr double kSolLambdaMin = 1e-8;
constexpr double kSolLambdaCap = 1e6;

/// Nonemptiness check for SOL(y, theta'): maximizes lambda over the system
/// and returns a certificate iff lambda* >= 1e-8.
std::optional<SolCertificate> sol_feasibility(const SecurityGameSpec& spec,
                                              const std::vector<FollowerStrategy>& y,
                                              const std::vector<double>& theta_observed);

struct TrickWitness {
  std::vector<double> theta;
  TargetId target;
};

/// First grid observation under which every follower's equilibrium attack
/// lands on the leader's best-covered target t_Kmax; nullopt when none does.
std::optional<TrickWitness> trick_condition(const SecurityGameSpec& spec);

struct StabilityReport {
  EquilibriumResult equilibrium;
  bool condition_holds = false;
  std::optional<SolCertificate> sol_certificate;  // misperception path
  std::optional<TrickWitness> trick;              // deception path
  HneCertificate hne;
  bool theorem_respected = false;  // condition_holds implies hne
  /// Deception path only: equilibrium value matches R_l U_l^c(t_Kmax) sum R_i.
  std::optional<bool> value_matches_bound;
};

/// Solves the MSSE at theta', tests SOL nonemptiness on its follower profile,
/// and checks the hyper-equilibrium certificate. Requires A3 and A4 (at
/// theta'); assumption failures raise AssumptionError.
StabilityReport certify_msse_stability(const SecurityGameSpec& spec,
                                       const std::vector<double>& theta_observed);

/// Deception-side certification: when the trick condition holds the induced
/// optimum is checked as a hyper-equilibrium and against the closed-form
/// value; otherwise the grid DSSE is certified directly. Requires A1-A4.
StabilityReport certify_dsse_stability(const SecurityGameSpec& spec);

}  // namespace hypersg
