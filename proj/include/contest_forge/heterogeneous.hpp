#pragma once

// Equilibria of rank-order contests when quality and cost are jointly
// distributed: best responses on a finite type support, bracketing of the
// equilibrium, sub-equilibria and their output distributions, Monte Carlo
// objectives and the winner-take-all approximation experiments.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "contest_forge/contest.hpp"
#include "contest_forge/distributions.hpp"

namespace contest_forge {

/// Which support points of an EmpiricalTypes participate, aligned by index.
struct ParticipationProfile {
  std::vector<bool> mask;

  static ParticipationProfile none(std::size_t size);
  static ParticipationProfile all(std::size_t size);

  std::size_t size() const noexcept { return mask.size(); }
  std::size_t count() const noexcept;
  bool subset_of(const ParticipationProfile& other) const;
  bool operator==(const ParticipationProfile&) const = default;
};

struct EquilibriumBracket {
  ParticipationProfile lower;
  ParticipationProfile upper;
  bool converged = false;
  std::size_t iterations = 0;

  /// Profile used downstream: the upper (participation-favouring) one.
  const ParticipationProfile& selected() const noexcept { return upper; }
};

struct ObjectiveEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
};

enum class ObjectiveKind { Max, Sum, TopK };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::Max;
  std::size_t k = 1;

  static Objective max() { return {ObjectiveKind::Max, 1}; }
  static Objective sum() { return {ObjectiveKind::Sum, 0}; }
  static Objective top_k(std::size_t k) { return {ObjectiveKind::TopK, k}; }
};

using ParticipationRule = std::function<bool(double q, double c)>;

/// Mass of participating support points with strictly higher quality.
double beat_probability(const EmpiricalTypes& types, const ParticipationProfile& profile,
                        std::size_t i);

/// beat_probability for every support point in one pass.
std::vector<double> beat_probabilities(const EmpiricalTypes& types,
                                       const ParticipationProfile& profile);

double expected_payoff(const PrizeVector& contest, const EmpiricalTypes& types,
                       const ParticipationProfile& profile, std::size_t i);

/// Participate iff c_i <= c_M(beat probability); ties favour participation.
ParticipationProfile best_response(const PrizeVector& contest, const EmpiricalTypes& types,
                                   const ParticipationProfile& profile);

/// Antitone double iteration A_{k+1} = BR(B_k), B_{k+1} = BR(A_k) from
/// A_0 = none, B_0 = all.
EquilibriumBracket equilibrium(const PrizeVector& contest, const EmpiricalTypes& types);

/// Every participant has nonnegative expected payoff (within 1e-12 V).
bool is_sub_equilibrium(const PrizeVector& contest, const EmpiricalTypes& types,
                        const ParticipationProfile& profile);

/// Pr[q * participates <= x] for a single draw from the support.
double output_cdf(const EmpiricalTypes& types, const ParticipationProfile& profile, double x);

/// Whether the equilibrium output CDF lies weakly below the sub-equilibrium
/// one at 0 and every support quality. Throws ProfileNotSubEquilibrium when
/// sub_profile is not individually rational under the contest.
bool fosd_check(const PrizeVector& contest, const EmpiricalTypes& types,
                const ParticipationProfile& eq_profile,
                const ParticipationProfile& sub_profile);

ParticipationProfile profile_from_rule(const EmpiricalTypes& types,
                                       const ParticipationRule& rule);

inline constexpr std::size_t kReplicaBlock = 256;

/// Monte Carlo estimate of the objective over n i.i.d. draws from jd, with
/// participation decided by rule. Replicas run in fixed blocks whose RNG
/// streams derive from (seed, block index), so results do not depend on
/// thread count.
ObjectiveEstimate mc_objective(const JointTypeDistribution& jd, const ParticipationRule& rule,
                               std::size_t n, Objective objective, std::size_t replicas,
                               std::uint64_t seed);

/// Same, drawing from the finite support of `types` with population
/// types.n() and participation given by the profile.
ObjectiveEstimate mc_objective(const EmpiricalTypes& types, const ParticipationProfile& profile,
                               Objective objective, std::size_t replicas, std::uint64_t seed);

/// Exact expected maximum output over n draws from the support.
double exact_expected_max(const EmpiricalTypes& types, const ParticipationProfile& profile);

/// Profile [q >= mu and c <= V/2], mu the median of the best low-cost
/// quality among n-1 draws. Under winner-take-all each participant wins
/// with probability at least 1/2, which pays for any cost up to V/2.
struct MedianSubEquilibrium {
  double mu = 0.0;
  double cost_cap = 0.0;
  double win_probability_bound = 0.0;
  bool certified = false;

  bool accepts(double q, double c) const { return q >= mu && c <= cost_cap; }
  ParticipationRule rule() const;
};

MedianSubEquilibrium median_subequilibrium(const JointTypeDistribution& jd, double budget,
                                           std::size_t n);

/// Equilibrium participants of `contest` with cost above V/2, certified as a
/// winner-take-all sub-equilibrium. Throws NotSubEquilibrium if the check fails.
ParticipationProfile highcost_subequilibrium(const PrizeVector& contest,
                                             const EmpiricalTypes& types, double budget);

/// Upper quantile of the standard normal used for one-sided 99% margins.
double one_sided_z99();

struct ContestEstimate {
  std::size_t j = 0;
  ObjectiveEstimate estimate;
  bool converged = true;
  std::size_t participants = 0;
};

struct ApproxReport {
  ContestEstimate wta;
  std::vector<ContestEstimate> contests;
  std::size_t best_j = 1;
  double best = 0.0;     ///< B: best simple-contest estimate, a lower bound on OPT
  double ratio = 1.0;    ///< B / W
  double margin = 0.0;   ///< 3W - B + z * sqrt(9 se_W^2 + se_B^2)
  bool three_approx = true;
};

ApproxReport wta_approx_experiment(const EmpiricalTypes& types, double budget,
                                   std::size_t replicas, std::uint64_t seed);

ApproxReport wta_approx_experiment(const JointTypeDistribution& jd, std::size_t n,
                                   double budget, std::size_t discretization,
                                   std::size_t replicas, std::uint64_t seed);

struct ObjContestCheck {
  std::vector<double> values;
  ObjectiveEstimate sum;
  bool below_quarter = false;  ///< mean + z se < V/4
};

struct ExampleObjReport {
  double budget = 0.0;
  std::size_t n = 0;
  double eps = 0.0;
  ObjectiveEstimate wta_max;
  bool wta_max_above_two = false;
  std::size_t split_prizes = 0;  ///< floor(V/2)
  ObjectiveEstimate split_sum;
  bool split_sum_at_least_quarter = false;
  std::size_t split_high_participants = 0;
  std::vector<ObjContestCheck> top_heavy;
  bool top_heavy_all_below = false;
  bool all_passed() const;
};

inline constexpr double kExampleObjMinBudget = 160.0;

JointTypeDistribution example_obj_distribution(double budget, double eps);

ExampleObjReport example_obj(double budget, std::size_t n, double eps, std::uint64_t seed,
                             std::size_t replicas = 200, std::size_t discretization = 0);

}  // namespace contest_forge
