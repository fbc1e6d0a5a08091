#pragma once

// Threshold equilibria and exact optimal design when every agent pays the
// same participation cost.

#include <cstddef>
#include <optional>
#include <vector>

#include "contest_forge/contest.hpp"
#include "contest_forge/distributions.hpp"

namespace contest_forge {

enum class Saturation { None, FullParticipation, ZeroParticipation };

struct ParticipationRate {
  double p = 0.0;
  Saturation saturation = Saturation::None;
};

/// Symmetric threshold equilibrium: types with q >= theta participate.
struct ThresholdEquilibrium {
  double theta = 0.0;
  double p = 0.0;       ///< ex-ante participation probability, 1 - F(theta)
  double lambda = 0.0;  ///< expected participants, n p
  Saturation saturation = Saturation::None;
};

struct DesignResult {
  std::size_t j_star = 1;
  PrizeVector contest;
  ThresholdEquilibrium equilibrium;
  double c_star_at_p = 0.0;
};

/// Unique p with c_M(p) = c; saturates to 0 when c > v_1 and to 1 when
/// c <= v_n. Throws InvalidCost for c <= 0.
ParticipationRate participation_rate(const PrizeVector& contest, double c);

ThresholdEquilibrium equilibrium_threshold(const PrizeVector& contest,
                                           const QualityDistribution& qd, double c);

/// Gain from entering (positive) or from staying out (negative) for a type
/// of quality q when everyone else plays the threshold equilibrium.
double threshold_deviation_gain(const PrizeVector& contest, const QualityDistribution& qd,
                                double c, const ThresholdEquilibrium& eq, double q);

/// argmax_j y_j with y_j = (1/j) sum_{k<=j} C(n-1,k-1) p^(k-1) (1-p)^(n-k),
/// via the running-average recurrence; ties go to the smallest j.
std::size_t optimal_prize_count(std::size_t n, double p);

/// Same argmax by evaluating every y_j; used to cross-check the recurrence.
std::size_t optimal_prize_count_full_scan(std::size_t n, double p);

/// Largest cost at which participation rate p can be sustained with budget V.
double c_star(std::size_t n, double budget, double p);

bool feasible(std::size_t n, double budget, double c, double p);

/// Best simple contest M^j for cost c. The quality distribution only places
/// the threshold; it defaults to Uniform(0, 1).
DesignResult optimal_contest(std::size_t n, double budget, double c,
                             const std::optional<QualityDistribution>& qd = std::nullopt);

/// Participation p^j of every M^j, j = 1..min(n, floor(V/c)).
std::vector<ParticipationRate> simple_contest_rates(std::size_t n, double budget, double c);

struct BruteForceReport {
  double best_grid_p = 0.0;
  std::vector<double> best_grid_values;
  double best_simple_p = 0.0;
  std::size_t best_simple_j = 1;
  double gap = 0.0;  ///< best_grid_p - best_simple_p
  std::size_t contests_checked = 0;
};

inline constexpr std::size_t kBruteForceMaxPopulation = 6;

/// Enumerates every monotone schedule on the simplex grid of resolution
/// grid_step (as a fraction of V) that spends the full budget.
BruteForceReport brute_force_design_check(std::size_t n, double budget, double c,
                                          double grid_step);

}  // namespace contest_forge
