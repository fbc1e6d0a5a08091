#include "contest_forge/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "contest_forge/error.hpp"
#include "contest_forge/numerics.hpp"

namespace contest_forge {
namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kTieTol = 1e-12;

void require_positive_cost(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ContestError(ErrorCode::InvalidCost, "participation cost must be positive");
  }
}

void require_interior(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ContestError(ErrorCode::InvalidArgument, "participation rate must lie in (0, 1)");
  }
}

// Solves curve(p) = c for a weakly decreasing prize curve running from
// first (p = 0) to last (p = 1).
ParticipationRate solve_rate(const std::function<double(double)>& curve, double first,
                             double last, double c, double scale) {
  if (c <= last) return {1.0, Saturation::FullParticipation};
  if (c > first) return {0.0, Saturation::ZeroParticipation};
  if (c == first) return {0.0, Saturation::None};
  const auto root =
      numerics::bisect_decreasing(curve, c, 0.0, 1.0, kResidualTol * std::max(scale, c));
  if (root.saturated_low) return {0.0, Saturation::ZeroParticipation};
  if (root.saturated_high) return {1.0, Saturation::FullParticipation};
  return {root.root, Saturation::None};
}

struct AverageArgmax {
  std::size_t j = 1;
  double y = 0.0;
};

AverageArgmax running_average_argmax(std::size_t n, double p) {
  require_interior(p);
  if (n < 1) throw ContestError(ErrorCode::InvalidArgument, "population must be positive");
  const auto opponents = static_cast<std::int64_t>(n) - 1;
  double y = numerics::binom_pmf(opponents, 0, p);
  for (std::size_t j = 1; j < n; ++j) {
    const double x_next = numerics::binom_pmf(opponents, static_cast<std::int64_t>(j), p);
    const double step = (x_next - y) / static_cast<double>(j + 1);
    // Leading terms can underflow to zero; keep averaging until y is positive.
    if (y > 0.0 && step <= kTieTol * y) return {j, y};
    y += step;
  }
  return {n, y};
}

ThresholdEquilibrium threshold_from_rate(const ParticipationRate& rate, std::size_t n,
                                         const QualityDistribution& qd) {
  ThresholdEquilibrium eq;
  eq.p = rate.p;
  eq.saturation = rate.saturation;
  eq.lambda = static_cast<double>(n) * rate.p;
  eq.theta = quantile(qd, 1.0 - rate.p);
  return eq;
}

}  // namespace

ParticipationRate participation_rate(const PrizeVector& contest, double c) {
  require_positive_cost(c);
  const auto& v = contest.values();
  return solve_rate([&contest](double p) { return expected_prize(contest, p); }, v.front(),
                    v.back(), c, contest.budget());
}

ThresholdEquilibrium equilibrium_threshold(const PrizeVector& contest,
                                           const QualityDistribution& qd, double c) {
  return threshold_from_rate(participation_rate(contest, c), contest.n(), qd);
}

double threshold_deviation_gain(const PrizeVector& contest, const QualityDistribution& qd,
                                double c, const ThresholdEquilibrium& eq, double q) {
  if (q < eq.theta) return expected_prize(contest, eq.p) - c;
  return c - expected_prize(contest, 1.0 - cdf(qd, q));
}

std::size_t optimal_prize_count(std::size_t n, double p) {
  return running_average_argmax(n, p).j;
}

std::size_t optimal_prize_count_full_scan(std::size_t n, double p) {
  require_interior(p);
  const auto opponents = static_cast<std::int64_t>(n) - 1;
  std::vector<double> y(n);
  double partial = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    partial += numerics::binom_pmf(opponents, static_cast<std::int64_t>(j) - 1, p);
    y[j - 1] = partial / static_cast<double>(j);
  }
  const double best = *std::max_element(y.begin(), y.end());
  for (std::size_t j = 1; j <= n; ++j) {
    if (y[j - 1] >= best * (1.0 - kTieTol)) return j;
  }
  return n;
}

double c_star(std::size_t n, double budget, double p) {
  return budget * running_average_argmax(n, p).y;
}

bool feasible(std::size_t n, double budget, double c, double p) {
  return c <= c_star(n, budget, p);
}

std::vector<ParticipationRate> simple_contest_rates(std::size_t n, double budget, double c) {
  require_positive_cost(c);
  const auto j_max =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::floor(budget / c)));
  std::vector<ParticipationRate> rates;
  rates.reserve(j_max);
  for (std::size_t j = 1; j <= j_max; ++j) {
    const double share = budget / static_cast<double>(j);
    const double last = j == n ? share : 0.0;
    rates.push_back(solve_rate(
        [=](double p) { return simple_contest_prize(j, budget, n, p); }, share, last, c,
        budget));
  }
  return rates;
}

DesignResult optimal_contest(std::size_t n, double budget, double c,
                             const std::optional<QualityDistribution>& qd_opt) {
  require_positive_cost(c);
  if (n < 1) throw ContestError(ErrorCode::InvalidArgument, "population must be positive");
  if (!(budget > 0.0)) throw ContestError(ErrorCode::InvalidArgument, "budget must be positive");
  const QualityDistribution qd = qd_opt.value_or(QualityDistribution::uniform(0.0, 1.0));

  if (c <= budget / static_cast<double>(n)) {
    const ParticipationRate full{1.0, Saturation::FullParticipation};
    return {n, make_simple_contest(n, budget, n), threshold_from_rate(full, n, qd),
            budget / static_cast<double>(n)};
  }
  if (c >= budget) {
    const ParticipationRate none{0.0, Saturation::ZeroParticipation};
    return {1, winner_take_all(budget, n), threshold_from_rate(none, n, qd), budget};
  }

  const auto rates = simple_contest_rates(n, budget, c);
  std::size_t best = 0;
  for (std::size_t k = 1; k < rates.size(); ++k) {
    if (rates[k].p > rates[best].p + kTieTol) best = k;
  }
  const std::size_t j_star = best + 1;
  const auto& rate = rates[best];
  const double cs = rate.p > 0.0 && rate.p < 1.0 ? c_star(n, budget, rate.p)
                    : rate.p <= 0.0             ? budget
                                                : budget / static_cast<double>(n);
  return {j_star, make_simple_contest(j_star, budget, n), threshold_from_rate(rate, n, qd), cs};
}

BruteForceReport brute_force_design_check(std::size_t n, double budget, double c,
                                          double grid_step) {
  if (n > kBruteForceMaxPopulation) {
    throw ContestError(ErrorCode::PopulationTooLarge,
                       "exhaustive design check is limited to n <= 6");
  }
  if (n < 1) throw ContestError(ErrorCode::InvalidArgument, "population must be positive");
  require_positive_cost(c);
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw ContestError(ErrorCode::InvalidArgument, "grid step must lie in (0, 1]");
  }
  const auto units = static_cast<int>(std::lround(1.0 / grid_step));
  if (std::fabs(units * grid_step - 1.0) > 1e-9) {
    throw ContestError(ErrorCode::InvalidArgument, "grid step must divide the budget evenly");
  }

  BruteForceReport report;
  report.best_grid_p = -1.0;
  std::vector<int> parts(n, 0);
  // Nonincreasing compositions of `units` into n parts.
  std::function<void(std::size_t, int, int)> visit = [&](std::size_t pos, int remaining,
                                                         int cap) {
    if (pos + 1 == n) {
      if (remaining > cap) return;
      parts[pos] = remaining;
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = parts[i] * budget / units;
      const auto contest = validate_contest(values, budget);
      const double p = participation_rate(contest, c).p;
      ++report.contests_checked;
      if (p > report.best_grid_p) {
        report.best_grid_p = p;
        report.best_grid_values = values;
      }
      return;
    }
    const int slots = static_cast<int>(n - pos);
    for (int k = std::min(cap, remaining); k >= 0; --k) {
      if (k * slots < remaining) break;
      parts[pos] = k;
      visit(pos + 1, remaining - k, k);
    }
  };
  visit(0, units, units);

  report.best_simple_p = -1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double p = participation_rate(make_simple_contest(j, budget, n), c).p;
    if (p > report.best_simple_p + kTieTol) {
      report.best_simple_p = p;
      report.best_simple_j = j;
    }
  }
  report.gap = report.best_grid_p - report.best_simple_p;
  return report;
}

}  // namespace contest_forge
