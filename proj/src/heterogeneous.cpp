#include "contest_forge/heterogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "contest_forge/error.hpp"
#include "contest_forge/parallel.hpp"

namespace contest_forge {

namespace {

void check_profile(const EmpiricalTypes& types, const ParticipationProfile& profile) {
  if (profile.size() != types.size()) {
    throw ContestError(ErrorCode::InvalidArgument,
                       "profile length " + std::to_string(profile.size()) +
                           " does not match support size " + std::to_string(types.size()));
  }
}

void check_index(const EmpiricalTypes& types, std::size_t i) {
  if (i >= types.size()) {
    throw ContestError(ErrorCode::IndexOutOfRange,
                       "support index " + std::to_string(i) + " out of range", i + 1);
  }
}

// Best responses along one chain of the double iteration. A point's response
// only changes when its beat probability does, so the last answer is kept.
class Responder {
 public:
  Responder(const PrizeVector& contest, const EmpiricalTypes& types)
      : contest_(contest), types_(types), beta_(types.size(), -1.0),
        answer_(types.size(), false) {}

  ParticipationProfile operator()(const ParticipationProfile& profile) {
    ParticipationProfile out = ParticipationProfile::none(types_.size());
    double above = 0.0;
    for (std::size_t i : types_.by_quality_desc()) {
      const double beta = std::min(above, 1.0);
      if (beta != beta_[i]) {
        beta_[i] = beta;
        answer_[i] = types_[i].c <= expected_prize(contest_, beta);
      }
      out.mask[i] = answer_[i];
      if (profile.mask[i]) above += types_[i].w;
    }
    return out;
  }

 private:
  const PrizeVector& contest_;
  const EmpiricalTypes& types_;
  std::vector<double> beta_;
  std::vector<bool> answer_;
};

double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Rng block_rng(std::uint64_t seed, std::size_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(block) >> 32)};
  return Rng(seq);
}

double evaluate(Objective objective, std::vector<double>& outputs) {
  switch (objective.kind) {
    case ObjectiveKind::Max: {
      double best = 0.0;
      for (double x : outputs) best = std::max(best, x);
      return best;
    }
    case ObjectiveKind::Sum: {
      double total = 0.0;
      for (double x : outputs) total += x;
      return total;
    }
    case ObjectiveKind::TopK: {
      const std::size_t k = std::min(objective.k, outputs.size());
      std::partial_sort(outputs.begin(), outputs.begin() + static_cast<std::ptrdiff_t>(k),
                        outputs.end(), std::greater<>());
      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) total += outputs[t];
      return total;
    }
  }
  return 0.0;
}

// Runs replicas in fixed blocks; draw(rng, outputs) fills one replica's
// participant outputs.
template <class Draw>
ObjectiveEstimate run_replicas(Objective objective, std::size_t replicas, std::uint64_t seed,
                               const Draw& draw) {
  if (replicas < 2) throw ContestError(ErrorCode::InvalidArgument, "need at least 2 replicas");
  if (objective.kind == ObjectiveKind::TopK && objective.k == 0) {
    throw ContestError(ErrorCode::InvalidArgument, "top_k needs k >= 1");
  }
  std::vector<double> values(replicas);
  const std::size_t blocks = (replicas + kReplicaBlock - 1) / kReplicaBlock;
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = block_rng(seed, b);
    std::vector<double> outputs;
    const std::size_t end = std::min(replicas, (b + 1) * kReplicaBlock);
    for (std::size_t r = b * kReplicaBlock; r < end; ++r) {
      outputs.clear();
      draw(rng, outputs);
      values[r] = evaluate(objective, outputs);
    }
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(replicas);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(replicas - 1);
  return {mean, std::sqrt(var / static_cast<double>(replicas)), replicas, seed};
}

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

ParticipationProfile ParticipationProfile::none(std::size_t size) {
  return {std::vector<bool>(size, false)};
}

ParticipationProfile ParticipationProfile::all(std::size_t size) {
  return {std::vector<bool>(size, true)};
}

std::size_t ParticipationProfile::count() const noexcept {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

bool ParticipationProfile::subset_of(const ParticipationProfile& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (mask[i] && !other.mask[i]) return false;
  }
  return true;
}

double beat_probability(const EmpiricalTypes& types, const ParticipationProfile& profile,
                        std::size_t i) {
  check_profile(types, profile);
  check_index(types, i);
  double total = 0.0;
  for (std::size_t k : types.by_quality_desc()) {
    if (types[k].q <= types[i].q) break;
    if (profile.mask[k]) total += types[k].w;
  }
  return std::min(total, 1.0);
}

std::vector<double> beat_probabilities(const EmpiricalTypes& types,
                                       const ParticipationProfile& profile) {
  check_profile(types, profile);
  std::vector<double> beta(types.size());
  double above = 0.0;
  for (std::size_t i : types.by_quality_desc()) {
    beta[i] = std::min(above, 1.0);
    if (profile.mask[i]) above += types[i].w;
  }
  return beta;
}

double expected_payoff(const PrizeVector& contest, const EmpiricalTypes& types,
                       const ParticipationProfile& profile, std::size_t i) {
  return expected_prize(contest, beat_probability(types, profile, i)) - types[i].c;
}

ParticipationProfile best_response(const PrizeVector& contest, const EmpiricalTypes& types,
                                   const ParticipationProfile& profile) {
  check_profile(types, profile);
  return Responder(contest, types)(profile);
}

EquilibriumBracket equilibrium(const PrizeVector& contest, const EmpiricalTypes& types) {
  const std::size_t m = types.size();
  Responder lower_chain(contest, types);
  Responder upper_chain(contest, types);
  EquilibriumBracket out;
  out.lower = ParticipationProfile::none(m);
  out.upper = ParticipationProfile::all(m);
  const std::size_t limit = 10 * std::max<std::size_t>(m, 1);
  while (true) {
    if (out.iterations >= limit) {
      throw ContestError(ErrorCode::IterationLimit,
                         "equilibrium bracket did not stabilise in " + std::to_string(limit) +
                             " rounds");
    }
    ParticipationProfile next_lower = lower_chain(out.upper);
    ParticipationProfile next_upper = upper_chain(out.lower);
    ++out.iterations;
    const bool stable = next_lower == out.lower && next_upper == out.upper;
    out.lower = std::move(next_lower);
    out.upper = std::move(next_upper);
    if (stable) break;
  }
  if (!out.lower.subset_of(out.upper)) {
    throw ContestError(ErrorCode::OrderingViolation, "equilibrium bracket is not ordered");
  }
  out.converged = out.lower == out.upper;
  if (out.converged && !(best_response(contest, types, out.upper) == out.upper)) {
    throw ContestError(ErrorCode::NotSubEquilibrium,
                       "converged profile failed the fixed-point check");
  }
  return out;
}

bool is_sub_equilibrium(const PrizeVector& contest, const EmpiricalTypes& types,
                        const ParticipationProfile& profile) {
  const std::vector<double> beta = beat_probabilities(types, profile);
  const double slack = 1e-12 * contest.budget();
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (profile.mask[i] && expected_prize(contest, beta[i]) - types[i].c < -slack) return false;
  }
  return true;
}

double output_cdf(const EmpiricalTypes& types, const ParticipationProfile& profile, double x) {
  check_profile(types, profile);
  if (x < 0.0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (!profile.mask[i] || types[i].q <= x) total += types[i].w;
  }
  return std::min(total, 1.0);
}

bool fosd_check(const PrizeVector& contest, const EmpiricalTypes& types,
                const ParticipationProfile& eq_profile,
                const ParticipationProfile& sub_profile) {
  check_profile(types, eq_profile);
  if (!is_sub_equilibrium(contest, types, sub_profile)) {
    throw ContestError(ErrorCode::ProfileNotSubEquilibrium,
                       "comparison profile is not individually rational under the contest");
  }
  auto below = [&](double x) {
    return output_cdf(types, eq_profile, x) <= output_cdf(types, sub_profile, x) + 1e-12;
  };
  if (!below(0.0)) return false;
  for (const auto& pt : types.points()) {
    if (!below(pt.q)) return false;
  }
  return true;
}

ParticipationProfile profile_from_rule(const EmpiricalTypes& types,
                                       const ParticipationRule& rule) {
  ParticipationProfile out = ParticipationProfile::none(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) out.mask[i] = rule(types[i].q, types[i].c);
  return out;
}

ObjectiveEstimate mc_objective(const JointTypeDistribution& jd, const ParticipationRule& rule,
                               std::size_t n, Objective objective, std::size_t replicas,
                               std::uint64_t seed) {
  return run_replicas(objective, replicas, seed, [&](Rng& rng, std::vector<double>& outputs) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto [q, c] = sample_joint(jd, rng);
      if (rule(q, c)) outputs.push_back(q);
    }
  });
}

ObjectiveEstimate mc_objective(const EmpiricalTypes& types, const ParticipationProfile& profile,
                               Objective objective, std::size_t replicas, std::uint64_t seed) {
  check_profile(types, profile);
  const std::size_t m = types.size();
  std::vector<double> cumulative(m);
  std::vector<double> output(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += types[i].w;
    cumulative[i] = acc;
    output[i] = profile.mask[i] ? types[i].q : 0.0;
  }
  const std::size_t n = types.n();
  return run_replicas(objective, replicas, seed, [&](Rng& rng, std::vector<double>& outputs) {
    for (std::size_t k = 0; k < n; ++k) {
      const double u = unit_uniform(rng) * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const std::size_t idx =
          std::min(static_cast<std::size_t>(it - cumulative.begin()), m - 1);
      if (profile.mask[idx]) outputs.push_back(output[idx]);
    }
  });
}

double exact_expected_max(const EmpiricalTypes& types, const ParticipationProfile& profile) {
  check_profile(types, profile);
  const double n = static_cast<double>(types.n());
  double above = 0.0;
  double total = 0.0;
  for (std::size_t i : types.by_quality_desc()) {
    if (!profile.mask[i]) continue;
    const double next = std::min(above + types[i].w, 1.0);
    total += types[i].q * (std::pow(1.0 - above, n) - std::pow(1.0 - next, n));
    above = next;
  }
  return total;
}

ParticipationRule MedianSubEquilibrium::rule() const {
  return [mu = mu, cap = cost_cap](double q, double c) { return q >= mu && c <= cap; };
}

MedianSubEquilibrium median_subequilibrium(const JointTypeDistribution& jd, double budget,
                                           std::size_t n) {
  if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "population must be at least 2");
  if (!(budget > 0.0)) throw ContestError(ErrorCode::InvalidArgument, "budget must be positive");
  MedianSubEquilibrium out;
  out.cost_cap = budget / 2.0;
  out.mu = median_max_quality(jd, out.cost_cap, n - 1);
  out.win_probability_bound = low_cost_max_cdf(jd, out.cost_cap, n - 1, out.mu);
  out.certified = out.win_probability_bound >= 0.5 - 1e-12;
  return out;
}

ParticipationProfile highcost_subequilibrium(const PrizeVector& contest,
                                             const EmpiricalTypes& types, double budget) {
  lottery_decomposition(contest);
  const EquilibriumBracket eq = equilibrium(contest, types);
  ParticipationProfile out = eq.selected();
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i].c <= budget / 2.0) out.mask[i] = false;
  }
  const PrizeVector wta = winner_take_all(budget, contest.n());
  const std::vector<double> beta = beat_probabilities(types, out);
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (!out.mask[i]) continue;
    const double payoff = expected_prize(wta, beta[i]) - types[i].c;
    if (payoff < -1e-9 * budget) {
      throw ContestError(ErrorCode::NotSubEquilibrium,
                         "high-cost participant has negative winner-take-all payoff " +
                             std::to_string(payoff),
                         i + 1);
    }
  }
  return out;
}

double one_sided_z99() {
  static const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.99);
  return z;
}

namespace {

ContestEstimate estimate_contest(const PrizeVector& contest, const EmpiricalTypes& types,
                                 std::size_t j, std::size_t replicas, std::uint64_t seed) {
  const EquilibriumBracket eq = equilibrium(contest, types);
  ContestEstimate out;
  out.j = j;
  out.converged = eq.converged;
  out.participants = eq.selected().count();
  out.estimate = mc_objective(types, eq.selected(), Objective::max(), replicas, seed);
  return out;
}

}  // namespace

ApproxReport wta_approx_experiment(const EmpiricalTypes& types, double budget,
                                   std::size_t replicas, std::uint64_t seed) {
  const std::size_t n = types.n();
  if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "population must be at least 2");
  if (!(budget > 0.0)) throw ContestError(ErrorCode::InvalidArgument, "budget must be positive");
  ApproxReport report;
  // Every contest shares the seed, so estimates use common random numbers.
  report.wta = estimate_contest(winner_take_all(budget, n), types, 1, replicas, seed);
  const double min_cost = types.min_cost();
  std::size_t cap = n;
  if (min_cost > 0.0) {
    cap = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::max(1.0, std::floor(budget / min_cost * (1.0 + 1e-12)))));
  }
  for (std::size_t j = 1; j <= cap; ++j) {
    if (j == 1) {
      report.contests.push_back(report.wta);
    } else {
      report.contests.push_back(
          estimate_contest(make_simple_contest(j, budget, n), types, j, replicas, seed));
    }
  }
  const ContestEstimate* best = &report.contests.front();
  for (const auto& c : report.contests) {
    if (c.estimate.mean > best->estimate.mean) best = &c;
  }
  report.best_j = best->j;
  report.best = best->estimate.mean;
  const double w = report.wta.estimate.mean;
  if (report.best == w) {
    report.ratio = 1.0;
  } else {
    report.ratio = w > 0.0 ? report.best / w : std::numeric_limits<double>::infinity();
  }
  const double se = combined_se(3.0 * report.wta.estimate.std_error, best->estimate.std_error);
  report.margin = 3.0 * w - report.best + one_sided_z99() * se;
  report.three_approx = report.margin >= 0.0;
  return report;
}

ApproxReport wta_approx_experiment(const JointTypeDistribution& jd, std::size_t n,
                                   double budget, std::size_t discretization,
                                   std::size_t replicas, std::uint64_t seed) {
  if (discretization == 0) {
    throw ContestError(ErrorCode::InvalidArgument, "discretization must be positive");
  }
  const EmpiricalTypes types = discretize(jd, discretization, n, seed);
  return wta_approx_experiment(types, budget, replicas, seed);
}

bool ExampleObjReport::all_passed() const {
  return wta_max_above_two && split_sum_at_least_quarter && split_high_participants == 0 &&
         top_heavy_all_below;
}

JointTypeDistribution example_obj_distribution(double budget, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ContestError(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
  }
  return JointTypeDistribution({
      RectComponent{{1.0, 1.0 + eps}, {1.0 - eps, 1.0}, 0.5},
      RectComponent{{20.0, 21.0}, {0.9 * budget - 1.0, 0.9 * budget}, 0.5},
  });
}

ExampleObjReport example_obj(double budget, std::size_t n, double eps, std::uint64_t seed,
                             std::size_t replicas, std::size_t discretization) {
  if (!(budget >= kExampleObjMinBudget)) {
    throw ContestError(ErrorCode::BudgetTooSmall,
                       "budget must be at least " + std::to_string(kExampleObjMinBudget));
  }
  if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "population must be at least 2");
  const JointTypeDistribution jd = example_obj_distribution(budget, eps);
  const EmpiricalTypes types = discretize(jd, discretization == 0 ? n : discretization, n, seed);
  const double z = one_sided_z99();
  const double quarter = budget / 4.0;

  ExampleObjReport report;
  report.budget = budget;
  report.n = n;
  report.eps = eps;

  const PrizeVector wta = winner_take_all(budget, n);
  const EquilibriumBracket wta_eq = equilibrium(wta, types);
  report.wta_max = mc_objective(types, wta_eq.selected(), Objective::max(), replicas, seed);
  report.wta_max_above_two = report.wta_max.mean > 2.0;

  report.split_prizes = std::min(n, static_cast<std::size_t>(std::floor(budget / 2.0)));
  const PrizeVector split = make_simple_contest(report.split_prizes, budget, n);
  const EquilibriumBracket split_eq = equilibrium(split, types);
  report.split_sum = mc_objective(types, split_eq.selected(), Objective::sum(), replicas, seed);
  report.split_sum_at_least_quarter = report.split_sum.mean >= quarter;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (split_eq.selected().mask[i] && types[i].q > 1.0 + eps) ++report.split_high_participants;
  }

  std::vector<std::vector<double>> schedules;
  schedules.push_back(wta.values());
  const double top = 0.9 * budget - 1.0;
  const double rest = budget - top;
  for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{10},
                        static_cast<std::size_t>(std::floor(rest))}) {
    const std::size_t ranks = std::min(k, n - 1);
    std::vector<double> v(n, 0.0);
    v[0] = top;
    for (std::size_t r = 1; r <= ranks; ++r) v[r] = rest / static_cast<double>(ranks);
    if (std::find(schedules.begin(), schedules.end(), v) == schedules.end()) {
      schedules.push_back(std::move(v));
    }
  }
  report.top_heavy_all_below = true;
  for (auto& v : schedules) {
    const PrizeVector contest = validate_contest(v, budget);
    const EquilibriumBracket eq = equilibrium(contest, types);
    ObjContestCheck check;
    check.values = contest.values();
    check.sum = mc_objective(types, eq.selected(), Objective::sum(), replicas, seed);
    check.below_quarter = check.sum.mean + z * check.sum.std_error < quarter;
    report.top_heavy_all_below = report.top_heavy_all_below && check.below_quarter;
    report.top_heavy.push_back(std::move(check));
  }
  return report;
}

}  // namespace contest_forge
