#include "contest_forge/contest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "contest_forge/error.hpp"
#include "contest_forge/numerics.hpp"

namespace contest_forge {
namespace {

// Binomial terms below this fraction of the modal term are dropped.
constexpr double kNegligibleTerm = 1e-18;

}  // namespace

double PrizeVector::prize(std::size_t rank) const noexcept {
  if (rank == 0 || rank > values_.size()) return 0.0;
  return values_[rank - 1];
}

double PrizeVector::total() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

PrizeVector validate_contest(std::vector<double> values, double budget) {
  if (values.empty()) throw ContestError(ErrorCode::InvalidArgument, "empty prize list");
  if (!std::isfinite(budget) || budget < 0.0) {
    throw ContestError(ErrorCode::InvalidArgument, "budget must be finite and nonnegative");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ContestError(ErrorCode::InvalidArgument, "non-finite prize", i + 1);
    }
    if (values[i] < 0.0) {
      throw ContestError(ErrorCode::NegativePrize,
                         "prize at rank " + std::to_string(i + 1) + " is negative", i + 1);
    }
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] + kMonotoneSlack) {
      throw ContestError(ErrorCode::NotMonotone,
                         "prize at rank " + std::to_string(i + 1) + " exceeds rank " +
                             std::to_string(i),
                         i + 1);
    }
  }
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total > budget * (1.0 + kBudgetSlack)) {
    throw ContestError(ErrorCode::BudgetExceeded,
                       "prizes sum to " + std::to_string(total) + " over budget " +
                           std::to_string(budget));
  }
  return PrizeVector(std::move(values), budget);
}

PrizeVector make_simple_contest(std::size_t j, double budget, std::size_t n) {
  if (j < 1 || j > n) {
    throw ContestError(ErrorCode::IndexOutOfRange,
                       "simple contest needs 1 <= j <= n, got j = " + std::to_string(j));
  }
  std::vector<double> values(n, 0.0);
  std::fill_n(values.begin(), j, budget / static_cast<double>(j));
  return validate_contest(std::move(values), budget);
}

PrizeVector winner_take_all(double budget, std::size_t n) {
  return make_simple_contest(1, budget, n);
}

double expected_prize(const PrizeVector& contest, double p) {
  const auto& v = contest.values();
  const auto opponents = static_cast<std::int64_t>(v.size()) - 1;
  if (opponents == 0 || p <= 0.0) return v.front();
  if (p >= 1.0) return v.back();

  // Sum outward from the binomial mode so only non-negligible terms are
  // visited; this keeps large populations at O(sqrt(n)) work.
  const double q = 1.0 - p;
  const auto mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(opponents + 1) * p)), 0,
      opponents);
  const double modal = numerics::binom_pmf(opponents, mode, p);
  double sum = v[static_cast<std::size_t>(mode)] * modal;

  double term = modal;
  for (std::int64_t k = mode; k < opponents; ++k) {
    term *= static_cast<double>(opponents - k) / static_cast<double>(k + 1) * (p / q);
    sum += v[static_cast<std::size_t>(k + 1)] * term;
    if (term < kNegligibleTerm * modal) break;
  }
  term = modal;
  for (std::int64_t k = mode; k > 0; --k) {
    term *= static_cast<double>(k) / static_cast<double>(opponents - k + 1) * (q / p);
    sum += v[static_cast<std::size_t>(k - 1)] * term;
    if (term < kNegligibleTerm * modal) break;
  }
  return sum;
}

double simple_contest_prize(std::size_t j, double budget, std::size_t n, double p) {
  if (j < 1 || j > n) {
    throw ContestError(ErrorCode::IndexOutOfRange, "simple contest needs 1 <= j <= n");
  }
  const auto opponents = static_cast<std::int64_t>(n) - 1;
  return budget / static_cast<double>(j) *
         numerics::binom_cdf(opponents, static_cast<std::int64_t>(j) - 1, p);
}

WTransform w_transform(const PrizeVector& contest) {
  const auto& v = contest.values();
  WTransform w;
  w.weights.resize(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double next = j + 1 < v.size() ? v[j + 1] : 0.0;  // v_{n+1} = 0
    w.weights[j] = std::max(0.0, static_cast<double>(j + 1) * (v[j] - next));
  }
  return w;
}

PrizeVector w_inverse(const WTransform& w) {
  const double total = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
  return w_inverse(w, total);
}

PrizeVector w_inverse(const WTransform& w, double budget) {
  if (w.weights.empty()) throw ContestError(ErrorCode::InvalidArgument, "empty w-transform");
  for (std::size_t j = 0; j < w.weights.size(); ++j) {
    if (!(w.weights[j] >= 0.0)) {
      throw ContestError(ErrorCode::NegativeWeight,
                         "weight " + std::to_string(j + 1) + " is negative", j + 1);
    }
  }
  std::vector<double> values(w.weights.size());
  double suffix = 0.0;
  for (std::size_t j = w.weights.size(); j-- > 0;) {
    suffix += w.weights[j] / static_cast<double>(j + 1);
    values[j] = suffix;
  }
  return validate_contest(std::move(values), budget);
}

SimpleLottery lottery_decomposition(const PrizeVector& contest) {
  const double budget = contest.budget();
  const double total = contest.total();
  if (!(budget > 0.0) || std::fabs(total - budget) > kBudgetSlack * budget) {
    throw ContestError(ErrorCode::BudgetNotExhausted,
                       "lottery decomposition needs prizes summing to the budget");
  }
  const auto w = w_transform(contest);
  SimpleLottery lottery;
  lottery.probabilities.reserve(w.n());
  for (double weight : w.weights) lottery.probabilities.push_back(weight / budget);
  return lottery;
}

double lottery_rank_payoff(const SimpleLottery& lottery, double budget, std::size_t rank) {
  const auto& pr = lottery.probabilities;
  if (rank < 1 || rank > pr.size()) {
    throw ContestError(ErrorCode::IndexOutOfRange, "rank outside the lottery");
  }
  double payoff = 0.0;
  for (std::size_t j = rank; j <= pr.size(); ++j) {
    payoff += pr[j - 1] * budget / static_cast<double>(j);
  }
  return payoff;
}

double lottery_expected_prize(const SimpleLottery& lottery, double budget, std::size_t n,
                              double p) {
  double sum = 0.0;
  for (std::size_t j = 1; j <= lottery.probabilities.size(); ++j) {
    const double pr = lottery.probabilities[j - 1];
    if (pr != 0.0) sum += pr * simple_contest_prize(j, budget, n, p);
  }
  return sum;
}

}  // namespace contest_forge
