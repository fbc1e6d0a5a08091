#pragma once

// Rank-order prize schedules and the expected-prize curve c_M(p).

#include <cstddef>
#include <span>
#include <vector>

namespace contest_forge {

inline constexpr double kMonotoneSlack = 1e-12;
inline constexpr double kBudgetSlack = 1e-9;

/// Prize schedule v_1 >= ... >= v_n >= 0 paid by rank, with total at most
/// the budget. Only constructible through validate_contest and friends.
class PrizeVector {
 public:
  const std::vector<double>& values() const noexcept { return values_; }
  double budget() const noexcept { return budget_; }
  std::size_t n() const noexcept { return values_.size(); }
  /// 1-based rank access; zero past the last rank.
  double prize(std::size_t rank) const noexcept;
  double total() const noexcept;

 private:
  friend PrizeVector validate_contest(std::vector<double> values, double budget);
  PrizeVector(std::vector<double> values, double budget)
      : values_(std::move(values)), budget_(budget) {}

  std::vector<double> values_;
  double budget_ = 0.0;
};

/// w_j = j (v_j - v_{j+1}).
struct WTransform {
  std::vector<double> weights;
  std::size_t n() const noexcept { return weights.size(); }
};

/// Probability of running the simple contest M^j, j = 1..n.
struct SimpleLottery {
  std::vector<double> probabilities;
};

/// Throws NegativePrize, NotMonotone (1-based index of the first rank that
/// exceeds its predecessor) or BudgetExceeded.
PrizeVector validate_contest(std::vector<double> values, double budget);

/// M^j: V/j to each of the top j ranks out of n.
PrizeVector make_simple_contest(std::size_t j, double budget, std::size_t n);

PrizeVector winner_take_all(double budget, std::size_t n);

/// c_M(p) = sum_j v_j C(n-1, j-1) p^(j-1) (1-p)^(n-j): the expected prize of
/// a participant each of whose n-1 opponents independently beats her with
/// probability p.
double expected_prize(const PrizeVector& contest, double p);

/// Expected prize of M^j without materialising the schedule:
/// (V/j) Pr[Binomial(n-1, p) <= j-1].
double simple_contest_prize(std::size_t j, double budget, std::size_t n, double p);

WTransform w_transform(const PrizeVector& contest);

/// Inverse change of variables v_j = sum_{k>=j} w_k / k. The budget of the
/// result is sum w_j unless one is given explicitly.
PrizeVector w_inverse(const WTransform& w);
PrizeVector w_inverse(const WTransform& w, double budget);

/// Pr(j) = (j/V)(v_j - v_{j+1}); requires sum v_j = V.
SimpleLottery lottery_decomposition(const PrizeVector& contest);

/// sum_{j >= rank} Pr(j) V/j: the expected prize at a fixed rank when the
/// lottery is run.
double lottery_rank_payoff(const SimpleLottery& lottery, double budget, std::size_t rank);

/// Probability-weighted average of the simple contests' prize curves at p.
double lottery_expected_prize(const SimpleLottery& lottery, double budget, std::size_t n,
                              double p);

}  // namespace contest_forge
