#pragma once

// Comparative statics of optimal simple contests: the breakpoint costs c_j,
// the winner-take-all criterion, the large-population Poisson limit and the
// asymptotic audits of the binomial estimates behind them.

#include <cstddef>
#include <string>
#include <vector>

namespace contest_forge {

struct Breakpoint {
  std::size_t j = 0;
  double p = 0.0;     ///< participation rate where M^j and M^(j-1) tie
  double cost = 0.0;  ///< c_j
};

/// c_1 = V > c_2 > ... > c_n > c_{n+1} = 0; M^j is optimal for costs in
/// [c_{j+1}, c_j].
struct BreakpointTable {
  std::size_t n = 0;
  double budget = 0.0;
  std::vector<Breakpoint> entries;  ///< j = 2..n

  /// c_j for j in 1..n+1.
  double cost(std::size_t j) const;
};

struct PoissonLimit {
  double lambda_star = 0.0;
  std::size_t j_star = 1;
  double value = 0.0;
};

/// Q_j(x) = (j-1) C(n-1,j-1) x^(j-1) - sum_{k=1}^{j-1} C(n-1,k-1) x^(k-1).
double q_polynomial(std::size_t n, std::size_t j, double x);

BreakpointTable breakpoints(std::size_t n, double budget);

/// j with c in [c_{j+1}, c_j]; the smaller j wins on a boundary.
std::size_t classify_by_breakpoints(const BreakpointTable& table, double c);

/// Cost at which winner-take-all stops being optimal: V ((n-1)/n)^(n-1).
double wta_threshold_cost(std::size_t n, double budget);

/// V/c <= (1 + 1/(n-1))^(n-1).
bool wta_optimal(std::size_t n, double budget, double c);

/// (V/j) Pr[Poisson(lambda) <= j-1].
double poisson_value(double budget, std::size_t j, double lambda);

/// Solves max_{j <= V/c} poisson_value(V, j, lambda) = c.
PoissonLimit poisson_limit(double budget, double c);

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t j_star = 0;
  double lambda = 0.0;
  double gap = 0.0;  ///< |lambda - lambda*|
};

struct ConvergenceTable {
  PoissonLimit limit;
  std::vector<ConvergenceRow> rows;
};

ConvergenceTable finite_to_limit_convergence(double budget, double c,
                                             const std::vector<std::size_t>& n_list);

inline constexpr double kDefaultNFactor = 3.0;

struct ScanRow {
  double vc = 0.0;
  double budget = 0.0;
  std::size_t n = 0;
  std::size_t j_star = 0;
  double lambda = 0.0;
  double r_j = 0.0;       ///< (vc - j*) / sqrt(vc / ln vc)
  double r_lambda = 0.0;  ///< (vc - lambda*) / sqrt(vc ln vc)
};

/// For each vc: V = c vc, n = ceil(n_factor vc), optimal design and the
/// normalised gaps of j* and lambda* below vc.
std::vector<ScanRow> asymptotic_scan(double c, const std::vector<double>& vc_list,
                                     double n_factor = kDefaultNFactor);

enum class AuditStatus { Pass, Fail, Skipped };

std::string to_string(AuditStatus status);

struct AuditEntry {
  std::string lemma;
  AuditStatus status = AuditStatus::Skipped;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool all_passed() const;
  const AuditEntry* find(const std::string& lemma) const;
};

inline constexpr double kTailBandLow = 0.001;
inline constexpr double kTailBandHigh = 100.0;

/// Two-sided checks of the factorial window, the binomial pmf bounds and the
/// binomial tail band at (n, p, j); lemmas whose hypotheses fail are skipped.
AuditReport bound_audit(std::size_t n, double p, std::size_t j);

/// Participation of M^floor(vc - sqrt(vc)) against (vc - sqrt(5 vc ln vc))/(n-1).
AuditEntry participation_lower_bound_audit(double vc, std::size_t n, double c = 1.0);

/// Largest p < j/n where the pmf at j equals target; used to construct
/// points satisfying the tail-band hypotheses.
double pmf_level_rate(std::size_t n, std::size_t j, double target);

}  // namespace contest_forge
