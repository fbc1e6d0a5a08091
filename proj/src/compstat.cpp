#include "contest_forge/compstat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "contest_forge/contest.hpp"
#include "contest_forge/error.hpp"
#include "contest_forge/homogeneous.hpp"
#include "contest_forge/numerics.hpp"

namespace contest_forge {
namespace {

constexpr double kTieTol = 1e-12;
constexpr double kWtaRelativeSlack = 1e-12;

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

// Q_j(x) / (1 + x)^(n-1) written in p = x / (1 + x); same sign as Q_j but
// free of the large binomial coefficients.
double scaled_q_polynomial(std::size_t n, std::size_t j, double x) {
  const double p = x / (1.0 + x);
  const auto opponents = as_int(n) - 1;
  return static_cast<double>(j - 1) * numerics::binom_pmf(opponents, as_int(j) - 1, p) -
         numerics::binom_cdf(opponents, as_int(j) - 2, p);
}

}  // namespace

double BreakpointTable::cost(std::size_t j) const {
  if (j == 1) return budget;
  if (j == n + 1) return 0.0;
  if (j < 1 || j > n + 1) throw ContestError(ErrorCode::IndexOutOfRange, "no such breakpoint");
  return entries[j - 2].cost;
}

double q_polynomial(std::size_t n, std::size_t j, double x) {
  if (j < 2 || j > n) throw ContestError(ErrorCode::InvalidArgument, "Q_j needs 2 <= j <= n");
  double coeff = 1.0;  // C(n-1, k-1)
  double power = 1.0;  // x^(k-1)
  double sum = 0.0;
  for (std::size_t k = 1; k < j; ++k) {
    sum += coeff * power;
    coeff = coeff * static_cast<double>(n - k) / static_cast<double>(k);
    power *= x;
  }
  return static_cast<double>(j - 1) * coeff * power - sum;
}

BreakpointTable breakpoints(std::size_t n, double budget) {
  if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "breakpoints need n >= 2");
  if (!(budget > 0.0)) throw ContestError(ErrorCode::InvalidArgument, "budget must be positive");
  BreakpointTable table;
  table.n = n;
  table.budget = budget;
  const double start = 1.0 / static_cast<double>(n - 1);
  for (std::size_t j = 2; j <= n; ++j) {
    const auto root = numerics::find_positive_root_sign_change(
        [n, j](double x) { return scaled_q_polynomial(n, j, x); }, start);
    const double p = root.root / (1.0 + root.root);
    table.entries.push_back({j, p, simple_contest_prize(j, budget, n, p)});
  }
  for (std::size_t j = 1; j <= n; ++j) {
    if (!(table.cost(j) - table.cost(j + 1) > 1e-12 * budget)) {
      throw ContestError(ErrorCode::OrderingViolation,
                         "breakpoint costs are not strictly decreasing at j = " +
                             std::to_string(j));
    }
  }
  return table;
}

std::size_t classify_by_breakpoints(const BreakpointTable& table, double c) {
  if (!(c > 0.0 && c < table.budget)) {
    throw ContestError(ErrorCode::OutOfRange, "cost must lie strictly between 0 and V");
  }
  for (std::size_t j = 1; j <= table.n; ++j) {
    if (c >= table.cost(j + 1)) return j;
  }
  return table.n;
}

double wta_threshold_cost(std::size_t n, double budget) {
  if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "need n >= 2");
  const double m = static_cast<double>(n - 1);
  return budget * std::pow(m / (m + 1.0), m);
}

bool wta_optimal(std::size_t n, double budget, double c) {
  if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "need n >= 2");
  if (!(c > 0.0)) throw ContestError(ErrorCode::InvalidCost, "cost must be positive");
  const double m = static_cast<double>(n - 1);
  return budget / c <= std::pow(1.0 + 1.0 / m, m) * (1.0 + kWtaRelativeSlack);
}

double poisson_value(double budget, std::size_t j, double lambda) {
  if (j < 1) throw ContestError(ErrorCode::InvalidArgument, "poisson_value needs j >= 1");
  return budget / static_cast<double>(j) * numerics::poisson_cdf_partial(lambda, as_int(j));
}

PoissonLimit poisson_limit(double budget, double c) {
  if (!(c > 0.0 && c < budget)) {
    throw ContestError(ErrorCode::InvalidCost, "Poisson limit needs 0 < c < V");
  }
  const auto j_max = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(budget / c)));
  auto envelope = [&](double lambda) {
    double best = 0.0;
    for (std::size_t j = 1; j <= j_max; ++j) best = std::max(best, poisson_value(budget, j, lambda));
    return best;
  };
  double hi = budget / c + 1.0;
  for (int d = 0; envelope(hi) >= c; ++d) {
    if (d > numerics::kMaxBracketDoublings) {
      throw ContestError(ErrorCode::BracketFailure, "could not bracket the Poisson limit");
    }
    hi *= 2.0;
  }
  const auto root = numerics::bisect_decreasing(envelope, c, 0.0, hi, 1e-12 * budget);

  PoissonLimit limit;
  limit.lambda_star = root.root;
  double best = -1.0;
  for (std::size_t j = 1; j <= j_max; ++j) {
    const double v = poisson_value(budget, j, root.root);
    if (v > best + kTieTol) {
      best = v;
      limit.j_star = j;
    }
  }
  limit.value = poisson_value(budget, limit.j_star, root.root);
  return limit;
}

ConvergenceTable finite_to_limit_convergence(double budget, double c,
                                             const std::vector<std::size_t>& n_list) {
  ConvergenceTable table;
  table.limit = poisson_limit(budget, c);
  for (std::size_t n : n_list) {
    if (n < 2) throw ContestError(ErrorCode::InvalidArgument, "population sizes must be >= 2");
    const auto design = optimal_contest(n, budget, c);
    const double lambda = static_cast<double>(n) * design.equilibrium.p;
    table.rows.push_back(
        {n, design.j_star, lambda, std::fabs(lambda - table.limit.lambda_star)});
  }
  return table;
}

std::vector<ScanRow> asymptotic_scan(double c, const std::vector<double>& vc_list,
                                     double n_factor) {
  if (!(c > 0.0)) throw ContestError(ErrorCode::InvalidCost, "cost must be positive");
  if (!(n_factor >= 2.5)) throw ContestError(ErrorCode::InvalidArgument, "n_factor must be >= 2.5");
  for (double vc : vc_list) {
    if (!(vc >= 20.0)) throw ContestError(ErrorCode::InvalidArgument, "scan needs every vc >= 20");
  }
  std::vector<ScanRow> rows;
  rows.reserve(vc_list.size());
  for (double vc : vc_list) {
    ScanRow row;
    row.vc = vc;
    row.budget = c * vc;
    row.n = static_cast<std::size_t>(std::ceil(n_factor * vc));
    const auto design = optimal_contest(row.n, row.budget, c);
    row.j_star = design.j_star;
    row.lambda = static_cast<double>(row.n) * design.equilibrium.p;
    const double log_vc = std::log(vc);
    row.r_j = (vc - static_cast<double>(row.j_star)) / std::sqrt(vc / log_vc);
    row.r_lambda = (vc - row.lambda) / std::sqrt(vc * log_vc);
    rows.push_back(row);
  }
  return rows;
}

std::string to_string(AuditStatus status) {
  switch (status) {
    case AuditStatus::Pass: return "pass";
    case AuditStatus::Fail: return "fail";
    case AuditStatus::Skipped: return "skipped";
  }
  return "unknown";
}

bool AuditReport::all_passed() const {
  return std::none_of(entries.begin(), entries.end(),
                      [](const AuditEntry& e) { return e.status == AuditStatus::Fail; });
}

const AuditEntry* AuditReport::find(const std::string& lemma) const {
  for (const auto& e : entries) {
    if (e.lemma == lemma) return &e;
  }
  return nullptr;
}

namespace {

// Each entry claims lhs < rhs (or lhs <= rhs when `inclusive`).
AuditEntry make_entry(std::string lemma, double lhs, double rhs, bool inclusive = false) {
  const bool ok = inclusive ? lhs <= rhs : lhs < rhs;
  return {std::move(lemma), ok ? AuditStatus::Pass : AuditStatus::Fail, lhs, rhs, {}};
}

AuditEntry skipped(std::string lemma, std::string why) {
  return {std::move(lemma), AuditStatus::Skipped, 0.0, 0.0, std::move(why)};
}

}  // namespace

AuditReport bound_audit(std::size_t n, double p, std::size_t j) {
  AuditReport report;
  const double nd = static_cast<double>(n);
  const double jd = static_cast<double>(j);

  if (n >= 2) {
    const double lf = numerics::log_factorial(as_int(n));
    const double base = nd * std::log(nd) - nd + 0.5 * std::log(nd);
    report.entries.push_back(make_entry("factorial.lower", base + 2.0 / 3.0, lf));
    report.entries.push_back(make_entry("factorial.upper", lf, base + 1.0));
  } else {
    report.entries.push_back(skipped("factorial.lower", "needs n >= 2"));
    report.entries.push_back(skipped("factorial.upper", "needs n >= 2"));
  }

  const bool p_interior = p > 0.0 && p < 1.0;
  const double pn = p * nd;
  const double log_pmf =
      p_interior && j <= n ? numerics::log_binom_pmf(as_int(n), as_int(j), p) : 0.0;

  if (p_interior && j >= 1 && 2 * j <= n) {
    const double bound = std::log(0.25) - 0.5 * std::log(jd) - 2.0 * (jd - pn) * (jd - pn) / pn;
    report.entries.push_back(make_entry("bcoeff.lower", bound, log_pmf));
  } else {
    report.entries.push_back(skipped("bcoeff.lower", "needs 1 <= j <= n/2 and 0 < p < 1"));
  }

  if (p_interior && j >= 1 && j <= n && jd > pn) {
    const double bound = -((jd - pn) * (jd - pn) - 2.0) / (2.0 * jd);
    report.entries.push_back(make_entry("bcoeff.upper", log_pmf, bound));
  } else {
    report.entries.push_back(skipped("bcoeff.upper", "needs j > pn and 0 < p < 1"));
  }

  const double pmf = std::exp(log_pmf);
  const bool tail_hypotheses = p_interior && j >= 2 && pn < jd && 2 * j < n &&
                               pmf >= 0.5 / jd && pmf <= 1.0 / jd;
  if (tail_hypotheses) {
    const double tail = numerics::binom_tail_geq(as_int(n), as_int(j), p);
    const double scale = jd * std::log(jd);
    report.entries.push_back(
        make_entry("btail.lower", std::sqrt(kTailBandLow / scale), tail, true));
    report.entries.push_back(
        make_entry("btail.upper", tail, std::sqrt(kTailBandHigh / scale), true));
  } else {
    report.entries.push_back(skipped("btail.lower", "needs pn < j < n/2, pmf in [1/(2j), 1/j]"));
    report.entries.push_back(skipped("btail.upper", "needs pn < j < n/2, pmf in [1/(2j), 1/j]"));
  }
  return report;
}

AuditEntry participation_lower_bound_audit(double vc, std::size_t n, double c) {
  const auto j = static_cast<std::size_t>(std::floor(vc - std::sqrt(vc)));
  if (n < 2 || j < 1 || j > n) {
    return skipped("ld.lb", "needs 1 <= floor(vc - sqrt(vc)) <= n");
  }
  const double bound =
      (vc - std::sqrt(5.0 * vc * std::log(vc))) / static_cast<double>(n - 1);
  const double p = participation_rate(make_simple_contest(j, c * vc, n), c).p;
  auto entry = make_entry("ld.lb", bound, p);
  entry.note = "M^" + std::to_string(j);
  return entry;
}

double pmf_level_rate(std::size_t n, std::size_t j, double target) {
  if (j < 1 || j > n) throw ContestError(ErrorCode::InvalidArgument, "need 1 <= j <= n");
  const double top = static_cast<double>(j) / static_cast<double>(n);
  const auto f = [n, j](double p) { return -numerics::binom_pmf(as_int(n), as_int(j), p); };
  if (-f(top) < target) {
    throw ContestError(ErrorCode::OutOfRange, "pmf never reaches the requested level below j/n");
  }
  return numerics::bisect_decreasing(f, -target, 0.0, top, 1e-6 * target).root;
}

}  // namespace contest_forge
