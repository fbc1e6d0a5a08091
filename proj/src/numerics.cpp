#include "contest_forge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "contest_forge/error.hpp"

namespace contest_forge::numerics {
namespace {

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;
constexpr std::int64_t kDirectPmfLimit = 30;
// Tail sums stop once a term falls below this fraction of the running sum.
constexpr double kTailCutoff = 1e-18;

// ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)]
double stirling_error(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLnSqrt2Pi;
  }
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x ln(x/np) + np - x, evaluated without cancellation when x ~ np.
double deviance_term(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

double direct_pmf(std::int64_t n, std::int64_t k, double p) {
  const std::int64_t kk = std::min(k, n - k);
  double coeff = 1.0;
  for (std::int64_t i = 1; i <= kk; ++i) {
    coeff = coeff * static_cast<double>(n - kk + i) / static_cast<double>(i);
  }
  return coeff * std::pow(p, static_cast<double>(k)) *
         std::pow(1.0 - p, static_cast<double>(n - k));
}

double saddle_point_log_pmf(std::int64_t n_int, std::int64_t k_int, double p) {
  const double n = static_cast<double>(n_int);
  const double x = static_cast<double>(k_int);
  const double q = 1.0 - p;
  if (k_int == 0) return p < 0.1 ? -deviance_term(n, n * q) - n * p : n * std::log(q);
  if (k_int == n_int) return q < 0.1 ? -deviance_term(n, n * p) - n * q : n * std::log(p);
  const double lc = stirling_error(n) - stirling_error(x) - stirling_error(n - x) -
                    deviance_term(x, n * p) - deviance_term(n - x, n * q);
  const double lf = 2.0 * kLnSqrt2Pi + std::log(x) + std::log1p(-x / n);
  return lc - 0.5 * lf;
}

// Pr[X >= j] by summing upward from j; only accurate for j above the mean.
double upper_tail_sum(std::int64_t n, std::int64_t j, double p) {
  const double ratio = p / (1.0 - p);
  double term = binom_pmf(n, j, p);
  double sum = term;
  for (std::int64_t k = j; k < n && term > 0.0; ++k) {
    term *= static_cast<double>(n - k) / static_cast<double>(k + 1) * ratio;
    sum += term;
    if (term < kTailCutoff * sum) break;
  }
  return sum;
}

// Pr[X <= j] by summing downward from j; only accurate for j below the mean.
double lower_tail_sum(std::int64_t n, std::int64_t j, double p) {
  const double ratio = (1.0 - p) / p;
  double term = binom_pmf(n, j, p);
  double sum = term;
  for (std::int64_t k = j; k > 0 && term > 0.0; --k) {
    term *= static_cast<double>(k) / static_cast<double>(n - k + 1) * ratio;
    sum += term;
    if (term < kTailCutoff * sum) break;
  }
  return sum;
}

void require_finite(double value, double x) {
  if (!std::isfinite(value)) {
    throw ContestError(ErrorCode::NonFinite,
                       "function returned a non-finite value at x = " + std::to_string(x));
  }
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) throw ContestError(ErrorCode::InvalidArgument, "log_factorial of a negative integer");
  if (n < 2) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) {
    throw ContestError(ErrorCode::InvalidArgument, "binomial coefficient index out of range");
  }
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double binom_pmf(std::int64_t n, std::int64_t k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  if (n <= kDirectPmfLimit) return direct_pmf(n, k, p);
  return std::exp(saddle_point_log_pmf(n, k, p));
}

double log_binom_pmf(std::int64_t n, std::int64_t k, double p) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (k < 0 || k > n) return kNegInf;
  if (p <= 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return k == n ? 0.0 : kNegInf;
  if (n == 0) return 0.0;
  return saddle_point_log_pmf(n, k, p);
}

double binom_tail_geq(std::int64_t n, std::int64_t j, double p) {
  if (j <= 0) return 1.0;
  if (j > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double mean = static_cast<double>(n) * p;
  if (static_cast<double>(j) > mean) return std::min(1.0, upper_tail_sum(n, j, p));
  return std::clamp(1.0 - lower_tail_sum(n, j - 1, p), 0.0, 1.0);
}

double binom_cdf(std::int64_t n, std::int64_t j, double p) {
  if (j < 0) return 0.0;
  if (j >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  const double mean = static_cast<double>(n) * p;
  if (static_cast<double>(j) < mean) return std::min(1.0, lower_tail_sum(n, j, p));
  return std::clamp(1.0 - upper_tail_sum(n, j + 1, p), 0.0, 1.0);
}

double poisson_cdf_partial(double lambda, std::int64_t j) {
  if (j < 1) throw ContestError(ErrorCode::InvalidArgument, "poisson_cdf_partial needs j >= 1");
  if (!(lambda >= 0.0)) throw ContestError(ErrorCode::InvalidArgument, "negative Poisson mean");
  if (lambda == 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(j), lambda);
}

double poisson_cdf_partial_derivative(double lambda, std::int64_t j) {
  if (j < 1) throw ContestError(ErrorCode::InvalidArgument, "poisson_cdf_partial needs j >= 1");
  if (!(lambda >= 0.0)) throw ContestError(ErrorCode::InvalidArgument, "negative Poisson mean");
  if (lambda == 0.0) return j == 1 ? -1.0 : 0.0;
  return -boost::math::gamma_p_derivative(static_cast<double>(j), lambda);
}

BracketedRoot bisect_decreasing(const ScalarFunction& f, double target, double lo, double hi,
                                double tol) {
  if (!(lo < hi)) throw ContestError(ErrorCode::InvalidArgument, "bisection needs lo < hi");
  if (!(tol > 0.0)) throw ContestError(ErrorCode::InvalidArgument, "bisection needs tol > 0");

  const double f_lo = f(lo);
  require_finite(f_lo, lo);
  const double f_hi = f(hi);
  require_finite(f_hi, hi);

  BracketedRoot out;
  if (target > f_lo) {
    out.root = lo;
    out.residual = f_lo - target;
    out.saturated_low = true;
    return out;
  }
  if (target < f_hi) {
    out.root = hi;
    out.residual = f_hi - target;
    out.saturated_high = true;
    return out;
  }
  if (std::fabs(f_lo - target) <= tol) {
    out.root = lo;
    out.residual = f_lo - target;
    return out;
  }
  if (std::fabs(f_hi - target) <= tol) {
    out.root = hi;
    out.residual = f_hi - target;
    return out;
  }

  for (int it = 1; it <= kBisectMaxIterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double value = f(mid);
    require_finite(value, mid);
    const double r = value - target;
    if (std::fabs(r) <= tol) {
      out.root = mid;
      out.residual = r;
      out.iterations = it;
      return out;
    }
    if (mid <= lo || mid >= hi) break;  // bracket collapsed to adjacent doubles
    if (r > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ContestError(ErrorCode::IterationLimit,
                     "bisection did not reach residual tolerance " + std::to_string(tol));
}

BracketedRoot find_positive_root_sign_change(const ScalarFunction& f, double x_start) {
  if (!(x_start > 0.0)) {
    throw ContestError(ErrorCode::InvalidArgument, "root search needs a positive start");
  }
  double lo = 0.0;
  double hi = x_start;
  double f_hi = f(hi);
  require_finite(f_hi, hi);
  int doublings = 0;
  while (f_hi < 0.0) {
    if (++doublings > kMaxBracketDoublings) {
      throw ContestError(ErrorCode::BracketFailure, "no sign change within 128 doublings");
    }
    lo = hi;
    hi *= 2.0;
    f_hi = f(hi);
    require_finite(f_hi, hi);
  }

  BracketedRoot out;
  if (f_hi == 0.0) {
    out.root = hi;
    return out;
  }
  int it = 0;
  while (hi - lo > 1e-12 * hi) {
    if (++it > kBisectMaxIterations) {
      throw ContestError(ErrorCode::IterationLimit, "positive-root bisection did not converge");
    }
    const double mid = lo + 0.5 * (hi - lo);
    const double value = f(mid);
    require_finite(value, mid);
    if (value == 0.0) {
      out.root = mid;
      out.iterations = it;
      return out;
    }
    if (value < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.root = lo + 0.5 * (hi - lo);
  out.residual = f(out.root);
  out.iterations = it;
  return out;
}

}  // namespace contest_forge::numerics
