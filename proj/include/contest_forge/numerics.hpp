#pragma once

// Combinatorial primitives and scalar root finders shared by every solver.

#include <cstdint>
#include <functional>

namespace contest_forge::numerics {

/// Outcome of a one-dimensional equation solve.
struct BracketedRoot {
  double root = 0.0;
  double residual = 0.0;  ///< f(root) - target
  int iterations = 0;
  bool saturated_low = false;
  bool saturated_high = false;
};

using ScalarFunction = std::function<double(double)>;

/// ln(n!).
double log_factorial(std::int64_t n);

/// ln C(n, k); requires 0 <= k <= n.
double log_binomial_coefficient(std::int64_t n, std::int64_t k);

/// C(n,k) p^k (1-p)^(n-k). Direct product for n <= 30, saddle-point log
/// form (Loader's stirlerr/bd0 split) above that. Zero outside 0..n.
double binom_pmf(std::int64_t n, std::int64_t k, double p);

/// ln binom_pmf, finite wherever the pmf is positive even if it underflows.
double log_binom_pmf(std::int64_t n, std::int64_t k, double p);

/// Pr[X >= j] for X ~ Binomial(n, p).
double binom_tail_geq(std::int64_t n, std::int64_t j, double p);

/// Pr[X <= j] for X ~ Binomial(n, p).
double binom_cdf(std::int64_t n, std::int64_t j, double p);

/// sum_{k=0}^{j-1} e^-lambda lambda^k / k!
double poisson_cdf_partial(double lambda, std::int64_t j);

/// d/dlambda of poisson_cdf_partial, i.e. -e^-lambda lambda^(j-1) / (j-1)!
double poisson_cdf_partial_derivative(double lambda, std::int64_t j);

inline constexpr int kBisectMaxIterations = 200;

/// Solves f(x) = target for f weakly decreasing on [lo, hi]. Targets outside
/// [f(hi), f(lo)] saturate at the nearer endpoint instead of failing.
BracketedRoot bisect_decreasing(const ScalarFunction& f, double target,
                                double lo, double hi, double tol);

inline constexpr int kMaxBracketDoublings = 128;

/// Locates the unique positive root of a function that is negative near 0
/// and eventually positive. Doubles x_start until the sign changes, then
/// bisects to 1e-12 relative width.
BracketedRoot find_positive_root_sign_change(const ScalarFunction& f,
                                             double x_start);

}  // namespace contest_forge::numerics
