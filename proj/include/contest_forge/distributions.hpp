#pragma once

// Type distributions: atomless quality marginals for the homogeneous-cost
// setting, rectangle mixtures over (quality, cost), and weighted finite
// supports used by the heterogeneous solver.

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <variant>
#include <vector>

namespace contest_forge {

using Rng = std::mt19937_64;

struct UniformQuality {
  double a = 0.0;
  double b = 1.0;
};

/// Piecewise-linear CDF through (quality, probability) knots; the first knot
/// has probability 0, the last probability 1, and both coordinates increase
/// strictly.
struct PiecewiseLinearCdf {
  std::vector<std::pair<double, double>> knots;
};

class QualityDistribution {
 public:
  using Variant = std::variant<UniformQuality, PiecewiseLinearCdf>;

  static QualityDistribution uniform(double a, double b);
  static QualityDistribution piecewise(std::vector<std::pair<double, double>> knots);

  const Variant& variant() const noexcept { return variant_; }
  double support_low() const;
  double support_high() const;

 private:
  explicit QualityDistribution(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

double cdf(const QualityDistribution& qd, double x);
double quantile(const QualityDistribution& qd, double u);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

/// Independent uniform quality and cost on a (possibly degenerate) rectangle.
struct RectComponent {
  Interval q;
  Interval c;
  double weight = 0.0;
};

class JointTypeDistribution {
 public:
  explicit JointTypeDistribution(std::vector<RectComponent> components);

  const std::vector<RectComponent>& components() const noexcept { return components_; }
  double quality_low() const noexcept;
  double quality_high() const noexcept;
  double mean_quality() const noexcept;
  double min_cost() const noexcept;
  /// Pr(c <= cap).
  double low_cost_mass(double cap) const noexcept;

 private:
  std::vector<RectComponent> components_;
};

struct TypePoint {
  double q = 0.0;
  double c = 0.0;
  double w = 0.0;
};

/// Weighted finite support for (q, c) with pairwise distinct qualities, plus
/// the contest population size n.
class EmpiricalTypes {
 public:
  EmpiricalTypes(std::vector<TypePoint> points, std::size_t n);

  const std::vector<TypePoint>& points() const noexcept { return points_; }
  const TypePoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t n() const noexcept { return n_; }
  /// Support indices sorted by decreasing quality.
  const std::vector<std::size_t>& by_quality_desc() const noexcept { return order_; }
  double min_cost() const noexcept;

 private:
  std::vector<TypePoint> points_;
  std::size_t n_ = 0;
  std::vector<std::size_t> order_;
};

std::pair<double, double> sample_joint(const JointTypeDistribution& jd, Rng& rng);

/// Pr(max{q_i : c_i <= cap} <= x) over m independent draws, with the max of
/// an empty set taken as 0.
double low_cost_max_cdf(const JointTypeDistribution& jd, double cost_cap, std::size_t m,
                        double x);

/// Smallest x with low_cost_max_cdf(x) >= 1/2.
double median_max_quality(const JointTypeDistribution& jd, double cost_cap, std::size_t m);

enum class DiscretizeMode { Stratified, Iid };

/// m equally weighted support points drawn from jd. Stratified mode allocates
/// points to components by largest remainder of m * weight.
EmpiricalTypes discretize(const JointTypeDistribution& jd, std::size_t m, std::size_t n,
                          std::uint64_t seed, DiscretizeMode mode = DiscretizeMode::Stratified);

/// Per-component point counts used by stratified discretization.
std::vector<std::size_t> stratified_counts(const JointTypeDistribution& jd, std::size_t m);

}  // namespace contest_forge
