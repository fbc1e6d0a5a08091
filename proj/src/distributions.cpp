#include "contest_forge/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "contest_forge/error.hpp"

namespace contest_forge {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Pr(X <= x) for X uniform on the interval; a point mass when degenerate.
double interval_cdf(const Interval& iv, double x) {
  if (iv.width() <= 0.0) return x >= iv.lo ? 1.0 : 0.0;
  return std::clamp((x - iv.lo) / iv.width(), 0.0, 1.0);
}

double uniform_in(const Interval& iv, Rng& rng) {
  if (iv.width() <= 0.0) return iv.lo;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return iv.lo + iv.width() * unit(rng);
}

}  // namespace

QualityDistribution QualityDistribution::uniform(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw ContestError(ErrorCode::InvalidArgument, "uniform quality needs finite a < b");
  }
  return QualityDistribution(UniformQuality{a, b});
}

QualityDistribution QualityDistribution::piecewise(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) {
    throw ContestError(ErrorCode::InvalidArgument, "piecewise CDF needs at least two knots");
  }
  if (knots.front().second != 0.0 || knots.back().second != 1.0) {
    throw ContestError(ErrorCode::InvalidArgument, "piecewise CDF must run from 0 to 1");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first) || !(knots[i].second > knots[i - 1].second)) {
      throw ContestError(ErrorCode::InvalidArgument,
                         "piecewise CDF knots must increase strictly (atomless)", i + 1);
    }
  }
  return QualityDistribution(PiecewiseLinearCdf{std::move(knots)});
}

double QualityDistribution::support_low() const {
  return std::visit(Overloaded{[](const UniformQuality& u) { return u.a; },
                               [](const PiecewiseLinearCdf& p) { return p.knots.front().first; }},
                    variant_);
}

double QualityDistribution::support_high() const {
  return std::visit(Overloaded{[](const UniformQuality& u) { return u.b; },
                               [](const PiecewiseLinearCdf& p) { return p.knots.back().first; }},
                    variant_);
}

double cdf(const QualityDistribution& qd, double x) {
  return std::visit(
      Overloaded{
          [x](const UniformQuality& u) { return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0); },
          [x](const PiecewiseLinearCdf& p) {
            const auto& k = p.knots;
            if (x <= k.front().first) return 0.0;
            if (x >= k.back().first) return 1.0;
            const auto hi = std::upper_bound(
                k.begin(), k.end(), x, [](double v, const auto& knot) { return v < knot.first; });
            const auto lo = std::prev(hi);
            const double t = (x - lo->first) / (hi->first - lo->first);
            return lo->second + t * (hi->second - lo->second);
          }},
      qd.variant());
}

double quantile(const QualityDistribution& qd, double u) {
  if (u <= 0.0) return qd.support_low();
  if (u >= 1.0) return qd.support_high();
  return std::visit(
      Overloaded{[u](const UniformQuality& d) { return d.a + u * (d.b - d.a); },
                 [u](const PiecewiseLinearCdf& p) {
                   const auto& k = p.knots;
                   const auto hi = std::upper_bound(
                       k.begin(), k.end(), u,
                       [](double v, const auto& knot) { return v < knot.second; });
                   const auto lo = std::prev(hi);
                   const double t = (u - lo->second) / (hi->second - lo->second);
                   return lo->first + t * (hi->first - lo->first);
                 }},
      qd.variant());
}

JointTypeDistribution::JointTypeDistribution(std::vector<RectComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw ContestError(ErrorCode::InvalidArgument, "mixture needs at least one component");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& comp = components_[i];
    const bool finite = std::isfinite(comp.q.lo) && std::isfinite(comp.q.hi) &&
                        std::isfinite(comp.c.lo) && std::isfinite(comp.c.hi) &&
                        std::isfinite(comp.weight);
    if (!finite || comp.q.lo > comp.q.hi || comp.c.lo > comp.c.hi || comp.q.lo < 0.0 ||
        comp.c.lo < 0.0 || comp.weight < 0.0) {
      throw ContestError(ErrorCode::InvalidArgument,
                         "component " + std::to_string(i + 1) +
                             " needs nonempty nonnegative intervals and a nonnegative weight",
                         i + 1);
    }
    total += comp.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw ContestError(ErrorCode::InvalidArgument, "component weights must sum to 1");
  }
  for (auto& comp : components_) comp.weight /= total;
}

double JointTypeDistribution::quality_low() const noexcept {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& comp : components_) {
    if (comp.weight > 0.0) lo = std::min(lo, comp.q.lo);
  }
  return lo;
}

double JointTypeDistribution::quality_high() const noexcept {
  double hi = 0.0;
  for (const auto& comp : components_) {
    if (comp.weight > 0.0) hi = std::max(hi, comp.q.hi);
  }
  return hi;
}

double JointTypeDistribution::mean_quality() const noexcept {
  double mean = 0.0;
  for (const auto& comp : components_) mean += comp.weight * 0.5 * (comp.q.lo + comp.q.hi);
  return mean;
}

double JointTypeDistribution::min_cost() const noexcept {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& comp : components_) {
    if (comp.weight > 0.0) lo = std::min(lo, comp.c.lo);
  }
  return lo;
}

double JointTypeDistribution::low_cost_mass(double cap) const noexcept {
  double mass = 0.0;
  for (const auto& comp : components_) mass += comp.weight * interval_cdf(comp.c, cap);
  return mass;
}

EmpiricalTypes::EmpiricalTypes(std::vector<TypePoint> points, std::size_t n)
    : points_(std::move(points)), n_(n) {
  if (points_.empty()) throw ContestError(ErrorCode::InvalidArgument, "empty type support");
  if (n_ < 1) throw ContestError(ErrorCode::InvalidArgument, "population size must be >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& pt = points_[i];
    if (!std::isfinite(pt.q) || !std::isfinite(pt.c) || !(pt.w > 0.0) || pt.q < 0.0 ||
        pt.c < 0.0) {
      throw ContestError(ErrorCode::InvalidArgument,
                         "support point " + std::to_string(i + 1) +
                             " needs finite nonnegative q, c and a positive weight",
                         i + 1);
    }
    total += pt.w;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ContestError(ErrorCode::InvalidArgument, "support weights must sum to 1");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::sort(order_.begin(), order_.end(),
            [this](std::size_t a, std::size_t b) { return points_[a].q > points_[b].q; });
  for (std::size_t k = 1; k < order_.size(); ++k) {
    if (points_[order_[k]].q == points_[order_[k - 1]].q) {
      throw ContestError(ErrorCode::InvalidArgument, "support qualities must be distinct",
                         order_[k] + 1);
    }
  }
}

double EmpiricalTypes::min_cost() const noexcept {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& pt : points_) lo = std::min(lo, pt.c);
  return lo;
}

std::pair<double, double> sample_joint(const JointTypeDistribution& jd, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& comps = jd.components();
  const double u = unit(rng);
  double acc = 0.0;
  std::size_t pick = comps.size() - 1;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    acc += comps[k].weight;
    if (u < acc && comps[k].weight > 0.0) {
      pick = k;
      break;
    }
  }
  while (comps[pick].weight <= 0.0 && pick > 0) --pick;
  const double q = uniform_in(comps[pick].q, rng);
  const double c = uniform_in(comps[pick].c, rng);
  return {q, c};
}

double low_cost_max_cdf(const JointTypeDistribution& jd, double cost_cap, std::size_t m,
                        double x) {
  if (m < 1) throw ContestError(ErrorCode::InvalidArgument, "need at least one draw");
  if (x < 0.0) return 0.0;
  double single = 0.0;
  for (const auto& comp : jd.components()) {
    const double low_cost = interval_cdf(comp.c, cost_cap);
    single += comp.weight * ((1.0 - low_cost) + low_cost * interval_cdf(comp.q, x));
  }
  return std::pow(std::min(single, 1.0), static_cast<double>(m));
}

double median_max_quality(const JointTypeDistribution& jd, double cost_cap, std::size_t m) {
  if (!(jd.low_cost_mass(cost_cap) > 0.0)) {
    throw ContestError(ErrorCode::NoLowCostMass, "no type has cost at or below the cap");
  }
  auto g = [&](double x) { return low_cost_max_cdf(jd, cost_cap, m, x); };
  if (g(0.0) >= 0.5) return 0.0;
  double lo = 0.0;
  double hi = jd.quality_high();
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (g(mid) >= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Jumps of g sit at degenerate qualities; snap to them exactly.
  double best = hi;
  for (const auto& comp : jd.components()) {
    for (double cand : {comp.q.lo, comp.q.hi}) {
      if (cand >= lo && cand <= hi && cand < best && g(cand) >= 0.5) best = cand;
    }
  }
  return best;
}

std::vector<std::size_t> stratified_counts(const JointTypeDistribution& jd, std::size_t m) {
  const auto& comps = jd.components();
  std::vector<std::size_t> counts(comps.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const double share = static_cast<double>(m) * comps[k].weight;
    counts[k] = static_cast<std::size_t>(std::floor(share));
    assigned += counts[k];
    remainders.emplace_back(share - static_cast<double>(counts[k]), k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < m; ++r, ++assigned) {
    ++counts[remainders[r % remainders.size()].second];
  }
  return counts;
}

EmpiricalTypes discretize(const JointTypeDistribution& jd, std::size_t m, std::size_t n,
                          std::uint64_t seed, DiscretizeMode mode) {
  if (m < 1) throw ContestError(ErrorCode::InvalidArgument, "discretization needs m >= 1");
  Rng rng(seed);
  std::vector<TypePoint> points;
  points.reserve(m);
  const double weight = 1.0 / static_cast<double>(m);
  if (mode == DiscretizeMode::Stratified) {
    const auto counts = stratified_counts(jd, m);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const auto& comp = jd.components()[k];
      for (std::size_t i = 0; i < counts[k]; ++i) {
        const double q = uniform_in(comp.q, rng);
        const double c = uniform_in(comp.c, rng);
        points.push_back({q, c, weight});
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      const auto [q, c] = sample_joint(jd, rng);
      points.push_back({q, c, weight});
    }
  }

  // Break quality ties with an increasing micro-jitter; the total shift stays
  // below 1e-9 of the support width.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].q < points[b].q; });
  const double width = jd.quality_high() - jd.quality_low();
  const double scale = width > 0.0 ? width : std::max(1.0, jd.quality_high());
  const double step = 1e-9 * scale / static_cast<double>(m);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double prev = points[order[k - 1]].q;
    double& cur = points[order[k]].q;
    if (cur <= prev) {
      cur = std::max(prev + step, std::nextafter(prev, std::numeric_limits<double>::infinity()));
    }
  }
  // Equal weights 1/m may not sum to exactly 1 in floating point.
  double total = 0.0;
  for (const auto& pt : points) total += pt.w;
  points.back().w += 1.0 - total;
  return EmpiricalTypes(std::move(points), n);
}

}  // namespace contest_forge
