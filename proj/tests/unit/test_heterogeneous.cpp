#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "contest_forge/heterogeneous.hpp"
#include "contest_forge/homogeneous.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace contest_forge;

namespace {

EmpiricalTypes two_point() { return EmpiricalTypes({{2, 0.3, 0.5}, {1, 0.3, 0.5}}, 2); }

EmpiricalTypes random_types(std::mt19937_64& rng, std::size_t m, std::size_t n,
                            double cost_scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TypePoint> pts;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    pts.push_back({10.0 * u(rng) + 1e-3 * static_cast<double>(i), cost_scale * u(rng),
                   0.1 + u(rng)});
    total += pts.back().w;
  }
  for (auto& p : pts) p.w /= total;
  return EmpiricalTypes(pts, n);
}

PrizeVector random_contest(std::mt19937_64& rng, std::size_t n, double budget) {
  if (rng() % 3 == 0) return make_simple_contest(1 + rng() % n, budget, n);
  return validate_contest(oracle::random_exhausting(rng, n, budget), budget);
}

double brute_beat(const EmpiricalTypes& t, const ParticipationProfile& pr, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (pr.mask[k] && t[k].q > t[i].q) s += t[k].w;
  }
  return s;
}

/// Decisions made from the highest quality down: each point only faces
/// points above it, so one pass fixes the unique equilibrium.
ParticipationProfile sweep_equilibrium(const std::vector<double>& v, const EmpiricalTypes& t) {
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t[a].q > t[b].q; });
  ParticipationProfile out = ParticipationProfile::none(t.size());
  double above = 0.0;
  for (std::size_t i : order) {
    out.mask[i] = t[i].c <= oracle::prize_curve(v, above);
    if (out.mask[i]) above += t[i].w;
  }
  return out;
}

ParticipationProfile random_subset(std::mt19937_64& rng, const ParticipationProfile& p) {
  ParticipationProfile s = p;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.mask[i] && rng() % 2 == 0) s.mask[i] = false;
  }
  return s;
}

}  // namespace

TEST_CASE("beat_probability") {
  const auto t = two_point();
  for (std::size_t i = 0; i < 2; ++i) CHECK(beat_probability(t, ParticipationProfile::none(2), i) == 0.0);
  const auto full = ParticipationProfile::all(2);
  CHECK(beat_probability(t, full, 1) == 0.5);
  CHECK(beat_probability(t, full, 0) == 0.0);
  CHECK(code_of([&] { beat_probability(t, full, 2); }) == ErrorCode::IndexOutOfRange);

  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const auto types = random_types(rng, 50, 5, 1.0);
    ParticipationProfile pr = ParticipationProfile::none(50);
    for (std::size_t i = 0; i < 50; ++i) pr.mask[i] = rng() % 2 == 0;
    const auto all = beat_probabilities(types, pr);
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(beat_probability(types, pr, i) == doctest::Approx(brute_beat(types, pr, i)).epsilon(1e-13));
      CHECK(all[i] == doctest::Approx(brute_beat(types, pr, i)).epsilon(1e-13));
    }
  }
}

TEST_CASE("expected_payoff") {
  const auto t = two_point();
  const auto wta = winner_take_all(1, 2);
  const auto full = ParticipationProfile::all(2);
  CHECK(expected_payoff(wta, t, full, 0) == doctest::Approx(0.7));
  CHECK(expected_payoff(wta, t, full, 1) == doctest::Approx(0.2));
  const EmpiricalTypes free({{1, 0, 0.5}, {2, 0, 0.5}}, 3);
  CHECK(expected_payoff(make_simple_contest(2, 1, 3), free, ParticipationProfile::all(2), 0) >= 0.0);
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 50; ++rep) {
    const auto types = random_types(rng, 12, 6, 1.0);
    const auto contest = random_contest(rng, 6, 1.0);
    const auto full12 = ParticipationProfile::all(12);
    const auto fewer = random_subset(rng, full12);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(expected_payoff(contest, types, fewer, i) >=
            expected_payoff(contest, types, full12, i) - 1e-15);
    }
  }
}

TEST_CASE("best_response examples") {
  const auto t = two_point();
  const auto wta = winner_take_all(1, 2);
  CHECK(best_response(wta, t, ParticipationProfile::none(2)) == ParticipationProfile::all(2));
  CHECK(best_response(wta, t, ParticipationProfile::all(2)) == ParticipationProfile::all(2));
  // Brute force over all four profiles: only the full one is a fixed point.
  int fixed = 0;
  for (int bits = 0; bits < 4; ++bits) {
    ParticipationProfile p{{(bits & 1) != 0, (bits & 2) != 0}};
    if (best_response(wta, t, p) == p) {
      ++fixed;
      CHECK(p == ParticipationProfile::all(2));
    }
  }
  CHECK(fixed == 1);
  const EmpiricalTypes costly({{2, 0.5, 0.5}, {1, 1.5, 0.5}}, 2);
  CHECK(best_response(wta, costly, ParticipationProfile::none(2)).mask ==
        std::vector<bool>{true, false});
}

TEST_CASE("best_response is antitone") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t m = 2 + rng() % 30;
    const auto types = random_types(rng, m, 2 + rng() % 10, 1.0);
    const auto contest = random_contest(rng, types.n(), 1.0);
    ParticipationProfile big = ParticipationProfile::none(m);
    for (std::size_t i = 0; i < m; ++i) big.mask[i] = rng() % 3 != 0;
    const auto small = random_subset(rng, big);
    CHECK(best_response(contest, types, big).subset_of(best_response(contest, types, small)));
  }
}

TEST_CASE("equilibrium examples") {
  const auto eq = equilibrium(winner_take_all(1, 2), two_point());
  CHECK(eq.converged);
  CHECK(eq.selected() == ParticipationProfile::all(2));
  const EmpiricalTypes pricey({{2, 1.5, 0.5}, {1, 1.2, 0.5}}, 2);
  const auto none = equilibrium(winner_take_all(1, 2), pricey);
  CHECK(none.converged);
  CHECK(none.selected().count() == 0);
}

TEST_CASE("equilibrium matches the sweep oracle and brackets every fixed point") {
  std::mt19937_64 rng(123);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 1 + rng() % 12;
    const std::size_t n = 2 + rng() % 8;
    const auto types = random_types(rng, m, n, 1.0);
    const auto contest = random_contest(rng, n, 1.0);
    const auto eq = equilibrium(contest, types);
    CHECK(eq.lower.subset_of(eq.upper));
    CHECK(eq.converged);
    CHECK(eq.selected() == sweep_equilibrium(contest.values(), types));
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
      ParticipationProfile p = ParticipationProfile::none(m);
      for (std::size_t i = 0; i < m; ++i) p.mask[i] = (bits >> i) & 1u;
      if (best_response(contest, types, p) == p) {
        CHECK(eq.lower.subset_of(p));
        CHECK(p.subset_of(eq.upper));
      }
    }
    // Participation exactly when the curve covers the cost.
    const auto beta = beat_probabilities(types, eq.selected());
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(eq.selected().mask[i] == (types[i].c <= expected_prize(contest, beta[i])));
    }
  }
}

TEST_CASE("equilibrium on larger supports matches the sweep oracle") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto types = random_types(rng, 400, 50, 0.5);
    const auto contest = random_contest(rng, 50, 1.0);
    const auto eq = equilibrium(contest, types);
    CHECK(eq.converged);
    CHECK(eq.selected() == sweep_equilibrium(contest.values(), types));
  }
}

TEST_CASE("homogeneous-cost supports reproduce the threshold equilibrium") {
  const std::size_t m = 500;
  std::vector<TypePoint> pts;
  for (std::size_t i = 0; i < m; ++i) pts.push_back({(i + 0.5) / m, 0.3, 1.0 / m});
  const auto qd = QualityDistribution::uniform(0, 1);
  for (std::size_t j : {1u, 2u, 3u}) {
    const std::size_t n = 6;
    const EmpiricalTypes types(pts, n);
    const auto contest = make_simple_contest(j, 1.0, n);
    const auto eq = equilibrium(contest, types);
    const auto th = equilibrium_threshold(contest, qd, 0.3);
    const double mass = static_cast<double>(eq.selected().count()) / m;
    CHECK(std::abs(mass - th.p) <= 1.0 / m + 1e-12);
    // The participants are exactly the top of the support.
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(eq.selected().mask[i] == (i >= m - eq.selected().count()));
    }
  }
}

TEST_CASE("sub-equilibria") {
  const auto wta = winner_take_all(1, 2);
  const auto t = two_point();
  CHECK(is_sub_equilibrium(wta, t, ParticipationProfile::all(2)));
  const EmpiricalTypes costly({{2, 1.5, 0.5}, {1, 0.1, 0.5}}, 2);
  CHECK_FALSE(is_sub_equilibrium(wta, costly, ParticipationProfile::all(2)));
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const auto types = random_types(rng, 20, 6, 1.0);
    const auto contest = random_contest(rng, 6, 1.0);
    const auto eq = equilibrium(contest, types);
    CHECK(is_sub_equilibrium(contest, types, eq.selected()));
    CHECK(is_sub_equilibrium(contest, types, random_subset(rng, eq.selected())));
  }
}

TEST_CASE("output_cdf") {
  const auto t = two_point();
  for (double x : {0.0, 0.5, 1.5, 3.0}) CHECK(output_cdf(t, ParticipationProfile::none(2), x) == 1.0);
  CHECK(output_cdf(t, ParticipationProfile::all(2), 0.5) == 0.0);
  CHECK(output_cdf(t, ParticipationProfile::all(2), 1.5) == 0.5);
  CHECK(output_cdf(t, ParticipationProfile::all(2), 2.0) == 1.0);
  const EmpiricalTypes four({{1, 0, 0.1}, {2, 0, 0.2}, {3, 0, 0.3}, {4, 0, 0.4}}, 3);
  const ParticipationProfile half{{true, false, true, false}};
  // x = 2.5: point 1 (q=1 <= x), point 2 out, point 3 above x, point 4 out.
  CHECK(output_cdf(four, half, 2.5) == doctest::Approx(0.1 + 0.2 + 0.4));
}

TEST_CASE("fosd_check") {
  const auto wta = winner_take_all(1, 2);
  const auto t = two_point();
  const auto eq = equilibrium(wta, t);
  CHECK(fosd_check(wta, t, eq.selected(), eq.selected()));
  const EmpiricalTypes costly({{2, 1.5, 0.5}, {1, 0.1, 0.5}}, 2);
  const auto ceq = equilibrium(wta, costly);
  CHECK(code_of([&] { fosd_check(wta, costly, ceq.selected(), ParticipationProfile::all(2)); }) ==
        ErrorCode::ProfileNotSubEquilibrium);
  std::mt19937_64 rng(200);
  for (int rep = 0; rep < 200; ++rep) {
    const auto types = random_types(rng, 2 + rng() % 40, 2 + rng() % 10, 1.0);
    const auto contest = random_contest(rng, types.n(), 1.0);
    const auto e = equilibrium(contest, types);
    const auto sub = random_subset(rng, e.selected());
    REQUIRE(is_sub_equilibrium(contest, types, sub));
    CHECK(fosd_check(contest, types, e.selected(), sub));
  }
}

TEST_CASE("mc_objective basics") {
  const JointTypeDistribution point({{{1, 1}, {0.1, 0.1}, 1.0}});
  const auto never = mc_objective(point, [](double, double) { return false; }, 5,
                                  Objective::max(), 100, 3);
  CHECK(never.mean == 0.0);
  CHECK(never.std_error == 0.0);
  const auto always = mc_objective(point, [](double, double) { return true; }, 5,
                                   Objective::max(), 100, 3);
  CHECK(always.mean == 1.0);
  CHECK(always.std_error == 0.0);
  CHECK(mc_objective(point, [](double, double) { return true; }, 5, Objective::sum(), 10, 3).mean ==
        5.0);
  CHECK(mc_objective(point, [](double, double) { return true; }, 5, Objective::top_k(2), 10, 3)
            .mean == 2.0);
  CHECK(code_of([&] {
          mc_objective(point, [](double, double) { return true; }, 5, Objective::max(), 1, 3);
        }) == ErrorCode::InvalidArgument);

  const JointTypeDistribution two({{{2, 2}, {0.3, 0.3}, 0.5}, {{1, 1}, {0.3, 0.3}, 0.5}});
  const auto est = mc_objective(two, [](double, double) { return true; }, 2, Objective::max(),
                                100000, 42);
  CHECK(std::abs(est.mean - 1.75) <= 3 * est.std_error);
  const auto emp = mc_objective(two_point(), ParticipationProfile::all(2), Objective::max(),
                                100000, 42);
  CHECK(std::abs(emp.mean - 1.75) <= 3 * emp.std_error);
  CHECK(exact_expected_max(two_point(), ParticipationProfile::all(2)) == doctest::Approx(1.75));
}

TEST_CASE("mc_objective is reproducible and independent of thread count") {
  std::mt19937_64 rng(3);
  const auto types = random_types(rng, 60, 10, 1.0);
  const auto profile = ParticipationProfile::all(60);
  const auto a = mc_objective(types, profile, Objective::max(), 1000, 99);
  const auto b = mc_objective(types, profile, Objective::max(), 1000, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  ::setenv("CONTEST_FORGE_THREADS", "3", 1);
  const auto c = mc_objective(types, profile, Objective::max(), 1000, 99);
  ::unsetenv("CONTEST_FORGE_THREADS");
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
  const double exact = exact_expected_max(types, profile);
  const auto big = mc_objective(types, profile, Objective::max(), 20000, 5);
  CHECK(std::abs(big.mean - exact) <= 3.5 * big.std_error);
}

TEST_CASE("median_subequilibrium") {
  const JointTypeDistribution point({{{1, 1}, {0.1, 0.1}, 1.0}});
  const auto med = median_subequilibrium(point, 1.0, 2);
  CHECK(med.mu == 1.0);
  CHECK(med.accepts(1.0, 0.1));
  CHECK(med.certified);
  CHECK(1.0 * med.win_probability_bound - 0.1 >= 0.0);
  const JointTypeDistribution rect({{{0, 1}, {0, 0.4}, 1.0}});
  CHECK(median_subequilibrium(rect, 1.0, 2).mu == doctest::Approx(0.5).epsilon(1e-10));
  const JointTypeDistribution ex({{{1.0, 1.01}, {0.99, 1.0}, 0.5}, {{20, 21}, {359, 360}, 0.5}});
  const auto m = median_subequilibrium(ex, 400.0, 4000);
  CHECK(m.mu >= 1.0);
  CHECK(m.mu <= 1.01);
  CHECK(m.certified);
  CHECK_FALSE(m.accepts(20.5, 359.5));
  CHECK(code_of([] {
          median_subequilibrium(JointTypeDistribution({{{0, 1}, {2, 3}, 1.0}}), 1.0, 3);
        }) == ErrorCode::NoLowCostMass);
}

TEST_CASE("highcost_subequilibrium") {
  std::mt19937_64 rng(17);
  const auto low = random_types(rng, 30, 5, 0.5);
  CHECK(highcost_subequilibrium(winner_take_all(1.0, 5), low, 1.0).count() == 0);
  const EmpiricalTypes lone({{3.0, 0.7, 0.5}, {1.0, 0.2, 0.5}}, 4);
  const auto hc = highcost_subequilibrium(winner_take_all(1.0, 4), lone, 1.0);
  CHECK(hc.mask == std::vector<bool>{true, false});
  CHECK(code_of([&] { highcost_subequilibrium(validate_contest({0.4, 0.1, 0, 0}, 1.0), lone, 1.0); }) ==
        ErrorCode::BudgetNotExhausted);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng() % 8;
    const auto types = random_types(rng, 2 + rng() % 30, n, 1.0);
    const auto contest = validate_contest(oracle::random_exhausting(rng, n, 1.0), 1.0);
    const auto prof = highcost_subequilibrium(contest, types, 1.0);
    CHECK(is_sub_equilibrium(winner_take_all(1.0, n), types, prof));
  }
}

TEST_CASE("wta_approx_experiment") {
  const EmpiricalTypes single({{2.0, 0.2, 1.0}}, 5);
  const auto one = wta_approx_experiment(single, 1.0, 200, 1);
  CHECK(one.ratio == 1.0);
  CHECK(one.three_approx);
  CHECK(one.contests.size() == 5);

  // Common cost above c_2: winner-take-all is the best simple contest.
  const std::size_t n = 10;
  const double c2 = std::pow(1.0 - 1.0 / n, n - 1);
  const JointTypeDistribution homog({{{0, 1}, {c2 + 0.05, c2 + 0.05}, 1.0}});
  const auto r = wta_approx_experiment(homog, n, 1.0, 200, 4000, 7);
  CHECK(r.ratio >= 0.9);
  CHECK(r.ratio <= 1.1);
  CHECK(r.three_approx);
  CHECK(r.contests.size() == static_cast<std::size_t>(std::floor(1.0 / (c2 + 0.05))));
  CHECK(r.best_j == 1);

  std::mt19937_64 rng(2);
  const auto types = random_types(rng, 200, 20, 0.3);
  const auto x = wta_approx_experiment(types, 1.0, 2000, 3);
  CHECK(x.contests.size() == 20);
  CHECK(x.three_approx);
  CHECK(x.best >= x.wta.estimate.mean);
  const auto y = wta_approx_experiment(types, 1.0, 2000, 3);
  CHECK(x.best == y.best);
  CHECK(x.margin == y.margin);
}

TEST_CASE("example_obj guards") {
  CHECK(code_of([] { example_obj(100.0, 400, 0.01, 0); }) == ErrorCode::BudgetTooSmall);
  const auto jd = example_obj_distribution(400.0, 0.01);
  CHECK(jd.components().size() == 2);
  CHECK(jd.components()[1].c.lo == doctest::Approx(359.0));
}
