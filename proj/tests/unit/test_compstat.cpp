#include <doctest.h>

#include <cmath>
#include <random>

#include "contest_forge/compstat.hpp"
#include "contest_forge/homogeneous.hpp"
#include "contest_forge/numerics.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace contest_forge;

TEST_CASE("q_polynomial") {
  for (std::size_t n : {3u, 5u, 11u}) {
    for (std::size_t j = 2; j <= n; ++j) CHECK(q_polynomial(n, j, 0.0) == -1.0);
  }
  CHECK(q_polynomial(5, 2, 0.25) == doctest::Approx(0.0).scale(1.0));
  CHECK(q_polynomial(5, 3, 0.5) == doctest::Approx(0.0).scale(1.0));
  CHECK(q_polynomial(5, 3, 0.7) == doctest::Approx(12 * 0.49 - 4 * 0.7 - 1));
}

TEST_CASE("breakpoints") {
  const auto t = breakpoints(5, 1.0);
  REQUIRE(t.entries.size() == 4);
  CHECK(t.entries[0].j == 2);
  CHECK(t.entries[0].p == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(t.entries[0].cost == doctest::Approx(std::pow(0.8, 4)).epsilon(1e-10));
  CHECK(t.entries[1].p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // c_{M^3}(1/3) summed by hand: (1/3)(16 + 32 + 24)/81.
  CHECK(t.entries[1].cost == doctest::Approx((16.0 + 32.0 + 24.0) / 81.0 / 3.0).epsilon(1e-10));
  CHECK(t.cost(1) == 1.0);
  CHECK(t.cost(6) == 0.0);
  CHECK(code_of([] { breakpoints(1, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("breakpoints decrease strictly and are ties between neighbours") {
  for (std::size_t n = 2; n <= 50; ++n) {
    const auto t = breakpoints(n, 1.0);
    CHECK(std::abs(t.entries.front().p - 1.0 / n) <= 1e-12);
    for (std::size_t j = 1; j <= n; ++j) CHECK(t.cost(j) > t.cost(j + 1) + 1e-12);
    for (const auto& e : t.entries) {
      std::vector<double> a(n, 0.0), b(n, 0.0);
      for (std::size_t i = 0; i < e.j; ++i) a[i] = 1.0 / e.j;
      for (std::size_t i = 0; i + 1 < e.j; ++i) b[i] = 1.0 / (e.j - 1);
      CHECK(std::abs(oracle::prize_curve(a, e.p) - oracle::prize_curve(b, e.p)) <= 1e-10);
    }
  }
}

TEST_CASE("classification") {
  const auto t = breakpoints(5, 1.0);
  CHECK(classify_by_breakpoints(t, 0.41) == 1);
  CHECK(classify_by_breakpoints(t, 0.35) == 2);
  CHECK(classify_by_breakpoints(t, t.cost(2)) == 1);
  CHECK(code_of([&] { classify_by_breakpoints(t, 1.0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { classify_by_breakpoints(t, 0.0); }) == ErrorCode::OutOfRange);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {3u, 5u, 10u, 25u, 50u}) {
    const auto tab = breakpoints(n, 1.0);
    for (int k = 0; k < 100; ++k) {
      const double c = 1.0 / n + (1.0 - 1.0 / n) * u(rng);
      CHECK(classify_by_breakpoints(tab, c) == optimal_contest(n, 1.0, c).j_star);
    }
  }
}

TEST_CASE("wta criterion") {
  CHECK(wta_optimal(2, 1, 0.5));
  CHECK(wta_optimal(5, 1, 0.4096));
  CHECK_FALSE(wta_optimal(5, 1, 0.4095));
  for (std::size_t n : {2u, 3u, 10u, 1000u, 100000u}) CHECK_FALSE(wta_optimal(n, 2.8, 1.0));
  CHECK(wta_threshold_cost(5, 1) == doctest::Approx(0.4096).epsilon(1e-14));
  for (std::size_t n : {3u, 6u, 20u}) {
    const auto t = breakpoints(n, 1.0);
    for (double c = 0.05; c < 1.0; c += 0.01) {
      if (std::abs(c - t.cost(2)) <= 1e-8 || c <= 1.0 / n) continue;
      CHECK(wta_optimal(n, 1.0, c) == (classify_by_breakpoints(t, c) == 1));
    }
  }
}

TEST_CASE("poisson_value") {
  CHECK(poisson_value(3.0, 3, 0.0) == doctest::Approx(1.0));
  CHECK(poisson_value(1.0, 1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(poisson_value(1.0, 2, std::log(2.0)) ==
        doctest::Approx(0.25 * (1 + std::log(2.0))).epsilon(1e-14));
  const std::size_t n = 1000000;
  for (std::size_t j = 1; j <= 10; ++j) {
    for (double lam : {0.5, 3.0, 9.0, 20.0}) {
      CHECK(std::abs(simple_contest_prize(j, 1.0, n, lam / n) - poisson_value(1.0, j, lam)) <=
            1e-4);
    }
  }
}

TEST_CASE("poisson_limit") {
  const auto a = poisson_limit(1.0, 0.5);
  CHECK(a.lambda_star == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(a.j_star == 1);
  const auto b = poisson_limit(1.0, 0.999999);
  CHECK(b.lambda_star < 1e-5);
  CHECK(b.j_star == 1);
  const auto d = poisson_limit(1.0, 0.1);
  CHECK(d.j_star > 1);
  CHECK(std::abs(poisson_value(1.0, d.j_star, d.lambda_star) - 0.1) <= 1e-10);
  for (std::size_t j = 1; j <= 10; ++j) {
    CHECK(poisson_value(1.0, j, d.lambda_star) <=
          poisson_value(1.0, d.j_star, d.lambda_star) + 1e-12);
  }
  CHECK(code_of([] { poisson_limit(1.0, 1.0); }) == ErrorCode::InvalidCost);
}

TEST_CASE("finite populations approach the Poisson limit") {
  const auto t = finite_to_limit_convergence(5.0, 1.0, {50, 100, 200, 400, 800, 1600});
  REQUIRE(t.rows.size() == 6);
  for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k].gap <= t.rows[k - 1].gap);
  CHECK(t.rows.back().gap < 0.05);
  for (const auto& r : t.rows) CHECK(r.lambda * 1.0 <= 5.0);
  const auto two = finite_to_limit_convergence(2.0, 1.0, {100, 1000, 10000});
  for (const auto& r : two.rows) CHECK(r.j_star == 1);
}

TEST_CASE("asymptotic_scan") {
  const auto rows = asymptotic_scan(1.0, {100.0, 1000.0});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.n == static_cast<std::size_t>(std::ceil(3.0 * r.vc)));
    CHECK(r.vc - r.j_star > 0);
    CHECK(r.vc - r.lambda > 0);
    CHECK(r.lambda < r.j_star);
    CHECK(r.r_j >= 0.3);
    CHECK(r.r_j <= 3.0);
    CHECK(r.r_lambda >= 0.3);
    CHECK(r.r_lambda <= 3.0);
  }
  CHECK(code_of([] { asymptotic_scan(1.0, {10.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("bound_audit") {
  const auto a = bound_audit(100, 0.2, 30);
  REQUIRE(a.find("bcoeff.lower") != nullptr);
  CHECK(a.find("bcoeff.lower")->status == AuditStatus::Pass);
  CHECK(a.find("factorial.lower")->status == AuditStatus::Pass);
  CHECK(a.find("factorial.upper")->status == AuditStatus::Pass);
  const auto b = bound_audit(100, 0.2, 60);
  CHECK(b.find("bcoeff.lower")->status == AuditStatus::Skipped);
  CHECK(b.find("bcoeff.upper")->status == AuditStatus::Pass);
  CHECK(a.all_passed());
  CHECK(b.all_passed());

  // The lower bound does not hold once p is large and j sits well below pn:
  // here the pmf is about e^-15.34 against a bound of e^-13.76.
  const auto big_p = bound_audit(27, 0.867373, 12);
  CHECK(big_p.find("bcoeff.lower")->status == AuditStatus::Fail);
  CHECK(big_p.find("bcoeff.lower")->lhs > big_p.find("bcoeff.lower")->rhs);

  const std::size_t n = 2000, j = 400;
  const double p = pmf_level_rate(n, j, 0.75 / j);
  CHECK(p * n < j);
  CHECK(numerics::binom_pmf(n, j, p) == doctest::Approx(0.75 / j).epsilon(1e-8));
  const auto tail = bound_audit(n, p, j);
  CHECK(tail.find("btail.lower")->status == AuditStatus::Pass);
  CHECK(tail.find("btail.upper")->status == AuditStatus::Pass);

  const auto ld = participation_lower_bound_audit(100.0, 300);
  CHECK(ld.status == AuditStatus::Pass);
  // Entries read lhs < rhs: the bound sits below the participation rate.
  CHECK(ld.rhs > ld.lhs);
}
