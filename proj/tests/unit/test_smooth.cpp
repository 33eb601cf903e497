#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reslab/characters.hpp"
#include "reslab/error.hpp"
#include "reslab/smooth.hpp"

using namespace reslab;

TEST_SUITE("smooth") {
  TEST_CASE("enumeration examples") {
    CHECK(enumerate_smooth(10, 3) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 9});
    CHECK(enumerate_smooth(5, 5) == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(enumerate_smooth(1, 2) == std::vector<std::uint64_t>{1});
  }

  TEST_CASE("enumeration matches trial division") {
    for (std::uint64_t y : {2ULL, 3ULL, 7ULL, 30ULL, 97ULL, 1000ULL}) {
      CHECK(enumerate_smooth(5000, y) == oracle::smooth_list(5000, y));
    }
  }

  TEST_CASE("for_each_smooth reports big omega") {
    const std::vector<std::uint64_t> primes{2, 3, 5, 7};
    std::size_t visits = 0;
    for_each_smooth(2000, primes, [&](std::uint64_t n, unsigned omega) {
      ++visits;
      REQUIRE(omega == oracle::big_omega(n));
    });
    CHECK(visits == oracle::psi(2000, 7));
  }

  TEST_CASE("psi examples") {
    CHECK(psi(10, 3) == 7);
    CHECK(psi(100, 2) == 7);
    CHECK(psi(37, 40) == 37);
    CHECK(psi(37, 37) == 37);
    CHECK(psi(50, 1) == 1);
    CHECK(psi(0, 5) == 0);
  }

  TEST_CASE("psi matches enumeration") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 300; ++i) {
      const std::uint64_t x = 1 + rng() % 20'000;
      const std::uint64_t y = 2 + rng() % x;
      REQUIRE(psi(x, y) == oracle::psi(x, y));
    }
    CHECK(psi(1'000'000, 100) == enumerate_smooth(1'000'000, 100).size());
    CHECK(psi(1'000'000, 7) == enumerate_smooth(1'000'000, 7).size());
  }

  TEST_CASE("cache reuse is consistent") {
    SmoothCountCache cache(50);
    for (std::uint64_t x : {10'000ULL, 100ULL, 10'000ULL, 77'777ULL}) CHECK(cache.count(x) == psi(x, 50));
    CHECK(cache.memo_size() > 0);
  }

  TEST_CASE("psi coprime") {
    CHECK(psi_coprime(10, 3, 2) == 3);
    CHECK(psi_coprime(1000, 13, 1) == psi(1000, 13));
    CHECK(psi_coprime(1000, 13, 17 * 19) == psi(1000, 13));
    for (std::uint64_t m : {2ULL, 6ULL, 10ULL, 30030ULL, 97ULL}) {
      for (std::uint64_t y : {3ULL, 11ULL, 50ULL}) REQUIRE(psi_coprime(3000, y, m) == oracle::psi(3000, y, m));
    }
    // Once y covers every n <= x, excluded primes still cut the count.
    CHECK(psi_coprime(20, 50, 3) == oracle::psi(20, 50, 3));
  }

  TEST_CASE("twisted counts") {
    CHECK(psi_twisted(500, 7, [](std::uint64_t) { return std::complex<double>(1.0, 0.0); }).real() ==
          static_cast<double>(psi(500, 7)));
    const CharacterGroup g(5);
    const DirichletCharacter chi0 = DirichletCharacter::principal(g);
    CHECK(psi_twisted(500, 7, [&](std::uint64_t n) { return chi0(n); }).real() ==
          static_cast<double>(psi_coprime(500, 7, 5)));
    const DirichletCharacter quad(g, std::uint64_t{2});
    const auto s = psi_twisted(10, 3, [&](std::uint64_t n) { return quad(n); });
    CHECK(s.real() == doctest::Approx(1.0));
    CHECK(std::abs(s.imag()) < 1e-12);
  }

  TEST_CASE("omega sums") {
    CHECK(omega_sum_smooth(10, 3) == 11);
    CHECK(omega_sum_smooth(1, 2) == 0);
    CHECK(omega_sum_smooth(4, 2) == 3);
    for (std::uint64_t y : {2ULL, 5ULL, 31ULL}) {
      std::uint64_t all = 0, coprime = 0;
      for (auto n : oracle::smooth_list(4000, y)) {
        all += oracle::big_omega(n);
        if (oracle::gcd(n, 6) == 1) coprime += oracle::big_omega(n);
      }
      CHECK(omega_sum_smooth(4000, y) == all);
      CHECK(omega_sum_smooth_coprime(4000, y, 6) == coprime);
    }
  }

  TEST_CASE("enumeration budget") {
    try {
      enumerate_smooth(1000, 5, 999);
      FAIL("expected budget error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::budget);
    }
    CHECK_THROWS_AS(omega_sum_smooth(1000, 5, 10), Error);
    ::setenv("RESONATOR_LAB_BUDGET", "1234", 1);
    CHECK(default_enumeration_budget() == 1234);
    ::setenv("RESONATOR_LAB_BUDGET", "junk", 1);
    CHECK(default_enumeration_budget() == kDefaultEnumerationBudget);
    ::unsetenv("RESONATOR_LAB_BUDGET");
    CHECK(default_enumeration_budget() == kDefaultEnumerationBudget);
  }

  TEST_CASE("saddle point closed forms") {
    CHECK(saddle_alpha(2.0, 2.0).alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(saddle_alpha(4.0, 2.0).alpha == doctest::Approx(std::log2(1.5)).epsilon(1e-12));
  }

  TEST_CASE("saddle point against bisection") {
    for (auto [x, y] : {std::pair{1e6, 100.0}, std::pair{1e4, 20.0}, std::pair{1e12, 1000.0}, std::pair{50.0, 50.0}}) {
      const SaddlePoint sp = saddle_alpha(x, y);
      const auto primes = oracle::primes_by_trial(y);
      CHECK(std::abs(sp.residual) <= 1e-10 * std::log(x));
      CHECK(std::abs(oracle::saddle_lhs(sp.alpha, primes) - std::log(x)) <= 1e-9 * std::log(x));
      CHECK(std::abs(sp.alpha - oracle::saddle_bisection(x, primes)) <= 1e-8);
    }
    CHECK_THROWS_AS(saddle_alpha(0.5, 10.0), Error);
  }

  TEST_CASE("estimate and comparison formulas") {
    CHECK(psi_estimate(1000.0, 1000.0) == doctest::Approx(1000.0 * std::exp(1.0 - std::log(std::log(3.0)))));
    CHECK(psi_estimate(1e4, 100.0) ==
          doctest::Approx(1e4 * std::exp(-2 * std::log(2.0) - 2 * std::log(std::log(4.0)) + 2)));
    CHECK_THROWS_AS(psi_estimate(10.0, 100.0), Error);
    CHECK(comparaison_predicted_logratio(1e6, 100.0, 0.0) == 0.0);
    const double u = std::log(1e6) / std::log(100.0);
    CHECK(comparaison_predicted_logratio(1e6, 100.0, 0.2) ==
          doctest::Approx(0.2 / std::log(100.0) * u * (std::log(u) + std::log(std::log(u + 2.0)))));
    const double exact = std::log(static_cast<double>(psi(1'000'000, 122)) / static_cast<double>(psi(1'000'000, 100)));
    CHECK(exact > 0.0);
    CHECK_THROWS_AS(comparaison_predicted_logratio(1e6, 100.0, 1.5), Error);
  }

  TEST_CASE("psi grid") {
    const auto rows = psi_grid({100, 1000}, {3, 50, 2000}, 2);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
      CHECK(r.psi_exact == oracle::psi(r.x, r.y));
      if (r.y > r.x) {
        CHECK(std::isnan(r.psi_estimate));
      } else {
        CHECK(r.ratio == doctest::Approx(static_cast<double>(r.psi_exact) / r.psi_estimate));
      }
    }
  }

  TEST_CASE("smooth params") {
    const SmoothParams p(1e6, 100.0);
    CHECK(p.u == doctest::Approx(3.0));
    CHECK_THROWS_AS(SmoothParams(10.0, 1.0), Error);
  }
}
