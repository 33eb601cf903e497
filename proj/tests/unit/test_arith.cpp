#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reslab/arith.hpp"
#include "reslab/error.hpp"

using namespace reslab;

namespace {

std::vector<std::pair<std::uint64_t, unsigned>> pairs_of(const Factorization& f) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (const auto& pp : f.pairs) out.emplace_back(pp.prime, pp.exponent);
  return out;
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("factor table on a tiny range") {
    const FactorTable t(10);
    const std::uint64_t expected[] = {2, 3, 2, 5, 2, 7, 2, 3, 2};
    for (std::uint64_t n = 2; n <= 10; ++n) CHECK(t.spf(n) == expected[n - 2]);
  }

  TEST_CASE("factor table agrees with trial division across segments") {
    // A small segment size forces many segment boundaries.
    const std::uint64_t limit = 200'000;
    const FactorTable t(limit, kDefaultFactorTableCapacity, 4096);
    for (std::uint64_t n = 2; n <= limit; ++n) {
      const auto f = oracle::trial_factor(n);
      REQUIRE(t.spf(n) == f.front().first);
    }
    std::vector<std::uint64_t> primes;
    for (std::uint64_t n = 2; n <= 10'000; ++n)
      if (oracle::is_prime(n)) primes.push_back(n);
    const auto got = FactorTable(10'000).primes();
    CHECK(got == primes);
  }

  TEST_CASE("factor table capacity") {
    CHECK_THROWS_AS(FactorTable(1000, 999), Error);
    try {
      FactorTable t(1000, 10);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::capacity);
    }
  }

  TEST_CASE("factorize examples") {
    const FactorTable t(10'000);
    using P = std::vector<std::pair<std::uint64_t, unsigned>>;
    CHECK(pairs_of(factorize(12, t)) == P{{2, 2}, {3, 1}});
    CHECK(factorize(1, t).pairs.empty());
    CHECK(pairs_of(factorize(9973, t)) == P{{9973, 1}});
    CHECK(pairs_of(factorize(12)) == P{{2, 2}, {3, 1}});
    CHECK(factorize(1).pairs.empty());
  }

  TEST_CASE("factorize matches trial division on random inputs") {
    std::mt19937_64 rng(7);
    const FactorTable t(1'000'000);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t n = 1 + rng() % 1'000'000;
      CHECK(pairs_of(factorize(n, t)) == oracle::trial_factor(n));
      CHECK(pairs_of(factorize(n)) == oracle::trial_factor(n));
      CHECK(factorize(n, t).value() == n);
    }
  }

  TEST_CASE("big omega, phi, small omega") {
    CHECK(big_omega(8) == 3);
    CHECK(big_omega(1) == 0);
    CHECK(big_omega(12) == 3);
    CHECK(euler_phi(5) == 4);
    CHECK(euler_phi(12) == 4);
    CHECK(small_omega(30030) == 6);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
      REQUIRE(euler_phi(n) == oracle::phi(n));
      REQUIRE(big_omega(n) == oracle::big_omega(n));
    }
    // phi(n) >= sqrt(n / 2) for every n.
    for (std::uint64_t n = 3; n <= 3000; ++n) CHECK(static_cast<double>(euler_phi(n)) >= std::sqrt(n / 2.0));
  }

  TEST_CASE("primality") {
    for (std::uint64_t n = 0; n <= 20'000; ++n) REQUIRE(is_prime(n) == oracle::is_prime(n));
    CHECK(is_prime(2305843009213693951ULL));       // 2^61 - 1
    CHECK(is_prime(18446744073709551557ULL));      // largest 64-bit prime
    CHECK_FALSE(is_prime(3215031751ULL));          // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(is_prime(3825123056546413051ULL)); // strong pseudoprime to the first nine prime bases
    CHECK_FALSE(is_prime(561));
    CHECK(next_prime(14) == 17);
    CHECK(next_prime(17) == 17);
    CHECK(next_prime(0) == 2);
    CHECK(next_prime(100'000) == 100'003);
  }

  TEST_CASE("gcd, modular arithmetic, order") {
    CHECK(gcd(12, 18) == 6);
    CHECK(gcd(0, 5) == 5);
    CHECK(mul_mod(18446744073709551557ULL - 1, 2, 18446744073709551557ULL) == 18446744073709551557ULL - 2);
    CHECK(pow_mod(3, 200, 1'000'000'007ULL) == pow_mod(9, 100, 1'000'000'007ULL));
    CHECK(ipow(3, 5) == 243);
    for (std::uint64_t m : {7ULL, 9ULL, 25ULL, 101ULL, 1024ULL}) {
      const std::uint64_t ph = euler_phi(m);
      for (std::uint64_t a = 1; a < m; ++a) {
        if (gcd(a, m) != 1) continue;
        REQUIRE(multiplicative_order(a, m, ph, factorize(ph)) == oracle::order(a, m));
      }
    }
  }

  TEST_CASE("primitive roots") {
    CHECK(primitive_root(5) == 2);
    CHECK(primitive_root(7) == 3);
    CHECK(primitive_root(4) == 3);
    CHECK(primitive_root(2) == 1);
    for (std::uint64_t pk : {3ULL, 9ULL, 27ULL, 11ULL, 121ULL, 1331ULL, 101ULL, 10201ULL, 7919ULL, 99991ULL}) {
      const std::uint64_t g = primitive_root(pk);
      CHECK(oracle::order(g, pk) == oracle::phi(pk));
    }
    for (std::uint64_t bad : {8ULL, 15ULL, 16ULL, 12ULL}) {
      try {
        primitive_root(bad);
        FAIL("expected no_generator for " << bad);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::no_generator);
      }
    }
  }

  TEST_CASE("iterated logarithm") {
    CHECK(iterated_log(1, std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(iterated_log(2, std::exp(std::numbers::e)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(iterated_log(3, 1e6) == doctest::Approx(std::log(std::log(std::log(1e6)))).epsilon(1e-15));
    CHECK(iterated_log(3, 1e6) == doctest::Approx(0.9654).epsilon(1e-4));
    CHECK_THROWS_AS(iterated_log(3, 2.0), Error);  // log log 2 < 0
    CHECK_THROWS_AS(iterated_log(1, 0.0), Error);
  }

  TEST_CASE("modulus descriptor") {
    const Modulus m(30030);
    CHECK(m.phi == 5760);
    CHECK(m.omega == 6);
    CHECK_FALSE(m.is_prime());
    CHECK(m.divisible_by(13));
    const FactorTable t(100'000);
    const Modulus p(99991, t);
    CHECK(p.is_prime());
    CHECK(p.phi == 99990);
  }
}
