#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "reslab/budget.hpp"

namespace reslab {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization as (prime, exponent) pairs sorted by prime. The
/// factorization of 1 is empty.
struct Factorization {
  std::vector<PrimePower> pairs;

  std::uint64_t value() const;
  /// Number of prime factors counted with multiplicity.
  unsigned big_omega() const;
  /// Number of distinct prime factors.
  unsigned small_omega() const { return static_cast<unsigned>(pairs.size()); }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Smallest-prime-factor table for 2 <= n <= limit.
///
/// Only odd n are stored, as 16-bit entries (0 marks a prime), so a table to
/// 10^8 takes about 100 MB. Construction runs a segmented sieve once the
/// limit exceeds the segment size. Immutable after construction.
class FactorTable {
 public:
  explicit FactorTable(std::uint64_t limit,
                       std::uint64_t capacity = kDefaultFactorTableCapacity,
                       std::uint64_t segment_size = std::uint64_t{1} << 18);

  std::uint64_t limit() const noexcept { return limit_; }

  /// Smallest prime factor of n, 2 <= n <= limit.
  std::uint64_t spf(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }

  /// Factorization of 1 <= n <= limit in O(log n) table lookups.
  Factorization factorize(std::uint64_t n) const;
  unsigned big_omega(std::uint64_t n) const;

  /// All primes up to limit, ascending.
  std::vector<std::uint64_t> primes() const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint16_t> odd_spf_;  // index i holds n = 2i+1
};

Factorization factorize(std::uint64_t n, const FactorTable& table);
/// Trial-division factorization for n without a table (n >= 1).
Factorization factorize(std::uint64_t n);

unsigned big_omega(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t q);
unsigned small_omega(std::uint64_t q);

/// Deterministic Miller-Rabin for all 64-bit n.
bool is_prime(std::uint64_t n);
/// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);

/// Primes p <= limit by a plain sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

/// Multiplicative order of a modulo m, given the factorization of a multiple
/// of the order (typically phi(m)).
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m, std::uint64_t multiple,
                                   const Factorization& multiple_factors);

/// Smallest generator of the unit group mod pk, where pk is 2, 4 or an odd
/// prime power. Throws Errc::no_generator for any other modulus.
std::uint64_t primitive_root(std::uint64_t pk);

/// log applied j times (natural log). Throws Errc::domain when any argument
/// to log is not positive.
double iterated_log(unsigned j, double t);

/// A modulus q together with its arithmetic invariants.
struct Modulus {
  std::uint64_t q = 0;
  Factorization factorization;
  std::uint64_t phi = 0;
  unsigned omega = 0;

  explicit Modulus(std::uint64_t q);
  Modulus(std::uint64_t q, const FactorTable& table);

  bool is_prime() const { return factorization.pairs.size() == 1 && factorization.pairs[0].exponent == 1; }
  bool divisible_by(std::uint64_t p) const { return q % p == 0; }
};

}  // namespace reslab
