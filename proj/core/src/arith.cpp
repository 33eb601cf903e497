#include "reslab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reslab/error.hpp"

namespace reslab {

__extension__ using u128 = unsigned __int128;

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (const auto& [p, e] : pairs) v *= ipow(p, e);
  return v;
}

unsigned Factorization::big_omega() const {
  unsigned total = 0;
  for (const auto& pp : pairs) total += pp.exponent;
  return total;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

FactorTable::FactorTable(std::uint64_t limit, std::uint64_t capacity, std::uint64_t segment_size)
    : limit_(limit) {
  if (limit < 2) throw Error(Errc::domain, "factor table limit must be at least 2");
  if (limit > capacity) {
    throw Error(Errc::capacity, "factor table limit " + std::to_string(limit) +
                                    " exceeds capacity " + std::to_string(capacity));
  }
  // 16-bit entries hold any spf <= sqrt(limit) only while limit < 2^32.
  if (limit >= (std::uint64_t{1} << 32)) {
    throw Error(Errc::capacity, "factor table limit must stay below 2^32");
  }
  segment_size = std::max<std::uint64_t>(segment_size, 1024);

  odd_spf_.assign(limit / 2 + 1, 0);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<std::uint64_t> base = primes_up_to(root);

  for (std::uint64_t lo = 1; lo <= limit; lo += segment_size) {
    const std::uint64_t hi = std::min(limit, lo + segment_size - 1);
    for (std::uint64_t p : base) {
      if (p == 2) continue;
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= hi; m += 2 * p) {
        auto& slot = odd_spf_[m / 2];
        if (slot == 0) slot = static_cast<std::uint16_t>(p);
      }
    }
  }
}

std::uint64_t FactorTable::spf(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw Error(Errc::out_of_range, "spf argument " + std::to_string(n) + " outside [2, " +
                                        std::to_string(limit_) + "]");
  }
  if (n % 2 == 0) return 2;
  const std::uint16_t s = odd_spf_[n / 2];
  return s == 0 ? n : s;
}

Factorization FactorTable::factorize(std::uint64_t n) const {
  if (n < 1 || n > limit_) {
    throw Error(Errc::out_of_range, "cannot factorize " + std::to_string(n) +
                                        " with a table up to " + std::to_string(limit_));
  }
  Factorization f;
  while (n > 1) {
    const std::uint64_t p = spf(n);
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.pairs.push_back({p, e});
  }
  return f;
}

unsigned FactorTable::big_omega(std::uint64_t n) const {
  if (n < 1 || n > limit_) throw Error(Errc::out_of_range, "big_omega argument outside table");
  unsigned count = 0;
  while (n > 1) {
    n /= spf(n);
    ++count;
  }
  return count;
}

std::vector<std::uint64_t> FactorTable::primes() const {
  std::vector<std::uint64_t> out;
  if (limit_ >= 2) out.push_back(2);
  for (std::uint64_t n = 3; n <= limit_; n += 2) {
    if (odd_spf_[n / 2] == 0) out.push_back(n);
  }
  return out;
}

Factorization factorize(std::uint64_t n, const FactorTable& table) { return table.factorize(n); }

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw Error(Errc::domain, "cannot factorize 0");
  Factorization f;
  auto strip = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) f.pairs.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p <= n / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) f.pairs.push_back({n, 1});
  return f;
}

unsigned big_omega(std::uint64_t n) { return factorize(n).big_omega(); }

std::uint64_t euler_phi(std::uint64_t q) {
  if (q == 0) throw Error(Errc::domain, "phi(0) is undefined");
  std::uint64_t phi = 1;
  for (const auto& [p, e] : factorize(q).pairs) phi *= ipow(p, e - 1) * (p - 1);
  return phi;
}

unsigned small_omega(std::uint64_t q) {
  if (q == 0) throw Error(Errc::domain, "omega(0) is undefined");
  return factorize(q).small_omega();
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // These twelve witnesses are deterministic below 3.3 * 10^24.
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t c = n | 1;
  while (!is_prime(c)) c += 2;
  return c;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m, std::uint64_t multiple,
                                   const Factorization& multiple_factors) {
  std::uint64_t order = multiple;
  for (const auto& [p, e] : multiple_factors.pairs) {
    for (unsigned i = 0; i < e; ++i) {
      if (pow_mod(a, order / p, m) != 1) break;
      order /= p;
    }
  }
  return order;
}

std::uint64_t primitive_root(std::uint64_t pk) {
  if (pk == 2) return 1;
  if (pk == 4) return 3;
  const Factorization f = factorize(pk);
  if (pk < 3 || f.pairs.size() != 1 || f.pairs[0].prime == 2) {
    throw Error(Errc::no_generator, "unit group mod " + std::to_string(pk) + " is not cyclic");
  }
  const std::uint64_t p = f.pairs[0].prime;
  const std::uint64_t phi = pk / p * (p - 1);
  Factorization phi_factors = factorize(p - 1);
  if (f.pairs[0].exponent > 1) {
    phi_factors.pairs.push_back({p, f.pairs[0].exponent - 1});
    std::sort(phi_factors.pairs.begin(), phi_factors.pairs.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  }
  for (std::uint64_t g = 2; g < pk; ++g) {
    if (g % p == 0) continue;
    bool generates = true;
    for (const auto& pp : phi_factors.pairs) {
      if (pow_mod(g, phi / pp.prime, pk) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return g;
  }
  throw Error(Errc::no_generator, "no generator found mod " + std::to_string(pk));
}

double iterated_log(unsigned j, double t) {
  for (unsigned i = 0; i < j; ++i) {
    if (!(t > 0.0)) {
      throw Error(Errc::domain, "iterated log of order " + std::to_string(j) +
                                    " leaves the positive reals");
    }
    t = std::log(t);
  }
  return t;
}

Modulus::Modulus(std::uint64_t q_) : q(q_), factorization(factorize(q_)) {
  phi = 1;
  for (const auto& [p, e] : factorization.pairs) phi *= ipow(p, e - 1) * (p - 1);
  omega = factorization.small_omega();
}

Modulus::Modulus(std::uint64_t q_, const FactorTable& table) : q(q_), factorization(table.factorize(q_)) {
  phi = 1;
  for (const auto& [p, e] : factorization.pairs) phi *= ipow(p, e - 1) * (p - 1);
  omega = factorization.small_omega();
}

}  // namespace reslab
