#pragma once

#include <cstdint>

namespace reslab {

/// Largest x accepted by enumeration-based operations (S(x,y) listing,
/// twisted sums, weighted friable sums). Defaults to 10^7; the environment
/// variable RESONATOR_LAB_BUDGET overrides it when it parses as a positive
/// integer.
std::uint64_t default_enumeration_budget();

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Largest sieve limit a FactorTable may be built for. Odd-only 16-bit
/// storage puts 4*10^8 at roughly 400 MB.
inline constexpr std::uint64_t kDefaultFactorTableCapacity = 400'000'000;

/// Largest group order for which every character sum is materialized.
inline constexpr std::uint64_t kDefaultCharacterCap = 10'000'000;

}  // namespace reslab
