#include "reslab/budget.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace reslab {

std::uint64_t default_enumeration_budget() {
  const char* env = std::getenv("RESONATOR_LAB_BUDGET");
  if (env == nullptr) return kDefaultEnumerationBudget;
  std::uint64_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return kDefaultEnumerationBudget;
  return value;
}

}  // namespace reslab
