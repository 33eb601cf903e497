#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reslab {

enum class Errc {
  capacity,      // requested table exceeds the configured memory budget
  budget,        // enumeration would exceed the enumeration budget
  domain,        // argument outside the mathematical domain of the operation
  out_of_range,  // argument outside the range served by a prebuilt table
  no_generator,  // unit group is not cyclic
  pole,          // resonator factor vanished
  convergence,   // iterative solver did not converge
  usage,         // malformed command line
  io,
};

/// Stable lower-case token for an error code, used in CLI diagnostics.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace reslab
