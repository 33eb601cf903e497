#include "reslab/error.hpp"

namespace reslab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::capacity: return "capacity";
    case Errc::budget: return "budget";
    case Errc::domain: return "domain";
    case Errc::out_of_range: return "out_of_range";
    case Errc::no_generator: return "no_generator";
    case Errc::pole: return "pole";
    case Errc::convergence: return "convergence";
    case Errc::usage: return "usage";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace reslab
