#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "reslab/budget.hpp"

namespace reslab {

/// x, y and u = log x / log y.
struct SmoothParams {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;

  SmoothParams(double x, double y);
};

/// Memoized Psi_m(x, y) for a fixed y and coprimality modulus m.
///
/// Uses Psi(x, p_k) = Psi(x, p_{k-1}) + Psi(floor(x / p_k), p_k) unrolled
/// over k, with memo keyed on (floor(x), prime count). Once x is at most the
/// largest allowed prime and no excluded prime lies at or below x, every
/// n <= x is admissible and the count is x itself. Not thread-safe; use one
/// cache per worker.
class SmoothCountCache {
 public:
  explicit SmoothCountCache(std::uint64_t y, std::uint64_t coprime_to = 1,
                            std::size_t max_entries = std::size_t{1} << 22);

  std::uint64_t count(std::uint64_t x);

  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint32_t>& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
    }
  };

  std::uint64_t count(std::uint64_t x, std::uint32_t k);

  std::vector<std::uint64_t> primes_;  // allowed primes <= y, ascending
  std::uint64_t first_excluded_;       // smallest prime <= y dividing m, or max
  std::size_t max_entries_;
  std::unordered_map<std::pair<std::uint64_t, std::uint32_t>, std::uint64_t, KeyHash> memo_;
};

/// Calls visit(n, big_omega(n)) for every n <= x whose prime factors all lie
/// in primes (ascending), n = 1 included. Depth-first order, deterministic.
template <typename Visit>
void for_each_smooth(std::uint64_t x, const std::vector<std::uint64_t>& primes, Visit&& visit);

/// S(x, y) in ascending order, 1 included. Throws Errc::budget when x
/// exceeds the enumeration budget.
std::vector<std::uint64_t> enumerate_smooth(std::uint64_t x, std::uint64_t y,
                                            std::uint64_t budget = default_enumeration_budget());

/// Psi(x, y). y < 2 leaves only n = 1.
std::uint64_t psi(std::uint64_t x, std::uint64_t y);
/// Psi_m(x, y): y-friable n <= x with gcd(n, m) = 1.
std::uint64_t psi_coprime(std::uint64_t x, std::uint64_t y, std::uint64_t m);

/// Psi(x, y; f) = sum of f(n) over S(x, y), by enumeration.
std::complex<double> psi_twisted(std::uint64_t x, std::uint64_t y,
                                 const std::function<std::complex<double>(std::uint64_t)>& f,
                                 std::uint64_t budget = default_enumeration_budget());

/// Sum of big_omega(n) over S(x, y), and the same restricted to gcd(n, m) = 1.
std::uint64_t omega_sum_smooth(std::uint64_t x, std::uint64_t y,
                               std::uint64_t budget = default_enumeration_budget());
std::uint64_t omega_sum_smooth_coprime(std::uint64_t x, std::uint64_t y, std::uint64_t m,
                                       std::uint64_t budget = default_enumeration_budget());

struct SaddlePoint {
  double alpha = 0.0;
  double residual = 0.0;  // sum_{p<=y} log p / (p^alpha - 1) - log x
  unsigned iterations = 0;
};

/// Left side of the saddle-point equation, sum_{p <= y} log p / (p^alpha - 1).
double saddle_function(double alpha, const std::vector<std::uint64_t>& primes);

/// Unique alpha > 0 with saddle_function(alpha) = log x, by bracketing and
/// safeguarded Newton. tol is absolute on the residual; a non-positive tol
/// selects 1e-12 * log x.
SaddlePoint saddle_alpha(double x, double y, double tol = 0.0);

/// x exp(-u log u - u log log(u + 2) + u), the o(u) term dropped. Heuristic.
double psi_estimate(double x, double y);

/// Main term ((kappa / log y) u (log u + log log(u + 2))) of
/// log(Psi(x, e^kappa y) / Psi(x, y)). Requires 1 < u < sqrt(y), |kappa| < 1.
double comparaison_predicted_logratio(double x, double y, double kappa);

/// One row of a Psi grid report.
struct PsiGridRow {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  double u = 0.0;
  std::uint64_t psi_exact = 0;
  double psi_estimate = 0.0;  // NaN where the estimate is undefined (u < 1)
  double ratio = 0.0;         // psi_exact / psi_estimate
};

std::vector<PsiGridRow> psi_grid(const std::vector<std::uint64_t>& xs,
                                 const std::vector<std::uint64_t>& ys, unsigned workers = 0);

// ---------------------------------------------------------------------------

template <typename Visit>
void for_each_smooth(std::uint64_t x, const std::vector<std::uint64_t>& primes, Visit&& visit) {
  if (x < 1) return;
  struct Frame {
    std::uint64_t n;
    std::size_t next;  // smallest prime index still allowed
    unsigned omega;
  };
  std::vector<Frame> stack;
  stack.push_back({1, 0, 0});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    visit(f.n, f.omega);
    const std::uint64_t room = x / f.n;
    // Push in reverse so smaller primes are visited first.
    std::size_t end = f.next;
    while (end < primes.size() && primes[end] <= room) ++end;
    for (std::size_t i = end; i-- > f.next;) stack.push_back({f.n * primes[i], i, f.omega + 1});
  }
}

}  // namespace reslab
