#include "reslab/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "reslab/arith.hpp"
#include "reslab/error.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

namespace {

void check_budget(std::uint64_t x, std::uint64_t budget) {
  if (x > budget) {
    throw Error(Errc::budget, "enumeration up to x=" + std::to_string(x) + " exceeds budget " +
                                  std::to_string(budget));
  }
}

std::vector<std::uint64_t> allowed_primes(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  const std::uint64_t top = std::min(x, y);
  if (top > kDefaultFactorTableCapacity) throw Error(Errc::capacity, "prime list up to y too large");
  std::vector<std::uint64_t> primes = primes_up_to(top);
  if (m > 1) std::erase_if(primes, [m](std::uint64_t p) { return m % p == 0; });
  return primes;
}

}  // namespace

SmoothParams::SmoothParams(double x_, double y_) : x(x_), y(y_) {
  if (!(x >= 1.0) || !(y > 1.0)) throw Error(Errc::domain, "SmoothParams needs x >= 1 and y > 1");
  u = x == y ? 1.0 : std::log(x) / std::log(y);
}

SmoothCountCache::SmoothCountCache(std::uint64_t y, std::uint64_t coprime_to, std::size_t max_entries)
    : first_excluded_(std::numeric_limits<std::uint64_t>::max()), max_entries_(max_entries) {
  if (y > kDefaultFactorTableCapacity) throw Error(Errc::capacity, "prime list up to y too large");
  if (coprime_to == 0) throw Error(Errc::domain, "coprimality modulus must be positive");
  for (std::uint64_t p : primes_up_to(y)) {
    if (coprime_to % p == 0) {
      first_excluded_ = std::min(first_excluded_, p);
    } else {
      primes_.push_back(p);
    }
  }
}

std::uint64_t SmoothCountCache::count(std::uint64_t x) {
  return count(x, static_cast<std::uint32_t>(primes_.size()));
}

std::uint64_t SmoothCountCache::count(std::uint64_t x, std::uint32_t k) {
  if (x == 0) return 0;
  if (k == 0 || x < 2) return 1;
  if (x <= primes_[k - 1] && x < first_excluded_) return x;
  // Primes above x contribute nothing.
  if (primes_[k - 1] > x) {
    k = static_cast<std::uint32_t>(std::upper_bound(primes_.begin(), primes_.begin() + k, x) - primes_.begin());
    if (k == 0) return 1;
  }
  const auto key = std::make_pair(x, k);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  // n = 1, plus for each i the n whose largest prime factor is primes_[i].
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < k; ++i) total += count(x / primes_[i], i + 1);

  if (memo_.size() < max_entries_) memo_.emplace(key, total);
  return total;
}

std::vector<std::uint64_t> enumerate_smooth(std::uint64_t x, std::uint64_t y, std::uint64_t budget) {
  check_budget(x, budget);
  std::vector<std::uint64_t> out;
  for_each_smooth(x, allowed_primes(x, y, 1), [&](std::uint64_t n, unsigned) { out.push_back(n); });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t psi(std::uint64_t x, std::uint64_t y) {
  if (y >= x) return x;
  if (y < 2) return x >= 1 ? 1 : 0;
  return SmoothCountCache(y).count(x);
}

std::uint64_t psi_coprime(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  if (m == 1) return psi(x, y);
  if (m == 0) throw Error(Errc::domain, "coprimality modulus must be positive");
  if (x == 0) return 0;
  return SmoothCountCache(std::min(x, y), m).count(x);
}

std::complex<double> psi_twisted(std::uint64_t x, std::uint64_t y,
                                 const std::function<std::complex<double>(std::uint64_t)>& f,
                                 std::uint64_t budget) {
  check_budget(x, budget);
  std::complex<double> acc{};
  for_each_smooth(x, allowed_primes(x, y, 1), [&](std::uint64_t n, unsigned) { acc += f(n); });
  return acc;
}

std::uint64_t omega_sum_smooth(std::uint64_t x, std::uint64_t y, std::uint64_t budget) {
  return omega_sum_smooth_coprime(x, y, 1, budget);
}

std::uint64_t omega_sum_smooth_coprime(std::uint64_t x, std::uint64_t y, std::uint64_t m,
                                       std::uint64_t budget) {
  check_budget(x, budget);
  std::uint64_t total = 0;
  for_each_smooth(x, allowed_primes(x, y, m), [&](std::uint64_t, unsigned omega) { total += omega; });
  return total;
}

double saddle_function(double alpha, const std::vector<std::uint64_t>& primes) {
  double acc = 0.0;
  for (std::uint64_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    acc += lp / std::expm1(alpha * lp);
  }
  return acc;
}

namespace {

double saddle_derivative(double alpha, const std::vector<std::uint64_t>& primes) {
  double acc = 0.0;
  for (std::uint64_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    const double d = std::expm1(alpha * lp);
    acc -= lp * lp * (1.0 + d) / (d * d);
  }
  return acc;
}

}  // namespace

SaddlePoint saddle_alpha(double x, double y, double tol) {
  if (!(x > 1.0) || !(y >= 2.0)) throw Error(Errc::domain, "saddle point needs x > 1 and y >= 2");
  const double target = std::log(x);
  if (!(tol > 0.0)) tol = 1e-12 * target;
  const auto primes = primes_up_to(static_cast<std::uint64_t>(std::floor(y)));
  auto g = [&](double a) { return saddle_function(a, primes) - target; };

  // g decreases strictly from +inf at 0+ to 0- at +inf.
  double lo = 1.0;
  double hi = 1.0;
  while (g(lo) < 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw Error(Errc::convergence, "saddle point bracket underflow");
  }
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw Error(Errc::convergence, "saddle point bracket overflow");
  }

  SaddlePoint sp;
  double alpha = 0.5 * (lo + hi);
  constexpr unsigned kMaxIterations = 200;
  for (unsigned it = 1; it <= kMaxIterations; ++it) {
    const double r = g(alpha);
    sp.iterations = it;
    if (std::abs(r) <= tol) {
      sp.alpha = alpha;
      sp.residual = r;
      return sp;
    }
    if (r > 0.0) {
      lo = alpha;
    } else {
      hi = alpha;
    }
    double next = alpha - r / saddle_derivative(alpha, primes);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == alpha) break;
    alpha = next;
  }
  throw Error(Errc::convergence, "saddle point did not reach tolerance for x=" + std::to_string(x) +
                                     ", y=" + std::to_string(y));
}

double psi_estimate(double x, double y) {
  if (!(y > 1.0) || !(x >= y)) throw Error(Errc::domain, "psi_estimate needs x >= y > 1");
  const double u = x == y ? 1.0 : std::log(x) / std::log(y);
  if (u < 1.0) throw Error(Errc::domain, "psi_estimate needs u >= 1");
  return x * std::exp(-u * std::log(u) - u * std::log(std::log(u + 2.0)) + u);
}

double comparaison_predicted_logratio(double x, double y, double kappa) {
  if (!(y > 1.0) || !(x > 1.0)) throw Error(Errc::domain, "comparison needs x, y > 1");
  const double u = std::log(x) / std::log(y);
  if (!(u > 1.0) || !(u < std::sqrt(y))) throw Error(Errc::domain, "comparison needs 1 < u < sqrt(y)");
  if (!(std::abs(kappa) < 1.0)) throw Error(Errc::domain, "comparison needs |kappa| < 1");
  return kappa / std::log(y) * u * (std::log(u) + std::log(std::log(u + 2.0)));
}

std::vector<PsiGridRow> psi_grid(const std::vector<std::uint64_t>& xs,
                                 const std::vector<std::uint64_t>& ys, unsigned workers) {
  std::vector<PsiGridRow> rows(xs.size() * ys.size());
  parallel_for(rows.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      PsiGridRow& row = rows[i];
      row.x = xs[i / ys.size()];
      row.y = ys[i % ys.size()];
      row.u = (row.x < 2 || row.y < 2) ? 0.0 : std::log(static_cast<double>(row.x)) / std::log(static_cast<double>(row.y));
      row.psi_exact = psi(row.x, row.y);
      row.psi_estimate = std::numeric_limits<double>::quiet_NaN();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      if (row.y >= 2 && row.x >= row.y) {
        row.psi_estimate = psi_estimate(static_cast<double>(row.x), static_cast<double>(row.y));
        row.ratio = static_cast<double>(row.psi_exact) / row.psi_estimate;
      }
    }
  });
  return rows;
}

}  // namespace reslab
