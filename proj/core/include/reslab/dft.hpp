#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace reslab {

using cplx = std::complex<double>;

/// e(k/n) = exp(2*pi*i*k/n), evaluated in extended precision and rounded
/// once to binary64.
cplx unit_root(std::uint64_t k, std::uint64_t n);

/// Unnormalized one-dimensional DFT of fixed length:
///   X[j] = sum_k x[k] e(sign * j * k / n).
///
/// Lengths whose prime factors are all <= kMaxRadix run a recursive
/// mixed-radix Cooley-Tukey; other lengths use Bluestein's chirp transform
/// on a power-of-two grid. Plans are immutable and may be shared between
/// threads.
class DftPlan {
 public:
  static constexpr std::size_t kMaxRadix = 64;

  DftPlan(std::size_t n, int sign);
  ~DftPlan();
  DftPlan(DftPlan&&) noexcept;
  DftPlan& operator=(DftPlan&&) noexcept;

  std::size_t size() const noexcept { return n_; }
  int sign() const noexcept { return sign_; }

  void execute(std::span<cplx> data) const;

 private:
  struct Bluestein;

  void mixed_radix(const cplx* in, std::size_t stride, cplx* out, std::size_t n,
                   std::size_t level) const;

  std::size_t n_;
  int sign_;
  std::vector<std::size_t> radices_;
  std::vector<cplx> twiddle_;  // e(sign * k / n), k < n
  std::vector<std::vector<cplx>> level_twiddles_;
  std::unique_ptr<Bluestein> bluestein_;
};

/// Direct O(n^2) DFT with the same convention; the reference for tests.
std::vector<cplx> naive_dft(std::span<const cplx> x, int sign);

/// In-place DFT over a row-major array of shape dims, applied along every
/// axis. Lines along an axis are split across workers; each line's result
/// does not depend on the worker count.
void multi_dft(std::span<cplx> data, std::span<const std::size_t> dims, int sign, unsigned workers);

}  // namespace reslab
