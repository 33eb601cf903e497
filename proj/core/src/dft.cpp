#include "reslab/dft.hpp"

#include <cmath>
#include <numbers>

#include "reslab/error.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

__extension__ using u128 = unsigned __int128;

cplx unit_root(std::uint64_t k, std::uint64_t n) {
  k %= n;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const long double angle = two_pi * static_cast<long double>(k) / static_cast<long double>(n);
  const long double c = std::cos(angle);
  const long double s = std::sin(angle);
  return {static_cast<double>(c), static_cast<double>(s)};
}

namespace {

// Plain complex product; std::complex's operator* carries inf/nan recovery
// that costs a library call per multiply.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// e(k / n) for k < n. When 8 | n only the first octant is evaluated; the
// rest follows by exact reflections and quarter turns.
std::vector<cplx> root_table(std::size_t n) {
  std::vector<cplx> r(n);
  if (n % 8 != 0) {
    for (std::size_t k = 0; k < n; ++k) r[k] = unit_root(k, n);
    return r;
  }
  const std::size_t quarter = n / 4;
  for (std::size_t k = 0; k <= n / 8; ++k) r[k] = unit_root(k, n);
  for (std::size_t k = n / 8 + 1; k < quarter; ++k) r[k] = {r[quarter - k].imag(), r[quarter - k].real()};
  for (std::size_t k = quarter; k < n; ++k) r[k] = {-r[k - quarter].imag(), r[k - quarter].real()};
  return r;
}

std::vector<std::size_t> radix_plan(std::size_t n) {
  std::vector<std::size_t> radices;
  while (n % 4 == 0) {
    radices.push_back(4);
    n /= 4;
  }
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  if (n > 1) radices.push_back(n);
  return radices;
}

std::size_t largest_factor(const std::vector<std::size_t>& radices) {
  std::size_t m = 1;
  for (auto r : radices) {
    // A 4 is two 2s.
    m = std::max(m, r == 4 ? std::size_t{2} : r);
  }
  return m;
}

}  // namespace

struct DftPlan::Bluestein {
  std::size_t m = 0;                // power-of-two convolution length
  std::vector<cplx> chirp;          // e(sign * k^2 / (2n)), k < n
  std::vector<cplx> kernel_hat;     // forward transform of conj chirp, wrapped
  std::unique_ptr<DftPlan> forward;
  std::unique_ptr<DftPlan> inverse;
};

DftPlan::DftPlan(std::size_t n, int sign) : n_(n), sign_(sign >= 0 ? 1 : -1) {
  if (n == 0) throw Error(Errc::domain, "DFT length must be positive");
  radices_ = radix_plan(n);
  if (largest_factor(radices_) <= kMaxRadix) {
    twiddle_ = root_table(n);
    if (sign_ < 0) {
      for (auto& w : twiddle_) w = std::conj(w);
    }
    // Contiguous per-level copies of e(sign*j*k/len), 1 <= j < r, k < len/r.
    std::size_t len = n;
    for (std::size_t r : radices_) {
      const std::size_t m = len / r;
      const std::size_t scale = n / len;
      std::vector<cplx> level((r - 1) * m);
      for (std::size_t j = 1; j < r; ++j)
        for (std::size_t k = 0; k < m; ++k) level[(j - 1) * m + k] = twiddle_[j * k * scale];
      level_twiddles_.push_back(std::move(level));
      len = m;
    }
    return;
  }

  radices_.clear();
  auto b = std::make_unique<Bluestein>();
  b->m = 1;
  while (b->m < 2 * n - 1) b->m <<= 1;
  b->chirp.resize(n);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto sq = static_cast<std::uint64_t>(static_cast<u128>(k) * k % two_n);
    b->chirp[k] = unit_root(sign_ > 0 ? sq : (two_n - sq) % two_n, two_n);
  }
  b->forward = std::make_unique<DftPlan>(b->m, -1);
  b->inverse = std::make_unique<DftPlan>(b->m, +1);
  b->kernel_hat.assign(b->m, cplx{});
  b->kernel_hat[0] = std::conj(b->chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b->kernel_hat[k] = std::conj(b->chirp[k]);
    b->kernel_hat[b->m - k] = std::conj(b->chirp[k]);
  }
  b->forward->execute(b->kernel_hat);
  bluestein_ = std::move(b);
}

DftPlan::~DftPlan() = default;
DftPlan::DftPlan(DftPlan&&) noexcept = default;
DftPlan& DftPlan::operator=(DftPlan&&) noexcept = default;

void DftPlan::mixed_radix(const cplx* in, std::size_t stride, cplx* out, std::size_t n,
                          std::size_t level) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t r = radices_[level];
  const std::size_t m = n / r;
  for (std::size_t j = 0; j < r; ++j) {
    mixed_radix(in + j * stride, stride * r, out + j * m, m, level + 1);
  }
  // Butterflies: X[k + s*m] = sum_j e(sign*j*(k+s*m)/n) Y_j[k]. j*k < n, so
  // the twiddle index needs no reduction.
  const std::size_t scale = n_ / n;  // twiddle_ is indexed over n_
  const cplx* tw = level_twiddles_[level].data();
  if (r == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const cplx a = out[k];
      const cplx b = mul(out[m + k], tw[k]);
      out[k] = a + b;
      out[k + m] = a - b;
    }
    return;
  }
  if (r == 4) {
    for (std::size_t k = 0; k < m; ++k) {
      const cplx t0 = out[k];
      const cplx t1 = mul(out[m + k], tw[k]);
      const cplx t2 = mul(out[2 * m + k], tw[m + k]);
      const cplx t3 = mul(out[3 * m + k], tw[2 * m + k]);
      const cplx s02 = t0 + t2, d02 = t0 - t2;
      const cplx s13 = t1 + t3, d13 = t1 - t3;
      // w * d13 with w = e(sign / 4) = sign * i.
      const cplx wd13 = sign_ > 0 ? cplx(-d13.imag(), d13.real()) : cplx(d13.imag(), -d13.real());
      out[k] = s02 + s13;
      out[k + m] = d02 + wd13;
      out[k + 2 * m] = s02 - s13;
      out[k + 3 * m] = d02 - wd13;
    }
    return;
  }
  cplx t[kMaxRadix];
  cplx w[kMaxRadix];  // e(sign * t / r)
  for (std::size_t j = 0; j < r; ++j) w[j] = twiddle_[j * m * scale];
  for (std::size_t k = 0; k < m; ++k) {
    t[0] = out[k];
    for (std::size_t j = 1; j < r; ++j) t[j] = mul(out[j * m + k], tw[(j - 1) * m + k]);
    for (std::size_t s = 0; s < r; ++s) {
      cplx acc = t[0];
      std::size_t e = s;
      for (std::size_t j = 1; j < r; ++j) {
        acc += mul(t[j], w[e]);
        e += s;
        if (e >= r) e -= r;
      }
      out[k + s * m] = acc;
    }
  }
}

void DftPlan::execute(std::span<cplx> data) const {
  if (data.size() != n_) throw Error(Errc::domain, "DFT buffer length does not match the plan");
  if (n_ == 1) return;
  if (!bluestein_) {
    std::vector<cplx> in(data.begin(), data.end());
    mixed_radix(in.data(), 1, data.data(), n_, 0);
    return;
  }
  const Bluestein& b = *bluestein_;
  std::vector<cplx> work(b.m, cplx{});
  for (std::size_t k = 0; k < n_; ++k) work[k] = mul(data[k], b.chirp[k]);
  b.forward->execute(work);
  for (std::size_t k = 0; k < b.m; ++k) work[k] = mul(work[k], b.kernel_hat[k]);
  b.inverse->execute(work);
  const double inv_m = 1.0 / static_cast<double>(b.m);
  for (std::size_t k = 0; k < n_; ++k) data[k] = mul(work[k] * inv_m, b.chirp[k]);
}

std::vector<cplx> naive_dft(std::span<const cplx> x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc{};
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t e = static_cast<std::uint64_t>(j) * k % n;
      acc += x[k] * unit_root(sign >= 0 ? e : (n - e) % n, n);
    }
    out[j] = acc;
  }
  return out;
}

void multi_dft(std::span<cplx> data, std::span<const std::size_t> dims, int sign, unsigned workers) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (total != data.size()) throw Error(Errc::domain, "multi_dft shape does not match buffer");

  std::size_t inner = total;
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    const std::size_t len = dims[axis];
    inner /= len;
    if (len == 1) continue;
    const std::size_t outer = total / (len * inner);
    const DftPlan plan(len, sign);
    const std::size_t lines = outer * inner;
    parallel_for(lines, workers, [&](std::size_t begin, std::size_t end) {
      std::vector<cplx> line(len);
      for (std::size_t l = begin; l < end; ++l) {
        const std::size_t o = l / inner;
        const std::size_t i = l % inner;
        cplx* base = data.data() + o * len * inner + i;
        for (std::size_t t = 0; t < len; ++t) line[t] = base[t * inner];
        plan.execute(line);
        for (std::size_t t = 0; t < len; ++t) base[t * inner] = line[t];
      }
    });
  }
}

}  // namespace reslab
