#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "reslab/arith.hpp"
#include "reslab/budget.hpp"
#include "reslab/characters.hpp"

namespace reslab {

/// Smoothness level c (log q)(log log q) / max(log log x - log3 q, log3 q).
/// Needs q >= 16 and x >= 3 so every iterated log is positive.
double theorem_y(std::uint64_t x, std::uint64_t q, double c);

/// (1 / (2 sigma)) log q, the level when log x = (log q)^sigma.
double level_sigma_range(std::uint64_t q, double sigma);
/// (1/2) (log q)(log2 q) / log3 q, the level when x = (log q)^A.
double level_small_range(std::uint64_t q);

/// Resonator weights for one (q, x) instance.
///
/// Every prime p <= y receives the same weight q_p = 1 - damping with
///   damping = 1 / (u (log log q)^(1 + eps))   (prime mode)
///   damping = 1 / (u (log log q)^(2 + eps))   (composite mode)
/// and primes above y receive 0; q_n is the completely multiplicative
/// extension with q_1 = 1. The deficits 1 - q_p are stored alongside the
/// weights so |1 - q_p chi(p)| is evaluated without cancellation.
struct ResonatorConfig {
  Modulus modulus{3};
  std::uint64_t x = 0;
  double c = 0.0;
  double eps = 0.0;
  double y = 0.0;
  double u = 0.0;
  bool composite_mode = false;
  double damping = 0.0;
  std::vector<std::uint64_t> primes;  // all primes <= y, ascending
  std::vector<double> weights;        // q_p
  std::vector<double> deficits;       // 1 - q_p
  std::vector<std::string> warnings;

  /// q_p for a prime p; 0 above y.
  double prime_weight(std::uint64_t p) const;
  /// Primes <= y that do not divide q (those with chi(p) != 0).
  std::vector<std::size_t> active_primes() const;
  double max_deficit() const;
};

inline constexpr double kDefaultEpsilon = 0.1;
inline constexpr double kDefaultCPrime = 0.24;
inline constexpr double kDefaultCComposite = 0.16;

/// Weights at the theorem level y = theorem_y(x, q, c). Throws Errc::domain
/// when y < 2 or a weight would leave [0, 1). A c outside (0, 1/4) (prime
/// mode) or (0, 1/6) (composite mode) only adds a warning.
ResonatorConfig build_weights(std::uint64_t q, std::uint64_t x, double c, double eps,
                              bool composite_mode = false);

/// Weights at an explicit level y, same damping formula.
ResonatorConfig config_at_level(std::uint64_t q, std::uint64_t x, double y, double eps,
                                bool composite_mode = false);

/// q_n; 0 when any prime factor exceeds y.
double weight(std::uint64_t n, const ResonatorConfig& cfg);

/// R(chi) in polar form, accumulated in the log domain.
struct ResonatorValue {
  double log_abs = 0.0;
  double arg = 0.0;

  std::complex<double> value() const { return std::polar(std::exp(log_abs), arg); }
};

/// prod_{p <= y} (1 - q_p chi(p))^{-1}; primes dividing q contribute 1.
ResonatorValue resonator_log(const DirichletCharacter& chi, const ResonatorConfig& cfg);
/// Same as a complex number; overflows to infinity for very large y.
std::complex<double> resonator_value(const DirichletCharacter& chi, const ResonatorConfig& cfg);

/// log|R(chi)|^2 - log|R(chi0)|^2 for every character, by flat index.
/// All entries are <= 0 and entry 0 is exactly 0.
std::vector<double> normalized_log_r2(const CharacterGroup& group, const ResonatorConfig& cfg,
                                      unsigned workers = 0);

/// log|R(chi0)|^2 = -2 sum log(1 - q_p) over primes p <= y not dividing q.
double log_r2_principal(const ResonatorConfig& cfg);

struct ResonanceReport {
  std::uint64_t q = 0;
  std::uint64_t x = 0;
  double c = 0.0;
  double eps = 0.0;
  double y = 0.0;
  double u = 0.0;
  bool composite_mode = false;

  std::complex<double> s1;     // sum S_chi(x) |R(chi)|^2 / |R(chi0)|^2
  double s2 = 0.0;             // sum |R(chi)|^2 / |R(chi0)|^2
  double bound_all = 0.0;      // |S1| / S2
  double bound_nonprincipal = 0.0;  // (|S1| - S_chi0(x) |R(chi0)|^2) / S2
  double normalization = 0.0;  // log|R(chi0)|^2, divided out of S1 and S2
  double max_all = 0.0;        // max over every chi of |S_chi(x)|
  double delta_exact = 0.0;    // max over chi != chi0
  bool has_friable_minorant = false;
  double friable_minorant = 0.0;
};

/// S1, S2 and both resonance bounds from a character-sum profile for (q, x).
/// The summation order is fixed, so the report is bit-identical for any
/// worker count.
ResonanceReport s1_s2(const CharacterGroup& group, const ResonatorConfig& cfg,
                      const CharacterSumProfile& profile, unsigned workers = 0);

/// Same, but with caller-supplied log|R|^2 values (need not be normalized);
/// they are re-centered on entry 0 before summation.
ResonanceReport s1_s2_from_log_r2(const CharacterGroup& group, const ResonatorConfig& cfg,
                                  const CharacterSumProfile& profile, std::vector<double> log_r2);

/// sum of q_n over y-friable n <= x with gcd(n, q) = 1.
double friable_minorant(const ResonatorConfig& cfg, std::uint64_t budget = default_enumeration_budget());

struct MinorantBound {
  double psi_term = 0.0;    // Psi_q(x, y); equals Psi(x, y) for prime q > x
  double correction = 0.0;  // max(1 - q_p) * sum of Omega(n) over the same n
  double omega_sum = 0.0;
};

/// Terms of the lower bound sum q_n >= psi_term - correction, which holds
/// term by term since q^k >= 1 - k(1 - q).
MinorantBound minorant_lower_bound_psi(const ResonatorConfig& cfg,
                                       std::uint64_t budget = default_enumeration_budget());

struct GrowthCheck {
  double log_r2 = 0.0;     // log|R(chi0)|^2
  double budget = 0.0;     // 2 (y / log y)(log u + log3 q)
  double ratio = 0.0;      // log_r2 / log q
  double reference = 0.0;  // 4c, or 6c in composite mode
};

GrowthCheck r_chi0_growth_check(const ResonatorConfig& cfg);

/// The support of the truncated series R_A(chi) = sum_{a <= A} q_a chi(a):
/// y-friable a <= A coprime to q, with their weights, in ascending order.
struct TruncatedSeries {
  std::vector<std::uint64_t> terms;
  std::vector<double> weights;
};

TruncatedSeries truncated_series(const ResonatorConfig& cfg, std::uint64_t truncation,
                                 std::uint64_t budget = default_enumeration_budget());

/// R(chi0) - R_A(chi0), which bounds |R(chi) - R_A(chi)| for every chi.
double truncation_tail(const ResonatorConfig& cfg, const TruncatedSeries& series);

struct OrthogonalityCheck {
  double lhs = 0.0;       // sum_chi |R_A(chi)|^2, through the character transform
  double rhs = 0.0;       // phi(q) sum_{a = b mod q} q_a q_b, by direct pairing
  double residual = 0.0;  // |lhs - rhs|
  double relative = 0.0;  // residual / rhs
};

OrthogonalityCheck orthogonality_identity_check(const CharacterGroup& group, const ResonatorConfig& cfg,
                                                std::uint64_t truncation, unsigned workers = 0);

struct ConvolutionCheck {
  std::complex<double> lhs;  // sum_chi S_chi(x) |R_A(chi)|^2
  double rhs = 0.0;          // sum_{n <= x} phi(q) sum_{na = b mod q} q_a q_b
  double residual = 0.0;
  double relative = 0.0;
  double scale = 0.0;            // sum_chi |R_A(chi)|^2, the n = 1 inner sum
  double min_inner = 0.0;        // least inner sum computed through characters
  double max_inner_mismatch = 0.0;  // character route vs residue pairing, per n
  double min_chain_slack = 0.0;  // least inner_n - q_n * (truncated S2 over b <= A/n)
};

ConvolutionCheck convolution_s1_check(const CharacterGroup& group, const ResonatorConfig& cfg,
                                      std::uint64_t truncation, unsigned workers = 0);

}  // namespace reslab
