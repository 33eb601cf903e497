#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reslab/budget.hpp"
#include "reslab/resonator.hpp"

namespace reslab {

struct ExperimentOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  std::uint64_t enumeration_budget = default_enumeration_budget();
  std::uint64_t character_cap = kDefaultCharacterCap;
};

/// One verified (q, x, c, eps) instance.
///
/// Inequalities that hold exactly at finite q are flagged; quantities whose
/// comparison is only asymptotic are stored as ratios. NaN marks a field
/// that could not be computed for this instance.
struct ExperimentRecord {
  // inputs
  std::uint64_t q = 0;
  std::uint64_t x = 0;
  double c = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  bool composite_mode = false;

  // modulus and resonator
  std::uint64_t phi = 0;
  unsigned omega = 0;
  bool q_is_prime = false;
  double y = 0.0;
  double u = 0.0;
  double prime_weight = 0.0;

  // character sums
  bool has_delta = false;
  double delta_exact = 0.0;
  std::uint64_t witness_flat = 0;
  std::vector<std::uint64_t> witness_index;
  double max_all = 0.0;

  // resonance quotient
  bool has_resonance = false;
  double s1_re = 0.0;
  double s1_im = 0.0;
  double s2 = 0.0;
  double normalization = 0.0;
  double bound_all = 0.0;
  double bound_nonprincipal = 0.0;

  // friable side
  double friable_minorant = 0.0;
  double psi_term = 0.0;
  double correction = 0.0;
  std::uint64_t psi_xy = 0;
  std::uint64_t psi_q_xy = 0;
  std::uint64_t psi_shrunk = 0;  // Psi(x, y(1 - delta))
  double delta_over_psi_shrunk = 0.0;

  // asymptotic probes, reported only
  double r_chi0_log = 0.0;
  double r_chi0_budget = 0.0;
  double r_chi0_ratio = 0.0;
  double r_chi0_reference = 0.0;
  double supplementary_ratio = 0.0;

  // flags
  bool resonance_ok = false;          // bound_all <= max_all, bound_nonprincipal <= delta_exact
  bool quotient_ok = false;           // friable_minorant <= |S1| / S2
  bool minoration_ok = false;         // friable_minorant >= psi_term - correction
  bool nonprincipal_dominates = false;  // bound_nonprincipal >= friable_minorant
  bool exact_chain_ok = false;
  bool chain_ok = false;              // delta >= bound_nonprincipal >= minorant, minorant >= psi - correction

  std::vector<std::string> warnings;
  std::string error;  // set when the instance failed inside a sweep
  std::map<std::string, double> timings_ms;
};

/// Runs the full pipeline for one instance. Requires 1 <= x < q.
ExperimentRecord verify_instance(std::uint64_t q, std::uint64_t x, double c, double eps, double delta,
                                 bool composite_mode, const ExperimentOptions& options = {});

struct ExperimentSpec {
  enum class XRule { explicit_list, sigma, power };

  std::vector<std::uint64_t> q_list;
  XRule x_rule = XRule::explicit_list;
  std::vector<std::uint64_t> x_list;  // explicit rule: every q is paired with every x
  double sigma = 0.4;                 // log x = (log q)^sigma, 0 < sigma < 1/2
  double power = 2.0;                 // x = (log q)^power, power > 1
  double c = kDefaultCPrime;
  double eps = kDefaultEpsilon;
  double delta = 0.05;
  bool composite_mode = false;
};

/// Distinct primes next_prime(lo (hi/lo)^(i/(count-1))), i < count, ascending.
/// Neighbouring points that land on the same prime are merged.
std::vector<std::uint64_t> log_spaced_primes(std::uint64_t lo, std::uint64_t hi, std::size_t count);

/// x for a given q under spec.x_rule.
std::uint64_t x_for(const ExperimentSpec& spec, std::uint64_t q);
/// (q, x) pairs in sweep order.
std::vector<std::pair<std::uint64_t, std::uint64_t>> sweep_instances(const ExperimentSpec& spec);

/// One record per instance, in sweep order. A failing instance yields a
/// record with inputs echoed and error set; the sweep continues.
std::vector<ExperimentRecord> sweep(const ExperimentSpec& spec, const ExperimentOptions& options = {});

struct ConjectureRow {
  std::uint64_t flat = 0;
  std::vector<std::uint64_t> index;
  std::complex<double> char_sum;
  std::complex<double> friable_sum;  // Psi(x, y; chi)
  std::complex<double> difference;
};

struct ConjectureTable {
  std::uint64_t q = 0;
  std::uint64_t x = 0;
  double a = 0.0;
  double y = 0.0;  // (log q + log^2 x)(log log q)^A
  double principal_sum = 0.0;       // S_chi0(x)
  double principal_friable = 0.0;   // Psi(x, y; chi0) = Psi_q(x, y)
  std::vector<ConjectureRow> rows;  // top-k non-principal characters by |S_chi(x)|
};

ConjectureTable conjecture_probe(std::uint64_t q, std::uint64_t x, double a, std::size_t top_k,
                                 const ExperimentOptions& options = {});

struct LevelRow {
  std::string name;
  double y = 0.0;
  bool has_psi = false;
  std::uint64_t psi = 0;
};

struct LevelsTable {
  std::uint64_t q = 0;
  std::uint64_t x = 0;
  std::vector<LevelRow> rows;
  std::string largest;
};

/// Smoothness levels from the literature next to the theorem level, with
/// Psi(x, y) where x fits the enumeration budget.
LevelsTable levels_table(std::uint64_t q, std::uint64_t x, const ExperimentOptions& options = {});

}  // namespace reslab
