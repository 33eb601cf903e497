#include "reslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "reslab/error.hpp"
#include "reslab/parallel.hpp"
#include "reslab/smooth.hpp"

namespace reslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kChainTolerance = 1e-9;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

double supplementary_ratio(std::uint64_t q, std::uint64_t x, unsigned omega) {
  const double qd = static_cast<double>(q);
  const double gap = iterated_log(2, static_cast<double>(x)) - iterated_log(3, qd);
  const double denom = std::log(1.0 + omega) * gap;
  if (!(denom > 0.0)) return kNaN;
  return iterated_log(2, qd) / denom;
}

}  // namespace

ExperimentRecord verify_instance(std::uint64_t q, std::uint64_t x, double c, double eps, double delta,
                                 bool composite_mode, const ExperimentOptions& options) {
  if (x < 1 || x >= q) {
    throw Error(Errc::domain, "instance needs 1 <= x < q (q=" + std::to_string(q) + ", x=" + std::to_string(x) + ")");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::domain, "delta must lie in (0, 1)");

  Stopwatch total;
  Stopwatch lap;
  ExperimentRecord rec;
  rec.q = q;
  rec.x = x;
  rec.c = c;
  rec.eps = eps;
  rec.delta = delta;
  rec.composite_mode = composite_mode;

  const ResonatorConfig cfg = build_weights(q, x, c, eps, composite_mode);
  rec.phi = cfg.modulus.phi;
  rec.omega = cfg.modulus.omega;
  rec.q_is_prime = cfg.modulus.is_prime();
  rec.y = cfg.y;
  rec.u = cfg.u;
  rec.prime_weight = 1.0 - cfg.damping;
  rec.warnings = cfg.warnings;
  if (!composite_mode && !rec.q_is_prime) rec.warnings.push_back("prime-mode weights on a composite modulus");

  rec.delta_exact = kNaN;
  rec.max_all = kNaN;
  rec.s1_re = rec.s1_im = rec.s2 = rec.normalization = kNaN;
  rec.bound_all = rec.bound_nonprincipal = kNaN;
  rec.delta_over_psi_shrunk = kNaN;
  if (rec.phi <= options.character_cap) {
    const CharacterGroup group(cfg.modulus);
    const CharacterSumProfile profile = all_char_sums(group, x, options.workers);
    rec.timings_ms["character_sums"] = lap.lap_ms();
    const DeltaMax d = delta_from_profile(group, profile);
    rec.has_delta = true;
    rec.delta_exact = d.value;
    rec.witness_flat = d.witness_flat;
    rec.witness_index = d.witness_index;

    const ResonanceReport rep = s1_s2(group, cfg, profile, options.workers);
    rec.timings_ms["resonator"] = lap.lap_ms();
    rec.has_resonance = true;
    rec.max_all = rep.max_all;
    rec.s1_re = rep.s1.real();
    rec.s1_im = rep.s1.imag();
    rec.s2 = rep.s2;
    rec.normalization = rep.normalization;
    rec.bound_all = rep.bound_all;
    rec.bound_nonprincipal = rep.bound_nonprincipal;
  } else {
    rec.warnings.push_back("phi(q) above the character cap; only the friable side was computed");
  }

  rec.friable_minorant = friable_minorant(cfg, options.enumeration_budget);
  const MinorantBound mb = minorant_lower_bound_psi(cfg, options.enumeration_budget);
  rec.psi_term = mb.psi_term;
  rec.correction = mb.correction;
  const auto y_floor = static_cast<std::uint64_t>(std::floor(cfg.y));
  rec.psi_xy = psi(x, y_floor);
  rec.psi_q_xy = psi_coprime(x, y_floor, q);
  rec.psi_shrunk = psi(x, static_cast<std::uint64_t>(std::floor(cfg.y * (1.0 - delta))));
  rec.timings_ms["friable"] = lap.lap_ms();

  const GrowthCheck growth = r_chi0_growth_check(cfg);
  rec.r_chi0_log = growth.log_r2;
  rec.r_chi0_budget = growth.budget;
  rec.r_chi0_ratio = growth.ratio;
  rec.r_chi0_reference = growth.reference;
  rec.supplementary_ratio = supplementary_ratio(q, x, rec.omega);

  const double minorant_tol = kChainTolerance * std::max(1.0, rec.friable_minorant);
  rec.minoration_ok = rec.friable_minorant >= rec.psi_term - rec.correction - minorant_tol;
  if (rec.has_resonance) {
    const double scale = std::max(1.0, rec.max_all);
    const double tol = kChainTolerance * scale;
    rec.resonance_ok = rec.bound_all <= rec.max_all + tol && rec.bound_nonprincipal <= rec.delta_exact + tol;
    rec.quotient_ok = rec.friable_minorant <= rec.bound_all + tol;
    rec.nonprincipal_dominates = rec.bound_nonprincipal >= rec.friable_minorant - tol;
    rec.exact_chain_ok = rec.resonance_ok && rec.quotient_ok && rec.minoration_ok;
    rec.chain_ok = rec.delta_exact >= rec.bound_nonprincipal - tol && rec.nonprincipal_dominates &&
                   rec.minoration_ok;
    if (rec.psi_shrunk > 0) rec.delta_over_psi_shrunk = rec.delta_exact / static_cast<double>(rec.psi_shrunk);
  }
  rec.timings_ms["total"] = total.lap_ms();
  return rec;
}

std::vector<std::uint64_t> log_spaced_primes(std::uint64_t lo, std::uint64_t hi, std::size_t count) {
  if (lo < 2 || hi < lo || count == 0) throw Error(Errc::domain, "log_spaced_primes needs 2 <= lo <= hi and count >= 1");
  std::vector<std::uint64_t> out;
  const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const auto target = static_cast<std::uint64_t>(std::llround(static_cast<double>(lo) * std::exp(ratio * t)));
    const std::uint64_t p = next_prime(target);
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  return out;
}

std::uint64_t x_for(const ExperimentSpec& spec, std::uint64_t q) {
  const double lq = std::log(static_cast<double>(q));
  switch (spec.x_rule) {
    case ExperimentSpec::XRule::sigma:
      if (!(spec.sigma > 0.0 && spec.sigma < 0.5)) throw Error(Errc::domain, "sigma must lie in (0, 1/2)");
      return static_cast<std::uint64_t>(std::floor(std::exp(std::pow(lq, spec.sigma))));
    case ExperimentSpec::XRule::power:
      if (!(spec.power > 1.0)) throw Error(Errc::domain, "power A must exceed 1");
      return static_cast<std::uint64_t>(std::floor(std::pow(lq, spec.power)));
    case ExperimentSpec::XRule::explicit_list:
      break;
  }
  throw Error(Errc::domain, "explicit x rule has no single x per q");
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> sweep_instances(const ExperimentSpec& spec) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t q : spec.q_list) {
    if (spec.x_rule == ExperimentSpec::XRule::explicit_list) {
      for (std::uint64_t x : spec.x_list) out.emplace_back(q, x);
    } else {
      out.emplace_back(q, x_for(spec, q));
    }
  }
  return out;
}

std::vector<ExperimentRecord> sweep(const ExperimentSpec& spec, const ExperimentOptions& options) {
  const auto instances = sweep_instances(spec);
  std::vector<ExperimentRecord> records(instances.size());
  const unsigned workers = options.workers == 0 ? default_workers() : options.workers;
  // Few large instances: parallelize inside each. Many: one instance per worker.
  const bool outer = instances.size() >= workers;
  ExperimentOptions inner = options;
  inner.workers = outer ? 1 : workers;
  parallel_for(instances.size(), outer ? workers : 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto [q, x] = instances[i];
      try {
        records[i] = verify_instance(q, x, spec.c, spec.eps, spec.delta, spec.composite_mode, inner);
      } catch (const std::exception& e) {
        ExperimentRecord& r = records[i];
        r.q = q;
        r.x = x;
        r.c = spec.c;
        r.eps = spec.eps;
        r.delta = spec.delta;
        r.composite_mode = spec.composite_mode;
        r.error = e.what();
      }
    }
  });
  return records;
}

ConjectureTable conjecture_probe(std::uint64_t q, std::uint64_t x, double a, std::size_t top_k,
                                 const ExperimentOptions& options) {
  if (q < 16) throw Error(Errc::domain, "conjecture probe needs q >= 16");
  if (x < 1) throw Error(Errc::domain, "conjecture probe needs x >= 1");
  const double qd = static_cast<double>(q);
  const double lx = std::log(static_cast<double>(x));
  ConjectureTable t;
  t.q = q;
  t.x = x;
  t.a = a;
  t.y = (std::log(qd) + lx * lx) * std::pow(iterated_log(2, qd), a);
  const auto y_floor = static_cast<std::uint64_t>(std::floor(t.y));

  const CharacterGroup group(q);
  if (group.size() > options.character_cap) throw Error(Errc::capacity, "phi(q) exceeds the character cap");
  const CharacterSumProfile profile = all_char_sums(group, x, options.workers);
  t.principal_sum = profile.sums[0].real();
  t.principal_friable = static_cast<double>(psi_coprime(x, y_floor, q));
  if (top_k == 0) return t;

  std::vector<std::uint64_t> order;
  for (std::uint64_t j = 1; j < profile.sums.size(); ++j) order.push_back(j);
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t l, std::uint64_t r) {
    return std::abs(profile.sums[l]) > std::abs(profile.sums[r]);
  });
  order.resize(std::min(order.size(), top_k));
  for (std::uint64_t j : order) {
    const DirichletCharacter chi(group, j);
    ConjectureRow row;
    row.flat = j;
    row.index = group.unflatten(j);
    row.char_sum = profile.sums[j];
    row.friable_sum = psi_twisted(x, y_floor, [&](std::uint64_t n) { return chi(n); }, options.enumeration_budget);
    row.difference = row.char_sum - row.friable_sum;
    t.rows.push_back(std::move(row));
  }
  return t;
}

LevelsTable levels_table(std::uint64_t q, std::uint64_t x, const ExperimentOptions& options) {
  if (q < 16) throw Error(Errc::domain, "levels table needs q >= 16");
  if (x < 3) throw Error(Errc::domain, "levels table needs x >= 3");
  const double qd = static_cast<double>(q);
  const double lq = std::log(qd);
  const double l2 = iterated_log(2, qd);
  LevelsTable t;
  t.q = q;
  t.x = x;
  const double e3 = std::exp(3.0);
  t.rows.push_back({"hough_corollary", 8.0 / e3 * lq});
  t.rows.push_back({"real_characters", lq / 3.0});
  t.rows.push_back({"hough_transition", lq * l2});
  t.rows.push_back({"theorem", theorem_y(x, q, 0.25)});
  const double sigma = iterated_log(2, static_cast<double>(x)) / l2;
  if (sigma > 0.0) t.rows.push_back({"corollary_sigma", level_sigma_range(q, sigma)});
  t.rows.push_back({"corollary_small_range", level_small_range(q)});

  double best = -1.0;
  for (auto& row : t.rows) {
    if (x <= options.enumeration_budget && row.y >= 1.0) {
      row.has_psi = true;
      row.psi = psi(x, static_cast<std::uint64_t>(std::floor(row.y)));
    }
    if (row.y > best) {
      best = row.y;
      t.largest = row.name;
    }
  }
  return t;
}

}  // namespace reslab
