#include "reslab/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "reslab/error.hpp"
#include "reslab/parallel.hpp"
#include "reslab/smooth.hpp"

namespace reslab {

namespace {

constexpr double kPi = std::numbers::pi;

/// Depth-first walk over n <= x built from primes[i] (ascending), passing
/// (n, q_n, Omega(n)). n = 1 comes first with weight 1.
template <typename Visit>
void for_each_weighted(std::uint64_t x, const std::vector<std::uint64_t>& primes,
                       const std::vector<double>& weights, Visit&& visit) {
  if (x < 1) return;
  struct Frame {
    std::uint64_t n;
    double w;
    std::size_t next;
    unsigned omega;
  };
  std::vector<Frame> stack{{1, 1.0, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    visit(f.n, f.w, f.omega);
    const std::uint64_t room = x / f.n;
    std::size_t end = f.next;
    while (end < primes.size() && primes[end] <= room) ++end;
    for (std::size_t i = end; i-- > f.next;) {
      stack.push_back({f.n * primes[i], f.w * weights[i], i, f.omega + 1});
    }
  }
}

struct ActiveSet {
  std::vector<std::uint64_t> primes;
  std::vector<double> weights;
  std::vector<double> deficits;
};

ActiveSet active_set(const ResonatorConfig& cfg) {
  ActiveSet s;
  for (std::size_t i : cfg.active_primes()) {
    s.primes.push_back(cfg.primes[i]);
    s.weights.push_back(cfg.weights[i]);
    s.deficits.push_back(cfg.deficits[i]);
  }
  return s;
}

void check_budget(std::uint64_t x, std::uint64_t budget) {
  if (x > budget) {
    throw Error(Errc::budget, "enumeration up to " + std::to_string(x) + " exceeds budget " +
                                  std::to_string(budget));
  }
}

// log(|1 - q e(t)|^2 / (1 - q)^2) = log1p(4 q sin^2(pi t) / (1 - q)^2).
double log_ratio_factor(double weight, double deficit, double turns) {
  const double s = std::sin(kPi * turns);
  return std::log1p(4.0 * weight * s * s / (deficit * deficit));
}

}  // namespace

double theorem_y(std::uint64_t x, std::uint64_t q, double c) {
  if (q < 16) throw Error(Errc::domain, "theorem level needs q >= 16");
  if (x < 3) throw Error(Errc::domain, "theorem level needs x >= 3");
  const double qd = static_cast<double>(q);
  const double l1 = std::log(qd);
  const double l2 = iterated_log(2, qd);
  const double l3 = iterated_log(3, qd);
  const double lx = iterated_log(2, static_cast<double>(x));
  return c * l1 * l2 / std::max(lx - l3, l3);
}

double level_sigma_range(std::uint64_t q, double sigma) {
  if (!(sigma > 0.0)) throw Error(Errc::domain, "sigma must be positive");
  return std::log(static_cast<double>(q)) / (2.0 * sigma);
}

double level_small_range(std::uint64_t q) {
  if (q < 16) throw Error(Errc::domain, "small-range level needs q >= 16");
  const double qd = static_cast<double>(q);
  return 0.5 * std::log(qd) * iterated_log(2, qd) / iterated_log(3, qd);
}

double ResonatorConfig::prime_weight(std::uint64_t p) const {
  auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p) return 0.0;
  return weights[static_cast<std::size_t>(it - primes.begin())];
}

std::vector<std::size_t> ResonatorConfig::active_primes() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (modulus.q % primes[i] != 0) idx.push_back(i);
  }
  return idx;
}

double ResonatorConfig::max_deficit() const {
  double m = 0.0;
  for (double d : deficits) m = std::max(m, d);
  return m;
}

ResonatorConfig config_at_level(std::uint64_t q, std::uint64_t x, double y, double eps,
                                bool composite_mode) {
  if (q < 3) throw Error(Errc::domain, "resonator needs q >= 3");
  if (x < 2) throw Error(Errc::domain, "resonator needs x >= 2");
  if (!(y >= 2.0)) throw Error(Errc::domain, "smoothness level y=" + std::to_string(y) + " is below 2");
  if (!(eps > 0.0)) throw Error(Errc::domain, "eps must be positive");

  ResonatorConfig cfg;
  cfg.modulus = Modulus(q);
  cfg.x = x;
  cfg.c = std::numeric_limits<double>::quiet_NaN();
  cfg.eps = eps;
  cfg.y = y;
  cfg.u = std::log(static_cast<double>(x)) / std::log(y);
  cfg.composite_mode = composite_mode;
  const double l2 = iterated_log(2, static_cast<double>(q));
  cfg.damping = 1.0 / (cfg.u * std::pow(l2, (composite_mode ? 2.0 : 1.0) + eps));
  if (!(cfg.damping > 0.0) || cfg.damping > 1.0) {
    throw Error(Errc::domain, "prime weight 1 - " + std::to_string(cfg.damping) + " leaves [0, 1)");
  }
  cfg.primes = primes_up_to(static_cast<std::uint64_t>(std::floor(y)));
  cfg.weights.assign(cfg.primes.size(), 1.0 - cfg.damping);
  cfg.deficits.assign(cfg.primes.size(), cfg.damping);
  if (cfg.modulus.is_prime() && cfg.modulus.q <= static_cast<std::uint64_t>(std::floor(y))) {
    cfg.warnings.push_back("prime modulus lies below the smoothness level");
  }
  return cfg;
}

ResonatorConfig build_weights(std::uint64_t q, std::uint64_t x, double c, double eps, bool composite_mode) {
  const double y = theorem_y(x, q, c);
  ResonatorConfig cfg = config_at_level(q, x, y, eps, composite_mode);
  cfg.c = c;
  const double c_max = composite_mode ? 1.0 / 6.0 : 0.25;
  if (!(c > 0.0 && c < c_max)) {
    cfg.warnings.push_back("c=" + std::to_string(c) + " outside (0, " + std::to_string(c_max) + ")");
  }
  return cfg;
}

double weight(std::uint64_t n, const ResonatorConfig& cfg) {
  if (n == 0) throw Error(Errc::domain, "weight is defined for n >= 1");
  double w = 1.0;
  for (const auto& [p, e] : factorize(n).pairs) {
    const double qp = cfg.prime_weight(p);
    if (qp == 0.0) return 0.0;
    for (unsigned i = 0; i < e; ++i) w *= qp;
  }
  return w;
}

ResonatorValue resonator_log(const DirichletCharacter& chi, const ResonatorConfig& cfg) {
  const CharacterGroup& group = chi.group();
  if (group.q() != cfg.modulus.q) throw Error(Errc::domain, "character and config disagree on q");
  ResonatorValue r;
  for (std::size_t i : cfg.active_primes()) {
    const double qp = cfg.weights[i];
    const double dp = cfg.deficits[i];
    if (dp <= 0.0) throw Error(Errc::pole, "resonator factor vanishes at p=" + std::to_string(cfg.primes[i]));
    const auto logs = group.dlog(cfg.primes[i]);
    const double t = group.phase(chi.index(), *logs);
    const double s = std::sin(kPi * t);
    // |1 - q e(t)|^2 = (1 - q)^2 + 4 q sin^2(pi t); Re(1 - q e(t)) = (1 - q) + 2 q sin^2(pi t).
    r.log_abs -= 0.5 * std::log(dp * dp + 4.0 * qp * s * s);
    r.arg -= std::atan2(-qp * std::sin(2.0 * kPi * t), dp + 2.0 * qp * s * s);
  }
  r.arg = std::remainder(r.arg, 2.0 * kPi);
  return r;
}

std::complex<double> resonator_value(const DirichletCharacter& chi, const ResonatorConfig& cfg) {
  return resonator_log(chi, cfg).value();
}

double log_r2_principal(const ResonatorConfig& cfg) {
  double acc = 0.0;
  for (std::size_t i : cfg.active_primes()) acc -= 2.0 * std::log(cfg.deficits[i]);
  return acc;
}

std::vector<double> normalized_log_r2(const CharacterGroup& group, const ResonatorConfig& cfg,
                                      unsigned workers) {
  if (group.q() != cfg.modulus.q) throw Error(Errc::domain, "group and config disagree on q");
  const ActiveSet active = active_set(cfg);
  std::vector<std::vector<std::uint64_t>> logs;
  for (std::uint64_t p : active.primes) logs.push_back(*group.dlog(p));

  const auto comps = group.components();
  std::vector<double> out(group.size(), 0.0);
  parallel_for(out.size(), workers, [&](std::size_t begin, std::size_t end) {
    if (begin >= end) return;
    std::vector<std::uint64_t> index = group.unflatten(begin);
    for (std::size_t j = begin; j < end; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < logs.size(); ++i) {
        acc -= log_ratio_factor(active.weights[i], active.deficits[i], group.phase(index, logs[i]));
      }
      out[j] = acc;
      for (std::size_t c = comps.size(); c-- > 0;) {
        if (++index[c] < comps[c].order) break;
        index[c] = 0;
      }
    }
  });
  return out;
}

namespace {

ResonanceReport summed_report(const ResonatorConfig& cfg, const CharacterSumProfile& profile,
                              const std::vector<double>& centered) {
  const std::size_t n = profile.sums.size();
  std::vector<double> w(n);
  std::vector<std::complex<double>> terms(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = j == 0 ? 1.0 : std::exp(centered[j]);
    terms[j] = profile.sums[j] * w[j];
  }
  ResonanceReport rep;
  rep.q = cfg.modulus.q;
  rep.x = profile.x;
  rep.c = cfg.c;
  rep.eps = cfg.eps;
  rep.y = cfg.y;
  rep.u = cfg.u;
  rep.composite_mode = cfg.composite_mode;
  rep.s1 = pairwise_sum(terms.data(), n);
  rep.s2 = pairwise_sum(w.data(), n);
  const double s1_abs = std::abs(rep.s1);
  rep.bound_all = s1_abs / rep.s2;
  rep.bound_nonprincipal = (s1_abs - profile.sums[0].real() * w[0]) / rep.s2;
  rep.delta_exact = profile.max_nonprincipal;
  rep.max_all = std::max(std::abs(profile.sums[0]), profile.max_nonprincipal);
  return rep;
}

void check_profile(const CharacterGroup& group, const ResonatorConfig& cfg, const CharacterSumProfile& profile) {
  if (profile.q != group.q() || profile.q != cfg.modulus.q || profile.sums.size() != group.size()) {
    throw Error(Errc::domain, "profile, group and config disagree on q");
  }
  if (profile.x != cfg.x) throw Error(Errc::domain, "profile and config disagree on x");
}

}  // namespace

ResonanceReport s1_s2(const CharacterGroup& group, const ResonatorConfig& cfg,
                      const CharacterSumProfile& profile, unsigned workers) {
  check_profile(group, cfg, profile);
  ResonanceReport rep = summed_report(cfg, profile, normalized_log_r2(group, cfg, workers));
  rep.normalization = log_r2_principal(cfg);
  return rep;
}

ResonanceReport s1_s2_from_log_r2(const CharacterGroup& group, const ResonatorConfig& cfg,
                                  const CharacterSumProfile& profile, std::vector<double> log_r2) {
  check_profile(group, cfg, profile);
  if (log_r2.size() != group.size()) throw Error(Errc::domain, "log|R|^2 vector must have phi(q) entries");
  const double base = log_r2[0];
  for (double& v : log_r2) v -= base;
  ResonanceReport rep = summed_report(cfg, profile, log_r2);
  rep.normalization = base;
  return rep;
}

double friable_minorant(const ResonatorConfig& cfg, std::uint64_t budget) {
  check_budget(cfg.x, budget);
  const ActiveSet active = active_set(cfg);
  double acc = 0.0;
  for_each_weighted(cfg.x, active.primes, active.weights,
                    [&](std::uint64_t, double w, unsigned) { acc += w; });
  return acc;
}

MinorantBound minorant_lower_bound_psi(const ResonatorConfig& cfg, std::uint64_t budget) {
  check_budget(cfg.x, budget);
  const auto y = static_cast<std::uint64_t>(std::floor(cfg.y));
  MinorantBound b;
  b.psi_term = static_cast<double>(psi_coprime(cfg.x, y, cfg.modulus.q));
  b.omega_sum = static_cast<double>(omega_sum_smooth_coprime(cfg.x, y, cfg.modulus.q, budget));
  b.correction = cfg.max_deficit() * b.omega_sum;
  return b;
}

GrowthCheck r_chi0_growth_check(const ResonatorConfig& cfg) {
  const double qd = static_cast<double>(cfg.modulus.q);
  GrowthCheck g;
  g.log_r2 = log_r2_principal(cfg);
  g.budget = 2.0 * (cfg.y / std::log(cfg.y)) * (std::log(cfg.u) + iterated_log(3, qd));
  g.ratio = g.log_r2 / std::log(qd);
  g.reference = (cfg.composite_mode ? 6.0 : 4.0) * cfg.c;
  return g;
}

TruncatedSeries truncated_series(const ResonatorConfig& cfg, std::uint64_t truncation, std::uint64_t budget) {
  check_budget(truncation, budget);
  const ActiveSet active = active_set(cfg);
  std::vector<std::pair<std::uint64_t, double>> items;
  for_each_weighted(truncation, active.primes, active.weights,
                    [&](std::uint64_t n, double w, unsigned) { items.emplace_back(n, w); });
  std::sort(items.begin(), items.end());
  TruncatedSeries s;
  for (const auto& [n, w] : items) {
    s.terms.push_back(n);
    s.weights.push_back(w);
  }
  return s;
}

double truncation_tail(const ResonatorConfig& cfg, const TruncatedSeries& series) {
  double total = 0.0;
  for (double w : series.weights) total += w;
  return std::exp(0.5 * log_r2_principal(cfg)) - total;
}

namespace {

// R_A(chi) for every chi, by flat index.
std::vector<cplx> truncated_transform(const CharacterGroup& group, const TruncatedSeries& series,
                                      unsigned workers) {
  std::vector<double> residues(group.q(), 0.0);
  for (std::size_t i = 0; i < series.terms.size(); ++i) residues[series.terms[i] % group.q()] += series.weights[i];
  std::vector<cplx> data = to_dlog_layout(group, residues);
  character_transform(group, data, workers);
  return data;
}

}  // namespace

OrthogonalityCheck orthogonality_identity_check(const CharacterGroup& group, const ResonatorConfig& cfg,
                                                std::uint64_t truncation, unsigned workers) {
  if (group.q() != cfg.modulus.q) throw Error(Errc::domain, "group and config disagree on q");
  const TruncatedSeries series = truncated_series(cfg, truncation);
  const std::vector<cplx> r = truncated_transform(group, series, workers);
  std::vector<double> norms(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) norms[j] = std::norm(r[j]);

  OrthogonalityCheck check;
  check.lhs = pairwise_sum(norms.data(), norms.size());

  // Pair up a and b directly within each residue class.
  const std::uint64_t q = group.q();
  std::vector<std::size_t> order(series.terms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series.terms[a] % q < series.terms[b] % q;
  });
  double pairs = 0.0;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    const std::uint64_t res = series.terms[order[lo]] % q;
    while (hi < order.size() && series.terms[order[hi]] % q == res) ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t k = lo; k < hi; ++k) pairs += series.weights[order[i]] * series.weights[order[k]];
    }
    lo = hi;
  }
  check.rhs = static_cast<double>(group.size()) * pairs;
  check.residual = std::abs(check.lhs - check.rhs);
  check.relative = check.residual / check.rhs;
  return check;
}

ConvolutionCheck convolution_s1_check(const CharacterGroup& group, const ResonatorConfig& cfg,
                                      std::uint64_t truncation, unsigned workers) {
  if (group.q() != cfg.modulus.q) throw Error(Errc::domain, "group and config disagree on q");
  const std::uint64_t q = group.q();
  const std::uint64_t x = cfg.x;
  const double phi = static_cast<double>(group.size());
  const TruncatedSeries series = truncated_series(cfg, truncation);

  const std::vector<cplx> r = truncated_transform(group, series, workers);
  std::vector<cplx> w(r.size());
  std::vector<double> w_real(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    w_real[j] = std::norm(r[j]);
    w[j] = w_real[j];
  }

  ConvolutionCheck check;
  const CharacterSumProfile profile = all_char_sums(group, x, workers);
  std::vector<cplx> terms(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) terms[j] = profile.sums[j] * w_real[j];
  check.lhs = pairwise_sum(terms.data(), terms.size());
  check.scale = pairwise_sum(w_real.data(), w_real.size());

  // Inner sums through the characters: I(n) = sum_chi chi(n) |R_A(chi)|^2.
  character_transform(group, w, workers);

  // Inner sums by residue pairing: phi * sum_a q_a B[n a mod q].
  std::vector<double> buckets(q, 0.0);
  for (std::size_t i = 0; i < series.terms.size(); ++i) buckets[series.terms[i] % q] += series.weights[i];
  std::vector<double> inner_pair(x + 1, 0.0);
  std::vector<double> rhs_terms;
  check.min_inner = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = 1; n <= x; ++n) {
    const auto pos = group.unit_position(n);
    if (!pos) continue;
    double acc = 0.0;
    const std::uint64_t nq = n % q;
    for (std::size_t i = 0; i < series.terms.size(); ++i) {
      acc += series.weights[i] * buckets[mul_mod(nq, series.terms[i] % q, q)];
    }
    inner_pair[n] = phi * acc;
    rhs_terms.push_back(inner_pair[n]);
    const double via_chars = w[*pos].real();
    check.min_inner = std::min(check.min_inner, via_chars);
    check.max_inner_mismatch = std::max(check.max_inner_mismatch, std::abs(via_chars - inner_pair[n]));
  }
  check.rhs = pairwise_sum(rhs_terms.data(), rhs_terms.size());
  check.residual = std::abs(check.lhs - check.rhs);
  check.relative = check.residual / check.rhs;

  // inner_n >= q_n * phi * sum_{a <= A, b <= A/n, a = b mod q} q_a q_b for friable n coprime to q.
  check.min_chain_slack = std::numeric_limits<double>::infinity();
  const ActiveSet active = active_set(cfg);
  std::vector<double> prefix(q, 0.0);
  for_each_weighted(x, active.primes, active.weights, [&](std::uint64_t n, double qn, unsigned) {
    const std::uint64_t limit = truncation / n;
    std::size_t count = 0;
    while (count < series.terms.size() && series.terms[count] <= limit) {
      prefix[series.terms[count] % q] += series.weights[count];
      ++count;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < series.terms.size(); ++i) acc += series.weights[i] * prefix[series.terms[i] % q];
    for (std::size_t i = 0; i < count; ++i) prefix[series.terms[i] % q] = 0.0;
    check.min_chain_slack = std::min(check.min_chain_slack, inner_pair[n] - qn * phi * acc);
  });
  return check;
}

}  // namespace reslab
