// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "reslab/characters.hpp"
#include "reslab/experiments.hpp"
#include "reslab/parallel.hpp"
#include "reslab/report.hpp"
#include "reslab/resonator.hpp"
#include "reslab/smooth.hpp"

using namespace reslab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- shared instance grids ------------------------------------------------

struct GridInstance {
  std::uint64_t q, x;
  double c;
};

std::vector<GridInstance> resonance_grid() {
  std::vector<GridInstance> grid;
  for (std::uint64_t q : log_spaced_primes(1000, 100'000, 30)) {
    const double qd = static_cast<double>(q);
    for (double e : {0.3, 0.5}) {
      const auto x = static_cast<std::uint64_t>(std::floor(std::pow(qd, e)));
      for (double c : {0.1, 0.24}) grid.push_back({q, x, c});
    }
  }
  return grid;
}

std::vector<ExperimentRecord> run_grid(const std::vector<GridInstance>& grid, unsigned workers) {
  std::vector<ExperimentRecord> records(grid.size());
  ExperimentOptions inner;
  inner.workers = 1;
  parallel_for(grid.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& g = grid[i];
      try {
        records[i] = verify_instance(g.q, g.x, g.c, 0.1, 0.05, false, inner);
      } catch (const std::exception& e) {
        records[i].q = g.q;
        records[i].x = g.x;
        records[i].c = g.c;
        records[i].error = e.what();
      }
    }
  });
  return records;
}

ExperimentRecord run_end_to_end(unsigned workers) {
  ExperimentOptions o;
  o.workers = workers;
  return verify_instance(99991, 1000, 0.24, 0.1, 0.05, false, o);
}

// At least four workers so the determinism rerun exercises the threaded paths.
const unsigned kWorkers = std::max(default_workers(), 4u);

// ---- criteria -------------------------------------------------------------

Outcome psi_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const auto x = static_cast<std::uint64_t>(std::exp(unit(rng) * std::log(1e5)));
    const std::uint64_t xx = std::max<std::uint64_t>(x, 2);
    const auto y = static_cast<std::uint64_t>(std::exp(std::log(2.0) + unit(rng) * std::log(xx / 2.0)));
    const std::uint64_t yy = std::clamp<std::uint64_t>(y, 2, xx);
    if (psi(xx, yy) != enumerate_smooth(xx, yy).size()) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0,
          std::to_string(500 - mismatches) + "/500 agree, " + fmt("%.2f s", secs)};
}

Outcome character_sum_oracle() {
  const auto t0 = Clock::now();
  double worst_ratio = 0.0;
  for (std::uint64_t q : {101ULL, 997ULL, 7919ULL}) {
    const CharacterGroup g(q);
    for (std::uint64_t x : {q / 2, q - 1}) {
      const auto profile = all_char_sums(g, x, kWorkers);
      double err = 0.0;
      for (std::uint64_t f = 0; f < g.size(); ++f) {
        const auto idx = g.unflatten(f);
        cplx s = 0.0;
        for (std::uint64_t n = 1; n <= x; ++n) s += g.value(idx, n);
        err = std::max(err, std::abs(profile.sums[f] - s));
      }
      worst_ratio = std::max(worst_ratio, err / std::sqrt(static_cast<double>(q)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst_ratio <= 1e-8 && secs < 30.0,
          "max err / sqrt(q) = " + fmt("%.3e", worst_ratio) + ", " + fmt("%.2f s", secs)};
}

Outcome resonance_inequality(const std::vector<ExperimentRecord>& records, double secs) {
  int violations = 0, errors = 0;
  double worst = -1e300;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    const double tol = 1e-9 * std::max(1.0, r.delta_exact);
    if (!(r.bound_nonprincipal <= r.delta_exact + tol)) ++violations;
    worst = std::max(worst, r.bound_nonprincipal / std::max(r.delta_exact, 1e-300));
  }
  return {violations == 0 && errors == 0 && secs < 300.0,
          std::to_string(records.size()) + " instances, " + std::to_string(violations) + " violations, " +
              std::to_string(errors) + " errors, max bound/delta = " + fmt("%.4f", worst) + ", " +
              fmt("%.2f s", secs)};
}

Outcome minorant_chain(const std::vector<ExperimentRecord>& records) {
  int quotient = 0, minoration = 0, errors = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    const double scale = std::max(1.0, r.max_all);
    if (!(r.friable_minorant <= r.bound_all + 1e-9 * scale)) ++quotient;
    const double slack = 1e-12 * std::max(1.0, r.psi_term);
    if (!(r.friable_minorant >= r.psi_term - r.correction - slack)) ++minoration;
    if (r.psi_term != static_cast<double>(r.psi_xy)) ++minoration;  // prime q > x: Psi_q = Psi
  }
  return {quotient == 0 && minoration == 0 && errors == 0,
          std::to_string(quotient) + " quotient and " + std::to_string(minoration) +
              " minoration violations over " + std::to_string(records.size()) + " instances"};
}

Outcome orthogonality_identities() {
  const auto t0 = Clock::now();
  struct Case {
    std::uint64_t q;
    ResonatorConfig cfg;
  };
  const std::vector<Case> cases{
      {101, build_weights(101, 10, 0.24, 0.1)},
      {101, config_at_level(101, 20, 20.0, 0.1)},
      {997, build_weights(997, 50, 0.2, 0.1)},
      {997, config_at_level(997, 300, 20.0, 0.1)},
  };
  double worst_rel = 0.0, worst_inner = 0.0;
  for (const auto& c : cases) {
    const CharacterGroup g(c.q);
    const auto ortho = orthogonality_identity_check(g, c.cfg, 10'000, kWorkers);
    const auto conv = convolution_s1_check(g, c.cfg, 10'000, kWorkers);
    worst_rel = std::max({worst_rel, ortho.relative, conv.relative});
    worst_inner = std::min(worst_inner, conv.min_inner / conv.scale);
  }
  const double secs = seconds_since(t0);
  return {worst_rel <= 1e-8 && worst_inner >= -1e-12 && secs < 120.0,
          "max relative residual " + fmt("%.3e", worst_rel) + ", min inner / scale " + fmt("%.3e", worst_inner) +
              ", " + fmt("%.2f s", secs)};
}

Outcome average_omega() {
  double worst = 0.0;
  bool finite = true;
  for (std::uint64_t x : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
    for (std::uint64_t y : {20ULL, 50ULL, 100ULL, 300ULL}) {
      const double u = std::log(static_cast<double>(x)) / std::log(static_cast<double>(y));
      const double ratio = static_cast<double>(omega_sum_smooth(x, y)) /
                           (static_cast<double>(psi(x, y)) * (u + std::log(std::log(static_cast<double>(y)))));
      finite = finite && std::isfinite(ratio);
      worst = std::max(worst, ratio);
    }
  }
  return {finite && worst <= 10.0, "max ratio " + fmt("%.4f", worst)};
}

Outcome comparison_consistency() {
  const std::uint64_t x = 1'000'000;
  const double y = 100.0;
  const double u = std::log(static_cast<double>(x)) / std::log(y);
  const double base = static_cast<double>(psi(x, 100));
  std::vector<double> exact;
  bool signs = true;
  double worst_err = 0.0;
  for (double kappa : {-0.2, -0.1, 0.1, 0.2}) {
    const auto yk = static_cast<std::uint64_t>(std::floor(std::exp(kappa) * y));
    const double e = std::log(static_cast<double>(psi(x, yk)) / base);
    const double p = comparaison_predicted_logratio(static_cast<double>(x), y, kappa);
    signs = signs && ((e > 0) == (p > 0)) && e != 0.0;
    worst_err = std::max(worst_err, std::abs(e - p) / (3.0 / std::log(u) * std::abs(p)));
    exact.push_back(e);
  }
  const bool monotone = std::is_sorted(exact.begin(), exact.end()) &&
                        std::adjacent_find(exact.begin(), exact.end()) == exact.end();
  return {signs && monotone, std::string("sign agreement ") + (signs ? "yes" : "no") + ", monotone " +
                                 (monotone ? "yes" : "no") + ", max |exact - predicted| / ((3/log u)|predicted|) = " +
                                 fmt("%.3f", worst_err) + " (reported)"};
}

Outcome saddle_points() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_res = 0.0, worst_diff = 0.0;
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const double x = std::exp(std::log(10.0) + unit(rng) * (std::log(1e15) - std::log(10.0)));
    const double y = std::exp(std::log(2.0) + unit(rng) * (std::log(std::min(x, 1e5)) - std::log(2.0)));
    const SaddlePoint sp = saddle_alpha(x, y);
    const auto primes = oracle::primes_by_trial(y);
    const double res = std::abs(oracle::saddle_lhs(sp.alpha, primes) - std::log(x)) / std::log(x);
    const double diff = std::abs(sp.alpha - oracle::saddle_bisection(x, primes));
    if (!(std::abs(sp.residual) <= 1e-10 * std::log(x)) || !(diff <= 1e-8)) ++bad;
    worst_res = std::max(worst_res, res);
    worst_diff = std::max(worst_diff, diff);
  }
  return {bad == 0, "50 points, " + std::to_string(bad) + " failures, max residual / log x " +
                        fmt("%.2e", worst_res) + ", max |alpha - bisection| " + fmt("%.2e", worst_diff)};
}

Outcome end_to_end(const ExperimentRecord& r, double secs) {
  return {r.error.empty() && r.chain_ok && secs < 120.0,
          std::string("chain_ok ") + (r.chain_ok ? "true" : "false") + ", delta_exact " +
              format_number(r.delta_exact) + ", Psi(x, 0.95 y) " + std::to_string(r.psi_shrunk) + ", ratio " +
              format_number(r.delta_over_psi_shrunk) + " (reported), " + fmt("%.2f s", secs)};
}

Outcome determinism(const std::vector<GridInstance>& grid, const std::string& grid_report,
                    const std::string& e2e_report) {
  const std::string again_grid = records_to_json(run_grid(grid, kWorkers));
  const std::string again_e2e = record_to_json(run_end_to_end(kWorkers));
  const bool same_grid = again_grid == grid_report;
  const bool same_e2e = again_e2e == e2e_report;
  return {same_grid && same_e2e, std::string("grid report ") + (same_grid ? "identical" : "DIFFERS") +
                                     ", end-to-end report " + (same_e2e ? "identical" : "DIFFERS") + " at " +
                                     std::to_string(kWorkers) + " workers"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    try {
      report(id, name, fn());
    } catch (const std::exception& e) {
      report(id, name, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "psi oracle equivalence", psi_oracle);
  guarded(2, "character-sum oracle equivalence", character_sum_oracle);

  const auto grid = resonance_grid();
  std::vector<ExperimentRecord> records;
  double grid_secs = 0.0;
  {
    const auto t0 = Clock::now();
    records = run_grid(grid, kWorkers);
    grid_secs = seconds_since(t0);
  }
  guarded(3, "resonance inequality", [&] { return resonance_inequality(records, grid_secs); });
  guarded(4, "friable minorant chain", [&] { return minorant_chain(records); });
  guarded(5, "orthogonality identities", orthogonality_identities);
  guarded(6, "average Omega constant", average_omega);
  guarded(7, "comparison lemma consistency", comparison_consistency);
  guarded(8, "saddle point", saddle_points);

  ExperimentRecord e2e;
  double e2e_secs = 0.0;
  guarded(9, "end-to-end instance", [&] {
    const auto t0 = Clock::now();
    e2e = run_end_to_end(kWorkers);
    e2e_secs = seconds_since(t0);
    return end_to_end(e2e, e2e_secs);
  });
  guarded(10, "determinism", [&] {
    return determinism(grid, records_to_json(records), record_to_json(e2e));
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
