#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "reslab/arith.hpp"
#include "reslab/budget.hpp"
#include "reslab/characters.hpp"
#include "reslab/error.hpp"
#include "reslab/experiments.hpp"
#include "reslab/report.hpp"
#include "reslab/resonator.hpp"
#include "reslab/smooth.hpp"

namespace reslab::cli {

namespace {

using json = nlohmann::ordered_json;

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Flattens a JSON document into "key: value" lines for the text format.
void json_to_text(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "schema_version") continue;
      json_to_text(v, prefix.empty() ? k : prefix + "." + k, out);
    }
    return;
  }
  if (j.is_array()) {
    bool scalar = true;
    for (const auto& v : j) scalar = scalar && v.is_primitive();
    if (!scalar) {
      for (std::size_t i = 0; i < j.size(); ++i) json_to_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
      return;
    }
    out << prefix << ": [";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out << ", ";
      json_to_text(j[i], "", out);
    }
    out << "]\n";
    return;
  }
  if (!prefix.empty()) out << prefix << ": ";
  if (j.is_null()) {
    out << "nan";
  } else if (j.is_number_float()) {
    out << format_number(j.get<double>());
  } else if (j.is_string()) {
    out << j.get<std::string>();
  } else {
    out << j.dump();
  }
  if (!prefix.empty()) out << "\n";
}

std::string as_text(const std::string& json_doc) {
  std::ostringstream out;
  json_to_text(json::parse(json_doc), "", out);
  return out.str();
}

Format parse_format(const std::string& s, Format fallback) {
  if (s.empty()) return fallback;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return Format::text;
}

std::string index_string(const std::vector<std::uint64_t>& index) {
  std::string s = "(";
  for (std::size_t i = 0; i < index.size(); ++i) s += (i ? "," : "") + std::to_string(index[i]);
  return s + ")";
}

ExperimentOptions options_from(const CliConfig& cfg) {
  ExperimentOptions o;
  o.workers = cfg.workers;
  if (cfg.budget != 0) o.enumeration_budget = cfg.budget;
  return o;
}

std::uint64_t budget_from(const CliConfig& cfg) {
  return cfg.budget != 0 ? cfg.budget : default_enumeration_budget();
}

double c_from(const CliConfig& cfg) {
  if (cfg.c > 0.0) return cfg.c;
  return cfg.composite ? kDefaultCComposite : kDefaultCPrime;
}

void require_character_cap(const CharacterGroup& group) {
  if (group.size() > kDefaultCharacterCap) throw Error(Errc::capacity, "phi(q) exceeds the character cap");
}

std::string cmd_psi(const CliConfig& cfg, Format fmt) {
  if (fmt == Format::text && cfg.x_list.size() == 1 && cfg.y_list.size() == 1) {
    return std::to_string(psi(cfg.x_list[0], cfg.y_list[0])) + "\n";
  }
  const auto rows = psi_grid(cfg.x_list, cfg.y_list, cfg.workers);
  if (fmt == Format::json) return psi_grid_to_json(rows);
  if (fmt == Format::csv) return psi_grid_to_csv(rows);
  std::ostringstream out;
  for (const auto& r : rows) out << r.x << ' ' << r.y << ' ' << r.psi_exact << '\n';
  return out.str();
}

std::string cmd_psiq(const CliConfig& cfg, Format fmt) {
  const std::uint64_t v = psi_coprime(cfg.x, cfg.y, cfg.m);
  if (fmt == Format::json) {
    return dump(json{{"schema_version", kSchemaVersion}, {"x", cfg.x}, {"y", cfg.y}, {"m", cfg.m}, {"psi", v}});
  }
  if (fmt == Format::csv) {
    return "x,y,m,psi\n" + std::to_string(cfg.x) + "," + std::to_string(cfg.y) + "," + std::to_string(cfg.m) +
           "," + std::to_string(v) + "\n";
  }
  return std::to_string(v) + "\n";
}

std::string cmd_enumerate(const CliConfig& cfg, Format fmt) {
  const auto values = enumerate_smooth(cfg.x, cfg.y, budget_from(cfg));
  if (fmt == Format::json) {
    return dump(json{{"schema_version", kSchemaVersion},
                     {"x", cfg.x},
                     {"y", cfg.y},
                     {"count", values.size()},
                     {"values", values}});
  }
  std::ostringstream out;
  if (fmt == Format::csv) out << "n\n";
  for (auto n : values) out << n << '\n';
  return out.str();
}

std::string cmd_alpha(const CliConfig& cfg, Format fmt) {
  const SaddlePoint sp = saddle_alpha(cfg.x_real, cfg.y_real, cfg.tol);
  if (fmt == Format::json) {
    return dump(json{{"schema_version", kSchemaVersion},
                     {"x", cfg.x_real},
                     {"y", cfg.y_real},
                     {"alpha", num(sp.alpha)},
                     {"residual", num(sp.residual)},
                     {"iterations", sp.iterations}});
  }
  if (fmt == Format::csv) {
    return "x,y,alpha,residual,iterations\n" + format_number(cfg.x_real) + "," + format_number(cfg.y_real) + "," +
           format_number(sp.alpha) + "," + format_number(sp.residual) + "," + std::to_string(sp.iterations) + "\n";
  }
  return format_number(sp.alpha) + "\n";
}

std::string cmd_charsum(const CliConfig& cfg, Format fmt) {
  const CharacterGroup group(cfg.q);
  if (cfg.has_chi) {
    if (cfg.chi >= group.size()) throw Error(Errc::out_of_range, "--chi exceeds phi(q) - 1");
    const DirichletCharacter chi(group, cfg.chi);
    const cplx s = char_sum(chi, cfg.x);
    if (fmt == Format::json) {
      return dump(json{{"schema_version", kSchemaVersion},
                       {"q", cfg.q},
                       {"x", cfg.x},
                       {"char_index", cfg.chi},
                       {"index", group.unflatten(cfg.chi)},
                       {"re", num(s.real())},
                       {"im", num(s.imag())},
                       {"abs", num(std::abs(s))}});
    }
    if (fmt == Format::csv) {
      return "char_index,re,im,abs\n" + std::to_string(cfg.chi) + "," + format_number(s.real()) + "," +
             format_number(s.imag()) + "," + format_number(std::abs(s)) + "\n";
    }
    return format_number(s.real()) + " " + format_number(s.imag()) + "\n";
  }
  require_character_cap(group);
  const auto profile = all_char_sums(group, cfg.x, cfg.workers);
  if (fmt == Format::json) return profile_to_json(profile);
  if (fmt == Format::csv) return profile_to_csv(profile);
  std::ostringstream out;
  for (std::size_t j = 0; j < profile.sums.size(); ++j) {
    out << j << ' ' << format_number(profile.sums[j].real()) << ' ' << format_number(profile.sums[j].imag())
        << '\n';
  }
  return out.str();
}

std::string cmd_delta(const CliConfig& cfg, Format fmt) {
  const DeltaMax d = delta_max(cfg.x, cfg.q, cfg.workers);
  if (fmt == Format::json) {
    return dump(json{{"schema_version", kSchemaVersion},
                     {"q", cfg.q},
                     {"x", cfg.x},
                     {"delta", num(d.value)},
                     {"witness_flat", d.witness_flat},
                     {"witness_index", d.witness_index}});
  }
  if (fmt == Format::csv) {
    return "q,x,delta,witness_flat\n" + std::to_string(cfg.q) + "," + std::to_string(cfg.x) + "," +
           format_number(d.value) + "," + std::to_string(d.witness_flat) + "\n";
  }
  return format_number(d.value) + "\nwitness " + std::to_string(d.witness_flat) + " " +
         index_string(d.witness_index) + "\n";
}

std::string cmd_resonate(const CliConfig& cfg, Format fmt, std::ostream& err) {
  const ResonatorConfig rc = cfg.level_y > 0.0 ? config_at_level(cfg.q, cfg.x, cfg.level_y, cfg.eps, cfg.composite)
                                               : build_weights(cfg.q, cfg.x, c_from(cfg), cfg.eps, cfg.composite);
  if (cfg.verbose) {
    for (const auto& w : rc.warnings) err << "warning: " << w << '\n';
  }
  const CharacterGroup group(rc.modulus);
  require_character_cap(group);
  const auto profile = all_char_sums(group, cfg.x, cfg.workers);
  ResonanceReport report = s1_s2(group, rc, profile, cfg.workers);
  if (cfg.x <= budget_from(cfg)) {
    report.friable_minorant = friable_minorant(rc, budget_from(cfg));
    report.has_friable_minorant = true;
  }
  json j = json::parse(report_to_json(report));
  if (cfg.truncation > 0) {
    const auto ortho = orthogonality_identity_check(group, rc, cfg.truncation, cfg.workers);
    const auto conv = convolution_s1_check(group, rc, cfg.truncation, cfg.workers);
    j["truncation"] = cfg.truncation;
    j["orthogonality"] = json{{"lhs", num(ortho.lhs)},
                              {"rhs", num(ortho.rhs)},
                              {"residual", num(ortho.residual)},
                              {"relative", num(ortho.relative)}};
    j["convolution"] = json{{"lhs", json{{"re", num(conv.lhs.real())}, {"im", num(conv.lhs.imag())}}},
                            {"rhs", num(conv.rhs)},
                            {"residual", num(conv.residual)},
                            {"relative", num(conv.relative)},
                            {"scale", num(conv.scale)},
                            {"min_inner", num(conv.min_inner)},
                            {"max_inner_mismatch", num(conv.max_inner_mismatch)},
                            {"min_chain_slack", num(conv.min_chain_slack)}};
  }
  if (fmt == Format::json) return dump(j);
  if (fmt == Format::csv) throw Error(Errc::usage, "resonate supports text and json output");
  return as_text(j.dump());
}

std::string cmd_verify(const CliConfig& cfg, Format fmt, std::ostream& err) {
  const ExperimentRecord rec =
      verify_instance(cfg.q, cfg.x, c_from(cfg), cfg.eps, cfg.delta, cfg.composite, options_from(cfg));
  if (cfg.verbose) {
    for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
    for (const auto& [k, v] : rec.timings_ms) err << "timing " << k << ' ' << format_number(v) << " ms\n";
  }
  if (fmt == Format::csv) return records_to_csv({rec});
  const std::string doc = record_to_json(rec, cfg.timings);
  return fmt == Format::json ? doc : as_text(doc);
}

std::string cmd_sweep(const CliConfig& cfg, Format fmt, std::ostream& err) {
  ExperimentSpec spec;
  spec.q_list = cfg.q_list;
  if (!cfg.q_range.empty()) {
    if (cfg.q_range.size() != 3) throw Error(Errc::usage, "--q-range expects lo,hi,count");
    const auto extra = log_spaced_primes(cfg.q_range[0], cfg.q_range[1], cfg.q_range[2]);
    spec.q_list.insert(spec.q_list.end(), extra.begin(), extra.end());
  }
  if (spec.q_list.empty()) throw Error(Errc::usage, "sweep needs --q or --q-range");
  if (!cfg.x_list.empty()) {
    spec.x_rule = ExperimentSpec::XRule::explicit_list;
    spec.x_list = cfg.x_list;
  } else if (cfg.power > 0.0) {
    spec.x_rule = ExperimentSpec::XRule::power;
    spec.power = cfg.power;
  } else {
    spec.x_rule = ExperimentSpec::XRule::sigma;
    if (cfg.sigma > 0.0) spec.sigma = cfg.sigma;
  }
  spec.c = c_from(cfg);
  spec.eps = cfg.eps;
  spec.delta = cfg.delta;
  spec.composite_mode = cfg.composite;
  const auto records = sweep(spec, options_from(cfg));
  if (cfg.verbose) {
    for (const auto& r : records) {
      if (!r.error.empty()) err << "instance q=" << r.q << " x=" << r.x << " failed: " << r.error << '\n';
    }
  }
  if (fmt == Format::json) return records_to_json(records, cfg.timings);
  return records_to_csv(records);
}

std::string cmd_conjecture(const CliConfig& cfg, Format fmt) {
  const auto table = conjecture_probe(cfg.q, cfg.x, cfg.a, cfg.top, options_from(cfg));
  if (fmt == Format::csv) return conjecture_to_csv(table);
  const std::string doc = conjecture_to_json(table);
  return fmt == Format::json ? doc : as_text(doc);
}

std::string cmd_levels(const CliConfig& cfg, Format fmt) {
  const auto table = levels_table(cfg.q, cfg.x, options_from(cfg));
  if (fmt == Format::csv) return levels_to_csv(table);
  const std::string doc = levels_to_json(table);
  return fmt == Format::json ? doc : as_text(doc);
}

CLI::Validator open_interval(double lo, double hi) {
  return CLI::Validator(
      [lo, hi](std::string& s) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(s, v) || !(v > lo && v < hi)) {
          return "value " + s + " not in (" + format_number(lo) + ", " + format_number(hi) + ")";
        }
        return {};
      },
      "in (" + format_number(lo) + ", " + format_number(hi) + ")");
}

void add_common(CLI::App* sub, CliConfig& cfg) {
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  sub->add_option("--output,-o", cfg.output, "Write the report to this file instead of stdout");
  sub->add_option("--workers", cfg.workers, "Worker threads (0 = logical cores)");
  sub->add_option("--budget", cfg.budget, "Enumeration budget (default: RESONATOR_LAB_BUDGET or 1e7)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--verbose,-v", cfg.verbose, "Warnings and timings on stderr");
}

void add_q(CLI::App* sub, CliConfig& cfg) {
  sub->add_option("--q", cfg.q, "Modulus")->required()->check(CLI::Range(std::uint64_t{3}, std::numeric_limits<std::uint64_t>::max()));
}

void add_x(CLI::App* sub, CliConfig& cfg) {
  sub->add_option("--x", cfg.x, "Length of the sum")->required()->check(CLI::PositiveNumber);
}

void add_resonator_params(CLI::App* sub, CliConfig& cfg) {
  sub->add_option("--c", cfg.c, "Level constant (default 0.24, or 0.16 with --composite)")->check(open_interval(0.0, 1.0));
  sub->add_option("--eps", cfg.eps, "Damping exponent epsilon")->check(CLI::PositiveNumber);
  sub->add_flag("--composite", cfg.composite, "Composite-modulus weights");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Resonance-method experiments on Dirichlet character sums", "reslab"};
  app.require_subcommand(1);

  auto* s_psi = app.add_subcommand("psi", "Count y-friable integers up to x; lists give a grid");
  s_psi->add_option("--x", cfg.x_list, "x (comma-separated for a grid)")->required()->delimiter(',');
  s_psi->add_option("--y", cfg.y_list, "y (comma-separated for a grid)")->required()->delimiter(',');

  auto* s_psiq = app.add_subcommand("psiq", "Count y-friable integers up to x coprime to m");
  s_psiq->add_option("--x", cfg.x, "x")->required();
  s_psiq->add_option("--y", cfg.y, "y")->required();
  s_psiq->add_option("--m", cfg.m, "m")->required()->check(CLI::PositiveNumber);

  auto* s_enum = app.add_subcommand("enumerate", "List the y-friable integers up to x");
  s_enum->add_option("--x", cfg.x, "x")->required();
  s_enum->add_option("--y", cfg.y, "y")->required();

  auto* s_alpha = app.add_subcommand("alpha", "Saddle point alpha(x, y)");
  s_alpha->add_option("--x", cfg.x_real, "x")->required()->check(CLI::Range(2.0, 1e300));
  s_alpha->add_option("--y", cfg.y_real, "y")->required()->check(CLI::Range(2.0, 1e300));
  s_alpha->add_option("--tol", cfg.tol, "Absolute residual tolerance (default 1e-12 log x)")->check(CLI::NonNegativeNumber);

  auto* s_charsum = app.add_subcommand("charsum", "S_chi(x) for one character or all of them");
  add_q(s_charsum, cfg);
  add_x(s_charsum, cfg);
  auto* chi_opt = s_charsum->add_option("--chi", cfg.chi, "Flat character index (default: all characters)");

  auto* s_delta = app.add_subcommand("delta", "Largest non-principal character sum and its witness");
  add_q(s_delta, cfg);
  add_x(s_delta, cfg);

  auto* s_res = app.add_subcommand("resonate", "Resonator moments S1, S2 and the resonance bounds");
  add_q(s_res, cfg);
  add_x(s_res, cfg);
  add_resonator_params(s_res, cfg);
  s_res->add_option("--y", cfg.level_y, "Explicit smoothness level instead of the theorem level")
      ->check(CLI::Range(2.0, 1e300));
  s_res->add_option("--truncation,--A", cfg.truncation, "Also run the orthogonality checks with this truncation");

  auto* s_verify = app.add_subcommand("verify", "Full inequality chain for one instance");
  add_q(s_verify, cfg);
  add_x(s_verify, cfg);
  add_resonator_params(s_verify, cfg);
  s_verify->add_option("--delta", cfg.delta, "Shrink factor for Psi(x, y(1 - delta))")->check(open_interval(0.0, 1.0));
  s_verify->add_flag("--timings", cfg.timings, "Include stage timings in the JSON record");

  auto* s_sweep = app.add_subcommand("sweep", "verify over a list of moduli");
  s_sweep->add_option("--q", cfg.q_list, "Moduli, comma-separated")->delimiter(',');
  s_sweep->add_option("--q-range", cfg.q_range, "lo,hi,count: log-spaced primes")->delimiter(',');
  auto* x_opt = s_sweep->add_option("--x", cfg.x_list, "Explicit x values, comma-separated")->delimiter(',');
  auto* sigma_opt = s_sweep->add_option("--sigma", cfg.sigma, "log x = (log q)^sigma")->check(open_interval(0.0, 0.5));
  auto* power_opt = s_sweep->add_option("--power", cfg.power, "x = (log q)^power")->check(CLI::Range(1.0, 1e9));
  x_opt->excludes(sigma_opt)->excludes(power_opt);
  sigma_opt->excludes(power_opt);
  add_resonator_params(s_sweep, cfg);
  s_sweep->add_option("--delta", cfg.delta, "Shrink factor for Psi(x, y(1 - delta))")->check(open_interval(0.0, 1.0));
  s_sweep->add_flag("--timings", cfg.timings, "Include stage timings in JSON records");

  auto* s_conj = app.add_subcommand("conjecture", "Character sums against friable sums at the conjectured level");
  add_q(s_conj, cfg);
  add_x(s_conj, cfg);
  s_conj->add_option("--A", cfg.a, "Exponent A of (log log q)^A")->check(CLI::NonNegativeNumber);
  s_conj->add_option("--top", cfg.top, "Number of characters to report");

  auto* s_levels = app.add_subcommand("levels", "Smoothness levels and Psi(x, y) at each");
  add_q(s_levels, cfg);
  add_x(s_levels, cfg);

  for (auto* sub : app.get_subcommands({})) add_common(sub, cfg);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << to_string(Errc::usage) << ": " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  cfg.has_chi = chi_opt->count() > 0;

  const bool tabular = cfg.subcommand == "sweep";
  const bool structured = cfg.subcommand == "verify" || cfg.subcommand == "conjecture" ||
                          cfg.subcommand == "levels" || cfg.subcommand == "resonate";
  const Format fmt = parse_format(cfg.format, tabular ? Format::csv : structured ? Format::json : Format::text);

  try {
    std::string report;
    const std::string& name = cfg.subcommand;
    if (name == "psi") {
      report = cmd_psi(cfg, fmt);
    } else if (name == "psiq") {
      report = cmd_psiq(cfg, fmt);
    } else if (name == "enumerate") {
      report = cmd_enumerate(cfg, fmt);
    } else if (name == "alpha") {
      report = cmd_alpha(cfg, fmt);
    } else if (name == "charsum") {
      report = cmd_charsum(cfg, fmt);
    } else if (name == "delta") {
      report = cmd_delta(cfg, fmt);
    } else if (name == "resonate") {
      report = cmd_resonate(cfg, fmt, err);
    } else if (name == "verify") {
      report = cmd_verify(cfg, fmt, err);
    } else if (name == "sweep") {
      report = cmd_sweep(cfg, fmt, err);
    } else if (name == "conjecture") {
      report = cmd_conjecture(cfg, fmt);
    } else {
      report = cmd_levels(cfg, fmt);
    }

    if (cfg.output.empty()) {
      out << report;
      out.flush();
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw Error(Errc::io, "cannot open " + cfg.output);
      file << report;
      if (!file) throw Error(Errc::io, "write failed for " + cfg.output);
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == Errc::usage ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace reslab::cli
