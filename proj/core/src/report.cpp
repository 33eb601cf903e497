#include "reslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace reslab {

namespace {

using json = nlohmann::ordered_json;

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json cnum(std::complex<double> z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json record_json(const ExperimentRecord& r, bool include_timings) {
  json j;
  j["q"] = r.q;
  j["x"] = r.x;
  j["c"] = num(r.c);
  j["eps"] = num(r.eps);
  j["delta"] = num(r.delta);
  j["composite_mode"] = r.composite_mode;
  if (!r.error.empty()) {
    j["error"] = r.error;
    return j;
  }
  j["phi"] = r.phi;
  j["omega"] = r.omega;
  j["q_is_prime"] = r.q_is_prime;
  j["y"] = num(r.y);
  j["u"] = num(r.u);
  j["prime_weight"] = num(r.prime_weight);
  j["delta_exact"] = r.has_delta ? num(r.delta_exact) : json(nullptr);
  j["witness_flat"] = r.has_delta ? json(r.witness_flat) : json(nullptr);
  j["witness_index"] = r.witness_index;
  j["max_all"] = num(r.max_all);
  j["s1"] = json{{"re", num(r.s1_re)}, {"im", num(r.s1_im)}};
  j["s2"] = num(r.s2);
  j["normalization"] = num(r.normalization);
  j["bound_all"] = num(r.bound_all);
  j["bound_nonprincipal"] = num(r.bound_nonprincipal);
  j["friable_minorant"] = num(r.friable_minorant);
  j["psi_term"] = num(r.psi_term);
  j["correction"] = num(r.correction);
  j["psi_xy"] = r.psi_xy;
  j["psi_q_xy"] = r.psi_q_xy;
  j["psi_shrunk"] = r.psi_shrunk;
  j["delta_over_psi_shrunk"] = num(r.delta_over_psi_shrunk);
  j["r_chi0"] = json{{"log_r2", num(r.r_chi0_log)},
                     {"budget", num(r.r_chi0_budget)},
                     {"ratio", num(r.r_chi0_ratio)},
                     {"reference", num(r.r_chi0_reference)}};
  j["supplementary_ratio"] = num(r.supplementary_ratio);
  j["flags"] = json{{"resonance_ok", r.resonance_ok},
                    {"quotient_ok", r.quotient_ok},
                    {"minoration_ok", r.minoration_ok},
                    {"nonprincipal_dominates", r.nonprincipal_dominates},
                    {"exact_chain_ok", r.exact_chain_ok}};
  j["chain_ok"] = r.chain_ok;
  j["warnings"] = r.warnings;
  if (include_timings) {
    json t = json::object();
    for (const auto& [k, v] : r.timings_ms) t[k] = num(v);
    j["timings_ms"] = t;
  }
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string profile_to_csv(const CharacterSumProfile& profile) {
  std::ostringstream out;
  out << "char_index,re,im,abs\n";
  for (std::size_t j = 0; j < profile.sums.size(); ++j) {
    const auto z = profile.sums[j];
    out << j << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << ','
        << format_number(std::abs(z)) << '\n';
  }
  return out.str();
}

std::string profile_to_json(const CharacterSumProfile& profile) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["q"] = profile.q;
  j["x"] = profile.x;
  j["component_orders"] = profile.dims;
  j["argmax_nonprincipal"] = profile.argmax_nonprincipal;
  j["max_nonprincipal"] = num(profile.max_nonprincipal);
  json sums = json::array();
  for (std::size_t i = 0; i < profile.sums.size(); ++i) {
    const auto z = profile.sums[i];
    sums.push_back(json{{"char_index", i}, {"re", num(z.real())}, {"im", num(z.imag())}, {"abs", num(std::abs(z))}});
  }
  j["sums"] = std::move(sums);
  return dump(j);
}

std::string report_to_json(const ResonanceReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["q"] = r.q;
  j["x"] = r.x;
  j["c"] = num(r.c);
  j["eps"] = num(r.eps);
  j["y"] = num(r.y);
  j["u"] = num(r.u);
  j["composite_mode"] = r.composite_mode;
  j["normalization"] = num(r.normalization);
  j["s1"] = cnum(r.s1);
  j["s2"] = num(r.s2);
  j["bound_all"] = num(r.bound_all);
  j["bound_nonprincipal"] = num(r.bound_nonprincipal);
  j["max_all"] = num(r.max_all);
  j["delta_exact"] = num(r.delta_exact);
  j["friable_minorant"] = r.has_friable_minorant ? num(r.friable_minorant) : json(nullptr);
  return dump(j);
}

std::string record_to_json(const ExperimentRecord& record, bool include_timings) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j.update(record_json(record, include_timings));
  return dump(j);
}

std::string records_to_json(const std::vector<ExperimentRecord>& records, bool include_timings) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_json(r, include_timings));
  j["records"] = std::move(arr);
  return dump(j);
}

std::string records_csv_header() {
  return "q,x,c,eps,delta,composite_mode,phi,omega,q_is_prime,y,u,prime_weight,delta_exact,witness_flat,"
         "max_all,s1_re,s1_im,s2,normalization,bound_all,bound_nonprincipal,friable_minorant,psi_term,"
         "correction,psi_xy,psi_q_xy,psi_shrunk,delta_over_psi_shrunk,r_chi0_log,r_chi0_budget,r_chi0_ratio,"
         "r_chi0_reference,supplementary_ratio,resonance_ok,quotient_ok,minoration_ok,"
         "nonprincipal_dominates,exact_chain_ok,chain_ok,error";
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << records_csv_header() << '\n';
  auto f = [](double v) { return format_number(v); };
  auto b = [](bool v) { return v ? "true" : "false"; };
  for (const auto& r : records) {
    out << r.q << ',' << r.x << ',' << f(r.c) << ',' << f(r.eps) << ',' << f(r.delta) << ','
        << b(r.composite_mode) << ',' << r.phi << ',' << r.omega << ',' << b(r.q_is_prime) << ',' << f(r.y)
        << ',' << f(r.u) << ',' << f(r.prime_weight) << ',' << f(r.delta_exact) << ','
        << (r.has_delta ? std::to_string(r.witness_flat) : std::string()) << ',' << f(r.max_all) << ','
        << f(r.s1_re) << ',' << f(r.s1_im) << ',' << f(r.s2) << ',' << f(r.normalization) << ','
        << f(r.bound_all) << ',' << f(r.bound_nonprincipal) << ',' << f(r.friable_minorant) << ','
        << f(r.psi_term) << ',' << f(r.correction) << ',' << r.psi_xy << ',' << r.psi_q_xy << ','
        << r.psi_shrunk << ',' << f(r.delta_over_psi_shrunk) << ',' << f(r.r_chi0_log) << ','
        << f(r.r_chi0_budget) << ',' << f(r.r_chi0_ratio) << ',' << f(r.r_chi0_reference) << ','
        << f(r.supplementary_ratio) << ',' << b(r.resonance_ok) << ',' << b(r.quotient_ok) << ','
        << b(r.minoration_ok) << ',' << b(r.nonprincipal_dominates) << ',' << b(r.exact_chain_ok) << ','
        << b(r.chain_ok) << ',' << csv_escape(r.error) << '\n';
  }
  return out.str();
}

std::string psi_grid_to_csv(const std::vector<PsiGridRow>& rows) {
  std::ostringstream out;
  out << "x,y,u,psi_exact,psi_estimate,ratio\n";
  for (const auto& r : rows) {
    out << r.x << ',' << r.y << ',' << format_number(r.u) << ',' << r.psi_exact << ','
        << format_number(r.psi_estimate) << ',' << format_number(r.ratio) << '\n';
  }
  return out.str();
}

std::string psi_grid_to_json(const std::vector<PsiGridRow>& rows) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back(json{{"x", r.x},
                       {"y", r.y},
                       {"u", num(r.u)},
                       {"psi_exact", r.psi_exact},
                       {"psi_estimate", num(r.psi_estimate)},
                       {"ratio", num(r.ratio)}});
  }
  j["rows"] = std::move(arr);
  return dump(j);
}

std::string conjecture_to_json(const ConjectureTable& t) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["q"] = t.q;
  j["x"] = t.x;
  j["A"] = num(t.a);
  j["y"] = num(t.y);
  j["principal_sum"] = num(t.principal_sum);
  j["principal_friable"] = num(t.principal_friable);
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"char_index", r.flat},
                        {"index", r.index},
                        {"char_sum", cnum(r.char_sum)},
                        {"friable_sum", cnum(r.friable_sum)},
                        {"difference", cnum(r.difference)},
                        {"abs_difference", num(std::abs(r.difference))}});
  }
  j["rows"] = std::move(rows);
  return dump(j);
}

std::string conjecture_to_csv(const ConjectureTable& t) {
  std::ostringstream out;
  out << "char_index,sum_re,sum_im,sum_abs,friable_re,friable_im,diff_abs,principal_friable\n";
  for (const auto& r : t.rows) {
    out << r.flat << ',' << format_number(r.char_sum.real()) << ',' << format_number(r.char_sum.imag()) << ','
        << format_number(std::abs(r.char_sum)) << ',' << format_number(r.friable_sum.real()) << ','
        << format_number(r.friable_sum.imag()) << ',' << format_number(std::abs(r.difference)) << ','
        << format_number(t.principal_friable) << '\n';
  }
  return out.str();
}

std::string levels_to_json(const LevelsTable& t) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["q"] = t.q;
  j["x"] = t.x;
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"name", r.name}, {"y", num(r.y)}, {"psi", r.has_psi ? json(r.psi) : json(nullptr)}});
  }
  j["levels"] = std::move(rows);
  j["largest"] = t.largest;
  return dump(j);
}

std::string levels_to_csv(const LevelsTable& t) {
  std::ostringstream out;
  out << "name,y,psi,largest\n";
  for (const auto& r : t.rows) {
    out << r.name << ',' << format_number(r.y) << ',' << (r.has_psi ? std::to_string(r.psi) : std::string())
        << ',' << (r.name == t.largest ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace reslab
