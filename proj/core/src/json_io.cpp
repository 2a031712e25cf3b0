#include "ruelle/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace ruelle {

using nlohmann::json;

namespace {

cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw InputError("expected a number or [re, im] pair, got " + j.dump());
}

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (cplx c : v) out.push_back(complex_to_json(c));
  return out;
}

Polynomial poly_from_json(const json& j, const char* which) {
  if (!j.is_array() || j.empty())
    throw InputError(std::string(which) + " must be a non-empty coefficient array");
  std::vector<cplx> coeffs;
  coeffs.reserve(j.size());
  for (const json& c : j) coeffs.push_back(complex_from_json(c));
  return Polynomial(coeffs);
}

json num_or_inf(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

json parse_checked(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON");
  return j;
}

json series_to_json(const SeriesReport& r) {
  json j;
  j["terms"] = complex_list(r.terms);
  j["partial_sums"] = complex_list(r.partial_sums);
  j["sum"] = complex_to_json(r.sum());
  j["tail_estimate"] = num_or_inf(r.tail_estimate);
  j["fitted_ratio"] = r.fitted_ratio;
  j["verdict"] = verdict_name(r.verdict);
  j["escape_truncated"] = r.escape_truncated;
  return j;
}

}  // namespace

RationalMap map_from_json_text(const std::string& text) {
  json j = parse_checked(text);
  if (!j.is_object() || !j.contains("numerator") || !j.contains("denominator"))
    throw InputError("map JSON needs \"numerator\" and \"denominator\" arrays");
  return RationalMap(poly_from_json(j["numerator"], "numerator"),
                     poly_from_json(j["denominator"], "denominator"));
}

RationalMap map_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open map file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return map_from_json_text(buf.str());
}

std::string map_to_json_text(const RationalMap& map) {
  json j;
  j["numerator"] = complex_list(map.num().coeffs());
  j["denominator"] = complex_list(map.den().coeffs());
  return j.dump(2) + "\n";
}

KernelCombination combination_from_json_text(const std::string& text) {
  json j = parse_checked(text);
  if (!j.is_array()) throw InputError("kernel combination JSON must be an array");
  KernelCombination f;
  for (const json& t : j) {
    if (!t.is_object() || !t.contains("kind") || !t.contains("base") ||
        !t.contains("coeff"))
      throw InputError("kernel term needs kind, base, coeff");
    std::string kind = t["kind"].get<std::string>();
    if (kind != "gamma" && kind != "tau")
      throw InputError("kernel kind must be gamma or tau");
    Kernel k = kind == "gamma" ? Kernel::gamma(complex_from_json(t["base"]))
                               : Kernel::tau(complex_from_json(t["base"]));
    f.add_term(complex_from_json(t["coeff"]), k);
  }
  return f;
}

std::string combination_to_json_text(const KernelCombination& f) {
  json j = json::array();
  for (const KernelTerm& t : f.terms()) {
    json term;
    term["kind"] = t.kernel.kind == KernelKind::gamma ? "gamma" : "tau";
    term["base"] = complex_to_json(t.kernel.base);
    term["coeff"] = complex_to_json(t.coeff);
    j.push_back(term);
  }
  return j.dump(2) + "\n";
}

std::string critical_data_to_json_text(const RationalMap& map,
                                       const CriticalData& cd) {
  json j;
  j["map"]["numerator"] = complex_list(map.num().coeffs());
  j["map"]["denominator"] = complex_list(map.den().coeffs());
  j["degree"] = map.degree();
  j["standard_normalized"] = map.standard_normalized();
  j["critical_points"] = complex_list(cd.points);
  j["residues_b"] = complex_list(cd.b);
  j["critical_values"] = complex_list(cd.values);
  j["omega"] = complex_to_json(cd.omega);
  j["decomposition_residual"] = cd.max_decomposition_residual;
  j["poles"] = complex_list(map.poles());
  return j.dump(2) + "\n";
}

std::string series_report_to_json_text(const SeriesReport& r) {
  return series_to_json(r).dump(2) + "\n";
}

std::string summability_to_json_text(const SummabilityReport& r) {
  json j;
  j["forward"] = series_to_json(r.forward);
  j["absolute"] = series_to_json(r.absolute);
  if (r.log_weighted)
    j["log_weighted"] = series_to_json(*r.log_weighted);
  else
    j["log_weighted"] = "not-applicable";
  j["conjugation_sensitivity"] = series_to_json(r.conjugation_sensitivity);
  j["orbit_unbounded"] = r.orbit_unbounded;
  j["verdict"] = verdict_name(r.verdict);
  return j.dump(2) + "\n";
}

std::string stability_to_json_text(const StabilityReport& r) {
  json j;
  j["critical_index"] = r.i0;
  j["summability"] = verdict_name(r.summability);
  j["S"] = complex_to_json(r.s_value);
  j["S_tail"] = num_or_inf(r.s_tail);
  j["coefficients_C"] = complex_list(r.coefficients);
  j["bC_products"] = complex_list(r.bc_products);
  json tails = json::array();
  for (double t : r.coefficient_tails) tails.push_back(num_or_inf(t));
  j["coefficient_tails"] = tails;
  j["triviality"] = {{"trivial", r.triviality.trivial},
                     {"margin_c1", r.triviality.margin_c1},
                     {"margin_rest", r.triviality.margin_rest},
                     {"margin_warning", r.triviality.margin_warning},
                     {"tol", r.triviality.tol_used}};
  j["A"] = complex_to_json(r.a_value);
  j["B"] = complex_to_json(r.b_value);
  j["A_tail"] = num_or_inf(r.a_tail);
  j["B_tail"] = num_or_inf(r.b_tail);
  j["certificate"] = certificate_name(r.certificate);
  j["certificate_reason"] = r.certificate_reason;
  j["internal_inconsistency"] = r.internal_inconsistency;
  j["tol"] = r.tol_used;
  j["kernel_kind"] = r.kind == KernelKind::gamma ? "gamma" : "tau";
  return j.dump(2) + "\n";
}

std::string linear_system_to_json_text(const LinearRelationSystem& s) {
  json j;
  json rows = json::array();
  for (const auto& row : s.matrix) rows.push_back(complex_list(row));
  j["matrix"] = rows;
  j["row_points"] = s.row_points;
  j["rank"] = s.rank;
  j["dimension_bound"] = s.dimension_bound;
  j["singular_values"] = s.singular_values;
  json nulls = json::array();
  for (const auto& combo : s.null_combinations) nulls.push_back(complex_list(combo));
  j["null_combinations"] = nulls;
  j["rank_tol"] = s.rank_tol;
  return j.dump(2) + "\n";
}

std::string suite_result_to_json_text(const SuiteResult& r) {
  json j;
  j["suite"] = r.name;
  j["passed"] = r.passed;
  j["worst_residual"] = num_or_inf(r.worst_residual);
  j["tolerance"] = r.tolerance;
  j["trials"] = r.trials;
  j["detail"] = r.detail;
  return j.dump(2) + "\n";
}

cplx parse_complex(const std::string& s) {
  auto parse_real = [](const std::string& part) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(part, &pos);
    } catch (const std::exception&) {
      throw InputError("cannot parse number: " + part);
    }
    while (pos < part.size() && std::isspace(static_cast<unsigned char>(part[pos])))
      ++pos;
    if (pos != part.size()) throw InputError("trailing junk in number: " + part);
    return v;
  };
  std::size_t comma = s.find(',');
  if (comma == std::string::npos) return cplx(parse_real(s), 0.0);
  return cplx(parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1)));
}

std::string format_complex(cplx v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g", v.real(), v.imag());
  return buf;
}

}  // namespace ruelle
