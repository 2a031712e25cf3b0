// ruelle-kit: command-line front end over the core library.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 precondition violation (map-level math errors).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ruelle/json_io.hpp"
#include "ruelle/ruelle_operator.hpp"
#include "ruelle/series.hpp"
#include "ruelle/stability.hpp"
#include "ruelle/suites.hpp"

using nlohmann::json;
using namespace ruelle;

namespace {

struct GlobalOpts {
  std::string map_path;
  std::string format;  // "json" or "csv"; per-command default when empty
  double tol = 0.0;    // 0 means command default
  long order = -1;     // -1 means command default
  std::uint64_t seed = 1;
};

RationalMap load_map(const GlobalOpts& g) {
  if (g.map_path.empty()) throw InputError("--map FILE is required");
  return map_from_json_file(g.map_path);
}

std::string resolve_format(const GlobalOpts& g, const char* fallback) {
  return g.format.empty() ? fallback : g.format;
}

std::size_t resolve_order(const GlobalOpts& g, std::size_t fallback) {
  return g.order < 0 ? fallback : static_cast<std::size_t>(g.order);
}

void emit(const std::string& text) { std::fputs(text.c_str(), stdout); }

void require_json(const GlobalOpts& g, const char* cmd) {
  if (resolve_format(g, "json") != "json")
    throw InputError(std::string(cmd) + " emits JSON only");
}

KernelKind parse_kind(const std::string& s) {
  if (s == "gamma") return KernelKind::gamma;
  if (s == "tau") return KernelKind::tau;
  throw InputError("kernel kind must be gamma or tau");
}

std::size_t nearest_critical_index(const CriticalData& cd, cplx p) {
  if (cd.points.empty()) throw InputError("map has no finite critical points");
  std::size_t best = 0;
  double dist = std::abs(cd.points[0] - p);
  for (std::size_t i = 1; i < cd.points.size(); ++i) {
    double d = std::abs(cd.points[i] - p);
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  if (dist > 1e-6)
    throw InputError("point " + format_complex(p) +
                     " is not near any critical point (closest at distance " +
                     std::to_string(dist) + ")");
  return best;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- summability ------------------------------------------------------------

void run_summability(const GlobalOpts& g, const std::string& point_s) {
  RationalMap map = load_map(g);
  cplx a = parse_complex(point_s);
  SummabilityReport rep = summability_report(map, a, resolve_order(g, 60));
  if (resolve_format(g, "json") == "csv") {
    emit("# forward\n");
    emit(series_csv(rep.forward));
    emit("# absolute\n");
    emit(series_csv(rep.absolute));
    if (rep.log_weighted) {
      emit("# log_weighted\n");
      emit(series_csv(*rep.log_weighted));
    }
    emit("# conjugation_sensitivity\n");
    emit(series_csv(rep.conjugation_sensitivity));
  } else {
    emit(summability_to_json_text(rep));
  }
}

// ---- ruelle-apply -----------------------------------------------------------

void run_apply(const GlobalOpts& g, const std::string& combo_path,
               const std::string& kind_s, const std::string& base_s,
               const std::string& at_s) {
  RationalMap map = load_map(g);
  CriticalData cd = critical_data(map);
  require_json(g, "ruelle-apply");

  KernelCombination f;
  if (!combo_path.empty()) {
    f = combination_from_json_text(read_file(combo_path));
  } else if (!base_s.empty()) {
    Kernel k{parse_kind(kind_s), parse_complex(base_s)};
    f = KernelCombination::single(1.0, k);
  } else {
    throw InputError("ruelle-apply needs --combo FILE or --base re,im");
  }

  const std::size_t power = resolve_order(g, 1);
  KernelCombination out = f;
  for (std::size_t k = 0; k < power; ++k) out = apply_to_combination(map, cd, out);

  json j;
  j["power"] = power;
  j["combination"] = json::parse(combination_to_json_text(out));
  if (!at_s.empty()) {
    cplx z = parse_complex(at_s);
    j["at"] = format_complex(z);
    j["value_closed_form"] = format_complex(out.eval(z));
    if (power == 1)
      j["value_preimage_sum"] =
          format_complex(apply_pointwise(map, f.as_evaluable(), z));
  }
  emit(j.dump(2) + "\n");
}

// ---- series -----------------------------------------------------------------

void run_series(const GlobalOpts& g, const std::string& type,
                const std::string& point_s, const std::string& x_s,
                const std::string& z_s, const std::string& y_s,
                const std::string& kind_s) {
  RationalMap map = load_map(g);
  cplx a = parse_complex(point_s);
  const bool csv = resolve_format(g, "json") == "csv";

  auto need_z = [&]() {
    if (z_s.empty()) throw InputError("series --type " + type + " needs --z re,im");
    return parse_complex(z_s);
  };

  if (type == "forward") {
    SeriesReport r = forward_series(map, a, resolve_order(g, 60));
    emit(csv ? series_csv(r) : series_report_to_json_text(r));
  } else if (type == "modified") {
    ModifiedSeries m = modified_series_eval(map, a, parse_complex(x_s),
                                            resolve_order(g, 60), need_z(),
                                            parse_kind(kind_s));
    if (csv) {
      emit(series_csv(m.report));
    } else {
      json j;
      j["report"] = json::parse(series_report_to_json_text(m.report));
      j["value"] = format_complex(m.value());
      j["weighted_tail"] = m.weighted_tail;
      j["proximity_flags"] = m.proximity_flags;
      emit(j.dump(2) + "\n");
    }
  } else if (type == "backward") {
    CriticalData cd = critical_data(map);
    BackwardSeries b =
        backward_series_eval(map, cd, a, parse_complex(x_s),
                             resolve_order(g, 20), need_z(), parse_kind(kind_s));
    if (csv) {
      emit(series_csv(b.report));
    } else {
      json j;
      j["report"] = json::parse(series_report_to_json_text(b.report));
      j["value"] = format_complex(b.value());
      j["span_size"] = b.span_size;
      emit(j.dump(2) + "\n");
    }
  } else if (type == "orbit") {
    OrbitSums s = orbit_sums(map, a, resolve_order(g, 60));
    if (csv) {
      emit("# a_series\n");
      emit(series_csv(s.a_series));
      emit("# b_series\n");
      emit(series_csv(s.b_series));
    } else {
      json j;
      j["a_series"] = json::parse(series_report_to_json_text(s.a_series));
      j["b_series"] = json::parse(series_report_to_json_text(s.b_series));
      emit(j.dump(2) + "\n");
    }
  } else if (type == "mobius") {
    if (y_s.empty()) throw InputError("series --type mobius needs --y re,im");
    require_json(g, "series --type mobius");
    MobiusIdentityResult m = mobius_transform_identity(
        map, a, parse_complex(y_s), need_z(), resolve_order(g, 60));
    json j;
    j["residual"] = m.residual;
    j["lhs"] = format_complex(m.lhs);
    j["rhs"] = format_complex(m.rhs);
    j["conditioning_warning"] = m.conditioning_warning;
    emit(j.dump(2) + "\n");
  } else {
    throw InputError("unknown series type: " + type);
  }
}

// ---- stability / rank -------------------------------------------------------

void run_stability(const GlobalOpts& g, long index, const std::string& point_s,
                   const std::string& kind_s) {
  RationalMap map = load_map(g);
  CriticalData cd = critical_data(map);
  std::size_t i0 = 0;
  if (!point_s.empty())
    i0 = nearest_critical_index(cd, parse_complex(point_s));
  else if (index >= 0)
    i0 = static_cast<std::size_t>(index);
  if (i0 >= cd.size())
    throw InputError("critical index out of range (map has " +
                     std::to_string(cd.size()) + " critical points)");
  require_json(g, "stability");
  StabilityReport rep = instability_certificate(
      map, cd, i0, resolve_order(g, 60), g.tol > 0 ? g.tol : 1e-8,
      parse_kind(kind_s));
  emit(stability_to_json_text(rep));
}

void run_rank(const GlobalOpts& g, const std::vector<long>& indices,
              const std::vector<std::string>& points,
              const std::string& kind_s) {
  RationalMap map = load_map(g);
  CriticalData cd = critical_data(map);
  require_json(g, "rank");
  std::vector<std::size_t> rows;
  for (long i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= cd.size())
      throw InputError("critical index out of range: " + std::to_string(i));
    rows.push_back(static_cast<std::size_t>(i));
  }
  for (const std::string& p : points)
    rows.push_back(nearest_critical_index(cd, parse_complex(p)));
  LinearRelationSystem sys = build_linear_system(
      map, cd, rows, resolve_order(g, 60), parse_kind(kind_s),
      g.tol > 0 ? g.tol : tol::rank_rel);
  emit(linear_system_to_json_text(sys));
}

// ---- verify -------------------------------------------------------------------

int run_verify(const GlobalOpts& g, const std::string& suite, long trials,
               long samples) {
  require_json(g, "verify");
  SuiteOptions opts;
  opts.seed = g.seed;
  if (trials >= 0) opts.trials = static_cast<std::size_t>(trials);
  if (samples >= 0) opts.samples = static_cast<std::size_t>(samples);
  opts.tolerance = g.tol;

  std::vector<std::string> names =
      suite.empty() ? suite_names() : std::vector<std::string>{suite};
  json arr = json::array();
  bool all_passed = true;
  for (const std::string& name : names) {
    SuiteResult r = run_suite(name, opts);
    arr.push_back(json::parse(suite_result_to_json_text(r)));
    all_passed = all_passed && r.passed;
  }
  emit(arr.dump(2) + "\n");
  return all_passed ? 0 : 1;
}

// ---- orbit / grid -------------------------------------------------------------

void run_orbit(const GlobalOpts& g, const std::string& point_s, long n_opt) {
  RationalMap map = load_map(g);
  cplx z0 = parse_complex(point_s);
  long n = n_opt >= 0 ? n_opt : (g.order >= 0 ? g.order : 100);
  if (n < 0) throw InputError("--n must be >= 0");
  OrbitCocycle oc = orbit_cocycle(map, z0, static_cast<int>(n));
  if (resolve_format(g, "csv") == "csv") {
    std::string out = "n,z_re,z_im,dz_re,dz_im\n";
    char line[160];
    for (std::size_t k = 0; k < oc.points.size(); ++k) {
      std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g\n", k,
                    oc.points[k].real(), oc.points[k].imag(),
                    oc.cocycle[k].real(), oc.cocycle[k].imag());
      out += line;
    }
    if (oc.escaped) out += "# escaped\n";
    emit(out);
  } else {
    json j;
    json pts = json::array(), coc = json::array();
    for (cplx p : oc.points) pts.push_back(json::array({p.real(), p.imag()}));
    for (cplx c : oc.cocycle) coc.push_back(json::array({c.real(), c.imag()}));
    j["points"] = pts;
    j["cocycle"] = coc;
    j["escaped"] = oc.escaped;
    emit(j.dump(2) + "\n");
  }
}

void run_grid(const GlobalOpts& g, const std::string& window_s,
              long resolution) {
  RationalMap map = load_map(g);
  double x0, x1, y0, y1;
  if (std::sscanf(window_s.c_str(), "%lf,%lf,%lf,%lf", &x0, &x1, &y0, &y1) != 4)
    throw InputError("--window expects xmin,xmax,ymin,ymax");
  if (!(x1 > x0) || !(y1 > y0)) throw InputError("--window must be nonempty");
  if (resolution < 1 || resolution > 4096)
    throw InputError("--resolution must be in [1, 4096]");

  const std::size_t res = static_cast<std::size_t>(resolution);
  const double escape_radius = 1e6;
  const int max_iter = 500;
  const double dx = res > 1 ? (x1 - x0) / static_cast<double>(res - 1) : 0.0;
  const double dy = res > 1 ? (y1 - y0) / static_cast<double>(res - 1) : 0.0;

  std::vector<int> iters(res * res, max_iter);
  std::vector<char> escaped(res * res, 0);
  parallel_for_blocks(res * res, res, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const std::size_t iy = idx / res, ix = idx % res;
      cplx z(x0 + static_cast<double>(ix) * dx,
             y0 + static_cast<double>(iy) * dy);
      for (int it = 0; it < max_iter; ++it) {
        if (std::abs(z) > escape_radius) {
          iters[idx] = it;
          escaped[idx] = 1;
          break;
        }
        try {
          z = map.eval(z);
        } catch (const PoleError&) {
          iters[idx] = it + 1;  // pole maps to infinity
          escaped[idx] = 1;
          break;
        }
      }
    }
  });

  if (resolve_format(g, "csv") == "csv") {
    std::string out = "ix,iy,re,im,iterations,escaped\n";
    out.reserve(res * res * 48);
    char line[160];
    for (std::size_t idx = 0; idx < res * res; ++idx) {
      const std::size_t iy = idx / res, ix = idx % res;
      std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%d,%d\n", ix, iy,
                    x0 + static_cast<double>(ix) * dx,
                    y0 + static_cast<double>(iy) * dy, iters[idx],
                    static_cast<int>(escaped[idx]));
      out += line;
    }
    emit(out);
  } else {
    json j;
    j["window"] = json::array({x0, x1, y0, y1});
    j["resolution"] = res;
    json rows = json::array();
    for (std::size_t iy = 0; iy < res; ++iy) {
      json row = json::array();
      for (std::size_t ix = 0; ix < res; ++ix)
        row.push_back(iters[iy * res + ix]);
      rows.push_back(row);
    }
    j["iterations"] = rows;
    emit(j.dump() + "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ruelle-kit: transfer operator calculus for rational maps"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--map", g.map_path, "map JSON file {\"numerator\": [[re,im],...], \"denominator\": ...}");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", g.tol, "tolerance override (command default when omitted)");
  app.add_option("--order", g.order, "series truncation / operator power");
  app.add_option("--seed", g.seed, "RNG seed for randomized suites");

  int exit_code = 0;

  auto* analyze = app.add_subcommand(
      "analyze", "degree, normalization, critical decomposition");
  analyze->fallthrough();
  analyze->callback([&] {
    RationalMap map = load_map(g);
    require_json(g, "analyze");
    CriticalData cd = critical_data(map);
    emit(critical_data_to_json_text(map, cd));
  });

  auto* summ = app.add_subcommand(
      "summability", "forward / absolute / weighted series diagnostics");
  summ->fallthrough();
  std::string summ_point;
  summ->add_option("--point", summ_point, "orbit start a as re,im")->required();
  summ->callback([&] { run_summability(g, summ_point); });

  auto* apply = app.add_subcommand(
      "ruelle-apply", "apply the transfer operator to a kernel combination");
  apply->fallthrough();
  std::string apply_combo, apply_kind = "gamma", apply_base, apply_at;
  apply->add_option("--combo", apply_combo, "kernel combination JSON file");
  apply->add_option("--kind", apply_kind, "kernel kind for --base")
      ->check(CLI::IsMember({"gamma", "tau"}));
  apply->add_option("--base", apply_base, "single kernel base as re,im");
  apply->add_option("--at", apply_at, "also evaluate the result at z = re,im");
  apply->callback(
      [&] { run_apply(g, apply_combo, apply_kind, apply_base, apply_at); });

  auto* series = app.add_subcommand("series", "orbit series evaluations");
  series->fallthrough();
  std::string ser_type = "forward", ser_point, ser_x = "1,0", ser_z, ser_y,
              ser_kind = "gamma";
  series->add_option("--type", ser_type, "series type")
      ->check(CLI::IsMember({"forward", "modified", "backward", "orbit", "mobius"}));
  series->add_option("--point", ser_point, "orbit start a as re,im")->required();
  series->add_option("--x", ser_x, "series weight x as re,im");
  series->add_option("--z", ser_z, "evaluation point as re,im");
  series->add_option("--y", ser_y, "Moebius parameter as re,im");
  series->add_option("--kind", ser_kind, "kernel kind")
      ->check(CLI::IsMember({"gamma", "tau"}));
  series->callback(
      [&] { run_series(g, ser_type, ser_point, ser_x, ser_z, ser_y, ser_kind); });

  auto* stab = app.add_subcommand(
      "stability", "structural-instability certificate for a critical point");
  stab->fallthrough();
  long stab_index = -1;
  std::string stab_point, stab_kind = "gamma";
  stab->add_option("--index", stab_index, "critical point index (default 0)");
  stab->add_option("--point", stab_point, "critical point as re,im");
  stab->add_option("--kind", stab_kind, "kernel kind")
      ->check(CLI::IsMember({"gamma", "tau"}));
  stab->callback([&] { run_stability(g, stab_index, stab_point, stab_kind); });

  auto* rank = app.add_subcommand(
      "rank", "linear relation system over summable critical points");
  rank->fallthrough();
  std::vector<long> rank_indices;
  std::vector<std::string> rank_points;
  std::string rank_kind = "gamma";
  rank->add_option("--index", rank_indices, "critical point indices (repeatable)");
  rank->add_option("--points", rank_points, "critical points as re,im (repeatable)");
  rank->add_option("--kind", rank_kind, "kernel kind")
      ->check(CLI::IsMember({"gamma", "tau"}));
  rank->callback([&] { run_rank(g, rank_indices, rank_points, rank_kind); });

  auto* verify = app.add_subcommand(
      "verify", "randomized verification suites (exit 1 on failure)");
  verify->fallthrough();
  std::string verify_suite;
  long verify_trials = -1, verify_samples = -1;
  verify->add_option("--suite", verify_suite, "suite name (all when omitted)")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", verify_trials, "trial count");
  verify->add_option("--samples", verify_samples, "Monte-Carlo sample count");
  verify->callback(
      [&] { exit_code = run_verify(g, verify_suite, verify_trials, verify_samples); });

  auto* orbit = app.add_subcommand("orbit", "orbit and derivative cocycle dump");
  orbit->fallthrough();
  std::string orbit_point;
  long orbit_n = -1;
  orbit->add_option("--point", orbit_point, "start point as re,im")->required();
  orbit->add_option("--n", orbit_n, "iteration count");
  orbit->callback([&] { run_orbit(g, orbit_point, orbit_n); });

  auto* grid = app.add_subcommand(
      "grid", "escape-time grid (radius 1e6, cap 500 iterations)");
  grid->fallthrough();
  std::string grid_window = "-2,2,-2,2";
  long grid_res = 100;
  grid->add_option("--window", grid_window, "xmin,xmax,ymin,ymax");
  grid->add_option("--resolution", grid_res, "points per axis");
  grid->callback([&] { run_grid(g, grid_window, grid_res); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return exit_code;
}
