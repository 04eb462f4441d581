// Command-line front end. `run` is separate from main so tests can drive it
// with in-memory streams.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psphere/verify.hpp"

namespace psphere::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitResource = 4;

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooManyPunctures: return kExitResource;
    case ErrorCode::PointIsPuncture:
    case ErrorCode::OutOfRingDomain:
    case ErrorCode::NotInCell:
    case ErrorCode::ZeroArgument:
    case ErrorCode::NonpositiveModulus:
    case ErrorCode::NotSeparatedOnLine:
    case ErrorCode::PartitionTooSmall:
    case ErrorCode::MeshMismatch:
    case ErrorCode::MismatchedPunctureSets: return kExitDomain;
    default: return kExitConfig;
  }
}

struct RunConfig {
  std::vector<ExtendedPoint> punctures;
  Flavor flavor = Flavor::Euclid;
  double mesh_h = 0.0;  // 0: automatic
  std::size_t mesh_m = 256;
  std::size_t m_glue = 128;
  std::size_t refine_iters = 40;
  std::uint64_t seed = 1;
  double eq_tol = kDefaultEqTolerance;
  double triangle_slack = 1e-12;

  GlueOptions glue_options() const {
    GlueOptions g;
    g.m_glue = m_glue;
    g.refine_iters = refine_iters;
    g.mesh.h = mesh_h;
    g.mesh.m = mesh_m;
    return g;
  }
};

// ---------------------------------------------------------------------------
// Point serialization: "re,im" with 17 significant digits, or "inf".

inline double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw Error(ErrorCode::NonFiniteCoordinate, "cannot parse number '" + std::string(s) + "'");
  return v;
}

inline ExtendedPoint parse_point(std::string_view s) {
  if (s == "inf") return inf();
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return ExtendedPoint(parse_double(s));
  return ExtendedPoint(Complex(parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))));
}

inline ExtendedPoint point_from_json(const json& j) {
  if (j.is_string()) return parse_point(j.get<std::string>());
  if (j.is_number()) return ExtendedPoint(j.get<double>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return ExtendedPoint(Complex(j[0].get<double>(), j[1].get<double>()));
  throw Error(ErrorCode::InvalidArgument, "point must be \"re,im\", \"inf\", a number or [re, im]");
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_point(Complex z) { return format_number(z.real()) + "," + format_number(z.imag()); }

inline std::string format_point(const ExtendedPoint& p) {
  return p.is_infinite() ? "inf" : format_point(p.value());
}

inline json pair_json(Complex z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Config file.

inline std::size_t positive_count(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() <= 0)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a positive integer");
  return j.get<std::size_t>();
}

inline double positive_real(const json& j, const char* what) {
  if (!j.is_number() || !(j.get<double>() > 0.0) || !std::isfinite(j.get<double>()))
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a positive number");
  return j.get<double>();
}

inline void apply_config_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  if (j.contains("punctures")) {
    if (!j["punctures"].is_array()) throw Error(ErrorCode::InvalidArgument, "punctures must be a list");
    c.punctures.clear();
    for (const auto& p : j["punctures"]) c.punctures.push_back(point_from_json(p));
  }
  if (j.contains("flavor")) {
    const auto f = j["flavor"].is_string() ? parse_flavor(j["flavor"].get<std::string>()) : std::nullopt;
    if (!f) throw Error(ErrorCode::InvalidArgument, "flavor must be euclid, jhat or qhat");
    c.flavor = *f;
  }
  if (j.contains("mesh")) {
    const json& m = j["mesh"];
    if (m.contains("h")) c.mesh_h = positive_real(m["h"], "mesh.h");
    if (m.contains("m")) c.mesh_m = positive_count(m["m"], "mesh.m");
  }
  if (j.contains("glue")) {
    const json& g = j["glue"];
    if (g.contains("m_glue")) c.m_glue = positive_count(g["m_glue"], "glue.m_glue");
    if (g.contains("refine_iters")) c.refine_iters = positive_count(g["refine_iters"], "glue.refine_iters");
  }
  if (j.contains("seed")) c.seed = positive_count(j["seed"], "seed");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("eq")) c.eq_tol = positive_real(t["eq"], "tolerances.eq");
    if (t.contains("triangle_slack")) c.triangle_slack = positive_real(t["triangle_slack"], "tolerances.triangle_slack");
  }
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config " + path);
  RunConfig c;
  try {
    apply_config_json(json::parse(in), c);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

inline void validate(const RunConfig& c) {
  if (c.punctures.size() < 3) throw Error(ErrorCode::TooFewPunctures, "need at least three punctures");
  require_distinct(c.punctures, c.eq_tol);
  if (c.m_glue < 8) throw Error(ErrorCode::InvalidArgument, "glue.m_glue must be at least 8");
  if (c.mesh_m < 16) throw Error(ErrorCode::InvalidArgument, "mesh.m must be at least 16");
}

// ---------------------------------------------------------------------------
// Commands. Each returns its JSON result; errors propagate as psphere::Error.

inline json error_json(const std::string& code, const std::string& message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

inline json partition_json(const std::vector<std::size_t>& idx) {
  json a = json::array();
  for (std::size_t i : idx) a.push_back(i);
  return a;
}

inline json cmd_invariants(const RunConfig& c) {
  const QInvariant q = q_invariant(c.punctures, kDefaultPartitionLimit, c.eq_tol);
  json out{{"n", c.punctures.size()}, {"mQ", m_q(c.punctures, c.eq_tol)}, {"Q", q.value}};
  out["best_partition"] = json::array({partition_json(q.part1_indices), partition_json(q.part2_indices)});

  // Radii and their brackets live on the normalized set.
  const Normalized nz = normalize(c.punctures, std::nullopt, c.eq_tol);
  json pts = json::array();
  for (const auto& p : nz.ps.points()) pts.push_back(format_point(p));
  out["normalized_punctures"] = pts;
  json rho = json::array();
  for (std::size_t j = 0; j < nz.ps.size(); ++j) {
    const std::size_t src = nz.ps.source_index()[j];
    rho.push_back({{"index", src},
                   {"center", j == nz.ps.outer() ? std::string("inf") : format_point(nz.ps.finite(j))},
                   {"rho_tilde", nz.ps.rho_tilde(j)},
                   {"rho", nz.ps.rho(j)}});
  }
  out["rho"] = rho;
  json br = json::array();
  if (nz.ps.contains_one()) {
    for (const auto& b : rho_brackets(nz.ps))
      br.push_back({{"name", b.name}, {"lhs", b.lhs}, {"value", b.value}, {"rhs", b.rhs}, {"ok", b.ok}});
  }
  out["rho_brackets"] = br;
  return out;
}

inline json cmd_systole(const RunConfig& c, bool conditional_lower) {
  SystoleOptions o;
  o.conditional_lower = conditional_lower;
  const SystoleBracket b = systole_bracket(c.punctures, o);
  json out{{"lower", b.lower}, {"upper", b.upper}, {"Q", b.q}, {"notes", b.notes}};
  out["exact"] = b.exact ? json(*b.exact) : json(nullptr);
  return out;
}

inline std::string region_name(const PunctureSet& ps, const Region& r) {
  switch (r.kind) {
    case Region::Kind::Cell: return "cell " + std::to_string(r.index);
    case Region::Kind::Boundary: return "boundary " + std::to_string(r.index);
    case Region::Kind::Wild: return "W";
  }
  (void)ps;
  return "";
}

inline json cmd_distance(const RunConfig& c, const ExtendedPoint& from, const ExtendedPoint& to) {
  const PunctureSet ps = PunctureSet::from_points(c.punctures, c.eq_tol);
  if (from.is_infinite() || to.is_infinite())
    throw Error(ErrorCode::PointIsPuncture, "infinity is a puncture");
  const Complex z1 = from.value(), z2 = to.value();
  require_not_puncture(ps, z1);
  require_not_puncture(ps, z2);

  const GlueOptions base = c.glue_options();
  const GluedMetric gm(ps, c.flavor, base);
  const double value = gm.distance(z1, z2);

  // Rerun at doubled resolution: m_glue for the closed-form flavors, the mesh otherwise.
  GlueOptions fine = base;
  if (c.flavor == Flavor::QHat) {
    fine.mesh.m = base.mesh.m * 2;
    fine.mesh.h = (base.mesh.h > 0.0 ? base.mesh.h : ps.rho_min() / 20.0) / 2.0;
  } else {
    fine.m_glue = base.m_glue * 2;
  }
  const double refined = GluedMetric(ps, c.flavor, fine).distance(z1, z2);

  json diag{{"m_glue", base.m_glue},
            {"refined_m_glue", fine.m_glue},
            {"converged_estimate", refined},
            {"relative_change", value > 0.0 ? std::abs(refined - value) / value : 0.0}};
  if (c.flavor == Flavor::QHat) {
    diag["h"] = gm.mesh()->h();
    diag["m"] = gm.mesh()->m();
    diag["refined_h"] = fine.mesh.h;
    diag["refined_m"] = fine.mesh.m;
    diag["mesh_nodes"] = gm.mesh()->node_count();
    diag["mesh_edges"] = gm.mesh()->edge_count();
  } else {
    diag["h"] = nullptr;
  }
  return json{{"value", value},
              {"flavor", to_string(c.flavor)},
              {"from", format_point(z1)},
              {"to", format_point(z2)},
              {"regions", json::array({region_name(ps, classify(ps, z1)), region_name(ps, classify(ps, z2))})},
              {"diagnostics", diag}};
}

inline json cmd_voronoi(const RunConfig& c, bool modified, double half_width) {
  const PunctureSet ps = PunctureSet::from_points(c.punctures, c.eq_tol);
  VoronoiOptions vo;
  vo.half_width = half_width;
  const auto cells = modified ? modified_voronoi_cells(ps, vo) : voronoi_cells(ps, vo);
  json arr = json::array();
  for (const auto& cell : cells) {
    json lines = json::array();
    for (const auto& pl : cell.polylines) {
      json line = json::array();
      for (Complex z : pl) line.push_back(pair_json(z));
      lines.push_back(line);
    }
    arr.push_back({{"nucleus", pair_json(cell.nucleus)},
                   {"closed", cell.closed},
                   {"unbounded", cell.unbounded},
                   {"polylines", lines}});
  }
  return json{{"modified", modified}, {"half_width", half_width > 0.0 ? half_width : ps.rho_max()}, {"cells", arr}};
}

inline json constants_json(const FlavorConstants& k) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"flavor", to_string(k.flavor)},
              {"L1", k.l1}, {"L2", k.l2}, {"S_min", k.s_min}, {"S_max", k.s_max},
              {"M0", k.m0}, {"K1", opt(k.k1)}, {"K2", opt(k.k2)}, {"B1", opt(k.b1)}, {"B2", opt(k.b2)},
              {"K", opt(k.k)}, {"K_printed", opt(k.k_printed)},
              {"C0", k.c0}, {"K0", k.k0}, {"C1", k.c1}, {"C2", k.c2}, {"C3", k.c3}, {"c", k.c},
              {"Q", k.q}, {"orientation", k.orientation}};
}

inline json cmd_constants(const RunConfig& c) {
  const PunctureSet ps = PunctureSet::from_points(c.punctures, c.eq_tol);
  // QHat constants depend on Q alone; no mesh is needed for them.
  json out = c.flavor == Flavor::QHat
                 ? constants_json(qhat_constants_from_q(q_invariant(ps.points()).value))
                 : constants_json(flavor_constants(GluedMetric(ps, c.flavor, c.glue_options())));
  out["rho_min"] = ps.rho_min();
  out["rho_n"] = ps.rho_max();
  return out;
}

struct CompareResult {
  std::string csv;
  json summary;
};

inline CompareResult cmd_compare(const RunConfig& c, Flavor flavor_b, std::size_t n_pairs) {
  const PunctureSet ps = PunctureSet::from_points(c.punctures, c.eq_tol);
  const GlueOptions g = c.glue_options();
  const GluedMetric a(ps, c.flavor, g);
  std::unique_ptr<GluedMetric> b;
  if (flavor_b == Flavor::QHat && a.mesh())
    b = std::make_unique<GluedMetric>(ps, a.mesh(), g);
  else
    b = std::make_unique<GluedMetric>(ps, flavor_b, g);
  const EquivalenceReport r = equivalence_report(a, *b, n_pairs, c.seed);

  std::ostringstream csv;
  csv << "pair_id,z1_re,z1_im,z2_re,z2_im,d_a,d_b,ratio\n";
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const PairSample& p = r.pairs[i];
    csv << i << ',' << format_number(p.z1.real()) << ',' << format_number(p.z1.imag()) << ','
        << format_number(p.z2.real()) << ',' << format_number(p.z2.imag()) << ',' << format_number(p.d_a)
        << ',' << format_number(p.d_b) << ',' << format_number(p.ratio) << '\n';
  }
  json summary{{"flavor_a", to_string(c.flavor)},
               {"flavor_b", to_string(flavor_b)},
               {"n_pairs", r.pairs.size()},
               {"seed", c.seed},
               {"min_ratio", r.min_ratio},
               {"max_ratio", r.max_ratio},
               {"median_ratio", r.median_ratio},
               {"spread", r.min_ratio > 0.0 ? r.max_ratio / r.min_ratio : 0.0},
               {"bound", r.bound ? json(*r.bound) : json(nullptr)},
               {"within_bound", r.within_bound}};
  return {csv.str(), summary};
}

inline json result_json(const PropertyResult& r) {
  return json{{"suite", r.suite}, {"name", r.name},         {"pass", r.pass},
              {"checked", r.checked}, {"worst", r.worst}, {"counterexample", r.counterexample}};
}

inline json cmd_verify(const RunConfig& c, const std::string& suite, std::size_t samples) {
  std::vector<PropertyResult> all;
  auto add = [&](std::vector<PropertyResult> v) { all.insert(all.end(), v.begin(), v.end()); };
  const bool every = suite == "all";
  if (every || suite == "crossratio") add(suite_crossratio(samples, c.seed));
  if (every || suite == "invariants") add(suite_invariants(c.punctures, samples, c.seed));
  if (every || suite == "ringmetrics") add(suite_ringmetrics(samples, c.seed));
  if (every || suite == "basemetrics" || suite == "glue") {
    const PunctureSet ps = PunctureSet::from_points(c.punctures, c.eq_tol);
    if (every || suite == "basemetrics") add(suite_basemetrics(ps, samples, c.seed));
    if (every || suite == "glue") add(suite_glue(GluedMetric(ps, c.flavor, c.glue_options()), samples, c.seed));
  }
  bool pass = true;
  json props = json::array();
  for (const auto& r : all) {
    pass = pass && r.pass;
    props.push_back(result_json(r));
  }
  return json{{"suite", suite}, {"samples", samples}, {"seed", c.seed}, {"pass", pass}, {"properties", props}};
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Punctured-sphere invariants and glued distances"};
  app.require_subcommand(1);
  // Global options may follow the subcommand.
  app.fallthrough();

  std::string config_path, points, flavor_name, output, format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> mesh_h, eq_tol, triangle_slack;
  std::optional<std::size_t> mesh_m, m_glue, refine_iters;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--points", points, "punctures separated by ';', each \"re,im\" or \"inf\"");
  app.add_option("--flavor", flavor_name, "euclid | jhat | qhat");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--output", output, "write the result here instead of stdout");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--mesh-h", mesh_h, "finest mesh box size");
  app.add_option("--mesh-m", mesh_m, "mesh nodes per boundary circle");
  app.add_option("--m-glue", m_glue, "crossing angles per circle");
  app.add_option("--refine-iters", refine_iters, "golden-section iterations");
  app.add_option("--eq-tol", eq_tol, "point equality tolerance");
  app.add_option("--triangle-slack", triangle_slack, "triangle inequality slack");

  auto* inv = app.add_subcommand("invariants", "Q, mQ, best partition and radii");
  auto* sys = app.add_subcommand("systole", "systole bracket");
  bool conditional_lower = false;
  sys->add_flag("--conditional-lower", conditional_lower, "use 1.28/(Q+1), valid only when sys <= 1");
  auto* dist = app.add_subcommand("distance", "glued distance between two points");
  std::string from, to;
  dist->add_option("--from", from, "\"re,im\"")->required();
  dist->add_option("--to", to, "\"re,im\"")->required();
  auto* vor = app.add_subcommand("voronoi", "Voronoi cell boundaries as polylines");
  bool modified = false;
  double half_width = 0.0;
  vor->add_flag("--modified", modified, "modified cells");
  vor->add_option("--half-width", half_width, "clip box half width (default rho_n)");
  auto* cmp = app.add_subcommand("compare", "ratio of two glued flavors over random pairs");
  std::string flavor_b = "qhat";
  std::size_t pairs = 1000;
  cmp->add_option("--flavor-b", flavor_b, "second flavor");
  cmp->add_option("--pairs", pairs, "number of pairs");
  auto* ver = app.add_subcommand("verify", "property suites");
  std::string suite = "all";
  std::size_t samples = 1000;
  ver->add_option("--suite", suite, "crossratio | invariants | ringmetrics | basemetrics | glue | all");
  ver->add_option("--samples", samples, "samples per property");
  auto* cst = app.add_subcommand("constants", "Lipschitz constants of the configured flavor");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    out << error_json("usage", e.what()).dump(2) << '\n';
    return kExitConfig;
  }

  auto emit = [&](const std::string& text) -> bool {
    if (output.empty()) {
      out << text;
      return true;
    }
    std::ofstream f(output, std::ios::binary);
    f << text;
    if (!f) {
      err << "cannot write " << output << '\n';
      return false;
    }
    return true;
  };

  try {
    RunConfig c;
    if (!config_path.empty()) c = load_config_file(config_path);
    if (!points.empty()) {
      c.punctures.clear();
      std::string_view s = points;
      while (!s.empty()) {
        const auto semi = s.find(';');
        c.punctures.push_back(parse_point(s.substr(0, semi)));
        if (semi == std::string_view::npos) break;
        s.remove_prefix(semi + 1);
      }
    }
    if (!flavor_name.empty()) {
      const auto f = parse_flavor(flavor_name);
      if (!f) throw Error(ErrorCode::InvalidArgument, "unknown flavor " + flavor_name);
      c.flavor = *f;
    }
    if (seed) c.seed = *seed;
    if (mesh_h) c.mesh_h = *mesh_h;
    if (mesh_m) c.mesh_m = *mesh_m;
    if (m_glue) c.m_glue = *m_glue;
    if (refine_iters) c.refine_iters = *refine_iters;
    if (eq_tol) c.eq_tol = *eq_tol;
    if (triangle_slack) c.triangle_slack = *triangle_slack;
    validate(c);

    if (format == "csv" && !cmp->parsed())
      throw Error(ErrorCode::InvalidArgument, "csv output is only available for compare");

    json result;
    int code = kExitOk;
    if (inv->parsed()) {
      result = cmd_invariants(c);
    } else if (sys->parsed()) {
      result = cmd_systole(c, conditional_lower);
    } else if (dist->parsed()) {
      result = cmd_distance(c, parse_point(from), parse_point(to));
    } else if (vor->parsed()) {
      result = cmd_voronoi(c, modified, half_width);
    } else if (cst->parsed()) {
      result = cmd_constants(c);
    } else if (ver->parsed()) {
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end())
        throw Error(ErrorCode::InvalidArgument, "unknown suite " + suite);
      result = cmd_verify(c, suite, samples);
      code = result["pass"].get<bool>() ? kExitOk : kExitFailed;
    } else if (cmp->parsed()) {
      const auto fb = parse_flavor(flavor_b);
      if (!fb) throw Error(ErrorCode::InvalidArgument, "unknown flavor " + flavor_b);
      const CompareResult r = cmd_compare(c, *fb, pairs);
      if (format == "csv") {
        if (!emit(r.csv)) return kExitConfig;
        const std::string sidecar = output.empty() ? std::string() : output + ".summary.json";
        if (sidecar.empty()) {
          err << r.summary.dump(2) << '\n';
        } else {
          std::ofstream f(sidecar, std::ios::binary);
          f << r.summary.dump(2) << '\n';
        }
        return kExitOk;
      }
      result = r.summary;
    }
    return emit(result.dump(2) + "\n") ? code : kExitConfig;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    err << e.what() << '\n';
    out << error_json(to_string(e.code()), e.what()).dump(2) << '\n';
    return code;
  }
}

}  // namespace psphere::cli
