#pragma once

// Batch scenarios: one JSON document describes a run, the result is a JSON report whose
// checks each name the invariant they exercise.

#include <algorithm>
#include <cstdint>
#include <map>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "weylpair/commutant.hpp"
#include "weylpair/counterexample.hpp"
#include "weylpair/dilation.hpp"
#include "weylpair/io.hpp"
#include "weylpair/lattice.hpp"
#include "weylpair/weyl_pair.hpp"

namespace weylpair {

inline const std::vector<std::string>& scenario_commands() {
  static const std::vector<std::string> names{"pspace-enum", "pair-build", "pair-check", "dilate",
                                              "decompose",   "commutant",  "equiv",      "counterexample"};
  return names;
}

inline const std::vector<std::string>& counterexample_subcommands() {
  static const std::vector<std::string> names{"increasing", "plateau", "pair", "transfer", "spec"};
  return names;
}

struct ScenarioOptions {
  std::string command;
  std::string subcommand;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  /// Directory that relative file references in the scenario resolve against.
  std::filesystem::path base_dir = ".";
};

struct Report {
  io::Json json;
  bool ok = true;
  std::string failed;
};

namespace scenario_detail {

using io::Json;

class Checks {
 public:
  /// Passes when value <= threshold.
  void at_most(const std::string& name, double value, double threshold) { add(name, value <= threshold, value, threshold, "<="); }
  void at_least(const std::string& name, double value, double threshold) { add(name, value >= threshold, value, threshold, ">="); }
  void holds(const std::string& name, bool value) {
    list_.push_back({{"name", name}, {"pass", value}});
    note(name, value);
  }

  const Json& list() const { return list_; }
  bool ok() const { return failed_.empty(); }
  const std::string& failed() const { return failed_; }

 private:
  void add(const std::string& name, bool pass, double value, double threshold, const char* rel) {
    list_.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"relation", rel}, {"pass", pass}});
    note(name, pass);
  }
  void note(const std::string& name, bool pass) {
    if (!pass && failed_.empty()) failed_ = name;
  }

  Json list_ = Json::array();
  std::string failed_;
};

struct Context {
  const Json& sc;
  const ScenarioOptions& opt;
  std::uint64_t seed;
  double tol;
  Checks checks;
  Json result = Json::object();

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : opt.base_dir / path;
  }

  void write_artifact(const std::string& name, const std::string& text) {
    if (!opt.out_dir) return;
    std::filesystem::create_directories(*opt.out_dir);
    const auto path = std::filesystem::path(*opt.out_dir) / name;
    io::write_text_file(path.string(), text);
    result["artifacts"].push_back(name);
  }
};

inline PSet pspace_from(const Json& j, const LatticeWindow& w) {
  if (j.contains("points")) return validate_pset(j.at("points").get<std::vector<Point>>(), w, SetKind::PSpace);
  if (j.contains("generators")) return upset_generated(w, j.at("generators").get<std::vector<Point>>());
  throw Error(ErrorCode::ParseError, "pspace needs 'points' or 'generators'");
}

/// A pair given by file, by a single canonical (A, k), or by a list of canonical components.
inline WeylPair pair_from(const Json& j, Context& ctx) {
  return io::detail::parsing("pair specification", [&]() -> WeylPair {
    if (j.contains("pair_file")) return io::pair_from_json(io::read_json_file(ctx.resolve(j.at("pair_file").get<std::string>()).string()));
    if (j.contains("pair")) return io::pair_from_json(j.at("pair"));
    const LatticeWindow w = io::window_from_json(j.at("window"));
    std::vector<WeylPair> parts;
    if (j.contains("components")) {
      for (const auto& c : j.at("components")) parts.push_back(build_pspace_pair(pspace_from(c.at("pspace"), w), c.value("k", 1)));
    } else {
      parts.push_back(build_pspace_pair(pspace_from(j.at("pspace"), w), j.value("k", 1)));
    }
    WeylPair p = direct_sum(parts);
    if (j.value("conjugate", false)) {
      std::mt19937_64 rng(ctx.seed);
      p = conjugate_fibers(p, rng);
    }
    return p;
  });
}

inline ProjectionFamily family_from(const Json& sc) {
  if (!sc.contains("family")) return demo_family();
  const Json& f = sc.at("family");
  if (f.is_string()) {
    if (f.get<std::string>() != "demo") throw Error(ErrorCode::ParseError, "unknown family '" + f.get<std::string>() + "'");
    return demo_family();
  }
  if (f.contains("demo")) {
    const Json& d = f.at("demo");
    return demo_family(d.value("kappa", 6), d.value("seed", std::uint64_t{7}));
  }
  return io::family_from_json(f);
}

inline GridSpec grid_from(const Json& sc) {
  GridSpec g;
  if (!sc.contains("grid")) return g;
  const Json& j = sc.at("grid");
  return io::detail::parsing("grid", [&] {
    g.q = j.value("q", g.q);
    g.extent = j.value("extent", g.extent);
    if (j.contains("offset")) g.offset = j.at("offset").get<double>();
    return g;
  });
}

inline Json points_json(const std::vector<Index2>& pts) {
  Json out = Json::array();
  for (const auto& [i, j] : pts) out.push_back({i, j});
  return out;
}

inline void run_pspace_enum(Context& ctx) {
  const LatticeWindow w = io::window_from_json(ctx.sc.at("window"));
  const auto all = enumerate_pspaces(w, ctx.sc.value("budget", std::uint64_t{1} << 24));
  ctx.result["count"] = all.size();
  bool dual = true;
  for (const auto& a : all) {
    const PSet r = reflect_pset(a);
    dual = dual && r.kind() == SetKind::YSet && reflect_pset(r) == a;
    const auto comp = complement_points(a);
    if (!comp.empty()) {
      try {
        validate_pset(comp, w, SetKind::YSet);
      } catch (const Error&) {
        dual = false;
      }
    }
  }
  ctx.checks.holds("lattice_model.reflection_and_complement_are_ysets", dual);
  if (ctx.sc.value("list", all.size() <= 512)) {
    Json list = Json::array();
    for (const auto& a : all) list.push_back(a.points());
    ctx.result["pspaces"] = list;
  }
  if (ctx.sc.contains("expected_count"))
    ctx.checks.holds("lattice_model.enumeration_count", all.size() == ctx.sc.at("expected_count").get<std::size_t>());
}

inline void run_pair_build(Context& ctx) {
  const WeylPair p = pair_from(ctx.sc, ctx);
  ctx.result["dim"] = p.dim();
  ctx.result["pair"] = io::pair_to_json(p);
  ctx.checks.at_most("weyl_pair.graded_shift", graded_shift_defect(p), ctx.tol);
  ctx.write_artifact("pair.json", io::pair_to_json(p).dump(2) + "\n");
}

inline int default_margin(const WeylPair& p, const Json& sc) {
  int m = sc.value("margin", 2);
  for (int i = 0; i < p.spatial_dim(); ++i) m = std::min(m, p.window().side(i) - 1);
  return std::max(m, 0);
}

inline void run_pair_check(Context& ctx) {
  const WeylPair p = pair_from(ctx.sc, ctx);
  const int margin = default_margin(p, ctx.sc);
  const SafeRegion safe{margin};
  const auto as = probe_box(p.spatial_dim(), margin);
  const double weyl = max_weyl_defect(p, dual_grid(p.window()), as, safe);
  double iso = 0.0;
  for (const auto& a : as) iso = std::max(iso, isometry_defect(p, a, safe));
  const double comm = check_commuting_ranges(p, as);
  ctx.result["dim"] = p.dim();
  ctx.result["margin"] = margin;
  ctx.result["weyl_defect"] = weyl;
  ctx.result["isometry_defect"] = iso;
  ctx.result["range_commutator"] = comm;
  ctx.checks.at_most("weyl_pair.graded_shift", graded_shift_defect(p), ctx.tol);
  ctx.checks.at_most("weyl_pair.weak_weyl_relation", weyl, ctx.tol);
  ctx.checks.at_most("weyl_pair.isometry_on_safe_region", iso, ctx.tol);
  if (ctx.sc.value("expect_commuting_ranges", true)) ctx.checks.at_most("weyl_pair.commuting_ranges", comm, ctx.tol);
}

inline void run_dilate(Context& ctx) {
  const WeylPair p = pair_from(ctx.sc, ctx);
  const int depth = ctx.sc.value("depth", 1);
  const DilationBundle b = minimal_dilation(p, depth);
  const auto rep = check_dilation(b);
  ctx.result["dim"] = b.dim();
  ctx.result["depth"] = depth;
  ctx.result["budget"] = b.budget();
  ctx.result["axioms"] = {{"group_law", rep.group_law},     {"unitarity", rep.unitarity},
                          {"extension", rep.extension},     {"exhaustion", rep.exhaustion},
                          {"embed_isometry", rep.embed_isometry}};
  ctx.result["observations"] = {{"covariance", rep.covariance},
                                {"monotonicity", rep.monotonicity},
                                {"commutation", rep.commutation},
                                {"idempotency", rep.idempotency}};
  ctx.checks.at_most("dilation_covariant.embed_isometry", rep.embed_isometry, ctx.tol);
  ctx.checks.at_most("dilation_covariant.group_law", rep.group_law, ctx.tol);
  ctx.checks.at_most("dilation_covariant.unitarity", rep.unitarity, ctx.tol);
  ctx.checks.at_most("dilation_covariant.extends_V", rep.extension, ctx.tol);
  ctx.checks.at_most("dilation_covariant.exhaustion", rep.exhaustion, ctx.tol);
  ctx.checks.at_most("dilation_covariant.E_covariance", rep.covariance, ctx.tol);
  ctx.checks.at_most("dilation_covariant.E_monotone", rep.monotonicity, ctx.tol);
  ctx.checks.at_most("dilation_covariant.E_commuting", rep.commutation, ctx.tol);

  const auto ext = check_extension(b, dual_grid(p.window()));
  ctx.result["extension"] = {{"c1", ext.c1}, {"c2", ext.c2}, {"group_law", ext.group_law}, {"commutes_E", ext.commutes_E}};
  ctx.checks.at_most("dilation_covariant.extended_U_C1", ext.c1, ctx.tol);
  ctx.checks.at_most("dilation_covariant.extended_U_C2", ext.c2, ctx.tol);
  ctx.checks.at_most("dilation_covariant.extended_U_group_law", ext.group_law, ctx.tol);
  ctx.checks.at_most("dilation_covariant.extended_U_commutes_with_E", ext.commutes_E, ctx.tol);

  const CovariantRep cov(b);
  const auto spectrum = joint_spectrum(cov);
  Json patterns = Json::array();
  for (const auto& sp : spectrum) patterns.push_back({{"points", sp.pattern.points()}, {"dimension", sp.dimension}});
  ctx.result["joint_spectrum"] = patterns;

  const WeylPair phi = compress_phi(cov);
  const WeylPair expect = restrict_to_window(p, phi.window());
  const auto eq = unitarily_equivalent(pair_rep_gens(phi), pair_rep_gens(expect));
  ctx.result["round_trip_residual"] = eq.residual;
  ctx.checks.holds("dilation_covariant.compress_after_dilate_is_equivalent", eq.equivalent);
  ctx.write_artifact("bundle.json", io::bundle_to_json(b).dump(2) + "\n");
}

inline void run_decompose(Context& ctx) {
  const WeylPair p = pair_from(ctx.sc, ctx);
  const Decomposition d = decompose(p);
  ctx.result["components"] = io::decomposition_to_json(d);
  ctx.result["reassembly_residual"] = d.reassembly_residual;
  ctx.checks.holds("dilation_covariant.reassembly_equivalent", d.reassembly_equivalent);
  if (ctx.sc.contains("components")) {
    // compare against the declared components, merging equal sets
    std::map<std::vector<Point>, int> want, got;
    const LatticeWindow w = io::window_from_json(ctx.sc.at("window"));
    for (const auto& c : ctx.sc.at("components")) want[pspace_from(c.at("pspace"), w).points()] += c.value("k", 1);
    for (const auto& c : d.components) got[c.pspace.points()] += c.multiplicity;
    ctx.checks.holds("dilation_covariant.recovers_components", want == got);
  }
}

inline RepGens gens_from(const Json& j, Context& ctx) {
  if (j.contains("gens")) {
    std::vector<Matrix> gens;
    for (const auto& m : j.at("gens")) gens.push_back(io::matrix_from_json(m));
    if (gens.empty()) throw Error(ErrorCode::ParseError, "'gens' must not be empty");
    return RepGens(static_cast<int>(gens.front().rows()), std::move(gens));
  }
  const std::string mode = j.value("sampling", "generators");
  return pair_rep_gens(pair_from(j, ctx), mode == "full" ? CharacterSampling::Full : CharacterSampling::Generators);
}

inline void run_commutant(Context& ctx) {
  const RepGens r = gens_from(ctx.sc, ctx);
  EngineOptions eo;
  eo.seed = ctx.seed;
  const AlgebraSummary s = summarize(r, eo);
  ctx.result["summary"] = io::summary_to_json(s);
  ctx.checks.holds("commutant_engine.flags_consistent",
                   s.is_irreducible == (s.commutant_dim == 1) && s.is_factor == (s.center_dim == 1) &&
                       s.center_dim <= s.commutant_dim);
  double closure = 0.0;
  for (const auto& t : s.commutant_basis) closure = std::max(closure, expand_in_basis(s.commutant_basis, t.adjoint()).second);
  ctx.checks.at_most("commutant_engine.adjoint_closed", closure, tol::kKernel);
  if (ctx.sc.contains("expected")) {
    const Json& e = ctx.sc.at("expected");
    for (const char* key : {"commutant_dim", "center_dim", "is_factor", "is_irreducible"})
      if (e.contains(key)) ctx.checks.holds(std::string("commutant_engine.expected_") + key, e.at(key) == ctx.result["summary"][key]);
  }
  if (ctx.sc.value("emit_basis", false)) {
    Json basis = Json::array();
    for (const auto& t : s.commutant_basis) basis.push_back(io::matrix_to_json(t));
    ctx.result["commutant_basis"] = basis;
  }
}

inline void run_equiv(Context& ctx) {
  const RepGens a = gens_from(ctx.sc.at("left"), ctx);
  const RepGens b = gens_from(ctx.sc.at("right"), ctx);
  EngineOptions eo;
  eo.seed = ctx.seed;
  const auto res = unitarily_equivalent(a, b, eo);
  ctx.result["equivalent"] = res.equivalent;
  ctx.result["intertwiner_dim"] = res.intertwiner_dim;
  if (res.equivalent) {
    ctx.result["witness_residual"] = res.residual;
    ctx.checks.at_most("commutant_engine.witness_residual", res.residual, tol::kWitness);
  }
  if (ctx.sc.contains("expected")) ctx.checks.holds("commutant_engine.expected_equivalence", ctx.sc.at("expected").get<bool>() == res.equivalent);
}

inline void run_counterexample(Context& ctx, const std::string& sub) {
  const ProjectionFamily fam = family_from(ctx.sc);
  const EvaluationPoint ev = ctx.sc.contains("ev") ? io::evaluation_point_from_json(ctx.sc.at("ev")) : EvaluationPoint{};
  const GridSpec grid = grid_from(ctx.sc);
  ctx.result["subcommand"] = sub;
  ctx.result["kappa"] = fam.kappa();
  ctx.result["grid"] = {{"q", grid.q}, {"extent", grid.extent}, {"offset", grid.offset_value()}, {"count", grid.count()}};
  if (sub == "increasing") {
    const double v = check_increasing(fam, ev, grid);
    ctx.result["violation"] = v;
    ctx.checks.at_most("counterexample_r2.E_increasing", v, 1e-12);
    ctx.write_artifact("heatmap.csv", io::heatmap_csv(rank_field(fam, ev, grid)));
  } else if (sub == "plateau") {
    const int mmax = ctx.sc.value("max_index", 2);
    Json cells = Json::array();
    const double floor_fraction = (1.0 - ev.b) * (1.0 - ev.d) - 2.0 * grid.step();
    for (int m = 0; m <= mmax; ++m)
      for (int n = 0; n <= mmax; ++n) {
        const auto pr = plateau(fam, ev, m, n, grid);
        cells.push_back({{"m", m}, {"n", n}, {"fraction", pr.fraction}, {"cell_points", pr.cell_points}, {"contains_proof_region", pr.contains_proof_region}});
        const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
        ctx.checks.at_least("counterexample_r2.plateau_fraction" + tag, pr.fraction, floor_fraction);
        ctx.checks.holds("counterexample_r2.plateau_contains_proof_region" + tag, pr.contains_proof_region);
      }
    ctx.result["cells"] = cells;
  } else if (sub == "pair") {
    const LatticeWindow w = ctx.sc.contains("window") ? io::window_from_json(ctx.sc.at("window"))
                                                        : LatticeWindow::cube(2, 0, 2 * grid.q + 2);
    const WeylPair p = build_r2_pair(fam, ev, grid, w);
    const int margin = std::min({grid.q, w.side(0) - 1, w.side(1) - 1});
    const SafeRegion safe{margin};
    const std::vector<Point> steps{{1, 0}, {0, 1}};
    const double weyl = max_weyl_defect(p, dual_grid(w), steps, safe);
    const std::vector<Point> probe{{1, 0}, {0, 1}, {grid.q, 0}, {0, grid.q}};
    const double comm = check_commuting_ranges(p, probe);
    double compression = 0.0;
    for (const auto& a : std::vector<Index2>{{1, 0}, {0, 1}, {grid.q, 0}, {0, grid.q}, {1, 1}})
      compression = std::max(compression, compression_identity_defect(fam, ev, grid, a.first, a.second));
    ctx.result["dim"] = p.dim();
    ctx.result["weyl_defect"] = weyl;
    ctx.result["range_commutator"] = comm;
    ctx.result["compression_identity_defect"] = compression;
    ctx.checks.at_most("counterexample_r2.weak_weyl_relation", weyl, ctx.tol);
    ctx.checks.at_most("counterexample_r2.compression_identity", compression, ctx.tol);
    ctx.checks.at_least("counterexample_r2.non_commuting_ranges", comm, ctx.sc.value("min_commutator", 0.1));
    ctx.write_artifact("pair.json", io::pair_to_json(p).dump(2) + "\n");
  } else if (sub == "transfer") {
    EngineOptions eo;
    eo.seed = ctx.seed;
    const auto t = commutant_transfer_check(fam, ev, grid, eo);
    ctx.result["sampled_dim"] = t.sampled_dim;
    ctx.result["family_dim"] = t.family_dim;
    ctx.result["angle_sine"] = t.angle_sine;
    ctx.checks.holds("counterexample_r2.commutant_transfer", t.equal);
  } else if (sub == "spec") {
    const auto sup = spec_support(fam, ev, grid);
    ctx.result["support"] = points_json(sup);
    ctx.result["support_size"] = sup.size();
    bool nonzero = true;
    for (const auto& p : fam.P()) nonzero = nonzero && p.norm() > 0.5;
    for (const auto& q : fam.Q()) nonzero = nonzero && q.norm() > 0.5;
    if (nonzero) {
      // with every projection nonzero the support depends on (ev, grid) only
      bool match = true;
      const auto vals = grid.values();
      std::vector<Index2> predicted;
      for (int i = 0; i < static_cast<int>(vals.size()); ++i)
        for (int j = 0; j < static_cast<int>(vals.size()); ++j) {
          const auto c = select_cell(ev, vals[i], vals[j]);
          if (c && (c->first >= 1 || c->second >= 1)) predicted.emplace_back(i, j);
        }
      match = predicted == sup;
      ctx.checks.holds("counterexample_r2.support_independent_of_family", match);
    }
  } else {
    throw Error(ErrorCode::ParseError, "unknown counterexample subcommand '" + sub + "'");
  }
}

}  // namespace scenario_detail

/// Runs one scenario. Failing checks are reported, not thrown; malformed input throws
/// ParseError and library failures propagate as Error.
inline Report run_scenario(const io::Json& sc, const ScenarioOptions& opt) {
  using namespace scenario_detail;
  std::string command = opt.command;
  if (sc.contains("command")) {
    const auto declared = sc.at("command").get<std::string>();
    if (command.empty()) command = declared;
    if (declared != command) throw Error(ErrorCode::ParseError, "scenario declares command '" + declared + "'");
  }
  const auto& cmds = scenario_commands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
    throw Error(ErrorCode::ParseError, "unknown command '" + command + "'");

  const std::uint64_t seed = opt.seed.value_or(sc.value("seed", std::uint64_t{1}));
  const double tolerance = opt.tol.value_or(sc.value("tol", tol::kStructural));
  if (!(tolerance > 0.0)) throw Error(ErrorCode::ParseError, "tolerance must be positive");
  Context ctx{sc, opt, seed, tolerance, {}, {}};

  std::string sub;
  if (command == "pspace-enum") run_pspace_enum(ctx);
  else if (command == "pair-build") run_pair_build(ctx);
  else if (command == "pair-check") run_pair_check(ctx);
  else if (command == "dilate") run_dilate(ctx);
  else if (command == "decompose") run_decompose(ctx);
  else if (command == "commutant") run_commutant(ctx);
  else if (command == "equiv") run_equiv(ctx);
  else {
    sub = !opt.subcommand.empty() ? opt.subcommand : sc.value("subcommand", std::string{});
    if (sub.empty()) throw Error(ErrorCode::ParseError, "counterexample needs a subcommand");
    run_counterexample(ctx, sub);
  }

  Report rep;
  rep.ok = ctx.checks.ok();
  rep.failed = ctx.checks.failed();
  rep.json = {{"command", command}, {"seed", seed}, {"tol", tolerance}, {"ok", rep.ok}, {"checks", ctx.checks.list()},
              {"result", ctx.result}};
  if (!sub.empty()) rep.json["subcommand"] = sub;
  rep.json["failed"] = rep.ok ? io::Json(nullptr) : io::Json(rep.failed);
  return rep;
}

inline Report run_scenario_file(const std::string& path, ScenarioOptions opt) {
  const io::Json sc = io::read_json_file(path);
  opt.base_dir = std::filesystem::path(path).parent_path();
  if (opt.base_dir.empty()) opt.base_dir = ".";
  return run_scenario(sc, opt);
}

}  // namespace weylpair
