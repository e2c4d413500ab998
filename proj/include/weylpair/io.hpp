#pragma once

// JSON and CSV formats.
//   matrix    row-major nested arrays of [re, im]
//   window    {"lo": [...], "hi": [...], "weight": w}
//   P-set     {"dim", "lo", "hi", "kind": "pspace" | "yset", "points"}
//   pair      {"window", "fibers", "generators": [matrix, ...], "label"}
//   bundle    pair fields plus {"depth", "budget"}
//   family    {"kappa", "P": [matrix, ...], "Q": [matrix, ...]}
//   ev point  {"a", "b", "c", "d", "p0": [p, q]}

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylpair/commutant.hpp"
#include "weylpair/counterexample.hpp"
#include "weylpair/dilation.hpp"
#include "weylpair/lattice.hpp"
#include "weylpair/types.hpp"
#include "weylpair/weyl_pair.hpp"

namespace weylpair::io {

using Json = nlohmann::json;

namespace detail {

template <class F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, what + ": " + e.what());
  }
}

}  // namespace detail

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

/// `cols` is needed only for matrices without rows.
inline Matrix matrix_from_json(const Json& j, Eigen::Index cols = 0) {
  return detail::parsing("matrix", [&] {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows > 0) cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Json& row = j.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorCode::ParseError, "ragged matrix rows");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const Json& e = row.at(static_cast<std::size_t>(c));
        m(i, c) = e.is_number() ? Complex(e.get<double>(), 0.0) : Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    return m;
  });
}

inline Json window_to_json(const LatticeWindow& w) { return {{"lo", w.lo()}, {"hi", w.hi()}, {"weight", w.weight()}}; }

inline LatticeWindow window_from_json(const Json& j) {
  return detail::parsing("window", [&] {
    return LatticeWindow(j.at("lo").get<Point>(), j.at("hi").get<Point>(), j.value("weight", 1.0));
  });
}

inline Json pset_to_json(const PSet& a) {
  return {{"dim", a.window().dim()},
          {"lo", a.window().lo()},
          {"hi", a.window().hi()},
          {"kind", to_string(a.kind())},
          {"points", a.points()}};
}

inline PSet pset_from_json(const Json& j) {
  return detail::parsing("P-set", [&] {
    const LatticeWindow w(j.at("lo").get<Point>(), j.at("hi").get<Point>(), j.value("weight", 1.0));
    if (j.contains("dim") && j.at("dim").get<int>() != w.dim())
      throw Error(ErrorCode::ParseError, "P-set dim disagrees with its window");
    const std::string kind = j.value("kind", "pspace");
    if (kind != "pspace" && kind != "yset") throw Error(ErrorCode::ParseError, "unknown P-set kind '" + kind + "'");
    return validate_pset(j.at("points").get<std::vector<Point>>(), w, kind == "pspace" ? SetKind::PSpace : SetKind::YSet);
  });
}

inline Json pair_to_json(const WeylPair& p) {
  Json gens = Json::array();
  for (const auto& g : p.generators()) gens.push_back(matrix_to_json(Matrix(g)));
  return {{"window", window_to_json(p.window())}, {"fibers", p.fibers()}, {"generators", gens}, {"label", p.label()}};
}

inline WeylPair pair_from_json(const Json& j) {
  return detail::parsing("pair", [&] {
    const LatticeWindow w = window_from_json(j.at("window"));
    auto fibers = j.at("fibers").get<std::vector<int>>();
    Eigen::Index n = 0;
    for (int f : fibers) n += f;
    std::vector<SparseMatrix> gens;
    for (const auto& g : j.at("generators")) gens.push_back(matrix_from_json(g, n).sparseView(1.0, 0.0));
    return WeylPair(w, std::move(fibers), std::move(gens), j.value("label", std::string{}));
  });
}

inline Json bundle_to_json(const DilationBundle& b) {
  Json j = pair_to_json(b.base());
  j["depth"] = b.depth();
  j["budget"] = b.budget();
  return j;
}

inline DilationBundle bundle_from_json(const Json& j) {
  return detail::parsing("bundle", [&] { return minimal_dilation(pair_from_json(j), j.at("depth").get<int>()); });
}

inline Json summary_to_json(const AlgebraSummary& s) {
  return {{"commutant_dim", s.commutant_dim},
          {"center_dim", s.center_dim},
          {"is_factor", s.is_factor},
          {"is_irreducible", s.is_irreducible}};
}

inline Json decomposition_to_json(const Decomposition& d) {
  Json out = Json::array();
  for (const auto& c : d.components)
    out.push_back({{"pspace", pset_to_json(c.pspace)}, {"translation", c.translation}, {"multiplicity", c.multiplicity}});
  return out;
}

inline Json family_to_json(const ProjectionFamily& f) {
  Json p = Json::array(), q = Json::array();
  for (const auto& m : f.P()) p.push_back(matrix_to_json(m));
  for (const auto& m : f.Q()) q.push_back(matrix_to_json(m));
  return {{"kappa", f.kappa()}, {"P", p}, {"Q", q}};
}

inline ProjectionFamily family_from_json(const Json& j) {
  return detail::parsing("family", [&] {
    const int kappa = j.at("kappa").get<int>();
    std::vector<Matrix> p, q;
    for (const auto& m : j.at("P")) p.push_back(matrix_from_json(m, kappa));
    for (const auto& m : j.at("Q")) q.push_back(matrix_from_json(m, kappa));
    return ProjectionFamily(kappa, std::move(p), std::move(q));
  });
}

inline Json evaluation_point_to_json(const EvaluationPoint& e) {
  return {{"a", e.a}, {"b", e.b}, {"c", e.c}, {"d", e.d}, {"p0", e.p0}};
}

inline EvaluationPoint evaluation_point_from_json(const Json& j) {
  return detail::parsing("evaluation point", [&] {
    EvaluationPoint e;
    e.a = j.value("a", e.a);
    e.b = j.value("b", e.b);
    e.c = j.value("c", e.c);
    e.d = j.value("d", e.d);
    if (j.contains("p0")) e.p0 = j.at("p0").get<std::array<double, 2>>();
    e.validate();
    return e;
  });
}

/// Shortest decimal form that keeps 17 significant digits.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV "s,t,value", one row per sample in the given order.
inline std::string heatmap_csv(const std::vector<std::array<double, 3>>& field) {
  std::ostringstream out;
  out << "s,t,value\n";
  for (const auto& r : field) out << format_number(r[0]) << ',' << format_number(r[1]) << ',' << format_number(r[2]) << '\n';
  return out.str();
}

inline void export_heatmap(const std::vector<std::array<double, 3>>& field, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  f << heatmap_csv(field);
  if (!f) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

inline Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace weylpair::io
