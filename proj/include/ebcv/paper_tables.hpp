#pragma once

// Printed tables, transcribed once into data/paper_tables.json.

#include <array>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebcv/expression.hpp"
#include "ebcv/manifold.hpp"
#include "json.hpp"

namespace ebcv {

struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symbols available to table expressions: the coordinates, K, m and l.
inline const SymbolTable& table_symbols() {
  static const SymbolTable t({"r", "s", "t", "w", "x", "y", "z", "K", "m", "l"});
  return t;
}

inline std::array<double, 10> table_slots(const CoordPoint& q, const ModelParams& p) {
  std::array<double, 10> v{};
  for (int i = 0; i < 7; ++i) v[static_cast<std::size_t>(i)] = q.c[static_cast<std::size_t>(i)];
  v[7] = detail::k_factor_t(q.c, p);
  v[8] = p.m;
  v[9] = p.l;
  return v;
}

struct PrintedExpr {
  std::string text;
  Expression expr;

  double operator()(const CoordPoint& q, const ModelParams& p) const {
    const auto s = table_slots(q, p);
    return expr.eval(std::span<const double>(s));
  }
};

inline PrintedExpr compile_printed(const std::string& text) {
  return {text, table_symbols().compile(text)};
}

/// A frame-valued printed formula: lhs(a, b) = sum_k coeffs[k] X_k.
struct PrintedVector {
  int a = 0, b = 0;
  std::string printed;
  std::map<int, PrintedExpr> coeffs;  // 1-based frame index
  std::string note;
  int erratum_component = 0;  // 0 when no erratum is recorded
  PrintedExpr erratum_oracle;

  FrameVector eval(const CoordPoint& q, const ModelParams& p) const {
    FrameVector v;
    for (const auto& [k, e] : coeffs) v(k) = e(q, p);
    return v;
  }
  std::string coeff_text(int k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? "0" : it->second.text;
  }
};

struct PrintedCurvature {
  std::array<int, 4> index{};
  PrintedExpr value;
};

struct PaperTables {
  std::string source;
  std::vector<PrintedVector> brackets_m0, connection_m0, brackets_appendix,
      connection_appendix, torsion_horizontal;
  std::vector<PrintedCurvature> curvature_m0, curvature_appendix;
  std::array<PrintedExpr, 7> ricci_m0_diagonal;
  std::array<std::array<PrintedExpr, 7>, 7> ricci_proposition;
  PrintedExpr scalar_corollary;
  std::string torsion_vertical_horizontal;
  PrintedExpr cyclic_sum_145;
  std::vector<std::string> killing_pde_printed, killing_pde_m0_printed;
  std::map<int, std::string> killing_pde_errata;  // 1-based equation number
  std::string lemma_sdot_printed, lemma_sdot_generic;
  std::string closed_form_printed, closed_form_vertical;
  struct BCVCase {
    int number;
    std::string label, printed;
  };
  std::vector<BCVCase> bcv_cases;
};

namespace detail {

inline const nlohmann::json& need(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw TableError(std::string("paper tables: missing key '") + key + "'");
  return j.at(key);
}

inline std::vector<PrintedVector> read_vectors(const nlohmann::json& j, const char* key) {
  std::vector<PrintedVector> out;
  for (const auto& e : need(j, key)) {
    PrintedVector v;
    v.a = e.at("a").get<int>();
    v.b = e.at("b").get<int>();
    v.printed = e.at("printed").get<std::string>();
    for (const auto& [k, s] : e.at("coeffs").items()) {
      const int idx = std::stoi(k);
      check_frame_index(idx);
      v.coeffs.emplace(idx, compile_printed(s.get<std::string>()));
    }
    if (e.contains("note")) v.note = e.at("note").get<std::string>();
    if (e.contains("erratum")) {
      v.erratum_component = e.at("erratum").at("component").get<int>();
      v.note = e.at("erratum").at("note").get<std::string>();
      v.erratum_oracle = compile_printed(e.at("erratum").at("oracle").get<std::string>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<PrintedCurvature> read_curvature(const nlohmann::json& j, const char* key) {
  std::vector<PrintedCurvature> out;
  for (const auto& e : need(j, key)) {
    PrintedCurvature c;
    c.index = e.at("index").get<std::array<int, 4>>();
    c.value = compile_printed(e.at("printed").get<std::string>());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

inline PaperTables parse_tables(const nlohmann::json& j, std::string source = "<memory>") {
  PaperTables t;
  t.source = std::move(source);
  try {
    t.brackets_m0 = detail::read_vectors(j, "brackets_m0");
    t.connection_m0 = detail::read_vectors(j, "connection_m0");
    t.brackets_appendix = detail::read_vectors(j, "brackets_appendix");
    t.connection_appendix = detail::read_vectors(j, "connection_appendix");
    t.torsion_horizontal = detail::read_vectors(j, "torsion_horizontal");
    t.curvature_m0 = detail::read_curvature(j, "curvature_m0");
    t.curvature_appendix = detail::read_curvature(j, "curvature_appendix");
    const auto& diag = detail::need(j, "ricci_m0_diagonal");
    const auto& ric = detail::need(j, "ricci_proposition");
    if (diag.size() != 7 || ric.size() != 7) throw TableError("paper tables: Ricci tables must be 7x7");
    for (std::size_t a = 0; a < 7; ++a) {
      t.ricci_m0_diagonal[a] = compile_printed(diag[a].get<std::string>());
      if (ric[a].size() != 7) throw TableError("paper tables: Ricci tables must be 7x7");
      for (std::size_t b = 0; b < 7; ++b)
        t.ricci_proposition[a][b] = compile_printed(ric[a][b].get<std::string>());
    }
    t.scalar_corollary = compile_printed(detail::need(j, "scalar_corollary").get<std::string>());
    t.torsion_vertical_horizontal =
        detail::need(j, "torsion_vertical_horizontal").at("printed").get<std::string>();
    t.cyclic_sum_145 =
        compile_printed(detail::need(j, "cyclic_sum_145").at("printed").get<std::string>());
    t.killing_pde_printed = detail::need(j, "killing_pde_printed").get<std::vector<std::string>>();
    t.killing_pde_m0_printed =
        detail::need(j, "killing_pde_m0_printed").get<std::vector<std::string>>();
    if (t.killing_pde_printed.size() != 28 || t.killing_pde_m0_printed.size() != 28)
      throw TableError("paper tables: Killing systems need 28 equations");
    for (const auto& e : detail::need(j, "killing_pde_errata"))
      t.killing_pde_errata[e.at("equation").get<int>()] = e.at("note").get<std::string>();
    const auto& ls = detail::need(j, "lemma_sdot");
    t.lemma_sdot_printed = ls.at("printed").get<std::string>();
    t.lemma_sdot_generic = ls.at("generic").get<std::string>();
    const auto& cf = detail::need(j, "closed_form");
    t.closed_form_printed = cf.at("printed").get<std::string>();
    t.closed_form_vertical = cf.at("vertical").get<std::string>();
    for (const auto& e : detail::need(j, "bcv_cases"))
      t.bcv_cases.push_back({e.at("case").get<int>(), e.at("label").get<std::string>(),
                             e.at("printed").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw TableError(std::string("paper tables: ") + e.what());
  } catch (const ExpressionError& e) {
    throw TableError(std::string("paper tables: ") + e.what());
  }
  return t;
}

inline PaperTables load_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError("cannot open paper tables: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw TableError("malformed paper tables " + path + ": " + e.what());
  }
  return parse_tables(j, path);
}

#ifdef EBCV_DEFAULT_TABLES
inline constexpr const char* kDefaultTablesPath = EBCV_DEFAULT_TABLES;
#else
inline constexpr const char* kDefaultTablesPath = "data/paper_tables.json";
#endif

}  // namespace ebcv
