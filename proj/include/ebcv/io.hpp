#pragma once

// File formats: trajectory CSV/JSON, Killing basis export, polynomial field input.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebcv/geodesic.hpp"
#include "ebcv/killing.hpp"
#include "ebcv/polynomial.hpp"
#include "json.hpp"

namespace ebcv {

struct MalformedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTrajectoryHeader = "u,r,s,t,w,x,y,z,pr,ps,pt,pw,px,py,pz,H";

/// 17 significant digits.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << kTrajectoryHeader << '\n';
  for (const auto& s : tr.samples) {
    os << g17(s.u);
    for (double v : s.state.q.c) os << ',' << g17(v);
    for (double v : s.state.p) os << ',' << g17(v);
    os << ',' << g17(s.H) << '\n';
  }
}

inline nlohmann::ordered_json trajectory_json(const Trajectory& tr) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(tr.mode);
  j["m"] = tr.params.m;
  j["l"] = tr.params.l;
  j["h"] = tr.h;
  j["status"] = to_string(tr.status);
  if (tr.status != TrajectoryStatus::Ok) {
    j["failed_step"] = tr.failed_step;
    j["diagnostic"] = tr.diagnostic;
  }
  j["columns"] = {"u", "r", "s", "t", "w", "x", "y", "z", "pr", "ps", "pt", "pw", "px", "py", "pz", "H"};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& s : tr.samples) {
    std::vector<double> row{s.u};
    row.insert(row.end(), s.state.q.c.begin(), s.state.q.c.end());
    row.insert(row.end(), s.state.p.begin(), s.state.p.end());
    row.push_back(s.H);
    rows.push_back(row);
  }
  j["samples"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------
// Polynomial fields as JSON: {"components": [7 maps "e_r,...,e_z" -> coefficient]}
// holding the frame coefficients f_1..f_7 of X = sum f_a X_a.

inline nlohmann::ordered_json poly_json(const Poly2& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (int k = 0; k < Poly2::kTerms; ++k)
    if (p.c[static_cast<std::size_t>(k)] != 0.0) j[Poly2::key_of(k)] = p.c[static_cast<std::size_t>(k)];
  return j;
}

inline nlohmann::ordered_json field_json(const PolyVectorField& X) {
  auto comps = nlohmann::ordered_json::array();
  for (const auto& f : X.f) comps.push_back(poly_json(f));
  return comps;
}

inline nlohmann::ordered_json killing_basis_json(double l) {
  const auto basis = killing_basis_m0(l);
  nlohmann::ordered_json j;
  j["m"] = 0.0;
  j["l"] = l;
  j["dimension"] = basis.size();
  j["basis"] = "frame coefficients f_a of X = sum f_a X_a; keys are exponents of (r,s,t,w,x,y,z)";
  auto entries = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    nlohmann::ordered_json e;
    e["parameter"] = KillingParamsM0::names[i];
    e["components"] = field_json(basis[i]);
    entries.push_back(std::move(e));
  }
  j["fields"] = std::move(entries);
  return j;
}

inline PolyVectorField parse_field(const nlohmann::json& j) {
  const nlohmann::json* comps = &j;
  if (j.is_object()) {
    if (!j.contains("components")) throw MalformedInput("field file needs a \"components\" array");
    comps = &j.at("components");
  }
  if (!comps->is_array() || comps->size() != 7)
    throw MalformedInput("\"components\" must be an array of 7 coefficient maps");
  PolyVectorField X;
  for (std::size_t a = 0; a < 7; ++a) {
    const auto& m = (*comps)[a];
    if (!m.is_object()) throw MalformedInput("component " + std::to_string(a + 1) + " is not an object");
    for (const auto& [key, val] : m.items()) {
      if (!val.is_number()) throw MalformedInput("coefficient for '" + key + "' is not a number");
      const double v = val.get<double>();
      if (!std::isfinite(v)) throw MalformedInput("coefficient for '" + key + "' is not finite");
      try {
        X.f[a].c[static_cast<std::size_t>(Poly2::index_of(Poly2::parse_key(key)))] += v;
      } catch (const PolynomialDegreeError& e) {
        throw MalformedInput("component " + std::to_string(a + 1) + ": " + e.what());
      }
    }
  }
  return X;
}

inline PolyVectorField read_field(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("field file is not JSON: ") + e.what());
  }
  return parse_field(j);
}

inline PolyVectorField read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open field file " + path);
  return read_field(in);
}

}  // namespace ebcv
