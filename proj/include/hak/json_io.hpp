// JSON interchange for the library types, plus the end-to-end analysis
// pipeline the CLI drives: request -> reductive model -> H -> report.
//
// Formats:
//   algebra  {"dim": n, "brackets": [[i, j, k, c], ...], "labels": [...]}
//            with 0-based indices, i < j, c a finite double
//   request  {"algebra": {...}, "theta": [...] XOR "sigma": [[...]],
//             "h_strategy": "polar" | "coadjoint-blocks" | "explicit",
//             "h_matrix": [[...]] (m-basis; required iff explicit),
//             "h_seed": integer (polar only; 0 = identity seed metric),
//             "m_basis": [[...], ...] (optional columns), "pairing": [[...]],
//             "tolerances": {...} (optional overrides)}
//   outcome  {"k_basis": [...], "m_basis": [...], "H": [[...]], "report": {...}}
// Matrices are arrays of rows; basis lists are arrays of ambient vectors.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <json.hpp>

#include "catalog.hpp"
#include "compatible.hpp"
#include "curvature.hpp"
#include "errors.hpp"
#include "homogeneous.hpp"
#include "lie_algebra.hpp"
#include "search.hpp"

namespace hak {

using json = nlohmann::json;

// ---- scalars, vectors, matrices ----

inline double double_from_json(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string(what) + ": non-finite number");
  return x;
}

inline std::size_t index_from_json(const json& j, const char* what) {
  if (!j.is_number_integer() || (j.is_number_integer() && j.get<long long>() < 0))
    throw InputError(std::string(what) + ": expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

inline json vec_to_json(const Vec& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

inline Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  Vec out;
  out.reserve(j.size());
  for (const json& x : j) out.push_back(double_from_json(x, what));
  return out;
}

inline json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InputError(std::string(what) + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  const Vec first = vec_from_json(j[0], what);
  Matrix out(rows, first.size());
  for (std::size_t k = 0; k < first.size(); ++k) out(0, k) = first[k];
  for (std::size_t i = 1; i < rows; ++i) {
    const Vec row = vec_from_json(j[i], what);
    if (row.size() != first.size())
      throw InputError(std::string(what) + ": ragged rows");
    for (std::size_t k = 0; k < row.size(); ++k) out(i, k) = row[k];
  }
  return out;
}

// Basis lists are serialized as arrays of ambient vectors (the columns).
inline json basis_to_json(const Matrix& basis) {
  json out = json::array();
  for (std::size_t c = 0; c < basis.cols(); ++c) out.push_back(vec_to_json(basis.col(c)));
  return out;
}

inline Matrix basis_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InputError(std::string(what) + ": expected a non-empty array of vectors");
  const Vec first = vec_from_json(j[0], what);
  Matrix out(first.size(), j.size());
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Vec v = vec_from_json(j[c], what);
    if (v.size() != first.size()) throw InputError(std::string(what) + ": ragged vectors");
    for (std::size_t r = 0; r < v.size(); ++r) out(r, c) = v[r];
  }
  return out;
}

// ---- Lie algebras ----

inline json algebra_to_json(const LieAlgebra& g) {
  json brackets = json::array();
  for (const BracketEntry& e : g.entries())
    brackets.push_back(json::array({e.i, e.j, e.k, e.c}));
  return json{{"dim", g.dim()}, {"brackets", std::move(brackets)}, {"labels", g.labels()}};
}

inline LieAlgebra algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("brackets"))
    throw InputError("algebra JSON: needs \"dim\" and \"brackets\"");
  const std::size_t dim = index_from_json(j.at("dim"), "algebra dim");
  if (!j.at("brackets").is_array()) throw InputError("algebra JSON: brackets must be an array");
  std::vector<BracketEntry> entries;
  for (const json& b : j.at("brackets")) {
    if (!b.is_array() || b.size() != 4)
      throw InputError("algebra JSON: each bracket entry is [i, j, k, c]");
    entries.push_back({index_from_json(b[0], "bracket i"), index_from_json(b[1], "bracket j"),
                       index_from_json(b[2], "bracket k"), double_from_json(b[3], "bracket c")});
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j.at("labels").is_array()) throw InputError("algebra JSON: labels must be an array");
    for (const json& s : j.at("labels")) {
      if (!s.is_string()) throw InputError("algebra JSON: labels must be strings");
      labels.push_back(s.get<std::string>());
    }
  }
  return LieAlgebra(dim, std::move(entries), std::move(labels));
}

// ---- catalog entries ----

inline json expected_to_json(const ExpectedValues& e) {
  json out = json::object();
  if (e.lambda) out["lambda"] = *e.lambda;
  if (e.s) out["s"] = *e.s;
  if (e.nijenhuis_sq) out["nijenhuis_sq"] = *e.nijenhuis_sq;
  if (e.scal) out["scal"] = *e.scal;
  if (e.dim_m) out["dim_m"] = *e.dim_m;
  if (e.dim_k) out["dim_k"] = *e.dim_k;
  if (e.v_prime_scale) out["v_prime_scale"] = *e.v_prime_scale;
  return out;
}

// The standard algebra JSON with the entry's extras alongside it, so the
// emitted object can be pasted into an analysis request.
inline json entry_to_json(const CatalogEntry& entry) {
  json out = algebra_to_json(entry.algebra);
  out["name"] = entry.name;
  if (!entry.theta.empty()) out["theta"] = vec_to_json(entry.theta);
  if (!entry.sigma_direct.empty()) out["sigma"] = matrix_to_json(entry.sigma_direct);
  if (!entry.pairing.empty()) out["pairing"] = matrix_to_json(entry.pairing);
  out["expected"] = expected_to_json(entry.expected);
  return out;
}

// ---- analysis requests ----

enum class HStrategy { polar, coadjoint_blocks, explicit_h };

inline HStrategy h_strategy_from_string(const std::string& s) {
  if (s == "polar") return HStrategy::polar;
  if (s == "coadjoint-blocks") return HStrategy::coadjoint_blocks;
  if (s == "explicit") return HStrategy::explicit_h;
  throw InputError("request: h_strategy must be one of polar | coadjoint-blocks | explicit");
}

inline const char* to_string(HStrategy s) {
  switch (s) {
    case HStrategy::polar: return "polar";
    case HStrategy::coadjoint_blocks: return "coadjoint-blocks";
    default: return "explicit";
  }
}

struct AnalysisRequest {
  LieAlgebra algebra;
  Vec theta;       // empty = absent
  Matrix sigma;    // empty = absent; mutually exclusive with theta
  Matrix m_basis;  // optional complement override (columns)
  Matrix pairing;  // optional dual form override
  HStrategy h_strategy = HStrategy::polar;
  Matrix h_matrix;           // m-basis; required iff strategy is explicit
  std::uint64_t h_seed = 0;  // polar: 0 seeds with the identity metric
  ModelOptions options;
  double special_tol = 1e-7;
};

inline AnalysisRequest request_from_json(const json& j) {
  if (!j.is_object()) throw InputError("request: expected a JSON object");
  if (!j.contains("algebra")) throw InputError("request: missing \"algebra\"");
  AnalysisRequest req;
  req.algebra = algebra_from_json(j.at("algebra"));

  const bool has_theta = j.contains("theta"), has_sigma = j.contains("sigma");
  if (has_theta == has_sigma)
    throw InputError(
        "request: exactly one of \"theta\" and \"sigma\" must be present "
        "(they are mutually exclusive ways to fix the 2-form)");
  if (has_theta) req.theta = vec_from_json(j.at("theta"), "theta");
  if (has_sigma) req.sigma = matrix_from_json(j.at("sigma"), "sigma");

  if (j.contains("m_basis")) {
    if (has_sigma) throw InputError("request: m_basis only applies to the theta form");
    req.m_basis = basis_from_json(j.at("m_basis"), "m_basis");
  }
  if (j.contains("pairing")) {
    if (has_sigma) throw InputError("request: pairing only applies to the theta form");
    req.pairing = matrix_from_json(j.at("pairing"), "pairing");
  }

  if (j.contains("h_strategy")) {
    if (!j.at("h_strategy").is_string())
      throw InputError("request: h_strategy must be a string");
    req.h_strategy = h_strategy_from_string(j.at("h_strategy").get<std::string>());
  }
  const bool has_h = j.contains("h_matrix");
  if (has_h != (req.h_strategy == HStrategy::explicit_h))
    throw InputError("request: h_matrix is required exactly when h_strategy is explicit");
  if (has_h) req.h_matrix = matrix_from_json(j.at("h_matrix"), "h_matrix");
  if (j.contains("h_seed")) req.h_seed = index_from_json(j.at("h_seed"), "h_seed");

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw InputError("request: tolerances must be an object");
    if (t.contains("jacobi")) req.options.jacobi_tol = double_from_json(t.at("jacobi"), "tolerances.jacobi");
    if (t.contains("rank")) req.options.rank_tol = double_from_json(t.at("rank"), "tolerances.rank");
    if (t.contains("invariance"))
      req.options.invariance_tol = double_from_json(t.at("invariance"), "tolerances.invariance");
    if (t.contains("degeneracy"))
      req.options.degeneracy_margin = double_from_json(t.at("degeneracy"), "tolerances.degeneracy");
    if (t.contains("semisimple"))
      req.options.semisimple_tol = double_from_json(t.at("semisimple"), "tolerances.semisimple");
    if (t.contains("special")) req.special_tol = double_from_json(t.at("special"), "tolerances.special");
  }
  return req;
}

inline json request_to_json(const AnalysisRequest& req) {
  json out{{"algebra", algebra_to_json(req.algebra)},
           {"h_strategy", to_string(req.h_strategy)}};
  if (!req.theta.empty()) out["theta"] = vec_to_json(req.theta);
  if (!req.sigma.empty()) out["sigma"] = matrix_to_json(req.sigma);
  if (!req.m_basis.empty()) out["m_basis"] = basis_to_json(req.m_basis);
  if (!req.pairing.empty()) out["pairing"] = matrix_to_json(req.pairing);
  if (!req.h_matrix.empty()) out["h_matrix"] = matrix_to_json(req.h_matrix);
  if (req.h_seed != 0) out["h_seed"] = req.h_seed;
  return out;
}

// ---- reports ----

inline json report_to_json(const CurvatureReport& r) {
  json out{{"zeta", vec_to_json(r.zeta)},
           {"rho", matrix_to_json(r.rho)},
           {"lambda", r.flags.special ? json(r.lambda) : json(nullptr)},
           {"special_residual", r.special_residual},
           {"s", r.s},
           {"nijenhuis_sq", r.nijenhuis_sq},
           {"nijenhuis_sq_direct", r.nijenhuis_sq_direct},
           {"scal", r.scal},
           {"xi", vec_to_json(r.xi)},
           {"v_prime", r.v_prime.empty() ? json(nullptr) : vec_to_json(r.v_prime)},
           {"rho_k_discrepancy", r.rho_k_discrepancy},
           {"flags",
            json{{"special", r.flags.special},
                 {"chern_ricci_flat", r.flags.chern_ricci_flat},
                 {"integrable", r.flags.integrable},
                 {"k_compact_assumed", r.flags.k_compact_assumed}}}};
  if (!r.c1_rep.empty()) out["c1_rep"] = matrix_to_json(r.c1_rep);
  return out;
}

// ---- the analysis pipeline ----

struct AnalysisOutcome {
  ReductiveModel model;
  CompatibleStructure structure;
  CurvatureReport report;
};

inline AnalysisOutcome run_analysis(const AnalysisRequest& req) {
  AnalysisOutcome out;
  out.model = !req.theta.empty()
                  ? model_from_theta(req.algebra, req.theta, req.m_basis, req.pairing,
                                     req.options)
                  : model_from_sigma(req.algebra, req.sigma, req.options);

  switch (req.h_strategy) {
    case HStrategy::polar: {
      const std::size_t dm = out.model.dim_m();
      Matrix h = Matrix::identity(dm);
      if (req.h_seed != 0) {
        std::mt19937_64 rng(req.h_seed);
        Matrix a(dm, dm);
        for (std::size_t i = 0; i < dm; ++i)
          for (std::size_t k = 0; k < dm; ++k) a(i, k) = uniform_symmetric(rng);
        h = a.transpose() * a + Matrix::identity(dm) * 0.5;
      }
      out.structure = polar_H(out.model.sigma_m, h);
      break;
    }
    case HStrategy::coadjoint_blocks:
      out.structure = special_H_from_blocks(out.model, adV_blocks(out.model));
      break;
    case HStrategy::explicit_h: {
      if (!req.h_matrix.square() || req.h_matrix.rows() != out.model.dim_m())
        throw InputError("request: h_matrix must be square of size dim m");
      check_compatible(out.model.sigma_m, req.h_matrix, 1e-8);
      out.structure = CompatibleStructure{
          req.h_matrix, symmetrize(out.model.sigma_m * req.h_matrix)};
      break;
    }
  }

  out.report = curvature_report(out.model, out.structure.H, req.special_tol);
  return out;
}

inline json outcome_to_json(const AnalysisOutcome& o) {
  return json{{"k_basis", basis_to_json(o.model.k_basis)},
              {"m_basis", basis_to_json(o.model.m_basis)},
              {"H", matrix_to_json(o.structure.H)},
              {"report", report_to_json(o.report)}};
}

// ---- search results ----

inline json search_result_to_json(const SearchResult& r) {
  json trace = json::array();
  for (const SearchTracePoint& p : r.trace)
    trace.push_back(json{{"iter", p.iter}, {"residual", p.residual}, {"step", p.step}});
  return json{{"residual", r.residual}, {"lambda", r.lambda},
              {"iters", r.iters},       {"converged", r.converged},
              {"H", matrix_to_json(r.structure.H)}, {"trace", std::move(trace)}};
}

}  // namespace hak
