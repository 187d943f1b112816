// Real Lie algebras given by structure constants: [e_i, e_j] = sum_k c_ijk e_k.
// Sparse entries are stored with i < j; the expanded ad matrices are cached at
// construction so brackets and traces are cheap everywhere downstream.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace hak {

struct BracketEntry {
  std::size_t i, j, k;  // 0-based, i < j
  double c;
};

class LieAlgebra {
 public:
  LieAlgebra() = default;

  LieAlgebra(std::size_t dim, std::vector<BracketEntry> entries,
             std::vector<std::string> labels = {})
      : dim_(dim), entries_(std::move(entries)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      labels_.reserve(dim_);
      for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
    }
    if (labels_.size() != dim_) throw InputError("algebra: label count != dim");
    ad_.assign(dim_, Matrix(dim_, dim_));
    for (const BracketEntry& e : entries_) {
      if (e.i >= e.j) throw InputError("algebra: bracket entries need i < j");
      if (e.j >= dim_ || e.k >= dim_) throw InputError("algebra: bracket index out of range");
      if (!std::isfinite(e.c)) throw InputError("algebra: non-finite structure constant");
      ad_[e.i](e.k, e.j) += e.c;  // duplicates accumulate
      ad_[e.j](e.k, e.i) -= e.c;
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<BracketEntry>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Matrix of ad_{e_i}; column j holds the coordinates of [e_i, e_j].
  const Matrix& ad(std::size_t i) const { return ad_[i]; }

  Matrix ad_matrix(const Vec& x) const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] == 0.0) continue;
      m = m + ad_[i] * x[i];
    }
    return m;
  }

  Vec bracket(const Vec& x, const Vec& y) const {
    Vec z(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] == 0.0) continue;
      const Matrix& a = ad_[i];
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j] == 0.0) continue;
        for (std::size_t k = 0; k < dim_; ++k) z[k] += x[i] * y[j] * a(k, j);
      }
    }
    return z;
  }

  Vec basis_vector(std::size_t i) const {
    Vec v(dim_, 0.0);
    v[i] = 1.0;
    return v;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<BracketEntry> entries_;
  std::vector<std::string> labels_;
  std::vector<Matrix> ad_;
};

// Max over basis triples i<j<k of || [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej] ||_inf.
inline double jacobi_residual(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec bij = g.ad(i).col(j);
      for (std::size_t k = j + 1; k < n; ++k) {
        // [[x,y],z] = -ad_z [x,y]
        const Vec s = scaled(g.ad(k) * bij, -1.0) -
                      (g.ad(i) * g.ad(j).col(k)) - (g.ad(j) * g.ad(k).col(i));
        worst = std::max(worst, norm_inf(s));
      }
    }
  return worst;
}

inline void validate(const LieAlgebra& g, double jacobi_tol = 1e-9) {
  const double r = jacobi_residual(g);
  if (r > jacobi_tol)
    throw InputError("algebra: Jacobi identity fails, residual " + std::to_string(r));
}

// K(i,j) = tr(ad_i ad_j).
inline Matrix killing_form(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double t = 0.0;
      const Matrix &ai = g.ad(i), &aj = g.ad(j);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t += ai(a, b) * aj(b, a);
      k(i, j) = k(j, i) = t;
    }
  return k;
}

inline bool is_unimodular(const LieAlgebra& g, double tol = 1e-9) {
  for (std::size_t i = 0; i < g.dim(); ++i)
    if (std::abs(g.ad(i).trace()) > tol) return false;
  return true;
}

// Cartan criterion: nondegenerate Killing form, judged by a relative
// eigenvalue cutoff.
inline bool is_semisimple(const LieAlgebra& g, double rel_tol = 1e-7) {
  if (g.dim() == 0) return false;
  EigResult e = sym_eig(killing_form(g));
  double lo = std::abs(e.values.front()), hi = 0.0;
  for (double v : e.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  return hi > 0.0 && lo > rel_tol * hi;
}

inline bool is_abelian(const LieAlgebra& g, double tol = 1e-12) {
  for (std::size_t i = 0; i < g.dim(); ++i)
    if (g.ad(i).norm_inf() > tol) return false;
  return true;
}

// Non-abelian with [[x,y],z] = 0 for all basis vectors.
inline bool is_two_step_nilpotent(const LieAlgebra& g, double tol = 1e-9) {
  if (is_abelian(g)) return false;
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = i + 1; j < g.dim(); ++j) {
      const Vec bij = g.ad(i).col(j);
      if (g.ad_matrix(bij).norm_inf() > tol) return false;
    }
  return true;
}

// Orthonormal basis (columns) of the center {x : [x, g] = 0}.
inline Matrix center(const LieAlgebra& g, double rank_tol = 1e-7) {
  const std::size_t n = g.dim();
  if (n == 0) return Matrix();
  Matrix stacked(n * n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // rows j*n..j*n+n-1 hold [x, e_j] = -ad_j x
    const Matrix& aj = g.ad(j);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) stacked(j * n + r, c) = -aj(r, c);
  }
  return nullspace(stacked, rank_tol);
}

// Orthonormal basis (columns) of [g, g].
inline Matrix derived_subalgebra(const LieAlgebra& g, double rank_tol = 1e-10) {
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = i + 1; j < g.dim(); ++j) cols.push_back(g.ad(i).col(j));
  if (cols.empty()) return Matrix();
  return orthonormal_columns(Matrix::from_columns(cols), rank_tol);
}

// Chevalley-Eilenberg differential of a 1-form: (d theta)(x,y) = -theta([x,y]).
inline Matrix ce_differential(const LieAlgebra& g, const Vec& theta) {
  const std::size_t n = g.dim();
  if (theta.size() != n) throw InputError("ce_differential: form has wrong size");
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = -dot(theta, g.ad(i).col(j));
      d(i, j) = v;
      d(j, i) = -v;
    }
  return d;
}

}  // namespace hak
