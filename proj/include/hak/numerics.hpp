// Small dense linear algebra kernels. Dimensions in this project stay below
// ~60, so simplicity and bit-for-bit determinism win over asymptotics: the
// symmetric eigensolver is a cyclic Jacobi iteration with a fixed sweep order,
// and solves use plain partial-pivoted elimination.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace hak {

struct EigResult {
  Vec values;      // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) <-> values[i]
};

// Deterministic uniforms built from the raw engine words; the standard
// distribution classes are free to differ between library implementations,
// which would break seeded reproducibility.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // top 53 bits -> [0,1)
}

inline double uniform_symmetric(std::mt19937_64& rng) {
  return 2.0 * uniform_unit(rng) - 1.0;  // [-1,1)
}

namespace detail {

inline void require_symmetric(const Matrix& a, const char* who) {
  if (!a.square()) throw InputError(std::string(who) + ": matrix not square");
  const double scale = std::max(a.norm_inf(), 1e-300);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale)
        throw InputError(std::string(who) + ": matrix not symmetric");
}

inline double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace detail

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Deterministic: fixed (p,q) sweep order, eigenvalues sorted ascending,
// each eigenvector's largest-magnitude component made positive.
inline EigResult sym_eig(const Matrix& a_in) {
  detail::require_symmetric(a_in, "sym_eig");
  const std::size_t n = a_in.rows();
  Matrix a(a_in);
  // Work on the exactly symmetrized copy so rotations stay consistent.
  a = symmetrize(a);
  Matrix v = Matrix::identity(n);

  const double anorm = std::max(a.norm_fro(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (detail::offdiag_norm(a) <= 1e-15 * anorm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * anorm) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^T A J on rows/cols p,q
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigResult r;
  r.values.resize(n);
  r.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    r.values[j] = a(order[j], order[j]);
    Vec col = v.col(order[j]);
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(col[i]) > std::abs(col[imax])) imax = i;
    if (n > 0 && col[imax] < 0.0)
      for (double& x : col) x = -x;
    r.vectors.set_col(j, col);
  }
  return r;
}

// Orthonormal basis of the (near-)nullspace of A, via the spectral
// decomposition of A^T A. Columns with singular value <= rel_tol * sv_max
// are kept; if A == 0 the whole space is returned.
inline Matrix nullspace(const Matrix& a, double rel_tol = 1e-7) {
  const std::size_t n = a.cols();
  if (n == 0) return Matrix();
  if (a.rows() == 0) return Matrix::identity(n);
  EigResult eig = sym_eig(a.transpose() * a);
  const double ev_max = std::max(eig.values.back(), 0.0);
  std::vector<Vec> keep;
  for (std::size_t j = 0; j < n; ++j) {
    const double sv = std::sqrt(std::max(eig.values[j], 0.0));
    if (sv <= rel_tol * std::sqrt(ev_max)) keep.push_back(eig.vectors.col(j));
  }
  if (ev_max == 0.0) return Matrix::identity(n);
  return Matrix::from_columns(keep);
}

// Symmetric positive definite square root. SingularError when the smallest
// eigenvalue drops below 1e-12 relative to the largest.
inline Matrix spd_sqrt(const Matrix& a) {
  detail::require_symmetric(a, "spd_sqrt");
  EigResult eig = sym_eig(a);
  const std::size_t n = a.rows();
  const double ev_max = eig.values.empty() ? 0.0 : eig.values.back();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.values[i] <= 1e-12 * std::max(ev_max, 1e-300))
      throw SingularError("spd_sqrt: matrix not positive definite");
    d(i, i) = std::sqrt(eig.values[i]);
  }
  return eig.vectors * d * eig.vectors.transpose();
}

// Gaussian elimination with partial pivoting; B may have any column count.
inline Matrix solve(Matrix a, Matrix b) {
  if (!a.square() || a.rows() != b.rows()) throw InputError("solve: shape mismatch");
  const std::size_t n = a.rows();
  const double scale = std::max(a.norm_inf(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-13 * scale)
      throw SingularError("solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t ki = n; ki-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = b(ki, j);
      for (std::size_t l = ki + 1; l < n; ++l) s -= a(ki, l) * b(l, j);
      b(ki, j) = s / a(ki, ki);
    }
  }
  return b;
}

inline Vec solve(const Matrix& a, const Vec& b) {
  Matrix rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  return solve(a, rhs).col(0);
}

inline Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

// Determinant via unpivoted-signs LU; only used for nondegeneracy margins.
inline double det(Matrix a) {
  if (!a.square()) throw InputError("det: matrix not square");
  const std::size_t n = a.rows();
  double d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      d = -d;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
    }
    d *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

// Matrix exponential by scaling-and-squaring with a Taylor series; plenty
// for the small, mild matrices the search retraction feeds in.
inline Matrix expm(const Matrix& a) {
  if (!a.square()) throw InputError("expm: matrix not square");
  const std::size_t n = a.rows();
  int s = 0;
  double nrm = a.norm_inf() * n;
  while (nrm > 0.5 && s < 60) {
    nrm *= 0.5;
    ++s;
  }
  Matrix x = a * std::ldexp(1.0, -s);
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = term * x * (1.0 / k);
    result = result + term;
    if (term.norm_inf() < 1e-18) break;
  }
  for (int k = 0; k < s; ++k) result = result * result;
  return result;
}

// Orthonormal basis of the column space (modified Gram-Schmidt with one
// reorthogonalization pass); columns shrinking below rel_tol * max initial
// column norm are dropped.
inline Matrix orthonormal_columns(const Matrix& a, double rel_tol = 1e-10) {
  std::vector<Vec> basis;
  double scale = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) scale = std::max(scale, norm2(a.col(j)));
  if (scale == 0.0) return Matrix();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Vec v = a.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) axpy(-dot(b, v), b, v);
    const double nv = norm2(v);
    if (nv > rel_tol * scale) basis.push_back(scaled(v, 1.0 / nv));
  }
  if (basis.empty()) return Matrix();
  return Matrix::from_columns(basis);
}

}  // namespace hak
