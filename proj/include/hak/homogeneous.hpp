// Reductive models of symplectic homogeneous spaces at the Lie-algebra level:
// an isotropy subalgebra k, a complement m with [k,m] in m, the induced
// 2-form sigma on m, and the canonically paired vector xi built from any
// symplectic basis. Everything is coordinates over a fixed basis of g.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lie_algebra.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace hak {

struct ModelOptions {
  double jacobi_tol = 1e-9;
  double rank_tol = 1e-7;        // relative singular-value cutoff
  double invariance_tol = 1e-8;  // [k,m] subset m check
  double degeneracy_margin = 1e-9;
  double semisimple_tol = 1e-7;
};

struct ReductiveModel {
  LieAlgebra algebra;
  Vec theta;         // defining covector; empty in the sigma-direct case
  Matrix k_basis;    // dim x dim_k, columns span the isotropy subalgebra
  Matrix m_basis;    // dim x dim_m, columns span the complement
  Matrix sigma_m;    // matrix of sigma in the m-basis
  Matrix pairing;    // symmetric form used for duals / block normalization
  Vec V;             // pairing-dual of theta; empty when unavailable
  Matrix basis_inv;  // inverse of [k_basis | m_basis]

  std::size_t dim() const { return algebra.dim(); }
  std::size_t dim_k() const { return k_basis.cols(); }
  std::size_t dim_m() const { return m_basis.cols(); }

  // Coordinates of x in the concatenated (k, m) basis.
  Vec split_coords(const Vec& x) const { return basis_inv * x; }

  Vec k_coords(const Vec& x) const {
    const Vec c = split_coords(x);
    return Vec(c.begin(), c.begin() + dim_k());
  }
  Vec m_coords(const Vec& x) const {
    const Vec c = split_coords(x);
    return Vec(c.begin() + dim_k(), c.end());
  }
  Vec from_m(const Vec& xm) const { return m_basis * xm; }
  Vec proj_m(const Vec& x) const { return from_m(m_coords(x)); }
  Vec proj_k(const Vec& x) const {
    if (dim_k() == 0) return Vec(dim(), 0.0);
    return k_basis * k_coords(x);
  }

  double sigma(const Vec& xm, const Vec& ym) const { return dot(xm, sigma_m * ym); }
};

// {x : theta([x, g]) = 0}; orthonormal columns. This is the kernel of the
// Chevalley-Eilenberg differential of theta.
inline Matrix isotropy_subalgebra(const LieAlgebra& g, const Vec& theta,
                                  double rank_tol = 1e-7) {
  return nullspace(ce_differential(g, theta), rank_tol);
}

// Relative size of the k-component of [k_a, m_b] over all basis pairs.
inline double invariance_residual(const LieAlgebra& g, const Matrix& k_basis,
                                  const Matrix& m_basis, const Matrix& basis_inv) {
  if (k_basis.cols() == 0) return 0.0;
  double worst = 0.0;
  for (std::size_t a = 0; a < k_basis.cols(); ++a)
    for (std::size_t b = 0; b < m_basis.cols(); ++b) {
      const Vec br = g.bracket(k_basis.col(a), m_basis.col(b));
      const Vec c = basis_inv * br;
      double knorm = 0.0;
      for (std::size_t i = 0; i < k_basis.cols(); ++i) knorm += c[i] * c[i];
      worst = std::max(worst, std::sqrt(knorm) / (1.0 + norm2(br)));
    }
  return worst;
}

// Complement of k with respect to the (true) Killing form. StrategyError when
// the Killing form degenerates on k, since the complement is then undefined.
inline Matrix killing_orthogonal_complement(const LieAlgebra& g, const Matrix& k_basis,
                                            double rank_tol = 1e-7) {
  if (k_basis.cols() == 0) return Matrix::identity(g.dim());
  const Matrix kill = killing_form(g);
  const Matrix gram = k_basis.transpose() * kill * k_basis;
  EigResult e = sym_eig(gram);
  double lo = 1e300, hi = 0.0;
  for (double v : e.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (hi == 0.0 || lo <= rank_tol * hi)
    throw StrategyError("killing-orthogonal complement: Killing form degenerate on k");
  return nullspace(k_basis.transpose() * kill, rank_tol);
}

// sigma(x,y) = theta([x,y]) restricted to the complement.
inline Matrix induced_sigma(const LieAlgebra& g, const Vec& theta, const Matrix& m_basis) {
  const std::size_t m = m_basis.cols();
  Matrix s(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = dot(theta, g.bracket(m_basis.col(i), m_basis.col(j)));
      s(i, j) = v;
      s(j, i) = -v;
    }
  return s;
}

// Smallest over largest singular value of a square matrix.
inline double nondegeneracy_margin(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  EigResult e = sym_eig(a.transpose() * a);
  const double hi = std::sqrt(std::max(e.values.back(), 0.0));
  const double lo = std::sqrt(std::max(e.values.front(), 0.0));
  return hi == 0.0 ? 0.0 : lo / hi;
}

// Max over basis triples of sigma([x,y]_m, z) + sigma([y,z]_m, x) + sigma([z,x]_m, y).
inline double cocycle_residual(const ReductiveModel& model) {
  const std::size_t m = model.dim_m();
  const LieAlgebra& g = model.algebra;
  std::vector<Vec> br(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      br[i * m + j] = model.m_coords(g.bracket(model.m_basis.col(i), model.m_basis.col(j)));
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        Vec ei(m, 0.0), ej(m, 0.0), ek(m, 0.0);
        ei[i] = ej[j] = ek[k] = 1.0;
        const double s = model.sigma(br[i * m + j], ek) + model.sigma(br[j * m + k], ei) +
                         model.sigma(br[k * m + i], ej);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

// Darboux basis for an antisymmetric nondegenerate matrix: returns a square
// matrix whose columns (u_1..u_n, w_1..w_n) satisfy sigma(u_i, w_j) = delta_ij
// and sigma(u,u) = sigma(w,w) = 0. Pivots on the largest remaining |sigma(a,b)|;
// u's are normalized in the seed inner product before w is scaled.
inline Matrix symplectic_basis(const Matrix& sigma, const Matrix& seed = Matrix()) {
  const std::size_t n2 = sigma.rows();
  if (n2 % 2 != 0) throw DegenerateSymplecticError("symplectic basis: odd dimension");
  const Matrix s_ip = seed.empty() ? Matrix::identity(n2) : seed;
  const double scale = std::max(sigma.norm_inf(), 1e-300);

  std::vector<Vec> cands;
  for (std::size_t i = 0; i < n2; ++i) {
    Vec e(n2, 0.0);
    e[i] = 1.0;
    cands.push_back(e);
  }
  auto sig = [&](const Vec& x, const Vec& y) { return dot(x, sigma * y); };

  std::vector<Vec> us, ws;
  while (!cands.empty()) {
    std::size_t best_a = 0, best_b = 1;
    double best = -1.0;
    for (std::size_t a = 0; a < cands.size(); ++a)
      for (std::size_t b = a + 1; b < cands.size(); ++b) {
        const double v = std::abs(sig(cands[a], cands[b]));
        if (v > best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    if (best <= 1e-9 * scale)
      throw DegenerateSymplecticError("symplectic basis: form degenerates on residual space");
    Vec u = cands[best_a];
    const double un = std::sqrt(dot(u, s_ip * u));
    u = scaled(u, 1.0 / un);
    Vec w = scaled(cands[best_b], 1.0 / sig(u, cands[best_b]));
    std::vector<Vec> next;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (a == best_a || a == best_b) continue;
      Vec c = cands[a];
      const double cw = sig(c, w), cu = sig(c, u);
      axpy(-cw, u, c);
      axpy(cu, w, c);
      next.push_back(c);
    }
    cands.swap(next);
    us.push_back(u);
    ws.push_back(w);
  }
  std::vector<Vec> all(us);
  all.insert(all.end(), ws.begin(), ws.end());
  return Matrix::from_columns(all);
}

// Symplectic basis that is additionally orthonormal for g = sigma(., H.) and
// satisfies w_i = H u_i. H must be sigma-compatible.
inline Matrix unitary_basis(const Matrix& sigma, const Matrix& h_struct) {
  const std::size_t n2 = sigma.rows();
  if (n2 % 2 != 0) throw DegenerateSymplecticError("unitary basis: odd dimension");
  const Matrix g_m = sigma * h_struct;
  auto met = [&](const Vec& x, const Vec& y) { return dot(x, g_m * y); };

  std::vector<Vec> cands;
  for (std::size_t i = 0; i < n2; ++i) {
    Vec e(n2, 0.0);
    e[i] = 1.0;
    cands.push_back(e);
  }
  std::vector<Vec> us, ws;
  while (us.size() < n2 / 2) {
    std::size_t best = 0;
    double best_n = -1.0;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      const double v = met(cands[a], cands[a]);
      if (v > best_n) {
        best_n = v;
        best = a;
      }
    }
    if (best_n <= 0.0)
      throw DegenerateSymplecticError("unitary basis: metric degenerates on residual space");
    Vec u = scaled(cands[best], 1.0 / std::sqrt(best_n));
    Vec w = h_struct * u;
    std::vector<Vec> next;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (a == best) continue;
      Vec c = cands[a];
      axpy(-met(c, u), u, c);
      axpy(-met(c, w), w, c);
      if (met(c, c) > 1e-24) next.push_back(c);
    }
    cands.swap(next);
    us.push_back(u);
    ws.push_back(w);
  }
  std::vector<Vec> all(us);
  all.insert(all.end(), ws.begin(), ws.end());
  return Matrix::from_columns(all);
}

struct XiSplit {
  Vec xi;    // ambient coordinates
  Vec xi_k;  // component in k
  Vec xi_m;  // component in m
};

// xi = sum_i [b_i, b_{i+n}] over the columns of a symplectic basis given in
// m-coordinates. Independent of the chosen basis.
inline Vec xi_from_symplectic_basis(const ReductiveModel& model, const Matrix& basis) {
  const std::size_t n = basis.cols() / 2;
  Vec xi(model.dim(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec a = model.from_m(basis.col(i));
    const Vec b = model.from_m(basis.col(i + n));
    const Vec br = model.algebra.bracket(a, b);
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += br[k];
  }
  return xi;
}

inline XiSplit xi_element(const ReductiveModel& model) {
  XiSplit out;
  out.xi = xi_from_symplectic_basis(model, symplectic_basis(model.sigma_m));
  out.xi_k = model.proj_k(out.xi);
  out.xi_m = model.proj_m(out.xi);
  return out;
}

namespace detail {

inline void finish_model(ReductiveModel& model, const ModelOptions& opts) {
  const Matrix full = hcat(model.k_basis, model.m_basis);
  if (full.cols() != model.dim())
    throw InputError("model: k and m do not form a complement (dimension mismatch)");
  try {
    model.basis_inv = inverse(full);
  } catch (const SingularError&) {
    throw InputError("model: k + m basis is singular, not a complement");
  }
  const double inv_res =
      invariance_residual(model.algebra, model.k_basis, model.m_basis, model.basis_inv);
  if (inv_res > opts.invariance_tol)
    throw InvarianceError("model: [k,m] leaves m, residual " + std::to_string(inv_res));
  if (model.dim_m() % 2 != 0)
    throw DegenerateSymplecticError("model: complement has odd dimension");
  if (model.dim_m() == 0)
    throw DegenerateSymplecticError("model: complement is zero-dimensional");
  if (nondegeneracy_margin(model.sigma_m) <= opts.degeneracy_margin)
    throw DegenerateSymplecticError("model: sigma degenerate on m");
}

}  // namespace detail

// Build a model from a covector theta (coadjoint-orbit style). The complement
// defaults to the Killing-orthogonal one; `pairing` overrides the form used
// for the theta-dual V (defaults to the true Killing form when semisimple).
inline ReductiveModel model_from_theta(const LieAlgebra& g, const Vec& theta,
                                       const Matrix& user_m = Matrix(),
                                       const Matrix& pairing = Matrix(),
                                       const ModelOptions& opts = ModelOptions()) {
  if (theta.size() != g.dim()) throw InputError("model: theta has wrong size");
  validate(g, opts.jacobi_tol);
  ReductiveModel model;
  model.algebra = g;
  model.theta = theta;
  model.k_basis = isotropy_subalgebra(g, theta, opts.rank_tol);
  if (model.k_basis.cols() == g.dim() && g.dim() > 0) {
    // theta kills all brackets: the orbit is a point unless k is trivial
    throw DegenerateSymplecticError("model: isotropy is the whole algebra");
  }
  model.m_basis = user_m.empty()
                      ? killing_orthogonal_complement(g, model.k_basis, opts.rank_tol)
                      : user_m;
  model.sigma_m = induced_sigma(g, theta, model.m_basis);
  if (!pairing.empty()) {
    model.pairing = pairing;
  } else if (is_semisimple(g, opts.semisimple_tol)) {
    model.pairing = killing_form(g);
  }
  if (!model.pairing.empty()) model.V = solve(model.pairing, theta);
  detail::finish_model(model, opts);
  return model;
}

// Build a model directly from a closed nondegenerate 2-form on g itself
// (symplectic Lie group case: trivial isotropy, m = g).
inline ReductiveModel model_from_sigma(const LieAlgebra& g, const Matrix& sigma,
                                       const ModelOptions& opts = ModelOptions()) {
  if (!sigma.square() || sigma.rows() != g.dim())
    throw InputError("model: sigma has wrong shape");
  if ((sigma + sigma.transpose()).norm_inf() > 1e-10 * std::max(sigma.norm_inf(), 1e-300))
    throw InputError("model: sigma is not antisymmetric");
  validate(g, opts.jacobi_tol);
  ReductiveModel model;
  model.algebra = g;
  model.k_basis = Matrix(g.dim(), 0);
  model.m_basis = Matrix::identity(g.dim());
  model.sigma_m = sigma;
  detail::finish_model(model, opts);
  const double closed = cocycle_residual(model);
  if (closed > opts.jacobi_tol * std::max(1.0, sigma.norm_inf()))
    throw InputError("model: sigma is not closed, cocycle residual " + std::to_string(closed));
  return model;
}

}  // namespace hak
