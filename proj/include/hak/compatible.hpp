// Compatible almost complex structures on (m, sigma): H^2 = -I, sigma(H.,H.) =
// sigma, and g = sigma(., H.) positive definite. Two constructions are
// provided: the polar recipe from an arbitrary seed scalar product, and the
// canonical one from the eigenblocks of ad_V on semisimple coadjoint orbits.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "homogeneous.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace hak {

struct CompatibleStructure {
  Matrix H;       // in the m-basis
  Matrix metric;  // sigma * H, symmetric positive definite
};

// Throws when H fails any compatibility invariant for the given sigma.
inline void check_compatible(const Matrix& sigma, const Matrix& h_struct,
                             double tol = 1e-9) {
  const std::size_t n = sigma.rows();
  const double scale = std::max(1.0, sigma.norm_inf());
  if ((h_struct * h_struct + Matrix::identity(n)).norm_inf() > tol * scale)
    throw InputError("compatible: H^2 != -I");
  if ((h_struct.transpose() * sigma * h_struct - sigma).norm_inf() > tol * scale)
    throw InputError("compatible: H does not preserve sigma");
  const Matrix g = sigma * h_struct;
  if ((g - g.transpose()).norm_inf() > tol * scale)
    throw InputError("compatible: induced metric not symmetric");
  EigResult e = sym_eig(symmetrize(g));
  if (e.values.front() <= 0.0)
    throw InputError("compatible: induced metric not positive definite");
}

// Polar construction: the seed scalar product h defines A by h(Ax,y) =
// sigma(x,y), i.e. A = -h^{-1} sigma as matrices; H = S^{-1} A with S the
// h-positive square root of -A^2. Computed in an h-orthonormal frame so the
// square root sees a genuinely symmetric matrix.
inline CompatibleStructure polar_H(const Matrix& sigma, const Matrix& h_seed) {
  const std::size_t n = sigma.rows();
  if (!sigma.square() || h_seed.rows() != n || !h_seed.square())
    throw InputError("polar_H: shape mismatch");
  if ((sigma + sigma.transpose()).norm_inf() > 1e-10 * std::max(sigma.norm_inf(), 1e-300))
    throw InputError("polar_H: sigma not antisymmetric");
  detail::require_symmetric(h_seed, "polar_H");
  {
    EigResult e = sym_eig(h_seed);
    if (e.values.front() <= 1e-12 * std::max(e.values.back(), 1e-300))
      throw InputError("polar_H: seed scalar product not positive definite");
  }
  const Matrix r = spd_sqrt(h_seed);
  const Matrix r_inv = inverse(r);
  const Matrix a_t = (r_inv * sigma * r_inv) * -1.0;  // A in the h-orthonormal frame
  const Matrix s_t = spd_sqrt((a_t * a_t) * -1.0);    // fails when sigma degenerates
  const Matrix h_t = solve(s_t, a_t);
  CompatibleStructure out;
  out.H = r_inv * h_t * r;
  out.metric = symmetrize(sigma * out.H);
  check_compatible(sigma, out.H, 1e-8);
  return out;
}

struct AdVBlock {
  Vec u, v;       // m-coordinates, [V,u] = lambda v, [V,v] = -lambda u
  double lambda;  // > 0
  double eps;     // pairing sign: B(u,u) = B(v,v) = eps
};

using BlockDecomposition = std::vector<AdVBlock>;

// Decomposes m into 2-dimensional ad_V-invariant blocks. Requires the model's
// pairing form (B-definite on each block) and an elliptic, invertible ad_V.
inline BlockDecomposition adV_blocks(const ReductiveModel& model,
                                     double cluster_gap = 1e-6) {
  if (model.V.empty())
    throw StrategyError("adV_blocks: model has no V (needs a semisimple algebra)");
  if (model.pairing.empty()) throw StrategyError("adV_blocks: model has no pairing form");
  const std::size_t m = model.dim_m();
  const LieAlgebra& g = model.algebra;

  Matrix s_op(m, m);  // ad_V restricted to m
  for (std::size_t j = 0; j < m; ++j)
    s_op.set_col(j, model.m_coords(g.bracket(model.V, model.m_basis.col(j))));

  const Matrix b_m = model.m_basis.transpose() * model.pairing * model.m_basis;
  EigResult be = sym_eig(b_m);
  double bmax = 0.0;
  for (double v : be.values) bmax = std::max(bmax, std::abs(v));
  for (double v : be.values)
    if (std::abs(v) <= 1e-9 * bmax)
      throw DegenerateBlockError("adV_blocks: pairing degenerate on m");

  // Auxiliary positive inner product P = |B|: flip the sign of the negative
  // part. ad_V^2 is P-self-adjoint because the blocks are B-orthogonal.
  const std::size_t dm = m;
  Matrix root(dm, dm), root_inv(dm, dm);
  {
    Matrix d1(dm, dm), d2(dm, dm);
    for (std::size_t i = 0; i < dm; ++i) {
      d1(i, i) = std::sqrt(std::abs(be.values[i]));
      d2(i, i) = 1.0 / d1(i, i);
    }
    root = be.vectors * d1 * be.vectors.transpose();
    root_inv = be.vectors * d2 * be.vectors.transpose();
  }
  const Matrix s2 = s_op * s_op;
  const Matrix c = root * s2 * root_inv;
  EigResult ce = sym_eig(symmetrize(c));

  const double emax = std::max(std::abs(ce.values.front()), std::abs(ce.values.back()));
  if (ce.values.back() > -1e-9 * emax) {
    if (std::abs(ce.values.back()) <= 1e-9 * emax)
      throw NonInvertibleAdVError("adV_blocks: ad_V has a kernel on m");
    throw DegenerateBlockError("adV_blocks: ad_V^2 has non-negative spectrum on m");
  }

  auto bform = [&](const Vec& x, const Vec& y) { return dot(x, b_m * y); };

  BlockDecomposition blocks;
  std::size_t lo = 0;
  while (lo < dm) {
    std::size_t hi = lo + 1;  // cluster eigenvalues with small relative gaps
    while (hi < dm && std::abs(ce.values[hi] - ce.values[hi - 1]) <= cluster_gap * emax) ++hi;
    const std::size_t width = hi - lo;
    if (width % 2 != 0)
      throw DegenerateBlockError("adV_blocks: odd-dimensional eigenvalue cluster");

    std::vector<Vec> cols;
    for (std::size_t j = lo; j < hi; ++j) cols.push_back(root_inv * ce.vectors.col(j));
    Matrix w = Matrix::from_columns(cols);

    while (w.cols() > 0) {
      const Matrix b_sub = w.transpose() * b_m * w;
      EigResult se = sym_eig(b_sub);
      std::size_t pick = 0;
      for (std::size_t j = 1; j < se.values.size(); ++j)
        if (std::abs(se.values[j]) > std::abs(se.values[pick])) pick = j;
      const double mu = se.values[pick];
      if (std::abs(mu) <= 1e-9 * bmax)
        throw DegenerateBlockError("adV_blocks: pairing degenerate on candidate block");

      AdVBlock blk;
      blk.eps = mu > 0.0 ? 1.0 : -1.0;
      blk.u = scaled(w * se.vectors.col(pick), 1.0 / std::sqrt(std::abs(mu)));
      const Vec adv_u = model.m_coords(g.bracket(model.V, model.from_m(blk.u)));
      blk.lambda = std::sqrt(std::abs(bform(adv_u, adv_u)));
      if (blk.lambda == 0.0)
        throw NonInvertibleAdVError("adV_blocks: ad_V kills a block generator");
      blk.v = scaled(adv_u, 1.0 / blk.lambda);
      if (std::abs(bform(blk.v, blk.v) - blk.eps) > 1e-6 ||
          std::abs(bform(blk.u, blk.v)) > 1e-6)
        throw DegenerateBlockError("adV_blocks: block fails pairing normalization");
      blocks.push_back(blk);

      std::vector<Vec> rest;
      for (std::size_t jcol = 0; jcol < w.cols(); ++jcol) {
        Vec cvec = w.col(jcol);
        const double before = norm2(cvec);
        axpy(-blk.eps * bform(cvec, blk.u), blk.u, cvec);
        axpy(-blk.eps * bform(cvec, blk.v), blk.v, cvec);
        if (norm2(cvec) > 1e-8 * before) rest.push_back(cvec);
      }
      Matrix remaining =
          rest.empty() ? Matrix() : orthonormal_columns(Matrix::from_columns(rest), 1e-8);
      if (remaining.cols() != w.cols() - 2)
        throw DegenerateBlockError("adV_blocks: deflation lost unexpected rank");
      w = remaining;
    }
    lo = hi;
  }

  std::stable_sort(blocks.begin(), blocks.end(), [](const AdVBlock& a, const AdVBlock& b) {
    if (std::abs(a.lambda - b.lambda) > 1e-9 * (a.lambda + b.lambda)) return a.lambda < b.lambda;
    return a.eps > b.eps;
  });
  if (2 * blocks.size() != dm)
    throw DegenerateBlockError("adV_blocks: block count does not cover m");
  return blocks;
}

// H = sum_i (eps_i / lambda_i) ad_V on each block: H u_i = eps_i v_i,
// H v_i = -eps_i u_i.
inline CompatibleStructure special_H_from_blocks(const ReductiveModel& model,
                                                 const BlockDecomposition& blocks) {
  const std::size_t m = model.dim_m();
  std::vector<Vec> cols;
  Matrix d(m, m);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    cols.push_back(blocks[i].u);
    cols.push_back(blocks[i].v);
    d(2 * i + 1, 2 * i) = blocks[i].eps;   // H u = eps v
    d(2 * i, 2 * i + 1) = -blocks[i].eps;  // H v = -eps u
  }
  const Matrix t = Matrix::from_columns(cols);
  CompatibleStructure out;
  out.H = t * d * inverse(t);
  out.metric = symmetrize(model.sigma_m * out.H);
  check_compatible(model.sigma_m, out.H, 1e-8);
  return out;
}

// Symplectic basis adapted to the blocks: e_i = u_i / sqrt(lambda_i),
// e_{i+n} = eps_i v_i / sqrt(lambda_i); then e_{i+n} = H e_i.
inline Matrix symplectic_basis_from_blocks(const BlockDecomposition& blocks) {
  std::vector<Vec> cols;
  for (const AdVBlock& b : blocks) cols.push_back(scaled(b.u, 1.0 / std::sqrt(b.lambda)));
  for (const AdVBlock& b : blocks)
    cols.push_back(scaled(b.v, b.eps / std::sqrt(b.lambda)));
  return Matrix::from_columns(cols);
}

// Nijenhuis tensor in m-coordinates:
// 4 N(x,y) = [Hx,Hy]_m - H[Hx,y]_m - H[x,Hy]_m - [x,y]_m.
inline Vec nijenhuis(const ReductiveModel& model, const Matrix& h_struct, const Vec& xm,
                     const Vec& ym) {
  const LieAlgebra& g = model.algebra;
  const Vec x = model.from_m(xm), y = model.from_m(ym);
  const Vec hx = model.from_m(h_struct * xm), hy = model.from_m(h_struct * ym);
  const Vec t1 = model.m_coords(g.bracket(hx, hy));
  const Vec t2 = h_struct * model.m_coords(g.bracket(hx, y));
  const Vec t3 = h_struct * model.m_coords(g.bracket(x, hy));
  const Vec t4 = model.m_coords(g.bracket(x, y));
  Vec n(model.dim_m());
  for (std::size_t k = 0; k < n.size(); ++k) n[k] = 0.25 * (t1[k] - t2[k] - t3[k] - t4[k]);
  return n;
}

// Metric-free integrability check: the largest coordinate of N over all
// m-basis pairs. Usable for structures whose induced metric is indefinite
// (where a g-norm of N would not be meaningful).
inline double nijenhuis_max(const ReductiveModel& model, const Matrix& h_struct) {
  double worst = 0.0;
  for (std::size_t i = 0; i < model.dim_m(); ++i)
    for (std::size_t j = i + 1; j < model.dim_m(); ++j) {
      Vec xi(model.dim_m(), 0.0), yj(model.dim_m(), 0.0);
      xi[i] = 1.0;
      yj[j] = 1.0;
      worst = std::max(worst, norm_inf(nijenhuis(model, h_struct, xi, yj)));
    }
  return worst;
}

}  // namespace hak
