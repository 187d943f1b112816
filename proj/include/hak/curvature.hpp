// Curvature invariants of a compatible structure H on a reductive model,
// computed purely from structure constants. Central objects:
//   zeta(x)  = tr(ad_{Hx} - H ad_x), with H extended by zero on k
//   rho(x,y) = zeta([x,y])           (Chern-Ricci form on m, full bracket)
//   s        = zeta(xi)              (Hermitian scalar curvature)
// plus the squared Nijenhuis norm (closed formula and direct sum) and the
// Riemannian scalar curvature of the associated metric.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "compatible.hpp"
#include "homogeneous.hpp"
#include "lie_algebra.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace hak {

struct SpecialnessResult {
  double lambda = 0.0;    // Frobenius least-squares coefficient of rho on sigma
  double residual = 0.0;  // ||rho - lambda sigma||_F
  bool special = false;   // residual <= tol * ||sigma||_F
};

inline SpecialnessResult specialness(const Matrix& rho, const Matrix& sigma,
                                     double tol = 1e-7) {
  double rs = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < sigma.rows(); ++i)
    for (std::size_t j = 0; j < sigma.cols(); ++j) {
      rs += rho(i, j) * sigma(i, j);
      ss += sigma(i, j) * sigma(i, j);
    }
  SpecialnessResult out;
  out.lambda = ss > 0.0 ? rs / ss : 0.0;
  out.residual = (rho - sigma * out.lambda).norm_fro();
  out.special = out.residual <= tol * std::sqrt(ss);
  return out;
}

struct CurvatureFlags {
  bool special = false;
  bool chern_ricci_flat = false;
  bool integrable = false;
  bool k_compact_assumed = false;  // asserted, never verified
};

struct CurvatureReport {
  Vec zeta;                // covector on g
  Matrix rho;              // Chern-Ricci form in the m-basis
  double lambda = 0.0;
  double special_residual = 0.0;
  double s = 0.0;
  double nijenhuis_sq = 0.0;         // closed formula
  double nijenhuis_sq_direct = 0.0;  // sum over basis pairs
  double scal = 0.0;
  Vec xi;                     // ambient coordinates
  Vec v_prime;                // pairing-dual of zeta; empty when unavailable
  Matrix c1_rep;              // zeta(proj_{z(k)} [.,.]) on m
  double rho_k_discrepancy = 0.0;  // max |zeta([m_i,m_j]_k)|
  CurvatureFlags flags;
};

// Precomputes everything about a model that curvature evaluation reuses
// across many H (the search loop calls these evaluators thousands of times).
class CurvatureContext {
 public:
  explicit CurvatureContext(ReductiveModel model) : model_(std::move(model)) {
    const LieAlgebra& g = model_.algebra;
    const std::size_t d = model_.dim(), dm = model_.dim_m(), dk = model_.dim_k();

    r_m_ = Matrix(dm, d);  // m-coordinate extraction: rows dk..d-1 of basis_inv
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < d; ++j) r_m_(i, j) = model_.basis_inv(dk + i, j);

    trace_vec_.resize(d);
    for (std::size_t a = 0; a < d; ++a) trace_vec_[a] = g.ad(a).trace();

    p_.reserve(d);
    for (std::size_t a = 0; a < d; ++a) p_.push_back(r_m_ * g.ad(a) * model_.m_basis);

    killing_ = killing_form(g);
    xi_ = xi_element(model_);
    xi_m_coords_ = model_.m_coords(xi_.xi);

    m_brackets_.assign(dm * dm, Vec());
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dm; ++j)
        m_brackets_[i * dm + j] = g.bracket(model_.m_basis.col(i), model_.m_basis.col(j));

    build_center_projection();
  }

  const ReductiveModel& model() const { return model_; }
  const XiSplit& xi() const { return xi_; }
  std::size_t center_dim() const { return z_basis_.cols(); }

  // zeta as a covector on g: zeta_a = tr(ad_{H e_a}) - tr(H ad_{e_a}).
  Vec zeta(const Matrix& h) const {
    const std::size_t d = model_.dim(), dm = model_.dim_m();
    // tr(ad_{H e_a}) = (trace_vec^T M) H (R_m e_a)
    Vec t_m(dm, 0.0);
    for (std::size_t i = 0; i < dm; ++i) t_m[i] = dot(trace_vec_, model_.m_basis.col(i));
    const Vec t_h = h.transpose() * t_m;
    Vec z(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
      double first = 0.0, second = 0.0;
      for (std::size_t i = 0; i < dm; ++i) first += t_h[i] * r_m_(i, a);
      const Matrix& pa = p_[a];
      for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t j = 0; j < dm; ++j) second += h(i, j) * pa(j, i);
      z[a] = first - second;
    }
    return z;
  }

  // rho(m_i, m_j) = zeta([m_i, m_j]) with the full bracket in g.
  Matrix chern_ricci(const Vec& zeta_cov) const {
    const std::size_t dm = model_.dim_m();
    Matrix rho(dm, dm);
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = i + 1; j < dm; ++j) {
        const double v = dot(zeta_cov, m_brackets_[i * dm + j]);
        rho(i, j) = v;
        rho(j, i) = -v;
      }
    return rho;
  }

  // Diagnostic for the bracket convention: the part of rho sourced by the
  // k-component of [m_i, m_j]. Zero exactly when full and m-projected
  // brackets give the same rho.
  double rho_k_discrepancy(const Vec& zeta_cov) const {
    const std::size_t dm = model_.dim_m();
    double worst = 0.0;
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = i + 1; j < dm; ++j) {
        const Vec kpart = model_.proj_k(m_brackets_[i * dm + j]);
        worst = std::max(worst, std::abs(dot(zeta_cov, kpart)));
      }
    return worst;
  }

  double hermitian_scalar(const Vec& zeta_cov) const { return dot(zeta_cov, xi_.xi); }

  // Same number computed without going through the zeta covector:
  // s = tr(ad_{H xi}) - tr(H ad_xi).
  double hermitian_scalar_direct(const Matrix& h) const {
    const LieAlgebra& g = model_.algebra;
    const Vec hxi = model_.from_m(h * xi_m_coords_);
    const Matrix ad_xi_m = r_m_ * g.ad_matrix(xi_.xi) * model_.m_basis;
    return dot(trace_vec_, hxi) - (h * ad_xi_m).trace();
  }

  double nijenhuis_formula_sq(const Matrix& h) const {
    const Terms t = basis_terms(h);
    return 0.125 * t.br_sq + 0.25 * t.ad_sq - 0.5 * t.h_ad_xi;
  }

  double nijenhuis_direct_sq(const Matrix& h) const {
    const Matrix u = unitary_basis(model_.sigma_m, h);
    const Matrix gm = symmetrize(model_.sigma_m * h);
    double total = 0.0;
    for (std::size_t i = 0; i < u.cols(); ++i)
      for (std::size_t j = i + 1; j < u.cols(); ++j) {
        const Vec n = nijenhuis(model_, h, u.col(i), u.col(j));
        total += dot(n, gm * n);
      }
    return total;
  }

  double riemannian_scalar(const Matrix& h) const {
    const Terms t = basis_terms(h);
    const Vec hxi = model_.from_m(h * xi_m_coords_);
    return -0.25 * t.br_sq - 0.5 * t.ad_sq + dot(trace_vec_, hxi);
  }

  // Representative of the first Chern class: zeta applied to the projection
  // of [m_i, m_j] onto the center of k (zero matrix when the center is 0).
  Matrix c1_representative(const Vec& zeta_cov) const {
    const std::size_t dm = model_.dim_m();
    Matrix out(dm, dm);
    if (z_basis_.cols() == 0) return out;
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = i + 1; j < dm; ++j) {
        const Vec c = z_proj_ * m_brackets_[i * dm + j];
        const double v = dot(zeta_cov, z_basis_ * c);
        out(i, j) = v;
        out(j, i) = -v;
      }
    return out;
  }

  SpecialnessResult rho_specialness(const Matrix& h, double tol = 1e-7) const {
    return specialness(chern_ricci(zeta(h)), model_.sigma_m, tol);
  }

 private:
  struct Terms {
    double br_sq = 0.0;    // sum_{i,j} ||[f_i,f_j]_m||_g^2 over ordered pairs
    double ad_sq = 0.0;    // sum_i tr(ad_{f_i}^2)
    double h_ad_xi = 0.0;  // tr(H ad_xi) on m
  };

  Terms basis_terms(const Matrix& h) const {
    const Matrix u = unitary_basis(model_.sigma_m, h);
    const Matrix gm = symmetrize(model_.sigma_m * h);
    const LieAlgebra& g = model_.algebra;
    Terms t;
    std::vector<Vec> amb;
    for (std::size_t i = 0; i < u.cols(); ++i) amb.push_back(model_.from_m(u.col(i)));
    for (std::size_t i = 0; i < u.cols(); ++i) {
      for (std::size_t j = i + 1; j < u.cols(); ++j) {
        const Vec br = model_.m_coords(g.bracket(amb[i], amb[j]));
        t.br_sq += 2.0 * dot(br, gm * br);  // ordered pairs double the i<j sum
      }
      t.ad_sq += dot(amb[i], killing_ * amb[i]);  // tr(ad_x^2) = B(x,x)
    }
    const Matrix ad_xi_m = r_m_ * g.ad_matrix(xi_.xi) * model_.m_basis;
    t.h_ad_xi = (h * ad_xi_m).trace();
    return t;
  }

  // z = center of k, complemented inside k by the derived subalgebra of k
  // (Euclidean fallback when they do not split k); z_proj_ maps ambient
  // vectors to z-coordinates.
  void build_center_projection() {
    const std::size_t dk = model_.dim_k(), d = model_.dim();
    z_basis_ = Matrix(d, 0);
    if (dk == 0) return;
    const LieAlgebra& g = model_.algebra;

    Matrix stacked(dk * d, dk);
    for (std::size_t a = 0; a < dk; ++a)
      for (std::size_t b = 0; b < dk; ++b) {
        const Vec br = g.bracket(model_.k_basis.col(b), model_.k_basis.col(a));
        for (std::size_t r = 0; r < d; ++r) stacked(a * d + r, b) = br[r];
      }
    const Matrix zc = nullspace(stacked, 1e-9);
    if (zc.cols() == 0) return;
    z_basis_ = model_.k_basis * zc;

    std::vector<Vec> der;
    for (std::size_t a = 0; a < dk; ++a)
      for (std::size_t b = a + 1; b < dk; ++b)
        der.push_back(g.bracket(model_.k_basis.col(a), model_.k_basis.col(b)));
    Matrix s_part = der.empty() ? Matrix() : orthonormal_columns(Matrix::from_columns(der), 1e-8);
    if (z_basis_.cols() + s_part.cols() != dk) {
      // k is not center + derived: drop to the Euclidean complement of z in k
      std::vector<Vec> cols;
      for (std::size_t a = 0; a < dk; ++a) {
        Vec v = model_.k_basis.col(a);
        for (std::size_t zi = 0; zi < z_basis_.cols(); ++zi)
          axpy(-dot(z_basis_.col(zi), v), z_basis_.col(zi), v);
        cols.push_back(v);
      }
      s_part = orthonormal_columns(Matrix::from_columns(cols), 1e-8);
    }

    const Matrix full = hcat(hcat(z_basis_, s_part), model_.m_basis);
    const Matrix inv = inverse(full);
    z_proj_ = Matrix(z_basis_.cols(), d);
    for (std::size_t i = 0; i < z_basis_.cols(); ++i)
      for (std::size_t j = 0; j < d; ++j) z_proj_(i, j) = inv(i, j);
  }

  ReductiveModel model_;
  Matrix r_m_;
  Vec trace_vec_;
  std::vector<Matrix> p_;
  Matrix killing_;
  XiSplit xi_;
  Vec xi_m_coords_;
  std::vector<Vec> m_brackets_;
  Matrix z_basis_;  // ambient columns spanning the center of k
  Matrix z_proj_;
};

inline CurvatureReport curvature_report(const CurvatureContext& ctx, const Matrix& h,
                                        double special_tol = 1e-7) {
  const ReductiveModel& model = ctx.model();
  check_compatible(model.sigma_m, h, 1e-8);
  CurvatureReport r;
  r.zeta = ctx.zeta(h);
  r.rho = ctx.chern_ricci(r.zeta);
  const SpecialnessResult sp = specialness(r.rho, model.sigma_m, special_tol);
  r.lambda = sp.lambda;
  r.special_residual = sp.residual;
  r.s = ctx.hermitian_scalar(r.zeta);
  r.nijenhuis_sq = ctx.nijenhuis_formula_sq(h);
  r.nijenhuis_sq_direct = ctx.nijenhuis_direct_sq(h);
  r.scal = ctx.riemannian_scalar(h);
  r.xi = ctx.xi().xi;
  if (!model.pairing.empty()) r.v_prime = solve(model.pairing, r.zeta);
  r.c1_rep = ctx.c1_representative(r.zeta);
  r.rho_k_discrepancy = ctx.rho_k_discrepancy(r.zeta);
  r.flags.special = sp.special;
  r.flags.chern_ricci_flat =
      r.rho.norm_fro() <= special_tol * std::max(model.sigma_m.norm_fro(), 1e-300);
  r.flags.integrable = r.nijenhuis_sq_direct <= 1e-9;
  r.flags.k_compact_assumed = model.dim_k() > 0;
  return r;
}

inline CurvatureReport curvature_report(const ReductiveModel& model, const Matrix& h,
                                        double special_tol = 1e-7) {
  return curvature_report(CurvatureContext(model), h, special_tol);
}

}  // namespace hak
