// Named homogeneous models with pinned geometry, used as golden fixtures:
// the Kodaira-Thurston algebra, twistor spaces of hyperbolic 2n-space
// (so(2n,1)/u(n)), Griffiths period domains of weight two (so(2p,q)), and a
// seeded family of symplectic two-step nilpotent algebras. Matrix-realized
// algebras are converted to structure constants by expanding commutators of
// the chosen matrix basis and solving for coordinates.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "compatible.hpp"
#include "errors.hpp"
#include "homogeneous.hpp"
#include "lie_algebra.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace hak {

struct ExpectedValues {
  std::optional<double> lambda;
  std::optional<double> s;
  std::optional<double> nijenhuis_sq;
  std::optional<double> scal;
  std::optional<std::size_t> dim_m;
  std::optional<std::size_t> dim_k;
  std::optional<double> v_prime_scale;  // dual of zeta = scale * V
};

struct CatalogEntry {
  CatalogEntry(std::string name_, LieAlgebra algebra_)
      : name(std::move(name_)), algebra(std::move(algebra_)) {}

  std::string name;
  LieAlgebra algebra;
  Vec theta;            // empty when the entry is sigma-based
  Matrix sigma_direct;  // closed 2-form on g itself; empty when theta-based
  Matrix h_hint;        // ambient endomorphism restricting to H on m, 0 on k
  Matrix h_tilde_hint;  // ambient integrable alternative, when one is known
  Matrix pairing;       // invariant form used for V and block normalization
  Vec v_coords;         // pairing-dual of theta in the catalog basis
  double killing_scale = 0.0;        // killing_form = scale * pairing (0: n/a)
  std::vector<Matrix> matrix_basis;  // ambient realization, when one exists
  ExpectedValues expected;
};

namespace detail {

inline Vec flatten(const Matrix& m) {
  Vec v(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}

// Least-squares coordinates with respect to a fixed list of basis matrices;
// rejects targets outside the span (the span must be a closed subalgebra).
class MatrixSpanSolver {
 public:
  explicit MatrixSpanSolver(const std::vector<Matrix>& basis) : basis_(basis) {
    const std::size_t d = basis_.size();
    flats_.reserve(d);
    for (const Matrix& b : basis_) flats_.push_back(flatten(b));
    gram_ = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) gram_(i, j) = gram_(j, i) = dot(flats_[i], flats_[j]);
  }

  Vec coords(const Matrix& target, double tol = 1e-10) const {
    const std::size_t d = basis_.size();
    const Vec t = flatten(target);
    Vec rhs(d);
    for (std::size_t i = 0; i < d; ++i) rhs[i] = dot(flats_[i], t);
    const Vec c = solve(gram_, rhs);
    Vec rec(t.size(), 0.0);
    for (std::size_t i = 0; i < d; ++i) axpy(c[i], flats_[i], rec);
    if (norm_inf(rec - t) > tol * std::max(1.0, norm_inf(t)))
      throw StrategyError("catalog: matrix lies outside the span of the basis");
    return c;
  }

 private:
  std::vector<Matrix> basis_;
  std::vector<Vec> flats_;
  Matrix gram_;
};

inline LieAlgebra algebra_from_matrix_basis(const std::vector<Matrix>& basis) {
  const MatrixSpanSolver solver(basis);
  const std::size_t d = basis.size();
  std::vector<BracketEntry> entries;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      const Matrix comm = basis[a] * basis[b] - basis[b] * basis[a];
      const Vec c = solver.coords(comm);
      for (std::size_t k = 0; k < d; ++k)
        if (std::abs(c[k]) > 1e-9) entries.push_back({a, b, k, c[k]});
    }
  return LieAlgebra(d, entries);
}

inline Matrix antisym_unit(std::size_t n, std::size_t a, std::size_t b) {
  Matrix m(n, n);
  m(a, b) = 1.0;
  m(b, a) = -1.0;
  return m;
}

// Basis of so(2p,q) in the (2p+q)-dimensional realization [[A_2p, u],
// [u^t, A_q]]: elementary antisymmetric matrices of o(2p), then of o(q),
// then the 2p*q boost generators (unit u, column-by-column).
inline std::vector<Matrix> so_pq_basis(std::size_t p, std::size_t q) {
  const std::size_t twop = 2 * p, n = twop + q;
  std::vector<Matrix> basis;
  for (std::size_t a = 0; a < twop; ++a)
    for (std::size_t b = a + 1; b < twop; ++b) basis.push_back(antisym_unit(n, a, b));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b)
      basis.push_back(antisym_unit(n, twop + a, twop + b));
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t i = 0; i < twop; ++i) {
      Matrix m(n, n);
      m(i, twop + j) = 1.0;
      m(twop + j, i) = 1.0;
      basis.push_back(std::move(m));
    }
  return basis;
}

// B(X,Y) = <u,v> + tr(A_2p B_2p)/2 + tr(A_q B_q)/2, the rescaled invariant
// form of so(2p,q); the true Killing form is (4p+2q-4) times this.
inline double rescaled_b_form(const Matrix& x, const Matrix& y, std::size_t twop) {
  const std::size_t n = x.rows();
  double out = 0.0;
  for (std::size_t i = 0; i < twop; ++i)
    for (std::size_t j = twop; j < n; ++j) out += x(i, j) * y(i, j);
  for (std::size_t i = 0; i < twop; ++i)
    for (std::size_t j = 0; j < twop; ++j) out += 0.5 * x(i, j) * y(j, i);
  for (std::size_t i = twop; i < n; ++i)
    for (std::size_t j = twop; j < n; ++j) out += 0.5 * x(i, j) * y(j, i);
  return out;
}

inline Matrix standard_j0(std::size_t twop) {
  const std::size_t p = twop / 2;
  Matrix j0(twop, twop);
  for (std::size_t i = 0; i < p; ++i) {
    j0(i + p, i) = 1.0;
    j0(i, i + p) = -1.0;
  }
  return j0;
}

// The closed-form structures on m: HX = [[-[J0,A]/2, J0 u], [(J0 u)^t, 0]]
// (a_sign = -1) and its integrable variant with +[J0,A]/2 (a_sign = +1).
inline Matrix h_closed_form(const Matrix& x, const Matrix& j0, double a_sign) {
  const std::size_t n = x.rows(), twop = j0.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < twop; ++i)
    for (std::size_t j = 0; j < twop; ++j) {
      double comm = 0.0;
      for (std::size_t t = 0; t < twop; ++t)
        comm += j0(i, t) * x(t, j) - x(i, t) * j0(t, j);
      out(i, j) = 0.5 * a_sign * comm;
    }
  for (std::size_t i = 0; i < twop; ++i)
    for (std::size_t j = twop; j < n; ++j) {
      double ju = 0.0;
      for (std::size_t t = 0; t < twop; ++t) ju += j0(i, t) * x(t, j);
      out(i, j) = ju;
      out(j, i) = ju;
    }
  return out;
}

inline CatalogEntry make_so_entry(std::size_t p, std::size_t q, std::string name) {
  const std::vector<Matrix> basis = so_pq_basis(p, q);
  const std::size_t d = basis.size(), twop = 2 * p;
  const MatrixSpanSolver solver(basis);

  CatalogEntry entry{std::move(name), algebra_from_matrix_basis(basis)};
  entry.matrix_basis = basis;

  entry.pairing = Matrix(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b)
      entry.pairing(a, b) = entry.pairing(b, a) = rescaled_b_form(basis[a], basis[b], twop);

  const Matrix j0 = standard_j0(twop);
  Matrix v_mat(twop + q, twop + q);
  for (std::size_t i = 0; i < twop; ++i)
    for (std::size_t j = 0; j < twop; ++j) v_mat(i, j) = j0(i, j);
  entry.v_coords = solver.coords(v_mat);
  entry.theta = entry.pairing * entry.v_coords;

  entry.h_hint = Matrix(d, d);
  entry.h_tilde_hint = Matrix(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    entry.h_hint.set_col(a, solver.coords(h_closed_form(basis[a], j0, -1.0)));
    entry.h_tilde_hint.set_col(a, solver.coords(h_closed_form(basis[a], j0, +1.0)));
  }

  const double dp = static_cast<double>(p), dq = static_cast<double>(q);
  entry.killing_scale = 4.0 * dp + 2.0 * dq - 4.0;
  entry.expected.lambda = 2.0 * dp - 2.0 * dq - 2.0;
  entry.expected.s = dp * (dp + 2.0 * dq - 1.0) * (dp - dq - 1.0);
  entry.expected.nijenhuis_sq = 3.0 * dp * dq * (dp - 1.0);
  entry.expected.scal = *entry.expected.s - 2.0 * *entry.expected.nijenhuis_sq;
  entry.expected.dim_m = p * (p + 2 * q - 1);
  entry.expected.dim_k = p * p + q * (q - 1) / 2;
  entry.expected.v_prime_scale = entry.expected.lambda;
  return entry;
}

// Solve the linear cocycle constraints sigma([x,y],z) + cyclic = 0 and pick
// a nondegenerate solution by seeded combination of the nullspace basis.
// Returns an empty matrix when no combination reaches the margin.
inline Matrix closed_nondegenerate_sigma(const LieAlgebra& g, std::mt19937_64& rng,
                                         int tries = 40, double margin = 1e-6) {
  const std::size_t d = g.dim();
  const std::size_t nu = d * (d - 1) / 2;
  std::vector<std::size_t> offset(d, 0);
  for (std::size_t i = 1; i < d; ++i) offset[i] = offset[i - 1] + (d - i);
  const auto idx = [&](std::size_t i, std::size_t j) { return offset[i] + (j - i - 1); };

  std::vector<Vec> rows;
  const auto accumulate = [&](Vec& row, const Vec& br, std::size_t c) {
    for (std::size_t t = 0; t < d; ++t) {
      if (br[t] == 0.0 || t == c) continue;
      if (t < c)
        row[idx(t, c)] += br[t];
      else
        row[idx(c, t)] -= br[t];
    }
  };
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      for (std::size_t c = b + 1; c < d; ++c) {
        Vec row(nu, 0.0);
        accumulate(row, g.bracket(g.basis_vector(a), g.basis_vector(b)), c);
        accumulate(row, g.bracket(g.basis_vector(b), g.basis_vector(c)), a);
        accumulate(row, g.bracket(g.basis_vector(c), g.basis_vector(a)), b);
        if (norm_inf(row) > 0.0) rows.push_back(std::move(row));
      }

  Matrix basis = Matrix::identity(nu);
  if (!rows.empty()) {
    Matrix c_mat(rows.size(), nu);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t u = 0; u < nu; ++u) c_mat(r, u) = rows[r][u];
    basis = nullspace(c_mat);
  }
  if (basis.cols() == 0) return Matrix();

  const auto unpack = [&](const Vec& sv) {
    Matrix sigma(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        sigma(i, j) = sv[idx(i, j)];
        sigma(j, i) = -sv[idx(i, j)];
      }
    return sigma;
  };

  for (int t = 0; t < tries; ++t) {
    Vec coeff(basis.cols());
    for (double& c : coeff) c = uniform_symmetric(rng);
    Matrix sigma = unpack(basis * coeff);
    const double scale = sigma.norm_inf();
    if (scale <= 0.0) continue;
    sigma = sigma * (1.0 / scale);
    if (nondegeneracy_margin(sigma) > margin) return sigma;
  }
  return Matrix();
}

}  // namespace detail

// The 4-dimensional nilpotent algebra [e1,e2] = e4 underlying the
// Kodaira-Thurston manifold, with sigma = phi^1^phi^3 + phi^2^phi^4 and the
// standard structure He1 = e3, He2 = e4.
inline CatalogEntry kodaira_thurston() {
  CatalogEntry entry{"kodaira-thurston", LieAlgebra(4, {{0, 1, 3, 1.0}})};
  entry.sigma_direct = Matrix(4, 4);
  entry.sigma_direct(0, 2) = entry.sigma_direct(1, 3) = 1.0;
  entry.sigma_direct(2, 0) = entry.sigma_direct(3, 1) = -1.0;
  entry.h_hint = Matrix(4, 4);
  entry.h_hint(2, 0) = entry.h_hint(3, 1) = 1.0;
  entry.h_hint(0, 2) = entry.h_hint(1, 3) = -1.0;
  entry.expected.lambda = 0.0;
  entry.expected.s = 0.0;
  entry.expected.nijenhuis_sq = 0.25;
  entry.expected.scal = -0.5;
  entry.expected.dim_m = 4;
  entry.expected.dim_k = 0;
  return entry;
}

// Twistor space of hyperbolic 2n-space: so(2n,1)/u(n) as the coadjoint
// orbit of theta = B(V,.), V the standard complex structure block.
inline CatalogEntry so_twistor(std::size_t n) {
  if (n < 1) throw InputError("so_twistor: n must be >= 1");
  return detail::make_so_entry(n, 1, "so-twistor(n=" + std::to_string(n) + ")");
}

// Griffiths period domain of weight two: so(2p,q)/(u(p) + so(q)). Also
// carries the integrable structure h_tilde_hint (pseudo-Kaehler metric).
inline CatalogEntry so_period_domain(std::size_t p, std::size_t q) {
  if (p < 1 || q < 1) throw InputError("so_period_domain: p, q must be >= 1");
  return detail::make_so_entry(
      p, q, "so-period-domain(p=" + std::to_string(p) + ",q=" + std::to_string(q) + ")");
}

// Seeded generator of symplectic two-step nilpotent algebras: `generators`
// base directions bracketing into `center` central directions, with a closed
// nondegenerate 2-form found by solving the cocycle constraints.
struct TwoStepSpec {
  std::size_t generators = 3;
  std::size_t center = 3;
  std::uint64_t seed = 1;
  std::vector<BracketEntry> brackets;  // explicit coefficients; empty: sample
  int max_retries = 50;
};

inline CatalogEntry two_step_family(const TwoStepSpec& spec) {
  const std::size_t k = spec.generators, c = spec.center, d = k + c;
  if (k < 2 || c < 1) throw InputError("two_step_family: needs >= 2 generators, >= 1 central");
  if (d % 2 != 0) throw InputError("two_step_family: total dimension must be even");
  const bool fixed = !spec.brackets.empty();
  for (const BracketEntry& e : spec.brackets)
    if (e.i >= k || e.j >= k || e.k < k || e.k >= d)
      throw InputError("two_step_family: explicit bracket outside generators -> center");
  if (fixed) {
    double scale = 0.0;
    for (const BracketEntry& e : spec.brackets) scale = std::max(scale, std::abs(e.c));
    if (scale == 0.0)
      throw GenerationError("two_step_family: explicit brackets give an abelian algebra");
  }

  std::mt19937_64 rng(spec.seed);
  const int attempts = fixed ? 1 : std::max(1, spec.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<BracketEntry> entries = spec.brackets;
    if (!fixed) {
      for (std::size_t r = 0; r < c; ++r)
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i + 1; j < k; ++j)
            entries.push_back({i, j, k + r, uniform_symmetric(rng)});
    }
    LieAlgebra g(d, entries);
    if (is_abelian(g)) continue;
    Matrix sigma = detail::closed_nondegenerate_sigma(g, rng);
    if (sigma.empty()) {
      if (fixed)
        throw GenerationError("two_step_family: no nondegenerate closed form for the bracket");
      continue;
    }
    CatalogEntry entry{"two-step(k=" + std::to_string(k) + ",c=" + std::to_string(c) +
                           ",seed=" + std::to_string(spec.seed) + ")",
                       std::move(g)};
    entry.sigma_direct = std::move(sigma);
    entry.expected.lambda = 0.0;
    entry.expected.dim_m = d;
    entry.expected.dim_k = 0;
    return entry;
  }
  throw GenerationError("two_step_family: exhausted retries without a symplectic sample");
}

// ---- registry ----

inline std::vector<std::string> catalog_names() {
  return {"kodaira-thurston", "so-twistor", "so-period-domain", "two-step"};
}

struct CatalogParams {
  std::size_t n = 2;
  std::size_t p = 2;
  std::size_t q = 1;
  std::uint64_t seed = 1;
};

inline CatalogEntry catalog_entry(const std::string& name,
                                  const CatalogParams& params = CatalogParams()) {
  if (name == "kodaira-thurston") return kodaira_thurston();
  if (name == "so-twistor") return so_twistor(params.n);
  if (name == "so-period-domain") return so_period_domain(params.p, params.q);
  if (name == "two-step") {
    TwoStepSpec spec;
    spec.seed = params.seed;
    return two_step_family(spec);
  }
  throw InputError("catalog: unknown entry '" + name + "'");
}

// The rows exercised by `verify` and the acceptance suite.
inline std::vector<CatalogEntry> verify_entries() {
  std::vector<CatalogEntry> out;
  out.push_back(kodaira_thurston());
  for (std::size_t n = 1; n <= 4; ++n) out.push_back(so_twistor(n));
  for (std::size_t p = 1; p <= 2; ++p)
    for (std::size_t q = 1; q <= 3; ++q) out.push_back(so_period_domain(p, q));
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    TwoStepSpec spec;
    spec.seed = seed;
    out.push_back(two_step_family(spec));
  }
  return out;
}

// ---- model and structure helpers ----

inline ReductiveModel model_from_entry(const CatalogEntry& entry,
                                       const ModelOptions& opts = ModelOptions()) {
  if (!entry.theta.empty())
    return model_from_theta(entry.algebra, entry.theta, Matrix(), entry.pairing, opts);
  if (!entry.sigma_direct.empty()) return model_from_sigma(entry.algebra, entry.sigma_direct, opts);
  throw InputError("catalog: entry '" + entry.name + "' has neither theta nor sigma");
}

// Express an ambient endomorphism (vanishing on k, preserving m) as a matrix
// on m-coordinates of the given model.
inline Matrix restrict_to_m(const ReductiveModel& model, const Matrix& ambient_map) {
  if (!ambient_map.square() || ambient_map.rows() != model.dim())
    throw InputError("restrict_to_m: ambient map has wrong shape");
  Matrix out(model.dim_m(), model.dim_m());
  for (std::size_t j = 0; j < model.dim_m(); ++j)
    out.set_col(j, model.m_coords(ambient_map * model.m_basis.col(j)));
  return out;
}

}  // namespace hak
