// Derivative-free search for special compatible structures on a fixed
// (m, sigma): coordinate descent over the tangent space of the manifold of
// compatible structures, with the retraction H -> exp(tA) H exp(-tA) for
// sigma-symplectic directions A, re-projected through polar_H so every
// accepted iterate is exactly compatible. The objective is the specialness
// residual ||rho(H) - lambda(H) sigma||_F.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "compatible.hpp"
#include "curvature.hpp"
#include "errors.hpp"
#include "homogeneous.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace hak {

struct SearchConfig {
  int max_iters = 500;         // sweeps over the direction basis
  double step0 = 0.1;          // initial retraction parameter
  double shrink = 0.5;         // step multiplier after a stalled sweep
  double residual_target = 1e-8;
  std::uint64_t seed = 1;      // used for generated starts only
};

struct SearchTracePoint {
  int iter = 0;
  double residual = 0.0;
  double step = 0.0;
};

struct SearchResult {
  CompatibleStructure structure;
  double residual = 0.0;
  double lambda = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<SearchTracePoint> trace;
};

namespace detail {

inline void validate_search_config(const SearchConfig& c) {
  if (c.max_iters <= 0 || c.step0 <= 0.0 || c.residual_target <= 0.0 || c.shrink <= 0.0 ||
      c.shrink >= 1.0)
    throw InputError("search: config fields must be positive with shrink in (0,1)");
}

}  // namespace detail

// Basis of the tangent space at H to the manifold of sigma-compatible
// structures: symplectic directions anticommuting with H. In a unitary frame
// these are [[X, Y], [Y, -X]] with X, Y symmetric; returned in m-coordinates.
inline std::vector<Matrix> tangent_directions(const Matrix& sigma, const Matrix& h_struct) {
  const Matrix u = unitary_basis(sigma, h_struct);
  const Matrix u_inv = inverse(u);
  const std::size_t n = u.cols() / 2;
  std::vector<Matrix> dirs;
  dirs.reserve(n * (n + 1));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      Matrix d1(2 * n, 2 * n), d2(2 * n, 2 * n);
      d1(a, b) = d1(b, a) = 1.0;
      d1(n + a, n + b) = d1(n + b, n + a) = -1.0;
      d2(a, n + b) = d2(b, n + a) = 1.0;
      d2(n + a, b) = d2(n + b, a) = 1.0;
      for (const Matrix* d : {&d1, &d2}) {
        Matrix dir = u * *d * u_inv;
        const double norm = dir.norm_fro();  // unit scale: step == motion size
        dirs.push_back(dir * (1.0 / norm));
      }
    }
  return dirs;
}

// Move H along direction `dir` by parameter t and re-project onto the
// compatible-structure manifold via the polar construction.
inline CompatibleStructure retract(const Matrix& sigma, const Matrix& h_struct,
                                   const Matrix& dir, double t) {
  const Matrix e = expm(dir * t);
  const Matrix moved = e * h_struct * expm(dir * (-t));
  return polar_H(sigma, symmetrize(sigma * moved));
}

// Seeded compatible structure from a random SPD metric.
inline CompatibleStructure random_compatible(const Matrix& sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = sigma.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform_symmetric(rng);
  return polar_H(sigma, a.transpose() * a + Matrix::identity(n) * 0.5);
}

// Seeded perturbation of a compatible structure: a random tangent direction
// of Frobenius norm `size`, pushed through the retraction.
inline CompatibleStructure perturbed_compatible(const Matrix& sigma, const Matrix& h_struct,
                                                std::uint64_t seed, double size) {
  std::mt19937_64 rng(seed);
  const std::vector<Matrix> dirs = tangent_directions(sigma, h_struct);
  Matrix a(sigma.rows(), sigma.cols());
  for (const Matrix& d : dirs) a = a + d * uniform_symmetric(rng);
  const double norm = a.norm_fro();
  if (norm <= 0.0) return CompatibleStructure{h_struct, symmetrize(sigma * h_struct)};
  return retract(sigma, h_struct, a * (size / norm), 1.0);
}

inline SearchResult search_special(const CurvatureContext& ctx, const Matrix& h0,
                                   const SearchConfig& config = SearchConfig()) {
  detail::validate_search_config(config);
  const Matrix& sigma = ctx.model().sigma_m;
  check_compatible(sigma, h0, 1e-8);

  CompatibleStructure current{h0, symmetrize(sigma * h0)};
  SpecialnessResult sp = ctx.rho_specialness(current.H);

  SearchResult out;
  double step = config.step0;
  out.trace.push_back({0, sp.residual, step});

  // The Chern-Ricci form and the fitted lambda are both linear in H, so the
  // specialness defect H -> rho(H) - lambda(H) sigma is affine in H.  Each
  // iteration builds the Jacobian of the defect from central finite
  // differences along the tangent basis, takes the minimum-norm Gauss-Newton
  // step, and backtracks on the step scale until the re-projected candidate
  // improves.  The minimum-norm solve matters: the minimizers form a
  // near-flat set, and any step component along it would carry the iterate
  // away from the basin it started in.
  const std::size_t dm = sigma.rows();
  const auto defect = [&](const Matrix& h) {
    const Matrix rho = ctx.chern_ricci(ctx.zeta(h));
    const SpecialnessResult s = specialness(rho, sigma);
    Vec r(dm * dm);
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dm; ++j)
        r[i * dm + j] = rho(i, j) - s.lambda * sigma(i, j);
    return r;
  };
  const auto conjugated = [&](const Matrix& dir, double t) {
    return expm(dir * t) * current.H * expm(dir * -t);
  };

  int iter = 0;
  while (iter < config.max_iters && sp.residual > config.residual_target && step > 1e-13) {
    ++iter;
    const std::vector<Matrix> dirs = tangent_directions(sigma, current.H);
    const double t_fd = std::min(step, 1e-3);
    Matrix jac(dm * dm, dirs.size());
    for (std::size_t c = 0; c < dirs.size(); ++c) {
      const Vec rp = defect(conjugated(dirs[c], t_fd));
      const Vec rm = defect(conjugated(dirs[c], -t_fd));
      for (std::size_t r = 0; r < dm * dm; ++r) jac(r, c) = (rp[r] - rm[r]) / (2.0 * t_fd);
    }
    const Vec r0 = defect(current.H);

    // minimum-norm least-squares step via the spectral pseudo-inverse of J^T J
    const Matrix jtj = jac.transpose() * jac;
    Vec g(dirs.size(), 0.0);
    for (std::size_t c = 0; c < dirs.size(); ++c)
      for (std::size_t r = 0; r < dm * dm; ++r) g[c] += jac(r, c) * r0[r];
    const EigResult eig = sym_eig(jtj);
    const double ev_max = std::max(eig.values.back(), 0.0);
    Vec coef(dirs.size(), 0.0);
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
      if (eig.values[k] <= ev_max * 1e-12) continue;
      double vg = 0.0;
      for (std::size_t c = 0; c < dirs.size(); ++c) vg += eig.vectors(c, k) * g[c];
      const double w = -vg / eig.values[k];
      for (std::size_t c = 0; c < dirs.size(); ++c) coef[c] += w * eig.vectors(c, k);
    }
    Matrix gn_dir(dm, dm);
    for (std::size_t c = 0; c < dirs.size(); ++c) gn_dir = gn_dir + dirs[c] * coef[c];

    bool improved = false;
    for (double alpha = 1.0; alpha > 1e-10; alpha *= config.shrink) {
      try {
        CompatibleStructure candidate = retract(sigma, current.H, gn_dir, alpha);
        const SpecialnessResult cand_sp = ctx.rho_specialness(candidate.H);
        if (cand_sp.residual < sp.residual) {
          current = std::move(candidate);
          sp = cand_sp;
          improved = true;
          break;
        }
      } catch (const Error&) {
        // candidate left the valid region; keep backtracking
      }
    }
    out.trace.push_back({iter, sp.residual, step});
    if (!improved) step *= config.shrink;  // refine the probe scale and retry
  }

  out.structure = std::move(current);
  out.residual = sp.residual;
  out.lambda = sp.lambda;
  out.iters = iter;
  out.converged = sp.residual <= config.residual_target;
  return out;
}

inline SearchResult search_special(const ReductiveModel& model, const Matrix& h0,
                                   const SearchConfig& config = SearchConfig()) {
  return search_special(CurvatureContext(model), h0, config);
}

// Multi-start driver: start 0 uses h0 when given, the rest are seeded random
// compatible structures; returns the best result by residual (ties keep the
// earliest start, making the outcome deterministic).
inline SearchResult search_multi(const CurvatureContext& ctx, const SearchConfig& config,
                                 int starts, const Matrix& h0 = Matrix()) {
  if (starts < 1) throw InputError("search: starts must be >= 1");
  detail::validate_search_config(config);
  SearchResult best;
  bool have = false;
  for (int s = 0; s < starts; ++s) {
    const Matrix start = (s == 0 && !h0.empty())
                             ? h0
                             : random_compatible(ctx.model().sigma_m,
                                                 config.seed + static_cast<std::uint64_t>(s))
                                   .H;
    SearchResult r = search_special(ctx, start, config);
    if (!have || r.residual < best.residual) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace hak
