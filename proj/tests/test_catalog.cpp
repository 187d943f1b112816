#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hak/catalog.hpp"
#include "hak/curvature.hpp"

using namespace hak;

namespace {

Matrix random_spd(std::mt19937_64& rng, std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform_symmetric(rng);
  return a.transpose() * a + Matrix::identity(n) * 0.5;
}

CurvatureReport report_with_special_h(const CatalogEntry& entry) {
  const ReductiveModel model = model_from_entry(entry);
  const CompatibleStructure cs = special_H_from_blocks(model, adV_blocks(model));
  return curvature_report(model, cs.H);
}

}  // namespace

TEST(CatalogKT, EntryAndReport) {
  const CatalogEntry entry = kodaira_thurston();
  validate(entry.algebra);
  EXPECT_TRUE(is_two_step_nilpotent(entry.algebra));
  const ReductiveModel model = model_from_entry(entry);
  EXPECT_EQ(model.dim_m(), 4u);
  const Matrix h = restrict_to_m(model, entry.h_hint);
  const CurvatureReport r = curvature_report(model, h);
  EXPECT_NEAR(r.lambda, *entry.expected.lambda, 1e-12);
  EXPECT_NEAR(r.s, *entry.expected.s, 1e-12);
  EXPECT_NEAR(r.nijenhuis_sq, *entry.expected.nijenhuis_sq, 1e-12);
  EXPECT_NEAR(r.scal, *entry.expected.scal, 1e-12);
}

TEST(CatalogTwistor, MatrixCommutatorOracle) {
  const CatalogEntry entry = so_twistor(1);
  ASSERT_EQ(entry.matrix_basis.size(), 3u);
  // [E_1, E_2] as matrices lands back in the span; the structure constants
  // must reproduce its coordinates.
  const Matrix comm = entry.matrix_basis[1] * entry.matrix_basis[2] -
                      entry.matrix_basis[2] * entry.matrix_basis[1];
  const Vec via_algebra =
      entry.algebra.bracket(entry.algebra.basis_vector(1), entry.algebra.basis_vector(2));
  Matrix rebuilt(3, 3);
  for (std::size_t a = 0; a < 3; ++a) rebuilt = rebuilt + entry.matrix_basis[a] * via_algebra[a];
  EXPECT_LE((rebuilt - comm).norm_inf(), 1e-12);
}

TEST(CatalogTwistor, JacobiAndKillingScale) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const CatalogEntry entry = so_twistor(n);
    EXPECT_LE(jacobi_residual(entry.algebra), 1e-12) << "n=" << n;
    const Matrix killing = killing_form(entry.algebra);
    EXPECT_LE((killing - entry.pairing * entry.killing_scale).norm_inf(), 1e-9) << "n=" << n;
    EXPECT_NEAR(entry.killing_scale, 4.0 * static_cast<double>(n) - 2.0, 1e-12);
  }
}

TEST(CatalogTwistor, DimensionsAndV) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const CatalogEntry entry = so_twistor(n);
    const ReductiveModel model = model_from_entry(entry);
    EXPECT_EQ(model.dim_k(), n * n);
    EXPECT_EQ(model.dim_m(), n * (n + 1));
    EXPECT_LE(norm_inf(model.V - entry.v_coords), 1e-9);
  }
}

TEST(CatalogTwistor, ReportMatchesClosedForms) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const CatalogEntry entry = so_twistor(n);
    const CurvatureReport r = report_with_special_h(entry);
    const double nd = static_cast<double>(n);
    EXPECT_NEAR(r.lambda, 2.0 * nd - 4.0, 1e-9) << "n=" << n;
    EXPECT_LE(r.special_residual, 1e-8) << "n=" << n;
    EXPECT_NEAR(r.s, nd * (nd + 1.0) * (nd - 2.0), 1e-8) << "n=" << n;
    EXPECT_NEAR(r.nijenhuis_sq, 3.0 * nd * (nd - 1.0), 1e-8) << "n=" << n;
    EXPECT_NEAR(r.nijenhuis_sq_direct, r.nijenhuis_sq, 1e-7 * (1.0 + r.nijenhuis_sq))
        << "n=" << n;
    EXPECT_NEAR(r.scal, r.s - 2.0 * r.nijenhuis_sq, 1e-7 * (1.0 + std::abs(r.s))) << "n=" << n;
  }
}

TEST(CatalogTwistor, VPrimeScaling) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const CatalogEntry entry = so_twistor(n);
    const ReductiveModel model = model_from_entry(entry);
    const CompatibleStructure cs = special_H_from_blocks(model, adV_blocks(model));
    const CurvatureReport r = curvature_report(model, cs.H);
    const double scale = 2.0 * static_cast<double>(n) - 4.0;
    ASSERT_EQ(r.v_prime.size(), entry.v_coords.size());
    for (std::size_t i = 0; i < entry.v_coords.size(); ++i)
      EXPECT_NEAR(r.v_prime[i], scale * entry.v_coords[i], 1e-7 * (1.0 + std::abs(scale)))
          << "n=" << n << " i=" << i;
  }
}

TEST(CatalogTwistor, SpecialHMatchesClosedFormHint) {
  // so(4,1): block construction and the displayed closed form must agree.
  const CatalogEntry entry = so_twistor(2);
  const ReductiveModel model = model_from_entry(entry);
  const CompatibleStructure cs = special_H_from_blocks(model, adV_blocks(model));
  const Matrix h_closed = restrict_to_m(model, entry.h_hint);
  EXPECT_LE((cs.H - h_closed).norm_inf(), 1e-9);
  check_compatible(model.sigma_m, h_closed, 1e-8);
}

TEST(CatalogTwistor, CommutatorTable) {
  // so(4,1), n=2: basis indices are F's 0..5 followed by boosts E_1..E_4 at 6..9.
  const CatalogEntry entry = so_twistor(2);
  const LieAlgebra& g = entry.algebra;
  const ReductiveModel model = model_from_entry(entry);
  const double r2 = 1.0 / std::sqrt(2.0);

  const Vec e1 = g.basis_vector(6), e2 = g.basis_vector(7);
  const Vec e3 = g.basis_vector(8), e4 = g.basis_vector(9);
  const Vec p12 = scaled(g.bracket(e1, e2) - g.bracket(e3, e4), r2);
  const Vec q12 = scaled(g.bracket(e1, e4) + g.bracket(e3, e2), r2);

  // [P_12, E_2]_m = E_1/sqrt(2), [Q_12, E_4]_m = E_1/sqrt(2)
  EXPECT_LE(norm_inf(model.proj_m(g.bracket(p12, e2)) - scaled(e1, r2)), 1e-9);
  EXPECT_LE(norm_inf(model.proj_m(g.bracket(q12, e4)) - scaled(e1, r2)), 1e-9);
  // [P_12, E_1]_m = -E_2/sqrt(2)
  EXPECT_LE(norm_inf(model.proj_m(g.bracket(p12, e1)) - scaled(e2, -r2)), 1e-9);

  // ad_V: [V, E_1] = E_3, [V, P_12] = 2 Q_12
  EXPECT_LE(norm_inf(g.bracket(entry.v_coords, e1) - e3), 1e-9);
  EXPECT_LE(norm_inf(g.bracket(entry.v_coords, p12) - scaled(q12, 2.0)), 1e-9);

  // B-normalization of the catalog basis: B(P,P) = B(Q,Q) = -1, B(E_i,E_i) = 1
  EXPECT_NEAR(dot(p12, entry.pairing * p12), -1.0, 1e-12);
  EXPECT_NEAR(dot(q12, entry.pairing * q12), -1.0, 1e-12);
  EXPECT_NEAR(dot(e1, entry.pairing * e1), 1.0, 1e-12);
}

TEST(CatalogTwistor, IntegrableAtN1) {
  const CatalogEntry entry = so_twistor(1);
  const ReductiveModel model = model_from_entry(entry);
  const CompatibleStructure cs = special_H_from_blocks(model, adV_blocks(model));
  EXPECT_LE(nijenhuis_max(model, cs.H), 1e-12);
}

TEST(CatalogPeriodDomain, MatchesTwistorAtP1Q1) {
  const CatalogEntry a = so_twistor(1);
  const CatalogEntry b = so_period_domain(1, 1);
  const ReductiveModel ma = model_from_entry(a), mb = model_from_entry(b);
  const Matrix ha = special_H_from_blocks(ma, adV_blocks(ma)).H;
  const Matrix hb = special_H_from_blocks(mb, adV_blocks(mb)).H;
  EXPECT_LE((ha - hb).norm_inf(), 1e-9);
  EXPECT_LE((ma.sigma_m - mb.sigma_m).norm_inf(), 1e-12);
}

TEST(CatalogPeriodDomain, ExpectedValues) {
  const CatalogEntry entry = so_period_domain(2, 2);
  const ReductiveModel model = model_from_entry(entry);
  EXPECT_EQ(model.dim_m(), 10u);
  EXPECT_EQ(model.dim_k(), 5u);
  const CurvatureReport r = report_with_special_h(entry);
  EXPECT_NEAR(r.lambda, -2.0, 1e-8);
  EXPECT_NEAR(r.s, -10.0, 1e-7);
  EXPECT_NEAR(r.nijenhuis_sq, 12.0, 1e-7);
  EXPECT_NEAR(r.scal, -34.0, 1e-7);
  const Matrix killing = killing_form(entry.algebra);
  EXPECT_LE((killing - entry.pairing * entry.killing_scale).norm_inf(), 1e-9);
  EXPECT_NEAR(entry.killing_scale, 4.0 * 2 + 2.0 * 2 - 4.0, 1e-12);
}

TEST(CatalogPeriodDomain, IntegrableAlternativeStructure) {
  for (auto [p, q] : {std::pair<std::size_t, std::size_t>{2, 1}, {2, 2}, {1, 2}}) {
    const CatalogEntry entry = so_period_domain(p, q);
    const ReductiveModel model = model_from_entry(entry);
    const Matrix ht = restrict_to_m(model, entry.h_tilde_hint);
    const std::size_t dm = model.dim_m();
    // almost complex and symplectic
    EXPECT_LE((ht * ht + Matrix::identity(dm)).norm_inf(), 1e-9) << p << "," << q;
    EXPECT_LE((ht.transpose() * model.sigma_m * ht - model.sigma_m).norm_inf(), 1e-9)
        << p << "," << q;
    // integrable
    EXPECT_LE(nijenhuis_max(model, ht), 1e-9) << p << "," << q;
  }
}

TEST(CatalogProperties, ExpectedConsistencyAcrossVerifyRows) {
  for (const CatalogEntry& entry : verify_entries()) {
    EXPECT_LE(jacobi_residual(entry.algebra), 1e-12) << entry.name;
    if (entry.expected.s && entry.expected.lambda && entry.expected.dim_m) {
      const double half_dm = static_cast<double>(*entry.expected.dim_m) / 2.0;
      EXPECT_NEAR(*entry.expected.s, half_dm * *entry.expected.lambda, 1e-9) << entry.name;
    }
    if (is_two_step_nilpotent(entry.algebra)) {
      EXPECT_LE(killing_form(entry.algebra).norm_inf(), 1e-12) << entry.name;
    }
  }
}

TEST(CatalogTwoStep, SampledFamilyIsChernRicciFlat) {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TwoStepSpec spec;
    spec.seed = seed;
    const CatalogEntry entry = two_step_family(spec);
    EXPECT_TRUE(is_two_step_nilpotent(entry.algebra)) << entry.name;
    EXPECT_FALSE(is_abelian(entry.algebra)) << entry.name;
    const ReductiveModel model = model_from_entry(entry);
    const CurvatureContext ctx(model);
    for (int t = 0; t < 3; ++t) {
      const CompatibleStructure cs =
          polar_H(model.sigma_m, random_spd(rng, model.dim_m()));
      const Matrix rho = ctx.chern_ricci(ctx.zeta(cs.H));
      EXPECT_LE(rho.norm_inf(), 1e-9) << entry.name << " trial " << t;
    }
  }
}

TEST(CatalogTwoStep, ReproducesKodairaThurston) {
  TwoStepSpec spec;
  spec.generators = 3;
  spec.center = 1;
  spec.brackets = {{0, 1, 3, 1.0}};
  const CatalogEntry entry = two_step_family(spec);
  const LieAlgebra kt = kodaira_thurston().algebra;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_LE(norm_inf(entry.algebra.bracket(entry.algebra.basis_vector(i),
                                               entry.algebra.basis_vector(j)) -
                         kt.bracket(kt.basis_vector(i), kt.basis_vector(j))),
                1e-14);
  const ReductiveModel model = model_from_entry(entry);
  const CompatibleStructure cs = polar_H(model.sigma_m, Matrix::identity(4));
  const CurvatureReport r = curvature_report(model, cs.H);
  EXPECT_LE(r.rho.norm_inf(), 1e-9);
}

TEST(CatalogTwoStep, DeterministicForFixedSeed) {
  TwoStepSpec spec;
  spec.seed = 7;
  const CatalogEntry a = two_step_family(spec);
  const CatalogEntry b = two_step_family(spec);
  EXPECT_EQ((a.sigma_direct - b.sigma_direct).norm_inf(), 0.0);
  EXPECT_EQ(jacobi_residual(a.algebra), jacobi_residual(b.algebra));
}

TEST(CatalogTwoStep, RejectsBadSpecs) {
  TwoStepSpec odd;
  odd.generators = 2;
  odd.center = 1;
  EXPECT_THROW(two_step_family(odd), InputError);

  TwoStepSpec outside;
  outside.generators = 3;
  outside.center = 1;
  outside.brackets = {{0, 1, 0, 1.0}};  // target not central
  EXPECT_THROW(two_step_family(outside), InputError);

  TwoStepSpec abelian;
  abelian.generators = 3;
  abelian.center = 1;
  abelian.brackets = {{0, 1, 3, 0.0}};
  EXPECT_THROW(two_step_family(abelian), GenerationError);
}

TEST(CatalogRegistry, DispatchAndNames) {
  EXPECT_EQ(catalog_names().size(), 4u);
  CatalogParams params;
  params.n = 2;
  const CatalogEntry t = catalog_entry("so-twistor", params);
  EXPECT_EQ(t.algebra.dim(), 10u);
  EXPECT_THROW(catalog_entry("nope"), InputError);
  EXPECT_EQ(verify_entries().size(), 13u);
}
