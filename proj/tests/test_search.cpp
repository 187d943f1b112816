#include <gtest/gtest.h>

#include <cmath>

#include "hak/catalog.hpp"
#include "hak/search.hpp"

using namespace hak;

namespace {

// so(6,1): the n = 3 twistor model, whose special structure has lambda = 2.
struct TwistorFixture {
  CatalogEntry entry = so_twistor(3);
  ReductiveModel model = model_from_entry(entry);
  CurvatureContext ctx{model};
  Matrix h_special = special_H_from_blocks(model, adV_blocks(model)).H;
};

}  // namespace

TEST(TangentDirections, SpanAndValidity) {
  const CatalogEntry entry = kodaira_thurston();
  const ReductiveModel model = model_from_entry(entry);
  const Matrix h = restrict_to_m(model, entry.h_hint);
  const std::vector<Matrix> dirs = tangent_directions(model.sigma_m, h);
  EXPECT_EQ(dirs.size(), 6u);  // n(n+1) with n = 2
  for (const Matrix& a : dirs) {
    // symplectic: A^T sigma + sigma A = 0
    EXPECT_LE((a.transpose() * model.sigma_m + model.sigma_m * a).norm_inf(), 1e-12);
    // anticommutes with H
    EXPECT_LE((a * h + h * a).norm_inf(), 1e-12);
  }
}

TEST(Retract, StaysCompatibleAndFixesExact) {
  const CatalogEntry entry = kodaira_thurston();
  const ReductiveModel model = model_from_entry(entry);
  const Matrix h = restrict_to_m(model, entry.h_hint);
  const std::vector<Matrix> dirs = tangent_directions(model.sigma_m, h);

  const CompatibleStructure fixed = retract(model.sigma_m, h, dirs[0], 0.0);
  EXPECT_LE((fixed.H - h).norm_inf(), 1e-12);

  const CompatibleStructure moved = retract(model.sigma_m, h, dirs[1], 0.3);
  check_compatible(model.sigma_m, moved.H, 1e-9);
  EXPECT_GE((moved.H - h).norm_inf(), 1e-3);  // actually moved
}

TEST(PerturbedCompatible, SizeAndValidity) {
  TwistorFixture fx;
  const CompatibleStructure p =
      perturbed_compatible(fx.model.sigma_m, fx.h_special, 11, 1e-2);
  check_compatible(fx.model.sigma_m, p.H, 1e-9);
  const double dist = (p.H - fx.h_special).norm_fro();
  EXPECT_GE(dist, 1e-4);
  EXPECT_LE(dist, 1.0);
}

TEST(Search, TwoStepConvergesImmediately) {
  TwoStepSpec spec;
  spec.seed = 3;
  const CatalogEntry entry = two_step_family(spec);
  const ReductiveModel model = model_from_entry(entry);
  const CurvatureContext ctx(model);
  const CompatibleStructure start = random_compatible(model.sigma_m, 5);
  const SearchResult r = search_special(ctx, start.H);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iters, 0);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Search, RecoversSpecialStructureOnTwistor) {
  TwistorFixture fx;
  SearchConfig config;
  config.step0 = 5e-3;  // stay inside the basin of the 1e-2 perturbation
  config.residual_target = 1e-8;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CompatibleStructure start =
        perturbed_compatible(fx.model.sigma_m, fx.h_special, seed, 1e-2);
    const SearchResult r = search_special(fx.ctx, start.H, config);
    EXPECT_TRUE(r.converged) << "seed " << seed << " residual " << r.residual;
    EXPECT_LE(r.iters, 500) << "seed " << seed;
    EXPECT_LE(r.residual, 1e-6) << "seed " << seed;
    EXPECT_NEAR(r.lambda, 2.0, 1e-4) << "seed " << seed;
    check_compatible(fx.model.sigma_m, r.structure.H, 1e-8);
  }
}

TEST(Search, MonotoneTraceAndDeterminism) {
  TwistorFixture fx;
  SearchConfig config;
  config.step0 = 0.02;
  config.max_iters = 40;
  const CompatibleStructure start =
      perturbed_compatible(fx.model.sigma_m, fx.h_special, 4, 1e-2);
  const SearchResult a = search_special(fx.ctx, start.H, config);
  const SearchResult b = search_special(fx.ctx, start.H, config);
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.iters, b.iters);
  for (std::size_t i = 1; i < a.trace.size(); ++i)
    EXPECT_LE(a.trace[i].residual, a.trace[i - 1].residual + 1e-18) << "at " << i;
}

TEST(Search, HonorsIterationCap) {
  TwistorFixture fx;
  SearchConfig config;
  config.max_iters = 2;
  config.step0 = 1e-4;  // too small to fix a 1e-2 perturbation in 2 sweeps
  config.residual_target = 1e-10;
  const CompatibleStructure start =
      perturbed_compatible(fx.model.sigma_m, fx.h_special, 6, 1e-2);
  const SearchResult r = search_special(fx.ctx, start.H, config);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iters, 2);
  EXPECT_GT(r.residual, config.residual_target);
}

TEST(Search, MultiStartPicksBest) {
  TwistorFixture fx;
  SearchConfig config;
  config.step0 = 0.05;
  config.max_iters = 120;
  config.residual_target = 1e-7;
  const SearchResult r = search_multi(fx.ctx, config, 2, fx.h_special);
  // start 0 is the exact special structure: residual already below target
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iters, 0);
  EXPECT_LE(r.residual, 1e-7);
}

TEST(Search, RejectsBadInput) {
  TwistorFixture fx;
  SearchConfig bad;
  bad.shrink = 1.5;
  EXPECT_THROW(search_special(fx.ctx, fx.h_special, bad), InputError);
  EXPECT_THROW(search_special(fx.ctx, Matrix::identity(fx.model.dim_m())), InputError);
  EXPECT_THROW(search_multi(fx.ctx, SearchConfig(), 0), InputError);
}
