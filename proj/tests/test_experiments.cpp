#include <gtest/gtest.h>

#include <cmath>

#include "lognls/experiments.hpp"

using namespace lognls;

namespace {

SimConfig small_config(GridGeometry geo, double lambda, double eps, double t_final = 0.1) {
  SimConfig c;
  c.geometry = std::move(geo);
  c.lambda = lambda;
  c.eps = Regularization(eps);
  c.dt = 1e-3;
  c.t_final = t_final;
  c.record_every = 5;
  return c;
}

const auto kTorus = GridGeometry::torus({64});

}  // namespace

TEST(Margin, Relations) {
  EXPECT_TRUE(Margin::at_most(1.0, 1.0).ok());
  EXPECT_FALSE(Margin::less_than(1.0, 1.0).ok());
  EXPECT_TRUE(Margin::at_least(10.0, 10.0).ok());
  EXPECT_TRUE(Margin::in_range(1.5, 1.0, 2.0).ok());
  EXPECT_FALSE(Margin::in_range(2.5, 1.0, 2.0).ok());
  EXPECT_FALSE(Margin::at_most(NAN, 1.0).ok());
  EXPECT_TRUE(Margin::info(NAN).ok());
}

TEST(Digest, DeterministicAndSensitive) {
  auto c = small_config(kTorus, 1.0, 1e-3);
  const auto spec = DatumSpec::gaussian({0.5}, 0.1);
  const auto d0 = Digest().add(spec).add(c).hex();
  EXPECT_EQ(d0, Digest().add(spec).add(c).hex());
  EXPECT_EQ(d0.size(), 16u);
  c.seed = 1;
  EXPECT_NE(d0, Digest().add(spec).add(c).hex());
  c.seed = 0;
  c.dt = 2e-3;
  EXPECT_NE(d0, Digest().add(spec).add(c).hex());
  auto spec2 = spec;
  spec2.width = 0.1000000001;
  EXPECT_NE(Digest().add(spec2).add(small_config(kTorus, 1.0, 1e-3)).hex(), d0);
}

TEST(Lipschitz, IdenticalDataIsDegenerate) {
  const auto spec = DatumSpec::gaussian({0.5}, 0.1);
  const auto r = run_lipschitz(spec, spec, small_config(kTorus, 1.0, 1e-3));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.notes.count("degenerate"), 1u);
}

TEST(Lipschitz, LinearFlowRatioIsOne) {
  auto c = small_config(kTorus, 0.0, 1e-3);
  const auto r = run_lipschitz(DatumSpec::band_limited(6, 1), DatumSpec::band_limited(6, 2), c);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.margins.at("worst_ratio").value, 1.0, 1e-10);
}

TEST(Lipschitz, GaussianPairPasses) {
  const auto r = run_lipschitz(DatumSpec::gaussian({0.5}, 0.1), DatumSpec::gaussian({0.47}, 0.09),
                               small_config(kTorus, 1.0, 1e-3, 0.2));
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.margins.at("samples").value, 10.0);
}

TEST(Lipschitz, TooFewSamplesFails) {
  auto c = small_config(kTorus, 1.0, 1e-3, 0.01);
  c.record_every = 5;
  const auto r = run_lipschitz(DatumSpec::gaussian({0.5}, 0.1), DatumSpec::gaussian({0.4}, 0.1), c);
  EXPECT_FALSE(r.margins.at("samples").ok());
  EXPECT_FALSE(r.passed());
}

TEST(HsGrowth, LinearFlowAndInitialRow) {
  auto c = small_config(kTorus, 0.0, 1e-3);
  c.hs_values = {0.25, 0.5};
  const auto r = run_hs_growth(DatumSpec::rough(0.5, 3), c);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.margins.at(s_label("max_ratio", 0.5)).value, 1.0, 1e-10);
  EXPECT_EQ(r.series.front().second, 1.0);
  EXPECT_TRUE(r.margins.at(s_label("gagliardo_ratio", 0.25)).ok());
}

TEST(HsGrowth, RequiresTrackedValues) {
  EXPECT_THROW(run_hs_growth(DatumSpec::rough(0.5, 3), small_config(kTorus, 1.0, 1e-3)), Error);
}

TEST(HsGrowth, BoxReportsConcentration) {
  auto c = small_config(GridGeometry(DomainKind::PeriodicBox, {16.0}, {256}), 1.0, 1e-3);
  c.hs_values = {0.5};
  const auto r = run_hs_growth(DatumSpec::gaussian({8.0}, 0.5), c);
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.margins.at("max_outer_mass_fraction").value, 1e-10);
}

TEST(Scaling, TrivialFactors) {
  const auto spec = DatumSpec::gaussian({0.5}, 0.1);
  const auto c = small_config(kTorus, 1.0, 0.0);
  const auto one = run_scaling_invariance(spec, 1.0, c);
  EXPECT_EQ(one.margins.at("max_rel_err").value, 0.0);
  const auto phase = run_scaling_invariance(spec, std::polar(1.0, 0.7), c);
  EXPECT_LE(phase.margins.at("max_rel_err").value, 1e-13);
  EXPECT_TRUE(phase.passed());
}

TEST(Scaling, RejectsRegularization) {
  EXPECT_THROW(run_scaling_invariance(DatumSpec::gaussian({0.5}, 0.1), 2.0, small_config(kTorus, 1.0, 1e-3)), Error);
}

TEST(Galilean, TrivialCases) {
  const auto spec = DatumSpec::gaussian({0.5}, 0.1);
  const auto zero = run_galilean(spec, {{0}}, small_config(kTorus, 1.0, 1e-3));
  EXPECT_EQ(zero.margins.at("discrepancy").value, 0.0);
  const auto lin = run_galilean(DatumSpec::gaussian({0.5}, 0.05), {{2}}, small_config(kTorus, 0.0, 1e-3));
  EXPECT_LE(lin.margins.at("discrepancy").value, 1e-10);
  EXPECT_TRUE(lin.passed());
  EXPECT_THROW(run_galilean(spec, {{1}}, small_config(GridGeometry(DomainKind::DirichletInterval, {1.0}, {64}), 1.0, 0.0)),
               Error);
}

TEST(EpsCauchy, LinearAndRepeated) {
  const auto spec = DatumSpec::gaussian({0.5}, 0.1);
  const auto lin = run_eps_cauchy(spec, small_config(kTorus, 0.0, 0.1), {0.25, 0.0625, 0.015625});
  EXPECT_TRUE(lin.passed());
  EXPECT_EQ(lin.notes.count("exact"), 1u);
  const auto rep = run_eps_cauchy(spec, small_config(kTorus, 1.0, 0.1), {0.25, 0.25, 0.0625}, 1.0);
  EXPECT_EQ(rep.notes.at("zero_entries"), "0");
}

TEST(H1Approx, SmoothDatumHitsZero) {
  const auto r = run_h1_approximation(DatumSpec::band_limited(4, 9), {8, 16, 32}, small_config(kTorus, 1.0, 1e-3));
  EXPECT_EQ(r.margins.at("sup_distance_K=8-16").value, 0.0);
  EXPECT_EQ(r.margins.at("sup_distance_K=16-32").value, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(H1Approx, LinearDistancesConstant) {
  const auto r = run_h1_approximation(DatumSpec::rough(0.5, 9), {4, 8, 16}, small_config(kTorus, 0.0, 1e-3));
  EXPECT_NEAR(r.margins.at("worst_lipschitz_ratio").value, 1.0, 1e-10);
  EXPECT_TRUE(r.passed());
}

TEST(H1Approx, RejectsBadCutoffs) {
  EXPECT_THROW(run_h1_approximation(DatumSpec::rough(0.0, 9), {8}, small_config(kTorus, 1.0, 1e-3)), Error);
  EXPECT_THROW(run_h1_approximation(DatumSpec::rough(0.0, 9), {8, 8}, small_config(kTorus, 1.0, 1e-3)), Error);
}

TEST(Convergence, ExactRegimes) {
  const auto c = small_config(kTorus, 1.0, 1e-2);
  const auto pw = run_convergence_order(DatumSpec::plane_wave({2}, 0.5), c, {0.01, 0.005, 0.0025});
  EXPECT_EQ(pw.notes.at("regime").substr(0, 5), "exact");
  EXPECT_TRUE(pw.passed());
  const auto lin = run_convergence_order(DatumSpec::gaussian({0.5}, 0.1), small_config(kTorus, 0.0, 1e-2),
                                         {0.01, 0.005, 0.0025});
  EXPECT_EQ(lin.notes.count("regime"), 1u);
}

TEST(Convergence, StrangIsSecondOrder) {
  // dt well below the stiffness scale of ln(|u| + eps) near |u| ~ eps
  const auto r = run_convergence_order(DatumSpec::gaussian({0.5}, 0.1), small_config(kTorus, 1.0, 1e-2, 0.5),
                                       {2e-3, 1e-3, 5e-4, 2.5e-4});
  EXPECT_TRUE(r.passed()) << r.margins.at("order").value;
}

TEST(CheckInequality, SmallSuitePasses) {
  const auto r = run_monotonicity_suite(20000, 3);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(run_monotonicity_suite(20000, 3).margins.at("worst_ratio_regularized").value,
            r.margins.at("worst_ratio_regularized").value);
}

TEST(Reports, DigestStableAcrossRuns) {
  const auto spec = DatumSpec::gaussian({0.5}, 0.1);
  const auto a = run_galilean(spec, {{1}}, small_config(kTorus, 1.0, 1e-3));
  const auto b = run_galilean(spec, {{1}}, small_config(kTorus, 1.0, 1e-3));
  EXPECT_EQ(a.config_digest, b.config_digest);
  EXPECT_EQ(a.margins.at("discrepancy").value, b.margins.at("discrepancy").value);
  const auto c = run_galilean(spec, {{2}}, small_config(kTorus, 1.0, 1e-3));
  EXPECT_NE(a.config_digest, c.config_digest);
}
