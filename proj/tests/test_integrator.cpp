#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lognls/datum.hpp"
#include "lognls/integrator.hpp"

using namespace lognls;

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

SimConfig base_config(GridGeometry geo, double lambda, double eps, double dt, double t_final) {
  SimConfig c;
  c.geometry = std::move(geo);
  c.lambda = lambda;
  c.eps = Regularization(eps);
  c.dt = dt;
  c.t_final = t_final;
  return c;
}

double rel_l2(const ComplexField& a, const ComplexField& b) { return l2_distance(a, b) / std::sqrt(mass(b)); }

}  // namespace

TEST(Integrator, ConfigValidation) {
  const auto geo = GridGeometry::torus({16});
  EXPECT_THROW(base_config(geo, 1, 0, 0.0, 1).validate(), Error);
  EXPECT_THROW(base_config(geo, 1, 0, 2.0, 1).validate(), Error);
  EXPECT_THROW(base_config(geo, NAN, 0, 0.1, 1).validate(), Error);
  auto c = base_config(geo, 1, 0, 0.1, 1);
  c.record_every = 20;
  EXPECT_THROW(c.validate(), Error);
  c.record_every = 1;
  c.hs_values = {1.5};
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(base_config(geo, 1, 0, 1e-9, 1).validate(), Error);
  EXPECT_NO_THROW(base_config(geo, 1, 0, 0.1, -1).validate());
}

TEST(Integrator, PlaneWaveSingleStepIsExact) {
  const auto geo = GridGeometry::torus({64});
  const Complex a = 0.5;
  const double lambda = 1.0;
  const double eps = 1e-2;
  const double dt = 1e-3;
  const auto u0 = make_datum(DatumSpec::plane_wave({3}, a), geo);
  for (auto split : {Splitting::Strang, Splitting::Lie}) {
    auto c = base_config(geo, lambda, eps, dt, dt);
    c.splitting = split;
    const auto u1 = step(u0, c);
    const double theta = -kFourPiSq * 9.0 + 2.0 * lambda * std::log(std::abs(a) + eps);
    const auto expect = scale_datum(u0, std::polar(1.0, theta * dt));
    EXPECT_LE(rel_l2(u1, expect), 1e-14);
  }
}

TEST(Integrator, LinearStepIsFreePropagator) {
  const auto geo = GridGeometry::torus({32});
  const auto u0 = make_datum(DatumSpec::band_limited(6, 3), geo);
  const auto c = base_config(geo, 0.0, 0.1, 0.01, 0.01);
  EXPECT_EQ(step(u0, c), free_propagator(u0, 0.01));
}

TEST(Integrator, ZeroFieldStaysZero) {
  const auto geo = GridGeometry::torus({32});
  const auto out = propagate(ComplexField(geo), base_config(geo, 1.0, 0.0, 0.01, 0.1));
  for (const auto& c : out.values()) EXPECT_EQ(c, Complex(0.0));
}

TEST(Integrator, GeometryMismatch) {
  const auto c = base_config(GridGeometry::torus({32}), 1.0, 0.0, 0.01, 0.1);
  EXPECT_THROW(step(ComplexField(GridGeometry::torus({16})), c), Error);
}

TEST(Integrator, NonFiniteAbortsWithStepIndex) {
  const auto geo = GridGeometry::torus({16});
  auto u = make_datum(DatumSpec::gaussian({0.5}, 0.1), geo);
  u[3] = Complex(INFINITY, 0.0);
  EXPECT_THROW(evolve(u, base_config(geo, 1.0, 0.0, 0.01, 0.1)), Error);
  // finite samples whose transform overflows
  for (auto& v : u.values()) v = 1.5e308;
  try {
    propagate(u, base_config(geo, 1.0, 0.0, 0.01, 0.1));
    FAIL() << "expected a non-finite error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(Integrator, ScheduleAndTimeStamps) {
  const auto geo = GridGeometry::torus({16});
  auto c = base_config(geo, 1.0, 0.01, 0.01, 1.0);
  c.record_every = 30;
  c.snapshot_every = 50;
  c.hs_values = {0.5};
  const auto traj = evolve(make_datum(DatumSpec::gaussian({0.5}, 0.1), geo), c);
  ASSERT_EQ(traj.records.size(), 5u);  // 0, 30, 60, 90, 100
  EXPECT_EQ(traj.records.front().time, 0.0);
  EXPECT_NEAR(traj.records.back().time, 1.0, 1e-12);
  for (std::size_t i = 1; i < traj.records.size(); ++i) EXPECT_GT(traj.records[i].time, traj.records[i - 1].time);
  ASSERT_EQ(traj.snapshots.size(), 3u);
  for (const auto& [t, f] : traj.snapshots) EXPECT_EQ(f.geometry(), geo);
  EXPECT_EQ(traj.snapshots.back().second, traj.final_field);
}

TEST(Integrator, MassConservedAndDeterministic) {
  const GridGeometry geo(DomainKind::PeriodicBox, {1.0, 2.0}, {16, 32});
  const auto u0 = make_datum(DatumSpec::band_limited(5, 17), geo);
  const auto c = base_config(geo, -1.0, 1e-3, 1e-3, 0.2);
  const auto a = evolve(u0, c);
  const auto b = evolve(u0, c);
  EXPECT_EQ(a.final_field, b.final_field);
  EXPECT_EQ(a.records, b.records);
  for (const auto& r : a.records) EXPECT_NEAR(r.mass, a.records[0].mass, 1e-12 * a.records[0].mass);
}

TEST(Integrator, LinearFlowConservesHs) {
  const auto geo = GridGeometry::torus({64});
  auto c = base_config(geo, 0.0, 0.0, 1e-3, 0.5);
  c.record_every = 50;
  c.hs_values = {0.25, 0.5, 1.0};
  const auto traj = evolve(make_datum(DatumSpec::rough(0.5, 4), geo), c);
  for (const auto& r : traj.records)
    for (double s : c.hs_values) EXPECT_NEAR(r.hs_norms.at(s), traj.records[0].hs_norms.at(s), 1e-10 * r.hs_norms.at(s));
}

TEST(Integrator, TimeReversal) {
  for (const auto& geo : {GridGeometry::torus({64}), GridGeometry(DomainKind::DirichletInterval, {1.0}, {64})}) {
    const auto u0 = make_datum(DatumSpec::band_limited(8, 5), geo);
    const auto fwd = propagate(u0, base_config(geo, 1.0, 1e-3, 1e-3, 0.3));
    const auto back = propagate(fwd, base_config(geo, 1.0, 1e-3, 1e-3, -0.3));
    EXPECT_LE(rel_l2(back, u0), 1e-12);
  }
}

TEST(Integrator, DirichletBoundaryStaysExactlyZero) {
  const GridGeometry geo(DomainKind::DirichletSlab, {1.0, 1.0}, {16, 32});
  auto c = base_config(geo, 1.0, 1e-2, 1e-3, 0.05);
  c.snapshot_every = 5;
  const auto traj = evolve(make_datum(DatumSpec::gaussian({0.5, 0.4}, 0.1), geo), c);
  for (const auto& [t, f] : traj.snapshots) EXPECT_EQ(boundary_max_abs(f), 0.0);
}

TEST(Integrator, DirichletMatchesOddPeriodicRun) {
  // Evolving the odd extension on the doubled torus and restricting agrees
  // with the Dirichlet route, since the pointwise flow is odd.
  const GridGeometry geo(DomainKind::DirichletInterval, {0.5}, {32});
  const auto u0 = make_datum(DatumSpec::gaussian({0.2}, 0.05), geo);
  const auto half = propagate(u0, base_config(geo, 1.0, 1e-2, 1e-3, 0.1));
  const auto ext = odd_extension(u0);
  const auto full = propagate(ext, base_config(ext.geometry(), 1.0, 1e-2, 1e-3, 0.1));
  EXPECT_LE(rel_l2(restrict_to_half(full), half), 1e-13);
}

TEST(Integrator, PairExamples) {
  const auto geo = GridGeometry::torus({32});
  const auto a = make_datum(DatumSpec::gaussian({0.5}, 0.1), geo);
  const auto b = make_datum(DatumSpec::gaussian({0.45}, 0.08), geo);
  auto c = base_config(geo, 1.0, 1e-3, 1e-3, 0.1);
  c.record_every = 10;
  const auto same = evolve_pair(a, a, c);
  for (const auto& [t, d] : same.distance) EXPECT_EQ(d, 0.0);
  c.lambda = 0.0;
  const auto lin = evolve_pair(a, b, c);
  const double d0 = lin.distance.front().second;
  for (const auto& [t, d] : lin.distance) EXPECT_NEAR(d, d0, 1e-12 * d0);
  EXPECT_EQ(lin.a.records.back().extra.at("l2_distance"), lin.distance.back().second);
}

TEST(Integrator, EpsContinuationExamples) {
  const auto geo = GridGeometry::torus({32});
  const auto u0 = make_datum(DatumSpec::gaussian({0.5}, 0.1), geo);
  auto c = base_config(geo, 0.0, 0.1, 1e-2, 0.2);
  for (const auto& p : eps_continuation(u0, c, {0.5, 0.1, 0.01})) EXPECT_EQ(p.sup_distance, 0.0);
  c.lambda = 1.0;
  const auto rep = eps_continuation(u0, c, {0.1, 0.1, 0.01});
  EXPECT_EQ(rep[0].sup_distance, 0.0);
  EXPECT_GT(rep[1].sup_distance, 0.0);
  EXPECT_THROW(eps_continuation(u0, c, {0.01, 0.1}), Error);
  EXPECT_THROW(eps_continuation(u0, c, {0.1, 0.0}), Error);
}
