#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lognls/diagnostics.hpp"
#include "lognls/grid.hpp"
#include "lognls/transforms.hpp"

using namespace lognls;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexField random_field(const GridGeometry& geo, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexField f(geo);
  for (auto& c : f.values()) c = {n(rng), n(rng)};
  return f;
}

ComplexField random_dirichlet(const GridGeometry& geo, std::uint64_t seed) {
  auto f = random_field(geo, seed);
  const std::size_t n = geo.points(geo.dim() - 1);
  for (std::size_t off = 0; off < f.size(); off += n) f[off] = 0.0;
  return f;
}

}  // namespace

TEST(Grid, RejectsBadGeometry) {
  EXPECT_THROW(GridGeometry(DomainKind::Torus, {1.0}, {6}), Error);
  EXPECT_THROW(GridGeometry(DomainKind::Torus, {1.0}, {2}), Error);
  EXPECT_THROW(GridGeometry(DomainKind::Torus, {2.0}, {8}), Error);
  EXPECT_THROW(GridGeometry(DomainKind::PeriodicBox, {-1.0}, {8}), Error);
  EXPECT_THROW(GridGeometry(DomainKind::DirichletInterval, {1.0, 1.0}, {8, 8}), Error);
  EXPECT_THROW(GridGeometry(DomainKind::DirichletSlab, {1.0}, {8}), Error);
  EXPECT_THROW(GridGeometry(DomainKind::PeriodicBox, {1.0, 2.0}, {8}), Error);
  EXPECT_NO_THROW(GridGeometry(DomainKind::PeriodicBox, {3.0, 0.5}, {8, 16}));
}

TEST(Grid, Accessors) {
  const GridGeometry g(DomainKind::PeriodicBox, {2.0, 4.0}, {8, 16});
  EXPECT_EQ(g.dim(), 2u);
  EXPECT_EQ(g.size(), 128u);
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.25);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.0625);
  EXPECT_DOUBLE_EQ(g.volume(), 8.0);
  EXPECT_TRUE(g.periodic());
  const GridGeometry d(DomainKind::DirichletSlab, {2.0, 1.0}, {8, 16});
  const auto dd = d.doubled();
  EXPECT_EQ(dd.kind(), DomainKind::PeriodicBox);
  EXPECT_DOUBLE_EQ(dd.length(1), 2.0);
  EXPECT_EQ(dd.points(1), 32u);
  EXPECT_EQ(dd.halved(DomainKind::DirichletSlab), d);
}

TEST(Grid, KindNames) {
  for (auto k : {DomainKind::Torus, DomainKind::PeriodicBox, DomainKind::DirichletInterval, DomainKind::DirichletSlab})
    EXPECT_EQ(domain_kind_from_string(to_string(k)), k);
  EXPECT_THROW(domain_kind_from_string("sphere"), Error);
}

TEST(Grid, SignedMode) {
  EXPECT_EQ(signed_mode(0, 8), 0);
  EXPECT_EQ(signed_mode(3, 8), 3);
  EXPECT_EQ(signed_mode(4, 8), -4);
  EXPECT_EQ(signed_mode(7, 8), -1);
}

TEST(Grid, ScaleDatum) {
  const auto geo = GridGeometry::torus({16});
  const auto f = random_field(geo, 1);
  EXPECT_EQ(scale_datum(f, 1.0), f);
  const auto zero = scale_datum(f, 0.0);
  for (const auto& c : zero.values()) EXPECT_EQ(c, Complex(0.0));
  const Complex z{1.5, -0.5};
  EXPECT_NEAR(mass(scale_datum(f, z)), std::norm(z) * mass(f), 1e-13 * mass(f));
  const Complex z2{0.25, 2.0};
  const auto a = scale_datum(f, z * z2);
  const auto b = scale_datum(scale_datum(f, z), z2);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-14 * std::abs(a[i]) + 1e-300);
}

TEST(OddExtension, ZeroField) {
  const GridGeometry geo(DomainKind::DirichletInterval, {1.0}, {16});
  const auto ext = odd_extension(ComplexField(geo));
  EXPECT_EQ(ext.size(), 32u);
  for (const auto& c : ext.values()) EXPECT_EQ(c, Complex(0.0));
  EXPECT_EQ(restrict_to_half(ext), ComplexField(geo));
}

TEST(OddExtension, SineIsItsOwnExtension) {
  const double l = 1.5;
  const std::size_t n = 32;
  const GridGeometry geo(DomainKind::DirichletInterval, {l}, {n});
  ComplexField f(geo);
  for (std::size_t j = 1; j < n; ++j) f[j] = std::sin(std::numbers::pi * j * geo.spacing(0) / l);
  const auto ext = odd_extension(f);
  for (std::size_t j = 0; j < 2 * n; ++j)
    EXPECT_NEAR(ext[j].real(), std::sin(std::numbers::pi * j * geo.spacing(0) / l), 1e-14);
}

TEST(OddExtension, AntisymmetryAndRoundTrip) {
  const GridGeometry geo(DomainKind::DirichletSlab, {1.0, 2.0}, {8, 16});
  const auto f = random_dirichlet(geo, 9);
  const auto ext = odd_extension(f);
  const std::size_t m = 32;
  for (std::size_t r = 0; r < 8; ++r) {
    EXPECT_EQ(ext[r * m], Complex(0.0));
    EXPECT_EQ(ext[r * m + 16], Complex(0.0));
    for (std::size_t j = 0; j < m; ++j) EXPECT_EQ(ext[r * m + j], -ext[r * m + (m - j) % m]);
  }
  EXPECT_EQ(restrict_to_half(ext), f);
}

TEST(OddExtension, Rejections) {
  EXPECT_THROW(odd_extension(ComplexField(GridGeometry::torus({8}))), Error);
  const GridGeometry geo(DomainKind::DirichletInterval, {1.0}, {8});
  auto f = random_dirichlet(geo, 2);
  f[0] = 1e-3;
  EXPECT_THROW(odd_extension(f), Error);
  // Even field is not a valid input for the restriction.
  ComplexField even(geo.doubled());
  for (std::size_t j = 0; j < 16; ++j) even[j] = std::cos(kTwoPi * j / 16.0);
  EXPECT_THROW(restrict_to_half(even), Error);
  EXPECT_EQ(restrict_to_half(ComplexField(geo.doubled())), ComplexField(geo));
}

TEST(Galilean, PureModulation) {
  const auto geo = GridGeometry::torus({32});
  ComplexField one(geo, std::vector<Complex>(32, 1.0));
  const auto b = galilean_boost(one, {{1}}, 0.0);
  for (std::size_t j = 0; j < 32; ++j) EXPECT_LE(std::abs(b[j] - std::polar(1.0, kTwoPi * j / 32.0)), 1e-15);
}

TEST(Galilean, MassAndInverse) {
  const GridGeometry geo(DomainKind::PeriodicBox, {2.0, 1.0}, {16, 8});
  const auto f = random_field(geo, 4);
  const LatticeVelocity v{{2, -1}};
  const auto b = galilean_boost(f, v, 0.37);
  EXPECT_NEAR(mass(b), mass(f), 1e-13 * mass(f));
  const auto back = galilean_boost(galilean_boost(f, v, 0.0), -v, 0.0);
  EXPECT_LE(l2_distance(back, f), 1e-13 * std::sqrt(mass(f)));
  EXPECT_EQ(galilean_boost(f, {{0, 0}}, 0.9), f);
}

TEST(Galilean, ShiftsByTwoVt) {
  // Translating a grid-band-limited field by a whole number of cells is exact.
  const auto geo = GridGeometry::torus({64});
  const auto f = random_field(geo, 6);
  const double t = 3.0 / 64.0 / (2.0 * kTwoPi);  // 2 v t = 3 cells for v = 2 pi
  const auto b = galilean_boost(f, {{1}}, t);
  const double v = kTwoPi;
  for (std::size_t j = 0; j < 64; ++j) {
    const Complex expect = std::polar(1.0, v * j / 64.0 - v * v * t) * f[(j + 64 - 3) % 64];
    EXPECT_LE(std::abs(b[j] - expect), 1e-13);
  }
}

TEST(Galilean, RejectsDirichlet) {
  const GridGeometry geo(DomainKind::DirichletInterval, {1.0}, {8});
  EXPECT_THROW(galilean_boost(ComplexField(geo), {{1}}, 0.0), Error);
}
