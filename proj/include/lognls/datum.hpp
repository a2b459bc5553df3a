#pragma once

// Initial-data generators. Random kinds are deterministic in their seed.
// On Dirichlet geometries every datum is built on the doubled periodic box
// and reduced to its odd part, so the boundary plane is exactly zero.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lognls/diagnostics.hpp"
#include "lognls/grid.hpp"
#include "lognls/spectral.hpp"
#include "lognls/transforms.hpp"

namespace lognls {

enum class DatumKind { PlaneWave, GaussianBump, RandomBandLimited, RandomRough };

inline std::string_view to_string(DatumKind k) {
  switch (k) {
    case DatumKind::PlaneWave: return "plane_wave";
    case DatumKind::GaussianBump: return "gaussian_bump";
    case DatumKind::RandomBandLimited: return "random_band_limited";
    case DatumKind::RandomRough: return "random_rough";
  }
  return "unknown";
}

struct DatumSpec {
  DatumKind kind = DatumKind::GaussianBump;
  Complex amplitude{1.0, 0.0};  // random kinds: target L2 norm is |amplitude|
  std::vector<long> modes;      // plane wave
  std::vector<double> center;   // gaussian bump, absolute coordinates
  double width = 0.1;           // gaussian bump standard deviation
  double cutoff = 8.0;          // band-limited: keep |n| <= cutoff
  double regularity = 0.5;      // rough: |fhat(n)| ~ (1+|n|)^{-(s + d/2 + 0.05)}
  std::uint64_t seed = 0;

  static DatumSpec plane_wave(std::vector<long> modes, Complex amplitude) {
    DatumSpec d;
    d.kind = DatumKind::PlaneWave;
    d.modes = std::move(modes);
    d.amplitude = amplitude;
    return d;
  }
  static DatumSpec gaussian(std::vector<double> center, double width, Complex amplitude = 1.0) {
    DatumSpec d;
    d.kind = DatumKind::GaussianBump;
    d.center = std::move(center);
    d.width = width;
    d.amplitude = amplitude;
    return d;
  }
  static DatumSpec band_limited(double cutoff, std::uint64_t seed, double norm = 1.0) {
    DatumSpec d;
    d.kind = DatumKind::RandomBandLimited;
    d.cutoff = cutoff;
    d.seed = seed;
    d.amplitude = norm;
    return d;
  }
  static DatumSpec rough(double regularity, std::uint64_t seed, double norm = 1.0) {
    DatumSpec d;
    d.kind = DatumKind::RandomRough;
    d.regularity = regularity;
    d.seed = seed;
    d.amplitude = norm;
    return d;
  }
};

namespace detail {

inline double mode_radius(const GridGeometry& geo, std::span<const std::size_t> idx) {
  double n2 = 0.0;
  for (std::size_t a = 0; a < geo.dim(); ++a) {
    const double n = static_cast<double>(signed_mode(idx[a], geo.points(a)));
    n2 += n * n;
  }
  return std::sqrt(n2);
}

inline ComplexField random_spectral_field(const GridGeometry& geo, const DatumSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  const double decay = spec.regularity + 0.5 * static_cast<double>(geo.dim()) + 0.05;
  SpectrumField coeffs{geo, std::vector<Complex>(geo.size())};
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    const double r = mode_radius(geo, idx);
    if (spec.kind == DatumKind::RandomBandLimited) {
      // draw unconditionally so the stream does not depend on the cutoff
      const Complex c{normal(rng), normal(rng)};
      if (r <= spec.cutoff) coeffs.coeffs[flat] = c;
    } else {
      coeffs.coeffs[flat] = std::polar(std::pow(1.0 + r, -decay), uniform(rng));
    }
  });
  auto field = backward(coeffs);
  const double m = mass(field);
  if (m > 0.0) {
    const double scale = std::abs(spec.amplitude) / std::sqrt(m);
    for (auto& c : field.values()) c *= scale;
  }
  return field;
}

inline ComplexField periodic_datum(const GridGeometry& geo, const DatumSpec& spec) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (spec.kind) {
    case DatumKind::PlaneWave: {
      if (spec.modes.size() != geo.dim()) throw Error("plane wave: modes dimension mismatch");
      ComplexField f(geo);
      for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
        double phase = 0.0;
        for (std::size_t a = 0; a < geo.dim(); ++a)
          phase += two_pi * static_cast<double>(spec.modes[a]) * static_cast<double>(idx[a]) /
                   static_cast<double>(geo.points(a));
        f[flat] = spec.amplitude * std::polar(1.0, phase);
      });
      return f;
    }
    case DatumKind::GaussianBump: {
      if (spec.center.size() != geo.dim()) throw Error("gaussian bump: center dimension mismatch");
      if (!(spec.width > 0.0)) throw Error("gaussian bump: width must be positive");
      ComplexField f(geo);
      for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < geo.dim(); ++a) {
          const double l = geo.length(a);
          double dx = static_cast<double>(idx[a]) * geo.spacing(a) - spec.center[a];
          dx -= l * std::round(dx / l);  // minimum image
          r2 += dx * dx;
        }
        f[flat] = spec.amplitude * std::exp(-0.5 * r2 / (spec.width * spec.width));
      });
      return f;
    }
    case DatumKind::RandomBandLimited:
    case DatumKind::RandomRough:
      return random_spectral_field(geo, spec);
  }
  throw Error("unknown datum kind");
}

}  // namespace detail

inline ComplexField make_datum(const DatumSpec& spec, const GridGeometry& geo) {
  if (geo.periodic()) return detail::periodic_datum(geo, spec);
  const auto full = detail::periodic_datum(geo.doubled(), spec);
  auto half = odd_part_on_half(full);
  if (spec.kind == DatumKind::RandomBandLimited || spec.kind == DatumKind::RandomRough) {
    const double m = mass(half);
    if (m > 0.0) {
      const double scale = std::abs(spec.amplitude) / std::sqrt(m);
      for (auto& c : half.values()) c *= scale;
    }
  } else {
    for (auto& c : half.values()) c *= 2.0;  // u(x) - u(-x) keeps the bump at full height
  }
  return half;
}

/// Sharp Fourier cutoff keeping modes with |n| <= radius. Coefficients at
/// the transform roundoff floor (1e-15 of the largest) are dropped too, so
/// truncations of band-limited data agree bit for bit beyond the band.
inline ComplexField spectral_truncation(const ComplexField& field, double radius) {
  if (field.geometry().dirichlet()) return restrict_to_half(spectral_truncation(odd_extension(field), radius));
  auto spec = forward(field);
  double cmax = 0.0;
  for (const auto& c : spec.coeffs) cmax = std::max(cmax, std::abs(c));
  const double floor = 1e-15 * cmax;
  for_each_index(field.geometry(), [&](std::size_t flat, std::span<const std::size_t> idx) {
    if (detail::mode_radius(field.geometry(), idx) > radius || std::abs(spec.coeffs[flat]) <= floor)
      spec.coeffs[flat] = 0.0;
  });
  return backward(spec);
}

}  // namespace lognls
