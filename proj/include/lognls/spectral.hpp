#pragma once

// Fourier machinery on periodic grids.
//
// Coefficients follow the integral normalization
//     fhat(n) = \int_box f(x) exp(-2 pi i k.x) dx,   k = n / L,
// approximated by the rectangle rule, so a constant c on the unit torus has
// fhat(0) = c. Inversion is f(x) = |box|^{-1} sum_n fhat(n) exp(2 pi i k.x)
// and Parseval reads  sum_n |fhat(n)|^2 = |box| * mass(f).

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lognls/fft.hpp"
#include "lognls/grid.hpp"

namespace lognls {

struct SpectrumField {
  GridGeometry geometry;
  std::vector<Complex> coeffs;  // same row-major layout as the grid, FFT ordering

  /// Coefficient of the signed mode vector n.
  Complex at(std::span<const long> n) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < geometry.dim(); ++a) {
      const auto np = static_cast<long>(geometry.points(a));
      const long j = ((n[a] % np) + np) % np;
      flat = flat * geometry.points(a) + static_cast<std::size_t>(j);
    }
    return coeffs[flat];
  }
};

/// |k|^2 = sum_a (n_a / L_a)^2 for grid slot idx.
inline double wavenumber_sq(const GridGeometry& geo, std::span<const std::size_t> idx) {
  double k2 = 0.0;
  for (std::size_t a = 0; a < geo.dim(); ++a) {
    const double k = static_cast<double>(signed_mode(idx[a], geo.points(a))) / geo.length(a);
    k2 += k * k;
  }
  return k2;
}

/// 4 pi^2 |k|^2 for every grid slot, the symbol of -Laplacian.
inline std::vector<double> laplacian_symbol(const GridGeometry& geo) {
  std::vector<double> sym(geo.size());
  constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    sym[flat] = four_pi_sq * wavenumber_sq(geo, idx);
  });
  return sym;
}

inline void require_periodic(const GridGeometry& geo, std::string_view what) {
  if (!geo.periodic()) throw Error(std::string(what) + ": periodic geometry required");
}

inline SpectrumField forward(const ComplexField& field) {
  const auto& geo = field.geometry();
  require_periodic(geo, "forward");
  SpectrumField spec{geo, field.values()};
  fft_plan(geo.points(), FftDirection::Forward)->execute(spec.coeffs);
  const double w = geo.cell_volume();
  for (auto& c : spec.coeffs) c *= w;
  return spec;
}

inline ComplexField backward(const SpectrumField& spec) {
  const auto& geo = spec.geometry;
  require_periodic(geo, "backward");
  if (spec.coeffs.size() != geo.size()) throw Error("backward: coefficient count does not match geometry");
  std::vector<Complex> data = spec.coeffs;
  fft_plan(geo.points(), FftDirection::Backward)->execute(data);
  const double w = 1.0 / geo.volume();
  for (auto& c : data) c *= w;
  return ComplexField(geo, std::move(data));
}

/// Exact linear Schroedinger flow i u_t + Laplacian u = 0 over dt, for a
/// fixed geometry and step. Reusable across steps.
class FreePropagator {
 public:
  FreePropagator(const GridGeometry& geo, double dt) : geo_(geo) {
    require_periodic(geo, "free propagator");
    const auto sym = laplacian_symbol(geo);
    const double scale = 1.0 / static_cast<double>(geo.size());
    phase_.resize(sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i) phase_[i] = std::polar(scale, -sym[i] * dt);
    fwd_ = fft_plan(geo.points(), FftDirection::Forward);
    bwd_ = fft_plan(geo.points(), FftDirection::Backward);
  }

  const GridGeometry& geometry() const { return geo_; }

  void apply(std::span<Complex> data) const {
    fwd_->execute(data);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= phase_[i];
    bwd_->execute(data);
  }

  void apply(ComplexField& field) const {
    if (!(field.geometry() == geo_)) throw Error("free propagator: geometry mismatch");
    apply(field.data());
  }

 private:
  GridGeometry geo_;
  std::vector<Complex> phase_;
  std::shared_ptr<const FftPlan> fwd_;
  std::shared_ptr<const FftPlan> bwd_;
};

inline ComplexField free_propagator(const ComplexField& field, double dt) {
  ComplexField out = field;
  FreePropagator(field.geometry(), dt).apply(out);
  return out;
}

/// Squared Bessel-potential norm sum_n (1 + 4 pi^2 |k|^2)^s |fhat(n)|^2 / |box|.
inline double hs_multiplier_norm_sq(const ComplexField& field, double s) {
  const auto spec = forward(field);
  const auto sym = laplacian_symbol(field.geometry());
  double acc = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) acc += std::pow(1.0 + sym[i], s) * std::norm(spec.coeffs[i]);
  return acc / field.geometry().volume();
}

inline double hs_multiplier_norm(const ComplexField& field, double s) {
  return std::sqrt(hs_multiplier_norm_sq(field, s));
}

}  // namespace lognls
