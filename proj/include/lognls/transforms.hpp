#pragma once

// Geometry transforms: odd reflection across the Dirichlet plane of the last
// axis, its inverse, and the Galilean boost on periodic grids.

#include <cmath>
#include <numbers>

#include "lognls/grid.hpp"
#include "lognls/spectral.hpp"

namespace lognls {

namespace detail {

// Iterates rows along the last axis: fn(row_offset_in, row_offset_out).
template <class Fn>
void for_each_last_axis_row(std::size_t rows, std::size_t n_in, std::size_t n_out, Fn&& fn) {
  for (std::size_t r = 0; r < rows; ++r) fn(r * n_in, r * n_out);
}

inline DomainKind dirichlet_kind_for_dim(std::size_t dim) {
  return dim == 1 ? DomainKind::DirichletInterval : DomainKind::DirichletSlab;
}

}  // namespace detail

/// Largest |u| on the boundary plane x_d = 0 of a Dirichlet field.
inline double boundary_max_abs(const ComplexField& field) {
  const auto& geo = field.geometry();
  const std::size_t n = geo.points(geo.dim() - 1);
  double m = 0.0;
  for (std::size_t off = 0; off < field.size(); off += n) m = std::max(m, std::abs(field[off]));
  return m;
}

/// Antisymmetric extension across x_d = 0 onto the doubled periodic box:
/// [u_0 .. u_{N-1}] -> [0, u_1 .. u_{N-1}, 0, -u_{N-1} .. -u_1].
inline ComplexField odd_extension(const ComplexField& field) {
  const auto& geo = field.geometry();
  if (!geo.dirichlet()) throw Error("odd_extension: Dirichlet geometry required");
  const double tol = 1e-12 * field.max_abs();
  if (boundary_max_abs(field) > tol) throw Error("odd_extension: nonzero boundary samples");

  const std::size_t n = geo.points(geo.dim() - 1);
  const std::size_t rows = field.size() / n;
  ComplexField out(geo.doubled());
  detail::for_each_last_axis_row(rows, n, 2 * n, [&](std::size_t in, std::size_t o) {
    out[o] = 0.0;
    out[o + n] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      out[o + j] = field[in + j];
      out[o + 2 * n - j] = -field[in + j];
    }
  });
  return out;
}

/// (f(x) - f(x', -x_d)) / 2 restricted to the first half of the last axis,
/// with no antisymmetry check.
inline ComplexField odd_part_on_half(const ComplexField& field) {
  const auto& geo = field.geometry();
  if (!geo.periodic()) throw Error("odd_part_on_half: periodic geometry required");
  const std::size_t m = geo.points(geo.dim() - 1);
  const std::size_t n = m / 2;
  const std::size_t rows = field.size() / m;
  ComplexField out(geo.halved(detail::dirichlet_kind_for_dim(geo.dim())));
  detail::for_each_last_axis_row(rows, m, n, [&](std::size_t in, std::size_t o) {
    for (std::size_t j = 0; j < n; ++j) out[o + j] = 0.5 * (field[in + j] - field[in + (m - j) % m]);
  });
  return out;
}

/// Inverse of odd_extension. Returns the antisymmetric part restricted to
/// the first half, so the boundary plane is exactly zero.
inline ComplexField restrict_to_half(const ComplexField& field) {
  const auto& geo = field.geometry();
  if (!geo.periodic()) throw Error("restrict_to_half: periodic geometry required");
  const std::size_t m = geo.points(geo.dim() - 1);
  const std::size_t n = m / 2;
  const std::size_t rows = field.size() / m;

  double defect = 0.0;
  detail::for_each_last_axis_row(rows, m, n, [&](std::size_t in, std::size_t) {
    for (std::size_t j = 0; j < m; ++j)
      defect = std::max(defect, std::abs(field[in + j] + field[in + (m - j) % m]));
  });
  if (defect > 1e-8 * field.max_abs()) throw Error("restrict_to_half: field is not antisymmetric in the last axis");

  return odd_part_on_half(field);
}

/// u(x) -> exp(i v.x - i |v|^2 t) u(x - 2 v t) with v = 2 pi modes / L.
/// The translation is applied as a Fourier-space phase, exact off-grid.
inline ComplexField galilean_boost(const ComplexField& field, const LatticeVelocity& v, double t) {
  const auto& geo = field.geometry();
  if (!geo.periodic()) throw Error("galilean_boost: periodic geometry required");
  if (v.modes.size() != geo.dim()) throw Error("galilean_boost: velocity dimension mismatch");
  if (std::all_of(v.modes.begin(), v.modes.end(), [](long m) { return m == 0; })) return field;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> vel(geo.dim());
  double v2 = 0.0;
  for (std::size_t a = 0; a < geo.dim(); ++a) {
    vel[a] = two_pi * static_cast<double>(v.modes[a]) / geo.length(a);
    v2 += vel[a] * vel[a];
  }

  ComplexField shifted = field;
  if (t != 0.0) {
    auto spec = forward(field);
    for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
      double phase = 0.0;
      for (std::size_t a = 0; a < geo.dim(); ++a) {
        const double k = static_cast<double>(signed_mode(idx[a], geo.points(a))) / geo.length(a);
        phase -= two_pi * k * 2.0 * vel[a] * t;
      }
      spec.coeffs[flat] *= std::polar(1.0, phase);
    });
    shifted = backward(spec);
  }

  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    double phase = -v2 * t;
    for (std::size_t a = 0; a < geo.dim(); ++a) phase += vel[a] * geo.spacing(a) * static_cast<double>(idx[a]);
    shifted[flat] *= std::polar(1.0, phase);
  });
  return shifted;
}

}  // namespace lognls
