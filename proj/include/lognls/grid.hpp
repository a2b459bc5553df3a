#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lognls/nonlinearity.hpp"

namespace lognls {

/// Thrown for malformed or incompatible inputs (geometry mismatch, bad
/// configuration, corrupted files).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DomainKind { Torus, PeriodicBox, DirichletInterval, DirichletSlab };

inline std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Torus: return "torus";
    case DomainKind::PeriodicBox: return "periodic_box";
    case DomainKind::DirichletInterval: return "dirichlet_interval";
    case DomainKind::DirichletSlab: return "dirichlet_slab";
  }
  return "unknown";
}

inline DomainKind domain_kind_from_string(std::string_view name) {
  if (name == "torus") return DomainKind::Torus;
  if (name == "periodic_box") return DomainKind::PeriodicBox;
  if (name == "dirichlet_interval") return DomainKind::DirichletInterval;
  if (name == "dirichlet_slab") return DomainKind::DirichletSlab;
  throw Error("unknown geometry kind '" + std::string(name) + "'");
}

/// Structured grid descriptor. Sample j on axis i sits at x = j * L_i / N_i.
/// Dirichlet kinds impose u = 0 on the plane x_d = 0 of the last axis (and,
/// implicitly, on x_d = L_d, which is not stored).
class GridGeometry {
 public:
  GridGeometry() = default;

  GridGeometry(DomainKind kind, std::vector<double> lengths, std::vector<std::size_t> points)
      : kind_(kind), lengths_(std::move(lengths)), points_(std::move(points)) {
    validate();
  }

  static GridGeometry torus(std::vector<std::size_t> points) {
    std::vector<double> lengths(points.size(), 1.0);
    return {DomainKind::Torus, std::move(lengths), std::move(points)};
  }

  DomainKind kind() const { return kind_; }
  std::size_t dim() const { return points_.size(); }
  std::span<const double> lengths() const { return lengths_; }
  std::span<const std::size_t> points() const { return points_; }
  double length(std::size_t axis) const { return lengths_[axis]; }
  std::size_t points(std::size_t axis) const { return points_[axis]; }
  double spacing(std::size_t axis) const { return lengths_[axis] / static_cast<double>(points_[axis]); }

  std::size_t size() const {
    return std::accumulate(points_.begin(), points_.end(), std::size_t{1}, std::multiplies<>());
  }

  double cell_volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= spacing(i);
    return v;
  }

  double volume() const {
    return std::accumulate(lengths_.begin(), lengths_.end(), 1.0, std::multiplies<>());
  }

  bool periodic() const { return kind_ == DomainKind::Torus || kind_ == DomainKind::PeriodicBox; }
  bool dirichlet() const { return !periodic(); }

  /// Geometry of the odd extension: last axis doubled, periodic.
  GridGeometry doubled() const {
    if (!dirichlet()) throw Error("doubled(): geometry is not Dirichlet");
    auto lengths = lengths_;
    auto points = points_;
    lengths.back() *= 2.0;
    points.back() *= 2;
    return {DomainKind::PeriodicBox, std::move(lengths), std::move(points)};
  }

  /// Dirichlet geometry whose odd extension is this periodic geometry.
  GridGeometry halved(DomainKind dirichlet_kind) const {
    if (!periodic()) throw Error("halved(): geometry is not periodic");
    auto lengths = lengths_;
    auto points = points_;
    lengths.back() /= 2.0;
    points.back() /= 2;
    return {dirichlet_kind, std::move(lengths), std::move(points)};
  }

  /// Periodic geometry on which spectral operations act: itself when
  /// periodic, the doubled box when Dirichlet.
  GridGeometry spectral() const { return periodic() ? *this : doubled(); }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  void validate() const {
    if (points_.empty()) throw Error("geometry needs dim >= 1");
    if (lengths_.size() != points_.size()) throw Error("geometry: lengths/points size mismatch");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto n = points_[i];
      if (n < 4 || (n & (n - 1)) != 0)
        throw Error("geometry: points[" + std::to_string(i) + "] must be a power of two >= 4");
      if (!(lengths_[i] > 0.0) || !std::isfinite(lengths_[i]))
        throw Error("geometry: lengths[" + std::to_string(i) + "] must be positive");
    }
    if (kind_ == DomainKind::Torus &&
        std::any_of(lengths_.begin(), lengths_.end(), [](double l) { return l != 1.0; }))
      throw Error("geometry: torus requires unit lengths");
    if (kind_ == DomainKind::DirichletInterval && points_.size() != 1)
      throw Error("geometry: dirichlet_interval is one-dimensional");
    if (kind_ == DomainKind::DirichletSlab && points_.size() < 2)
      throw Error("geometry: dirichlet_slab needs dim >= 2");
  }

  DomainKind kind_ = DomainKind::Torus;
  std::vector<double> lengths_;
  std::vector<std::size_t> points_;
};

/// Complex samples on a grid, row-major (last axis fastest).
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(GridGeometry geometry)
      : geometry_(std::move(geometry)), data_(geometry_.size(), Complex{0.0, 0.0}) {}
  ComplexField(GridGeometry geometry, std::vector<Complex> data)
      : geometry_(std::move(geometry)), data_(std::move(data)) {
    if (data_.size() != geometry_.size()) throw Error("field data length does not match geometry");
  }

  const GridGeometry& geometry() const { return geometry_; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }
  std::vector<Complex>& values() { return data_; }
  const std::vector<Complex>& values() const { return data_; }
  std::size_t size() const { return data_.size(); }

  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : data_) m = std::max(m, std::abs(c));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  }

  friend bool operator==(const ComplexField&, const ComplexField&) = default;

 private:
  GridGeometry geometry_;
  std::vector<Complex> data_;
};

/// Integer Fourier-mode velocity; physical velocity is 2 pi modes / L.
struct LatticeVelocity {
  std::vector<long> modes;

  LatticeVelocity operator-() const {
    LatticeVelocity v{modes};
    for (auto& m : v.modes) m = -m;
    return v;
  }
};

inline void require_same_geometry(const ComplexField& a, const ComplexField& b, std::string_view what) {
  if (!(a.geometry() == b.geometry())) throw Error(std::string(what) + ": geometry mismatch");
}

/// Calls fn(flat_index, multi_index) over the grid in row-major order.
template <class Fn>
void for_each_index(const GridGeometry& geo, Fn&& fn) {
  const std::size_t d = geo.dim();
  std::vector<std::size_t> idx(d, 0);
  const std::size_t total = geo.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, std::span<const std::size_t>(idx));
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < geo.points(a)) break;
      idx[a] = 0;
    }
  }
}

/// Signed Fourier mode index of grid slot j on an axis of n points, in [-n/2, n/2).
inline long signed_mode(std::size_t j, std::size_t n) {
  const auto jj = static_cast<long>(j);
  const auto nn = static_cast<long>(n);
  return jj < nn / 2 ? jj : jj - nn;
}

/// Pointwise multiplication by z.
inline ComplexField scale_datum(const ComplexField& field, Complex z) {
  ComplexField out = field;
  for (auto& c : out.values()) c *= z;
  return out;
}

}  // namespace lognls
