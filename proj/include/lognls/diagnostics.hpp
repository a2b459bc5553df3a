#pragma once

// Conserved quantities and Sobolev-type norms of grid fields.
//
// Dirichlet fields are measured through their odd extension: squared
// quantities of the extension are halved, which matches the half-domain
// integrals for mass and the gradient term.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "lognls/grid.hpp"
#include "lognls/nonlinearity.hpp"
#include "lognls/spectral.hpp"
#include "lognls/transforms.hpp"

namespace lognls {

struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  std::map<double, double> hs_norms;     // s -> multiplier norm (not squared)
  std::map<std::string, double> extra;   // experiment-specific columns

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

/// Worker count for the parallel kernels; LOGNLS_THREADS caps it.
inline unsigned worker_threads() {
  if (const char* env = std::getenv("LOGNLS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline double mass(const ComplexField& field) {
  double acc = 0.0;
  for (const auto& c : field.values()) acc += std::norm(c);
  return acc * field.geometry().cell_volume();
}

inline double l2_distance(const ComplexField& f, const ComplexField& g) {
  require_same_geometry(f, g, "l2_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::norm(f[i] - g[i]);
  return std::sqrt(acc * f.geometry().cell_volume());
}

/// Antiderivative F(r) = \int_0^r 2 sigma ln(sigma + eps) d sigma.
inline double log_potential(double r, Regularization reg) {
  if (r == 0.0) return 0.0;
  const double eps = reg.eps;
  if (eps == 0.0) return r * r * std::log(r) - 0.5 * r * r;
  // (r^2 - eps^2) ln(r + eps) + eps^2 ln(eps) - r^2/2 + eps r, regrouped
  return r * r * std::log(r + eps) - eps * eps * std::log1p(r / eps) - 0.5 * r * r + eps * r;
}

/// ||grad u||^2 computed spectrally.
inline double gradient_norm_sq(const ComplexField& field) {
  if (field.geometry().dirichlet()) return 0.5 * gradient_norm_sq(odd_extension(field));
  const auto spec = forward(field);
  const auto sym = laplacian_symbol(field.geometry());
  double acc = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) acc += sym[i] * std::norm(spec.coeffs[i]);
  return acc / field.geometry().volume();
}

/// E(u) = ||grad u||^2 - 2 lambda \int F(|u|) dx. At eps = 0 the potential
/// equals -lambda |u|^2 (ln|u|^2 - 1).
inline double energy(const ComplexField& field, double lambda, Regularization reg) {
  double pot = 0.0;
  for (const auto& c : field.values()) pot += log_potential(std::abs(c), reg);
  pot *= field.geometry().cell_volume();
  return gradient_norm_sq(field) - 2.0 * lambda * pot;
}

/// Multiplier H^s norm, routed through the odd extension for Dirichlet fields.
inline double hs_norm(const ComplexField& field, double s) {
  if (field.geometry().dirichlet()) return std::sqrt(0.5 * hs_multiplier_norm_sq(odd_extension(field), s));
  return hs_multiplier_norm(field, s);
}

namespace detail {

struct GagliardoOffset {
  std::vector<long> shift;  // signed grid offset
  double weight;            // multiplicity (1 or 2) times |y|^{-d-2s} h^{2d}
};

inline std::vector<GagliardoOffset> gagliardo_offsets(const GridGeometry& geo, double s) {
  const std::size_t d = geo.dim();
  const double h2d = geo.cell_volume() * geo.cell_volume();
  std::vector<GagliardoOffset> out;
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    if (flat == 0) return;
    std::vector<long> m(d);
    bool has_nyquist = false;
    for (std::size_t a = 0; a < d; ++a) {
      m[a] = signed_mode(idx[a], geo.points(a));
      has_nyquist = has_nyquist || m[a] == -static_cast<long>(geo.points(a) / 2);
    }
    double multiplicity = 1.0;
    if (!has_nyquist) {
      // y and -y are both in the cell and give equal sums; keep the
      // lexicographically positive one.
      const auto first = std::find_if(m.begin(), m.end(), [](long v) { return v != 0; });
      if (*first < 0) return;
      multiplicity = 2.0;
    }
    double y2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double y = static_cast<double>(m[a]) * geo.spacing(a);
      y2 += y * y;
    }
    const double kernel = std::pow(y2, -0.5 * (static_cast<double>(d) + 2.0 * s));
    out.push_back({std::move(m), multiplicity * kernel * h2d});
  });
  return out;
}

// sum_x |f(x + m) - f(x)|^2 over the periodic grid.
inline double shifted_difference_sq(const ComplexField& field, std::span<const long> m) {
  const auto& geo = field.geometry();
  const std::size_t d = geo.dim();
  double acc = 0.0;
  if (d == 1) {
    const std::size_t n = geo.points(0);
    const auto shift = static_cast<std::size_t>((m[0] + static_cast<long>(n)) % static_cast<long>(n));
    for (std::size_t j = 0; j < n; ++j) acc += std::norm(field[(j + shift) & (n - 1)] - field[j]);
    return acc;
  }
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    std::size_t other = 0;
    for (std::size_t a = 0; a < d; ++a) {
      const auto n = static_cast<long>(geo.points(a));
      const long j = (static_cast<long>(idx[a]) + m[a] % n + n) % n;
      other = other * geo.points(a) + static_cast<std::size_t>(j);
    }
    acc += std::norm(field[other] - field[flat]);
  });
  return acc;
}

}  // namespace detail

/// Largest grid the O(N^2) Gagliardo kernel accepts.
inline constexpr std::size_t kGagliardoMaxPoints = 4096;

/// sqrt(mass + sum_x sum_{y != 0, y in [-L/2, L/2)^d} |f(x+y) - f(x)|^2 / |y|^{d+2s} h^{2d}).
///
/// Direct double sum, O(N^2). Offsets y and -y are folded together and the
/// per-offset sums are reduced in a fixed order, so the result does not
/// depend on the worker count.
inline double hs_gagliardo_norm(const ComplexField& field, double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error("hs_gagliardo_norm: s must lie in (0,1)");
  if (field.geometry().dirichlet()) {
    const auto ext = odd_extension(field);
    const double full = hs_gagliardo_norm(ext, s);
    return std::sqrt(0.5 * full * full);
  }
  const auto& geo = field.geometry();
  if (geo.size() > kGagliardoMaxPoints) throw Error("hs_gagliardo_norm: grid exceeds 4096 points");

  const auto offsets = detail::gagliardo_offsets(geo, s);
  std::vector<double> partial(offsets.size());
  const unsigned workers = std::min<std::size_t>(worker_threads(), std::max<std::size_t>(1, offsets.size() / 16));
  auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < offsets.size(); i += stride)
      partial[i] = offsets[i].weight * detail::shifted_difference_sq(field, offsets[i].shift);
  };
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }
  double seminorm = 0.0;
  for (double p : partial) seminorm += p;
  return std::sqrt(mass(field) + seminorm);
}

/// Fourier-side weight of the discrete Gagliardo form for each grid mode:
/// gagliardo^2 = |box|^{-1} sum_n (1 + W(n)) |fhat(n)|^2.
inline std::vector<double> gagliardo_mode_weights(const GridGeometry& geo, double s) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto offsets = detail::gagliardo_offsets(geo, s);
  const double h = geo.cell_volume();
  std::vector<double> weights(geo.size(), 0.0);
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    double acc = 0.0;
    for (const auto& off : offsets) {
      double phase = 0.0;
      for (std::size_t a = 0; a < geo.dim(); ++a) {
        const double k = static_cast<double>(signed_mode(idx[a], geo.points(a))) / geo.length(a);
        phase += two_pi * k * static_cast<double>(off.shift[a]) * geo.spacing(a);
      }
      // off.weight carries h^{2d}; one h^d belongs to the x-sum (Parseval).
      acc += off.weight / h * (2.0 - 2.0 * std::cos(phase));
    }
    weights[flat] = acc;
  });
  return weights;
}

struct EquivalenceBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Range of gagliardo/multiplier over all fields supported on modes with
/// |n| <= radius (radius < 0: every grid mode).
inline EquivalenceBracket gagliardo_equivalence_bracket(const GridGeometry& geo, double s, double radius = -1.0) {
  const auto w = gagliardo_mode_weights(geo, s);
  const auto sym = laplacian_symbol(geo);
  EquivalenceBracket b{INFINITY, 0.0};
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    if (radius >= 0.0) {
      double n2 = 0.0;
      for (std::size_t a = 0; a < geo.dim(); ++a) {
        const double n = static_cast<double>(signed_mode(idx[a], geo.points(a)));
        n2 += n * n;
      }
      if (n2 > radius * radius) return;
    }
    const double r = std::sqrt((1.0 + w[flat]) / std::pow(1.0 + sym[flat], s));
    b.lower = std::min(b.lower, r);
    b.upper = std::max(b.upper, r);
  });
  return b;
}

/// ||u(t)||^2_{H^s} / (exp(4 |lambda t|) ||u(0)||^2_{H^s}).
inline double hs_growth_ratio(const DiagnosticsRecord& record_t, const DiagnosticsRecord& record_0, double s,
                              double lambda) {
  const auto it_t = record_t.hs_norms.find(s);
  const auto it_0 = record_0.hs_norms.find(s);
  if (it_t == record_t.hs_norms.end() || it_0 == record_0.hs_norms.end())
    throw Error("hs_growth_ratio: record has no H^s entry for s = " + std::to_string(s));
  const double t = std::abs(record_t.time - record_0.time);
  const double n0 = it_0->second;
  if (n0 == 0.0) return it_t->second == 0.0 ? 0.0 : INFINITY;
  return (it_t->second * it_t->second) / (std::exp(4.0 * std::abs(lambda) * t) * n0 * n0);
}

/// Fraction of the mass lying outside the central half box
/// prod_a [L_a/4, 3L_a/4). Whole-space runs on a PeriodicBox need it small.
inline double outer_mass_fraction(const ComplexField& field) {
  const auto& geo = field.geometry();
  double outer = 0.0;
  double total = 0.0;
  for_each_index(geo, [&](std::size_t flat, std::span<const std::size_t> idx) {
    const double w = std::norm(field[flat]);
    total += w;
    for (std::size_t a = 0; a < geo.dim(); ++a) {
      const std::size_t n = geo.points(a);
      if (4 * idx[a] < n || 4 * idx[a] >= 3 * n) {
        outer += w;
        break;
      }
    }
  });
  return total > 0.0 ? outer / total : 0.0;
}

/// Diagnostics of one field at time t. PeriodicBox records carry the
/// outer mass fraction under extra["outer_mass"].
inline DiagnosticsRecord measure(const ComplexField& field, double time, double lambda, Regularization reg,
                                 std::span<const double> hs_values) {
  DiagnosticsRecord rec;
  rec.time = time;
  rec.mass = mass(field);
  rec.energy = energy(field, lambda, reg);
  for (double s : hs_values) rec.hs_norms[s] = hs_norm(field, s);
  if (field.geometry().kind() == DomainKind::PeriodicBox) rec.extra["outer_mass"] = outer_mass_fraction(field);
  return rec;
}

}  // namespace lognls
