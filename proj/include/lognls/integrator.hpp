#pragma once

// Lie / Strang splitting for
//     i u_t + Laplacian u + 2 lambda u ln(|u| + eps) = 0
// with exactly solvable substeps: the pointwise phase rotation and the free
// flow by Fourier symbol. Dirichlet geometries propagate the free part on
// the odd extension.

#include <cmath>
#include <cstdint>
#include <future>
#include <sstream>
#include <utility>
#include <vector>

#include "lognls/diagnostics.hpp"
#include "lognls/grid.hpp"
#include "lognls/nonlinearity.hpp"
#include "lognls/spectral.hpp"
#include "lognls/transforms.hpp"

namespace lognls {

enum class Splitting { Lie, Strang };

inline constexpr std::size_t kMaxSteps = 100'000'000;

struct SimConfig {
  double lambda = 0.0;
  Regularization eps;
  double dt = 0.0;       // > 0; the sign of t_final sets the direction
  double t_final = 0.0;  // may be negative
  GridGeometry geometry;
  Splitting splitting = Splitting::Strang;
  std::size_t record_every = 1;
  std::vector<double> hs_values;
  std::uint64_t seed = 0;
  std::size_t snapshot_every = 0;  // 0: no snapshots

  void validate() const {
    if (!std::isfinite(lambda)) throw Error("config: lambda must be finite");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("config: dt must be positive");
    if (!std::isfinite(t_final) || t_final == 0.0) throw Error("config: t_final must be finite and nonzero");
    if (dt > std::abs(t_final)) throw Error("config: dt exceeds |t_final|");
    if (record_every < 1) throw Error("config: record_every must be >= 1");
    if (static_cast<double>(record_every) * dt > std::abs(t_final) * (1.0 + 1e-12))
      throw Error("config: record_every * dt exceeds |t_final|");
    for (double s : hs_values)
      if (!(s > 0.0 && s <= 1.0)) throw Error("config: hs_values must lie in (0,1]");
    if (std::abs(t_final) / dt > static_cast<double>(kMaxSteps)) throw Error("config: more than 1e8 steps requested");
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(std::abs(t_final) / dt)); }
  double signed_dt() const { return t_final < 0.0 ? -dt : dt; }
};

struct Trajectory {
  SimConfig config;
  std::vector<DiagnosticsRecord> records;
  std::vector<std::pair<double, ComplexField>> snapshots;
  ComplexField final_field;
};

/// One splitting step for a fixed configuration; caches the free-flow
/// symbol so repeated steps cost two FFTs.
class Stepper {
 public:
  explicit Stepper(const SimConfig& config)
      : config_(config),
        h_(config.signed_dt()),
        free_(config.geometry.spectral(), h_) {}

  const SimConfig& config() const { return config_; }

  void advance(ComplexField& u) const {
    if (!(u.geometry() == config_.geometry)) throw Error("step: field geometry does not match config");
    if (config_.splitting == Splitting::Strang) {
      nonlinear(u, 0.5 * h_);
      linear(u);
      nonlinear(u, 0.5 * h_);
    } else {
      nonlinear(u, h_);
      linear(u);
    }
  }

 private:
  void nonlinear(ComplexField& u, double tau) const {
    if (config_.lambda == 0.0) return;
    for (auto& c : u.values()) c = nonlinear_phase_flow(c, config_.lambda, config_.eps, tau);
  }

  void linear(ComplexField& u) const {
    if (config_.geometry.periodic()) {
      free_.apply(u);
      return;
    }
    auto ext = odd_extension(u);
    free_.apply(ext);
    u = restrict_to_half(ext);
  }

  SimConfig config_;
  double h_;
  FreePropagator free_;
};

inline ComplexField step(const ComplexField& field, const SimConfig& config) {
  ComplexField out = field;
  Stepper(config).advance(out);
  return out;
}

namespace detail {

inline void check_finite(const ComplexField& u, std::size_t step_index) {
  if (u.all_finite()) return;
  double m = 0.0;
  for (const auto& c : u.values())
    if (std::isfinite(std::abs(c))) m = std::max(m, std::abs(c));
  std::ostringstream os;
  os << "non-finite sample after step " << step_index << " (largest finite |u| = " << m << ")";
  throw Error(os.str());
}

inline bool on_schedule(std::size_t k, std::size_t every, std::size_t total) {
  return k == 0 || k == total || (every > 0 && k % every == 0);
}

}  // namespace detail

inline Trajectory evolve(const ComplexField& datum, const SimConfig& config) {
  config.validate();
  if (!(datum.geometry() == config.geometry)) throw Error("evolve: datum geometry does not match config");
  if (!datum.all_finite()) throw Error("evolve: datum has non-finite samples");

  Trajectory traj{config, {}, {}, datum};
  const Stepper stepper(config);
  const std::size_t n = config.steps();
  const double h = config.signed_dt();
  auto& u = traj.final_field;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    if (detail::on_schedule(k, config.record_every, n))
      traj.records.push_back(measure(u, t, config.lambda, config.eps, config.hs_values));
    if (config.snapshot_every > 0 && detail::on_schedule(k, config.snapshot_every, n)) traj.snapshots.emplace_back(t, u);
    if (k == n) break;
    stepper.advance(u);
    detail::check_finite(u, k + 1);
  }
  return traj;
}

/// Final state only, without diagnostics.
inline ComplexField propagate(const ComplexField& datum, const SimConfig& config) {
  config.validate();
  if (!(datum.geometry() == config.geometry)) throw Error("propagate: datum geometry does not match config");
  ComplexField u = datum;
  const Stepper stepper(config);
  const std::size_t n = config.steps();
  for (std::size_t k = 0; k < n; ++k) {
    stepper.advance(u);
    detail::check_finite(u, k + 1);
  }
  return u;
}

struct PairResult {
  Trajectory a;
  Trajectory b;
  std::vector<std::pair<double, double>> distance;  // (time, ||u - v||)
};

/// Evolves two data under the same configuration in lockstep and records
/// their L2 distance on the diagnostic schedule.
inline PairResult evolve_pair(const ComplexField& datum_a, const ComplexField& datum_b, const SimConfig& config) {
  config.validate();
  require_same_geometry(datum_a, datum_b, "evolve_pair");
  if (!(datum_a.geometry() == config.geometry)) throw Error("evolve_pair: datum geometry does not match config");

  PairResult out{{config, {}, {}, datum_a}, {config, {}, {}, datum_b}, {}};
  const Stepper stepper(config);
  const std::size_t n = config.steps();
  const double h = config.signed_dt();
  auto& u = out.a.final_field;
  auto& v = out.b.final_field;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    if (detail::on_schedule(k, config.record_every, n)) {
      const double d = l2_distance(u, v);
      out.distance.emplace_back(t, d);
      auto ra = measure(u, t, config.lambda, config.eps, config.hs_values);
      auto rb = measure(v, t, config.lambda, config.eps, config.hs_values);
      ra.extra["l2_distance"] = d;
      rb.extra["l2_distance"] = d;
      out.a.records.push_back(std::move(ra));
      out.b.records.push_back(std::move(rb));
    }
    if (k == n) break;
    stepper.advance(u);
    stepper.advance(v);
    detail::check_finite(u, k + 1);
    detail::check_finite(v, k + 1);
  }
  return out;
}

/// Maps fn over items, running independent calls concurrently when more
/// than one worker is available. Output order follows input order.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn) {
  using R = decltype(fn(items.front()));
  std::vector<R> out;
  out.reserve(items.size());
  if (worker_threads() <= 1 || items.size() <= 1) {
    for (const auto& it : items) out.push_back(fn(it));
    return out;
  }
  std::vector<std::future<R>> futures;
  for (const auto& it : items) futures.push_back(std::async(std::launch::async, fn, std::cref(it)));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

/// Field samples on the diagnostic schedule.
inline std::vector<std::pair<double, ComplexField>> sampled_states(const ComplexField& datum, SimConfig config) {
  config.snapshot_every = config.record_every;
  config.hs_values.clear();
  return evolve(datum, config).snapshots;
}

/// Sup over sampled times of the L2 distance between two sampled runs.
inline double sup_distance(const std::vector<std::pair<double, ComplexField>>& a,
                           const std::vector<std::pair<double, ComplexField>>& b) {
  if (a.size() != b.size()) throw Error("sup_distance: sample schedules differ");
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, l2_distance(a[i].second, b[i].second));
  return sup;
}

struct EpsPairDistance {
  double eps_coarse;
  double eps_fine;
  double sup_distance;
};

/// Runs the regularized flow for each eps and returns sup-in-time L2
/// distances between consecutive solutions.
inline std::vector<EpsPairDistance> eps_continuation(const ComplexField& datum, const SimConfig& config,
                                                     const std::vector<double>& eps_sequence) {
  if (eps_sequence.size() < 2) throw Error("eps_continuation: need at least two eps values");
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    if (!(eps_sequence[i] > 0.0)) throw Error("eps_continuation: eps values must be positive");
    if (i > 0 && eps_sequence[i] > eps_sequence[i - 1]) throw Error("eps_continuation: eps sequence must be decreasing");
  }
  const auto runs = parallel_map(eps_sequence, [&](double eps) {
    SimConfig c = config;
    c.eps = Regularization(eps);
    return sampled_states(datum, c);
  });
  std::vector<EpsPairDistance> out;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i)
    out.push_back({eps_sequence[i], eps_sequence[i + 1], sup_distance(runs[i], runs[i + 1])});
  return out;
}

}  // namespace lognls
