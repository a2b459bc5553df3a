#pragma once

// Named experiments. Each returns an ExperimentReport whose verdict is the
// conjunction of its margins against their declared thresholds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lognls/datum.hpp"
#include "lognls/diagnostics.hpp"
#include "lognls/integrator.hpp"
#include "lognls/transforms.hpp"

namespace lognls {

enum class Verdict { Pass, Fail };

inline std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

enum class Relation { AtMost, LessThan, AtLeast, InRange, Info };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::AtMost: return "<=";
    case Relation::LessThan: return "<";
    case Relation::AtLeast: return ">=";
    case Relation::InRange: return "in";
    case Relation::Info: return "info";
  }
  return "?";
}

struct Margin {
  double value = 0.0;
  Relation relation = Relation::Info;
  double threshold = 0.0;  // upper bound for InRange
  double lower = 0.0;      // InRange only

  bool ok() const {
    switch (relation) {
      case Relation::AtMost: return value <= threshold;
      case Relation::LessThan: return value < threshold;
      case Relation::AtLeast: return value >= threshold;
      case Relation::InRange: return value >= lower && value <= threshold;
      case Relation::Info: return true;
    }
    return false;
  }

  static Margin at_most(double v, double t) { return {v, Relation::AtMost, t, 0.0}; }
  static Margin less_than(double v, double t) { return {v, Relation::LessThan, t, 0.0}; }
  static Margin at_least(double v, double t) { return {v, Relation::AtLeast, t, 0.0}; }
  static Margin in_range(double v, double lo, double hi) { return {v, Relation::InRange, hi, lo}; }
  static Margin info(double v) { return {v, Relation::Info, 0.0, 0.0}; }
};

struct ExperimentReport {
  std::string name;
  std::string config_digest;
  Verdict verdict = Verdict::Fail;
  std::map<std::string, Margin> margins;
  std::map<std::string, std::string> notes;
  std::vector<std::pair<double, double>> series;

  void finalize() {
    verdict = std::all_of(margins.begin(), margins.end(), [](const auto& kv) { return kv.second.ok(); })
                  ? Verdict::Pass
                  : Verdict::Fail;
  }
  bool passed() const { return verdict == Verdict::Pass; }
};

/// FNV-1a over a canonical byte encoding of every experiment input.
class Digest {
 public:
  Digest& add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    for (unsigned char c : s) byte(c);
    return *this;
  }
  Digest& add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>(v >> (8 * i)));
    return *this;
  }
  Digest& add(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return add(bits);
  }
  Digest& add(long v) { return add(static_cast<std::uint64_t>(v)); }
  Digest& add(Complex z) { return add(z.real()).add(z.imag()); }
  template <class T>
  Digest& add(const std::vector<T>& xs) {
    add(static_cast<std::uint64_t>(xs.size()));
    for (const auto& x : xs) add(x);
    return *this;
  }
  Digest& add(const GridGeometry& g) {
    add(to_string(g.kind()));
    add(std::vector<double>(g.lengths().begin(), g.lengths().end()));
    std::vector<std::uint64_t> pts(g.points().begin(), g.points().end());
    return add(pts);
  }
  Digest& add(const SimConfig& c) {
    return add(c.lambda).add(c.eps.eps).add(c.dt).add(c.t_final).add(c.geometry)
        .add(std::uint64_t{c.splitting == Splitting::Strang}).add(static_cast<std::uint64_t>(c.record_every))
        .add(c.hs_values).add(c.seed).add(static_cast<std::uint64_t>(c.snapshot_every));
  }
  Digest& add(const DatumSpec& d) {
    return add(to_string(d.kind)).add(d.amplitude).add(d.modes).add(d.center).add(d.width).add(d.cutoff)
        .add(d.regularity).add(d.seed);
  }

  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << state_;
    return os.str();
  }

 private:
  void byte(unsigned char c) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Bound-type experiments must check at least this many time samples.
inline constexpr double kMinSamples = 10;
/// Relative slack on the Gronwall-type bounds.
inline constexpr double kBoundSlack = 1e-6;
/// Invariance budget: this many times the splitting self-error, plus a roundoff floor.
inline constexpr double kSelfErrorFactor = 10.0;
inline constexpr double kRoundoffFloor = 1e-12;

inline std::string s_label(std::string_view prefix, double s) {
  std::ostringstream os;
  os << prefix << "_s=" << s;
  return os.str();
}

/// ||u_dt(T) - u_{dt/2}(T)|| / ||datum||: the splitting error at this dt.
inline double self_convergence_error(const ComplexField& datum, const SimConfig& config) {
  SimConfig fine = config;
  fine.dt = 0.5 * config.dt;
  const auto a = propagate(datum, config);
  const auto b = propagate(datum, fine);
  const double norm = std::sqrt(mass(datum));
  return norm > 0.0 ? l2_distance(a, b) / norm : 0.0;
}

namespace detail {

inline void add_sample_margin(ExperimentReport& r, std::size_t samples) {
  r.margins["samples"] = Margin::at_least(static_cast<double>(samples), kMinSamples);
}

// Box runs stand in for whole space only while the data stay concentrated.
inline constexpr double kOuterMassLimit = 1e-10;

inline void add_concentration(ExperimentReport& r, const std::vector<DiagnosticsRecord>& records) {
  double worst = -1.0;
  for (const auto& rec : records)
    if (auto it = rec.extra.find("outer_mass"); it != rec.extra.end()) worst = std::max(worst, it->second);
  if (worst < 0.0) return;
  if (auto it = r.margins.find("max_outer_mass_fraction"); it != r.margins.end()) worst = std::max(worst, it->second.value);
  r.margins["max_outer_mass_fraction"] = Margin::info(worst);
  r.notes["concentration"] = worst < kOuterMassLimit ? "data stay inside the central half box"
                                                     : "data reach the outer half of the box";
}

}  // namespace detail

inline ExperimentReport run_lipschitz(const DatumSpec& spec_a, const DatumSpec& spec_b, const SimConfig& config) {
  ExperimentReport r;
  r.name = "lipschitz";
  r.config_digest = Digest().add(r.name).add(spec_a).add(spec_b).add(config).hex();
  const auto a = make_datum(spec_a, config.geometry);
  const auto b = make_datum(spec_b, config.geometry);
  const auto pair = evolve_pair(a, b, config);
  const double d0 = pair.distance.front().second;
  detail::add_sample_margin(r, pair.distance.size());
  if (d0 == 0.0) {
    double dmax = 0.0;
    for (const auto& [t, d] : pair.distance) dmax = std::max(dmax, d);
    r.notes["degenerate"] = "identical data: distance(0) = 0";
    r.margins["max_distance"] = Margin::at_most(dmax, 0.0);
    r.finalize();
    return r;
  }
  double worst = 0.0;
  for (const auto& [t, d] : pair.distance) {
    const double ratio = d / (std::exp(2.0 * std::abs(config.lambda * t)) * d0);
    worst = std::max(worst, ratio);
    r.series.emplace_back(t, ratio);
  }
  r.margins["worst_ratio"] = Margin::at_most(worst, 1.0 + kBoundSlack);
  r.margins["initial_distance"] = Margin::info(d0);
  detail::add_concentration(r, pair.a.records);
  detail::add_concentration(r, pair.b.records);
  r.finalize();
  return r;
}

inline ExperimentReport run_hs_growth(const DatumSpec& spec, const SimConfig& config) {
  ExperimentReport r;
  r.name = "hs-growth";
  r.config_digest = Digest().add(r.name).add(spec).add(config).hex();
  if (config.hs_values.empty()) throw Error("hs-growth: config.hs_values is empty");
  const auto datum = make_datum(spec, config.geometry);
  SimConfig c = config;
  c.snapshot_every = 0;
  const auto traj = evolve(datum, c);
  detail::add_sample_margin(r, traj.records.size());
  detail::add_concentration(r, traj.records);

  const auto& first = traj.records.front();
  for (double s : config.hs_values) {
    double worst = 0.0;
    for (const auto& rec : traj.records) {
      const double ratio = hs_growth_ratio(rec, first, s, config.lambda);
      worst = std::max(worst, ratio);
      if (s == config.hs_values.front()) r.series.emplace_back(rec.time, ratio);
    }
    r.margins[s_label("max_ratio", s)] = Margin::at_most(worst, 1.0 + kBoundSlack);
  }

  // Gagliardo cross-check at the final time, against the exact equivalence
  // range of the two discrete norms on this grid.
  const auto& spectral_geo = config.geometry.spectral();
  if (spectral_geo.size() <= kGagliardoMaxPoints) {
    for (double s : config.hs_values) {
      if (!(s < 1.0)) continue;
      const double g = hs_gagliardo_norm(traj.final_field, s);
      const double m = hs_norm(traj.final_field, s);
      const auto bracket = gagliardo_equivalence_bracket(spectral_geo, s);
      r.margins[s_label("gagliardo_ratio", s)] =
          Margin::in_range(g / m, bracket.lower * (1.0 - 1e-9), bracket.upper * (1.0 + 1e-9));
    }
  } else {
    r.notes["gagliardo_check"] = "skipped: grid exceeds the Gagliardo kernel limit";
  }
  r.finalize();
  return r;
}

inline ExperimentReport run_scaling_invariance(const DatumSpec& spec, Complex z, const SimConfig& config) {
  ExperimentReport r;
  r.name = "scaling";
  r.config_digest = Digest().add(r.name).add(spec).add(z).add(config).hex();
  if (config.eps.eps != 0.0) throw Error("scaling: the invariance requires eps = 0");
  if (z == Complex{0.0, 0.0}) throw Error("scaling: z must be nonzero");

  const auto datum = make_datum(spec, config.geometry);
  const auto scaled = scale_datum(datum, z);
  const auto plain_states = sampled_states(datum, config);
  const auto scaled_states = sampled_states(scaled, config);
  const double norm = std::abs(z) * std::sqrt(mass(datum));
  const double log_z2 = std::log(std::norm(z));

  double worst = 0.0;
  for (std::size_t i = 0; i < plain_states.size(); ++i) {
    const double t = plain_states[i].first;
    const Complex factor = z * std::polar(1.0, config.lambda * t * log_z2);
    const double err = l2_distance(scaled_states[i].second, scale_datum(plain_states[i].second, factor)) / norm;
    worst = std::max(worst, err);
    r.series.emplace_back(t, err);
  }
  const double self = self_convergence_error(datum, config);
  r.margins["max_rel_err"] = Margin::at_most(worst, kSelfErrorFactor * self + kRoundoffFloor);
  r.margins["self_error"] = Margin::info(self);
  detail::add_sample_margin(r, plain_states.size());
  r.finalize();
  return r;
}

inline ExperimentReport run_galilean(const DatumSpec& spec, const LatticeVelocity& v, const SimConfig& config) {
  ExperimentReport r;
  r.name = "galilean";
  r.config_digest = Digest().add(r.name).add(spec).add(v.modes).add(config).hex();
  if (!config.geometry.periodic()) throw Error("galilean: Dirichlet geometry is incompatible with the boost");

  const auto datum = make_datum(spec, config.geometry);
  const auto boosted = galilean_boost(datum, v, 0.0);
  const double t_end = static_cast<double>(config.steps()) * config.signed_dt();
  const auto boost_then_evolve = propagate(boosted, config);
  const auto evolve_then_boost = galilean_boost(propagate(datum, config), v, t_end);
  const double discrepancy = l2_distance(boost_then_evolve, evolve_then_boost) / std::sqrt(mass(datum));

  const double self = std::max(self_convergence_error(datum, config), self_convergence_error(boosted, config));
  r.margins["discrepancy"] = Margin::at_most(discrepancy, kSelfErrorFactor * self + kRoundoffFloor);
  r.margins["self_error"] = Margin::info(self);
  r.finalize();
  return r;
}

/// Consecutive sup-distances must decrease strictly (zero entries from
/// repeated eps are flagged and skipped) and the last one must not exceed
/// threshold * sqrt(mass).
inline ExperimentReport run_eps_cauchy(const DatumSpec& spec, const SimConfig& config,
                                       const std::vector<double>& eps_sequence, double threshold = 1e-3) {
  ExperimentReport r;
  r.name = "eps-cauchy";
  r.config_digest = Digest().add(r.name).add(spec).add(config).add(eps_sequence).add(threshold).hex();
  const auto datum = make_datum(spec, config.geometry);
  const auto pairs = eps_continuation(datum, config, eps_sequence);
  const double norm = std::sqrt(mass(datum));

  std::vector<double> nonzero;
  std::string zero_entries;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::ostringstream label;
    label << "distance_" << i;
    r.margins[label.str()] = Margin::info(pairs[i].sup_distance);
    r.series.emplace_back(pairs[i].eps_fine, pairs[i].sup_distance);
    if (pairs[i].sup_distance == 0.0)
      zero_entries += (zero_entries.empty() ? "" : ",") + std::to_string(i);
    else
      nonzero.push_back(pairs[i].sup_distance);
  }
  if (!zero_entries.empty()) r.notes["zero_entries"] = zero_entries;
  if (nonzero.empty()) {
    r.notes["exact"] = "all distances vanish";
  } else {
    double worst_step = 0.0;
    for (std::size_t i = 1; i < nonzero.size(); ++i) worst_step = std::max(worst_step, nonzero[i] / nonzero[i - 1]);
    if (nonzero.size() > 1) r.margins["max_successive_ratio"] = Margin::less_than(worst_step, 1.0);
  }
  const double last = pairs.back().sup_distance / (norm > 0.0 ? norm : 1.0);
  r.margins["final_relative_distance"] = Margin::at_most(last, threshold);
  r.finalize();
  return r;
}

/// Truncates a rough datum at increasing Fourier radii and checks that
/// consecutive truncations obey the Lipschitz bound along the flow and
/// approach each other.
inline ExperimentReport run_h1_approximation(const DatumSpec& rough_spec, const std::vector<double>& cutoffs,
                                             const SimConfig& config) {
  ExperimentReport r;
  r.name = "h1-approx";
  r.config_digest = Digest().add(r.name).add(rough_spec).add(cutoffs).add(config).hex();
  if (cutoffs.size() < 2) throw Error("h1-approx: need at least two cutoffs");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (!(cutoffs[i] > cutoffs[i - 1])) throw Error("h1-approx: cutoffs must increase");

  const auto datum = make_datum(rough_spec, config.geometry);
  std::vector<ComplexField> truncated;
  for (double k : cutoffs) truncated.push_back(spectral_truncation(datum, k));

  std::vector<std::size_t> pair_index(cutoffs.size() - 1);
  for (std::size_t i = 0; i < pair_index.size(); ++i) pair_index[i] = i;
  SimConfig c = config;
  c.hs_values.clear();
  const auto results = parallel_map(pair_index, [&](std::size_t i) {
    return evolve_pair(truncated[i], truncated[i + 1], c).distance;
  });

  double worst = 0.0;
  std::size_t samples = results.front().size();
  std::vector<double> sups;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double d0 = results[i].front().second;
    double sup = 0.0;
    for (const auto& [t, d] : results[i]) {
      sup = std::max(sup, d);
      if (d0 > 0.0) worst = std::max(worst, d / (std::exp(2.0 * std::abs(config.lambda * t)) * d0));
      else if (d > 0.0) worst = INFINITY;
    }
    sups.push_back(sup);
    std::ostringstream label;
    label << "sup_distance_K=" << cutoffs[i] << "-" << cutoffs[i + 1];
    r.margins[label.str()] = Margin::info(sup);
    r.series.emplace_back(cutoffs[i + 1], sup);
    samples = std::min(samples, results[i].size());
  }
  r.margins["worst_lipschitz_ratio"] = Margin::at_most(worst, 1.0 + kBoundSlack);

  // decreasing in K; pairs that are both exactly zero count as decreasing
  double worst_step = 0.0;
  for (std::size_t i = 1; i < sups.size(); ++i) {
    if (sups[i] == 0.0) continue;
    worst_step = std::max(worst_step, sups[i - 1] > 0.0 ? sups[i] / sups[i - 1] : INFINITY);
  }
  if (sups.size() > 1) r.margins["max_successive_ratio"] = Margin::less_than(worst_step, 1.0);
  detail::add_sample_margin(r, samples);
  r.finalize();
  return r;
}

/// Least-squares slope of log error against log dt, errors taken against a
/// reference run at min(dt)/8.
inline ExperimentReport run_convergence_order(const DatumSpec& spec, const SimConfig& config,
                                              const std::vector<double>& dt_ladder) {
  ExperimentReport r;
  r.name = "convergence";
  r.config_digest = Digest().add(r.name).add(spec).add(config).add(dt_ladder).hex();
  if (dt_ladder.size() < 2) throw Error("convergence: need at least two time steps");

  const auto datum = make_datum(spec, config.geometry);
  const double dt_min = *std::min_element(dt_ladder.begin(), dt_ladder.end());
  SimConfig ref_config = config;
  ref_config.dt = dt_min / 8.0;
  ref_config.record_every = 1;
  const auto reference = propagate(datum, ref_config);
  const double norm = std::sqrt(mass(datum));

  const auto errors = parallel_map(dt_ladder, [&](double dt) {
    SimConfig c = config;
    c.dt = dt;
    c.record_every = 1;
    return l2_distance(propagate(datum, c), reference) / norm;
  });

  double emax = 0.0;
  for (std::size_t i = 0; i < dt_ladder.size(); ++i) {
    r.series.emplace_back(dt_ladder[i], errors[i]);
    emax = std::max(emax, errors[i]);
  }
  r.margins["max_error"] = Margin::info(emax);
  if (emax < 1e-11) {
    r.notes["regime"] = "exact: errors at the roundoff floor";
    r.finalize();
    return r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dt_ladder.size());
  for (std::size_t i = 0; i < dt_ladder.size(); ++i) {
    const double x = std::log(dt_ladder[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (config.splitting == Splitting::Strang)
    r.margins["order"] = Margin::in_range(slope, 1.7, 2.3);
  else
    r.margins["order"] = Margin::in_range(slope, 0.8, 1.2);
  r.finalize();
  return r;
}

/// Randomized check of the monotonicity inequality
///   |Im[conj(z1-z2)(z1 ln(|z1|+e1) - z2 ln(|z2|+e2))]| <= |z1-z2|^2 + |e1-e2||z1-z2|
/// over moduli log-uniform in [1e-15, 1e15], with one in eight pairs drawn
/// nearly equal. Each tuple is checked with its random eps pair and with
/// e1 = e2 = 0. Margins are the worst |gap| / (bound + 1e-12 (1 + |z1-z2|^2)).
inline ExperimentReport run_monotonicity_suite(std::size_t samples, std::uint64_t seed) {
  ExperimentReport r;
  r.name = "check-inequality";
  r.config_digest = Digest().add(r.name).add(static_cast<std::uint64_t>(samples)).add(seed).hex();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto log_uniform = [&](double lo_exp, double hi_exp) { return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * unit(rng)); };
  const auto random_complex = [&] { return std::polar(log_uniform(-15, 15), 2.0 * std::numbers::pi * unit(rng)); };
  const auto random_eps = [&] { return unit(rng) < 0.25 ? 0.0 : log_uniform(-15, 15); };

  double worst_general = 0.0;
  double worst_plain = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Complex z1 = random_complex();
    Complex z2 = random_complex();
    if (i % 8 == 7) z2 = z1 * (1.0 + std::polar(log_uniform(-16, -1), 2.0 * std::numbers::pi * unit(rng)));
    const Regularization e1(random_eps());
    const Regularization e2(random_eps());
    const double d = std::abs(z1 - z2);
    const double slack = 1e-12 * (1.0 + d * d);
    const auto ratio = [&](Regularization a, Regularization b) {
      return std::abs(monotonicity_gap(z1, z2, a, b)) / (monotonicity_bound(z1, z2, a, b) + slack);
    };
    worst_general = std::max(worst_general, ratio(e1, e2));
    worst_plain = std::max(worst_plain, ratio(Regularization{}, Regularization{}));
  }
  r.margins["worst_ratio_regularized"] = Margin::at_most(worst_general, 1.0);
  r.margins["worst_ratio_unregularized"] = Margin::at_most(worst_plain, 1.0);
  r.margins["samples"] = Margin::info(static_cast<double>(samples));
  r.finalize();
  return r;
}

}  // namespace lognls
