#pragma once

// Configuration documents, CSV time series, binary field snapshots and
// report serialization.
//
// Snapshot layout (all little-endian):
//   8 bytes   magic "LOGNSFLD"
//   u32       format version (1)
//   u32       dimension d
//   u64 x d   points per axis
//   f64 x d   axis lengths
//   u32       geometry kind (0 torus, 1 periodic box, 2 Dirichlet interval, 3 Dirichlet slab)
//   f64       time stamp
//   f64 x 2N  payload, interleaved (re, im), row-major

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lognls/datum.hpp"
#include "lognls/diagnostics.hpp"
#include "lognls/experiments.hpp"
#include "lognls/integrator.hpp"

namespace lognls {

/// Configuration error carrying every problem found, each prefixed by its
/// JSON path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& ps) {
    std::string out = "invalid configuration:";
    for (const auto& p : ps) out += "\n  " + p;
    return out;
  }
  std::vector<std::string> problems_;
};

struct ExperimentParams {
  std::optional<Complex> z;
  std::optional<LatticeVelocity> velocity;
  std::vector<double> eps_sequence;
  std::vector<double> cutoffs;
  std::vector<double> dt_ladder;
  double cauchy_threshold = 1e-3;
};

struct ConfigDocument {
  SimConfig sim;
  std::optional<DatumSpec> datum;
  std::optional<DatumSpec> datum_b;
  ExperimentParams experiment;
};

namespace detail {

using json = nlohmann::json;

class ConfigReader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(join(path, key), "unknown key");
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  const json* get(const json& obj, const std::string& path, std::string_view key, bool required) {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) {
      if (required) fail(join(path, key), "missing required key");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& path, std::string_view key, bool required) {
    const json* v = get(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long> integer(const json& obj, const std::string& path, std::string_view key, bool required) {
    const json* v = get(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return std::nullopt;
    }
    return v->get<long>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, std::string_view key, bool required) {
    const json* v = get(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  template <class T>
  std::optional<std::vector<T>> list(const json& obj, const std::string& path, std::string_view key, bool required) {
    const json* v = get(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array()) {
      fail(join(path, key), "expected an array");
      return std::nullopt;
    }
    std::vector<T> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto& e = (*v)[i];
      const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
      if (!ok) {
        fail(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
        return std::nullopt;
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

  std::optional<Complex> complex(const json& obj, const std::string& path, std::string_view key, bool required) {
    const json* v = get(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (v->is_number()) return Complex{v->get<double>(), 0.0};
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number())
      return Complex{(*v)[0].get<double>(), (*v)[1].get<double>()};
    fail(join(path, key), "expected a number or [re, im]");
    return std::nullopt;
  }

  std::optional<GridGeometry> geometry(const json& obj, const std::string& path) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return std::nullopt;
    }
    check_keys(obj, path, {"kind", "lengths", "points"});
    const auto kind = string(obj, path, "kind", true);
    const auto points = list<long>(obj, path, "points", true);
    auto lengths = list<double>(obj, path, "lengths", false);
    if (!kind || !points) return std::nullopt;
    try {
      const auto k = domain_kind_from_string(*kind);
      if (!lengths) {
        if (k != DomainKind::Torus) {
          fail(join(path, "lengths"), "missing required key");
          return std::nullopt;
        }
        lengths = std::vector<double>(points->size(), 1.0);
      }
      std::vector<std::size_t> pts;
      for (long p : *points) {
        if (p <= 0) throw Error("points must be positive");
        pts.push_back(static_cast<std::size_t>(p));
      }
      return GridGeometry(k, *lengths, pts);
    } catch (const Error& e) {
      fail(path, e.what());
      return std::nullopt;
    }
  }

  std::optional<DatumSpec> datum(const json& obj, const std::string& path, std::uint64_t default_seed) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return std::nullopt;
    }
    const auto kind = string(obj, path, "kind", true);
    if (!kind) return std::nullopt;
    DatumSpec d;
    d.seed = default_seed;
    if (*kind == "plane_wave") {
      check_keys(obj, path, {"kind", "modes", "amplitude"});
      d.kind = DatumKind::PlaneWave;
      if (auto m = list<long>(obj, path, "modes", true)) d.modes = *m;
      if (auto a = complex(obj, path, "amplitude", true)) d.amplitude = *a;
    } else if (*kind == "gaussian_bump") {
      check_keys(obj, path, {"kind", "center", "width", "amplitude"});
      d.kind = DatumKind::GaussianBump;
      if (auto c = list<double>(obj, path, "center", true)) d.center = *c;
      if (auto w = number(obj, path, "width", true)) {
        if (!(*w > 0.0)) fail(join(path, "width"), "must be positive");
        d.width = *w;
      }
      if (auto a = complex(obj, path, "amplitude", true)) d.amplitude = *a;
    } else if (*kind == "random_band_limited") {
      check_keys(obj, path, {"kind", "cutoff", "norm", "seed"});
      d.kind = DatumKind::RandomBandLimited;
      if (auto c = number(obj, path, "cutoff", true)) {
        if (!(*c >= 0.0)) fail(join(path, "cutoff"), "must be >= 0");
        d.cutoff = *c;
      }
      if (auto n = number(obj, path, "norm", true)) d.amplitude = *n;
      if (auto s = integer(obj, path, "seed", false)) d.seed = static_cast<std::uint64_t>(*s);
    } else if (*kind == "random_rough") {
      check_keys(obj, path, {"kind", "regularity", "norm", "seed"});
      d.kind = DatumKind::RandomRough;
      if (auto s = number(obj, path, "regularity", true)) {
        if (!(*s >= 0.0)) fail(join(path, "regularity"), "must be >= 0");
        d.regularity = *s;
      }
      if (auto n = number(obj, path, "norm", true)) d.amplitude = *n;
      if (auto s = integer(obj, path, "seed", false)) d.seed = static_cast<std::uint64_t>(*s);
    } else {
      fail(join(path, "kind"), "unknown datum kind '" + *kind + "'");
      return std::nullopt;
    }
    return d;
  }

  ExperimentParams experiment(const json& obj, const std::string& path) {
    ExperimentParams p;
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return p;
    }
    check_keys(obj, path, {"z", "velocity", "eps_sequence", "cutoffs", "dt_ladder", "cauchy_threshold"});
    p.z = complex(obj, path, "z", false);
    if (auto v = list<long>(obj, path, "velocity", false)) p.velocity = LatticeVelocity{*v};
    if (auto e = list<double>(obj, path, "eps_sequence", false)) {
      for (std::size_t i = 0; i < e->size(); ++i)
        if (!((*e)[i] > 0.0)) fail(join(path, "eps_sequence") + "[" + std::to_string(i) + "]", "must be > 0");
      p.eps_sequence = *e;
    }
    if (auto c = list<double>(obj, path, "cutoffs", false)) p.cutoffs = *c;
    if (auto d = list<double>(obj, path, "dt_ladder", false)) {
      for (std::size_t i = 0; i < d->size(); ++i)
        if (!((*d)[i] > 0.0)) fail(join(path, "dt_ladder") + "[" + std::to_string(i) + "]", "must be > 0");
      p.dt_ladder = *d;
    }
    if (auto t = number(obj, path, "cauchy_threshold", false)) p.cauchy_threshold = *t;
    return p;
  }
};

}  // namespace detail

/// Parses and validates a JSON configuration. Every problem found is
/// reported, not only the first.
inline ConfigDocument parse_config(const std::string& text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<document>: ") + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"<document>: expected a JSON object"});

  detail::ConfigReader rd;
  rd.check_keys(root, "", {"geometry", "lambda", "eps", "dt", "t_final", "splitting", "record_every", "hs_values",
                           "seed", "snapshot_every", "datum", "datum_b", "experiment"});
  ConfigDocument doc;
  auto& sim = doc.sim;

  if (const auto* g = rd.get(root, "", "geometry", true))
    if (auto geo = rd.geometry(*g, "geometry")) sim.geometry = *geo;
  if (auto v = rd.number(root, "", "lambda", true)) sim.lambda = *v;
  if (auto v = rd.number(root, "", "eps", true)) {
    if (*v < 0.0) rd.fail("eps", "out of range: must be >= 0");
    else sim.eps = Regularization(*v);
  }
  if (auto v = rd.number(root, "", "dt", true)) {
    if (!(*v > 0.0)) rd.fail("dt", "out of range: must be > 0");
    sim.dt = *v;
  }
  if (auto v = rd.number(root, "", "t_final", true)) {
    if (*v == 0.0) rd.fail("t_final", "out of range: must be nonzero");
    sim.t_final = *v;
  }
  if (auto v = rd.string(root, "", "splitting", false)) {
    if (*v == "strang") sim.splitting = Splitting::Strang;
    else if (*v == "lie") sim.splitting = Splitting::Lie;
    else rd.fail("splitting", "expected \"strang\" or \"lie\"");
  }
  if (auto v = rd.integer(root, "", "record_every", false)) {
    if (*v < 1) rd.fail("record_every", "out of range: must be >= 1");
    else sim.record_every = static_cast<std::size_t>(*v);
  }
  if (auto v = rd.list<double>(root, "", "hs_values", false)) {
    for (std::size_t i = 0; i < v->size(); ++i)
      if (!((*v)[i] > 0.0 && (*v)[i] <= 1.0)) rd.fail("hs_values[" + std::to_string(i) + "]", "out of range: must lie in (0,1]");
    sim.hs_values = *v;
  }
  if (auto v = rd.integer(root, "", "seed", false)) sim.seed = static_cast<std::uint64_t>(*v);
  if (auto v = rd.integer(root, "", "snapshot_every", false)) {
    if (*v < 0) rd.fail("snapshot_every", "out of range: must be >= 0");
    else sim.snapshot_every = static_cast<std::size_t>(*v);
  }
  if (const auto* d = rd.get(root, "", "datum", false)) doc.datum = rd.datum(*d, "datum", sim.seed);
  if (const auto* d = rd.get(root, "", "datum_b", false)) doc.datum_b = rd.datum(*d, "datum_b", sim.seed + 1);
  if (const auto* e = rd.get(root, "", "experiment", false)) doc.experiment = rd.experiment(*e, "experiment");

  if (rd.errors.empty()) {
    try {
      sim.validate();
    } catch (const Error& e) {
      rd.errors.emplace_back(e.what());
    }
  }
  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return doc;
}

inline ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"<document>: cannot open config '" + path + "'"});
  return parse_config(std::string(std::istreambuf_iterator<char>(in), {}));
}

// ---------------------------------------------------------------------------
// CSV time series

/// Shortest decimal that round-trips, used for column labels.
inline std::string shortest_repr(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_17g(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

inline void write_timeseries(const std::vector<DiagnosticsRecord>& records, std::ostream& out) {
  std::set<double> s_values;
  std::set<std::string> labels;
  for (const auto& r : records) {
    for (const auto& [s, _] : r.hs_norms) s_values.insert(s);
    for (const auto& [l, _] : r.extra) labels.insert(l);
  }
  out << "time,mass,energy";
  for (double s : s_values) out << ",hs_" << shortest_repr(s);
  for (const auto& l : labels) out << ",extra_" << l;
  out << '\n';
  for (const auto& r : records) {
    out << format_17g(r.time) << ',' << format_17g(r.mass) << ',' << format_17g(r.energy);
    for (double s : s_values) {
      auto it = r.hs_norms.find(s);
      out << ',' << (it == r.hs_norms.end() ? std::string() : format_17g(it->second));
    }
    for (const auto& l : labels) {
      auto it = r.extra.find(l);
      out << ',' << (it == r.extra.end() ? std::string() : format_17g(it->second));
    }
    out << '\n';
  }
}

inline void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_timeseries(records, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

inline std::vector<DiagnosticsRecord> read_timeseries(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("timeseries: empty input");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  if (header.size() < 3 || header[0] != "time" || header[1] != "mass" || header[2] != "energy")
    throw Error("timeseries: unexpected header");
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DiagnosticsRecord r;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (!std::getline(ss, cell, ',')) cell.clear();
      if (cell.empty()) continue;
      const double v = std::strtod(cell.c_str(), nullptr);
      const auto& h = header[c];
      if (c == 0) r.time = v;
      else if (c == 1) r.mass = v;
      else if (c == 2) r.energy = v;
      else if (h.rfind("hs_", 0) == 0) r.hs_norms[std::strtod(h.c_str() + 3, nullptr)] = v;
      else if (h.rfind("extra_", 0) == 0) r.extra[h.substr(6)] = v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Snapshots

inline constexpr std::array<char, 8> kSnapshotMagic{'L', 'O', 'G', 'N', 'S', 'F', 'L', 'D'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <class T>
void put_le(std::string& buf, T value) {
  static_assert(std::is_trivially_copyable_v<T> && (sizeof(T) == 4 || sizeof(T) == 8));
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits;
  std::memcpy(&bits, &value, sizeof bits);
  for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class LeReader {
 public:
  explicit LeReader(std::string_view bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    if (pos_ + sizeof(U) > bytes_.size()) throw Error("snapshot: truncated file");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(U);
    T value;
    std::memcpy(&value, &bits, sizeof value);
    return value;
  }

  std::string_view take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw Error("snapshot: truncated file");
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

inline std::uint32_t kind_tag(DomainKind k) { return static_cast<std::uint32_t>(k); }

}  // namespace detail

struct Snapshot {
  double time = 0.0;
  ComplexField field;
};

inline std::string encode_snapshot(const ComplexField& field, double time) {
  const auto& geo = field.geometry();
  std::string buf(kSnapshotMagic.begin(), kSnapshotMagic.end());
  detail::put_le(buf, kSnapshotVersion);
  detail::put_le(buf, static_cast<std::uint32_t>(geo.dim()));
  for (std::size_t a = 0; a < geo.dim(); ++a) detail::put_le(buf, static_cast<std::uint64_t>(geo.points(a)));
  for (std::size_t a = 0; a < geo.dim(); ++a) detail::put_le(buf, geo.length(a));
  detail::put_le(buf, detail::kind_tag(geo.kind()));
  detail::put_le(buf, time);
  buf.reserve(buf.size() + 16 * field.size());
  for (const auto& c : field.values()) {
    detail::put_le(buf, c.real());
    detail::put_le(buf, c.imag());
  }
  return buf;
}

inline Snapshot decode_snapshot(std::string_view bytes) {
  detail::LeReader rd(bytes);
  const auto magic = rd.take(8);
  if (!std::equal(magic.begin(), magic.end(), kSnapshotMagic.begin())) throw Error("snapshot: bad magic (expected LOGNSFLD)");
  const auto version = rd.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    throw Error("snapshot: unsupported format version " + std::to_string(version) + " (reader supports " +
                std::to_string(kSnapshotVersion) + ")");
  const auto dim = rd.get<std::uint32_t>();
  if (dim == 0 || dim > 16) throw Error("snapshot: implausible dimension");
  std::vector<std::size_t> points(dim);
  std::vector<double> lengths(dim);
  for (auto& p : points) p = static_cast<std::size_t>(rd.get<std::uint64_t>());
  for (auto& l : lengths) l = rd.get<double>();
  const auto tag = rd.get<std::uint32_t>();
  if (tag > 3) throw Error("snapshot: unknown geometry kind tag");
  const double time = rd.get<double>();
  GridGeometry geo(static_cast<DomainKind>(tag), lengths, points);
  if (rd.remaining() != 16 * geo.size()) throw Error("snapshot: payload length does not match geometry");
  std::vector<Complex> data(geo.size());
  for (auto& c : data) {
    const double re = rd.get<double>();
    const double im = rd.get<double>();
    c = {re, im};
  }
  return {time, ComplexField(geo, std::move(data))};
}

inline void write_snapshot(const ComplexField& field, double time, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  const auto bytes = encode_snapshot(field, time);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot '" + path + "'");
  const std::string bytes(std::istreambuf_iterator<char>(in), {});
  return decode_snapshot(bytes);
}

inline ComplexField snapshot_roundtrip(const ComplexField& field, const std::string& path) {
  write_snapshot(field, 0.0, path);
  return read_snapshot(path).field;
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json report_to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["config_digest"] = r.config_digest;
  j["verdict"] = std::string(to_string(r.verdict));
  auto& margins = j["margins"] = nlohmann::json::object();
  for (const auto& [label, m] : r.margins) {
    nlohmann::json e{{"value", m.value}, {"relation", std::string(to_string(m.relation))}, {"ok", m.ok()}};
    if (m.relation == Relation::InRange) e["bounds"] = {m.lower, m.threshold};
    else if (m.relation != Relation::Info) e["threshold"] = m.threshold;
    margins[label] = e;
  }
  j["notes"] = r.notes;
  auto& series = j["series"] = nlohmann::json::array();
  for (const auto& [t, v] : r.series) series.push_back({t, v});
  return j;
}

inline void print_report_table(const ExperimentReport& r, std::ostream& out) {
  out << "experiment " << r.name << "  [" << r.config_digest << "]  verdict: " << to_string(r.verdict) << '\n';
  for (const auto& [label, m] : r.margins) {
    out << "  " << std::left << std::setw(32) << label << std::right << std::setw(24) << format_17g(m.value) << "  ";
    switch (m.relation) {
      case Relation::Info: out << "(info)"; break;
      case Relation::InRange: out << "in [" << m.lower << ", " << m.threshold << "]"; break;
      default: out << to_string(m.relation) << ' ' << m.threshold;
    }
    out << (m.ok() ? "" : "   <-- FAIL") << '\n';
  }
  for (const auto& [k, v] : r.notes) out << "  note " << k << ": " << v << '\n';
}

}  // namespace lognls
