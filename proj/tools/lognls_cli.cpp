// lognls: command-line front end.
//
// Exit codes: 0 every verdict passed, 1 some verdict failed, 2 usage or
// configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lognls/lognls.hpp"

namespace fs = std::filesystem;
using namespace lognls;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const DatumSpec& require_datum(const std::optional<DatumSpec>& d, const char* key) {
  if (!d) throw UsageError(std::string("config: this experiment needs \"") + key + "\"");
  return *d;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const auto doc = load_config(config_path);
  const auto& spec = require_datum(doc.datum, "datum");
  const auto datum = make_datum(spec, doc.sim.geometry);
  const auto traj = evolve(datum, doc.sim);

  fs::create_directories(out_dir);
  write_timeseries(traj.records, (fs::path(out_dir) / "timeseries.csv").string());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.bin", i);
    write_snapshot(traj.snapshots[i].second, traj.snapshots[i].first, (fs::path(out_dir) / name).string());
  }
  const auto& last = traj.records.back();
  std::cout << "steps " << doc.sim.steps() << "  records " << traj.records.size() << "  snapshots "
            << traj.snapshots.size() << '\n'
            << "final time " << format_17g(last.time) << "  mass " << format_17g(last.mass) << "  energy "
            << format_17g(last.energy) << '\n';
  return kExitPass;
}

ExperimentReport dispatch(const std::string& name, const ConfigDocument& doc) {
  const auto& ex = doc.experiment;
  if (name == "lipschitz") {
    const auto& a = require_datum(doc.datum, "datum");
    const auto& b = require_datum(doc.datum_b, "datum_b");
    return run_lipschitz(a, b, doc.sim);
  }
  const auto& spec = require_datum(doc.datum, "datum");
  if (name == "hs-growth") return run_hs_growth(spec, doc.sim);
  if (name == "scaling") {
    if (!ex.z) throw UsageError("config: scaling needs experiment.z");
    return run_scaling_invariance(spec, *ex.z, doc.sim);
  }
  if (name == "galilean") {
    if (!ex.velocity) throw UsageError("config: galilean needs experiment.velocity");
    return run_galilean(spec, *ex.velocity, doc.sim);
  }
  if (name == "eps-cauchy") return run_eps_cauchy(spec, doc.sim, ex.eps_sequence, ex.cauchy_threshold);
  if (name == "h1-approx") return run_h1_approximation(spec, ex.cutoffs, doc.sim);
  if (name == "convergence") return run_convergence_order(spec, doc.sim, ex.dt_ladder);
  throw UsageError("unknown experiment " + name);
}

int cmd_experiment(const std::string& name, const std::string& config_path, const std::string& report_path) {
  const auto doc = load_config(config_path);
  const auto report = dispatch(name, doc);
  print_report_table(report, std::cout);
  const auto json = report_to_json(report).dump(2);
  if (report_path.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream out(report_path, std::ios::binary);
    if (!out || !(out << json << '\n')) throw Error("cannot write report " + report_path);
  }
  return report.passed() ? kExitPass : kExitFail;
}

int cmd_norms(const std::string& path, const std::vector<double>& s_values, const std::optional<double>& lambda,
              const std::optional<double>& eps) {
  if (lambda.has_value() != eps.has_value()) throw UsageError("norms: --lambda and --eps go together");
  const auto snap = read_snapshot(path);
  const auto& u = snap.field;
  std::cout << std::setprecision(17);
  std::cout << "time   " << snap.time << '\n' << "mass   " << mass(u) << '\n';
  if (lambda) std::cout << "energy " << energy(u, *lambda, Regularization(*eps)) << '\n';
  for (double s : s_values) {
    std::cout << "s=" << s << "  multiplier " << hs_norm(u, s);
    if (s > 0.0 && s < 1.0 && u.geometry().size() <= kGagliardoMaxPoints)
      std::cout << "  gagliardo " << hs_gagliardo_norm(u, s);
    std::cout << '\n';
  }
  return kExitPass;
}

int cmd_check_inequality(std::size_t samples, std::uint64_t seed) {
  const auto report = run_monotonicity_suite(samples, seed);
  print_report_table(report, std::cout);
  double worst = 0.0;
  for (const auto& [label, m] : report.margins)
    if (m.relation != Relation::Info) worst = std::max(worst, m.value);
  std::cout << "worst margin " << format_17g(worst) << '\n';
  return report.passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step spectral solver for the logarithmic Schrodinger equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  auto* simulate = app.add_subcommand("simulate", "Run one simulation, write timeseries.csv and snapshots");
  simulate->add_option("--config", config_path, "JSON config")->required();
  simulate->add_option("--out-dir", out_dir, "Output directory");

  std::string experiment_name;
  std::string report_path;
  auto* experiment = app.add_subcommand("experiment", "Run a named experiment and report its verdict");
  experiment->add_option("name", experiment_name, "Experiment name")
      ->required()
      ->check(CLI::IsMember({"lipschitz", "hs-growth", "scaling", "galilean", "eps-cauchy", "h1-approx",
                             "convergence"}));
  experiment->add_option("--config", config_path, "JSON config")->required();
  experiment->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  std::string snapshot_path;
  std::vector<double> s_values;
  std::optional<double> lambda;
  std::optional<double> eps;
  auto* norms = app.add_subcommand("norms", "Print diagnostics of a snapshot");
  norms->add_option("--snapshot", snapshot_path, "Snapshot file")->required();
  norms->add_option("--s", s_values, "Sobolev indices")->required()->delimiter(',');
  norms->add_option("--lambda", lambda, "Nonlinearity strength, for the energy");
  norms->add_option("--eps", eps, "Regularization, for the energy");

  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  auto* check = app.add_subcommand("check-inequality", "Randomized check of the monotonicity inequality");
  check->add_option("--samples", samples, "Number of tuples");
  check->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, out_dir);
    if (*experiment) return cmd_experiment(experiment_name, config_path, report_path);
    if (*norms) return cmd_norms(snapshot_path, s_values, lambda, eps);
    if (*check) return cmd_check_inequality(samples, seed);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
