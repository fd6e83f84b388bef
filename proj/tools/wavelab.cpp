#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwave/error.hpp"
#include "pwave/wavelab.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> solver;
  std::optional<double> delta;
  std::vector<std::string> formats{"csv", "json", "svg"};
  std::vector<double> deltas;
  std::vector<double> times{1.0, 5.0, 10.0};
  bool quiet = false;
};

pwave::ExperimentConfig resolve_config(const Options& opt) {
  pwave::ExperimentConfig config = pwave::load_config(opt.config_path);
  if (opt.out_dir) config.output = *opt.out_dir;
  if (opt.solver) config.solver = pwave::solver_from_string(*opt.solver);
  if (opt.delta) config.delta = *opt.delta;
  config.validate();
  return config;
}

std::vector<pwave::ReportFormat> resolve_formats(const std::vector<std::string>& names) {
  std::vector<pwave::ReportFormat> out;
  for (const std::string& n : names) {
    if (n == "csv") {
      out.push_back(pwave::ReportFormat::csv);
    } else if (n == "json") {
      out.push_back(pwave::ReportFormat::json);
    } else if (n == "svg") {
      out.push_back(pwave::ReportFormat::svg);
    } else {
      throw pwave::ConfigError("unknown format '" + n + "' (expected csv, json or svg)");
    }
  }
  return out;
}

void print_summary(const pwave::DecayReport& report) {
  std::printf("%s: %zu samples, t in [%.6g, %.6g]\n", report.experiment.c_str(), report.times.size(),
              report.times.empty() ? 0.0 : report.times.front(),
              report.times.empty() ? 0.0 : report.times.back());
  if (!report.fitted_series.empty()) {
    std::printf("  fit %-16s exponent %+.4f  constant %.4g  max residual %.3g%s\n",
                report.fitted_series.c_str(), report.fit.exponent, report.fit.constant,
                report.fit.max_residual, report.fit.floored ? "  (floored)" : "");
  }
  std::printf("  detected T         %.6g\n", report.detected_t);
  for (const pwave::StructuralCheck& c : report.checks) {
    std::printf("  [%s] %-24s worst %.6g%s\n", c.pass ? "pass" : "FAIL", c.name.c_str(), c.worst,
                c.advisory ? "  (advisory)" : "");
  }
}

int run_experiment(const Options& opt, pwave::DecayReport (*experiment)(const pwave::ExperimentConfig&)) {
  const pwave::ExperimentConfig config = resolve_config(opt);
  const auto formats = resolve_formats(opt.formats);
  const pwave::DecayReport report = experiment(config);
  const auto written = pwave::emit(report, config.output, formats);
  if (!opt.quiet) {
    print_summary(report);
    for (const auto& path : written) std::printf("  wrote %s\n", path.string().c_str());
  }
  return report.passed() ? kExitPass : kExitCheckFailed;
}

int run_oracle_diff(const Options& opt) {
  const pwave::ExperimentConfig config = resolve_config(opt);
  std::vector<double> deltas = opt.deltas;
  if (deltas.empty()) deltas = {config.delta, 0.5 * config.delta};
  const auto rows = pwave::oracle_diff(config, deltas, opt.times);

  const std::filesystem::path dir = config.output;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw pwave::ConfigError("cannot create output directory '" + dir.string() + "'");
  const std::filesystem::path path = dir / (config.name + "_oracle_diff.csv");
  std::ofstream out(path);
  if (!out) throw pwave::ConfigError("cannot write '" + path.string() + "'");
  pwave::write_oracle_diff_csv(out, rows);
  if (!out) throw pwave::ConfigError("cannot write '" + path.string() + "'");

  bool pass = true;
  if (!opt.quiet) std::printf("%-12s %-10s %-14s %s\n", "delta", "t", "l1", "l1 <= 5 delta");
  for (const pwave::OracleDiffRow& r : rows) {
    const bool ok = r.l1 <= 5.0 * r.delta;
    pass = pass && ok;
    if (!opt.quiet) std::printf("%-12.4g %-10.4g %-14.6g %s\n", r.delta, r.t, r.l1, ok ? "yes" : "NO");
  }
  if (!opt.quiet) std::printf("wrote %s\n", path.string().c_str());
  return pass ? kExitPass : kExitCheckFailed;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", opt.out_dir, "Output directory (overrides the config)");
  sub->add_option("--solver", opt.solver, "oracle | fronttrack | both (overrides the config)")
      ->check(CLI::IsMember({"oracle", "fronttrack", "both"}));
  sub->add_option("--delta", opt.delta, "Flux polygon spacing (overrides the config)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("-q,--quiet", opt.quiet, "Only set the exit status");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability experiments for periodically perturbed Riemann data"};
  app.require_subcommand(1);
  Options opt;

  auto* shock = app.add_subcommand("shock", "Shock location and one-sided decay");
  auto* rare = app.add_subcommand("rarefaction", "Decay towards the centred rarefaction");
  auto* periodic = app.add_subcommand("periodic", "Periodic decay against the optimal bound");
  auto* diff = app.add_subcommand("oracle-diff", "L1 distance between front tracking and the oracle");
  for (CLI::App* sub : {shock, rare, periodic}) {
    add_common(sub, opt);
    sub->add_option("--format", opt.formats, "Report formats: csv json svg")->delimiter(',');
  }
  add_common(diff, opt);
  diff->add_option("--deltas", opt.deltas, "Polygon spacings (default: delta and delta/2)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  diff->add_option("--times", opt.times, "Sample times")->delimiter(',')->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*shock) return run_experiment(opt, pwave::run_shock_stability);
    if (*rare) return run_experiment(opt, pwave::run_rarefaction);
    if (*periodic) return run_experiment(opt, pwave::run_periodic_decay);
    return run_oracle_diff(opt);
  } catch (const pwave::ConfigError& e) {
    std::cerr << "wavelab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pwave::PreconditionError& e) {
    std::cerr << "wavelab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pwave::DegenerateInput& e) {
    std::cerr << "wavelab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "wavelab: internal error: " << e.what() << '\n';
    return kExitUsage;
  }
}
