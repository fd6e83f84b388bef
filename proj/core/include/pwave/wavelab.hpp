#ifndef PWAVE_WAVELAB_HPP_
#define PWAVE_WAVELAB_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwave/charax.hpp"

namespace pwave {

enum class SolverKind { oracle, fronttrack, both };

const char* to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);

/// Geometric time sweep: count samples from t_min to t_max, both included.
struct TimeSweep {
  double t_min = 0.25;
  double t_max = 256.0;
  int count = 48;

  std::vector<double> values() const;
};

/// One experiment as read from a plain-text key-value file.
///
///   # comment
///   name    = square_shock
///   flux    = burgers            # burgers | exp
///   ul      = 1                  # shock and rarefaction runs
///   ur      = -1
///   ubar    = 0                  # periodic runs
///   period  = 1                  # used by the profile shortcuts below
///   profile = square 0.3         # square A | two_constant m1 m2 | zero
///   piece   = 0.5 0.3            # or explicit pieces: width value
///   piece   = 0.5 -0.2 0.4       #                     width left right
///   delta   = 1e-3
///   t_min   = 0.25
///   t_max   = 256
///   t_count = 48
///   solver  = oracle             # oracle | fronttrack | both
///   output  = out
///
/// Explicit pieces and a profile shortcut are mutually exclusive.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string flux = "burgers";
  double ul = 1.0;
  double ur = -1.0;
  double ubar = 0.0;
  double period = 1.0;
  std::vector<PieceSpec> pieces{PieceSpec::constant(1.0, 0.0)};
  double delta = 1e-3;
  TimeSweep sweep;
  SolverKind solver = SolverKind::oracle;
  std::string output = ".";

  PeriodicProfile profile() const;
  /// Validates the invariants; throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& config);

/// Least-squares fit of log(value) = log(constant) + exponent log(t).
struct RateFit {
  double exponent = 0.0;
  double constant = 0.0;
  /// Largest |residual| in log space.
  double max_residual = 0.0;
  /// Some values were at or below the floor and were raised to it before the log.
  bool floored = false;
  std::size_t samples = 0;
};

inline constexpr double kFitFloor = 1e-14;

/// Needs at least 8 samples with positive times spanning at least one decade;
/// throws PreconditionError otherwise.
RateFit fit_rate(std::span<const double> times, std::span<const double> values);
/// fit_rate restricted to the samples with t >= t_last / 10.
RateFit fit_last_decade(std::span<const double> times, std::span<const double> values);

struct Series {
  std::string name;
  std::vector<double> values;
};

struct StructuralCheck {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  /// Advisory checks are reported but do not decide the exit status.
  bool advisory = false;
};

/// Samples on their own time grid (e.g. the exact return times of the shock).
struct SampleTable {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
};

struct DecayReport {
  std::string experiment;
  ExperimentConfig config;
  std::vector<double> times;
  std::vector<Series> series;
  std::vector<SampleTable> tables;
  /// Series the fit below refers to.
  std::string fitted_series;
  RateFit fit;
  /// T_S (shock) or T_P (periodic, two-constant data); NaN when not available.
  double detected_t = 0.0;
  std::vector<StructuralCheck> checks;

  const Series& get(const std::string& name) const;
  const StructuralCheck& check(const std::string& name) const;
  bool passed() const;
};

/// Shock experiment (ul > ur). Series: X_err = |X - st|, sup_left, sup_right,
/// glue_mismatch, offset_pred (the predicted X - st).
DecayReport run_shock_stability(const ExperimentConfig& config);
/// Rarefaction experiment (ul < ur). Series: sup_dev = sup |u - u^R|.
DecayReport run_rarefaction(const ExperimentConfig& config);
/// Periodic experiment with data ubar + w0. Series: sup_excess, inf_deficit and
/// their bounds from the optimal envelope, z.
DecayReport run_periodic_decay(const ExperimentConfig& config);

/// L1 distance over one period around st between front tracking and the oracle.
struct OracleDiffRow {
  double delta = 0.0;
  double t = 0.0;
  double l1 = 0.0;
};
/// Burgers shock data only; one row per (delta, t).
std::vector<OracleDiffRow> oracle_diff(const ExperimentConfig& config,
                                       std::span<const double> deltas,
                                       std::span<const double> times);

enum class ReportFormat { csv, json, svg };

void write_csv(std::ostream& out, const DecayReport& report);
void write_json(std::ostream& out, const DecayReport& report);
void write_svg(std::ostream& out, const DecayReport& report);
DecayReport read_json(std::istream& in);
void write_oracle_diff_csv(std::ostream& out, std::span<const OracleDiffRow> rows);

/// Writes <dir>/<name>.<ext> for each format; returns the paths written.
/// Throws ConfigError when the directory cannot be created or written.
std::vector<std::filesystem::path> emit(const DecayReport& report,
                                        const std::filesystem::path& dir,
                                        std::span<const ReportFormat> formats);

}  // namespace pwave

#endif  // PWAVE_WAVELAB_HPP_
