#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pwave/error.hpp"
#include "pwave/wavelab.hpp"

using namespace pwave;

namespace {

ExperimentConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

// Short sweep for the unit suite: one decade, 2 .. 20, 10 samples.
const char* kShortSweep = "t_min = 2\nt_max = 20\nt_count = 10\n";

std::string csv_of(const DecayReport& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

std::string json_of(const DecayReport& r) {
  std::ostringstream out;
  write_json(out, r);
  return out.str();
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_CASE("fit_rate on exact power laws") {
  std::vector<double> ts;
  std::vector<double> inv;
  std::vector<double> flat;
  for (int i = 0; i <= 30; ++i) {
    ts.push_back(std::pow(10.0, i / 10.0));
    inv.push_back(3.0 / ts.back());
    flat.push_back(0.7);
  }
  const RateFit f = fit_rate(ts, inv);
  CHECK(std::abs(f.exponent + 1.0) <= 1e-10);
  CHECK(std::abs(f.constant - 3.0) <= 1e-10);
  CHECK(f.max_residual <= 1e-12);
  CHECK_FALSE(f.floored);
  CHECK(std::abs(fit_rate(ts, flat).exponent) <= 1e-12);

  std::vector<double> zeros(ts.size(), 0.0);
  const RateFit z = fit_rate(ts, zeros);
  CHECK(z.floored);
  CHECK(z.exponent == doctest::Approx(0.0));

  // Last decade: [10^2, 10^3] holds samples 20..30.
  const RateFit last = fit_last_decade(ts, inv);
  CHECK(last.samples == 11);
  CHECK(std::abs(last.exponent + 1.0) <= 1e-10);

  std::vector<double> few(ts.begin(), ts.begin() + 7);
  CHECK_THROWS_AS(fit_rate(few, std::vector<double>(7, 1.0)), PreconditionError);
  std::vector<double> narrow{1, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8};
  CHECK_THROWS_AS(fit_rate(narrow, std::vector<double>(9, 1.0)), PreconditionError);
  CHECK_THROWS_AS(fit_rate(ts, few), PreconditionError);
}

TEST_CASE("time sweep") {
  const std::vector<double> ts = TimeSweep{}.values();
  REQUIRE(ts.size() == 48);
  CHECK(ts.front() == 0.25);
  CHECK(ts.back() == 256.0);
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
  CHECK(ts[1] / ts[0] == doctest::Approx(std::pow(1024.0, 1.0 / 47.0)));
  CHECK_THROWS_AS((TimeSweep{1.0, 1.0, 4}.values()), ConfigError);
  CHECK_THROWS_AS((TimeSweep{0.0, 1.0, 4}.values()), ConfigError);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = config_from(
      "# shock run\n"
      "name = demo   # trailing comment\n"
      "flux = exp\n"
      "ul = 0.5\n"
      "ur = -0.5\n"
      "piece = 0.25 0.6\n"
      "piece = 0.75 -0.3 0.1\n"
      "delta = 2e-3\n"
      "t_count = 12\n"
      "solver = fronttrack\n"
      "output = results\n");
  CHECK(c.name == "demo");
  CHECK(c.flux == "exp");
  CHECK(c.ul == 0.5);
  CHECK(c.ur == -0.5);
  REQUIRE(c.pieces.size() == 2);
  CHECK(c.pieces[0].kind == PieceKind::constant);
  CHECK(c.pieces[1].kind == PieceKind::linear);
  CHECK(c.pieces[1].right == 0.1);
  CHECK(c.period == 1.0);
  CHECK(c.delta == 2e-3);
  CHECK(c.sweep.count == 12);
  CHECK(c.solver == SolverKind::fronttrack);
  CHECK(c.output == "results");

  const ExperimentConfig back = config_from(format_config(c));
  CHECK(format_config(back) == format_config(c));

  const ExperimentConfig sq = config_from("period = 2\nprofile = square 0.3\n");
  CHECK(sq.profile().period() == 2.0);
  CHECK(sq.profile()(0.5) == 0.3);
  CHECK(sq.profile()(1.5) == -0.3);
  const ExperimentConfig tc = config_from("profile = two_constant 1 3\n");
  CHECK(tc.profile()(0.1) == 1.0);
  CHECK(tc.profile()(0.9) == -3.0);
  CHECK(tc.profile().has_zero_mean());
  CHECK(config_from("profile = zero\n").profile().max_value() == 0.0);

  CHECK_THROWS_AS(config_from("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(config_from("ul = one\n"), ConfigError);
  CHECK_THROWS_AS(config_from("ul 1\n"), ConfigError);
  CHECK_THROWS_AS(config_from("delta = 0\n"), ConfigError);
  CHECK_THROWS_AS(config_from("flux = cubic\n"), ConfigError);
  CHECK_THROWS_AS(config_from("solver = exact\n"), ConfigError);
  CHECK_THROWS_AS(config_from("piece = 1\n"), ConfigError);
  CHECK_THROWS_AS(config_from("piece = 1 0\nprofile = zero\n"), ConfigError);
  CHECK_THROWS_AS(config_from("profile = triangle 1\n"), ConfigError);
  CHECK_THROWS_AS(config_from("t_min = 2\nt_max = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/run.cfg"), ConfigError);
}

TEST_CASE("shock experiment without perturbation") {
  const DecayReport r = run_shock_stability(config_from(std::string("profile = zero\n") + kShortSweep));
  CHECK(r.detected_t == 0.0);
  for (const Series& s : r.series) {
    for (double v : s.values) CHECK(std::abs(v) <= 1e-12);
  }
  CHECK(r.passed());
  CHECK(r.fit.floored);

  CHECK_THROWS_AS(run_shock_stability(config_from("ul = -1\nur = 1\n")), PreconditionError);
  CHECK_THROWS_AS(run_shock_stability(config_from("flux = exp\nul = 0.5\nur = -0.5\n")), ConfigError);
}

TEST_CASE("shock experiment on lopsided data") {
  // DERIVED: the oracle sweep; offsets return to zero at t = n/2 and decay like C/t.
  const DecayReport r = run_shock_stability(config_from(
      std::string("piece = 0.4 0.33\npiece = 0.6 -0.57 0.13\n") + kShortSweep));
  CHECK(r.detected_t == 0.0);
  CHECK(r.check("offset_identity").worst <= 1e-8);
  CHECK(r.check("periodic_return").worst <= 1e-8);
  CHECK(r.check("glue_after_T_S").worst <= 1e-8);
  CHECK(r.check("t_X_err_bounded").worst < 0.1);
  CHECK(r.check("t_X_err_bounded").worst > 0.01);
  CHECK(r.check("t_sup_left_bounded").pass);
  REQUIRE(r.tables.size() == 1);
  CHECK(r.tables[0].times.size() == 40);
}

TEST_CASE("rarefaction experiment") {
  const DecayReport zero = run_rarefaction(
      config_from(std::string("ul = -1\nur = 1\nprofile = zero\n") + kShortSweep));
  for (double v : zero.get("sup_dev").values) CHECK(v <= 1e-11);
  CHECK(zero.passed());

  // PAPER: nonnegative primitive, so the fan interior is the unperturbed fan.
  const DecayReport sq = run_rarefaction(
      config_from(std::string("ul = -1\nur = 1\nprofile = square 0.3\n") + kShortSweep));
  CHECK(sq.check("fan_identity").worst <= 1e-8);
  CHECK(sq.check("outer_identity").worst <= 1e-8);
  CHECK(sq.check("divide_sandwich").pass);
  CHECK(sq.fit.exponent <= -0.85);

  CHECK_THROWS_AS(run_rarefaction(config_from("ul = 1\nur = -1\n")), PreconditionError);
}

TEST_CASE("periodic experiment") {
  const DecayReport zero =
      run_periodic_decay(config_from(std::string("profile = zero\n") + kShortSweep));
  for (double v : zero.get("sup_excess").values) CHECK(v <= 1e-11);

  // PAPER: two-constant data attain sup u = (f')^{-1}(z/t) = 1/(2t) past T_P = 1.
  const DecayReport tc =
      run_periodic_decay(config_from(std::string("profile = two_constant 1 1\n") + kShortSweep));
  CHECK(tc.detected_t == 1.0);
  for (std::size_t i = 0; i < tc.times.size(); ++i) {
    const double t = tc.times[i];
    if (t > 1.0) {
      CHECK(std::abs(tc.get("sup_excess").values[i] - 0.5 / t) <= 1e-8);
      CHECK(std::abs(tc.get("inf_deficit").values[i] - 0.5 / t) <= 1e-8);
    }
    CHECK(tc.get("z").values[i] == doctest::Approx(0.5));
  }
  CHECK(tc.passed());
}

TEST_CASE("reports: csv, json and svg") {
  const DecayReport r = run_shock_stability(config_from(std::string("profile = square 0.3\n") + kShortSweep));
  const std::string csv = csv_of(r);
  CHECK(csv.substr(0, csv.find('\n')) == "t,X_err,sup_left,sup_right,glue_mismatch,offset_pred");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

  DecayReport empty;
  CHECK(csv_of(empty) == "t\n");

  // Determinism: the same configuration gives byte-identical files.
  const DecayReport again = run_shock_stability(r.config);
  CHECK(csv_of(again) == csv);
  CHECK(json_of(again) == json_of(r));

  std::istringstream in(json_of(r));
  const DecayReport back = read_json(in);
  CHECK(back.experiment == r.experiment);
  CHECK(format_config(back.config) == format_config(r.config));
  CHECK(back.times == r.times);
  REQUIRE(back.series.size() == r.series.size());
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    CHECK(back.series[i].name == r.series[i].name);
    CHECK(back.series[i].values == r.series[i].values);
  }
  CHECK(back.tables[0].values == r.tables[0].values);
  CHECK(same(back.fit.exponent, r.fit.exponent));
  CHECK(back.fit.floored == r.fit.floored);
  CHECK(same(back.detected_t, r.detected_t));
  REQUIRE(back.checks.size() == r.checks.size());
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    CHECK(back.checks[i].name == r.checks[i].name);
    CHECK(back.checks[i].pass == r.checks[i].pass);
    CHECK(same(back.checks[i].worst, r.checks[i].worst));
  }
  CHECK(json_of(back) == json_of(r));

  // Non-finite values survive the trip.
  const DecayReport rare = run_rarefaction(
      config_from(std::string("ul = -1\nur = 1\nprofile = zero\n") + kShortSweep));
  std::istringstream rin(json_of(rare));
  CHECK(std::isnan(read_json(rin).detected_t));

  std::ostringstream svg;
  write_svg(svg, r);
  CHECK(svg.str().find("<svg") == 0);
  CHECK(svg.str().find("slope -1") != std::string::npos);
  CHECK(svg.str().find("</svg>") != std::string::npos);

  std::istringstream bad("{\"experiment\": 3}");
  CHECK_THROWS_AS(read_json(bad), ConfigError);
}

TEST_CASE("emit writes files and reports unwritable paths") {
  const auto dir = std::filesystem::temp_directory_path() / "pwave_emit_test";
  std::filesystem::remove_all(dir);
  const DecayReport r = run_periodic_decay(config_from(std::string("name = per\nprofile = zero\n") + kShortSweep));
  const ReportFormat all[] = {ReportFormat::csv, ReportFormat::json, ReportFormat::svg};
  const auto paths = emit(r, dir, all);
  REQUIRE(paths.size() == 3);
  for (const auto& p : paths) CHECK(std::filesystem::file_size(p) > 0);
  CHECK(paths[0].filename() == "per.csv");

  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(emit(r, blocker / "sub", all), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle diff table") {
  // DERIVED: front tracking converges to the oracle at first order in delta.
  const ExperimentConfig c = config_from("profile = square 0.3\n");
  const double deltas[] = {1e-2, 5e-3};
  const double times[] = {1.0, 2.0};
  const auto rows = oracle_diff(c, deltas, times);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) CHECK(row.l1 <= 5.0 * row.delta);
  CHECK(rows[2].l1 < rows[0].l1);
  std::ostringstream out;
  write_oracle_diff_csv(out, rows);
  CHECK(out.str().substr(0, 11) == "delta,t,l1\n");
  CHECK_THROWS_AS(oracle_diff(config_from("flux = exp\n"), deltas, times), ConfigError);
}
