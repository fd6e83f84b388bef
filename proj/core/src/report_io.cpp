#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pwave/error.hpp"
#include "pwave/wavelab.hpp"

namespace pwave {

namespace {

using nlohmann::json;

// JSON has no NaN or infinity; those travel as strings so that a report
// survives a round trip unchanged.
json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> numbers_from(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_from(x));
  return v;
}

json config_json(const ExperimentConfig& c) {
  json pieces = json::array();
  for (const PieceSpec& p : c.pieces) {
    pieces.push_back({{"width", number(p.width)},
                      {"left", number(p.left)},
                      {"right", number(p.right)},
                      {"kind", p.kind == PieceKind::constant ? "constant" : "linear"}});
  }
  return {{"name", c.name},
          {"flux", c.flux},
          {"ul", number(c.ul)},
          {"ur", number(c.ur)},
          {"ubar", number(c.ubar)},
          {"period", number(c.period)},
          {"delta", number(c.delta)},
          {"t_min", number(c.sweep.t_min)},
          {"t_max", number(c.sweep.t_max)},
          {"t_count", c.sweep.count},
          {"solver", to_string(c.solver)},
          {"output", c.output},
          {"pieces", pieces}};
}

ExperimentConfig config_from(const json& j) {
  ExperimentConfig c;
  c.name = j.at("name").get<std::string>();
  c.flux = j.at("flux").get<std::string>();
  c.ul = number_from(j.at("ul"));
  c.ur = number_from(j.at("ur"));
  c.ubar = number_from(j.at("ubar"));
  c.period = number_from(j.at("period"));
  c.delta = number_from(j.at("delta"));
  c.sweep.t_min = number_from(j.at("t_min"));
  c.sweep.t_max = number_from(j.at("t_max"));
  c.sweep.count = j.at("t_count").get<int>();
  c.solver = solver_from_string(j.at("solver").get<std::string>());
  c.output = j.at("output").get<std::string>();
  c.pieces.clear();
  for (const auto& p : j.at("pieces")) {
    PieceSpec s;
    s.width = number_from(p.at("width"));
    s.left = number_from(p.at("left"));
    s.right = number_from(p.at("right"));
    s.kind = p.at("kind").get<std::string>() == "constant" ? PieceKind::constant : PieceKind::linear;
    c.pieces.push_back(s);
  }
  return c;
}

// Plot frame for the SVG: log10 axes over the positive data.
struct Frame {
  double x0, x1, y0, y1;
  static constexpr double kWidth = 640.0;
  static constexpr double kHeight = 420.0;
  static constexpr double kMargin = 60.0;

  double px(double t) const {
    return kMargin + (std::log10(t) - x0) / (x1 - x0) * (kWidth - 2 * kMargin);
  }
  double py(double v) const {
    return kHeight - kMargin - (std::log10(v) - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
  }
};

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_csv(std::ostream& out, const DecayReport& report) {
  out << "t";
  for (const Series& s : report.series) out << ',' << s.name;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    out << report.times[i];
    for (const Series& s : report.series) out << ',' << s.values.at(i);
    out << '\n';
  }
}

void write_json(std::ostream& out, const DecayReport& report) {
  json series = json::array();
  for (const Series& s : report.series) series.push_back({{"name", s.name}, {"values", numbers(s.values)}});
  json tables = json::array();
  for (const SampleTable& t : report.tables) {
    tables.push_back({{"name", t.name}, {"times", numbers(t.times)}, {"values", numbers(t.values)}});
  }
  json checks = json::array();
  for (const StructuralCheck& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"worst", number(c.worst)}, {"advisory", c.advisory}});
  }
  const json j = {{"experiment", report.experiment},
                  {"config", config_json(report.config)},
                  {"config_text", format_config(report.config)},
                  {"times", numbers(report.times)},
                  {"series", series},
                  {"tables", tables},
                  {"fit",
                   {{"series", report.fitted_series},
                    {"exponent", number(report.fit.exponent)},
                    {"constant", number(report.fit.constant)},
                    {"max_residual", number(report.fit.max_residual)},
                    {"floored", report.fit.floored},
                    {"samples", report.fit.samples}}},
                  {"detected_t", number(report.detected_t)},
                  {"checks", checks},
                  {"passed", report.passed()}};
  out << j.dump(2) << '\n';
}

DecayReport read_json(std::istream& in) {
  json j;
  try {
    in >> j;
    DecayReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.config = config_from(j.at("config"));
    r.times = numbers_from(j.at("times"));
    for (const auto& s : j.at("series")) {
      r.series.push_back({s.at("name").get<std::string>(), numbers_from(s.at("values"))});
    }
    for (const auto& t : j.at("tables")) {
      r.tables.push_back(
          {t.at("name").get<std::string>(), numbers_from(t.at("times")), numbers_from(t.at("values"))});
    }
    const json& fit = j.at("fit");
    r.fitted_series = fit.at("series").get<std::string>();
    r.fit.exponent = number_from(fit.at("exponent"));
    r.fit.constant = number_from(fit.at("constant"));
    r.fit.max_residual = number_from(fit.at("max_residual"));
    r.fit.floored = fit.at("floored").get<bool>();
    r.fit.samples = fit.at("samples").get<std::size_t>();
    r.detected_t = number_from(j.at("detected_t"));
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                          number_from(c.at("worst")), c.at("advisory").get<bool>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report JSON: ") + e.what());
  }
}

void write_svg(std::ostream& out, const DecayReport& report) {
  Frame fr{0.0, 1.0, -1.0, 0.0};
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = 0.0;
  for (const Series& s : report.series) {
    for (double v : s.values) {
      if (v > kFitFloor && std::isfinite(v)) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
  }
  if (!report.times.empty()) {
    fr.x0 = std::log10(report.times.front());
    fr.x1 = std::log10(report.times.back());
    if (!(fr.x1 > fr.x0)) fr.x1 = fr.x0 + 1.0;
  }
  if (vmax > 0.0) {
    fr.y0 = std::floor(std::log10(vmin));
    fr.y1 = std::ceil(std::log10(vmax));
    if (!(fr.y1 > fr.y0)) fr.y1 = fr.y0 + 1.0;
  }
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::kWidth << "\" height=\""
      << Frame::kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << Frame::kMargin << "\" y=\"" << Frame::kMargin << "\" width=\""
      << Frame::kWidth - 2 * Frame::kMargin << "\" height=\"" << Frame::kHeight - 2 * Frame::kMargin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << Frame::kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">"
      << report.experiment << ": " << report.config.name << " (log-log)</text>\n";
  out << "<text x=\"" << Frame::kWidth / 2 << "\" y=\"" << Frame::kHeight - 15
      << "\" text-anchor=\"middle\">t</text>\n";
  for (int d = static_cast<int>(fr.y0); d <= static_cast<int>(fr.y1); ++d) {
    out << "<text x=\"" << Frame::kMargin - 5 << "\" y=\"" << fr.py(std::pow(10.0, d)) + 4
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  const int t_lo = static_cast<int>(std::ceil(fr.x0));
  const int t_hi = static_cast<int>(std::floor(fr.x1));
  for (int d = t_lo; d <= t_hi; ++d) {
    out << "<text x=\"" << fr.px(std::pow(10.0, d)) << "\" y=\"" << Frame::kHeight - Frame::kMargin + 15
        << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }

  std::size_t k = 0;
  for (const Series& s : report.series) {
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < report.times.size() && i < s.values.size(); ++i) {
      const double v = s.values[i];
      if (!(v > kFitFloor) || !std::isfinite(v)) continue;
      out << fr.px(report.times[i]) << ',' << fr.py(v) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << Frame::kWidth - Frame::kMargin + 4 << "\" y=\""
        << Frame::kMargin + 14 * static_cast<double>(k) << "\" fill=\"" << color << "\">" << s.name
        << "</text>\n";
    ++k;
  }

  if (!report.times.empty() && report.fit.samples > 0 && report.fit.constant > 0.0) {
    const double ta = report.times.back() / 10.0;
    const double tb = report.times.back();
    const auto fitted = [&](double t) { return report.fit.constant * std::pow(t, report.fit.exponent); };
    out << "<line x1=\"" << fr.px(ta) << "\" y1=\"" << fr.py(fitted(ta)) << "\" x2=\"" << fr.px(tb)
        << "\" y2=\"" << fr.py(fitted(tb)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << Frame::kMargin + 6 << "\" y=\"" << Frame::kMargin + 14
        << "\">fit " << report.fitted_series << ": exponent " << report.fit.exponent << "</text>\n";
  }
  if (vmax > 0.0 && !report.times.empty()) {
    // Reference slope -1 through the largest value at the first sample.
    const double ta = report.times.front();
    const double tb = report.times.back();
    const double va = vmax;
    const double vb = vmax * ta / tb;
    out << "<line x1=\"" << fr.px(ta) << "\" y1=\"" << fr.py(va) << "\" x2=\"" << fr.px(tb) << "\" y2=\""
        << fr.py(std::max(vb, std::pow(10.0, fr.y0))) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    out << "<text x=\"" << Frame::kMargin + 6 << "\" y=\"" << Frame::kMargin + 28
        << "\" fill=\"gray\">slope -1</text>\n";
  }
  out << "</svg>\n";
}

void write_oracle_diff_csv(std::ostream& out, std::span<const OracleDiffRow> rows) {
  out << "delta,t,l1\n" << std::setprecision(17);
  for (const OracleDiffRow& r : rows) out << r.delta << ',' << r.t << ',' << r.l1 << '\n';
}

std::vector<std::filesystem::path> emit(const DecayReport& report, const std::filesystem::path& dir,
                                        std::span<const ReportFormat> formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (ReportFormat f : formats) {
    const char* ext = f == ReportFormat::csv ? ".csv" : f == ReportFormat::json ? ".json" : ".svg";
    const std::filesystem::path path = dir / (report.config.name + ext);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    switch (f) {
      case ReportFormat::csv:
        write_csv(out, report);
        break;
      case ReportFormat::json:
        write_json(out, report);
        break;
      case ReportFormat::svg:
        write_svg(out, report);
        break;
    }
    out.close();
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace pwave
