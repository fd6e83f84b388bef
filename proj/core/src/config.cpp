#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pwave/error.hpp"
#include "pwave/wavelab.hpp"

namespace pwave {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_real(const std::string& text, const std::string& key, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects a real number, got '" +
                      text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& key, int line) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects an integer, got '" +
                      text + "'");
  }
  return v;
}

std::string real_text(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::oracle:
      return "oracle";
    case SolverKind::fronttrack:
      return "fronttrack";
    case SolverKind::both:
      return "both";
  }
  throw InternalError("unknown solver kind");
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "oracle") return SolverKind::oracle;
  if (name == "fronttrack") return SolverKind::fronttrack;
  if (name == "both") return SolverKind::both;
  throw ConfigError("unknown solver '" + name + "' (expected oracle, fronttrack or both)");
}

std::vector<double> TimeSweep::values() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw ConfigError("time sweep needs 0 < t_min < t_max and at least two samples");
  }
  std::vector<double> ts(static_cast<std::size_t>(count));
  const double ratio = std::log(t_max / t_min);
  for (int i = 0; i < count; ++i) {
    ts[static_cast<std::size_t>(i)] = t_min * std::exp(ratio * i / (count - 1));
  }
  ts.front() = t_min;
  ts.back() = t_max;
  return ts;
}

PeriodicProfile ExperimentConfig::profile() const { return PeriodicProfile(pieces); }

void ExperimentConfig::validate() const {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(period > 0.0)) throw ConfigError("period must be positive");
  if (pieces.empty()) throw ConfigError("profile needs at least one piece");
  for (const PieceSpec& p : pieces) {
    if (!(p.width > 0.0)) throw ConfigError("profile pieces need positive widths");
  }
  (void)sweep.values();
  (void)flux_by_name(flux);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::vector<PieceSpec> pieces;
  std::optional<std::vector<std::string>> shortcut;
  int shortcut_line = 0;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string text = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (value.empty()) throw ConfigError("line " + std::to_string(line) + ": empty value for '" + key + "'");
    if (key == "name") {
      c.name = value;
    } else if (key == "flux") {
      c.flux = value;
    } else if (key == "ul") {
      c.ul = parse_real(value, key, line);
    } else if (key == "ur") {
      c.ur = parse_real(value, key, line);
    } else if (key == "ubar") {
      c.ubar = parse_real(value, key, line);
    } else if (key == "period") {
      c.period = parse_real(value, key, line);
    } else if (key == "delta") {
      c.delta = parse_real(value, key, line);
    } else if (key == "t_min") {
      c.sweep.t_min = parse_real(value, key, line);
    } else if (key == "t_max") {
      c.sweep.t_max = parse_real(value, key, line);
    } else if (key == "t_count") {
      c.sweep.count = parse_int(value, key, line);
    } else if (key == "solver") {
      c.solver = solver_from_string(value);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "piece") {
      const auto w = words(value);
      if (w.size() == 2) {
        pieces.push_back(PieceSpec::constant(parse_real(w[0], key, line), parse_real(w[1], key, line)));
      } else if (w.size() == 3) {
        pieces.push_back(PieceSpec::ramp(parse_real(w[0], key, line), parse_real(w[1], key, line),
                                         parse_real(w[2], key, line)));
      } else {
        throw ConfigError("line " + std::to_string(line) +
                          ": 'piece' expects 'width value' or 'width left right'");
      }
    } else if (key == "profile") {
      if (shortcut) throw ConfigError("line " + std::to_string(line) + ": 'profile' given twice");
      shortcut = words(value);
      shortcut_line = line;
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (shortcut && !pieces.empty()) {
    throw ConfigError("'profile' and explicit 'piece' lines are mutually exclusive");
  }
  if (shortcut) {
    const auto& w = *shortcut;
    const std::string key = "profile";
    if (w[0] == "zero" && w.size() == 1) {
      pieces = {PieceSpec::constant(c.period, 0.0)};
    } else if (w[0] == "square" && w.size() == 2) {
      if (!(c.period > 0.0)) throw ConfigError("period must be positive");
      pieces = square_wave(parse_real(w[1], key, shortcut_line), c.period).specs();
    } else if (w[0] == "two_constant" && w.size() == 3) {
      TwoConstantProfile tc;
      tc.m1 = parse_real(w[1], key, shortcut_line);
      tc.m2 = parse_real(w[2], key, shortcut_line);
      tc.period = c.period;
      if (!(tc.m1 > 0.0) || !(tc.m2 > 0.0) || !(tc.period > 0.0)) {
        throw ConfigError("two_constant needs m1, m2 and period > 0");
      }
      pieces = tc.profile().specs();
    } else {
      throw ConfigError("line " + std::to_string(shortcut_line) +
                        ": 'profile' expects 'zero', 'square A' or 'two_constant m1 m2'");
    }
  } else if (!pieces.empty()) {
    double width = 0.0;
    for (const PieceSpec& p : pieces) width += p.width;
    c.period = width;
  }
  if (!pieces.empty()) c.pieces = std::move(pieces);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "name = " << c.name << '\n'
      << "flux = " << c.flux << '\n'
      << "ul = " << real_text(c.ul) << '\n'
      << "ur = " << real_text(c.ur) << '\n'
      << "ubar = " << real_text(c.ubar) << '\n'
      << "delta = " << real_text(c.delta) << '\n'
      << "t_min = " << real_text(c.sweep.t_min) << '\n'
      << "t_max = " << real_text(c.sweep.t_max) << '\n'
      << "t_count = " << c.sweep.count << '\n'
      << "solver = " << to_string(c.solver) << '\n'
      << "output = " << c.output << '\n';
  for (const PieceSpec& p : c.pieces) {
    out << "piece = " << real_text(p.width) << ' ' << real_text(p.left);
    if (p.kind == PieceKind::linear) out << ' ' << real_text(p.right);
    out << '\n';
  }
  return out.str();
}

}  // namespace pwave
