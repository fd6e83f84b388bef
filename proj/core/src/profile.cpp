#include "pwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pwave/error.hpp"

namespace pwave {

PeriodicProfile::PeriodicProfile(std::span<const PieceSpec> specs) {
  if (specs.empty()) {
    throw PreconditionError("profile needs at least one piece");
  }
  double start = 0.0;
  pieces_.reserve(specs.size());
  for (const PieceSpec& s : specs) {
    if (!(s.width > 0.0) || !std::isfinite(s.width)) {
      throw PreconditionError("profile piece widths must be positive");
    }
    if (!std::isfinite(s.left) || !std::isfinite(s.right)) {
      throw PreconditionError("profile piece values must be finite");
    }
    ProfilePiece piece{start, s.width, s.left, s.kind == PieceKind::constant ? s.left : s.right,
                       s.kind};
    pieces_.push_back(piece);
    start += s.width;
  }
  period_ = start;

  prim_at_start_.resize(pieces_.size());
  double acc = 0.0;
  min_value_ = std::numeric_limits<double>::infinity();
  max_value_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    prim_at_start_[i] = acc;
    acc += pieces_[i].integral_to(pieces_[i].width);
    min_value_ = std::min({min_value_, pieces_[i].left, pieces_[i].right});
    max_value_ = std::max({max_value_, pieces_[i].left, pieces_[i].right});
  }
  total_ = acc;
  mean_ = total_ / period_;
  alpha_ = min_value_ - 1e-12;
  beta_ = max_value_ + 1e-12;
}

std::vector<PieceSpec> PeriodicProfile::specs() const {
  std::vector<PieceSpec> out;
  out.reserve(pieces_.size());
  for (const ProfilePiece& p : pieces_) {
    out.push_back({p.width, p.left, p.right, p.kind});
  }
  return out;
}

double PeriodicProfile::reduce(double x, long long* whole_periods) const {
  const double k = std::floor(x / period_);
  double r = x - k * period_;
  long long n = static_cast<long long>(k);
  if (r >= period_) {
    r -= period_;
    ++n;
  }
  if (r < 0.0) {
    r = 0.0;
  }
  if (whole_periods) *whole_periods = n;
  return r;
}

std::pair<std::size_t, double> PeriodicProfile::locate(double x) const {
  const double r = reduce(x, nullptr);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r,
                             [](double v, const ProfilePiece& p) { return v < p.start; });
  const std::size_t i = static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
  return {i, std::min(r - pieces_[i].start, pieces_[i].width)};
}

double PeriodicProfile::operator()(double x) const {
  const auto [i, s] = locate(x);
  return pieces_[i].value_at(s);
}

double PeriodicProfile::left_limit(double x) const {
  const auto [i, s] = locate(x);
  if (s == 0.0) {
    const std::size_t prev = (i == 0) ? pieces_.size() - 1 : i - 1;
    return pieces_[prev].right;
  }
  return pieces_[i].value_at(s);
}

double PeriodicProfile::periodic_integral(double x) const {
  const auto [i, s] = locate(x);
  return prim_at_start_[i] + pieces_[i].integral_to(s);
}

double PeriodicProfile::integral(double x) const {
  long long n = 0;
  reduce(x, &n);
  return static_cast<double>(n) * total_ + periodic_integral(x);
}

std::pair<double, double> PeriodicProfile::primitive_range() const {
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const ProfilePiece& p = pieces_[i];
    auto consider = [&](double s) {
      const double v = prim_at_start_[i] + p.integral_to(s);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    consider(0.0);
    consider(p.width);
    const double c1 = p.slope();
    if (c1 != 0.0) {
      const double s = -p.left / c1;
      if (s > 0.0 && s < p.width) consider(s);
    }
  }
  return {lo, hi};
}

PeriodicProfile PeriodicProfile::shifted(double c) const {
  std::vector<PieceSpec> out = specs();
  for (PieceSpec& s : out) {
    s.left += c;
    s.right += c;
  }
  return PeriodicProfile(out);
}

bool PeriodicProfile::has_zero_mean(double tol) const {
  const double scale = std::max({1.0, std::abs(min_value_), std::abs(max_value_)});
  return std::abs(mean_) <= tol * scale;
}

PeriodicProfile square_wave(double amplitude, double period, bool positive_first) {
  const double first = positive_first ? amplitude : -amplitude;
  return PeriodicProfile(std::vector<PieceSpec>{PieceSpec::constant(0.5 * period, first),
                                                PieceSpec::constant(0.5 * period, -first)});
}

std::pair<PeriodicProfile, double> shift_to_zero_mean(const PeriodicProfile& profile) {
  const double m = profile.mean();
  return {profile.shifted(-m), m};
}

double primitive(const PeriodicProfile& profile, double x) {
  if (!profile.has_zero_mean()) {
    throw PreconditionError("primitive requires a zero-mean profile");
  }
  return profile.periodic_integral(x);
}

double argmin_primitive(const PeriodicProfile& profile) {
  if (!profile.has_zero_mean()) {
    throw PreconditionError("argmin_primitive requires a zero-mean profile");
  }
  struct Candidate {
    double x;
    double w;
  };
  std::vector<Candidate> candidates;
  const auto pieces = profile.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const ProfilePiece& p = pieces[i];
    candidates.push_back({p.start, profile.integral_at_piece(i)});
    const double c1 = p.slope();
    // Interior local minimum where a rising ramp crosses zero.
    if (c1 > 0.0) {
      const double s = -p.left / c1;
      if (s > 0.0 && s < p.width) {
        candidates.push_back({p.start + s, profile.integral_at_piece(i) + p.integral_to(s)});
      }
    }
  }
  double w_min = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) w_min = std::min(w_min, c.w);
  const double scale =
      std::max({1.0, profile.period() * std::max(std::abs(profile.min_value()),
                                                 std::abs(profile.max_value()))});
  const double tie = 1e-14 * scale;
  double best = profile.period();
  for (const Candidate& c : candidates) {
    if (c.w <= w_min + tie) best = std::min(best, c.x);
  }
  return best;
}

std::vector<DivideLine> divides(const PeriodicProfile& profile, const ConvexFlux& flux, double ubar,
                                int n_lo, int n_hi) {
  const double a = argmin_primitive(profile);
  const double slope = flux.deriv(ubar);
  std::vector<DivideLine> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    out.push_back({a + n * profile.period(), slope, n});
  }
  return out;
}

PeriodicProfile TwoConstantProfile::profile() const {
  if (!(m1 > 0.0) || !(m2 > 0.0) || !(period > 0.0)) {
    throw PreconditionError("two-constant profile needs m1, m2, p > 0");
  }
  const double w1 = m2 * period / (m1 + m2);
  const double w2 = m1 * period / (m1 + m2);
  return PeriodicProfile(std::vector<PieceSpec>{PieceSpec::constant(w1, m1 + ubar),
                                                PieceSpec::constant(w2, -m2 + ubar)});
}

double TwoConstantProfile::sawtooth_time(const ConvexFlux& flux) const {
  const double s_hi = flux.deriv(m1 + ubar) - flux.deriv(ubar);
  const double s_lo = flux.deriv(-m2 + ubar) - flux.deriv(ubar);
  return std::max(period / s_hi, period / -s_lo);
}

RiemannPerturbedIC::RiemannPerturbedIC(ConvexFlux flux, double ul, double ur,
                                       PeriodicProfile perturbation)
    : flux_(std::move(flux)), ul_(ul), ur_(ur), perturbation_(std::move(perturbation)) {
  if (!perturbation_.has_zero_mean()) {
    throw PreconditionError("Riemann perturbation must have zero mean");
  }
  shock_speed_ = (ul_ == ur_) ? flux_.deriv(ul_) : rh_speed(flux_, ul_, ur_);
}

double RiemannPerturbedIC::operator()(double x) const {
  return (x < 0.0 ? ul_ : ur_) + perturbation_(x);
}

double RiemannPerturbedIC::primitive(double x) const {
  return (x < 0.0 ? ul_ : ur_) * x + perturbation_.periodic_integral(x);
}

RiemannPerturbedIC make_riemann_ic(const ConvexFlux& flux, double ul, double ur,
                                   const PeriodicProfile& profile) {
  auto [zero_mean, m] = shift_to_zero_mean(profile);
  return RiemannPerturbedIC(flux, ul + m, ur + m, std::move(zero_mean));
}

}  // namespace pwave
