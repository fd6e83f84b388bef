#include "pwave/charax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pwave/error.hpp"
#include "quadrature.hpp"

namespace pwave {

// ---------------------------------------------------------------------------
// Solution fields

std::optional<double> SolutionField::locate_jump(double lo, double hi, double t) const {
  if (!(lo < hi)) return std::nullopt;
  const double tol = jump_tolerance();
  double l = lo;
  double r = hi;
  double ul = value(l, t, Limit::right);
  double ur = value(r, t, Limit::left);
  if (std::abs(ul - ur) <= tol) return std::nullopt;
  // Keep the half carrying the larger drop; a jump dominates the smooth variation.
  for (int it = 0; it < 200 && r - l > 1e-14 * std::max(1.0, std::abs(l)); ++it) {
    const double m = 0.5 * (l + r);
    const double um_l = value(m, t, Limit::left);
    const double um_r = value(m, t, Limit::right);
    if (std::abs(um_l - um_r) > tol) return m;
    if (std::abs(ul - um_l) >= std::abs(um_r - ur)) {
      r = m;
      ur = um_l;
    } else {
      l = m;
      ul = um_r;
    }
  }
  if (std::abs(ul - ur) <= tol) return std::nullopt;
  return 0.5 * (l + r);
}

double RiemannOracleField::value(double x, double t, Limit side) const {
  if (t > 0.0) return u_exact(ic_, x, t, side);
  if (side == Limit::right) return ic_(x);
  return (x <= 0.0 ? ic_.ul() : ic_.ur()) + ic_.perturbation().left_limit(x);
}

double RiemannOracleField::initial_integral(double a, double b) const {
  return ic_.primitive(b) - ic_.primitive(a);
}

PeriodicOracleField::PeriodicOracleField(PeriodicProfile profile, double ubar)
    : profile_(std::move(profile)), ubar_(ubar), flux_(burgers_flux()) {}

double PeriodicOracleField::value(double x, double t, Limit side) const {
  if (t > 0.0) return periodic_solution(profile_, ubar_, x, t, side);
  return ubar_ + (side == Limit::right ? profile_(x) : profile_.left_limit(x));
}

double PeriodicOracleField::initial_integral(double a, double b) const {
  return ubar_ * (b - a) + profile_.integral(b) - profile_.integral(a);
}

ReferenceWave::ReferenceWave(ConvexFlux flux, double ul, double ur)
    : flux_(std::move(flux)), ul_(ul), ur_(ur) {
  kind_ = ul >= ur ? Kind::shock : Kind::rarefaction;
  s_ = ul == ur ? flux_.deriv(ul) : rh_speed(flux_, ul, ur);
}

double ReferenceWave::value(double x, double t, Limit side) const {
  if (kind_ == Kind::shock) {
    const double xs = s_ * t;
    if (x < xs) return ul_;
    if (x > xs) return ur_;
    return side == Limit::left ? ul_ : ur_;
  }
  const double a = flux_.deriv(ul_) * t;
  const double b = flux_.deriv(ur_) * t;
  if (x < a || (x == a && side == Limit::left)) return ul_;
  if (x > b || (x == b && side == Limit::right)) return ur_;
  if (!(t > 0.0)) return side == Limit::left ? ul_ : ur_;
  return std::clamp(flux_.inv_deriv(x / t), ul_, ur_);
}

double ReferenceWave::initial_integral(double a, double b) const {
  auto prim = [&](double x) { return x < 0.0 ? ul_ * x : ur_ * x; };
  return prim(b) - prim(a);
}

FrontTrackField::FrontTrackField(PiecewiseConstantState initial, FluxPolygon poly)
    : initial_(std::move(initial)), poly_(std::move(poly)) {}

FrontTrackField::~FrontTrackField() = default;

const PiecewiseConstantState& FrontTrackField::state_at(double t) const {
  if (cache_valid_ && cached_.time == t) return cached_;
  if (t < initial_.time) {
    throw PreconditionError("front-tracking field: query before the initial time");
  }
  if (!tracker_ || t < tracker_->time()) {
    tracker_ = std::make_unique<FrontTracker>(initial_, poly_);
  }
  tracker_->advance(t);
  cached_ = tracker_->state();
  cache_valid_ = true;
  return cached_;
}

double FrontTrackField::value(double x, double t, Limit side) const {
  const PiecewiseConstantState& s = state_at(t);
  return side == Limit::right ? sample(s, x) : sample_left(s, x);
}

double FrontTrackField::initial_integral(double a, double b) const {
  return integrate(initial_, a, b);
}

std::optional<double> FrontTrackField::locate_jump(double lo, double hi, double t) const {
  const PiecewiseConstantState& s = state_at(t);
  std::optional<double> best;
  double best_jump = jump_tolerance();
  auto consider = [&](double x) {
    if (x < lo || x > hi) return;
    const double jump = std::abs(sample(s, x) - sample_left(s, x));
    if (jump > best_jump) {
      best_jump = jump;
      best = x;
    }
  };
  if (s.periodic() && !s.breakpoints.empty()) {
    const double p = *s.period_hint;
    const double b0 = s.breakpoints.front();
    const auto k0 = static_cast<long long>(std::floor((lo - b0) / p)) - 1;
    const auto k1 = static_cast<long long>(std::floor((hi - b0) / p)) + 1;
    for (long long k = k0; k <= k1; ++k) {
      for (double x : s.breakpoints) consider(x + static_cast<double>(k) * p);
    }
  } else {
    const auto first = std::lower_bound(s.breakpoints.begin(), s.breakpoints.end(), lo);
    for (auto it = first; it != s.breakpoints.end() && *it <= hi; ++it) consider(*it);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Characteristics

CharLine backward_extremal(const SolutionField& u, double x, double t, CharKind kind) {
  if (!(t > 0.0)) throw PreconditionError("backward_extremal: requires t > 0");
  const double b = u.value(x, t, kind == CharKind::minimal ? Limit::left : Limit::right);
  return {x, t, u.flux().deriv(b), b, kind};
}

double backward_deviation(const SolutionField& u, const CharLine& line, int n) {
  const Limit side = line.kind == CharKind::minimal ? Limit::left : Limit::right;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = line.anchor_t * (i + 0.5) / n;
    worst = std::max(worst, std::abs(u.value(line.at(s), s, side) - line.value));
  }
  return worst;
}

double Polyline::at(double t) const {
  if (times.empty() || t < times.front() || t > times.back()) {
    throw PreconditionError("polyline: time outside the sampled range");
  }
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const auto i = static_cast<std::size_t>(it - times.begin());
  if (times[i] == t || i == 0) return positions[i];
  const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return positions[i - 1] + w * (positions[i] - positions[i - 1]);
}

Polyline forward_characteristic(const SolutionField& u, double x0, double t_end,
                                const ForwardOptions& options) {
  if (!(options.dt_max > 0.0)) throw PreconditionError("forward_characteristic: dt_max <= 0");
  const ConvexFlux& f = u.flux();
  const double tol = u.jump_tolerance();
  Polyline path;
  path.times.push_back(0.0);
  path.positions.push_back(x0);
  double x = x0;
  double t = 0.0;
  while (t < t_end) {
    const double dt = std::min(options.dt_max, t_end - t);
    const double ul = u.value(x, t, Limit::left);
    const double ur = u.value(x, t, Limit::right);
    const bool on_shock = ul > ur + tol;
    double v;
    if (on_shock) {
      v = rh_speed(f, ul, ur);
    } else if (ur > ul + tol && options.fan_speed) {
      v = std::clamp(*options.fan_speed, f.deriv(ul), f.deriv(ur));
    } else {
      v = f.deriv(ur);  // maximal convention
    }
    const double spread =
        std::max(std::abs(f.deriv(ul) - v), std::abs(f.deriv(ur) - v)) + 1e-9;
    double x_new = x + v * dt;
    const double t_new = t + dt;
    if (on_shock) {
      // Re-locate the shock; it may have accelerated during the step.
      if (auto jump = u.locate_jump(x_new - 2.0 * spread * dt, x_new + 2.0 * spread * dt, t_new)) {
        x_new = *jump;
      }
    } else if (const double u_new = u.value(x_new, t_new, Limit::right);
               std::abs(u_new - ur) > tol) {
      // The classical characteristic would have left its value: a shock was
      // met during the step, and the path continues on it. The shock moves at
      // most as fast as the faster of the two states.
      const double reach = (std::abs(v) + std::abs(f.deriv(u_new))) * dt;
      const double lo = std::min(x, x_new) - reach;
      const double hi = std::max(x, x_new) + reach;
      if (auto jump = u.locate_jump(lo, hi, t_new)) x_new = *jump;
    }
    x = x_new;
    t = t_new;
    path.times.push_back(t);
    path.positions.push_back(x);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Triangle identity

namespace {

double time_integral(const std::function<double(double)>& g, double t) {
  constexpr int kPanels = 256;
  const double h = t / kPanels;
  double sum = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double a = h * i;
    const double b = (i + 1 == kPanels) ? t : h * (i + 1);
    sum += detail::adaptive_gk15(g, a, b, 1e-10).value;
  }
  return sum;
}

}  // namespace

TriangleReport triangle_residual(const SolutionField& u, const SolutionField& u_tilde, double x,
                                 double t, CharKind kind, CharKind kind_tilde) {
  if (!(t > 0.0)) throw PreconditionError("triangle_residual: requires t > 0");
  const ConvexFlux& f = u.flux();
  const CharLine xi = backward_extremal(u, x, t, kind);
  const CharLine xi_t = backward_extremal(u_tilde, x, t, kind_tilde);
  TriangleReport r;
  r.b = xi.value;
  r.b_tilde = xi_t.value;
  r.foot = xi.foot();
  r.foot_tilde = xi_t.foot();
  if (!(r.foot_tilde < r.foot)) {
    throw PreconditionError("triangle_residual: the foot of u~ must lie left of the foot of u");
  }
  // Integrands f(b) - f(v) - f'(b)(b - v), evaluated along the other solution's line.
  const double fb = f.eval(r.b);
  const double dfb = f.deriv(r.b);
  r.lhs_left_term = time_integral(
      [&](double s) {
        const double v = u_tilde.value(xi.at(s), s, Limit::left);
        return fb - f.eval(v) - dfb * (r.b - v);
      },
      t);
  const double fbt = f.eval(r.b_tilde);
  const double dfbt = f.deriv(r.b_tilde);
  r.lhs_right_term = time_integral(
      [&](double s) {
        const double v = u.value(xi_t.at(s), s, Limit::right);
        return fbt - f.eval(v) - dfbt * (r.b_tilde - v);
      },
      t);
  r.rhs = u.initial_integral(r.foot_tilde, r.foot) - u_tilde.initial_integral(r.foot_tilde, r.foot);
  r.residual = r.lhs_left_term + r.lhs_right_term - r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Shock offset and gluing

double shock_offset(const PeriodicProfile& profile, const RiemannPerturbedIC& ic, double x_t,
                    double t, int n, double delta) {
  const double ul = ic.ul();
  const double ur = ic.ur();
  if (!(ul > ur)) throw PreconditionError("shock_offset: requires ul > ur");
  if (!(t > 0.0)) throw PreconditionError("shock_offset: requires T > 0");
  if (!profile.has_zero_mean()) throw PreconditionError("shock_offset: profile mean must vanish");
  const ConvexFlux& f = ic.flux();
  const double p = profile.period();
  const double a = argmin_primitive(profile);
  const double gl = a - n * p + f.deriv(ul) * t;
  const double gr = a + n * p + f.deriv(ur) * t;
  if (!(a - n * p < 0.0 && 0.0 < a + n * p && gl < x_t && x_t < gr)) {
    throw PreconditionError("shock_offset: N too small, the divides do not enclose the shock");
  }
  double left;
  double right;
  if (f.name() == "burgers") {
    left = periodic_integral_exact(profile, ul, t, gl, x_t) - ul * (x_t - gl);
    right = periodic_integral_exact(profile, ur, t, x_t, gr) - ur * (gr - x_t);
  } else {
    auto evolved = [&](double ubar) {
      const FluxPolygon poly = polygon_for(profile, ubar, f, delta);
      return std::make_pair(evolve(discretize_periodic(profile, ubar, poly), poly, t), poly);
    };
    const auto [sl, pl] = evolved(ul);
    const auto [sr, pr] = evolved(ur);
    // Divide lines move with f'(ubar) while the discrete solution carries the
    // snapped mean; integrate against that mean to stay consistent.
    left = integrate(sl, gl, x_t) - period_mean(sl) * (x_t - gl);
    right = integrate(sr, x_t, gr) - period_mean(sr) * (gr - x_t);
  }
  return -(left + right) / (ul - ur);
}

double glue_check(const SolutionField& u, const SolutionField& u_l, const SolutionField& u_r,
                  double left_end, double right_start, double t, const GlueOptions& options) {
  const int n = std::max(options.samples, 2);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = static_cast<double>(i) / (n - 1);
    const double xl = left_end - options.half_width + w * (options.half_width - options.band);
    const double xr = right_start + options.band + w * (options.half_width - options.band);
    worst = std::max(worst, std::abs(u.value(xl, t, Limit::right) - u_l.value(xl, t, Limit::right)));
    worst = std::max(worst, std::abs(u.value(xr, t, Limit::right) - u_r.value(xr, t, Limit::right)));
  }
  return worst;
}

double glue_check(const SolutionField& u, const SolutionField& u_l, const SolutionField& u_r,
                  const ShockPath& path, double t, const GlueOptions& options) {
  const Polyline line{path.times, path.positions};
  const double x = line.at(t);
  return glue_check(u, u_l, u_r, x, x, t, options);
}

}  // namespace pwave
