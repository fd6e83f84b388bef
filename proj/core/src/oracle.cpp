#include "pwave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "hopf_detail.hpp"
#include "pwave/error.hpp"

namespace pwave {

namespace detail {

namespace {

constexpr double kTieBand = 1e-10;

struct Candidate {
  double y;
  double value;
  bool local_min;
};

// Scans the translates of every profile piece that meet [wlo, whi] and keeps,
// per translate, the minimizer of the quadratic on the clipped piece.
// Candidates carry a local-minimum flag built from one-sided derivatives of
// the whole objective, so that clamped piece endpoints next to an interior
// vertex never count as ties.
void scan_part(const HopfObjective& obj, double ubar, double t, double x, double wlo, double whi,
               std::vector<Candidate>& out) {
  const PeriodicProfile& w = *obj.w;
  const double p = w.period();
  const auto pieces = w.pieces();
  const std::size_t n = pieces.size();
  const double snap = 1e-13 * p;
  const double tau =
      1e-12 * (1.0 + std::abs(obj.u_neg) + std::abs(obj.u_pos) +
               std::max(std::abs(w.min_value()), std::abs(w.max_value())) +
               (std::abs(x) + std::abs(wlo) + std::abs(whi)) / t);

  const long long k0 = static_cast<long long>(std::floor(wlo / p));
  const long long k1 = static_cast<long long>(std::floor(whi / p));
  for (long long k = k0; k <= k1; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const ProfilePiece& piece = pieces[j];
      const double base = piece.start + static_cast<double>(k) * p;
      const double ya = std::max(base, wlo);
      const double yb = std::min(base + piece.width, whi);
      if (ya > yb) continue;
      const double sa = ya - base;
      const double sb = yb - base;
      const double c0 = piece.left;
      const double c1 = piece.slope();
      const double wj = w.integral_at_piece(j);
      const double kappa = 1.0 / t + c1;

      auto emit = [&](double s) {
        s = std::clamp(s, sa, sb);
        double y = base + s;
        double value;
        if (std::abs(y) <= snap && obj.lo <= 0.0 && 0.0 <= obj.hi) {
          y = 0.0;
          value = x * x / (2.0 * t);
        } else {
          const double d = x - y;
          value = d * d / (2.0 * t) + ubar * y + wj + c0 * s + 0.5 * c1 * s * s;
        }
        // One-sided derivatives of the full objective at y.
        const double q = (y - x) / t;
        double w_minus = c0 + c1 * s;
        double w_plus = c0 + c1 * s;
        const bool at_start = s <= snap;
        const bool at_end = s >= piece.width - snap;
        if (at_start) w_minus = pieces[(j + n - 1) % n].right;
        if (at_end) w_plus = pieces[(j + 1) % n].left;
        const double ul_side = (y <= 0.0) ? obj.u_neg : obj.u_pos;
        const double ur_side = (y < 0.0) ? obj.u_neg : obj.u_pos;
        const double d_minus = q + ul_side + w_minus;
        const double d_plus = q + ur_side + w_plus;
        const bool left_ok = (y <= obj.lo) || d_minus <= tau;
        const bool right_ok = (y >= obj.hi) || d_plus >= -tau;
        out.push_back({y, value, left_ok && right_ok});
      };

      if (kappa > 0.0) {
        const double s_star = (x - base - (ubar + c0) * t) / (1.0 + c1 * t);
        emit(s_star);
      } else {
        emit(sa);
        emit(sb);
      }
    }
  }
}

}  // namespace

void require_burgers(const ConvexFlux& flux, const char* what) {
  if (flux.name() != "burgers") {
    throw PreconditionError(std::string(what) + ": the exact oracle is Burgers-only");
  }
}

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0)) {
    throw DomainError(std::string(what) + ": requires t > 0");
  }
}

Window search_window(const PeriodicProfile& w, double ubar, double t, double x, double lo, double hi,
                     double level) {
  const auto [w_lo, w_hi] = w.primitive_range();
  const double y_c = std::clamp(x - ubar * t, lo, hi);
  const double radius =
      std::sqrt(2.0 * t * ((w_hi - w_lo) + level)) + 1e-12 * (1.0 + std::abs(y_c)) + 1e-12 * w.period();
  return {std::max(lo, y_c - radius), std::min(hi, y_c + radius)};
}

ExtremalMinimizers minimize(const HopfObjective& obj, double t, double x) {
  std::vector<Candidate> cands;
  const double level = 10.0 * kTieBand;
  auto run = [&](double ubar, double lo, double hi) {
    if (lo > hi) return;
    const Window win = search_window(*obj.w, ubar, t, x, lo, hi, level);
    if (!win.empty()) scan_part(obj, ubar, t, x, win.lo, win.hi, cands);
  };
  if (obj.u_neg == obj.u_pos) {
    run(obj.u_neg, obj.lo, obj.hi);
  } else {
    run(obj.u_neg, obj.lo, std::min(obj.hi, 0.0));
    run(obj.u_pos, std::max(obj.lo, 0.0), obj.hi);
  }
  if (cands.empty()) {
    throw InternalError("extremal_minimizers: empty constrained bracket");
  }
  double best = std::numeric_limits<double>::infinity();
  double best_y = 0.0;
  for (const Candidate& c : cands) {
    if (c.value < best) {
      best = c.value;
      best_y = c.y;
    }
  }
  double y_low = std::numeric_limits<double>::infinity();
  double y_high = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : cands) {
    if (c.local_min && c.value <= best + kTieBand) {
      y_low = std::min(y_low, c.y);
      y_high = std::max(y_high, c.y);
    }
  }
  if (!(y_low <= y_high)) {
    y_low = y_high = best_y;
  }
  return {y_low, y_high, best};
}

}  // namespace detail

namespace {

using detail::HopfObjective;

constexpr double kInf = std::numeric_limits<double>::infinity();

HopfObjective objective_for(const HopfPotential& hp, Constraint constraint) {
  const RiemannPerturbedIC& ic = hp.ic();
  HopfObjective obj;
  obj.w = &ic.perturbation();
  switch (hp.side()) {
    case PotentialSide::left:
      obj.u_neg = obj.u_pos = ic.ul();
      break;
    case PotentialSide::right:
      obj.u_neg = obj.u_pos = ic.ur();
      break;
    case PotentialSide::joined:
      obj.u_neg = ic.ul();
      obj.u_pos = ic.ur();
      break;
  }
  obj.lo = (constraint == Constraint::nonnegative) ? 0.0 : -kInf;
  obj.hi = (constraint == Constraint::nonpositive) ? 0.0 : kInf;
  return obj;
}

ExtremalMinimizers joined_minimizers(const RiemannPerturbedIC& ic, double t, double x) {
  HopfObjective obj{&ic.perturbation(), ic.ul(), ic.ur(), -kInf, kInf};
  return detail::minimize(obj, t, x);
}

double constrained_min(const RiemannPerturbedIC& ic, double ubar, double lo, double hi, double t,
                       double x) {
  HopfObjective obj{&ic.perturbation(), ubar, ubar, lo, hi};
  return detail::minimize(obj, t, x).min_value;
}

bool is_merged(const ShockInterval& s) {
  return s.merged;
}

}  // namespace

HopfPotential::HopfPotential(RiemannPerturbedIC ic, PotentialSide side)
    : ic_(std::move(ic)), side_(side) {
  detail::require_burgers(ic_.flux(), "HopfPotential");
}

double potential(const HopfPotential& hp, double t, double x, double y) {
  detail::require_positive_time(t, "potential");
  const RiemannPerturbedIC& ic = hp.ic();
  double ubar = ic.ul();
  if (hp.side() == PotentialSide::right || (hp.side() == PotentialSide::joined && y > 0.0)) {
    ubar = ic.ur();
  }
  const double d = x - y;
  return d * d / (2.0 * t) + ubar * y + ic.perturbation().periodic_integral(y);
}

ExtremalMinimizers extremal_minimizers(const HopfPotential& hp, double t, double x,
                                       Constraint constraint) {
  detail::require_positive_time(t, "extremal_minimizers");
  return detail::minimize(objective_for(hp, constraint), t, x);
}

double u_exact(const RiemannPerturbedIC& ic, double x, double t, Limit side) {
  detail::require_burgers(ic.flux(), "u_exact");
  detail::require_positive_time(t, "u_exact");
  const ExtremalMinimizers m = joined_minimizers(ic, t, x);
  const double y = (side == Limit::left) ? m.y_star_low : m.y_star_high;
  return (x - y) / t;
}

double minima_gap(const RiemannPerturbedIC& ic, double t, double x) {
  detail::require_positive_time(t, "minima_gap");
  const double m_minus = constrained_min(ic, ic.ul(), -kInf, 0.0, t, x);
  const double m_plus = constrained_min(ic, ic.ur(), 0.0, kInf, t, x);
  return m_plus - m_minus;
}

ShockInterval shock_interval(const RiemannPerturbedIC& ic, double t) {
  detail::require_burgers(ic.flux(), "shock_interval");
  detail::require_positive_time(t, "shock_interval");
  if (!(ic.ul() > ic.ur())) {
    throw PreconditionError("shock_interval requires ul > ur");
  }
  const double s = ic.shock_speed();
  const double scale = std::max(1.0, t);
  const double margin = 1e-9 * scale;
  double lo = (s + ic.perturbation().lower_bound()) * t - margin;
  double hi = (s + ic.perturbation().upper_bound()) * t + margin;
  for (int i = 0; i < 60 && !(minima_gap(ic, t, lo) > 0.0); ++i) {
    lo -= margin * std::ldexp(1.0, i);
  }
  for (int i = 0; i < 60 && !(minima_gap(ic, t, hi) < 0.0); ++i) {
    hi += margin * std::ldexp(1.0, i);
  }
  if (!(minima_gap(ic, t, lo) > 0.0) || !(minima_gap(ic, t, hi) < 0.0)) {
    throw InternalError("shock_interval: minima gap does not change sign on the bracket");
  }
  const double tol = 1e-12 * t;
  // X-: boundary between gap > 0 and gap <= 0.
  auto bisect = [&](auto&& is_left) {
    double a = lo;
    double b = hi;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (is_left(minima_gap(ic, t, mid))) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };
  const double x_low = bisect([](double gap) { return gap > 0.0; });
  const double x_high = bisect([](double gap) { return gap >= 0.0; });
  ShockInterval out{t, std::min(x_low, x_high), std::max(x_low, x_high), false};
  out.merged = (out.x_high - out.x_low) <= 1e-10 * scale;
  return out;
}

double detect_merge_time(const RiemannPerturbedIC& ic, const std::vector<double>& t_samples) {
  if (t_samples.empty()) {
    throw PreconditionError("detect_merge_time needs at least one sample");
  }
  for (std::size_t i = 1; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > t_samples[i - 1])) {
      throw PreconditionError("detect_merge_time: samples must be strictly increasing");
    }
  }
  std::ptrdiff_t last_unmerged = -1;
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!is_merged(shock_interval(ic, t_samples[i]))) {
      last_unmerged = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (last_unmerged < 0) {
    return 0.0;
  }
  if (static_cast<std::size_t>(last_unmerged) + 1 == t_samples.size()) {
    return kInf;
  }
  double a = t_samples[static_cast<std::size_t>(last_unmerged)];
  double b = t_samples[static_cast<std::size_t>(last_unmerged) + 1];
  for (int it = 0; it < 200 && b - a > 1e-10 * b; ++it) {
    const double mid = 0.5 * (a + b);
    if (is_merged(shock_interval(ic, mid))) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return b;
}

ExtremalMinimizers periodic_minimizers(const PeriodicProfile& profile, double ubar, double t,
                                       double x) {
  detail::require_positive_time(t, "periodic_minimizers");
  if (profile.has_zero_mean()) {
    detail::HopfObjective obj{&profile, ubar, ubar, -kInf, kInf};
    return detail::minimize(obj, t, x);
  }
  const auto [zero_mean, m] = shift_to_zero_mean(profile);
  detail::HopfObjective obj{&zero_mean, ubar + m, ubar + m, -kInf, kInf};
  return detail::minimize(obj, t, x);
}

double periodic_solution(const PeriodicProfile& profile, double ubar, double x, double t,
                         Limit side) {
  detail::require_positive_time(t, "periodic_solution");
  const auto [zero_mean, m] = shift_to_zero_mean(profile);
  const double u_bar = ubar + m;
  const double xi = x - u_bar * t;
  const ExtremalMinimizers mins = periodic_minimizers(zero_mean, 0.0, t, xi);
  const double y = (side == Limit::left) ? mins.y_star_low : mins.y_star_high;
  return (xi - y) / t + u_bar;
}

double integral_exact(const RiemannPerturbedIC& ic, double t, double a, double b) {
  detail::require_burgers(ic.flux(), "integral_exact");
  detail::require_positive_time(t, "integral_exact");
  return joined_minimizers(ic, t, b).min_value - joined_minimizers(ic, t, a).min_value;
}

double periodic_integral_exact(const PeriodicProfile& profile, double ubar, double t, double a,
                               double b) {
  return periodic_minimizers(profile, ubar, t, b).min_value -
         periodic_minimizers(profile, ubar, t, a).min_value;
}

namespace {

struct Box {
  double a;
  double b;
  ExtremalMinimizers m_a;
  ExtremalMinimizers m_b;
  double bound;
};

struct BoxOrder {
  bool operator()(const Box& l, const Box& r) const { return l.bound < r.bound; }
};

// Shared branch and bound; `node_value(x, mins)` is an attained value and
// `box_bound(a, b, mins(a), mins(b))` bounds the objective over [a, b].
template <class NodeValue, class BoxBound>
SupResult branch_and_bound(const MinimizerMap& mins, double a, double b, double tol,
                           NodeValue node_value, BoxBound box_bound) {
  if (!(a <= b)) {
    throw PreconditionError("sup over an empty interval");
  }
  constexpr int kInitial = 64;
  constexpr int kMaxEvaluations = 200000;
  std::vector<double> xs(kInitial + 1);
  std::vector<ExtremalMinimizers> ms(kInitial + 1);
  SupResult best{-kInf, a};
  for (int i = 0; i <= kInitial; ++i) {
    xs[i] = (i == kInitial) ? b : a + (b - a) * i / kInitial;
    ms[i] = mins(xs[i]);
    const double v = node_value(xs[i], ms[i]);
    if (v > best.value) best = {v, xs[i]};
  }
  std::priority_queue<Box, std::vector<Box>, BoxOrder> queue;
  for (int i = 0; i < kInitial; ++i) {
    const double bound = box_bound(xs[i], xs[i + 1], ms[i], ms[i + 1]);
    if (bound > best.value + tol) queue.push({xs[i], xs[i + 1], ms[i], ms[i + 1], bound});
  }
  int evaluations = kInitial + 1;
  while (!queue.empty() && evaluations < kMaxEvaluations) {
    const Box box = queue.top();
    queue.pop();
    if (box.bound <= best.value + tol) break;
    const double mid = 0.5 * (box.a + box.b);
    if (mid <= box.a || mid >= box.b) continue;
    const ExtremalMinimizers m_mid = mins(mid);
    ++evaluations;
    const double v = node_value(mid, m_mid);
    if (v > best.value) best = {v, mid};
    const double bound_left = box_bound(box.a, mid, box.m_a, m_mid);
    const double bound_right = box_bound(mid, box.b, m_mid, box.m_b);
    if (bound_left > best.value + tol) queue.push({box.a, mid, box.m_a, m_mid, bound_left});
    if (bound_right > best.value + tol) queue.push({mid, box.b, m_mid, box.m_b, bound_right});
  }
  return best;
}

}  // namespace

SupResult sup_excess(const MinimizerMap& mins, double t, double a, double b,
                     const std::function<double(double)>& g, double tol) {
  detail::require_positive_time(t, "sup_excess");
  auto node = [&](double x, const ExtremalMinimizers& m) { return (x - m.y_star_low) / t - g(x); };
  auto bound = [&](double xa, double xb, const ExtremalMinimizers& ma, const ExtremalMinimizers&) {
    return (xb - ma.y_star_low) / t - g(xa);
  };
  return branch_and_bound(mins, a, b, tol, node, bound);
}

SupResult sup_deficit(const MinimizerMap& mins, double t, double a, double b,
                      const std::function<double(double)>& g, double tol) {
  detail::require_positive_time(t, "sup_deficit");
  auto node = [&](double x, const ExtremalMinimizers& m) {
    return g(x) - (x - m.y_star_high) / t;
  };
  auto bound = [&](double xa, double xb, const ExtremalMinimizers&, const ExtremalMinimizers& mb) {
    return g(xb) - (xa - mb.y_star_high) / t;
  };
  return branch_and_bound(mins, a, b, tol, node, bound);
}

double forward_max_from_origin(const MinimizerMap& mins, double lo, double hi) {
  if (!(mins(lo).y_star_low <= 0.0) || !(mins(hi).y_star_low > 0.0)) {
    throw PreconditionError("forward_max_from_origin: bracket does not straddle the characteristic");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mins(mid).y_star_low <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double forward_min_from_origin(const MinimizerMap& mins, double lo, double hi) {
  if (!(mins(lo).y_star_high < 0.0) || !(mins(hi).y_star_high >= 0.0)) {
    throw PreconditionError("forward_min_from_origin: bracket does not straddle the characteristic");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mins(mid).y_star_high >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace pwave
