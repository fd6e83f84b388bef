#include "pwave/fronttrack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

#include "pwave/error.hpp"

namespace pwave {

// ---------------------------------------------------------------------------
// Flux polygon and Riemann fans

FluxPolygon::FluxPolygon(ConvexFlux flux, double delta, Interval u_range)
    : flux_(std::move(flux)), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw PreconditionError("approximate_flux: delta must be positive");
  }
  if (!(u_range.lo <= u_range.hi)) {
    throw PreconditionError("approximate_flux: empty u range");
  }
  if (!flux_.domain().contains(u_range.lo) || !flux_.domain().contains(u_range.hi)) {
    throw DomainError("approximate_flux: u range outside the flux domain");
  }
  const double steps = (u_range.hi - u_range.lo) / delta;
  const auto n = static_cast<std::size_t>(std::max(0.0, std::ceil(steps - 1e-9)));
  u_.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    u_.push_back(u_range.lo + static_cast<double>(k) * delta);
  }
  u_.push_back(u_range.hi);
  f_.reserve(u_.size());
  for (double u : u_) f_.push_back(flux_.eval(u));
}

double FluxPolygon::chord(std::size_t i, std::size_t j) const {
  return (f_[j] - f_[i]) / (u_[j] - u_[i]);
}

std::size_t FluxPolygon::nearest(double u) const {
  const double k = std::round((u - u_.front()) / delta_);
  const std::size_t last = u_.size() - 1;
  const std::size_t guess =
      static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(last)));
  std::size_t best = guess;
  for (std::size_t c : {guess == 0 ? guess : guess - 1, std::min(guess + 1, last)}) {
    if (std::abs(u_[c] - u) < std::abs(u_[best] - u)) best = c;
  }
  return best;
}

std::size_t FluxPolygon::index_of(double u) const {
  const std::size_t i = nearest(u);
  if (!(std::abs(u_[i] - u) <= 1e-9 * delta_)) {
    throw PreconditionError("front tracking: state is not a polygon node value");
  }
  return i;
}

double FluxPolygon::max_speed() const {
  return std::max(std::abs(flux_.deriv(u_.front())), std::abs(flux_.deriv(u_.back())));
}

FluxPolygon approximate_flux(const ConvexFlux& flux, double delta, Interval u_range) {
  return FluxPolygon(flux, delta, u_range);
}

namespace {

struct WaveIndices {
  std::size_t left;
  std::size_t right;
};

std::vector<WaveIndices> fan_indices(std::size_t il, std::size_t ir) {
  std::vector<WaveIndices> out;
  if (il > ir) {
    out.push_back({il, ir});
  } else {
    for (std::size_t k = il; k < ir; ++k) out.push_back({k, k + 1});
  }
  return out;
}

}  // namespace

std::vector<Front> riemann_fan(const FluxPolygon& poly, double ul, double ur) {
  const std::size_t il = poly.index_of(ul);
  const std::size_t ir = poly.index_of(ur);
  std::vector<Front> out;
  for (const WaveIndices& w : fan_indices(il, ir)) {
    out.push_back({0.0, poly.u(w.left), poly.u(w.right), poly.chord(w.left, w.right)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discretization of initial data

namespace {

struct Segment {
  double start;
  double value;
};

void push_segment(std::vector<Segment>& segs, double start, double value) {
  if (!segs.empty() && segs.back().value == value) return;
  if (!segs.empty() && segs.back().start == start) {
    segs.back().value = value;
    if (segs.size() >= 2 && segs[segs.size() - 2].value == value) segs.pop_back();
    return;
  }
  segs.push_back({start, value});
}

// Appends the snapped steps of one profile piece placed at [a, a + width), with
// `base` added, clipped to [lo, hi).
void push_piece(std::vector<Segment>& segs, const FluxPolygon& poly, const ProfilePiece& piece,
                double a, double base, double lo, double hi) {
  const double delta = poly.delta();
  std::size_t m = 1;
  if (piece.kind == PieceKind::linear) {
    m = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(piece.right - piece.left) / delta)));
  }
  const double h = piece.width / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s0 = a + static_cast<double>(i) * h;
    const double s1 = (i + 1 == m) ? a + piece.width : s0 + h;
    const double x0 = std::max(s0, lo);
    const double x1 = std::min(s1, hi);
    if (!(x0 < x1)) continue;
    const double v = base + piece.value_at((static_cast<double>(i) + 0.5) * h);
    push_segment(segs, x0, poly.u(poly.nearest(v)));
  }
}

PiecewiseConstantState to_line_state(const std::vector<Segment>& segs) {
  PiecewiseConstantState st;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0) st.breakpoints.push_back(segs[i].start);
    st.values.push_back(segs[i].value);
  }
  return st;
}

}  // namespace

PiecewiseConstantState discretize(const RiemannPerturbedIC& ic, const FluxPolygon& poly,
                                  Interval window) {
  if (!(window.lo < window.hi)) {
    throw PreconditionError("discretize: empty window");
  }
  const PeriodicProfile& w = ic.perturbation();
  const double p = w.period();
  std::vector<Segment> segs;
  const auto k0 = static_cast<long long>(std::floor(window.lo / p));
  const auto k1 = static_cast<long long>(std::floor(window.hi / p));
  for (long long k = k0; k <= k1; ++k) {
    for (const ProfilePiece& piece : w.pieces()) {
      const double a = piece.start + static_cast<double>(k) * p;
      // The two halves of the line carry different background states.
      push_piece(segs, poly, piece, a, ic.ul(), window.lo, std::min(window.hi, 0.0));
      push_piece(segs, poly, piece, a, ic.ur(), std::max(window.lo, 0.0), window.hi);
    }
  }
  return to_line_state(segs);
}

PiecewiseConstantState discretize_periodic(const PeriodicProfile& profile, double ubar,
                                           const FluxPolygon& poly) {
  const double p = profile.period();
  std::vector<Segment> segs;
  for (const ProfilePiece& piece : profile.pieces()) {
    push_piece(segs, poly, piece, piece.start, ubar, 0.0, p);
  }
  PiecewiseConstantState st;
  st.period_hint = p;
  if (segs.size() == 1) {
    st.values.push_back(segs[0].value);
    return st;
  }
  std::size_t first = 0;
  if (segs.front().value == segs.back().value) first = 1;
  st.values.push_back(segs.back().value);
  for (std::size_t i = first; i < segs.size(); ++i) {
    st.breakpoints.push_back(segs[i].start);
    st.values.push_back(segs[i].value);
  }
  return st;
}

FluxPolygon polygon_for(const RiemannPerturbedIC& ic, double delta) {
  const PeriodicProfile& w = ic.perturbation();
  double lo = std::min(ic.ul(), ic.ur()) + w.min_value();
  double hi = std::max(ic.ul(), ic.ur()) + w.max_value();
  if (hi == lo) hi = lo + delta;
  return FluxPolygon(ic.flux(), delta, {lo, hi});
}

FluxPolygon polygon_for(const PeriodicProfile& profile, double ubar, const ConvexFlux& flux,
                        double delta) {
  double lo = ubar + profile.min_value();
  double hi = ubar + profile.max_value();
  if (hi == lo) hi = lo + delta;
  return FluxPolygon(flux, delta, {lo, hi});
}

Interval line_window(const RiemannPerturbedIC& ic, const FluxPolygon& poly, double t_end) {
  const double p = ic.perturbation().period();
  // Spurious waves from the window edges travel at most max|f'|; the region of
  // interest around s t_end must stay outside their reach.
  const double reach = (std::abs(ic.shock_speed()) + poly.max_speed()) * std::max(t_end, 0.0);
  const double half = std::ceil((reach + 3.0 * p) / p) * p;
  return {-half, half};
}

// ---------------------------------------------------------------------------
// Front tracker

namespace {

constexpr int kNone = -1;

double coincide_tol(double x, double t) {
  return 1e-12 * std::max({1.0, std::abs(x), std::abs(t)});
}

struct TrackedFront {
  double x_ref;
  double t_ref;
  double speed;
  std::size_t left;
  std::size_t right;
  int prev;
  int next;
  bool alive;

  double at(double t) const { return x_ref + speed * (t - t_ref); }
  bool shock() const { return left > right; }
};

struct Event {
  double t;
  double x;
  int a;
  int b;

  bool operator>(const Event& o) const {
    if (t != o.t) return t > o.t;
    if (x != o.x) return x > o.x;
    return a > o.a;
  }
};

}  // namespace

struct FrontTracker::Impl {
  const FluxPolygon* poly;
  double now = 0.0;
  double period = 0.0;  // 0 on the line
  std::vector<TrackedFront> fronts;
  int head = kNone;
  std::size_t alive = 0;
  std::size_t constant_value = 0;  // state when no fronts are alive
  std::size_t events = 0;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

  struct Probe {
    bool active = false;
    bool riding = false;
    int front = kNone;
    double x_ref = 0.0;
    double t_ref = 0.0;
    std::size_t value = 0;
    int left = kNone;
    int right = kNone;
  } probe;

  bool periodic() const { return period > 0.0; }

  // Offset added to b's coordinate to express it in a's frame, for b = next[a].
  double next_shift(int b) const { return (periodic() && b == head) ? period : 0.0; }

  int add_front(double x, double t, std::size_t l, std::size_t r) {
    fronts.push_back({x, t, poly->chord(l, r), l, r, kNone, kNone, true});
    ++alive;
    return static_cast<int>(fronts.size() - 1);
  }

  void schedule(int a) {
    if (a == kNone) return;
    const int b = fronts[a].next;
    if (b == kNone || b == a) return;
    const TrackedFront& fa = fronts[a];
    const TrackedFront& fb = fronts[b];
    if (!(fa.speed > fb.speed)) return;
    const double gap = fb.at(now) + next_shift(b) - fa.at(now);
    const double t = now + std::max(gap, 0.0) / (fa.speed - fb.speed);
    queue.push({t, fa.at(t), a, b});
  }

  bool valid(const Event& e) const {
    return fronts[e.a].alive && fronts[e.b].alive && fronts[e.a].next == e.b;
  }

  void build(const PiecewiseConstantState& s) {
    now = s.time;
    period = s.period_hint.value_or(0.0);
    if (s.values.size() != s.breakpoints.size() + 1) {
      throw PreconditionError("front tracking: values must outnumber breakpoints by one");
    }
    for (std::size_t i = 1; i < s.breakpoints.size(); ++i) {
      if (!(s.breakpoints[i - 1] < s.breakpoints[i])) {
        throw PreconditionError("front tracking: breakpoints must increase strictly");
      }
    }
    if (periodic()) {
      if (!s.breakpoints.empty() &&
          !(s.breakpoints.back() < s.breakpoints.front() + period)) {
        throw PreconditionError("front tracking: breakpoints exceed one period");
      }
      if (poly->index_of(s.values.front()) != poly->index_of(s.values.back())) {
        throw PreconditionError("front tracking: periodic state must wrap consistently");
      }
    }
    constant_value = poly->index_of(s.values.front());
    int last = kNone;
    for (std::size_t i = 0; i < s.breakpoints.size(); ++i) {
      const std::size_t l = poly->index_of(s.values[i]);
      const std::size_t r = poly->index_of(s.values[i + 1]);
      for (const WaveIndices& w : fan_indices(l, r)) {
        const int id = add_front(s.breakpoints[i], now, w.left, w.right);
        if (last != kNone) {
          fronts[last].next = id;
          fronts[id].prev = last;
        } else {
          head = id;
        }
        last = id;
      }
    }
    if (periodic() && head != kNone) {
      fronts[last].next = head;
      fronts[head].prev = last;
    }
    if (head != kNone) {
      int id = head;
      do {
        schedule(id);
        id = fronts[id].next;
      } while (id != kNone && id != head);
    }
  }

  // ---- probe ------------------------------------------------------------

  double probe_speed() const { return poly->flux().deriv(poly->u(probe.value)); }

  double probe_x(double t) const {
    if (probe.riding) return fronts[probe.front].at(t);
    return probe.x_ref + probe_speed() * (t - probe.t_ref);
  }

  void ride(int id) {
    probe.riding = true;
    probe.front = id;
  }

  void set_free(double x, std::size_t value, int left, int right) {
    probe.riding = false;
    probe.front = kNone;
    probe.x_ref = x;
    probe.t_ref = now;
    probe.value = value;
    probe.left = left;
    probe.right = right;
  }

  // Earliest time the free probe meets a neighbouring front.
  double probe_event_time(int* hit) const {
    *hit = kNone;
    if (!probe.active || probe.riding) return std::numeric_limits<double>::infinity();
    const double v = probe_speed();
    const double xp = probe_x(now);
    double best = std::numeric_limits<double>::infinity();
    if (probe.left != kNone && fronts[probe.left].speed > v) {
      const double gap = std::max(xp - fronts[probe.left].at(now), 0.0);
      best = now + gap / (fronts[probe.left].speed - v);
      *hit = probe.left;
    }
    if (probe.right != kNone && v > fronts[probe.right].speed) {
      const double gap = std::max(fronts[probe.right].at(now) - xp, 0.0);
      const double t = now + gap / (v - fronts[probe.right].speed);
      if (t < best) {
        best = t;
        *hit = probe.right;
      }
    }
    return best;
  }

  void probe_meets(int id) {
    const double x = fronts[id].at(now);
    if (fronts[id].shock()) {
      ride(id);
    } else if (id == probe.left) {
      set_free(x, fronts[id].left, fronts[id].prev, id);
    } else {
      set_free(x, fronts[id].right, id, fronts[id].next);
    }
  }

  // Places the probe at a point where fronts [first..] of a new fan start (or
  // where a fan vanished): ride a shock if there is one, otherwise stay on the
  // right of the fronts at that point (maximal convention).
  void place_at(double x, const std::vector<int>& at_point, int pred, int succ,
                std::size_t right_value) {
    for (auto it = at_point.rbegin(); it != at_point.rend(); ++it) {
      if (fronts[*it].shock()) {
        ride(*it);
        return;
      }
    }
    set_free(x, right_value, at_point.empty() ? pred : at_point.back(), succ);
  }

  void update_probe(const std::vector<int>& group, const std::vector<int>& created, int pred,
                    int succ, double xc) {
    if (!probe.active) return;
    auto in_group = [&](int id) {
      return id != kNone && std::find(group.begin(), group.end(), id) != group.end();
    };
    const std::size_t right_value = fronts[group.back()].right;
    if (probe.riding) {
      if (in_group(probe.front)) place_at(xc, created, pred, succ, right_value);
      return;
    }
    if (!in_group(probe.left) && !in_group(probe.right)) return;
    const double xp = probe_x(now);
    const double tol = coincide_tol(xc, now);
    if (std::abs(xp - xc) <= tol) {
      place_at(xc, created, pred, succ, right_value);
    } else if (xp < xc) {
      probe.right = created.empty() ? succ : created.front();
      probe.x_ref = xp;
      probe.t_ref = now;
    } else {
      probe.left = created.empty() ? pred : created.back();
      probe.x_ref = xp;
      probe.t_ref = now;
    }
  }

  // ---- collisions --------------------------------------------------------

  void collide(const Event& e) {
    ++events;
    now = std::max(now, e.t);
    const double xc = fronts[e.a].at(now);
    const double tol = coincide_tol(xc, now);

    // Collect the maximal run of adjacent fronts meeting at xc. Offsets convert
    // coordinates across the periodic seam into e.a's frame.
    std::vector<int> group{e.a};
    bool wraps_to_head = false;  // the head lies right of e.a within the group
    {
      int c = e.a;
      double offset = 0.0;
      while (group.size() < alive) {
        const int n = fronts[c].next;
        if (n == kNone) break;
        const double shift = next_shift(n);
        if (std::abs(fronts[n].at(now) + offset + shift - xc) > tol) break;
        if (shift != 0.0) wraps_to_head = true;
        offset += shift;
        group.push_back(n);
        c = n;
      }
    }
    {
      int c = e.a;
      double offset = 0.0;
      while (group.size() < alive) {
        const int pv = fronts[c].prev;
        if (pv == kNone) break;
        const double shift = next_shift(c);
        if (std::abs(fronts[pv].at(now) + offset - shift - xc) > tol) break;
        offset -= shift;
        group.insert(group.begin(), pv);
        c = pv;
      }
    }
    const int first = group.front();
    const int last = group.back();
    const int pred = (fronts[first].prev == last) ? kNone : fronts[first].prev;
    const int succ = (fronts[last].next == first) ? kNone : fronts[last].next;
    const bool had_head = std::find(group.begin(), group.end(), head) != group.end();
    const std::size_t l = fronts[first].left;
    const std::size_t r = fronts[last].right;
    for (int id : group) {
      fronts[id].alive = false;
      --alive;
    }

    std::vector<int> created;
    if (l != r) {
      for (const WaveIndices& w : fan_indices(l, r)) {
        created.push_back(add_front(xc, now, w.left, w.right));
      }
    }
    // Relink pred -> created... -> succ. On the periodic ring pred and succ
    // exist unless the group took everything but one front.
    std::vector<int> chain;
    if (pred != kNone) chain.push_back(pred);
    chain.insert(chain.end(), created.begin(), created.end());
    if (succ != kNone) chain.push_back(succ);
    if (periodic() && pred == kNone && succ == kNone && !created.empty()) {
      // Only possible when the whole ring collided; keep it closed.
      chain.push_back(created.front());
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      fronts[chain[i]].next = chain[i + 1];
      fronts[chain[i + 1]].prev = chain[i];
    }
    if (!periodic()) {
      if (!created.empty()) {
        fronts[created.front()].prev = pred;
        fronts[created.back()].next = succ;
      } else {
        if (pred != kNone) fronts[pred].next = succ;
        if (succ != kNone) fronts[succ].prev = pred;
      }
    }
    if (had_head) {
      if (periodic()) {
        // New fronts sit in e.a's frame: head frame unless the group crossed
        // the seam to reach the head.
        head = (!created.empty() && !wraps_to_head) ? created.front() : succ;
        if (head == kNone) head = created.empty() ? pred : created.front();
      } else {
        head = created.empty() ? succ : created.front();
      }
    }
    if (alive == 0) {
      head = kNone;
      constant_value = l;
    }
    update_probe(group, created, pred, succ, xc);

    if (pred != kNone) schedule(pred);
    for (int id : created) schedule(id);
  }

  void advance(double t) {
    if (t < now) throw PreconditionError("evolve: target time precedes the state time");
    for (;;) {
      while (!queue.empty() && !valid(queue.top())) queue.pop();
      int hit = kNone;
      const double tp = probe_event_time(&hit);
      const double tc = queue.empty() ? std::numeric_limits<double>::infinity() : queue.top().t;
      if (std::min(tp, tc) > t) break;
      if (tp <= tc) {
        now = std::max(now, tp);
        probe_meets(hit);
        continue;
      }
      const Event e = queue.top();
      queue.pop();
      collide(e);
    }
    now = t;
  }

  PiecewiseConstantState snapshot() const {
    PiecewiseConstantState s;
    s.time = now;
    if (periodic()) s.period_hint = period;
    if (head == kNone) {
      s.values.push_back(poly->u(constant_value));
      return s;
    }
    // Collect (position, right value) pairs, merging co-located fronts.
    std::vector<std::pair<double, std::size_t>> jumps;
    std::size_t left_value = fronts[head].left;
    int id = head;
    do {
      const double x = fronts[id].at(now);
      if (!jumps.empty() && x <= jumps.back().first) {
        jumps.back().second = fronts[id].right;
      } else {
        jumps.emplace_back(x, fronts[id].right);
      }
      id = fronts[id].next;
    } while (id != kNone && id != head);
    s.values.push_back(poly->u(left_value));
    std::size_t prev = left_value;
    for (const auto& [x, v] : jumps) {
      if (v == prev) continue;
      if (!s.breakpoints.empty() && s.breakpoints.back() == x) {
        s.values.back() = poly->u(v);
      } else {
        s.breakpoints.push_back(x);
        s.values.push_back(poly->u(v));
      }
      prev = v;
    }
    // Drop breakpoints whose neighbouring values coincide after merging.
    PiecewiseConstantState out;
    out.time = s.time;
    out.period_hint = s.period_hint;
    out.values.push_back(s.values.front());
    for (std::size_t i = 0; i < s.breakpoints.size(); ++i) {
      if (s.values[i + 1] == out.values.back()) continue;
      out.breakpoints.push_back(s.breakpoints[i]);
      out.values.push_back(s.values[i + 1]);
    }
    if (out.breakpoints.empty()) out.values.resize(1);
    return out;
  }

  void attach(double x) {
    if (periodic()) {
      throw PreconditionError("front tracking: the probe needs a state on the line");
    }
    probe.active = true;
    const double tol = coincide_tol(x, now);
    int left = kNone;
    int id = head;
    std::vector<int> at_point;
    while (id != kNone) {
      const double xf = fronts[id].at(now);
      if (xf < x - tol) {
        left = id;
      } else if (xf <= x + tol) {
        at_point.push_back(id);
      } else {
        break;
      }
      id = fronts[id].next;
    }
    std::size_t value;
    if (!at_point.empty()) {
      value = fronts[at_point.back()].right;
    } else if (id != kNone) {
      value = fronts[id].left;
    } else if (left != kNone) {
      value = fronts[left].right;
    } else {
      value = constant_value;
    }
    place_at(x, at_point, left, id, value);
  }
};

FrontTracker::FrontTracker(const PiecewiseConstantState& initial, const FluxPolygon& poly)
    : impl_(std::make_unique<Impl>()) {
  impl_->poly = &poly;
  impl_->build(initial);
}

FrontTracker::~FrontTracker() = default;
FrontTracker::FrontTracker(FrontTracker&&) noexcept = default;
FrontTracker& FrontTracker::operator=(FrontTracker&&) noexcept = default;

double FrontTracker::time() const { return impl_->now; }
void FrontTracker::advance(double t) { impl_->advance(t); }
PiecewiseConstantState FrontTracker::state() const { return impl_->snapshot(); }
std::size_t FrontTracker::front_count() const { return impl_->alive; }
std::size_t FrontTracker::events_processed() const { return impl_->events; }
void FrontTracker::attach_probe(double x) { impl_->attach(x); }

double FrontTracker::probe_position() const {
  if (!impl_->probe.active) throw PreconditionError("front tracking: no probe attached");
  return impl_->probe_x(impl_->now);
}

PiecewiseConstantState evolve(const PiecewiseConstantState& state, const FluxPolygon& poly,
                              double t_end) {
  if (t_end < state.time) {
    throw PreconditionError("evolve: target time precedes the state time");
  }
  FrontTracker tracker(state, poly);
  tracker.advance(t_end);
  return tracker.state();
}

// ---------------------------------------------------------------------------
// Queries on states

namespace {

double reduce_into_period(const PiecewiseConstantState& s, double x) {
  if (!s.periodic() || s.breakpoints.empty()) return x;
  const double p = *s.period_hint;
  const double b0 = s.breakpoints.front();
  double r = std::fmod(x - b0, p);
  if (r < 0.0) r += p;
  if (r >= p) r = 0.0;
  return b0 + r;
}

}  // namespace

double sample(const PiecewiseConstantState& state, double x) {
  const double y = reduce_into_period(state, x);
  const auto it = std::upper_bound(state.breakpoints.begin(), state.breakpoints.end(), y);
  return state.values[static_cast<std::size_t>(it - state.breakpoints.begin())];
}

double sample_left(const PiecewiseConstantState& state, double x) {
  double y = reduce_into_period(state, x);
  if (state.periodic() && !state.breakpoints.empty() && y == state.breakpoints.front()) {
    return state.values.back();
  }
  const auto it = std::lower_bound(state.breakpoints.begin(), state.breakpoints.end(), y);
  return state.values[static_cast<std::size_t>(it - state.breakpoints.begin())];
}

double period_mean(const PiecewiseConstantState& state) {
  if (!state.periodic()) throw PreconditionError("period_mean: state is not periodic");
  const double p = *state.period_hint;
  const auto& b = state.breakpoints;
  if (b.empty()) return state.values.front();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) sum += state.values[i + 1] * (b[i + 1] - b[i]);
  sum += state.values.back() * (b.front() + p - b.back());
  return sum / p;
}

double period_total_variation(const PiecewiseConstantState& state) {
  if (!state.periodic()) {
    throw PreconditionError("period_total_variation: state is not periodic");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < state.values.size(); ++i) {
    tv += std::abs(state.values[i + 1] - state.values[i]);
  }
  return tv;
}

namespace {

// \int_{x0}^x state for a fixed reference x0 (the first breakpoint, or 0).
double antiderivative(const PiecewiseConstantState& s, double x) {
  const auto& b = s.breakpoints;
  if (b.empty()) return s.values.front() * x;
  double whole = 0.0;
  if (s.periodic()) {
    const double p = *s.period_hint;
    const double k = std::floor((x - b.front()) / p);
    whole = k * p * period_mean(s);
    x -= k * p;
    if (x >= b.front() + p) x = b.front();
  }
  // Line: integrate from b[0]; values[0] extends to the left of it.
  if (x <= b.front()) return whole + s.values.front() * (x - b.front());
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double end = (i + 1 < b.size()) ? b[i + 1] : std::numeric_limits<double>::infinity();
    if (x <= end) return whole + acc + s.values[i + 1] * (x - b[i]);
    acc += s.values[i + 1] * (end - b[i]);
  }
  return whole + acc;
}

}  // namespace

double integrate(const PiecewiseConstantState& state, double a, double b) {
  return antiderivative(state, b) - antiderivative(state, a);
}

double l1_distance(const PiecewiseConstantState& state, double a, double b,
                   const std::function<double(double)>& value,
                   const std::function<double(double, double)>& integral, int samples) {
  if (!(a < b)) return 0.0;
  samples = std::max(samples, 1);
  // Piece boundaries inside (a, b), periodic states unrolled.
  std::vector<double> cuts{a};
  if (state.periodic() && !state.breakpoints.empty()) {
    const double p = *state.period_hint;
    const double b0 = state.breakpoints.front();
    const auto k0 = static_cast<long long>(std::floor((a - b0) / p)) - 1;
    const auto k1 = static_cast<long long>(std::floor((b - b0) / p)) + 1;
    for (long long k = k0; k <= k1; ++k) {
      for (double x : state.breakpoints) {
        const double y = x + static_cast<double>(k) * p;
        if (y > a && y < b) cuts.push_back(y);
      }
    }
    std::sort(cuts.begin(), cuts.end());
  } else {
    for (double x : state.breakpoints) {
      if (x > a && x < b) cuts.push_back(x);
    }
  }
  cuts.push_back(b);

  auto abs_part = [&](double lo, double hi, double c) {
    return std::abs(integral(lo, hi) - c * (hi - lo));
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!(lo < hi)) continue;
    const double c = sample(state, 0.5 * (lo + hi));
    const double h = (hi - lo) / samples;
    double x0 = lo;
    double s0 = value(x0) - c;
    for (int k = 1; k <= samples; ++k) {
      const double x1 = (k == samples) ? hi : lo + k * h;
      // Sample just inside the right end so that right-continuous jumps at the
      // cut itself are not attributed to this piece.
      const double s1 = value(k == samples ? hi - 1e-3 * h : x1) - c;
      if ((s0 < 0.0) != (s1 < 0.0) && s0 != 0.0 && s1 != 0.0) {
        double l = x0;
        double r = x1;
        for (int it = 0; it < 60 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
          const double m = 0.5 * (l + r);
          if (((value(m) - c) < 0.0) == (s0 < 0.0)) {
            l = m;
          } else {
            r = m;
          }
        }
        total += abs_part(x0, r, c) + abs_part(r, x1, c);
      } else {
        total += abs_part(x0, x1, c);
      }
      x0 = x1;
      s0 = s1;
    }
  }
  return total;
}

ShockPath shock_path(const RiemannPerturbedIC& ic, const FluxPolygon& poly,
                     std::span<const double> t_samples) {
  if (!(ic.ul() > ic.ur())) throw PreconditionError("shock_path: requires ul > ur");
  ShockPath path;
  path.source = PathSource::fronttrack;
  if (t_samples.empty()) return path;
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > 0.0) || (i > 0 && !(t_samples[i] > t_samples[i - 1]))) {
      throw PreconditionError("shock_path: sample times must be positive and increasing");
    }
  }
  const Interval window = line_window(ic, poly, t_samples.back());
  FrontTracker tracker(discretize(ic, poly, window), poly);
  tracker.attach_probe(0.0);
  for (double t : t_samples) {
    tracker.advance(t);
    path.times.push_back(t);
    path.positions.push_back(tracker.probe_position());
  }
  return path;
}

void write_snapshot(std::ostream& out, const PiecewiseConstantState& state, double delta) {
  out.precision(17);
  out << "# time " << state.time << " delta " << delta << " period ";
  if (state.periodic()) {
    out << *state.period_hint;
  } else {
    out << "none";
  }
  out << '\n';
  if (state.periodic() && !state.breakpoints.empty()) {
    for (std::size_t i = 0; i < state.breakpoints.size(); ++i) {
      out << state.breakpoints[i] << ' ' << state.values[i + 1] << '\n';
    }
    return;
  }
  out << "-inf " << state.values.front() << '\n';
  for (std::size_t i = 0; i < state.breakpoints.size(); ++i) {
    out << state.breakpoints[i] << ' ' << state.values[i + 1] << '\n';
  }
}

}  // namespace pwave
