#ifndef PWAVE_FRONTTRACK_HPP_
#define PWAVE_FRONTTRACK_HPP_

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pwave/flux.hpp"
#include "pwave/profile.hpp"

namespace pwave {

/// Piecewise-linear interpolant of a convex flux on the grid lo + k delta
/// (the last node is hi, so the final interval may be shorter).
class FluxPolygon {
 public:
  FluxPolygon(ConvexFlux flux, double delta, Interval u_range);

  double delta() const { return delta_; }
  std::size_t size() const { return u_.size(); }
  double u(std::size_t i) const { return u_[i]; }
  double f(std::size_t i) const { return f_[i]; }
  std::span<const double> nodes() const { return u_; }
  std::span<const double> values() const { return f_; }
  const ConvexFlux& flux() const { return flux_; }
  Interval range() const { return {u_.front(), u_.back()}; }

  /// Chord slope between nodes i != j.
  double chord(std::size_t i, std::size_t j) const;
  /// Index of the node nearest to u (clamped to the range).
  std::size_t nearest(double u) const;
  /// Index of the node equal to u within 1e-9 delta; throws PreconditionError otherwise.
  std::size_t index_of(double u) const;
  /// Largest |f'| over the range.
  double max_speed() const;

 private:
  ConvexFlux flux_;
  double delta_;
  std::vector<double> u_;
  std::vector<double> f_;
};

FluxPolygon approximate_flux(const ConvexFlux& flux, double delta, Interval u_range);

/// A discontinuity moving with the chord speed of the polygon.
struct Front {
  double position = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
  double speed = 0.0;
};

/// Entropy solution of the Riemann problem for the polygonal flux, all fronts
/// at position 0: a single shock when ul > ur, otherwise one front per grid
/// interval with increasing speeds. Empty when ul == ur.
std::vector<Front> riemann_fan(const FluxPolygon& poly, double ul, double ur);

/// Piecewise-constant function: values[0] on (-inf, breakpoints[0]),
/// values[i] on [breakpoints[i-1], breakpoints[i]), values.back() after the last
/// breakpoint. With a period hint the state is periodic: breakpoints cover one
/// period [breakpoints[0], breakpoints[0] + p) and values.front() == values.back().
struct PiecewiseConstantState {
  double time = 0.0;
  std::vector<double> breakpoints;
  std::vector<double> values;
  std::optional<double> period_hint;

  bool periodic() const { return period_hint.has_value(); }
};

/// Snaps Riemann-perturbed data to polygon nodes on `window`, extended by the
/// constant edge values outside of it. Ramps are resolved into steps of one node.
PiecewiseConstantState discretize(const RiemannPerturbedIC& ic, const FluxPolygon& poly,
                                  Interval window);
/// Snaps periodic data ubar + w0 (any mean) to polygon nodes; one period from 0.
PiecewiseConstantState discretize_periodic(const PeriodicProfile& profile, double ubar,
                                           const FluxPolygon& poly);

/// Polygon covering the data range of `ic`.
FluxPolygon polygon_for(const RiemannPerturbedIC& ic, double delta);
/// Polygon covering the data range of ubar + w0.
FluxPolygon polygon_for(const PeriodicProfile& profile, double ubar, const ConvexFlux& flux,
                        double delta);
/// Window [-L, L], L a whole number of periods, holding the domain of dependence of
/// [s t_end - p, s t_end + p] up to t_end with one extra period of margin.
Interval line_window(const RiemannPerturbedIC& ic, const FluxPolygon& poly, double t_end);

/// Event-driven exact evolution of a piecewise-constant state under the polygonal
/// flux, with an optional probe following the maximal forward characteristic.
class FrontTracker {
 public:
  FrontTracker(const PiecewiseConstantState& initial, const FluxPolygon& poly);
  ~FrontTracker();
  FrontTracker(FrontTracker&&) noexcept;
  FrontTracker& operator=(FrontTracker&&) noexcept;

  double time() const;
  /// Processes every collision up to and including time t.
  void advance(double t);
  PiecewiseConstantState state() const;
  std::size_t front_count() const;
  std::size_t events_processed() const;

  /// Starts the probe at x at the current time.
  void attach_probe(double x);
  double probe_position() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Evolves a copy of `state` to t_end; throws PreconditionError if t_end < state.time.
PiecewiseConstantState evolve(const PiecewiseConstantState& state, const FluxPolygon& poly,
                              double t_end);

/// Right-continuous evaluation; periodic states are reduced into their period.
double sample(const PiecewiseConstantState& state, double x);
/// Left limit at x.
double sample_left(const PiecewiseConstantState& state, double x);

/// Mean over one period and total variation over one period of a periodic state.
double period_mean(const PiecewiseConstantState& state);
double period_total_variation(const PiecewiseConstantState& state);

/// \int_a^b state dx, exact; periodic states are unrolled.
double integrate(const PiecewiseConstantState& state, double a, double b);

/// \int_a^b |state - g| dx with g given by its exact integral over any interval
/// (`integral(a, b)`) and pointwise values `value(x)`. Sign changes of state - g
/// are located by bisection on `samples` subintervals per constant piece.
double l1_distance(const PiecewiseConstantState& state, double a, double b,
                   const std::function<double(double)>& value,
                   const std::function<double(double, double)>& integral, int samples = 8);

enum class PathSource { fronttrack, oracle };

struct ShockPath {
  std::vector<double> times;
  std::vector<double> positions;
  PathSource source = PathSource::fronttrack;
};

/// Forward generalized characteristic from the origin of the front-tracking
/// solution, sampled at increasing t_samples > 0.
ShockPath shock_path(const RiemannPerturbedIC& ic, const FluxPolygon& poly,
                     std::span<const double> t_samples);

/// Text dump: a header line "# time <t> delta <d> period <p|none>", then
/// "x_left value" per piece ("-inf value" for the leftmost piece).
void write_snapshot(std::ostream& out, const PiecewiseConstantState& state, double delta);

/// First-order Godunov scheme with the exact convex Riemann flux on a grid
/// covering `window` padded by max|f'| t_end. Returns cell centres and averages
/// inside `window`.
std::vector<std::pair<double, double>> godunov_reference(const RiemannPerturbedIC& ic,
                                                         const ConvexFlux& flux, double dx,
                                                         double cfl, double t_end,
                                                         Interval window);

}  // namespace pwave

#endif  // PWAVE_FRONTTRACK_HPP_
