#ifndef PWAVE_CHARAX_HPP_
#define PWAVE_CHARAX_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "pwave/fronttrack.hpp"
#include "pwave/oracle.hpp"

namespace pwave {

/// An entropy solution u(x, t) queried through one-sided limits.
class SolutionField {
 public:
  virtual ~SolutionField() = default;

  /// u(x-, t) or u(x+, t); at t == 0 the initial data.
  virtual double value(double x, double t, Limit side) const = 0;
  /// \int_a^b u(x, 0) dx, exact.
  virtual double initial_integral(double a, double b) const = 0;
  virtual const ConvexFlux& flux() const = 0;
  /// One-sided values further apart than this count as a discontinuity.
  virtual double jump_tolerance() const = 0;
  /// Position of the largest discontinuity in [lo, hi] at time t, if any exceeds
  /// the jump tolerance. The default bisects on one-sided values.
  virtual std::optional<double> locate_jump(double lo, double hi, double t) const;
};

/// u = c.
class ConstantField final : public SolutionField {
 public:
  ConstantField(ConvexFlux flux, double c) : flux_(std::move(flux)), c_(c) {}
  double value(double, double, Limit) const override { return c_; }
  double initial_integral(double a, double b) const override { return c_ * (b - a); }
  const ConvexFlux& flux() const override { return flux_; }
  double jump_tolerance() const override { return 1e-9; }
  std::optional<double> locate_jump(double, double, double) const override { return std::nullopt; }

 private:
  ConvexFlux flux_;
  double c_;
};

/// Exact Burgers solution of Riemann-perturbed data.
class RiemannOracleField final : public SolutionField {
 public:
  explicit RiemannOracleField(RiemannPerturbedIC ic) : ic_(std::move(ic)) {}
  double value(double x, double t, Limit side) const override;
  double initial_integral(double a, double b) const override;
  const ConvexFlux& flux() const override { return ic_.flux(); }
  double jump_tolerance() const override { return 1e-9; }
  const RiemannPerturbedIC& ic() const { return ic_; }

 private:
  RiemannPerturbedIC ic_;
};

/// Exact periodic Burgers solution with data ubar + w0.
class PeriodicOracleField final : public SolutionField {
 public:
  PeriodicOracleField(PeriodicProfile profile, double ubar);
  double value(double x, double t, Limit side) const override;
  double initial_integral(double a, double b) const override;
  const ConvexFlux& flux() const override { return flux_; }
  double jump_tolerance() const override { return 1e-9; }

 private:
  PeriodicProfile profile_;
  double ubar_;
  ConvexFlux flux_;
};

/// Unperturbed Riemann wave: the shock u^S or the centred rarefaction u^R.
class ReferenceWave final : public SolutionField {
 public:
  enum class Kind { shock, rarefaction };
  ReferenceWave(ConvexFlux flux, double ul, double ur);

  Kind kind() const { return kind_; }
  double ul() const { return ul_; }
  double ur() const { return ur_; }
  /// Shock speed (shock case only; f'(ul) for equal states).
  double speed() const { return s_; }

  double value(double x, double t, Limit side) const override;
  double initial_integral(double a, double b) const override;
  const ConvexFlux& flux() const override { return flux_; }
  double jump_tolerance() const override { return 1e-9; }

 private:
  ConvexFlux flux_;
  double ul_;
  double ur_;
  Kind kind_;
  double s_;
};

/// Front-tracking solution, evolved lazily to the queried time. Queries at
/// decreasing times restart the evolution. Not safe for concurrent use.
class FrontTrackField final : public SolutionField {
 public:
  FrontTrackField(PiecewiseConstantState initial, FluxPolygon poly);
  ~FrontTrackField() override;

  double value(double x, double t, Limit side) const override;
  double initial_integral(double a, double b) const override;
  const ConvexFlux& flux() const override { return poly_.flux(); }
  double jump_tolerance() const override { return 0.5 * poly_.delta(); }
  std::optional<double> locate_jump(double lo, double hi, double t) const override;
  const FluxPolygon& polygon() const { return poly_; }

 private:
  const PiecewiseConstantState& state_at(double t) const;

  PiecewiseConstantState initial_;
  FluxPolygon poly_;
  mutable std::unique_ptr<FrontTracker> tracker_;
  mutable PiecewiseConstantState cached_;
  mutable bool cache_valid_ = false;
};

enum class CharKind { minimal, maximal };

/// Straight backward characteristic through (anchor_x, anchor_t).
struct CharLine {
  double anchor_x = 0.0;
  double anchor_t = 0.0;
  double slope = 0.0;
  /// The one-sided value carried along the line.
  double value = 0.0;
  CharKind kind = CharKind::minimal;

  double at(double t) const { return anchor_x + slope * (t - anchor_t); }
  double foot() const { return at(0.0); }
};

/// Slope f'(u(x-)) (minimal) or f'(u(x+)) (maximal) through (x, t).
CharLine backward_extremal(const SolutionField& u, double x, double t, CharKind kind);

/// Largest |u(line(t), t) - line.value| over n interior sample times.
double backward_deviation(const SolutionField& u, const CharLine& line, int n = 64);

struct Polyline {
  std::vector<double> times;
  std::vector<double> positions;

  /// Linear interpolation; throws PreconditionError outside the time range.
  double at(double t) const;
};

struct ForwardOptions {
  double dt_max = 0.01;
  /// At a rarefaction jump (u(x-) < u(x+)) any speed in [f'(u(x-)), f'(u(x+))]
  /// is admissible. Unset: the maximal choice f'(u(x+)); set: this speed,
  /// clamped into the fan (e.g. f'(ubar) to follow a divide).
  std::optional<double> fan_speed;
};

/// Forward generalized characteristic from (x0, 0): classical speed f'(u) where
/// the solution is continuous, Rankine-Hugoniot speed on a discontinuity, which
/// is re-located after every step so that the path rides it.
Polyline forward_characteristic(const SolutionField& u, double x0, double t_end,
                                const ForwardOptions& options = {});

struct TriangleReport {
  double lhs_left_term = 0.0;
  double lhs_right_term = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double b = 0.0;
  double b_tilde = 0.0;
  double foot = 0.0;
  double foot_tilde = 0.0;
};

/// Both sides of the triangle identity for the backward characteristics of u
/// (kind `kind`) and u~ (kind `kind_tilde`) from (x, t). Requires the foot of u~
/// strictly left of the foot of u. Time integrals: 256 panels, each adaptive
/// Gauss-Kronrod to 1e-10; the data integral is exact.
TriangleReport triangle_residual(const SolutionField& u, const SolutionField& u_tilde, double x,
                                 double t, CharKind kind, CharKind kind_tilde);

/// Predicted X(T) - sT from the periodic solutions u_l, u_r between the divides
/// Gamma_l^{-N}(T) and Gamma_r^N(T). Burgers uses the exact oracle; other fluxes
/// evolve the periodic solutions by front tracking with step `delta`.
double shock_offset(const PeriodicProfile& profile, const RiemannPerturbedIC& ic, double x_t,
                    double t, int n, double delta = 1e-3);

struct GlueOptions {
  double half_width = 2.0;
  double band = 1e-6;
  int samples = 512;
};

/// max |u - u_l| on [left_end - half_width, left_end - band] and |u - u_r| on
/// [right_start + band, right_start + half_width], sampled uniformly.
double glue_check(const SolutionField& u, const SolutionField& u_l, const SolutionField& u_r,
                  double left_end, double right_start, double t, const GlueOptions& options = {});
/// Shock case: both ends at X(t) interpolated from the path.
double glue_check(const SolutionField& u, const SolutionField& u_l, const SolutionField& u_r,
                  const ShockPath& path, double t, const GlueOptions& options = {});

}  // namespace pwave

#endif  // PWAVE_CHARAX_HPP_
