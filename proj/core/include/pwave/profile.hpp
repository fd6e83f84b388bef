#ifndef PWAVE_PROFILE_HPP_
#define PWAVE_PROFILE_HPP_

#include <span>
#include <utility>
#include <vector>

#include "pwave/flux.hpp"

namespace pwave {

enum class PieceKind { constant, linear };

/// One piece of a periodic profile as written in a config file:
/// a width and either a constant value or a linear ramp left -> right.
struct PieceSpec {
  double width = 0.0;
  double left = 0.0;
  double right = 0.0;
  PieceKind kind = PieceKind::constant;

  static PieceSpec constant(double width, double value) {
    return {width, value, value, PieceKind::constant};
  }
  static PieceSpec ramp(double width, double left, double right) {
    return {width, left, right, PieceKind::linear};
  }
};

/// A placed piece: w(start + s) = left + slope * s for s in [0, width).
struct ProfilePiece {
  double start = 0.0;
  double width = 0.0;
  double left = 0.0;
  double right = 0.0;
  PieceKind kind = PieceKind::constant;

  double slope() const { return kind == PieceKind::constant ? 0.0 : (right - left) / width; }
  double value_at(double s) const { return left + slope() * s; }
  /// \int_0^s w(start + r) dr
  double integral_to(double s) const { return left * s + 0.5 * slope() * s * s; }
};

/// Periodic perturbation w0 on [0, p), piecewise constant or linear.
///
/// Pieces are right-continuous: w0(x) at a breakpoint is the value of the piece
/// starting there. lower_bound()/upper_bound() are the exact piecewise extrema
/// widened by 1e-12, so that alpha < w0 < beta holds strictly.
class PeriodicProfile {
 public:
  PeriodicProfile() : PeriodicProfile(std::vector<PieceSpec>{PieceSpec::constant(1.0, 0.0)}) {}
  explicit PeriodicProfile(std::span<const PieceSpec> specs);
  explicit PeriodicProfile(const std::vector<PieceSpec>& specs)
      : PeriodicProfile(std::span<const PieceSpec>(specs)) {}

  double period() const { return period_; }
  double mean() const { return mean_; }
  double lower_bound() const { return alpha_; }
  double upper_bound() const { return beta_; }
  /// Exact min/max of w0 over a period (no widening).
  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }
  std::span<const ProfilePiece> pieces() const { return pieces_; }
  std::vector<PieceSpec> specs() const;

  /// w0(x), right-continuous.
  double operator()(double x) const;
  /// Left limit w0(x-).
  double left_limit(double x) const;
  /// \int_0^x w0, for any mean.
  double integral(double x) const;
  /// \int_0^x w0 with the whole-period contributions dropped, i.e. exactly
  /// p-periodic. Equals integral(x) when the mean is zero.
  double periodic_integral(double x) const;
  /// \int_0^{start of piece i} w0.
  double integral_at_piece(std::size_t i) const { return prim_at_start_[i]; }
  /// Min and max of periodic_integral over one period.
  std::pair<double, double> primitive_range() const;

  /// w0 + c.
  PeriodicProfile shifted(double c) const;
  bool has_zero_mean(double tol = 1e-12) const;

 private:
  /// Piece index and local offset for x reduced into [0, p).
  std::pair<std::size_t, double> locate(double x) const;
  double reduce(double x, long long* whole_periods) const;

  double period_ = 1.0;
  std::vector<ProfilePiece> pieces_;
  std::vector<double> prim_at_start_;
  double total_ = 0.0;
  double mean_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double min_value_ = 0.0;
  double max_value_ = 0.0;
};

/// Square wave of the given amplitude: +amplitude on the first half period and
/// -amplitude on the second, or the reverse when `positive_first` is false.
PeriodicProfile square_wave(double amplitude, double period, bool positive_first = true);

/// Returns (w0 - mean, mean).
std::pair<PeriodicProfile, double> shift_to_zero_mean(const PeriodicProfile& profile);

/// W(x) = \int_0^x w0; requires a zero-mean profile.
double primitive(const PeriodicProfile& profile, double x);

/// Leftmost a in [0, p) minimizing W over [0, p]; requires zero mean.
double argmin_primitive(const PeriodicProfile& profile);

/// Divide line x = anchor + slope * t with anchor = a + index * p.
struct DivideLine {
  double anchor = 0.0;
  double slope = 0.0;
  int index = 0;

  double at(double t) const { return anchor + slope * t; }
};

/// Divide lines of the periodic solution with data ubar + w0, for index in [n_lo, n_hi].
std::vector<DivideLine> divides(const PeriodicProfile& profile, const ConvexFlux& flux, double ubar,
                                int n_lo, int n_hi);

/// Two-value periodic data: m1 + ubar on (0, m2 p / (m1 + m2)), -m2 + ubar after.
struct TwoConstantProfile {
  double m1 = 1.0;
  double m2 = 1.0;
  double period = 1.0;
  double ubar = 0.0;

  double split() const { return m2 * period / (m1 + m2); }
  /// The full data ubar + w0 as a profile (mean ubar).
  PeriodicProfile profile() const;
  /// Time after which the solution is an exact sawtooth.
  double sawtooth_time(const ConvexFlux& flux) const;
};

/// Riemann data perturbed by a zero-mean periodic profile:
/// u0 = ul + w0 for x < 0 and ur + w0 for x >= 0.
class RiemannPerturbedIC {
 public:
  RiemannPerturbedIC(ConvexFlux flux, double ul, double ur, PeriodicProfile perturbation);

  double ul() const { return ul_; }
  double ur() const { return ur_; }
  const PeriodicProfile& perturbation() const { return perturbation_; }
  const ConvexFlux& flux() const { return flux_; }
  /// Rankine-Hugoniot speed of the background shock (f'(ul) when ul == ur).
  double shock_speed() const { return shock_speed_; }

  double operator()(double x) const;
  /// \int_0^x u0.
  double primitive(double x) const;

 private:
  ConvexFlux flux_;
  double ul_;
  double ur_;
  PeriodicProfile perturbation_;
  double shock_speed_;
};

/// Builds Riemann data from a profile of any mean by folding the mean into ul, ur.
RiemannPerturbedIC make_riemann_ic(const ConvexFlux& flux, double ul, double ur,
                                   const PeriodicProfile& profile);

}  // namespace pwave

#endif  // PWAVE_PROFILE_HPP_
