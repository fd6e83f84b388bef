#ifndef PWAVE_ORACLE_HPP_
#define PWAVE_ORACLE_HPP_

#include <functional>
#include <vector>

#include "pwave/profile.hpp"

namespace pwave {

/// One-sided limit selector: u(x-, t) or u(x+, t).
enum class Limit { left, right };

/// Exact Burgers entropy solutions from Hopf potentials
///   F(t,x,y) = (x-y)^2 / (2t) + \int_0^y u0.
/// F_l uses ul + w0 for every y, F_r uses ur + w0, and the joined potential
/// uses F_l for y <= 0 and F_r for y >= 0.
enum class PotentialSide { left, right, joined };
enum class Constraint { nonpositive, nonnegative, all };

class HopfPotential {
 public:
  HopfPotential(RiemannPerturbedIC ic, PotentialSide side);

  const RiemannPerturbedIC& ic() const { return ic_; }
  PotentialSide side() const { return side_; }

 private:
  RiemannPerturbedIC ic_;
  PotentialSide side_;
};

/// Global minimum of a potential, with its leftmost and rightmost minimizers.
struct ExtremalMinimizers {
  double y_star_low = 0.0;
  double y_star_high = 0.0;
  double min_value = 0.0;
};

/// Endpoints X-(t) <= X+(t) of the shock set at time t.
struct ShockInterval {
  double t = 0.0;
  double x_low = 0.0;
  double x_high = 0.0;
  bool merged = false;

  double mid() const { return 0.5 * (x_low + x_high); }
};

/// Potential value; exact piecewise-quadratic evaluation.
double potential(const HopfPotential& hp, double t, double x, double y);

/// Global minimum over the constrained set. Minimizers within 1e-10 of the
/// minimum value count as ties for the leftmost/rightmost choice.
ExtremalMinimizers extremal_minimizers(const HopfPotential& hp, double t, double x,
                                       Constraint constraint = Constraint::all);

/// u(x-, t) = (x - Y_*)/t or u(x+, t) = (x - Y^*)/t of the joined potential.
double u_exact(const RiemannPerturbedIC& ic, double x, double t, Limit side);

/// m+(t,x) - m-(t,x): constrained minima over y >= 0 (F_r) minus over y <= 0 (F_l).
/// Nonincreasing in x; zero exactly on the shock set.
double minima_gap(const RiemannPerturbedIC& ic, double t, double x);

/// Shock set by bisection on the sign of minima_gap inside [(s+alpha)t, (s+beta)t].
ShockInterval shock_interval(const RiemannPerturbedIC& ic, double t);

/// Time after which the shock set is a single point: the smallest sampled time
/// such that every later sample is merged, refined by bisection against the
/// previous (unmerged) sample. Returns 0 when every sample is merged.
double detect_merge_time(const RiemannPerturbedIC& ic, const std::vector<double>& t_samples);

/// Periodic Burgers solution with data ubar + w0, via u(x,t) = w(x - ubar t, t) + ubar
/// where w solves the zero-mean problem. A nonzero profile mean is folded into ubar.
double periodic_solution(const PeriodicProfile& profile, double ubar, double x, double t,
                         Limit side);

/// Extremal minimizers of the pure periodic potential (x-y)^2/2t + ubar y + W(y).
ExtremalMinimizers periodic_minimizers(const PeriodicProfile& profile, double ubar, double t,
                                       double x);

/// Viscous (Hopf-Cole) solution of u_t + (u^2/2)_x = eps u_xx with the same data.
double u_viscous(const RiemannPerturbedIC& ic, double x, double t, double eps);

/// u_viscous(...) - reference, computed without the cancellation of a subtraction,
/// so that exponentially small deviations stay resolved.
double u_viscous_deviation(const RiemannPerturbedIC& ic, double x, double t, double eps,
                           double reference);

/// x -> minimizers at a fixed time; both components nondecreasing in x.
using MinimizerMap = std::function<ExtremalMinimizers(double)>;

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};

/// sup over x in [a, b] of u(x-) - g(x), where u(x-) = (x - y_star_low(x))/t and
/// g is nondecreasing. Branch and bound on monotone minimizers; exact to `tol`.
SupResult sup_excess(const MinimizerMap& mins, double t, double a, double b,
                     const std::function<double(double)>& g, double tol = 1e-12);

/// sup over x in [a, b] of g(x) - u(x+), with g nondecreasing.
SupResult sup_deficit(const MinimizerMap& mins, double t, double a, double b,
                      const std::function<double(double)>& g, double tol = 1e-12);

/// Extremal forward characteristics from the origin of the solution described by
/// `mins`: sup{x : Y_*(x) <= 0} (maximal) and inf{x : Y^*(x) >= 0} (minimal),
/// searched by bisection inside [lo, hi].
double forward_max_from_origin(const MinimizerMap& mins, double lo, double hi);
double forward_min_from_origin(const MinimizerMap& mins, double lo, double hi);

/// \int_A^B u(x,t) dx = m(B) - m(A) for the joined potential.
double integral_exact(const RiemannPerturbedIC& ic, double t, double a, double b);
/// Same for the periodic solution with data ubar + w0.
double periodic_integral_exact(const PeriodicProfile& profile, double ubar, double t, double a,
                               double b);

}  // namespace pwave

#endif  // PWAVE_ORACLE_HPP_
