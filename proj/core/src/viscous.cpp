#include <cmath>
#include <limits>
#include <numbers>

#include "hopf_detail.hpp"
#include "pwave/error.hpp"
#include "pwave/oracle.hpp"
#include "quadrature.hpp"

namespace pwave {

namespace {

// Scaled complementary error function exp(z^2) erfc(z) for z >= 0.
double erfcx(double z) {
  if (z < 26.0) {
    return std::exp(z * z) * std::erfc(z);
  }
  const double inv2 = 1.0 / (z * z);
  const double series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2;
  return series / (z * std::sqrt(std::numbers::pi));
}

// Weighted moments of exp(-(F - F_min)/2 eps), accumulated piece by piece in
// increasing y. `num` collects \int ((x-y)/t - ref) weight and `mass` collects
// \int weight.
//
// On a piece with curvature kappa the first moment contains the boundary term
// (2 eps / kappa t) [E(b) - E(a)]. Neighbouring pieces share endpoints, so these
// terms are grouped per endpoint before multiplying by E: equal curvatures then
// cancel exactly instead of leaving rounding noise that would swamp
// exponentially small deviations.
struct Moments {
  double num = 0.0;
  double mass = 0.0;
  bool has_pending = false;
  double pending_y = 0.0;
  double pending_weight = 0.0;
  double pending_coef = 0.0;

  void flush() {
    if (has_pending) num += pending_coef * pending_weight;
    has_pending = false;
  }
};

void accumulate_part(const PeriodicProfile& w, double ubar, double t, double x, double eps,
                     double ref, double f_min, double lo, double hi, Moments& acc) {
  if (lo > hi) return;
  // Beyond this window the weight is below exp(-745), i.e. it underflows.
  const double level = 2.0 * eps * 745.0;
  const detail::Window win = detail::search_window(w, ubar, t, x, lo, hi, level);
  if (win.empty()) return;

  const double p = w.period();
  const auto pieces = w.pieces();
  const long long k0 = static_cast<long long>(std::floor(win.lo / p));
  const long long k1 = static_cast<long long>(std::floor(win.hi / p));
  for (long long k = k0; k <= k1; ++k) {
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      const ProfilePiece& piece = pieces[j];
      const double base = piece.start + static_cast<double>(k) * p;
      const double ya = std::max(base, win.lo);
      const double yb = std::min(base + piece.width, win.hi);
      if (!(ya < yb)) continue;
      const double c0 = piece.left;
      const double c1 = piece.slope();
      const double wj = w.integral_at_piece(j);
      auto f_of = [&](double y) {
        const double s = y - base;
        const double d = x - y;
        return d * d / (2.0 * t) + ubar * y + wj + c0 * s + 0.5 * c1 * s * s;
      };
      auto weight = [&](double y) { return std::exp(-(f_of(y) - f_min) / (2.0 * eps)); };

      const double kappa = 1.0 / t + c1;
      const double lambda = kappa / (4.0 * eps);
      bool closed_form = kappa > 0.0;
      double v = 0.0;
      double za = 0.0;
      double zb = 0.0;
      if (closed_form) {
        v = (x / t - ubar - c0 + c1 * base) / kappa;
        const double root = std::sqrt(lambda);
        za = root * (ya - v);
        zb = root * (yb - v);
        // Narrow pieces in the scaled variable lose digits in the erfc
        // differences below; integrate them numerically instead.
        closed_form = (zb - za) >= 0.25;
      }
      if (closed_form) {
        const double snap = 1e-13 * std::max(1.0, std::abs(ya));
        const double boundary = (2.0 * eps / kappa) / t;
        double ea;
        double coef_a = -boundary;
        if (acc.has_pending && std::abs(ya - acc.pending_y) <= snap) {
          ea = acc.pending_weight;
          coef_a += acc.pending_coef;
          acc.has_pending = false;
        } else {
          acc.flush();
          ea = weight(ya);
        }
        const double eb = weight(yb);
        const double h = 0.5 * std::sqrt(std::numbers::pi / lambda);
        double i0;
        if (za >= 0.0) {
          i0 = h * (ea * erfcx(za) - eb * erfcx(zb));
        } else if (zb <= 0.0) {
          i0 = h * (eb * erfcx(-zb) - ea * erfcx(-za));
        } else {
          i0 = h * (2.0 * weight(v) - eb * erfcx(zb) - ea * erfcx(-za));
        }
        acc.num += ((x - v) / t - ref) * i0 + coef_a * ea;
        acc.mass += i0;
        acc.has_pending = true;
        acc.pending_y = yb;
        acc.pending_weight = eb;
        acc.pending_coef = boundary;
      } else {
        acc.flush();
        const double tol = 1e-13 * (yb - ya);
        acc.mass += detail::adaptive_gk15(weight, ya, yb, tol).value;
        auto first = [&](double y) { return ((x - y) / t - ref) * weight(y); };
        acc.num += detail::adaptive_gk15(first, ya, yb, tol).value;
      }
    }
  }
}

}  // namespace

double u_viscous_deviation(const RiemannPerturbedIC& ic, double x, double t, double eps,
                           double reference) {
  detail::require_burgers(ic.flux(), "u_viscous");
  detail::require_positive_time(t, "u_viscous");
  if (!(eps > 0.0)) {
    throw DomainError("u_viscous: requires eps > 0");
  }
  const HopfPotential hp(ic, PotentialSide::joined);
  const double f_min = extremal_minimizers(hp, t, x).min_value;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Moments acc;
  accumulate_part(ic.perturbation(), ic.ul(), t, x, eps, reference, f_min, -kInf, 0.0, acc);
  accumulate_part(ic.perturbation(), ic.ur(), t, x, eps, reference, f_min, 0.0, kInf, acc);
  acc.flush();
  if (!(acc.mass > 0.0)) {
    throw InternalError("u_viscous: vanishing weight mass");
  }
  return acc.num / acc.mass;
}

double u_viscous(const RiemannPerturbedIC& ic, double x, double t, double eps) {
  detail::require_positive_time(t, "u_viscous");
  const HopfPotential hp(ic, PotentialSide::joined);
  const ExtremalMinimizers m = extremal_minimizers(hp, t, x);
  const double reference = (x - 0.5 * (m.y_star_low + m.y_star_high)) / t;
  return reference + u_viscous_deviation(ic, x, t, eps, reference);
}

}  // namespace pwave
