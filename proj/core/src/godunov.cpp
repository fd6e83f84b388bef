#include <algorithm>
#include <cmath>

#include "pwave/error.hpp"
#include "pwave/fronttrack.hpp"

namespace pwave {

namespace {

// Exact Godunov flux for a convex f: min of f over [a, b] when a <= b, max over
// [b, a] otherwise. The minimum sits at the sonic point clamped into the
// interval; the maximum is at an endpoint.
double godunov_flux(const ConvexFlux& flux, double sonic, double a, double b) {
  if (a <= b) {
    return flux.eval(std::clamp(sonic, a, b));
  }
  return std::max(flux.eval(a), flux.eval(b));
}

}  // namespace

std::vector<std::pair<double, double>> godunov_reference(const RiemannPerturbedIC& ic,
                                                         const ConvexFlux& flux, double dx,
                                                         double cfl, double t_end,
                                                         Interval window) {
  if (!(dx > 0.0)) throw PreconditionError("godunov_reference: dx must be positive");
  if (!(cfl > 0.0 && cfl <= 0.5)) {
    throw PreconditionError("godunov_reference: cfl must lie in (0, 0.5]");
  }
  if (!(t_end >= 0.0)) throw PreconditionError("godunov_reference: negative end time");
  if (!(window.lo < window.hi)) throw PreconditionError("godunov_reference: empty window");

  const PeriodicProfile& w = ic.perturbation();
  const double u_lo = std::min(ic.ul(), ic.ur()) + w.min_value();
  const double u_hi = std::max(ic.ul(), ic.ur()) + w.max_value();
  const double max_speed = std::max({std::abs(flux.deriv(u_lo)), std::abs(flux.deriv(u_hi)), 1e-12});
  const double pad = max_speed * t_end + 2.0 * dx;
  const double lo = window.lo - pad;
  const auto n = static_cast<std::size_t>(std::ceil((window.hi + pad - lo) / dx));

  // Exact cell averages of the initial data.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lo + static_cast<double>(i) * dx;
    u[i] = (ic.primitive(a + dx) - ic.primitive(a)) / dx;
  }

  double sonic;
  const Interval slopes = flux.slope_range();
  if (slopes.contains(0.0)) {
    sonic = flux.inv_deriv(0.0);
  } else {
    sonic = slopes.lo > 0.0 ? flux.domain().lo : flux.domain().hi;
  }

  const double dt_max = cfl * dx / max_speed;
  std::vector<double> face(n + 1);
  double t = 0.0;
  while (t < t_end) {
    const double dt = std::min(dt_max, t_end - t);
    // Transmissive boundaries: ghost cells copy the edge cells.
    face[0] = flux.eval(u[0]);
    face[n] = flux.eval(u[n - 1]);
    for (std::size_t i = 1; i < n; ++i) face[i] = godunov_flux(flux, sonic, u[i - 1], u[i]);
    const double r = dt / dx;
    for (std::size_t i = 0; i < n; ++i) u[i] -= r * (face[i + 1] - face[i]);
    t += dt;
  }

  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * dx;
    if (x >= window.lo && x <= window.hi) out.emplace_back(x, u[i]);
  }
  return out;
}

}  // namespace pwave
