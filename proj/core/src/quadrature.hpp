#ifndef PWAVE_SRC_QUADRATURE_HPP_
#define PWAVE_SRC_QUADRATURE_HPP_

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pwave::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Recursive bisection on top of a single G7/K15 pair. Children inherit
// tol/sqrt(2), which still terminates on integrands with jump discontinuities
// (the offending subinterval shrinks geometrically). Recursion also stops once
// the interval is below rounding resolution.
template <class F>
QuadResult adaptive_gk15(const F& f, double a, double b, double tol, int depth = 0) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  const double val = GK::integrate(f, a, b, 0, 0.0, &err);
  const double width = b - a;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (!std::isfinite(val) || !std::isfinite(err)) {
    return {val, err};
  }
  if (err <= tol || depth >= 64 ||
      std::abs(width) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    return {val, err};
  }
  const double mid = 0.5 * (a + b);
  const double child_tol = tol / std::sqrt(2.0);
  const QuadResult left = adaptive_gk15(f, a, mid, child_tol, depth + 1);
  const QuadResult right = adaptive_gk15(f, mid, b, child_tol, depth + 1);
  return {left.value + right.value, left.error + right.error};
}

// Fixed composite Gauss-Legendre rule, `panels` equal panels of order 10.
template <class F>
double composite_gauss(const F& f, double a, double b, int panels) {
  using G = boost::math::quadrature::gauss<double, 10>;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i;
    const double hi = (i + 1 == panels) ? b : a + h * (i + 1);
    sum += G::integrate(f, lo, hi);
  }
  return sum;
}

}  // namespace pwave::detail

#endif  // PWAVE_SRC_QUADRATURE_HPP_
