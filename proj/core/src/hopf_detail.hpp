#ifndef PWAVE_SRC_HOPF_DETAIL_HPP_
#define PWAVE_SRC_HOPF_DETAIL_HPP_

#include "pwave/oracle.hpp"

namespace pwave::detail {

// Potential (x-y)^2/2t + ubar(y) y + W(y) restricted to y in [lo, hi], where
// ubar(y) = u_neg for y < 0 and u_pos for y >= 0, and W is the periodic
// primitive of a zero-mean profile.
struct HopfObjective {
  const PeriodicProfile* w = nullptr;
  double u_neg = 0.0;
  double u_pos = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Interval around the constrained vertex y_c of the quadratic part outside
// which (x-y)^2/2t + ubar y + W(y) exceeds its minimum by more than `level`:
// (y - y_c)^2 / 2t >= osc(W) + level there.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};
Window search_window(const PeriodicProfile& w, double ubar, double t, double x, double lo, double hi,
                     double level);

ExtremalMinimizers minimize(const HopfObjective& obj, double t, double x);

void require_burgers(const ConvexFlux& flux, const char* what);
void require_positive_time(double t, const char* what);

}  // namespace pwave::detail

#endif  // PWAVE_SRC_HOPF_DETAIL_HPP_
