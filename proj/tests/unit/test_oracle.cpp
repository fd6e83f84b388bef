#include <cmath>
#include <random>

#include "doctest.h"
#include "pwave/error.hpp"
#include "pwave/oracle.hpp"

using namespace pwave;

namespace {

PeriodicProfile zero_profile() {
  return PeriodicProfile(std::vector<PieceSpec>{PieceSpec::constant(1.0, 0.0)});
}

RiemannPerturbedIC square_shock() {
  return RiemannPerturbedIC(burgers_flux(), 1.0, -1.0, square_wave(0.3, 1.0));
}

// DERIVED: dense-grid brute force (2^16 points on the bracket plus six rounds of
// local refinement) for square wave +-0.3, ul = 1, ur = -1.
struct BruteFixture {
  double t, x, y_joined, m_joined, m_left, m_right;
};
constexpr BruteFixture kBrute[] = {
    {1.0, 0.1, 1.000000000000, -0.595000000000, -0.395000000000, -0.595000000000},
    {2.5, -0.4, -3.000000000000, -1.648000000000, -1.648000000000, -0.848000000000},
    {3.7, 0.9, 5.000000000000, -2.728378378378, -0.944594594595, -2.728378378378},
    {0.6, 0.2, 0.979999996038, -0.467000000000, -0.007000000000, -0.467000000000},
    {7.0, 3.3, 10.000000000000, -6.793571428571, -0.193571428571, -6.793571428571},
};

}  // namespace

TEST_CASE("potential values") {
  const HopfPotential left(RiemannPerturbedIC(burgers_flux(), 1.0, -1.0, zero_profile()),
                           PotentialSide::left);
  CHECK(potential(left, 1.0, 0.0, -1.0) == doctest::Approx(-0.5));
  const HopfPotential joined(square_shock(), PotentialSide::joined);
  CHECK(potential(joined, 2.0, 0.7, 0.0) == doctest::Approx(0.49 / 4.0));
  const HopfPotential sq_left(square_shock(), PotentialSide::left);
  CHECK(potential(sq_left, 1.0, 0.0, 0.5) == doctest::Approx(0.775));
  CHECK_THROWS_AS(potential(sq_left, 0.0, 0.0, 0.5), DomainError);
}

TEST_CASE("extremal minimizers: unperturbed shock") {
  const HopfPotential hp(RiemannPerturbedIC(burgers_flux(), 1.0, -1.0, zero_profile()),
                         PotentialSide::joined);
  const ExtremalMinimizers neg = extremal_minimizers(hp, 1.0, 0.0, Constraint::nonpositive);
  CHECK(neg.y_star_low == doctest::Approx(-1.0));
  CHECK(neg.min_value == doctest::Approx(-0.5));
  const ExtremalMinimizers pos = extremal_minimizers(hp, 1.0, 0.0, Constraint::nonnegative);
  CHECK(pos.y_star_high == doctest::Approx(1.0));
  CHECK(pos.min_value == doctest::Approx(-0.5));
  const ExtremalMinimizers all = extremal_minimizers(hp, 1.0, 0.0);
  CHECK(all.y_star_low == doctest::Approx(-1.0));
  CHECK(all.y_star_high == doctest::Approx(1.0));
}

TEST_CASE("extremal minimizers agree with brute force") {
  const RiemannPerturbedIC ic = square_shock();
  const HopfPotential joined(ic, PotentialSide::joined);
  const HopfPotential left(ic, PotentialSide::left);
  const HopfPotential right(ic, PotentialSide::right);
  for (const BruteFixture& f : kBrute) {
    const ExtremalMinimizers m = extremal_minimizers(joined, f.t, f.x);
    CHECK(std::abs(m.y_star_low - f.y_joined) <= 1e-8);
    CHECK(std::abs(m.min_value - f.m_joined) <= 1e-8);
    CHECK(std::abs(extremal_minimizers(left, f.t, f.x, Constraint::nonpositive).min_value -
                   f.m_left) <= 1e-8);
    CHECK(std::abs(extremal_minimizers(right, f.t, f.x, Constraint::nonnegative).min_value -
                   f.m_right) <= 1e-8);
  }
}

TEST_CASE("u_exact on unperturbed waves") {
  const RiemannPerturbedIC rare(burgers_flux(), -1.0, 1.0, zero_profile());
  CHECK(u_exact(rare, 0.5, 1.0, Limit::left) == doctest::Approx(0.5));
  CHECK(u_exact(rare, 0.5, 1.0, Limit::right) == doctest::Approx(0.5));
  CHECK(u_exact(rare, -3.0, 1.0, Limit::right) == doctest::Approx(-1.0));
  const RiemannPerturbedIC shock(burgers_flux(), 1.0, -1.0, zero_profile());
  CHECK(u_exact(shock, -0.3, 1.0, Limit::left) == doctest::Approx(1.0));
  CHECK(u_exact(shock, 0.3, 1.0, Limit::left) == doctest::Approx(-1.0));
  CHECK(u_exact(shock, 0.0, 1.0, Limit::left) == doctest::Approx(1.0));
  CHECK(u_exact(shock, 0.0, 1.0, Limit::right) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(u_exact(RiemannPerturbedIC(exp_flux(), 1.0, -1.0, zero_profile()), 0.0, 1.0,
                          Limit::left),
                  PreconditionError);
}

TEST_CASE("minimizers are monotone and the solution is entropic") {
  const RiemannPerturbedIC ic = square_shock();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> xs(-20.0, 20.0);
  std::uniform_real_distribution<double> ts(0.1, 30.0);
  for (PotentialSide side : {PotentialSide::left, PotentialSide::right, PotentialSide::joined}) {
    const HopfPotential hp(ic, side);
    for (int i = 0; i < 300; ++i) {
      const double t = ts(rng);
      double x1 = xs(rng);
      double x2 = xs(rng);
      if (x1 > x2) std::swap(x1, x2);
      if (x1 == x2) continue;
      const ExtremalMinimizers a = extremal_minimizers(hp, t, x1);
      const ExtremalMinimizers b = extremal_minimizers(hp, t, x2);
      CHECK(a.y_star_low <= a.y_star_high);
      CHECK(a.y_star_high <= b.y_star_low + 1e-12);
    }
  }
  for (int i = 0; i < 300; ++i) {
    const double t = ts(rng);
    const double x = xs(rng);
    CHECK(u_exact(ic, x, t, Limit::left) >= u_exact(ic, x, t, Limit::right));
  }
}

TEST_CASE("minimum value is Lipschitz in x") {
  const RiemannPerturbedIC ic = square_shock();
  const HopfPotential hp(ic, PotentialSide::joined);
  // |dm/dx| = |u| <= max |u0| = 1.3.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double x = xs(rng);
    const double h = 1e-3 * (1 + i % 7);
    const double d = extremal_minimizers(hp, 2.0, x + h).min_value -
                     extremal_minimizers(hp, 2.0, x).min_value;
    CHECK(std::abs(d) <= 1.3 * h + 1e-12);
  }
}

TEST_CASE("shock interval") {
  const RiemannPerturbedIC plain(burgers_flux(), 1.0, -1.0, zero_profile());
  for (double t : {0.5, 3.0, 40.0}) {
    const ShockInterval s = shock_interval(plain, t);
    CHECK(s.merged);
    CHECK(std::abs(s.mid()) <= 1e-10 * t);
  }
  const RiemannPerturbedIC ic = square_shock();
  for (double t : {0.7, 1.3, 4.0, 11.1}) {
    const ShockInterval s = shock_interval(ic, t);
    CHECK(s.x_low >= (ic.shock_speed() + ic.perturbation().lower_bound()) * t - 1e-9);
    CHECK(s.x_high <= (ic.shock_speed() + ic.perturbation().upper_bound()) * t + 1e-9);
  }
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(shock_interval(ic, 0.5 * n).mid()) <= 1e-8);
  }
  CHECK_THROWS_AS(shock_interval(RiemannPerturbedIC(burgers_flux(), -1.0, 1.0, zero_profile()), 1.0),
                  PreconditionError);
}

TEST_CASE("merge time") {
  // A +-0.3 wave on ul = 1, ur = -1 keeps a jump at the origin: merged from the start.
  const std::vector<double> ts = {0.25, 0.5, 1.0, 2.0, 4.0};
  CHECK(detect_merge_time(square_shock(), ts) == 0.0);
  // Here u0(0-) = -0.8 < u0(0+) = 0.8: a fan opens at the origin and the set
  // is a nontrivial interval until the fan is absorbed.
  const RiemannPerturbedIC fan(burgers_flux(), 0.2, -0.2, square_wave(1.0, 1.0));
  CHECK_FALSE(shock_interval(fan, 0.2).merged);
  std::vector<double> samples;
  for (int i = 0; i < 24; ++i) samples.push_back(0.1 * std::pow(1.25, i));
  const double t_s = detect_merge_time(fan, samples);
  CHECK(t_s > 0.1);
  CHECK(std::isfinite(t_s));
  for (double t : samples) {
    if (t > t_s) CHECK(shock_interval(fan, t).merged);
  }
}

TEST_CASE("periodic solution") {
  const PeriodicProfile zero = zero_profile();
  CHECK(periodic_solution(zero, 0.7, 3.1, 2.0, Limit::left) == doctest::Approx(0.7));
  // PAPER: sawtooth after T_P = p/m with sup = p/(2t).
  const PeriodicProfile sq = square_wave(1.0, 1.0);
  for (double t : {2.0, 8.0, 32.0}) {
    const MinimizerMap mins = [&](double x) { return periodic_minimizers(sq, 0.0, t, x); };
    const SupResult sup = sup_excess(mins, t, 0.0, 1.0, [](double) { return 0.0; });
    CHECK(std::abs(sup.value - 1.0 / (2.0 * t)) <= 1e-10);
    const SupResult inf = sup_deficit(mins, t, 0.0, 1.0, [](double) { return 0.0; });
    CHECK(std::abs(inf.value - 1.0 / (2.0 * t)) <= 1e-10);
  }
  // Galilean map against direct evaluation of the slope-ubar potential.
  const PeriodicProfile w = square_wave(0.3, 1.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  std::uniform_real_distribution<double> ts(0.1, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double x = xs(rng);
    const double t = ts(rng);
    const double shifted = periodic_solution(w, 1.0, x, t, Limit::right);
    const double base = periodic_solution(w, 0.0, x - t, t, Limit::right) + 1.0;
    const ExtremalMinimizers direct = periodic_minimizers(w, 1.0, t, x);
    CHECK(std::abs(shifted - base) <= 1e-10);
    CHECK(std::abs(shifted - (x - direct.y_star_high) / t) <= 1e-10);
  }
  // Mean over a period is ubar.
  for (double t : {0.5, 3.0, 30.0}) {
    CHECK(std::abs(periodic_integral_exact(w, 0.4, t, 0.2, 1.2) - 0.4) <= 1e-10);
  }
}

TEST_CASE("gluing: outside the shock set the solution is one-sided periodic") {
  const RiemannPerturbedIC ic = square_shock();
  for (double t : {1.0, 3.3, 12.0}) {
    const ShockInterval s = shock_interval(ic, t);
    for (int i = 1; i <= 40; ++i) {
      const double xl = s.x_low - 0.05 * i;
      const double xr = s.x_high + 0.05 * i;
      CHECK(std::abs(u_exact(ic, xl, t, Limit::right) -
                     periodic_solution(ic.perturbation(), ic.ul(), xl, t, Limit::right)) <= 1e-10);
      CHECK(std::abs(u_exact(ic, xr, t, Limit::left) -
                     periodic_solution(ic.perturbation(), ic.ur(), xr, t, Limit::left)) <= 1e-10);
    }
  }
}

TEST_CASE("shock curve is Lipschitz") {
  const RiemannPerturbedIC ic = square_shock();
  double prev_t = 0.05;
  double prev_x = shock_interval(ic, prev_t).mid();
  for (int i = 1; i <= 1000; ++i) {
    const double t = 0.05 + 0.01 * i;
    const double x = shock_interval(ic, t).mid();
    CHECK(std::abs(x - prev_x) <= 1.3 * (t - prev_t) + 1e-9);
    prev_t = t;
    prev_x = x;
  }
}

TEST_CASE("integral identity") {
  const RiemannPerturbedIC ic = square_shock();
  // Midpoint-rule integral of u with many samples against m(b) - m(a).
  const double t = 2.2;
  const double a = -1.7;
  const double b = 1.9;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += u_exact(ic, a + (b - a) * (i + 0.5) / n, t, Limit::right);
  }
  sum *= (b - a) / n;
  CHECK(std::abs(integral_exact(ic, t, a, b) - sum) <= 1e-4);
}

TEST_CASE("viscous evaluator") {
  const RiemannPerturbedIC constant(burgers_flux(), 0.4, 0.4, zero_profile());
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    CHECK(u_viscous(constant, 0.3, 1.5, eps) == doctest::Approx(0.4).epsilon(1e-12));
  }
  const RiemannPerturbedIC shock(burgers_flux(), 1.0, -1.0, zero_profile());
  double prev = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double dev = std::abs(u_viscous_deviation(shock, 0.5, 1.0, eps, -1.0));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(std::abs(u_viscous(shock, 0.5, 1.0, 1e-3) + 1.0) <= 0.05);
  // DERIVED: mpmath quadrature of the Cole-Hopf integrals (50 digits).
  CHECK(u_viscous_deviation(shock, 0.5, 1.0, 1e-1, -1.0) ==
        doctest::Approx(0.0116366491709640).epsilon(1e-10));
  CHECK(u_viscous_deviation(shock, 0.5, 1.0, 1e-2, -1.0) ==
        doctest::Approx(3.8567147872860600e-22).epsilon(1e-8));
  CHECK(u_viscous_deviation(shock, 0.5, 1.0, 1e-3, -1.0) > 0.0);
  // Odd symmetry about the stationary shock.
  CHECK(std::abs(u_viscous(shock, 0.0, 2.0, 0.05)) <= 1e-12);
  // The square wave is odd, so the data are antisymmetric about the origin.
  CHECK(std::abs(u_viscous(square_shock(), 0.0, 1.0, 0.05)) <= 1e-10);
  CHECK_THROWS_AS(u_viscous(shock, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(u_viscous(shock, 0.0, -1.0, 0.1), DomainError);
}

TEST_CASE("viscous evaluator against direct quadrature") {
  // DERIVED: brute-force trapezoid quadrature of the Hopf-Cole quotient.
  const RiemannPerturbedIC ic = square_shock();
  for (double x : {-0.4, 0.1, 0.8}) {
    const double t = 1.5;
    const double eps = 0.05;
    const HopfPotential hp(ic, PotentialSide::joined);
    const double fm = extremal_minimizers(hp, t, x).min_value;
    double num = 0.0;
    double den = 0.0;
    const int n = 400000;
    const double lo = x - 12.0;
    const double hi = x + 12.0;
    const double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double y = lo + h * i;
      const double wgt = std::exp(-(potential(hp, t, x, y) - fm) / (2 * eps)) * ((i == 0 || i == n) ? 0.5 : 1.0);
      num += (x - y) / t * wgt;
      den += wgt;
    }
    CHECK(std::abs(u_viscous(ic, x, t, eps) - num / den) <= 1e-7);
  }
}
