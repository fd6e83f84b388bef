#include "pwave/flux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwave/error.hpp"
#include "quadrature.hpp"

namespace pwave {

namespace {

std::string describe(const char* what, double value, const Interval& range) {
  std::ostringstream os;
  os.precision(17);
  os << what << " " << value << " outside [" << range.lo << ", " << range.hi << "]";
  return os.str();
}

bool within(const Interval& range, double v) {
  return v >= range.lo - 1e-12 * std::max(1.0, std::abs(range.lo)) &&
         v <= range.hi + 1e-12 * std::max(1.0, std::abs(range.hi));
}

}  // namespace

ConvexFlux::ConvexFlux(std::string name, Fn f, Fn df, Fn d2f, Fn inv_df, Interval domain)
    : name_(std::move(name)),
      f_(std::move(f)),
      df_(std::move(df)),
      d2f_(std::move(d2f)),
      inv_df_(std::move(inv_df)),
      domain_(domain) {
  if (!(domain_.lo < domain_.hi)) {
    throw DegenerateInput("flux domain must have lo < hi");
  }
  if (!f_ || !df_ || !d2f_ || !inv_df_) {
    throw PreconditionError("flux '" + name_ + "' must provide all four evaluators");
  }
  slopes_ = {df_(domain_.lo), df_(domain_.hi)};
  if (!(slopes_.lo < slopes_.hi)) {
    throw PreconditionError("flux '" + name_ + "' derivative is not increasing");
  }
}

void ConvexFlux::check_state(double u, const char* what) const {
  if (!within(domain_, u)) {
    throw DomainError(describe(what, u, domain_));
  }
}

double ConvexFlux::eval(double u) const {
  check_state(u, "state");
  return f_(u);
}

double ConvexFlux::deriv(double u) const {
  check_state(u, "state");
  return df_(u);
}

double ConvexFlux::second_deriv(double u) const {
  check_state(u, "state");
  return d2f_(u);
}

double ConvexFlux::inv_deriv(double v) const {
  if (!within(slopes_, v)) {
    throw DomainError(describe("slope", v, slopes_));
  }
  return inv_df_(v);
}

ConvexFlux burgers_flux() {
  return ConvexFlux(
      "burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
      [](double) { return 1.0; }, [](double v) { return v; }, {-1e4, 1e4});
}

ConvexFlux exp_flux() {
  return ConvexFlux(
      "exp", [](double u) { return std::expm1(u) - u; }, [](double u) { return std::expm1(u); },
      [](double u) { return std::exp(u); }, [](double v) { return std::log1p(v); }, {-10.0, 10.0});
}

ConvexFlux flux_by_name(std::string_view name) {
  if (name == "burgers") return burgers_flux();
  if (name == "exp") return exp_flux();
  throw ConfigError("unknown flux '" + std::string(name) + "' (expected burgers or exp)");
}

double rh_speed(const ConvexFlux& flux, double ul, double ur) {
  if (ul == ur) {
    throw DegenerateInput("rh_speed: ul == ur has no jump");
  }
  return (flux.eval(ul) - flux.eval(ur)) / (ul - ur);
}

NormalizedFlux normalize(const ConvexFlux& flux, double ubar) {
  if (!flux.domain().contains(ubar)) {
    throw DomainError(describe("normalize: ubar", ubar, flux.domain()));
  }
  const double f0 = flux.eval(ubar);
  const double s0 = flux.deriv(ubar);
  ConvexFlux base = flux;
  ConvexFlux shifted(
      flux.name(),
      [base, f0, s0, ubar](double u) { return base.eval(u) - f0 - s0 * (u - ubar); },
      [base, s0](double u) { return base.deriv(u) - s0; },
      [base](double u) { return base.second_deriv(u); },
      [base, s0](double v) { return base.inv_deriv(v + s0); }, flux.domain());
  return NormalizedFlux(flux, std::move(shifted), ubar);
}

GPotential::GPotential(NormalizedFlux flux) : flux_(std::move(flux)) {
  if (flux_.base().name() == "burgers") {
    closed_form_ = [](double v) { return 0.5 * v * v; };
  }
}

GPotential::GPotential(NormalizedFlux flux, std::function<double(double)> closed_form)
    : flux_(std::move(flux)), closed_form_(std::move(closed_form)) {}

double GPotential::operator()(double v) const {
  const ConvexFlux& f = flux_.flux();
  if (!within(f.slope_range(), v)) {
    throw DomainError(describe("g: argument", v, f.slope_range()));
  }
  if (closed_form_) {
    return (*closed_form_)(v);
  }
  if (v == 0.0) {
    return 0.0;
  }
  const double ubar = flux_.ubar();
  auto integrand = [&f, ubar](double s) { return f.inv_deriv(s) - ubar; };
  const double lo = std::min(0.0, v);
  const double hi = std::max(0.0, v);
  const double value = detail::adaptive_gk15(integrand, lo, hi, 1e-12).value;
  return v > 0.0 ? value : -value;
}

double g_of(const GPotential& gp, double v) { return gp(v); }

double z_of(const GPotential& gp, double p, double t) {
  if (!(p > 0.0) || !(t > 0.0)) {
    throw PreconditionError("z_of requires p > 0 and t > 0");
  }
  const Interval slopes = gp.normalized().flux().slope_range();
  auto residual = [&](double z) { return gp(z / t) - gp((z - p) / t); };
  // Sign of the residual, which is strictly increasing in z. Where an argument
  // leaves the slope range the sign is known without evaluating g there: the
  // residual is negative near z = 0 and positive near z = p.
  auto sign_of = [&](double z) {
    if ((z - p) / t < slopes.lo) return -1.0;
    if (z / t > slopes.hi) return 1.0;
    return residual(z);
  };
  double lo = 0.0;
  double hi = p;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = sign_of(mid);
    if (r == 0.0) {
      lo = hi = mid;
      break;
    }
    if (r < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = 0.5 * (lo + hi);
  if (!(z > 0.0 && z < p) || (z - p) / t < slopes.lo || z / t > slopes.hi) {
    throw InternalError("z_of: residual has no sign change on (0, p)");
  }
  const double scale = std::max(1.0, std::abs(gp(std::min(p / t, slopes.hi))));
  if (std::abs(residual(z)) > 1e-12 * scale) {
    throw InternalError("z_of: bisection did not reach the residual tolerance");
  }
  return z;
}

}  // namespace pwave
