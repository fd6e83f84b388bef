#ifndef PWAVE_FLUX_HPP_
#define PWAVE_FLUX_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace pwave {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Strictly convex flux f with f', f'' and (f')^{-1}, all valid on `domain()`.
///
/// Evaluators outside the domain throw DomainError instead of extrapolating;
/// `inv_deriv` accepts slopes in [f'(domain.lo), f'(domain.hi)].
class ConvexFlux {
 public:
  using Fn = std::function<double(double)>;

  ConvexFlux(std::string name, Fn f, Fn df, Fn d2f, Fn inv_df, Interval domain);

  double eval(double u) const;
  double deriv(double u) const;
  double second_deriv(double u) const;
  double inv_deriv(double v) const;

  const Interval& domain() const { return domain_; }
  /// Range of f' over the domain.
  Interval slope_range() const { return slopes_; }
  const std::string& name() const { return name_; }

 private:
  void check_state(double u, const char* what) const;

  std::string name_;
  Fn f_;
  Fn df_;
  Fn d2f_;
  Fn inv_df_;
  Interval domain_;
  Interval slopes_;
};

/// f(u) = u^2/2 on [-1e4, 1e4].
ConvexFlux burgers_flux();
/// f(u) = e^u - 1 - u on [-10, 10]; (f')^{-1}(v) = ln(1+v).
/// Below -10 the round trip ln(1 + (e^u - 1)) loses more than 1e-10 in u.
ConvexFlux exp_flux();
/// Looks up a built-in flux ("burgers", "exp"); throws ConfigError otherwise.
ConvexFlux flux_by_name(std::string_view name);

/// Rankine-Hugoniot speed (f(ul) - f(ur)) / (ul - ur).
double rh_speed(const ConvexFlux& flux, double ul, double ur);

/// A flux shifted by its tangent line at `ubar`, so that f(ubar) = f'(ubar) = 0.
class NormalizedFlux {
 public:
  NormalizedFlux(ConvexFlux base, ConvexFlux normalized, double ubar)
      : base_(std::move(base)), flux_(std::move(normalized)), ubar_(ubar) {}

  const ConvexFlux& base() const { return base_; }
  const ConvexFlux& flux() const { return flux_; }
  double ubar() const { return ubar_; }

 private:
  ConvexFlux base_;
  ConvexFlux flux_;
  double ubar_;
};

NormalizedFlux normalize(const ConvexFlux& flux, double ubar);

/// g(v) = \int_0^v [(f')^{-1}(s) - ubar] ds for a normalized flux.
///
/// Uses adaptive Gauss-Kronrod quadrature (absolute tolerance 1e-12) unless a
/// closed form is registered; Burgers registers g(v) = v^2/2.
class GPotential {
 public:
  explicit GPotential(NormalizedFlux flux);
  GPotential(NormalizedFlux flux, std::function<double(double)> closed_form);

  const NormalizedFlux& normalized() const { return flux_; }
  bool has_closed_form() const { return closed_form_.has_value(); }
  double operator()(double v) const;

 private:
  NormalizedFlux flux_;
  std::optional<std::function<double(double)>> closed_form_;
};

double g_of(const GPotential& gp, double v);

/// Unique z in (0, p) with g(z/t) = g((z-p)/t), by bisection (200 iterations max).
double z_of(const GPotential& gp, double p, double t);

}  // namespace pwave

#endif  // PWAVE_FLUX_HPP_
