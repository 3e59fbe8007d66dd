#include "measures/combinators.hpp"

#include <cmath>
#include <memory>

#include "core_internal.hpp"
#include "measures/core.hpp"
#include "measures/error.hpp"

namespace measures {

Measure product(const Measure& mu, const Measure& nu) { return detail::product_node({mu, nu}); }

Measure product(std::vector<Measure> factors) {
  if (factors.empty()) throw ShapeError("product of no measures");
  return detail::product_node(std::move(factors));
}

Measure power(const Measure& mu, std::vector<std::size_t> shape) {
  if (shape.empty()) throw ShapeError("power: empty shape");
  std::size_t count = 1;
  for (auto n : shape) {
    if (n == 0) throw ShapeError("power: shape entries must be positive");
    count *= n;
  }
  return detail::power_node(mu, std::move(shape), count);
}

Measure for_product(std::vector<Point> indices, Kernel k) {
  if (indices.empty()) throw ShapeError("for_product: no indices");
  return Measure(Node{ForProductNode{std::move(indices), std::move(k)}});
}

Measure bind(const Measure& mu, Kernel k) { return Measure(Node{BindNode{mu, std::move(k)}}); }

Measure superpose(const Measure& mu, const Measure& nu) {
  if (!sample_space(mu).compatible(sample_space(nu))) {
    throw ShapeError("superpose: " + describe(mu) + " and " + describe(nu) + " live on different spaces");
  }
  return detail::superposition_node(mu, nu);
}

Measure scale(LogWeight log_weight, const Measure& mu) {
  if (log_weight.is_undefined()) throw DomainError("scale: undefined log-weight");
  if (log_weight.is_pos_inf()) throw DomainError("scale: log-weight +inf gives an infinite measure");
  return detail::weighted(log_weight, mu);
}

Measure pointwise_product(const Measure& prior, Likelihood likelihood) {
  return Measure(Node{PointwiseProductNode{prior, std::move(likelihood)}});
}

LogWeight loglik(const Likelihood& likelihood, const Point& p) {
  return logdensity(likelihood.kernel(p), likelihood.data);
}

LogWeight DensityClosure::log_value(const Point& x) const { return logdensity(numerator_, denominator_, x); }

double DensityClosure::operator()(const Point& x) const {
  LogWeight l = log_value(x);
  return log_space_ ? l.value() : l.exp();
}

DensityClosure rn_derivative(const Measure& mu, const Measure& nu, bool log_space) {
  return {mu, nu, log_space};
}

Measure integrate_density(std::function<double(const Point&)> f, const Measure& nu) {
  auto log_f = std::make_shared<const LogDensityFn>([f = std::move(f)](const Point& x) {
    double v = f(x);
    if (std::isnan(v) || v < 0.0) throw DomainError("integrate_density: density value " + format_real(v) + " at " + to_string(x));
    return LogWeight(std::log(v));
  });
  return Measure(Node{DensityNode{nu, std::move(log_f), false}});
}

Measure integrate_exp(LogDensityFn l, const Measure& nu) {
  return Measure(Node{DensityNode{nu, std::make_shared<const LogDensityFn>(std::move(l)), true}});
}

Measure integrate_exp(const DensityClosure& l, const Measure& nu) {
  return integrate_exp([l](const Point& x) { return l.log_value(x); }, nu);
}

Measure pushforward(const AffineMap& f, const Measure& mu) {
  Space domain = f.is_scalar() ? Space::scalar() : Space::array(Space::scalar(), f.dim());
  Space source = sample_space(mu);
  if (!domain.compatible(source)) {
    throw ShapeError("pushforward: map on " + domain.to_string() + " applied to " + describe(mu) + " on " +
                     source.to_string());
  }
  return detail::pushforward_node(f, mu);
}

}  // namespace measures
