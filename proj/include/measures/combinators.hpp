#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "measures/affine_map.hpp"
#include "measures/log_weight.hpp"
#include "measures/measure.hpp"

namespace measures {

// mu (x) nu on pairs (x, y).
Measure product(const Measure& mu, const Measure& nu);
// n-ary product on flat tuples.
Measure product(std::vector<Measure> factors);

// iid product of mu over `shape`; points are flat row-major tuples.
Measure power(const Measure& mu, std::vector<std::size_t> shape);

// Product of k(i) over the indices, on flat tuples.
Measure for_product(std::vector<Point> indices, Kernel k);

// mu (x) k on pairs (x, y), with y drawn from k(x).
Measure bind(const Measure& mu, Kernel k);

// mu + nu.
Measure superpose(const Measure& mu, const Measure& nu);

// e^{log_weight} mu. Nested scales collapse; scale(0, mu) is mu.
Measure scale(LogWeight log_weight, const Measure& mu);

// Prior times likelihood, over the prior's base measure.
Measure pointwise_product(const Measure& prior, Likelihood likelihood);

// logdensity(k(p), data)
LogWeight loglik(const Likelihood& likelihood, const Point& p);

// Radon-Nikodym derivative d(numerator)/d(denominator) as a closure.
class DensityClosure {
 public:
  DensityClosure(Measure numerator, Measure denominator, bool log_space)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)), log_space_(log_space) {}

  // logdensity(numerator, denominator, x) in log space, its exponential
  // otherwise. Undefined maps to NaN.
  double operator()(const Point& x) const;
  // The tagged log-space value regardless of mode.
  LogWeight log_value(const Point& x) const;

  const Measure& numerator() const { return numerator_; }
  const Measure& denominator() const { return denominator_; }
  bool log_space() const { return log_space_; }

 private:
  Measure numerator_;
  Measure denominator_;
  bool log_space_;
};

// ∂(mu, nu) and log∂(mu, nu).
DensityClosure rn_derivative(const Measure& mu, const Measure& nu, bool log_space = false);
inline DensityClosure log_rn_derivative(const Measure& mu, const Measure& nu) {
  return rn_derivative(mu, nu, true);
}

// ∫(f, nu): the measure with density f against nu. f must be nonnegative.
Measure integrate_density(std::function<double(const Point&)> f, const Measure& nu);
// ∫exp(l, nu): the measure with log-density l against nu.
Measure integrate_exp(LogDensityFn l, const Measure& nu);
Measure integrate_exp(const DensityClosure& l, const Measure& nu);

// f_* mu for an invertible affine f.
Measure pushforward(const AffineMap& f, const Measure& mu);

}  // namespace measures
