#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "measures/measure.hpp"

namespace measures {

// Axis-aligned region: real interval, inclusive integer range, or product.
class Region {
 public:
  enum class Kind { Interval, IntegerRange, Product };

  static Region interval(double lo, double hi);
  static Region integer_range(std::int64_t lo, std::int64_t hi);
  static Region product(std::vector<Region> children);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Region>& children() const { return children_; }

  // Lebesgue, Counting, or the product of the children's references.
  Measure reference() const;

 private:
  Kind kind_ = Kind::Interval;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<Region> children_;
};

struct MassResult {
  double value = 0.0;
  // Integer sums: the last term exceeded the tolerance.
  bool tail_warning = false;
};

// Mass of mu over r: adaptive Simpson on intervals (absolute tolerance tol),
// exact summation on integer ranges, iterated for products. Throws
// UndefinedDensityError where the density against the reference is Undefined.
MassResult mass_report(const Measure& mu, const Region& r, double tol);
double mass(const Measure& mu, const Region& r, double tol);

// |m(A u B) + m(A n B) - m(A) - m(B)| for two intervals or two integer ranges.
// A disjoint union is measured as hull minus gap.
double additivity_check(const Measure& mu, const Region& a, const Region& b, double tol = 1e-10);

// (1/n) sum f(sample(mu, split_seed(seed, i))).
double mc_mean(const Measure& mu, const std::function<double(const Point&)>& f, std::size_t n,
               std::uint64_t seed);

// Adaptive Simpson with bisection, absolute tolerance, max depth 40. Whole
// grids are bisected first; unconverged panels are then refined locally.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

}  // namespace measures
