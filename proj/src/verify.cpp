#include "measures/verify.hpp"

#include <algorithm>
#include <cmath>

#include "measures/catalog.hpp"
#include "measures/combinators.hpp"
#include "measures/core.hpp"
#include "measures/error.hpp"
#include "measures/random.hpp"

namespace measures {

Region Region::interval(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("interval needs finite lo < hi, got [" + format_real(lo) + ", " + format_real(hi) + "]");
  }
  Region r;
  r.kind_ = Kind::Interval;
  r.lo_ = lo;
  r.hi_ = hi;
  return r;
}

Region Region::integer_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("integer range needs lo <= hi");
  Region r;
  r.kind_ = Kind::IntegerRange;
  r.lo_ = static_cast<double>(lo);
  r.hi_ = static_cast<double>(hi);
  return r;
}

Region Region::product(std::vector<Region> children) {
  if (children.empty()) throw DomainError("product region needs children");
  Region r;
  r.kind_ = Kind::Product;
  r.children_ = std::move(children);
  return r;
}

Measure Region::reference() const {
  switch (kind_) {
    case Kind::Interval: return lebesgue();
    case Kind::IntegerRange: return counting();
    case Kind::Product: {
      std::vector<Measure> refs;
      for (const auto& c : children_) refs.push_back(c.reference());
      return measures::product(std::move(refs));
    }
  }
  return lebesgue();
}

namespace {

using Integrand = std::function<double(const Point&)>;

double simpson_step(const std::function<double(double)>& f, double a, double fa, double m, double fm, double b,
                    double fb, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

struct Accumulator {
  double sum = 0.0;
  double carry = 0.0;
  // Neumaier summation.
  void add(double v) {
    double t = sum + v;
    carry += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

double integrate(const Region& r, const Integrand& f, double tol, bool& tail_warning);

double integrate_product(const std::vector<Region>& children, std::size_t index, Point::Tuple& prefix,
                         const Integrand& f, double tol, bool& tail_warning) {
  if (index == children.size()) return f(Point(prefix));
  auto inner = [&](const Point& coord) {
    prefix.push_back(coord);
    double v = integrate_product(children, index + 1, prefix, f, tol, tail_warning);
    prefix.pop_back();
    return v;
  };
  return integrate(children[index], inner, tol, tail_warning);
}

double integrate(const Region& r, const Integrand& f, double tol, bool& tail_warning) {
  switch (r.kind()) {
    case Region::Kind::Interval:
      return adaptive_simpson([&](double x) { return f(Point(x)); }, r.lo(), r.hi(), tol);
    case Region::Kind::IntegerRange: {
      auto lo = static_cast<std::int64_t>(r.lo());
      auto hi = static_cast<std::int64_t>(r.hi());
      Accumulator acc;
      double last = 0.0;
      for (std::int64_t k = lo; k <= hi; ++k) {
        last = f(Point(k));
        acc.add(last);
      }
      if (last > tol) tail_warning = true;
      return acc.value();
    }
    case Region::Kind::Product: {
      Point::Tuple prefix;
      return integrate_product(r.children(), 0, prefix, f, tol, tail_warning);
    }
  }
  return 0.0;
}

Region hull(const Region& a, const Region& b) {
  double lo = std::min(a.lo(), b.lo());
  double hi = std::max(a.hi(), b.hi());
  if (a.kind() == Region::Kind::Interval) return Region::interval(lo, hi);
  return Region::integer_range(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi));
}

}  // namespace

// Bisection runs globally first: every panel is split until two successive
// composite estimates agree within tol. On smooth integrands this keeps the
// grid uniform, which is far more accurate than locally refined grids and
// makes the error shrink steadily as tol shrinks. Panels of an unconverged
// grid (kinks, jumps, narrow peaks) are then refined locally.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  constexpr int kMinLevel = 4;
  constexpr int kGlobalLevels = 12;
  const double width = b - a;
  // values[j] = f(a + j * width / (2n)) for n panels.
  std::vector<double> values{f(a), f(a + 0.5 * width), f(b)};
  auto composite = [&](std::size_t n) {
    Accumulator acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(values[2 * i] + 4.0 * values[2 * i + 1] + values[2 * i + 2]);
    return acc.value() * (width / static_cast<double>(n)) / 6.0;
  };

  std::size_t n = 1;
  double previous = composite(n);
  int level = 0;
  for (; level < std::min(kGlobalLevels, max_depth); ++level) {
    std::size_t points = 4 * n;
    std::vector<double> refined(points + 1);
    for (std::size_t j = 0; j <= points; ++j) {
      if (j % 2 == 0) {
        refined[j] = values[j / 2];
      } else {
        refined[j] = f(a + width * static_cast<double>(j) / static_cast<double>(points));
      }
    }
    values = std::move(refined);
    n *= 2;
    double current = composite(n);
    double delta = current - previous;
    if (level + 1 >= kMinLevel && std::fabs(delta) <= tol) return current + delta / 15.0;
    previous = current;
  }

  Accumulator acc;
  const double h = width / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = a + h * static_cast<double>(i);
    double hi = i + 1 == n ? b : a + h * static_cast<double>(i + 1);
    double mid = a + width * static_cast<double>(2 * i + 1) / static_cast<double>(2 * n);
    double whole = (hi - lo) / 6.0 * (values[2 * i] + 4.0 * values[2 * i + 1] + values[2 * i + 2]);
    acc.add(simpson_step(f, lo, values[2 * i], mid, values[2 * i + 1], hi, values[2 * i + 2], whole,
                         tol / static_cast<double>(n), max_depth - level));
  }
  return acc.value();
}

MassResult mass_report(const Measure& mu, const Region& r, double tol) {
  Measure ref = r.reference();
  auto density = [&](const Point& x) {
    LogWeight l = logdensity(mu, ref, x);
    if (l.is_undefined()) throw UndefinedDensityError("density of " + describe(mu) + " undefined at " + to_string(x));
    return l.exp();
  };
  MassResult result;
  result.value = integrate(r, density, tol, result.tail_warning);
  return result;
}

double mass(const Measure& mu, const Region& r, double tol) { return mass_report(mu, r, tol).value; }

double additivity_check(const Measure& mu, const Region& a, const Region& b, double tol) {
  bool intervals = a.kind() == Region::Kind::Interval && b.kind() == Region::Kind::Interval;
  bool ranges = a.kind() == Region::Kind::IntegerRange && b.kind() == Region::Kind::IntegerRange;
  if (!intervals && !ranges) throw DomainError("additivity_check needs two intervals or two integer ranges");

  double ma = mass(mu, a, tol);
  double mb = mass(mu, b, tol);
  double lo = std::max(a.lo(), b.lo());
  double hi = std::min(a.hi(), b.hi());
  // Integer ranges are inclusive: they meet when lo <= hi.
  bool meet = intervals ? lo < hi : lo <= hi;

  double m_union = 0.0;
  double m_inter = 0.0;
  if (meet) {
    m_union = mass(mu, hull(a, b), tol);
    m_inter = intervals ? mass(mu, Region::interval(lo, hi), tol)
                        : mass(mu, Region::integer_range(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)), tol);
  } else if (intervals) {
    m_union = mass(mu, hull(a, b), tol) - mass(mu, Region::interval(hi, lo), tol);
  } else {
    auto gap_lo = static_cast<std::int64_t>(hi) + 1;
    auto gap_hi = static_cast<std::int64_t>(lo) - 1;
    m_union = mass(mu, hull(a, b), tol);
    if (gap_lo <= gap_hi) m_union -= mass(mu, Region::integer_range(gap_lo, gap_hi), tol);
  }
  return std::fabs(m_union + m_inter - ma - mb);
}

double mc_mean(const Measure& mu, const std::function<double(const Point&)>& f, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("mc_mean needs n > 0");
  Accumulator acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(f(sample(mu, split_seed(seed, i))));
  return acc.value() / static_cast<double>(n);
}

}  // namespace measures
