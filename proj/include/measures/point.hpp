#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace measures {

// Element of a sample space: a real, an integer, or a tuple of points.
//
// Tuples also carry finite sequences (chain prefixes). Reals and integers
// compare numerically, so Point(3) == Point(3.0).
class Point {
 public:
  using Tuple = std::vector<Point>;

  Point() : value_(0.0) {}
  // NOLINTBEGIN(google-explicit-constructor)
  Point(double v) : value_(v) {}
  Point(int v) : value_(static_cast<std::int64_t>(v)) {}
  Point(std::int64_t v) : value_(v) {}
  Point(Tuple elements) : value_(std::move(elements)) {}
  // NOLINTEND(google-explicit-constructor)

  static Point tuple(std::initializer_list<Point> elements) { return Point(Tuple(elements)); }
  static Point reals(const std::vector<double>& values);

  bool is_scalar() const { return !is_tuple(); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(value_); }

  // Numeric value of a scalar; throws ShapeError for tuples.
  double real() const;
  // Integral value if the scalar holds an integer or an integral real.
  std::optional<std::int64_t> integral() const;

  // Elements of a tuple; throws ShapeError for scalars.
  const Tuple& elements() const;
  std::size_t size() const { return is_tuple() ? elements().size() : 1; }
  const Point& operator[](std::size_t i) const { return elements()[i]; }

  friend bool operator==(const Point& a, const Point& b);

 private:
  std::variant<double, std::int64_t, Tuple> value_;
};

// JSON-style rendering: integers bare, reals with 17 significant digits,
// tuples as [a,b,...].
std::string to_string(const Point& p);

// Shortest rendering of a double that round-trips ("%.17g", "-0" as "0").
std::string format_real(double v);

}  // namespace measures
