#include "measures/point.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "measures/error.hpp"
#include "measures/log_weight.hpp"

namespace measures {

Point Point::reals(const std::vector<double>& values) {
  Tuple t;
  t.reserve(values.size());
  for (double v : values) t.emplace_back(v);
  return Point(std::move(t));
}

double Point::real() const {
  if (const auto* d = std::get_if<double>(&value_)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&value_)) return static_cast<double>(*i);
  throw ShapeError("expected a scalar point, got " + to_string(*this));
}

std::optional<std::int64_t> Point::integral() const {
  if (const auto* i = std::get_if<std::int64_t>(&value_)) return *i;
  if (const auto* d = std::get_if<double>(&value_)) {
    if (std::isfinite(*d) && std::nearbyint(*d) == *d && std::fabs(*d) < 9.0e15) {
      return static_cast<std::int64_t>(*d);
    }
    return std::nullopt;
  }
  throw ShapeError("expected a scalar point, got " + to_string(*this));
}

const Point::Tuple& Point::elements() const {
  if (const auto* t = std::get_if<Tuple>(&value_)) return *t;
  throw ShapeError("expected a tuple point, got " + to_string(*this));
}

bool operator==(const Point& a, const Point& b) {
  if (a.is_tuple() || b.is_tuple()) {
    if (!(a.is_tuple() && b.is_tuple())) return false;
    return a.elements() == b.elements();
  }
  if (a.is_integer() && b.is_integer()) return *a.integral() == *b.integral();
  return a.real() == b.real();
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(const Point& p) {
  if (p.is_tuple()) {
    std::string s = "[";
    const auto& elems = p.elements();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) s += ',';
      s += to_string(elems[i]);
    }
    return s + "]";
  }
  if (p.is_integer()) return std::to_string(*p.integral());
  return format_real(p.real());
}

std::string to_string(const LogWeight& w) {
  switch (w.classify()) {
    case LogWeight::Class::Undefined:
      return "undefined";
    case LogWeight::Class::PosInf:
      return "inf";
    case LogWeight::Class::NegInf:
      return "-inf";
    case LogWeight::Class::Finite:
      break;
  }
  return format_real(w.value());
}

}  // namespace measures
