#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace measures {

// Extended-real log-density value: finite, +inf, -inf, or Undefined.
//
// Undefined is a tagged state rather than a floating NaN, so the raw value of
// a defined weight is never NaN. Constructing from NaN yields Undefined.
class LogWeight {
 public:
  enum class Class { Finite, PosInf, NegInf, Undefined };

  constexpr LogWeight() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  LogWeight(double value) : value_(value), undefined_(std::isnan(value)) {
    if (undefined_) value_ = 0.0;
  }

  static LogWeight undefined() {
    LogWeight w;
    w.undefined_ = true;
    return w;
  }
  static LogWeight pos_inf() { return {std::numeric_limits<double>::infinity()}; }
  static LogWeight neg_inf() { return {-std::numeric_limits<double>::infinity()}; }

  bool is_undefined() const { return undefined_; }
  bool is_finite() const { return !undefined_ && std::isfinite(value_); }
  bool is_pos_inf() const { return !undefined_ && value_ == std::numeric_limits<double>::infinity(); }
  bool is_neg_inf() const { return !undefined_ && value_ == -std::numeric_limits<double>::infinity(); }

  Class classify() const {
    if (undefined_) return Class::Undefined;
    if (is_pos_inf()) return Class::PosInf;
    if (is_neg_inf()) return Class::NegInf;
    return Class::Finite;
  }

  // Raw value; quiet NaN for Undefined.
  double value() const { return undefined_ ? std::numeric_limits<double>::quiet_NaN() : value_; }

  // exp of the weight; NaN for Undefined.
  double exp() const { return undefined_ ? std::numeric_limits<double>::quiet_NaN() : std::exp(value_); }

  LogWeight operator-() const {
    if (undefined_) return *this;
    return {-value_};
  }

  friend LogWeight operator+(const LogWeight& a, const LogWeight& b) {
    if (a.undefined_ || b.undefined_) return undefined();
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) return undefined();
    return {a.value_ + b.value_};
  }
  friend LogWeight operator-(const LogWeight& a, const LogWeight& b) { return a + (-b); }
  LogWeight& operator+=(const LogWeight& other) { return *this = *this + other; }
  LogWeight& operator-=(const LogWeight& other) { return *this = *this - other; }

  // Exact comparison; Undefined equals only Undefined.
  friend bool operator==(const LogWeight& a, const LogWeight& b) {
    if (a.undefined_ || b.undefined_) return a.undefined_ == b.undefined_;
    return a.value_ == b.value_;
  }

 private:
  double value_ = 0.0;
  bool undefined_ = false;
};

// log(e^a + e^b) with a max-shift; Undefined propagates.
inline LogWeight logaddexp(const LogWeight& a, const LogWeight& b) {
  if (a.is_undefined() || b.is_undefined()) return LogWeight::undefined();
  if (a.is_neg_inf()) return b;
  if (b.is_neg_inf()) return a;
  if (a.is_pos_inf() || b.is_pos_inf()) return LogWeight::pos_inf();
  double hi = std::fmax(a.value(), b.value());
  double gap = -std::fabs(a.value() - b.value());
  return {hi + std::log1p(std::exp(gap))};
}

// log(1 + e^x), stable for large |x|.
inline LogWeight softplus(const LogWeight& x) {
  if (x.is_undefined()) return x;
  if (x.is_neg_inf()) return {0.0};
  if (x.is_pos_inf()) return x;
  double v = x.value();
  return {v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v))};
}

// "-inf", "inf", "undefined", or the value with 17 significant digits.
std::string to_string(const LogWeight& w);

}  // namespace measures
