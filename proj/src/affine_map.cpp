#include "measures/affine_map.hpp"

#include <cmath>

#include "measures/error.hpp"

namespace measures {

LowerTriangular::LowerTriangular(const std::vector<std::vector<double>>& rows) : dim_(rows.size()) {
  if (dim_ == 0) throw DomainError("affine factor must be nonempty");
  data_.reserve(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    if (rows[r].size() != dim_) throw DomainError("affine factor must be square");
    for (std::size_t c = 0; c < dim_; ++c) {
      double v = rows[r][c];
      if (!std::isfinite(v)) throw DomainError("affine factor entries must be finite");
      if (c > r && v != 0.0) throw DomainError("affine factor must be lower-triangular");
      data_.push_back(v);
    }
    if (rows[r][r] == 0.0) throw DomainError("affine factor is singular");
  }
}

LowerTriangular LowerTriangular::scalar(double value) { return LowerTriangular(std::vector<std::vector<double>>{{value}}); }

std::vector<double> LowerTriangular::multiply(const std::vector<double>& v) const {
  std::vector<double> out(dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c <= r; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> LowerTriangular::solve(const std::vector<double>& v) const {
  std::vector<double> y(dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r) {
    double acc = v[r];
    for (std::size_t c = 0; c < r; ++c) acc -= (*this)(r, c) * y[c];
    y[r] = acc / (*this)(r, r);
  }
  return y;
}

double LowerTriangular::log_abs_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += std::log(std::fabs((*this)(i, i)));
  return s;
}

std::vector<std::vector<double>> LowerTriangular::rows() const {
  std::vector<std::vector<double>> out(dim_, std::vector<double>(dim_));
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) out[r][c] = (*this)(r, c);
  }
  return out;
}

AffineMap::AffineMap(Mode mode, bool scalar, LowerTriangular factor, std::vector<double> offset)
    : mode_(mode), scalar_(scalar), factor_(std::move(factor)), offset_(std::move(offset)) {
  if (offset_.size() != factor_.dim()) throw DomainError("affine offset has the wrong dimension");
  for (double v : offset_) {
    if (!std::isfinite(v)) throw DomainError("affine offset must be finite");
  }
}

AffineMap AffineMap::forward(double sigma, double x0) {
  return AffineMap(Mode::Forward, true, LowerTriangular::scalar(sigma), {x0});
}
AffineMap AffineMap::forward(LowerTriangular sigma, std::vector<double> x0) {
  return AffineMap(Mode::Forward, false, std::move(sigma), std::move(x0));
}
AffineMap AffineMap::inverse(double psi, double mu0) {
  return AffineMap(Mode::Inverse, true, LowerTriangular::scalar(psi), {mu0});
}
AffineMap AffineMap::inverse(LowerTriangular psi, std::vector<double> mu0) {
  return AffineMap(Mode::Inverse, false, std::move(psi), std::move(mu0));
}

std::vector<double> AffineMap::coords(const Point& p) const {
  if (scalar_) return {p.real()};
  const auto& elems = p.elements();
  if (elems.size() != dim()) {
    throw ShapeError("affine map of dimension " + std::to_string(dim()) + " applied to " + to_string(p));
  }
  std::vector<double> v;
  v.reserve(elems.size());
  for (const auto& e : elems) v.push_back(e.real());
  return v;
}

Point AffineMap::wrap(std::vector<double> v) const {
  if (scalar_) return Point(v[0]);
  return Point::reals(v);
}

Point AffineMap::apply(const Point& z) const {
  auto v = coords(z);
  std::vector<double> x;
  if (mode_ == Mode::Forward) {
    x = factor_.multiply(v);
  } else {
    x = factor_.solve(v);
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += offset_[i];
  return wrap(std::move(x));
}

Point AffineMap::invert(const Point& x) const {
  auto v = coords(x);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= offset_[i];
  return wrap(mode_ == Mode::Forward ? factor_.solve(v) : factor_.multiply(v));
}

double AffineMap::log_abs_jacobian() const {
  double ld = factor_.log_abs_det();
  return mode_ == Mode::Forward ? ld : -ld;
}

AffineMap AffineMap::inverse_map() const {
  // Forward(s, x0)^{-1}: x -> s^{-1} x - s^{-1} x0 = Inverse(s, -s^{-1} x0).
  // Inverse(p, m)^{-1}:  z -> p z - p m          = Forward(p, -p m).
  std::vector<double> shifted =
      mode_ == Mode::Forward ? factor_.solve(offset_) : factor_.multiply(offset_);
  for (double& v : shifted) v = -v;
  Mode flipped = mode_ == Mode::Forward ? Mode::Inverse : Mode::Forward;
  return AffineMap(flipped, scalar_, factor_, std::move(shifted));
}

}  // namespace measures
