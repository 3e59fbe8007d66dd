#pragma once

#include <cstddef>
#include <vector>

#include "measures/point.hpp"

namespace measures {

// Square lower-triangular matrix, row-major, with nonzero diagonal.
class LowerTriangular {
 public:
  LowerTriangular() = default;
  // `rows` must be square; entries above the diagonal must be zero.
  explicit LowerTriangular(const std::vector<std::vector<double>>& rows);
  static LowerTriangular scalar(double value);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

  std::vector<double> multiply(const std::vector<double>& v) const;
  // Forward substitution for L y = v.
  std::vector<double> solve(const std::vector<double>& v) const;
  double log_abs_det() const;
  std::vector<std::vector<double>> rows() const;

  friend bool operator==(const LowerTriangular&, const LowerTriangular&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Invertible affine map z -> x used by pushforwards.
//
// Forward(sigma, x0):  x = sigma z + x0.
// Inverse(psi, mu0):   z = psi (x - mu0), i.e. x = psi^{-1} z + mu0.
// A scalar map acts on scalar points; a k x k map acts on k-tuples of reals.
class AffineMap {
 public:
  enum class Mode { Forward, Inverse };

  static AffineMap forward(double sigma, double x0);
  static AffineMap forward(LowerTriangular sigma, std::vector<double> x0);
  static AffineMap inverse(double psi, double mu0);
  static AffineMap inverse(LowerTriangular psi, std::vector<double> mu0);

  Mode mode() const { return mode_; }
  bool is_scalar() const { return scalar_; }
  std::size_t dim() const { return factor_.dim(); }
  // sigma for Forward, psi for Inverse.
  const LowerTriangular& factor() const { return factor_; }
  // x0 for Forward, mu0 for Inverse.
  const std::vector<double>& offset() const { return offset_; }

  // z -> x
  Point apply(const Point& z) const;
  // x -> z
  Point invert(const Point& x) const;
  // log |dx/dz|: log|sigma| for Forward, -log|psi| for Inverse.
  double log_abs_jacobian() const;
  // The map x -> z, expressed in the opposite mode.
  AffineMap inverse_map() const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;

 private:
  AffineMap(Mode mode, bool scalar, LowerTriangular factor, std::vector<double> offset);
  std::vector<double> coords(const Point& p) const;
  Point wrap(std::vector<double> v) const;

  Mode mode_ = Mode::Forward;
  bool scalar_ = true;
  LowerTriangular factor_;
  std::vector<double> offset_;
};

}  // namespace measures
