#pragma once

#include <vector>

#include "measures/error.hpp"
#include "measures/log_weight.hpp"
#include "measures/measure.hpp"
#include "measures/point.hpp"

namespace measures {

// True exactly for Lebesgue, Counting and Dirac.
bool is_primitive(const Measure& mu);

// Base measure of mu near x. Primitives are their own base.
Measure basemeasure(const Measure& mu, const Point& x);

// Log-density of mu with respect to basemeasure(mu, x). For parameterized
// families this is the data-dependent term only.
LogWeight logdensity(const Measure& mu, const Point& x);

// Local log-density d(mu)/d(nu) at x, by density recursion through both
// base-measure chains.
//
// Returns -inf where mu vanishes locally and nu does not, +inf in the reverse
// case, and Undefined where neither locally dominates the other. Throws
// UnrelatedPrimitivesError when the chains end at primitives with no rule
// relating them (Lebesgue against Counting). The result is exactly
// antisymmetric: logdensity(mu, nu, x) == -logdensity(nu, mu, x).
LogWeight logdensity(const Measure& mu, const Measure& nu, const Point& x);

// [mu, base(mu), base(base(mu)), ...] up to and including the first fixed
// point (a measure that is its own base).
std::vector<Measure> base_chain(const Measure& mu, const Point& x);

// Shape of mu's sample space.
Space sample_space(const Measure& mu);

// Throws ShapeError unless x lies in mu's sample space.
void check_point(const Measure& mu, const Point& x);

}  // namespace measures
