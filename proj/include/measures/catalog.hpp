#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "measures/log_weight.hpp"
#include "measures/measure.hpp"
#include "measures/param_set.hpp"
#include "measures/random.hpp"

namespace measures {

// One named-parameter form of a family, e.g. NegativeBinomial{r,p}.
struct Parameterization {
  using Values = std::vector<double>;

  std::string family;
  std::vector<std::string> names;               // canonical order
  std::vector<std::optional<double>> defaults;  // per name; nullopt = required
  void (*validate)(const Values&);
  // Data-dependent log-density against `base`; -inf outside the support.
  LogWeight (*logdensity)(const Values&, const Point&);
  // Base measure carrying the constant and parameter-dependent terms.
  Measure (*base)(const Values&);
  Point (*sample)(const Values&, RandomStream&);
};

struct Family {
  std::string name;
  std::vector<Parameterization> forms;

  // Parameterization whose name set matches `names` after defaults, or null.
  const Parameterization* match(const std::vector<std::string>& names) const;
  bool has_parameter(std::string_view name) const;
};

// Registered families: Normal, NegativeBinomial, Uniform01, Bernoulli,
// Poisson, Exponential.
const std::vector<Family>& families();
const Family* find_family(std::string_view name);

// Builds a parameterized measure from any registered family. Throws
// DomainError for unknown families, unknown parameterizations and
// out-of-range values.
Measure make_family(std::string_view family, const ParamSet& params);

// Normal{mu,sigma} (defaults mu=0, sigma=1).
Measure make_normal(const ParamSet& params);
// NegativeBinomial in {r,p} or {alpha,beta}; the form is kept as given.
Measure make_negbinomial(const ParamSet& params);
// Uniform01, Bernoulli{p}, Poisson{lambda}, Exponential{lambda}, Dirac{a}.
Measure make_simple(std::string_view kind, const ParamSet& params);

// Family name and parameters of a parameterized measure.
std::string_view family_name(const ParameterizedNode& node);
ParamSet params_of(const ParameterizedNode& node);

// Total mass if it can be determined structurally; +inf for Lebesgue and
// Counting; nullopt for pointwise products and density-defined measures.
std::optional<double> total_mass(const Measure& mu);

// Deterministic draw from the normalization of mu. Throws NotProbabilityError
// unless mu has finite positive mass.
Point sample(const Measure& mu, std::uint64_t seed);

// Number of times a Normal base weight (-log sigma - log(2 pi)/2) has been
// evaluated in this process.
std::uint64_t normal_weight_evaluations();
void reset_normal_weight_evaluations();

// log C(n, k) for real n >= k >= 0 via log-gamma.
double log_binomial(double n, double k);

}  // namespace measures
