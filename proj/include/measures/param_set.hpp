#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace measures {

// Ordered name -> value mapping selecting a parameterization of a family.
//
// Names are stored in ASCII form; the Greek spellings (μ, σ, α, β, λ, ψ) are
// accepted and mapped to mu, sigma, alpha, beta, lambda, psi.
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::initializer_list<std::pair<std::string, double>> entries);

  // Appends a parameter; throws DomainError on a duplicate name.
  ParamSet& set(std::string_view name, double value);

  std::optional<double> get(std::string_view name) const;
  bool contains(std::string_view name) const { return get(name).has_value(); }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& values() const { return values_; }

  // "{mu,tau}"
  std::string name_set() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

std::string canonical_param_name(std::string_view name);

}  // namespace measures
