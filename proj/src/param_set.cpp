#include "measures/param_set.hpp"

#include <algorithm>

#include "measures/error.hpp"

namespace measures {

std::string canonical_param_name(std::string_view name) {
  static const std::pair<std::string_view, std::string_view> kAliases[] = {
      {"μ", "mu"}, {"σ", "sigma"}, {"α", "alpha"}, {"β", "beta"}, {"λ", "lambda"}, {"ψ", "psi"},
  };
  for (const auto& [greek, ascii] : kAliases) {
    if (name == greek) return std::string(ascii);
  }
  return std::string(name);
}

ParamSet::ParamSet(std::initializer_list<std::pair<std::string, double>> entries) {
  for (const auto& [name, value] : entries) set(name, value);
}

ParamSet& ParamSet::set(std::string_view name, double value) {
  std::string key = canonical_param_name(name);
  if (std::find(names_.begin(), names_.end(), key) != names_.end()) {
    throw DomainError("duplicate parameter '" + key + "'");
  }
  names_.push_back(std::move(key));
  values_.push_back(value);
  return *this;
}

std::optional<double> ParamSet::get(std::string_view name) const {
  std::string key = canonical_param_name(name);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == key) return values_[i];
  }
  return std::nullopt;
}

std::string ParamSet::name_set() const {
  std::string s = "{";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) s += ',';
    s += names_[i];
  }
  return s + "}";
}

}  // namespace measures
