#include "measures/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "core_internal.hpp"
#include "measures/catalog.hpp"
#include "measures/core.hpp"
#include "measures/error.hpp"
#include "measures/param_set.hpp"
#include "measures/random.hpp"

namespace measures {

Kernel make_kernel(std::string_view family, Kernel::Maps maps) {
  const Family* fam = find_family(family);
  if (fam == nullptr) throw DomainError("kernel: unknown family " + std::string(family));
  std::vector<std::string> names;
  for (auto& [name, map] : maps) {
    name = canonical_param_name(name);
    if (!fam->has_parameter(name)) {
      throw DomainError("kernel: family " + fam->name + " has no parameter " + name);
    }
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw DomainError("kernel: parameter " + name + " given twice");
    }
    names.push_back(name);
  }
  if (fam->match(names) == nullptr) {
    ParamSet shown;
    for (const auto& n : names) shown.set(n, 0.0);
    throw DomainError(fam->name + ": unknown parameterization " + shown.name_set());
  }
  return Kernel::from_family(fam->name, std::move(maps));
}

Measure apply(const Kernel& k, const Point& x) { return k(x); }

ChainSpec chain(Kernel step, Measure initial) {
  auto m = total_mass(initial);
  if (!m || !(std::fabs(*m - 1.0) <= 1e-9)) throw NotProbabilityError("chain initial " + describe(initial));
  Space state = sample_space(initial);
  if (step.domain() && !step.domain()->compatible(state)) {
    throw ShapeError("chain: kernel takes " + step.domain()->to_string() + " but the initial measure lives on " +
                     state.to_string());
  }
  return {std::move(initial), std::move(step)};
}

Measure to_measure(const ChainSpec& spec) { return Measure(Node{ChainNode{spec.initial, spec.step}}); }

ChainSpec chain_spec(const Measure& chain_measure) {
  const auto* c = chain_measure.as<ChainNode>();
  if (c == nullptr) throw ShapeError("not a chain: " + describe(chain_measure));
  return {c->initial, c->step};
}

ChainSample::iterator::iterator(const ChainSample* owner, std::size_t index) : owner_(owner), index_(index) {
  current_ = sample(owner_->spec_.initial, split_seed(owner_->seed_, 0));
  for (std::size_t i = 1; i <= index; ++i) {
    current_ = sample(owner_->spec_.step(current_), split_seed(owner_->seed_, i));
  }
}

ChainSample::iterator& ChainSample::iterator::operator++() {
  ++index_;
  current_ = sample(owner_->spec_.step(current_), split_seed(owner_->seed_, index_));
  return *this;
}

std::vector<Point> ChainSample::take(std::size_t n) const {
  std::vector<Point> out;
  out.reserve(n);
  if (n == 0) return out;
  auto it = begin();
  out.push_back(*it);
  while (out.size() < n) out.push_back(*++it);
  return out;
}

ChainSample sample_chain(const ChainSpec& spec, std::uint64_t seed) { return {spec, seed}; }

LogWeight chain_logdensity(const ChainSpec& spec, const std::vector<Point>& prefix) {
  if (prefix.empty()) throw ShapeError("chain log-density of an empty prefix");
  LogWeight acc = logdensity(spec.initial, prefix[0]);
  for (std::size_t i = 1; i < prefix.size(); ++i) acc += logdensity(spec.step(prefix[i - 1]), prefix[i]);
  return acc;
}

}  // namespace measures
