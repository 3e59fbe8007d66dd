#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string_view>
#include <vector>

#include "measures/log_weight.hpp"
#include "measures/measure.hpp"

namespace measures {

// kernel(family; name=map, ...). Throws DomainError for an unknown family or
// a parameter name the family does not use.
Kernel make_kernel(std::string_view family, Kernel::Maps maps);

// k(x)
Measure apply(const Kernel& k, const Point& x);

// Markov chain: x_1 ~ initial, x_{i+1} ~ step(x_i).
struct ChainSpec {
  Measure initial;
  Kernel step;
};

// Throws NotProbabilityError for an improper initial measure and ShapeError
// when the kernel's declared domain differs from the initial state space.
ChainSpec chain(Kernel step, Measure initial);

// Chain as a measure expression (kind Chain) on finite prefixes.
Measure to_measure(const ChainSpec& spec);
ChainSpec chain_spec(const Measure& chain_measure);

// Lazy infinite realization of a chain, fixed by its seed.
//
// Element i is drawn from step(x_{i-1}) with the seed split_seed(seed, i), so
// iterating twice reproduces the same sequence exactly.
class ChainSample {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Point;
    using difference_type = std::ptrdiff_t;
    using pointer = const Point*;
    using reference = const Point&;

    iterator() = default;
    iterator(const ChainSample* owner, std::size_t index);

    const Point& operator*() const { return current_; }
    const Point* operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    std::size_t index() const { return index_; }
    // Infinite sequence: never equal to the sentinel.
    friend bool operator==(const iterator&, std::default_sentinel_t) { return false; }

   private:
    const ChainSample* owner_ = nullptr;
    std::size_t index_ = 0;
    Point current_;
  };

  ChainSample(ChainSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {}

  iterator begin() const { return iterator(this, 0); }
  std::default_sentinel_t end() const { return {}; }

  std::vector<Point> take(std::size_t n) const;

  const ChainSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

 private:
  ChainSpec spec_;
  std::uint64_t seed_;
};

ChainSample sample_chain(const ChainSpec& spec, std::uint64_t seed);

// Data-dependent log-density of a finite prefix:
// logdensity(initial, x_1) + sum_i logdensity(step(x_{i-1}), x_i).
LogWeight chain_logdensity(const ChainSpec& spec, const std::vector<Point>& prefix);

}  // namespace measures
