#include <cmath>
#include <limits>

#include "measures/catalog.hpp"
#include "measures/error.hpp"

namespace measures {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> product_mass(const std::vector<Measure>& factors) {
  double m = 1.0;
  for (const auto& f : factors) {
    auto fm = total_mass(f);
    if (!fm) return std::nullopt;
    if (*fm == 0.0) return 0.0;
    m *= *fm;
  }
  return m;
}

Point draw(const Measure& mu, std::uint64_t seed);

Point draw_each(const std::vector<Measure>& factors, std::uint64_t seed) {
  Point::Tuple out;
  out.reserve(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) out.push_back(draw(factors[i], split_seed(seed, i)));
  return {std::move(out)};
}

// Draw from mu normalized; the caller has checked the mass.
Point draw(const Measure& mu, std::uint64_t seed) {
  const auto& p = mu.node().payload;
  switch (mu.kind()) {
    case Kind::Dirac:
      return std::get<DiracNode>(p).atom;
    case Kind::Parameterized: {
      const auto& n = std::get<ParameterizedNode>(p);
      RandomStream rng(seed);
      return n.form->sample(n.values, rng);
    }
    case Kind::Weighted:
      return draw(std::get<WeightedNode>(p).base, seed);
    case Kind::Product:
      return draw_each(std::get<ProductNode>(p).factors, seed);
    case Kind::Power: {
      const auto& n = std::get<PowerNode>(p);
      Point::Tuple out;
      out.reserve(n.count);
      for (std::size_t i = 0; i < n.count; ++i) out.push_back(draw(n.element, split_seed(seed, i)));
      return {std::move(out)};
    }
    case Kind::ForProduct: {
      const auto& n = std::get<ForProductNode>(p);
      Point::Tuple out;
      out.reserve(n.indices.size());
      for (std::size_t i = 0; i < n.indices.size(); ++i) {
        out.push_back(sample(n.kernel(n.indices[i]), split_seed(seed, i)));
      }
      return {std::move(out)};
    }
    case Kind::Bind: {
      const auto& n = std::get<BindNode>(p);
      Point x = draw(n.source, split_seed(seed, 0));
      Point y = sample(n.kernel(x), split_seed(seed, 1));
      return Point::tuple({x, y});
    }
    case Kind::Superposition: {
      const auto& n = std::get<SuperpositionNode>(p);
      double a = *total_mass(n.first);
      double b = *total_mass(n.second);
      RandomStream rng(split_seed(seed, 0));
      bool first = rng.uniform() * (a + b) < a;
      return draw(first ? n.first : n.second, split_seed(seed, 1));
    }
    case Kind::Pushforward: {
      const auto& n = std::get<PushforwardNode>(p);
      return n.map.apply(draw(n.source, seed));
    }
    case Kind::Chain:
      throw DomainError("chains are infinite sequences; use sample_chain for prefixes");
    default:
      break;
  }
  throw NotProbabilityError(describe(mu));
}

}  // namespace

std::optional<double> total_mass(const Measure& mu) {
  const auto& p = mu.node().payload;
  switch (mu.kind()) {
    case Kind::Lebesgue:
    case Kind::Counting:
      return kInf;
    case Kind::Dirac:
    case Kind::Parameterized:
    case Kind::Chain:
      return 1.0;
    case Kind::Weighted: {
      const auto& n = std::get<WeightedNode>(p);
      if (n.log_weight.is_neg_inf()) return 0.0;
      auto m = total_mass(n.base);
      if (!m || n.log_weight.is_undefined()) return std::nullopt;
      return n.log_weight.exp() * *m;
    }
    case Kind::Product:
      return product_mass(std::get<ProductNode>(p).factors);
    case Kind::Power: {
      const auto& n = std::get<PowerNode>(p);
      auto m = total_mass(n.element);
      if (!m) return std::nullopt;
      return std::pow(*m, static_cast<double>(n.count));
    }
    case Kind::ForProduct: {
      const auto& n = std::get<ForProductNode>(p);
      std::vector<Measure> factors;
      for (const auto& i : n.indices) factors.push_back(n.kernel(i));
      return product_mass(factors);
    }
    case Kind::Bind:
      return total_mass(std::get<BindNode>(p).source);
    case Kind::Superposition: {
      const auto& n = std::get<SuperpositionNode>(p);
      auto a = total_mass(n.first);
      auto b = total_mass(n.second);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Kind::Pushforward:
      return total_mass(std::get<PushforwardNode>(p).source);
    case Kind::PointwiseProduct:
    case Kind::Density:
      return std::nullopt;
  }
  return std::nullopt;
}

Point sample(const Measure& mu, std::uint64_t seed) {
  auto m = total_mass(mu);
  if (!m || !std::isfinite(*m) || !(*m > 0.0)) throw NotProbabilityError(describe(mu));
  return draw(mu, seed);
}

}  // namespace measures
