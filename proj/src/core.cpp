#include "measures/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "core_internal.hpp"
#include "measures/catalog.hpp"
#include "measures/error.hpp"

namespace measures {

namespace detail {

namespace {

constexpr std::size_t kMaxChainLength = 64;

template <class Payload>
const Payload* get(const Measure& mu) {
  return mu.as<Payload>();
}

LogWeight superposition_logdensity(const SuperpositionNode& s, const Point& x) {
  Measure alpha = base_unchecked(s.first, x);
  Measure beta = base_unchecked(s.second, x);
  LogWeight f = logdensity_unchecked(s.first, x);
  LogWeight g = logdensity_unchecked(s.second, x);
  if (alpha == beta) return logaddexp(f, g) - LogWeight(std::numbers::ln2);
  // d(a+b) weights: f / (1 + (da/db)^{-1}) + g / (da/db + 1), with da/db
  // evaluated once.
  LogWeight r = relative(alpha, beta, x);
  return logaddexp(f - softplus(-r), g - softplus(r));
}

LogWeight sum_over(const std::vector<Measure>& factors, const Point& x) {
  const auto& xs = x.elements();
  LogWeight acc(0.0);
  for (std::size_t i = 0; i < factors.size(); ++i) acc += logdensity_unchecked(factors[i], xs[i]);
  return acc;
}

// Expression-local information whether base(mu, x) ignores x.
bool base_ignores_point(const Measure& mu) {
  switch (mu.kind()) {
    case Kind::Bind:
    case Kind::Chain:
    case Kind::ForProduct:
      return false;
    case Kind::Weighted: return base_ignores_point(get<WeightedNode>(mu)->base);
    case Kind::Product: {
      const auto& f = get<ProductNode>(mu)->factors;
      return std::all_of(f.begin(), f.end(), base_ignores_point);
    }
    case Kind::Power: return base_ignores_point(get<PowerNode>(mu)->element);
    case Kind::Superposition: {
      const auto* s = get<SuperpositionNode>(mu);
      return base_ignores_point(s->first) && base_ignores_point(s->second);
    }
    case Kind::PointwiseProduct: return base_ignores_point(get<PointwiseProductNode>(mu)->prior);
    case Kind::Pushforward: return base_ignores_point(get<PushforwardNode>(mu)->source);
    default: return true;
  }
}

bool all_kind(const std::vector<Measure>& ms, Kind k) {
  return std::all_of(ms.begin(), ms.end(), [k](const Measure& m) { return m.kind() == k; });
}

// The measure t_* m rewritten without the pushforward, when m is built from
// primitives: Lebesgue picks up the factor |dx/dz|^{-1}, atomic measures are
// carried over unchanged.
std::optional<Measure> resolve_pushforward(const AffineMap& t, const Measure& m) {
  const double minus_log_jac = -t.log_abs_jacobian();
  switch (m.kind()) {
    case Kind::Lebesgue:
      if (t.is_scalar()) return weighted(LogWeight(minus_log_jac), m);
      return std::nullopt;
    case Kind::Counting:
      if (t.is_scalar()) return m;
      return std::nullopt;
    case Kind::Dirac: return dirac(t.apply(get<DiracNode>(m)->atom));
    case Kind::Weighted: {
      const auto* w = get<WeightedNode>(m);
      if (auto inner = resolve_pushforward(t, w->base)) return weighted(w->log_weight, *inner);
      return std::nullopt;
    }
    case Kind::Power: {
      const auto* p = get<PowerNode>(m);
      if (t.is_scalar() || p->count != t.dim()) return std::nullopt;
      if (p->element.kind() == Kind::Lebesgue) return weighted(LogWeight(minus_log_jac), m);
      if (p->element.kind() == Kind::Counting) return m;
      return std::nullopt;
    }
    case Kind::Product: {
      const auto& f = get<ProductNode>(m)->factors;
      if (t.is_scalar() || f.size() != t.dim()) return std::nullopt;
      if (all_kind(f, Kind::Lebesgue)) return weighted(LogWeight(minus_log_jac), m);
      if (all_kind(f, Kind::Counting)) return m;
      return std::nullopt;
    }
    case Kind::Superposition: {
      const auto* s = get<SuperpositionNode>(m);
      auto a = resolve_pushforward(t, s->first);
      auto b = resolve_pushforward(t, s->second);
      if (a && b) return superposition_node(*a, *b);
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

Measure product_of_bases(const std::vector<Measure>& factors, const Point& x, const Measure& self) {
  const auto& xs = x.elements();
  std::vector<Measure> bases;
  bases.reserve(factors.size());
  bool unchanged = true;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    bases.push_back(base_unchecked(factors[i], xs[i]));
    unchanged = unchanged && bases.back() == factors[i];
  }
  if (unchanged && self.kind() == Kind::Product) return self;
  return product_node(std::move(bases));
}

std::vector<Measure> chain_factors(const ChainNode& c, const Point& prefix) {
  const auto& xs = prefix.elements();
  std::vector<Measure> steps;
  steps.reserve(xs.size());
  steps.push_back(c.initial);
  for (std::size_t i = 1; i < xs.size(); ++i) steps.push_back(c.step(xs[i - 1]));
  return steps;
}

std::vector<Measure> for_factors(const ForProductNode& f) {
  std::vector<Measure> out;
  out.reserve(f.indices.size());
  for (const auto& i : f.indices) out.push_back(f.kernel(i));
  return out;
}

// ---------------------------------------------------------------------------
// Rules relating two measures without descending their base chains.

bool is_primitive_kind(Kind k) { return k == Kind::Lebesgue || k == Kind::Counting || k == Kind::Dirac; }

// Components of a (possibly nested) superposition.
void flatten(const Measure& mu, std::vector<Measure>& out) {
  if (const auto* s = get<SuperpositionNode>(mu)) {
    flatten(s->first, out);
    flatten(s->second, out);
  } else {
    out.push_back(mu);
  }
}

void collect_terminals(const Measure& mu, const Point& x, std::vector<Measure>& out) {
  std::vector<Measure> parts;
  flatten(mu, parts);
  for (const auto& part : parts) {
    Measure end = chain_unchecked(part, x).back();
    if (end.kind() == Kind::Superposition) {
      collect_terminals(end, x, out);
    } else if (std::find(out.begin(), out.end(), end) == out.end()) {
      out.push_back(end);
    }
  }
}

// Reference measure against which two superpositions are compared. Depends
// only on the set of terminal measures, so the choice is order-independent.
Measure common_reference(const Measure& mu, const Measure& nu, const Point& x) {
  std::vector<Measure> terminals;
  collect_terminals(mu, x, terminals);
  collect_terminals(nu, x, terminals);
  if (terminals.size() == 1) return terminals.front();
  bool scalar_primitives = std::all_of(terminals.begin(), terminals.end(),
                                       [](const Measure& m) { return is_primitive_kind(m.kind()); });
  if (!scalar_primitives || !x.is_scalar()) {
    throw UnrelatedPrimitivesError("no common reference for " + describe(mu) + " and " + describe(nu));
  }
  bool has_lebesgue = false;
  bool atom_here = false;
  for (const auto& t : terminals) {
    if (t.kind() == Kind::Lebesgue) has_lebesgue = true;
    if (t.kind() == Kind::Counting && x.integral()) atom_here = true;
    if (const auto* d = get<DiracNode>(t); d && d->atom == x) atom_here = true;
  }
  if (atom_here || !has_lebesgue) return counting();
  return lebesgue();
}

std::optional<LogWeight> try_relative(const Measure& mu, const Measure& nu, const Point& x,
                                      std::optional<UnrelatedPrimitivesError>& failure) {
  try {
    return relative(mu, nu, x);
  } catch (const UnrelatedPrimitivesError& e) {
    if (!failure) failure = e;
    return std::nullopt;
  }
}

// d(a+b)/d(nu) = da/d(nu) + db/d(nu). A component unrelated to nu contributes
// nothing as long as the other component is related.
LogWeight superposition_against(const SuperpositionNode& s, const Measure& nu, const Point& x) {
  std::optional<UnrelatedPrimitivesError> failure;
  auto a = try_relative(s.first, nu, x, failure);
  auto b = try_relative(s.second, nu, x, failure);
  if (!a && !b) throw *failure;
  return logaddexp(a.value_or(LogWeight::neg_inf()), b.value_or(LogWeight::neg_inf()));
}

std::optional<LogWeight> direct_rule(const Measure& mu, const Measure& nu, const Point& x) {
  const auto* sm = get<SuperpositionNode>(mu);
  const auto* sn = get<SuperpositionNode>(nu);
  if (sm && sn) {
    Measure ref = common_reference(mu, nu, x);
    std::optional<UnrelatedPrimitivesError> failure;
    auto a = try_relative(mu, ref, x, failure);
    auto b = try_relative(nu, ref, x, failure);
    if (!a && !b) throw *failure;
    return a.value_or(LogWeight::neg_inf()) - b.value_or(LogWeight::neg_inf());
  }
  if (sm) return superposition_against(*sm, nu, x);
  if (sn) return -superposition_against(*sn, mu, x);

  const auto* pm = get<ProductNode>(mu);
  const auto* pn = get<ProductNode>(nu);
  if (pm && pn && pm->factors.size() == pn->factors.size()) {
    const auto& xs = x.elements();
    LogWeight acc(0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) acc += relative(pm->factors[i], pn->factors[i], xs[i]);
    return acc;
  }
  return std::nullopt;
}

// Table for distinct primitives, written for one orientation of each pair.
std::optional<LogWeight> primitive_rule_oriented(const Measure& mu, const Measure& nu, const Point& x) {
  const auto* da = get<DiracNode>(mu);
  if (da == nullptr) return std::nullopt;
  switch (nu.kind()) {
    case Kind::Dirac: return LogWeight::undefined();
    case Kind::Counting: return da->atom == x ? LogWeight(0.0) : LogWeight::neg_inf();
    case Kind::Lebesgue: return da->atom == x ? LogWeight::undefined() : LogWeight::neg_inf();
    default: return std::nullopt;
  }
}

LogWeight primitive_rule(const Measure& mu, const Measure& nu, const Point& x) {
  if (auto v = primitive_rule_oriented(mu, nu, x)) return *v;
  if (auto v = primitive_rule_oriented(nu, mu, x)) return -*v;
  if (mu.kind() == nu.kind()) return LogWeight(0.0);  // Lebesgue/Lebesgue, Counting/Counting
  throw UnrelatedPrimitivesError(describe(mu) + " and " + describe(nu));
}

// Factors of a Power or Product fixed point, expanded to one per coordinate.
std::optional<std::vector<Measure>> coordinate_factors(const Measure& m) {
  if (const auto* p = get<ProductNode>(m)) return p->factors;
  if (const auto* p = get<PowerNode>(m)) return std::vector<Measure>(p->count, p->element);
  return std::nullopt;
}

// Relation between the ends of two base chains.
LogWeight terminal_rule(const Measure& mu, const Measure& nu, const Point& x) {
  if (mu == nu) return LogWeight(0.0);
  if (auto d = direct_rule(mu, nu, x)) return *d;
  if (is_primitive_kind(mu.kind()) && is_primitive_kind(nu.kind())) return primitive_rule(mu, nu, x);
  auto fm = coordinate_factors(mu);
  auto fn = coordinate_factors(nu);
  if (fm && fn && fm->size() == fn->size()) {
    const auto& xs = x.elements();
    // Equal factors contribute exactly zero; skip them.
    LogWeight acc(0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if ((*fm)[i] == (*fn)[i]) continue;
      acc += relative((*fm)[i], (*fn)[i], xs[i]);
    }
    return acc;
  }
  throw UnrelatedPrimitivesError(describe(mu) + " and " + describe(nu));
}

LogWeight chain_sum(const std::vector<Measure>& chain, std::size_t stop, const Point& x) {
  LogWeight acc(0.0);
  for (std::size_t k = 0; k < stop; ++k) acc += logdensity_unchecked(chain[k], x);
  return acc;
}

}  // namespace

Measure weighted(LogWeight w, const Measure& mu) {
  if (w == LogWeight(0.0)) return mu;
  if (const auto* inner = mu.as<WeightedNode>()) return weighted(w + inner->log_weight, inner->base);
  return Measure(Node{WeightedNode{w, mu}});
}

LogWeight logdensity_unchecked(const Measure& mu, const Point& x) {
  const auto& p = mu.node().payload;
  switch (mu.kind()) {
    case Kind::Lebesgue:
    case Kind::Counting:
    case Kind::Dirac:
      return LogWeight(0.0);
    case Kind::Weighted:
      return std::get<WeightedNode>(p).log_weight;
    case Kind::Parameterized: {
      const auto& n = std::get<ParameterizedNode>(p);
      return n.form->logdensity(n.values, x);
    }
    case Kind::Product:
      return sum_over(std::get<ProductNode>(p).factors, x);
    case Kind::Power: {
      const auto& n = std::get<PowerNode>(p);
      LogWeight acc(0.0);
      for (const auto& xi : x.elements()) acc += logdensity_unchecked(n.element, xi);
      return acc;
    }
    case Kind::ForProduct:
      return sum_over(for_factors(std::get<ForProductNode>(p)), x);
    case Kind::Bind: {
      const auto& n = std::get<BindNode>(p);
      const auto& xy = x.elements();
      return logdensity_unchecked(n.source, xy[0]) + logdensity_unchecked(n.kernel(xy[0]), xy[1]);
    }
    case Kind::Superposition:
      return superposition_logdensity(std::get<SuperpositionNode>(p), x);
    case Kind::PointwiseProduct: {
      const auto& n = std::get<PointwiseProductNode>(p);
      return logdensity_unchecked(n.prior, x) +
             logdensity_unchecked(n.likelihood.kernel(x), n.likelihood.data);
    }
    case Kind::Pushforward: {
      const auto& n = std::get<PushforwardNode>(p);
      return logdensity_unchecked(n.source, n.map.invert(x));
    }
    case Kind::Chain: {
      const auto& n = std::get<ChainNode>(p);
      return sum_over(chain_factors(n, x), x);
    }
    case Kind::Density:
      return (*std::get<DensityNode>(p).log_density)(x);
  }
  return LogWeight::undefined();
}

Measure base_unchecked(const Measure& mu, const Point& x) {
  const auto& p = mu.node().payload;
  switch (mu.kind()) {
    case Kind::Lebesgue:
    case Kind::Counting:
    case Kind::Dirac:
      return mu;
    case Kind::Weighted:
      return std::get<WeightedNode>(p).base;
    case Kind::Parameterized: {
      const auto& n = std::get<ParameterizedNode>(p);
      return n.form->base(n.values);
    }
    case Kind::Product:
      return product_of_bases(std::get<ProductNode>(p).factors, x, mu);
    case Kind::Power: {
      const auto& n = std::get<PowerNode>(p);
      const auto& xs = x.elements();
      if (!base_ignores_point(n.element)) {
        return product_of_bases(std::vector<Measure>(n.count, n.element), x, mu);
      }
      // One evaluation of the element's base serves every coordinate; its
      // weight enters once, multiplied by the count.
      Measure b = base_unchecked(n.element, xs.front());
      if (b == n.element) return mu;
      if (const auto* w = b.as<WeightedNode>()) {
        LogWeight total = w->log_weight.is_finite()
                              ? LogWeight(w->log_weight.value() * static_cast<double>(n.count))
                              : w->log_weight;
        return weighted(total, power_node(w->base, n.shape, n.count));
      }
      return power_node(b, n.shape, n.count);
    }
    case Kind::ForProduct:
      return product_of_bases(for_factors(std::get<ForProductNode>(p)), x, mu);
    case Kind::Bind: {
      const auto& n = std::get<BindNode>(p);
      const auto& xy = x.elements();
      return product_node({base_unchecked(n.source, xy[0]), base_unchecked(n.kernel(xy[0]), xy[1])});
    }
    case Kind::Superposition: {
      const auto& n = std::get<SuperpositionNode>(p);
      Measure a = base_unchecked(n.first, x);
      Measure b = base_unchecked(n.second, x);
      if (a == n.first && b == n.second) return mu;
      return superposition_node(std::move(a), std::move(b));
    }
    case Kind::PointwiseProduct:
      return base_unchecked(std::get<PointwiseProductNode>(p).prior, x);
    case Kind::Pushforward: {
      const auto& n = std::get<PushforwardNode>(p);
      Measure b = base_unchecked(n.source, n.map.invert(x));
      if (auto resolved = resolve_pushforward(n.map, b)) return *resolved;
      if (b == n.source) return mu;
      return pushforward_node(n.map, std::move(b));
    }
    case Kind::Chain:
      return product_of_bases(chain_factors(std::get<ChainNode>(p), x), x, mu);
    case Kind::Density:
      return std::get<DensityNode>(p).base;
  }
  return mu;
}

std::vector<Measure> chain_unchecked(const Measure& mu, const Point& x) {
  std::vector<Measure> chain{mu};
  for (;;) {
    Measure b = base_unchecked(chain.back(), x);
    if (b == chain.back()) break;
    chain.push_back(std::move(b));
    if (chain.size() > kMaxChainLength) throw Error("base-measure chain of " + describe(mu) + " does not terminate");
  }
  return chain;
}

// log d(mu)/d(nu) = [sum of chain(mu) log-densities down to the meeting point]
//                 - [the same for nu] + [rule relating the two chain ends].
// Each side's sum is computed identically whichever argument it is, so
// swapping mu and nu negates the result exactly.
LogWeight relative(const Measure& mu, const Measure& nu, const Point& x) {
  if (mu == nu) return LogWeight(0.0);
  if (auto d = direct_rule(mu, nu, x)) return *d;

  auto cm = chain_unchecked(mu, x);
  auto cn = chain_unchecked(nu, x);
  for (std::size_t i = 0; i < cm.size(); ++i) {
    auto it = std::find(cn.begin(), cn.end(), cm[i]);
    if (it != cn.end()) {
      auto j = static_cast<std::size_t>(it - cn.begin());
      return chain_sum(cm, i, x) - chain_sum(cn, j, x);
    }
  }
  LogWeight d = chain_sum(cm, cm.size() - 1, x) - chain_sum(cn, cn.size() - 1, x);
  return d + terminal_rule(cm.back(), cn.back(), x);
}

}  // namespace detail

bool is_primitive(const Measure& mu) { return detail::is_primitive_kind(mu.kind()); }

Measure basemeasure(const Measure& mu, const Point& x) {
  check_point(mu, x);
  return detail::base_unchecked(mu, x);
}

LogWeight logdensity(const Measure& mu, const Point& x) {
  check_point(mu, x);
  return detail::logdensity_unchecked(mu, x);
}

LogWeight logdensity(const Measure& mu, const Measure& nu, const Point& x) {
  check_point(mu, x);
  check_point(nu, x);
  return detail::relative(mu, nu, x);
}

std::vector<Measure> base_chain(const Measure& mu, const Point& x) {
  check_point(mu, x);
  return detail::chain_unchecked(mu, x);
}

namespace {

Space point_space(const Point& p) {
  if (p.is_scalar()) return Space::scalar();
  std::vector<Space> elems;
  for (const auto& e : p.elements()) elems.push_back(point_space(e));
  return Space::tuple(std::move(elems));
}

}  // namespace

Space sample_space(const Measure& mu) {
  const auto& p = mu.node().payload;
  switch (mu.kind()) {
    case Kind::Lebesgue:
    case Kind::Counting:
    case Kind::Parameterized:
      return Space::scalar();
    case Kind::Dirac:
      return point_space(std::get<DiracNode>(p).atom);
    case Kind::Weighted:
      return sample_space(std::get<WeightedNode>(p).base);
    case Kind::Product: {
      std::vector<Space> elems;
      for (const auto& f : std::get<ProductNode>(p).factors) elems.push_back(sample_space(f));
      return Space::tuple(std::move(elems));
    }
    case Kind::Power: {
      const auto& n = std::get<PowerNode>(p);
      return Space::array(sample_space(n.element), n.count);
    }
    case Kind::ForProduct:
      return Space::array(Space::any(), std::get<ForProductNode>(p).indices.size());
    case Kind::Bind:
      return Space::tuple({sample_space(std::get<BindNode>(p).source), Space::any()});
    case Kind::Superposition:
      return sample_space(std::get<SuperpositionNode>(p).first);
    case Kind::PointwiseProduct:
      return sample_space(std::get<PointwiseProductNode>(p).prior);
    case Kind::Pushforward: {
      const auto& map = std::get<PushforwardNode>(p).map;
      return map.is_scalar() ? Space::scalar() : Space::array(Space::scalar(), map.dim());
    }
    case Kind::Chain:
      return Space::sequence(sample_space(std::get<ChainNode>(p).initial));
    case Kind::Density:
      return sample_space(std::get<DensityNode>(p).base);
  }
  return Space::any();
}

void check_point(const Measure& mu, const Point& x) {
  Space space = sample_space(mu);
  if (!space.accepts(x)) {
    throw ShapeError("point " + to_string(x) + " is not in the sample space " + space.to_string() + " of " +
                     describe(mu));
  }
}

}  // namespace measures
