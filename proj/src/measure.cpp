#include "measures/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "measures/catalog.hpp"
#include "measures/error.hpp"

namespace measures {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::Lebesgue: return "Lebesgue";
    case Kind::Counting: return "Counting";
    case Kind::Dirac: return "Dirac";
    case Kind::Weighted: return "Weighted";
    case Kind::Parameterized: return "Parameterized";
    case Kind::Product: return "Product";
    case Kind::Power: return "Power";
    case Kind::ForProduct: return "ForProduct";
    case Kind::Bind: return "Bind";
    case Kind::Superposition: return "Superposition";
    case Kind::PointwiseProduct: return "PointwiseProduct";
    case Kind::Pushforward: return "Pushforward";
    case Kind::Chain: return "Chain";
    case Kind::Density: return "Density";
  }
  return "?";
}

Measure::Measure(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

Kind Measure::kind() const { return static_cast<Kind>(node_->payload.index()); }

bool operator==(const Measure& a, const Measure& b) {
  return a.node_ == b.node_ || *a.node_ == *b.node_;
}

Measure lebesgue() {
  static const Measure instance{Node{LebesgueNode{}}};
  return instance;
}

Measure counting() {
  static const Measure instance{Node{CountingNode{}}};
  return instance;
}

Measure dirac(Point atom) { return Measure(Node{DiracNode{std::move(atom)}}); }

// ---------------------------------------------------------------------------
// Space

Space Space::tuple(std::vector<Space> elements) {
  Space s(Kind::Tuple);
  s.elements_ = std::move(elements);
  return s;
}

Space Space::array(Space element, std::size_t count) {
  Space s(Kind::Array);
  s.elements_ = {std::move(element)};
  s.count_ = count;
  return s;
}

Space Space::sequence(Space element) {
  Space s(Kind::Sequence);
  s.elements_ = {std::move(element)};
  return s;
}

bool Space::accepts(const Point& p) const {
  switch (kind_) {
    case Kind::Any:
      return true;
    case Kind::Scalar:
      return p.is_scalar();
    case Kind::Tuple: {
      if (!p.is_tuple() || p.size() != elements_.size()) return false;
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (!elements_[i].accepts(p[i])) return false;
      }
      return true;
    }
    case Kind::Array:
    case Kind::Sequence: {
      if (!p.is_tuple()) return false;
      if (kind_ == Kind::Array ? p.size() != count_ : p.size() == 0) return false;
      return std::all_of(p.elements().begin(), p.elements().end(),
                         [&](const Point& e) { return elements_[0].accepts(e); });
    }
  }
  return false;
}

bool Space::compatible(const Space& other) const {
  if (kind_ == Kind::Any || other.kind_ == Kind::Any) return true;
  if (kind_ == Kind::Scalar || other.kind_ == Kind::Scalar) return kind_ == other.kind_;
  auto element_at = [](const Space& s, std::size_t i) -> const Space& {
    return s.kind_ == Kind::Tuple ? s.elements_[i] : s.elements_[0];
  };
  auto fixed_size = [](const Space& s) -> std::ptrdiff_t {
    if (s.kind_ == Kind::Tuple) return static_cast<std::ptrdiff_t>(s.elements_.size());
    if (s.kind_ == Kind::Array) return static_cast<std::ptrdiff_t>(s.count_);
    return -1;
  };
  std::ptrdiff_t na = fixed_size(*this);
  std::ptrdiff_t nb = fixed_size(other);
  if (na >= 0 && nb >= 0 && na != nb) return false;
  std::ptrdiff_t n = (na == 0 || nb == 0) ? 0 : std::max<std::ptrdiff_t>({na, nb, 1});
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!element_at(*this, i).compatible(element_at(other, i))) return false;
  }
  return true;
}

std::string Space::to_string() const {
  switch (kind_) {
    case Kind::Any: return "any";
    case Kind::Scalar: return "scalar";
    case Kind::Array: return elements_[0].to_string() + "^" + std::to_string(count_);
    case Kind::Sequence: return "sequence<" + elements_[0].to_string() + ">";
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) s += ",";
        s += elements_[i].to_string();
      }
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ParamMap

ParamMap ParamMap::constant(double value) {
  ParamMap m(Kind::Constant);
  m.slope_ = 0.0;
  m.intercept_ = value;
  return m;
}

ParamMap ParamMap::affine(double slope, double intercept) {
  ParamMap m(Kind::Affine);
  m.slope_ = slope;
  m.intercept_ = intercept;
  return m;
}

ParamMap ParamMap::function(Fn fn) {
  ParamMap m(Kind::Function);
  m.fn_ = std::make_shared<const Fn>(std::move(fn));
  return m;
}

namespace {

double parse_number(std::string_view text, std::string_view whole) {
  std::string s(text);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DomainError("bad number in parameter map '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

ParamMap ParamMap::parse(std::string_view text) {
  if (text == "identity") return identity();
  if (text == "sqrt") return sqrt();
  if (text.starts_with("const:")) return constant(parse_number(text.substr(6), text));
  if (text.starts_with("affine:")) {
    auto rest = text.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw DomainError("affine map needs 'affine:<a>:<b>'");
    return affine(parse_number(rest.substr(0, colon), text), parse_number(rest.substr(colon + 1), text));
  }
  throw DomainError("unknown parameter map '" + std::string(text) + "'");
}

double ParamMap::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::Identity: return x.real();
    case Kind::Sqrt: return std::sqrt(x.real());
    case Kind::Constant: return intercept_;
    case Kind::Affine: return slope_ * x.real() + intercept_;
    case Kind::Function: return (*fn_)(x);
  }
  return 0.0;
}

std::string ParamMap::to_string() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Sqrt: return "sqrt";
    case Kind::Constant: return "const:" + format_real(intercept_);
    case Kind::Affine: return "affine:" + format_real(slope_) + ":" + format_real(intercept_);
    case Kind::Function: break;
  }
  throw Error("function parameter maps cannot be serialized");
}

// ---------------------------------------------------------------------------
// Kernel

struct Kernel::Impl {
  std::string family;
  Maps maps;
  std::shared_ptr<const Fn> fn;
  std::optional<Space> domain;
};

Kernel Kernel::from_family(std::string family, Maps maps) {
  auto impl = std::make_shared<Impl>();
  impl->family = std::move(family);
  impl->maps = std::move(maps);
  impl->domain = Space::scalar();
  return Kernel(std::move(impl));
}

Kernel Kernel::from_function(Fn fn, std::optional<Space> domain) {
  auto impl = std::make_shared<Impl>();
  impl->fn = std::make_shared<const Fn>(std::move(fn));
  impl->domain = std::move(domain);
  return Kernel(std::move(impl));
}

Measure Kernel::operator()(const Point& x) const {
  if (impl_->fn) return (*impl_->fn)(x);
  ParamSet params;
  for (const auto& [name, map] : impl_->maps) params.set(name, map(x));
  return make_family(impl_->family, params);
}

bool Kernel::is_family() const { return impl_->fn == nullptr; }
const std::string& Kernel::family() const { return impl_->family; }
const Kernel::Maps& Kernel::maps() const { return impl_->maps; }
const std::optional<Space>& Kernel::domain() const { return impl_->domain; }

bool operator==(const Kernel& a, const Kernel& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.impl_->fn || b.impl_->fn) return a.impl_->fn == b.impl_->fn;
  return a.impl_->family == b.impl_->family && a.impl_->maps == b.impl_->maps;
}

// ---------------------------------------------------------------------------

std::string describe(const Measure& mu) {
  const auto& p = mu.node().payload;
  if (std::holds_alternative<LebesgueNode>(p)) return "Lebesgue";
  if (std::holds_alternative<CountingNode>(p)) return "Counting";
  if (const auto* d = std::get_if<DiracNode>(&p)) return "Dirac(" + to_string(d->atom) + ")";
  if (const auto* w = std::get_if<WeightedNode>(&p)) {
    return "Weighted(" + to_string(w->log_weight) + "," + describe(w->base) + ")";
  }
  if (const auto* n = std::get_if<ParameterizedNode>(&p)) {
    std::string s = n->form->family + "(";
    for (std::size_t i = 0; i < n->values.size(); ++i) {
      if (i) s += ",";
      s += n->form->names[i] + "=" + format_real(n->values[i]);
    }
    return s + ")";
  }
  if (const auto* n = std::get_if<ProductNode>(&p)) {
    std::string s = "Product(";
    for (std::size_t i = 0; i < n->factors.size(); ++i) {
      if (i) s += ",";
      s += describe(n->factors[i]);
    }
    return s + ")";
  }
  if (const auto* n = std::get_if<PowerNode>(&p)) {
    return "Power(" + describe(n->element) + "," + std::to_string(n->count) + ")";
  }
  if (const auto* n = std::get_if<SuperpositionNode>(&p)) {
    return "Superposition(" + describe(n->first) + "," + describe(n->second) + ")";
  }
  if (const auto* n = std::get_if<PushforwardNode>(&p)) return "Pushforward(" + describe(n->source) + ")";
  if (const auto* n = std::get_if<PointwiseProductNode>(&p)) {
    return "PointwiseProduct(" + describe(n->prior) + ")";
  }
  if (const auto* n = std::get_if<BindNode>(&p)) return "Bind(" + describe(n->source) + ")";
  if (const auto* n = std::get_if<ChainNode>(&p)) return "Chain(" + describe(n->initial) + ")";
  if (const auto* n = std::get_if<DensityNode>(&p)) return "Density(" + describe(n->base) + ")";
  return std::string(kind_name(mu.kind()));
}

std::size_t depth(const Measure& mu) {
  const auto& p = mu.node().payload;
  std::size_t below = 0;
  auto see = [&](const Measure& child) { below = std::max(below, depth(child)); };
  if (const auto* n = std::get_if<WeightedNode>(&p)) see(n->base);
  if (const auto* n = std::get_if<ProductNode>(&p)) {
    for (const auto& f : n->factors) see(f);
  }
  if (const auto* n = std::get_if<PowerNode>(&p)) see(n->element);
  if (const auto* n = std::get_if<BindNode>(&p)) see(n->source);
  if (const auto* n = std::get_if<SuperpositionNode>(&p)) {
    see(n->first);
    see(n->second);
  }
  if (const auto* n = std::get_if<PointwiseProductNode>(&p)) see(n->prior);
  if (const auto* n = std::get_if<PushforwardNode>(&p)) see(n->source);
  if (const auto* n = std::get_if<ChainNode>(&p)) see(n->initial);
  if (const auto* n = std::get_if<DensityNode>(&p)) see(n->base);
  return below + 1;
}

}  // namespace measures
