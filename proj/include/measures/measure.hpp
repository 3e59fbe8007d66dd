#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "measures/affine_map.hpp"
#include "measures/log_weight.hpp"
#include "measures/point.hpp"

namespace measures {

struct Node;
struct Parameterization;

enum class Kind {
  Lebesgue,
  Counting,
  Dirac,
  Weighted,
  Parameterized,
  Product,
  Power,
  ForProduct,
  Bind,
  Superposition,
  PointwiseProduct,
  Pushforward,
  Chain,
  Density,
};

std::string_view kind_name(Kind kind);

// Immutable handle to a measure expression tree. Copies share the node.
class Measure {
 public:
  explicit Measure(Node node);

  Kind kind() const;
  const Node& node() const { return *node_; }

  // Payload of the given node type, or nullptr.
  template <class Payload>
  const Payload* as() const;

  // Structural equality: same kind, equal children, exactly equal parameters.
  // Kernels and density functions compare by identity.
  friend bool operator==(const Measure& a, const Measure& b);

 private:
  std::shared_ptr<const Node> node_;
};

// Shape descriptor of a sample space.
class Space {
 public:
  enum class Kind { Scalar, Tuple, Array, Sequence, Any };

  static Space scalar() { return Space(Kind::Scalar); }
  static Space any() { return Space(Kind::Any); }
  static Space tuple(std::vector<Space> elements);
  static Space array(Space element, std::size_t count);
  static Space sequence(Space element);

  Kind kind() const { return kind_; }
  const std::vector<Space>& elements() const { return elements_; }
  std::size_t count() const { return count_; }

  bool accepts(const Point& p) const;
  // True when some point could belong to both spaces.
  bool compatible(const Space& other) const;
  std::string to_string() const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  explicit Space(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::vector<Space> elements_;
  std::size_t count_ = 0;
};

// Scalar-valued map from a kernel argument to one parameter value.
class ParamMap {
 public:
  enum class Kind { Identity, Sqrt, Constant, Affine, Function };
  using Fn = std::function<double(const Point&)>;

  static ParamMap identity() { return ParamMap(Kind::Identity); }
  static ParamMap sqrt() { return ParamMap(Kind::Sqrt); }
  static ParamMap constant(double value);
  // x -> slope * x + intercept
  static ParamMap affine(double slope, double intercept);
  static ParamMap function(Fn fn);
  // "identity", "sqrt", "const:<v>", "affine:<a>:<b>"
  static ParamMap parse(std::string_view text);

  Kind kind() const { return kind_; }
  double operator()(const Point& x) const;
  // Inverse of parse; throws Error for Function maps.
  std::string to_string() const;

  friend bool operator==(const ParamMap&, const ParamMap&) = default;

 private:
  explicit ParamMap(Kind kind) : kind_(kind) {}
  Kind kind_;
  double slope_ = 1.0;
  double intercept_ = 0.0;
  std::shared_ptr<const Fn> fn_;
};

// Measure-valued function of a point.
//
// Either a registered family plus one ParamMap per parameter name, or an
// opaque function. Family kernels take scalar arguments.
class Kernel {
 public:
  using Fn = std::function<Measure(const Point&)>;
  using Maps = std::vector<std::pair<std::string, ParamMap>>;

  // Prefer make_kernel(), which validates the family and names.
  static Kernel from_family(std::string family, Maps maps);
  static Kernel from_function(Fn fn, std::optional<Space> domain = std::nullopt);

  Measure operator()(const Point& x) const;

  bool is_family() const;
  const std::string& family() const;
  const Maps& maps() const;
  // Declared argument space, if known.
  const std::optional<Space>& domain() const;

  friend bool operator==(const Kernel& a, const Kernel& b);

 private:
  struct Impl;
  explicit Kernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Kernel plus observed data; not a measure.
struct Likelihood {
  Kernel kernel;
  Point data;
  friend bool operator==(const Likelihood&, const Likelihood&) = default;
};

using LogDensityFn = std::function<LogWeight(const Point&)>;

struct LebesgueNode {
  friend bool operator==(const LebesgueNode&, const LebesgueNode&) = default;
};
struct CountingNode {
  friend bool operator==(const CountingNode&, const CountingNode&) = default;
};
struct DiracNode {
  Point atom;
  friend bool operator==(const DiracNode&, const DiracNode&) = default;
};
struct WeightedNode {
  LogWeight log_weight;
  Measure base;
  friend bool operator==(const WeightedNode&, const WeightedNode&) = default;
};
struct ParameterizedNode {
  const Parameterization* form;
  std::vector<double> values;  // in the parameterization's canonical order
  friend bool operator==(const ParameterizedNode&, const ParameterizedNode&) = default;
};
struct ProductNode {
  std::vector<Measure> factors;
  friend bool operator==(const ProductNode&, const ProductNode&) = default;
};
struct PowerNode {
  Measure element;
  std::vector<std::size_t> shape;
  std::size_t count;  // product of shape
  friend bool operator==(const PowerNode&, const PowerNode&) = default;
};
struct ForProductNode {
  std::vector<Point> indices;
  Kernel kernel;
  friend bool operator==(const ForProductNode&, const ForProductNode&) = default;
};
struct BindNode {
  Measure source;
  Kernel kernel;
  friend bool operator==(const BindNode&, const BindNode&) = default;
};
struct SuperpositionNode {
  Measure first;
  Measure second;
  friend bool operator==(const SuperpositionNode&, const SuperpositionNode&) = default;
};
struct PointwiseProductNode {
  Measure prior;
  Likelihood likelihood;
  friend bool operator==(const PointwiseProductNode&, const PointwiseProductNode&) = default;
};
struct PushforwardNode {
  AffineMap map;
  Measure source;
  friend bool operator==(const PushforwardNode&, const PushforwardNode&) = default;
};
struct ChainNode {
  Measure initial;
  Kernel step;
  friend bool operator==(const ChainNode&, const ChainNode&) = default;
};
struct DensityNode {
  Measure base;
  std::shared_ptr<const LogDensityFn> log_density;
  bool log_space;  // built by integrate_exp rather than integrate_density
  friend bool operator==(const DensityNode&, const DensityNode&) = default;
};

struct Node {
  std::variant<LebesgueNode, CountingNode, DiracNode, WeightedNode, ParameterizedNode, ProductNode,
               PowerNode, ForProductNode, BindNode, SuperpositionNode, PointwiseProductNode,
               PushforwardNode, ChainNode, DensityNode>
      payload;
  friend bool operator==(const Node&, const Node&) = default;
};

template <class Payload>
const Payload* Measure::as() const {
  return std::get_if<Payload>(&node_->payload);
}

// Primitive measures on the reals.
Measure lebesgue();
Measure counting();
Measure dirac(Point atom);

// Short human-readable rendering, e.g. "Normal(mu=0,sigma=1)".
std::string describe(const Measure& mu);

// Height of the expression tree; leaves have depth 1.
std::size_t depth(const Measure& mu);

}  // namespace measures
