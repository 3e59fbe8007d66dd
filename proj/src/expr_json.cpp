#include "measures/expr_json.hpp"

#include <cmath>
#include <limits>

#include "measures/catalog.hpp"
#include "measures/combinators.hpp"
#include "measures/kernels.hpp"
#include "measures/param_set.hpp"

namespace measures {

using nlohmann::json;

namespace {

std::string type_name(const json& j) { return j.type_name(); }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object, got " + type_name(j));
}

// Rejects keys outside `allowed`.
void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ParseError(path + "." + key, "unknown key");
  }
}

const json& field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError(path, "expected a number, got " + type_name(j));
}

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

LowerTriangular matrix(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected a number or a square matrix");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(number_list(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return LowerTriangular(rows);
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

std::pair<std::string, const json*> single_entry(const json& doc, const std::string& path) {
  if (!doc.is_object() || doc.size() != 1) {
    throw ParseError(path, "expected an object with exactly one key naming the measure kind");
  }
  auto it = doc.begin();
  return {it.key(), &it.value()};
}

Measure parse_at(const json& doc, const std::string& path);

std::vector<Measure> parse_list(const json& body, const std::string& path, std::size_t min_size) {
  if (!body.is_array()) throw ParseError(path, "expected an array of measures");
  if (body.size() < min_size) throw ParseError(path, "needs at least " + std::to_string(min_size) + " measures");
  std::vector<Measure> out;
  for (std::size_t i = 0; i < body.size(); ++i) out.push_back(parse_at(body[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Measure parse_pushforward(const json& body, const std::string& path) {
  check_keys(body, path, {"mode", "sigma", "x0", "psi", "mu0", "of"});
  const json& mode_j = field(body, path, "mode");
  if (!mode_j.is_string()) throw ParseError(path + ".mode", "expected \"Forward\" or \"Inverse\"");
  std::string mode = mode_j.get<std::string>();
  bool forward = mode == "Forward";
  if (!forward && mode != "Inverse") throw ParseError(path + ".mode", "expected \"Forward\" or \"Inverse\"");
  const char* factor_key = forward ? "sigma" : "psi";
  const char* offset_key = forward ? "x0" : "mu0";
  const char* stray = forward ? (body.contains("psi") ? "psi" : body.contains("mu0") ? "mu0" : nullptr)
                              : (body.contains("sigma") ? "sigma" : body.contains("x0") ? "x0" : nullptr);
  if (stray) throw ParseError(path + "." + stray, "not a parameter of mode " + mode);

  Measure source = parse_at(field(body, path, "of"), path + ".of");
  const json& factor = field(body, path, factor_key);
  std::string fpath = path + "." + factor_key;
  std::string opath = path + "." + offset_key;
  try {
    if (factor.is_array()) {
      LowerTriangular m = matrix(factor, fpath);
      std::vector<double> offset = body.contains(offset_key) ? number_list(body[offset_key], opath)
                                                             : std::vector<double>(m.dim(), 0.0);
      if (offset.size() != m.dim()) throw ParseError(opath, "length does not match the matrix");
      AffineMap map = forward ? AffineMap::forward(m, offset) : AffineMap::inverse(m, offset);
      return pushforward(map, source);
    }
    double f = number(factor, fpath);
    double offset = body.contains(offset_key) ? number(body[offset_key], opath) : 0.0;
    AffineMap map = forward ? AffineMap::forward(f, offset) : AffineMap::inverse(f, offset);
    return pushforward(map, source);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

Measure parse_family(const std::string& name, const json& body, const std::string& path) {
  require_object(body, path);
  ParamSet params;
  for (const auto& [key, value] : body.items()) {
    std::string canonical = canonical_param_name(key);
    if (params.contains(canonical)) throw ParseError(path + "." + key, "parameter given twice");
    params.set(canonical, number(value, path + "." + key));
  }
  try {
    return make_family(name, params);
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

Measure parse_at(const json& doc, const std::string& path) {
  auto [kind, body_ptr] = single_entry(doc, path);
  const json& body = *body_ptr;
  std::string here = path + "." + kind;

  if (kind == "Lebesgue" || kind == "Counting") {
    check_keys(body, here, {});
    return kind == "Lebesgue" ? lebesgue() : counting();
  }
  if (kind == "Dirac") {
    check_keys(body, here, {"a"});
    return dirac(parse_point(field(body, here, "a"), here + ".a"));
  }
  if (kind == "Scale") {
    check_keys(body, here, {"logw", "of"});
    double w = number(field(body, here, "logw"), here + ".logw");
    Measure of = parse_at(field(body, here, "of"), here + ".of");
    try {
      return scale(LogWeight(w), of);
    } catch (const Error& e) {
      throw ParseError(here + ".logw", e.what());
    }
  }
  if (kind == "Superpose") {
    auto parts = parse_list(body, here, 2);
    Measure acc = parts[0];
    try {
      for (std::size_t i = 1; i < parts.size(); ++i) acc = superpose(acc, parts[i]);
    } catch (const Error& e) {
      throw ParseError(here, e.what());
    }
    return acc;
  }
  if (kind == "Product") return product(parse_list(body, here, 1));
  if (kind == "Power") {
    check_keys(body, here, {"of", "shape"});
    Measure of = parse_at(field(body, here, "of"), here + ".of");
    const json& shape_j = field(body, here, "shape");
    if (!shape_j.is_array() || shape_j.empty()) throw ParseError(here + ".shape", "expected a nonempty array");
    std::vector<std::size_t> shape;
    for (std::size_t i = 0; i < shape_j.size(); ++i) {
      if (!shape_j[i].is_number_integer() || shape_j[i].get<std::int64_t>() <= 0) {
        throw ParseError(here + ".shape[" + std::to_string(i) + "]", "expected a positive integer");
      }
      shape.push_back(shape_j[i].get<std::size_t>());
    }
    return power(of, shape);
  }
  if (kind == "For") {
    check_keys(body, here, {"indices", "kernel"});
    const json& idx = field(body, here, "indices");
    if (!idx.is_array() || idx.empty()) throw ParseError(here + ".indices", "expected a nonempty array");
    std::vector<Point> indices;
    for (std::size_t i = 0; i < idx.size(); ++i) indices.push_back(parse_point(idx[i], here + ".indices[" + std::to_string(i) + "]"));
    return for_product(std::move(indices), parse_kernel(field(body, here, "kernel"), here + ".kernel"));
  }
  if (kind == "Bind") {
    check_keys(body, here, {"of", "kernel"});
    Measure of = parse_at(field(body, here, "of"), here + ".of");
    return bind(of, parse_kernel(field(body, here, "kernel"), here + ".kernel"));
  }
  if (kind == "PointwiseProduct") {
    check_keys(body, here, {"prior", "likelihood"});
    Measure prior = parse_at(field(body, here, "prior"), here + ".prior");
    const json& lik = field(body, here, "likelihood");
    std::string lpath = here + ".likelihood";
    check_keys(lik, lpath, {"kernel", "data"});
    Likelihood l{parse_kernel(field(lik, lpath, "kernel"), lpath + ".kernel"),
                 parse_point(field(lik, lpath, "data"), lpath + ".data")};
    return pointwise_product(prior, std::move(l));
  }
  if (kind == "Pushforward") return parse_pushforward(body, here);
  if (kind == "Chain") {
    check_keys(body, here, {"initial", "step"});
    Measure initial = parse_at(field(body, here, "initial"), here + ".initial");
    Kernel step = parse_kernel(field(body, here, "step"), here + ".step");
    try {
      return to_measure(chain(step, initial));
    } catch (const Error& e) {
      throw ParseError(here, e.what());
    }
  }
  if (find_family(kind) != nullptr) return parse_family(kind, body, here);
  throw ParseError(path, "unknown measure kind \"" + kind + "\"");
}

json print_list(const std::vector<Measure>& ms) {
  json arr = json::array();
  for (const auto& m : ms) arr.push_back(print_expr(m));
  return arr;
}

json print_matrix(const LowerTriangular& m) {
  json rows = json::array();
  for (const auto& row : m.rows()) {
    json r = json::array();
    for (double v : row) r.push_back(number_json(v));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

Measure parse_expr(const json& doc) { return parse_at(doc, "$"); }

json print_expr(const Measure& mu) {
  const auto& p = mu.node().payload;
  switch (mu.kind()) {
    case Kind::Lebesgue: return {{"Lebesgue", json::object()}};
    case Kind::Counting: return {{"Counting", json::object()}};
    case Kind::Dirac: return {{"Dirac", {{"a", print_point(std::get<DiracNode>(p).atom)}}}};
    case Kind::Weighted: {
      const auto& n = std::get<WeightedNode>(p);
      if (n.log_weight.is_undefined()) throw Error("cannot print an undefined log-weight");
      return {{"Scale", {{"logw", number_json(n.log_weight.value())}, {"of", print_expr(n.base)}}}};
    }
    case Kind::Parameterized: {
      const auto& n = std::get<ParameterizedNode>(p);
      json body = json::object();
      for (std::size_t i = 0; i < n.values.size(); ++i) body[n.form->names[i]] = number_json(n.values[i]);
      return {{n.form->family, body}};
    }
    case Kind::Product: return {{"Product", print_list(std::get<ProductNode>(p).factors)}};
    case Kind::Power: {
      const auto& n = std::get<PowerNode>(p);
      return {{"Power", {{"of", print_expr(n.element)}, {"shape", n.shape}}}};
    }
    case Kind::ForProduct: {
      const auto& n = std::get<ForProductNode>(p);
      json idx = json::array();
      for (const auto& i : n.indices) idx.push_back(print_point(i));
      return {{"For", {{"indices", idx}, {"kernel", print_kernel(n.kernel)}}}};
    }
    case Kind::Bind: {
      const auto& n = std::get<BindNode>(p);
      return {{"Bind", {{"of", print_expr(n.source)}, {"kernel", print_kernel(n.kernel)}}}};
    }
    case Kind::Superposition: {
      // Left-nested sums print as one flat list.
      std::vector<Measure> parts;
      Measure cur = mu;
      while (const auto* s = cur.as<SuperpositionNode>()) {
        parts.push_back(s->second);
        cur = s->first;
      }
      parts.push_back(cur);
      return {{"Superpose", print_list({parts.rbegin(), parts.rend()})}};
    }
    case Kind::PointwiseProduct: {
      const auto& n = std::get<PointwiseProductNode>(p);
      json lik = {{"kernel", print_kernel(n.likelihood.kernel)}, {"data", print_point(n.likelihood.data)}};
      return {{"PointwiseProduct", {{"prior", print_expr(n.prior)}, {"likelihood", lik}}}};
    }
    case Kind::Pushforward: {
      const auto& n = std::get<PushforwardNode>(p);
      bool forward = n.map.mode() == AffineMap::Mode::Forward;
      json body = {{"mode", forward ? "Forward" : "Inverse"}, {"of", print_expr(n.source)}};
      json factor = n.map.is_scalar() ? number_json(n.map.factor()(0, 0)) : print_matrix(n.map.factor());
      json offset;
      if (n.map.is_scalar()) {
        offset = number_json(n.map.offset()[0]);
      } else {
        offset = json::array();
        for (double v : n.map.offset()) offset.push_back(number_json(v));
      }
      body[forward ? "sigma" : "psi"] = factor;
      body[forward ? "x0" : "mu0"] = offset;
      return {{"Pushforward", body}};
    }
    case Kind::Chain: {
      const auto& n = std::get<ChainNode>(p);
      return {{"Chain", {{"initial", print_expr(n.initial)}, {"step", print_kernel(n.step)}}}};
    }
    case Kind::Density:
      throw Error("measures defined by density functions cannot be serialized");
  }
  throw Error("unprintable measure");
}

Kernel parse_kernel(const json& doc, const std::string& path) {
  check_keys(doc, path, {"family", "maps"});
  const json& fam = field(doc, path, "family");
  if (!fam.is_string()) throw ParseError(path + ".family", "expected a family name");
  const json& maps_j = field(doc, path, "maps");
  require_object(maps_j, path + ".maps");
  Kernel::Maps maps;
  for (const auto& [key, value] : maps_j.items()) {
    if (!value.is_string()) throw ParseError(path + ".maps." + key, "expected a map string");
    try {
      maps.emplace_back(key, ParamMap::parse(value.get<std::string>()));
    } catch (const Error& e) {
      throw ParseError(path + ".maps." + key, e.what());
    }
  }
  try {
    return make_kernel(fam.get<std::string>(), std::move(maps));
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

json print_kernel(const Kernel& k) {
  if (!k.is_family()) throw Error("function kernels cannot be serialized");
  json maps = json::object();
  for (const auto& [name, map] : k.maps()) maps[name] = map.to_string();
  return {{"family", k.family()}, {"maps", maps}};
}

Point parse_point(const json& doc, const std::string& path) {
  if (doc.is_number_integer()) return Point(doc.get<std::int64_t>());
  if (doc.is_array()) {
    Point::Tuple elems;
    for (std::size_t i = 0; i < doc.size(); ++i) elems.push_back(parse_point(doc[i], path + "[" + std::to_string(i) + "]"));
    return Point(std::move(elems));
  }
  return Point(number(doc, path));
}

json print_point(const Point& p) {
  if (p.is_tuple()) {
    json arr = json::array();
    for (const auto& e : p.elements()) arr.push_back(print_point(e));
    return arr;
  }
  if (p.is_integer()) return *p.integral();
  return number_json(p.real());
}

}  // namespace measures
