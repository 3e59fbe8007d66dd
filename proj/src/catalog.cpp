#include "measures/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "measures/error.hpp"

namespace measures {

namespace {

using Values = Parameterization::Values;

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<std::uint64_t> g_normal_weight_evaluations{0};

double lgamma_threadsafe(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

Measure weighted(double log_weight, Measure base) {
  return Measure(Node{WeightedNode{LogWeight(log_weight), std::move(base)}});
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool finite(double v) { return std::isfinite(v); }

// Nonnegative integer value of a count point, or nullopt off the support.
std::optional<std::int64_t> count_value(const Point& y) {
  auto k = y.integral();
  if (!k || *k < 0) return std::nullopt;
  return k;
}

// Normal{mu, sigma}

void normal_validate(const Values& v) {
  require(finite(v[0]), "Normal: mu must be finite");
  require(v[1] > 0.0 && finite(v[1]), "Normal: sigma must be positive");
}
LogWeight normal_logdensity(const Values& v, const Point& x) {
  double z = (x.real() - v[0]) / v[1];
  return {-0.5 * z * z};
}
Measure normal_base(const Values& v) {
  g_normal_weight_evaluations.fetch_add(1, std::memory_order_relaxed);
  return weighted(-std::log(v[1]) - kHalfLog2Pi, lebesgue());
}
Point normal_sample(const Values& v, RandomStream& rng) { return {v[0] + v[1] * rng.normal()}; }

// NegativeBinomial{r, p}

void negbin_rp_validate(const Values& v) {
  require(v[0] > 0.0 && finite(v[0]), "NegativeBinomial: r must be positive");
  require(v[1] > 0.0 && v[1] < 1.0, "NegativeBinomial: p must lie in (0, 1)");
}
LogWeight negbin_rp_logdensity(const Values& v, const Point& y) {
  auto k = count_value(y);
  if (!k) return LogWeight::neg_inf();
  double r = v[0];
  double p = v[1];
  double yk = static_cast<double>(*k);
  return {log_binomial(yk + r - 1.0, r - 1.0) + r * std::log(p) + yk * std::log(1.0 - p)};
}
Point negbin_rp_sample(const Values& v, RandomStream& rng) {
  double rate = rng.gamma(v[0]) * (1.0 - v[1]) / v[1];
  return {rng.poisson(rate)};
}

// NegativeBinomial{alpha, beta}

void negbin_ab_validate(const Values& v) {
  require(v[0] > 0.0 && finite(v[0]), "NegativeBinomial: alpha must be positive");
  require(v[1] > 0.0 && finite(v[1]), "NegativeBinomial: beta must be positive");
}
LogWeight negbin_ab_logdensity(const Values& v, const Point& y) {
  auto k = count_value(y);
  if (!k) return LogWeight::neg_inf();
  double alpha = v[0];
  double beta = v[1];
  double yk = static_cast<double>(*k);
  return {log_binomial(yk + alpha - 1.0, alpha - 1.0) + alpha * std::log(beta / (beta + 1.0)) +
          yk * std::log(1.0 / (beta + 1.0))};
}
Point negbin_ab_sample(const Values& v, RandomStream& rng) {
  double rate = rng.gamma(v[0]) / v[1];
  return {rng.poisson(rate)};
}

// Uniform01{}

void no_validate(const Values&) {}
LogWeight uniform_logdensity(const Values&, const Point& x) {
  double v = x.real();
  return v >= 0.0 && v <= 1.0 ? LogWeight(0.0) : LogWeight::neg_inf();
}
Measure lebesgue_base(const Values&) { return lebesgue(); }
Point uniform_sample(const Values&, RandomStream& rng) { return {rng.uniform()}; }

// Bernoulli{p}

void bernoulli_validate(const Values& v) { require(v[0] >= 0.0 && v[0] <= 1.0, "Bernoulli: p must lie in [0, 1]"); }
LogWeight bernoulli_logdensity(const Values& v, const Point& y) {
  auto k = count_value(y);
  if (!k || *k > 1) return LogWeight::neg_inf();
  return {*k == 1 ? std::log(v[0]) : std::log(1.0 - v[0])};
}
Measure counting_base(const Values&) { return counting(); }
Point bernoulli_sample(const Values& v, RandomStream& rng) {
  return {static_cast<std::int64_t>(rng.uniform() < v[0] ? 1 : 0)};
}

// Poisson{lambda}

void rate_validate(const Values& v) { require(v[0] > 0.0 && finite(v[0]), "rate lambda must be positive"); }
LogWeight poisson_logdensity(const Values& v, const Point& y) {
  auto k = count_value(y);
  if (!k) return LogWeight::neg_inf();
  double yk = static_cast<double>(*k);
  return {yk * std::log(v[0]) - v[0] - lgamma_threadsafe(yk + 1.0)};
}
Point poisson_sample(const Values& v, RandomStream& rng) { return {rng.poisson(v[0])}; }

// Exponential{lambda}

LogWeight exponential_logdensity(const Values& v, const Point& x) {
  double t = x.real();
  return t >= 0.0 ? LogWeight(-v[0] * t) : LogWeight::neg_inf();
}
Measure exponential_base(const Values& v) { return weighted(std::log(v[0]), lebesgue()); }
Point exponential_sample(const Values& v, RandomStream& rng) { return {-std::log(rng.uniform()) / v[0]}; }

std::vector<Family> build_families() {
  std::vector<Family> out;
  out.push_back({"Normal",
                 {{"Normal", {"mu", "sigma"}, {0.0, 1.0}, normal_validate, normal_logdensity, normal_base,
                   normal_sample}}});
  out.push_back({"NegativeBinomial",
                 {{"NegativeBinomial", {"r", "p"}, {std::nullopt, std::nullopt}, negbin_rp_validate,
                   negbin_rp_logdensity, counting_base, negbin_rp_sample},
                  {"NegativeBinomial", {"alpha", "beta"}, {std::nullopt, std::nullopt}, negbin_ab_validate,
                   negbin_ab_logdensity, counting_base, negbin_ab_sample}}});
  out.push_back({"Uniform01",
                 {{"Uniform01", {}, {}, no_validate, uniform_logdensity, lebesgue_base, uniform_sample}}});
  out.push_back({"Bernoulli",
                 {{"Bernoulli", {"p"}, {std::nullopt}, bernoulli_validate, bernoulli_logdensity, counting_base,
                   bernoulli_sample}}});
  out.push_back({"Poisson",
                 {{"Poisson", {"lambda"}, {std::nullopt}, rate_validate, poisson_logdensity, counting_base,
                   poisson_sample}}});
  out.push_back({"Exponential",
                 {{"Exponential", {"lambda"}, {std::nullopt}, rate_validate, exponential_logdensity,
                   exponential_base, exponential_sample}}});
  return out;
}

}  // namespace

const Parameterization* Family::match(const std::vector<std::string>& given) const {
  for (const auto& form : forms) {
    bool ok = std::all_of(given.begin(), given.end(), [&](const std::string& n) {
      return std::find(form.names.begin(), form.names.end(), n) != form.names.end();
    });
    for (std::size_t i = 0; ok && i < form.names.size(); ++i) {
      bool present = std::find(given.begin(), given.end(), form.names[i]) != given.end();
      ok = present || form.defaults[i].has_value();
    }
    if (ok) return &form;
  }
  return nullptr;
}

bool Family::has_parameter(std::string_view name) const {
  return std::any_of(forms.begin(), forms.end(), [&](const Parameterization& f) {
    return std::find(f.names.begin(), f.names.end(), name) != f.names.end();
  });
}

const std::vector<Family>& families() {
  static const std::vector<Family> registry = build_families();
  return registry;
}

const Family* find_family(std::string_view name) {
  for (const auto& f : families()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Measure make_family(std::string_view family, const ParamSet& params) {
  const Family* fam = find_family(family);
  if (fam == nullptr) throw DomainError("unknown measure family '" + std::string(family) + "'");
  const Parameterization* form = fam->match(params.names());
  if (form == nullptr) {
    throw DomainError(fam->name + ": unknown parameterization " + params.name_set());
  }
  Values values;
  values.reserve(form->names.size());
  for (std::size_t i = 0; i < form->names.size(); ++i) {
    auto v = params.get(form->names[i]);
    values.push_back(v ? *v : *form->defaults[i]);
  }
  form->validate(values);
  return Measure(Node{ParameterizedNode{form, std::move(values)}});
}

Measure make_normal(const ParamSet& params) { return make_family("Normal", params); }

Measure make_negbinomial(const ParamSet& params) { return make_family("NegativeBinomial", params); }

Measure make_simple(std::string_view kind, const ParamSet& params) {
  if (kind == "Dirac") {
    if (params.size() != 1 || !params.contains("a")) {
      throw DomainError("Dirac: unknown parameterization " + params.name_set());
    }
    double a = *params.get("a");
    require(finite(a), "Dirac: atom must be finite");
    if (auto k = Point(a).integral()) return dirac(Point(*k));
    return dirac(Point(a));
  }
  static constexpr std::string_view kSimple[] = {"Uniform01", "Bernoulli", "Poisson", "Exponential"};
  if (std::find(std::begin(kSimple), std::end(kSimple), kind) == std::end(kSimple)) {
    throw DomainError("unknown simple measure '" + std::string(kind) + "'");
  }
  return make_family(kind, params);
}

std::string_view family_name(const ParameterizedNode& node) { return node.form->family; }

ParamSet params_of(const ParameterizedNode& node) {
  ParamSet out;
  for (std::size_t i = 0; i < node.values.size(); ++i) out.set(node.form->names[i], node.values[i]);
  return out;
}

std::uint64_t normal_weight_evaluations() {
  return g_normal_weight_evaluations.load(std::memory_order_relaxed);
}

void reset_normal_weight_evaluations() { g_normal_weight_evaluations.store(0, std::memory_order_relaxed); }

double log_binomial(double n, double k) {
  return lgamma_threadsafe(n + 1.0) - lgamma_threadsafe(k + 1.0) - lgamma_threadsafe(n - k + 1.0);
}

}  // namespace measures
