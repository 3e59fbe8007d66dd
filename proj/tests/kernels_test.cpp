#include <cmath>

#include "doctest.h"

#include "test_support.hpp"

using namespace measures;
using namespace fixtures;

namespace {
const std::vector<Point> kPrintedPrefix{Point(-0.4931543737034523), Point(-0.5661895116186417),
                                        Point(-1.3286977670590228)};
}

TEST_CASE("make_kernel and apply") {
  Kernel k = make_kernel("Normal", {{"μ", ParamMap::identity()}, {"σ", ParamMap::sqrt()}});
  CHECK(apply(k, Point(4.0)) == normal(4, 2));
  Kernel c = make_kernel("Normal", {{"mu", ParamMap::identity()}, {"sigma", ParamMap::constant(1)}});
  CHECK(apply(c, Point(0.0)) == normal(0, 1));
  CHECK_THROWS_AS(apply(k, Point(-1.0)), DomainError);
  CHECK_THROWS_AS(make_kernel("Gamma", {{"mu", ParamMap::identity()}}), DomainError);
  CHECK_THROWS_AS(make_kernel("Normal", {{"tau", ParamMap::identity()}}), DomainError);
  CHECK_THROWS_AS(make_kernel("NegativeBinomial", {{"r", ParamMap::identity()}, {"beta", ParamMap::identity()}}),
                  DomainError);
}

TEST_CASE("parameter maps") {
  CHECK(ParamMap::parse("affine:2:1")(Point(3.0)) == 7.0);
  CHECK(ParamMap::parse("const:2.5")(Point(100.0)) == 2.5);
  CHECK(ParamMap::parse("sqrt")(Point(9.0)) == 3.0);
  CHECK(ParamMap::parse("affine:0.1:-3").to_string() == "affine:0.10000000000000001:-3");
  CHECK_THROWS_AS(ParamMap::parse("exp"), DomainError);
}

TEST_CASE("kernel purity") {
  Kernel k = walk_step();
  Generator gen(1);
  for (int i = 0; i < 50; ++i) {
    Point x(gen.uniform(-5, 5));
    CHECK(apply(k, x) == apply(k, x));
  }
}

TEST_CASE("chain construction") {
  CHECK_NOTHROW(gaussian_walk());
  Kernel stay = Kernel::from_function([](const Point& x) { return dirac(x); }, Space::scalar());
  ChainSpec constant = chain(stay, dirac(Point(0)));
  for (const auto& x : sample_chain(constant, 5).take(20)) CHECK(x == Point(0));

  Kernel pairs = Kernel::from_function([](const Point& x) { return product(dirac(x[0]), dirac(x[1])); },
                                       Space::tuple({Space::scalar(), Space::scalar()}));
  CHECK_THROWS_AS(chain(pairs, normal(0, 1)), ShapeError);
  CHECK_THROWS_AS(chain(walk_step(), lebesgue()), NotProbabilityError);
  CHECK_THROWS_AS(chain(walk_step(), scale(1.0, normal(0, 1))), NotProbabilityError);
}

TEST_CASE("chain samples are reproducible and lazily infinite") {
  ChainSample s = sample_chain(gaussian_walk(), 42);
  auto a = s.take(3);
  auto b = s.take(3);
  CHECK(a == b);
  std::size_t seen = 0;
  for (auto it = s.begin(); it != s.end(); ++it) {
    if (it.index() < 3) CHECK(*it == a[it.index()]);
    if (++seen == 1000) break;
  }
  CHECK(seen == 1000);
  CHECK_FALSE(sample_chain(gaussian_walk(), 43).take(3) == a);
}

TEST_CASE("Gaussian walk increments have mean zero") {
  auto xs = sample_chain(gaussian_walk(), 7).take(100001);
  double sum = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) sum += xs[i].real() - xs[i - 1].real();
  CHECK(std::fabs(sum / 100000.0) <= 4.0 / std::sqrt(100000.0));
}

TEST_CASE("chain log-density") {
  CHECK(chain_logdensity(gaussian_walk(), kPrintedPrefix).value() ==
        doctest::Approx(oracle::kGaussianWalk).epsilon(1e-12));
  CHECK(chain_logdensity(gaussian_walk(), {Point(0.0)}).value() == 0.0);
  CHECK_THROWS_AS(chain_logdensity(gaussian_walk(), {}), ShapeError);
  CHECK_THROWS_AS(chain_logdensity(gaussian_walk(), {Point::tuple({1.0, 2.0})}), ShapeError);
}

TEST_CASE("chain prefix additivity is exact") {
  ChainSpec walk = gaussian_walk();
  auto xs = sample_chain(walk, 3).take(50);
  for (std::size_t n = 2; n <= xs.size(); ++n) {
    std::vector<Point> prefix(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<Point> shorter(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n - 1));
    LogWeight whole = chain_logdensity(walk, prefix);
    LogWeight step = chain_logdensity(walk, shorter) + logdensity(apply(walk.step, xs[n - 2]), xs[n - 1]);
    CHECK(whole.value() == step.value());
  }
}

TEST_CASE("chain as a measure on finite prefixes") {
  Measure m = to_measure(gaussian_walk());
  Point prefix{Point::Tuple(kPrintedPrefix)};
  CHECK(logdensity(m, prefix).value() == chain_logdensity(gaussian_walk(), kPrintedPrefix).value());
  double with_constants = oracle::kGaussianWalk - 3 * (-oracle::kStdNormalAt0);
  CHECK(logdensity(m, power(lebesgue(), {3}), prefix).value() == doctest::Approx(with_constants).epsilon(1e-12));
  CHECK(chain_spec(m).initial == normal(0, 1));
  CHECK_THROWS_AS(chain_spec(normal(0, 1)), ShapeError);
  CHECK_THROWS_AS(sample(m, 1), DomainError);
}
