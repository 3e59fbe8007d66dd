#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "measures/cli.hpp"
#include "measures/expr_json.hpp"
#include "test_support.hpp"

using namespace measures;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "measure");
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kNormal = R"({"Normal":{"mu":0,"sigma":1}})";
const std::string kLebesgue = R"({"Lebesgue":{}})";
const std::string kCounting = R"({"Counting":{}})";
const std::string kWalk =
    R"({"Chain":{"initial":{"Normal":{"mu":0}},"step":{"family":"Normal","maps":{"mu":"identity","sigma":"const:1"}}}})";

std::vector<json> corpus() {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/expr_corpus.jsonl");
  std::vector<json> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) docs.push_back(json::parse(line));
  }
  return docs;
}

}  // namespace

TEST_CASE("parse_expr examples") {
  CHECK(parse_expr(json::parse(kNormal)) == fixtures::normal(0, 1));
  Measure nb = parse_expr(json::parse(R"({"NegativeBinomial":{"alpha":10,"beta":3}})"));
  CHECK(nb == fixtures::negbin_ab(10, 3));
  CHECK_THROWS_WITH_AS(parse_expr(json::parse(R"({"Normal":{"mu":0,"tau":1}})")),
                       doctest::Contains("unknown parameterization {mu,tau}"), ParseError);
}

TEST_CASE("parse errors name the offending path") {
  auto message = [](const char* text) {
    try {
      parse_expr(json::parse(text));
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"Superpose":[{"Normal":{}},{"Normal":{"sigma":-1}}]})").rfind("$.Superpose[1].Normal", 0) == 0);
  CHECK(message(R"({"Scale":{"logw":0,"of":{"Lebesgue":{}},"extra":1}})").rfind("$.Scale.extra: unknown key", 0) == 0);
  CHECK(message(R"({"Gamma":{}})").rfind("$: unknown measure kind", 0) == 0);
  CHECK(message(R"({"Superpose":[{"Normal":{}}]})").rfind("$.Superpose: needs at least 2", 0) == 0);
  CHECK(message(R"({"Power":{"of":{"Normal":{}},"shape":[0]}})").rfind("$.Power.shape[0]", 0) == 0);
  CHECK(message(R"({"Pushforward":{"mode":"Forward","psi":2,"of":{"Normal":{}}}})").rfind("$.Pushforward.psi", 0) == 0);
  CHECK(message(R"({"Pushforward":{"mode":"Forward","sigma":0,"of":{"Normal":{}}}})").rfind("$.Pushforward", 0) == 0);
  CHECK(message(R"({"Bind":{"of":{"Normal":{}},"kernel":{"family":"Normal","maps":{"mu":"exp"}}}})")
            .rfind("$.Bind.kernel.maps.mu", 0) == 0);
  CHECK(message(R"({"Normal":{},"Poisson":{}})").rfind("$: expected an object with exactly one key", 0) == 0);
  CHECK(message(R"({"Dirac":{"a":"x"}})").rfind("$.Dirac.a", 0) == 0);
}

TEST_CASE("print/parse round trip over the corpus") {
  auto docs = corpus();
  REQUIRE(docs.size() == 50);
  for (const auto& doc : docs) {
    CAPTURE(doc.dump());
    Measure first = parse_expr(doc);
    json printed = print_expr(first);
    Measure second = parse_expr(printed);
    CHECK(first == second);
    CHECK(print_expr(second).dump() == printed.dump());
  }
}

TEST_CASE("opaque functions are not serialized") {
  Measure f = integrate_density([](const Point&) { return 1.0; }, lebesgue());
  CHECK_THROWS_AS(print_expr(f), Error);
  Kernel k = Kernel::from_function([](const Point& x) { return dirac(x); });
  CHECK_THROWS_AS(print_kernel(k), Error);
}

TEST_CASE("points") {
  CHECK(parse_point(json::parse("[1, 2.5, [3]]")) == Point::tuple({1, 2.5, Point::tuple({3})}));
  CHECK(parse_point(json::parse("3")).is_integer());
  CHECK(print_point(Point::tuple({1, 0.5})).dump() == "[1,0.5]");
  CHECK_THROWS_AS(parse_point(json::parse("{}")), ParseError);
}

TEST_CASE("logdensity command") {
  Result r = run({"logdensity", "--expr", kNormal, "--wrt", kLebesgue, "--at", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "-1.4189385332046727\n");

  r = run({"logdensity", "--expr", R"({"Dirac":{"a":0}})", "--wrt", kCounting, "--at", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == "-inf\n");

  r = run({"logdensity", "--expr", kLebesgue, "--wrt", kCounting, "--at", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unrelated primitive measures") != std::string::npos);

  r = run({"logdensity", "--expr", kCounting, "--wrt", R"({"Dirac":{"a":0}})", "--at", "5"});
  CHECK(r.out == "inf\n");
  r = run({"logdensity", "--expr", R"({"Dirac":{"a":0}})", "--wrt", R"({"Dirac":{"a":1}})", "--at", "0"});
  CHECK(r.out == "undefined\n");
  CHECK(r.code == 0);

  r = run({"logdensity", "--expr", R"({"Normal":{"sigma":2}})", "--at", "2"});
  CHECK(r.out == "-0.5\n");
  r = run({"logdensity", "--expr", R"({"Normal":{"sigma":2}})", "--wrt", "base", "--at", "2"});
  CHECK(r.out == "-0.5\n");
  r = run({"logdensity", "--expr", kNormal, "--at", "0"});
  CHECK(r.out == "0\n");
}

TEST_CASE("logdensity command input errors exit 1") {
  CHECK(run({"logdensity", "--expr", kNormal, "--at", "[1,2]"}).code == 1);
  CHECK(run({"logdensity", "--expr", kNormal, "--at", "nope"}).code == 1);
  CHECK(run({"logdensity", "--expr", R"({"Normal":{"mu":0,"tau":1}})", "--at", "0"}).code == 1);
  CHECK(run({"logdensity", "--expr", "/nonexistent/file.json", "--at", "0"}).code == 1);
  CHECK(run({"logdensity", "--expr", "{not json", "--at", "0"}).code == 1);
  CHECK(run({"logdensity", "--at", "0"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("expressions can be read from files") {
  std::string path = "cli_test_expr.json";
  {
    std::ofstream out(path);
    out << kNormal;
  }
  Result r = run({"logdensity", "--expr", path, "--wrt", kLebesgue, "--at", "1"});
  CHECK(r.out == "-1.4189385332046727\n");
  std::remove(path.c_str());
}

TEST_CASE("sample command") {
  Result r = run({"sample", "--expr", R"({"Dirac":{"a":3}})", "-n", "2", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "3\n3\n");

  Result a = run({"sample", "--expr", kNormal, "-n", "5", "--seed", "123"});
  Result b = run({"sample", "--expr", kNormal, "-n", "5", "--seed", "123"});
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 5);

  Result c1 = run({"sample", "--expr", kWalk, "-n", "2", "--seed", "9", "--take", "3"});
  Result c2 = run({"sample", "--expr", kWalk, "-n", "2", "--seed", "9", "--take", "3"});
  CHECK(c1.code == 0);
  CHECK(c1.out == c2.out);
  CHECK(c1.out.front() == '[');

  CHECK(run({"sample", "--expr", kLebesgue, "-n", "1", "--seed", "1"}).code == 1);
  CHECK(run({"sample", "--expr", kNormal, "-n", "1", "--seed", "1", "--take", "3"}).code == 1);
  CHECK(run({"sample", "--expr", kNormal, "--seed", "1"}).code == 1);
}

TEST_CASE("check command") {
  Result r = run({"check", "--expr", kNormal, "--lo", "-8", "--hi", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find(" PASS\n") != std::string::npos);
  CHECK(std::stod(r.out) == doctest::Approx(1.0).epsilon(1e-7));

  r = run({"check", "--expr", R"({"Scale":{"logw":-0.6931471805599453,"of":{"Normal":{}}}})", "--lo", "-8", "--hi", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find(" FAIL\n") != std::string::npos);
  CHECK(std::stod(r.out) == doctest::Approx(0.5).epsilon(1e-7));

  r = run({"check", "--expr", R"({"Uniform01":{}})", "--lo", "0", "--hi", "1"});
  CHECK(r.out.find(" PASS\n") != std::string::npos);

  r = run({"check", "--expr", R"({"Poisson":{"lambda":4}})", "--lo", "0", "--hi", "80", "--tol", "1e-10"});
  CHECK(r.out.find(" PASS\n") != std::string::npos);

  r = run({"check", "--expr", R"({"Poisson":{"lambda":4}})", "--lo", "0", "--hi", "3"});
  CHECK(r.out.find(" FAIL\n") != std::string::npos);
  CHECK(r.err.find("warning") != std::string::npos);

  const char* spike =
      R"({"Superpose":[{"Scale":{"logw":-0.6931471805599453,"of":{"Dirac":{"a":0}}}},{"Scale":{"logw":-0.6931471805599453,"of":{"Normal":{}}}}]})";
  r = run({"check", "--expr", spike, "--lo", "-8", "--hi", "8"});
  CHECK(r.code == 2);

  CHECK(run({"check", "--expr", kNormal, "--lo", "1", "--hi", "-1"}).code == 1);
  CHECK(run({"check", "--expr", kNormal, "--lo", "-1", "--hi", "1", "--tol", "0"}).code == 1);
}
