#include "measures/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "measures/catalog.hpp"
#include "measures/core.hpp"
#include "measures/expr_json.hpp"
#include "measures/kernels.hpp"
#include "measures/random.hpp"
#include "measures/verify.hpp"

namespace measures::cli {

namespace {

// Bad input from the user; exits with kUsage.
struct UsageError : Error {
  using Error::Error;
};

nlohmann::json load_document(const std::string& arg, const std::string& what) {
  std::string text;
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read " + what + " file '" + arg + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(what + ": invalid JSON: " + e.what());
  }
}

Point parse_point_arg(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("--at: invalid JSON point: " + std::string(e.what()));
  }
  return parse_point(doc, "--at");
}

void cmd_logdensity(const std::string& expr, const std::string& wrt, const std::string& at, std::ostream& out) {
  Measure mu = parse_expr(load_document(expr, "--expr"));
  Point x = parse_point_arg(at);
  LogWeight value = wrt.empty() || wrt == "base" ? logdensity(mu, x)
                                                 : logdensity(mu, parse_expr(load_document(wrt, "--wrt")), x);
  out << to_string(value) << '\n';
}

void cmd_sample(const std::string& expr, std::int64_t n, std::uint64_t seed, std::optional<std::int64_t> take,
                std::ostream& out) {
  Measure mu = parse_expr(load_document(expr, "--expr"));
  if (n < 0) throw UsageError("-n must be nonnegative");
  if (const auto* c = mu.as<ChainNode>()) {
    std::int64_t k = take.value_or(1);
    if (k <= 0) throw UsageError("--take must be positive");
    ChainSpec spec{c->initial, c->step};
    for (std::int64_t i = 0; i < n; ++i) {
      auto prefix = sample_chain(spec, split_seed(seed, static_cast<std::uint64_t>(i))).take(static_cast<std::size_t>(k));
      out << to_string(Point(Point::Tuple(prefix.begin(), prefix.end()))) << '\n';
    }
    return;
  }
  if (take) throw UsageError("--take applies only to Chain expressions");
  for (std::int64_t i = 0; i < n; ++i) out << to_string(sample(mu, split_seed(seed, static_cast<std::uint64_t>(i)))) << '\n';
}

bool atomic_reference(const Measure& mu, const Point& x) {
  Kind end = base_chain(mu, x).back().kind();
  return end == Kind::Counting || end == Kind::Dirac;
}

void cmd_check(const std::string& expr, double lo, double hi, double tol, std::ostream& out, std::ostream& err) {
  Measure mu = parse_expr(load_document(expr, "--expr"));
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");
  Region region = Region::interval(0.0, 1.0);
  try {
    if (atomic_reference(mu, Point(lo))) {
      region = Region::integer_range(static_cast<std::int64_t>(std::ceil(lo)), static_cast<std::int64_t>(std::floor(hi)));
    } else {
      region = Region::interval(lo, hi);
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  MassResult m = mass_report(mu, region, tol);
  if (m.tail_warning) err << "warning: last summed term exceeds the tolerance; the range may be too short\n";
  bool pass = std::fabs(m.value - 1.0) <= 10.0 * tol;
  out << format_real(m.value) << (pass ? " PASS" : " FAIL") << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate, sample and check measure expressions", args.empty() ? "measure" : args[0]};
  app.require_subcommand(1);

  std::string expr;
  std::string wrt;
  std::string at;
  auto* ld = app.add_subcommand("logdensity", "Log-density of --expr against --wrt (default: its base measure)");
  ld->add_option("--expr", expr, "Expression JSON file (or inline JSON object)")->required();
  ld->add_option("--wrt", wrt, "Reference expression file, or \"base\"");
  ld->add_option("--at", at, "Evaluation point as JSON")->required();

  std::int64_t n = 1;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> take;
  auto* sm = app.add_subcommand("sample", "Draw reproducible samples, one per line");
  sm->add_option("--expr", expr, "Expression JSON file (or inline JSON object)")->required();
  sm->add_option("-n", n, "Number of draws")->required();
  sm->add_option("--seed", seed, "64-bit seed")->required();
  sm->add_option("--take", take, "Prefix length for Chain expressions");

  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-8;
  auto* ck = app.add_subcommand("check", "Mass over [lo, hi] compared with 1");
  ck->add_option("--expr", expr, "Expression JSON file (or inline JSON object)")->required();
  ck->add_option("--lo", lo, "Lower end")->required();
  ck->add_option("--hi", hi, "Upper end")->required();
  ck->add_option("--tol", tol, "Absolute tolerance (PASS when |mass - 1| <= 10 tol)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*ld) cmd_logdensity(expr, wrt, at, out);
    if (*sm) cmd_sample(expr, n, seed, take, out);
    if (*ck) cmd_check(expr, lo, hi, tol, out, err);
  } catch (const UnrelatedPrimitivesError& e) {
    err << "error: " << e.what() << '\n';
    return kMeasureFailure;
  } catch (const UndefinedDensityError& e) {
    err << "error: " << e.what() << '\n';
    return kMeasureFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kSuccess;
}

}  // namespace measures::cli
