#pragma once

#include <string>

#include "json.hpp"

#include "measures/error.hpp"
#include "measures/measure.hpp"
#include "measures/point.hpp"

namespace measures {

// Malformed expression document; the message starts with the JSON path.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& detail) : Error(path + ": " + detail) {}
};

// Expression documents are single-key objects naming the node kind:
//   {"Normal":{"mu":0,"sigma":1}}
//   {"Superpose":[{"Scale":{"logw":-0.6931,"of":{"Dirac":{"a":0}}}}, ...]}
//   {"Pushforward":{"mode":"Forward","sigma":2,"x0":1,"of":{...}}}
//   {"Chain":{"initial":{...},"step":{"family":"Normal","maps":{"mu":"identity"}}}}
Measure parse_expr(const nlohmann::json& doc);
// Throws Error for expressions holding opaque functions.
nlohmann::json print_expr(const Measure& mu);

Kernel parse_kernel(const nlohmann::json& doc, const std::string& path = "$");
nlohmann::json print_kernel(const Kernel& k);

// Numbers become reals (integers stay integers); arrays become tuples.
Point parse_point(const nlohmann::json& doc, const std::string& path = "$");
nlohmann::json print_point(const Point& p);

}  // namespace measures
