#pragma once

#include <string>

#include "json.hpp"
#include "quasidiff/boundary.hpp"
#include "quasidiff/regularize.hpp"
#include "quasidiff/triple.hpp"
#include "quasidiff/verify.hpp"

namespace quasidiff {

/// Malformed triple document; the message starts with a JSON pointer.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Positions and masses may be numbers or the strings "inf" / "-inf".
nlohmann::json to_json(ExtendedReal x);
ExtendedReal extended_from_json(const nlohmann::json& j, const std::string& where);

/// {"interval": {"l","r"}, "scale": {"breakpoints": [[x,y]...],
///  "jumps": [[x,left_gap,right_gap]...]}, "measure": {"pieces": [[a,b,density]...],
///  "atoms": [[x,mass]...]}}
nlohmann::json triple_to_json(const Triple& t);
/// Throws SchemaError for structural problems and Error for invalid values.
Triple triple_from_json(const nlohmann::json& j);
/// Parses text; reports the parser's byte offset on malformed JSON.
Triple triple_from_text(const std::string& text);

nlohmann::json measure_to_json(const MeasureSpec& m);
nlohmann::json validation_to_json(const ValidationReport& r);
nlohmann::json endpoint_class_to_json(const EndpointClass& c);
nlohmann::json package_to_json(const RegularizedPackage& p);
nlohmann::json feller_to_json(const FellerReport& r);
nlohmann::json comparison_to_json(const McComparison& c);
nlohmann::json suite_to_json(const SuiteReport& r);

/// Fixed layout with 17 significant digits so output is byte-stable.
std::string dump(const nlohmann::json& j);

}  // namespace quasidiff
