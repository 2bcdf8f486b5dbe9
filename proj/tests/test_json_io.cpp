#include "doctest.h"
#include "quasidiff/gallery.hpp"
#include "quasidiff/json_io.hpp"

using namespace quasidiff;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
  try {
    triple_from_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("gallery triples round trip through JSON") {
  for (const auto& name : gallery_names()) {
    CAPTURE(name);
    const Triple t = gallery_triple(name, {});
    const std::string text = dump(triple_to_json(t));
    const Triple back = triple_from_text(text);
    CHECK(dump(triple_to_json(back)) == text);
    const auto a = image_regularization(t), b = image_regularization(back);
    CHECK(dump(package_to_json(a)) == dump(package_to_json(b)));
  }
}

TEST_CASE("infinities are strings") {
  const json j = triple_to_json(bm_line());
  CHECK(j["interval"]["l"] == "-inf");
  CHECK(j["interval"]["r"] == "inf");
  CHECK(extended_from_json(json("inf"), "/x").is_pos_inf());
  CHECK(extended_from_json(json(2.5), "/x") == ExtendedReal(2.5));
  CHECK_THROWS_AS(extended_from_json(json("infinity"), "/x"), SchemaError);
  const json abs = triple_to_json(absorbing_bm());
  CHECK(abs["measure"]["atoms"][0][1] == "inf");
}

TEST_CASE("schema errors point at the offending member") {
  CHECK(error_of("{\"interval\": {\"l\": 0, \"r\": 1}}").find("/scale") != std::string::npos);
  CHECK(error_of("{\"interval\": {\"l\": 0, \"r\": 1}, \"scale\": {\"breakpoints\": [[0, 0], [1]]}}")
            .find("/scale/breakpoints/1") != std::string::npos);
  CHECK(error_of("{\"interval\": {\"l\": 0, \"r\": 1, \"q\": 2}, \"scale\": {\"breakpoints\": []}}")
            .find("/interval/q") != std::string::npos);
  CHECK(error_of("{\"interval\": {\"l\": \"x\", \"r\": 1}, \"scale\": {\"breakpoints\": []}}")
            .find("/interval/l") != std::string::npos);
  CHECK(error_of("{\"interval\": {\"l\": 0, \"r\": 1}, \"scale\": {\"breakpoints\": [[0, 0], [1, 1]]},"
                 " \"measure\": {\"atoms\": [[0.5, \"inf\", 3]]}}")
            .find("/measure/atoms/0") != std::string::npos);
  const std::string bad = error_of("{\"interval\": ");
  CHECK(bad.find("malformed JSON at byte") != std::string::npos);
  CHECK(error_of("[1, 2]").find("expected an object") != std::string::npos);
}

TEST_CASE("reports serialize") {
  const auto p = image_regularization(example_3_1());
  const json pk = package_to_json(p);
  CHECK(pk["gaps"].size() == 1);
  CHECK(pk["darned"][0]["image"] == 1.0);
  const json fr = feller_to_json(feller_classify(image_regularization(bm_line())));
  CHECK(fr["left"]["class"] == "natural");
  CHECK(fr["left"]["sigma"]["value"] == "inf");
  McComparison m;
  m.label = "x";
  m.z = 1.0;
  const json c = comparison_to_json(m);
  CHECK(c["passed"] == true);
  CHECK(dump(c).back() == '\n');
  CHECK(validation_to_json(validate_triple(example_3_1()))["ok"] == true);
}
