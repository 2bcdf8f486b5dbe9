#include "quasidiff/json_io.hpp"

#include <cmath>
#include <set>

namespace quasidiff {

using nlohmann::json;

namespace {

json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError((where.empty() ? std::string("/") : where) + ": " + what);
}

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where + "/" + k, "unknown key");
}

const json& member(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) fail(where + "/" + key, "missing required key");
  return j.at(key);
}

double finite_from_json(const json& j, const std::string& where) {
  const ExtendedReal x = extended_from_json(j, where);
  if (!x.is_finite()) fail(where, "expected a finite number");
  return x.value();
}

const json& array_of(const json& j, const std::string& where, std::size_t arity,
                     std::size_t i) {
  const json& row = j.at(i);
  const std::string w = where + "/" + std::to_string(i);
  if (!row.is_array() || row.size() != arity)
    fail(w, "expected an array of " + std::to_string(arity) + " numbers");
  return row;
}

}  // namespace

json to_json(ExtendedReal x) { return num(x.as_double()); }

ExtendedReal extended_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return ExtendedReal::pos_inf();
    if (s == "-inf") return ExtendedReal::neg_inf();
  }
  fail(where, "expected a number, \"inf\" or \"-inf\"");
}

json measure_to_json(const MeasureSpec& m) {
  json pieces = json::array(), atoms = json::array();
  for (const auto& p : m.pieces()) pieces.push_back({to_json(p.a), to_json(p.b), num(p.density)});
  for (const auto& a : m.atoms()) atoms.push_back({to_json(a.x), to_json(a.mass)});
  return {{"pieces", pieces}, {"atoms", atoms}};
}

json triple_to_json(const Triple& t) {
  const GeneralizedScale& s = t.scale();
  json bps = json::array(), jumps = json::array();
  for (const auto& b : s.breakpoints()) bps.push_back({num(b.x), num(b.y)});
  for (const auto& j : s.jumps()) jumps.push_back({num(j.x), num(j.left_gap), num(j.right_gap)});
  return {{"interval", {{"l", to_json(t.l())}, {"r", to_json(t.r())}}},
          {"scale", {{"breakpoints", bps}, {"jumps", jumps}}},
          {"measure", measure_to_json(t.measure())}};
}

Triple triple_from_json(const json& j) {
  only_keys(j, "", {"interval", "scale", "measure"});
  const json& iv = member(j, "", "interval");
  only_keys(iv, "/interval", {"l", "r"});
  const ExtendedReal l = extended_from_json(member(iv, "/interval", "l"), "/interval/l");
  const ExtendedReal r = extended_from_json(member(iv, "/interval", "r"), "/interval/r");

  const json& sc = member(j, "", "scale");
  only_keys(sc, "/scale", {"breakpoints", "jumps"});
  const json& jb = member(sc, "/scale", "breakpoints");
  if (!jb.is_array()) fail("/scale/breakpoints", "expected an array");
  std::vector<Breakpoint> bps;
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const std::string w = "/scale/breakpoints/" + std::to_string(i);
    const json& row = array_of(jb, "/scale/breakpoints", 2, i);
    bps.push_back({finite_from_json(row[0], w + "/0"), finite_from_json(row[1], w + "/1")});
  }
  std::vector<Jump> jumps;
  if (sc.contains("jumps")) {
    const json& jj = sc.at("jumps");
    if (!jj.is_array()) fail("/scale/jumps", "expected an array");
    for (std::size_t i = 0; i < jj.size(); ++i) {
      const std::string w = "/scale/jumps/" + std::to_string(i);
      const json& row = array_of(jj, "/scale/jumps", 3, i);
      jumps.push_back({finite_from_json(row[0], w + "/0"), finite_from_json(row[1], w + "/1"),
                       finite_from_json(row[2], w + "/2")});
    }
  }

  std::vector<DensityPiece> pieces;
  std::vector<PointMass> atoms;
  if (j.contains("measure")) {
    const json& m = j.at("measure");
    only_keys(m, "/measure", {"pieces", "atoms"});
    if (m.contains("pieces")) {
      const json& jp = m.at("pieces");
      if (!jp.is_array()) fail("/measure/pieces", "expected an array");
      for (std::size_t i = 0; i < jp.size(); ++i) {
        const std::string w = "/measure/pieces/" + std::to_string(i);
        const json& row = array_of(jp, "/measure/pieces", 3, i);
        pieces.push_back({extended_from_json(row[0], w + "/0"),
                          extended_from_json(row[1], w + "/1"),
                          finite_from_json(row[2], w + "/2")});
      }
    }
    if (m.contains("atoms")) {
      const json& ja = m.at("atoms");
      if (!ja.is_array()) fail("/measure/atoms", "expected an array");
      for (std::size_t i = 0; i < ja.size(); ++i) {
        const std::string w = "/measure/atoms/" + std::to_string(i);
        const json& row = array_of(ja, "/measure/atoms", 2, i);
        atoms.push_back({extended_from_json(row[0], w + "/0"), extended_from_json(row[1], w + "/1")});
      }
    }
  }
  return Triple(GeneralizedScale(l, r, std::move(bps), std::move(jumps)),
                MeasureSpec(std::move(pieces), std::move(atoms)));
}

Triple triple_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " +
                      e.what());
  }
  return triple_from_json(j);
}

json validation_to_json(const ValidationReport& r) {
  json clauses = json::array();
  for (const auto& c : r.clauses)
    clauses.push_back({{"clause", c.clause}, {"passed", c.passed}, {"witness", c.witness}});
  return {{"ok", r.ok()}, {"clauses", clauses}};
}

json endpoint_class_to_json(const EndpointClass& c) {
  return {{"approachable", c.approachable},
          {"regular", c.regular},
          {"reflecting", c.reflecting},
          {"label", c.label()}};
}

json package_to_json(const RegularizedPackage& p) {
  json comps = json::array(), gaps = json::array(), darned = json::array();
  for (const auto& c : p.set.components) comps.push_back({to_json(c.lo), to_json(c.hi)});
  for (const auto& g : p.gaps) gaps.push_back({num(g.a), num(g.b)});
  for (const auto& d : p.darned)
    darned.push_back({{"image", num(d.image)},
                      {"plateau", {to_json(d.c), to_json(d.d)}},
                      {"representative", num(d.representative)}});
  return {{"image_set",
           {{"l_hat", to_json(p.set.l_hat)},
            {"r_hat", to_json(p.set.r_hat)},
            {"include_l", p.set.include_l},
            {"include_r", p.set.include_r},
            {"components", comps}}},
          {"gaps", gaps},
          {"measure", measure_to_json(p.measure)},
          {"boundary_mass", {{"l", to_json(p.boundary_mass_l)}, {"r", to_json(p.boundary_mass_r)}}},
          {"endpoints",
           {{"l", endpoint_class_to_json(p.left)}, {"r", endpoint_class_to_json(p.right)}}},
          {"darned", darned}};
}

namespace {

json end_value(const EndValue& v) {
  return {{"finiteness", to_string(v.finiteness)}, {"value", num(v.value)}, {"method", v.method}};
}

json endpoint_report(const EndpointReport& e) {
  return {{"position", to_json(e.position)},
          {"sigma", end_value(e.sigma)},
          {"lambda", end_value(e.lambda)},
          {"class", to_string(e.cls)},
          {"accessible", e.accessible},
          {"in_state_space", e.in_state_space}};
}

}  // namespace

json feller_to_json(const FellerReport& r) {
  return {{"base", num(r.base)},
          {"left", endpoint_report(r.left)},
          {"right", endpoint_report(r.right)},
          {"conservative", r.conservative},
          {"determined", r.determined}};
}

json comparison_to_json(const McComparison& c) {
  return {{"label", c.label},
          {"estimate", num(c.estimate)},
          {"stderr", num(c.stderr_)},
          {"reference", num(c.reference)},
          {"z", num(c.z)},
          {"n", c.n},
          {"truncated_fraction", num(c.truncated_fraction)},
          {"horizon", num(c.horizon)},
          {"passed", c.passed()}};
}

json suite_to_json(const SuiteReport& r) {
  json comps = json::array();
  for (const auto& c : r.comparisons) comps.push_back(comparison_to_json(c));
  json out = {{"x", num(r.x)},          {"a", num(r.a)},
              {"b", num(r.b)},          {"comparisons", comps},
              {"round_trip_error", num(r.round_trip_error)},
              {"skipped", r.skipped},   {"passed", r.passed}};
  if (r.speed) {
    json levels = json::array();
    for (const auto& L : r.speed->levels) {
      json recovered = json::array();
      for (std::size_t i = 0; i < L.positions.size(); ++i)
        recovered.push_back({num(L.positions[i]), num(L.recovered[i]), num(L.chain_masses[i])});
      levels.push_back({{"delta", num(L.delta)},
                        {"cumulative_error", num(L.cumulative_error)},
                        {"mean_relative_error", num(L.mean_relative_error)},
                        {"concave", L.concave},
                        {"atoms", recovered}});
    }
    json ratios = json::array();
    for (double q : r.speed->ratios) ratios.push_back(num(q));
    out["speed"] = {{"levels", levels}, {"ratios", ratios}, {"decreasing", r.speed->decreasing}};
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace quasidiff
