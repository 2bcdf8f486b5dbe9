#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "quasidiff/boundary.hpp"
#include "quasidiff/dirichlet_form.hpp"
#include "quasidiff/exit_solver.hpp"
#include "quasidiff/gallery.hpp"
#include "quasidiff/json_io.hpp"
#include "quasidiff/regularize.hpp"
#include "quasidiff/simulate.hpp"
#include "quasidiff/verify.hpp"

using namespace quasidiff;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kGateFailure = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Triple load_triple(const std::string& path) {
  try {
    return triple_from_text(read_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write '" + out + "'");
  f << text;
}

struct Common {
  std::string input;
  std::string out;
  unsigned threads = 0;
};

nlohmann::json read_function_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": malformed JSON at byte " + std::to_string(e.byte));
  }
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(where + "/" + std::to_string(i) + ": expected a number");
    v.push_back(j[i].get<double>());
  }
  return v;
}

int run_energy(const Common& c, const std::string& function_path) {
  const Triple t = load_triple(c.input);
  const RegularizedPackage pkg = image_regularization(t);
  const json fj = read_function_json(function_path);
  if (!fj.is_object()) throw SchemaError(function_path + ": /: expected an object");
  json out;
  LiftedFunction h;
  if (fj.contains("breakpoints")) {
    const json& bp = fj.at("breakpoints");
    if (!bp.is_array()) throw SchemaError(function_path + ": /breakpoints: expected an array");
    for (std::size_t i = 0; i < bp.size(); ++i) {
      const auto row = number_list(bp[i], function_path + ": /breakpoints/" + std::to_string(i));
      if (row.size() != 2)
        throw SchemaError(function_path + ": /breakpoints/" + std::to_string(i) +
                          ": expected [x, h]");
      h.breakpoints.emplace_back(row[0], row[1]);
    }
    h.left_slope = fj.value("left_slope", 0.0);
    h.right_slope = fj.value("right_slope", 0.0);
    out["triple_energy"] = nullptr;
  } else if (fj.contains("g_c")) {
    TripleFunction f;
    f.c0 = fj.value("c0", 0.0);
    f.g_c = number_list(fj.at("g_c"), function_path + ": /g_c");
    f.g_minus = number_list(fj.value("g_minus", json::array()), function_path + ": /g_minus");
    f.g_plus = number_list(fj.value("g_plus", json::array()), function_path + ": /g_plus");
    if (f.g_c.size() != t.scale().segments().size())
      throw SchemaError(function_path + ": /g_c: expected one density per scale segment (" +
                        std::to_string(t.scale().segments().size()) + ")");
    if (f.g_minus.empty()) f.g_minus.assign(t.scale().jumps().size(), 0.0);
    if (f.g_plus.empty()) f.g_plus.assign(t.scale().jumps().size(), 0.0);
    if (f.g_minus.size() != t.scale().jumps().size() || f.g_plus.size() != t.scale().jumps().size())
      throw SchemaError(function_path + ": /g_minus, /g_plus: expected one value per jump");
    h = lift(f, t, pkg);
    out["triple_energy"] = to_json(energy_triple(f, t.scale()));
  } else {
    throw SchemaError(function_path + ": /: expected \"breakpoints\" or \"g_c\"");
  }
  out["image_energy"] = to_json(energy_image(h, pkg));
  out["member_of_F"] = membership_F(h, pkg);
  emit(c.out, dump(out));
  std::cerr << "image energy " << out["image_energy"] << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skip-free processes from generalized scale and speed data"};
  app.require_subcommand(1);
  Common c;

  const auto add_common = [&](CLI::App* sub, bool input) {
    if (input) sub->add_option("triple", c.input, "Triple JSON file")->required();
    sub->add_option("--out", c.out, "Write machine output here instead of stdout");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  };

  auto* reg = app.add_subcommand("regularize", "Image regularization of a triple");
  add_common(reg, true);

  auto* cls = app.add_subcommand("classify", "Feller classification of the endpoints");
  add_common(cls, true);

  std::string function_path;
  auto* en = app.add_subcommand("energy", "Dirichlet-form energies of a function");
  add_common(en, true);
  en->add_option("function", function_path, "Function JSON file")->required();

  double a = 0.0, b = 0.0, x = 0.0, delta = 0.05;
  auto* ex = app.add_subcommand("exit", "Exact hitting probability and mean exit time");
  add_common(ex, true);
  ex->add_option("--a", a, "Lower window end (image coordinate)")->required();
  ex->add_option("--b", b, "Upper window end (image coordinate)")->required();
  ex->add_option("--x", x, "Start point (image coordinate)")->required();
  ex->add_option("--delta", delta, "Discretization step for densities");

  double x0 = 0.0, horizon = 1.0;
  std::size_t paths = 10;
  std::uint64_t seed = 1;
  bool project = false;
  std::optional<double> sim_a, sim_b;
  auto* sim = app.add_subcommand("simulate", "Simulate sample paths (CSV)");
  add_common(sim, true);
  sim->add_option("--x0", x0, "Start point (image coordinate, snapped to a state)")->required();
  sim->add_option("--horizon", horizon, "Time horizon");
  sim->add_option("--paths", paths, "Number of paths");
  sim->add_option("--seed", seed, "Run seed");
  sim->add_option("--delta", delta, "Discretization step for densities");
  sim->add_option("--a", sim_a, "Absorbing lower window end");
  sim->add_option("--b", sim_b, "Absorbing upper window end");
  sim->add_flag("--project", project, "Add the unregularized coordinate column");

  SuiteOptions sopt;
  std::size_t vpaths = 200000;
  auto* ver = app.add_subcommand("verify", "Monte Carlo checks against exact references");
  add_common(ver, true);
  ver->add_option("--suite", sopt.suite, "hitting, exit, speed, jumps, martingale or all")
      ->check(CLI::IsMember({"hitting", "exit", "speed", "jumps", "martingale", "all"}));
  ver->add_option("--x", sopt.x, "Start point");
  ver->add_option("--a", sopt.a, "Lower window end");
  ver->add_option("--b", sopt.b, "Upper window end");
  ver->add_option("--paths", vpaths, "Paths per estimate");
  ver->add_option("--seed", sopt.mc.seed, "Run seed");
  ver->add_option("--delta", sopt.mc.delta, "Discretization step for densities");

  std::string gname;
  std::map<std::string, std::string> gparams;
  auto* gal = app.add_subcommand("gallery", "Emit a gallery triple as JSON");
  add_common(gal, false);
  gal->add_option("name", gname, "Entry name")->required()->check(CLI::IsMember(gallery_names()));
  for (const char* key : {"kappa", "states", "family", "q-max", "depth", "variant", "cells", "pieces"}) {
    gal->add_option_function<std::string>(std::string("--") + key,
                                          [&gparams, key](const std::string& v) { gparams[key] = v; },
                                          "Entry parameter");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*reg) {
      const Triple t = load_triple(c.input);
      const ValidationReport vr = validate_triple(t);
      if (!vr.ok()) {
        std::cerr << "validation failed: " << vr.summary() << '\n';
        emit(c.out, dump({{"validation", validation_to_json(vr)}}));
        return kInputError;
      }
      const RegularizedPackage pkg = image_regularization(t);
      json out = package_to_json(pkg);
      out["validation"] = validation_to_json(vr);
      emit(c.out, dump(out));
      std::cerr << "image set with " << pkg.set.components.size() << " component(s), "
                << pkg.gaps.size() << " gap(s), " << pkg.darned.size() << " darned point(s)\n";
      return kOk;
    }
    if (*cls) {
      const Triple t = load_triple(c.input);
      const RegularizedPackage pkg = image_regularization(t);
      const FellerReport fr = feller_classify(pkg);
      json out = feller_to_json(fr);
      out["triple_endpoints"] = {{"l", endpoint_class_to_json(pkg.left)},
                                 {"r", endpoint_class_to_json(pkg.right)}};
      out["transience"] = transience(pkg) == Recurrence::transient ? "transient" : "recurrent";
      emit(c.out, dump(out));
      std::cerr << "left " << to_string(fr.left.cls) << ", right " << to_string(fr.right.cls)
                << (fr.conservative ? ", conservative\n" : ", not conservative\n");
      return kOk;
    }
    if (*en) return run_energy(c, function_path);
    if (*ex) {
      const Triple t = load_triple(c.input);
      const RegularizedPackage pkg = image_regularization(t);
      const SkipFreeChain ch = window_chain(pkg, x, a, b, delta);
      const std::size_t ix = x == a ? 0 : x == b ? ch.size() - 1 : ch.index_of(x);
      const auto h = exit_time_oracle(ch, 0, ch.size() - 1);
      const auto ruin = gambler_ruin(ch, 0, ch.size() - 1);
      const RecoveredSpeed rec = speed_from_exit_times(h, ch.states);
      json atoms = json::array();
      for (std::size_t i = 0; i < rec.positions.size(); ++i)
        atoms.push_back({rec.positions[i], rec.masses[i]});
      json out = {{"hitting_prob", hitting_probability(x, a, b)},
                  {"hitting_prob_chain", ruin[ix]},
                  {"mean_exit_time", h[ix]},
                  {"recovered_atoms", atoms},
                  {"concave", rec.concave},
                  {"states", ch.size()},
                  {"delta", delta}};
      emit(c.out, dump(out));
      std::cerr << "P(hit b first) = " << out["hitting_prob"] << ", E[exit time] = " << h[ix]
                << '\n';
      return kOk;
    }
    if (*sim) {
      const Triple t = load_triple(c.input);
      const RegularizedPackage pkg = image_regularization(t);
      ChainSpec spec;
      spec.delta = delta;
      if (sim_a) spec.lo = WindowEnd{*sim_a, EndBehavior::absorb};
      if (sim_b) spec.hi = WindowEnd{*sim_b, EndBehavior::absorb};
      if (pkg.set.contains(x0)) spec.anchors.push_back(x0);
      const SkipFreeChain ch = build_chain(pkg, spec);
      const std::size_t ix = ch.nearest(x0);
      const auto ps = simulate_paths(ch, ix, horizon, paths, seed, c.threads);
      std::ostringstream csv;
      write_csv(csv, ps, ch, project ? &pkg.pullback : nullptr);
      std::size_t at_lo = 0, at_hi = 0, alive = 0, skip_free = 0;
      double life = 0.0, end = 0.0;
      for (const auto& p : ps) {
        if (!p.absorbed_at) {
          ++alive;
        } else {
          (*p.absorbed_at == 0 ? at_lo : at_hi) += 1;
          life += p.lifetime;
        }
        end += p.end_time;
        skip_free += skip_free_check(p, ch) ? 1 : 0;
      }
      const std::size_t absorbed = at_lo + at_hi;
      json summary = {
          {"seed", seed},
          {"paths", paths},
          {"x0", ch.states[ix]},
          {"horizon", horizon},
          {"delta", delta},
          {"states", ch.size()},
          {"absorbed", {{"lower", at_lo}, {"upper", at_hi}, {"alive_at_horizon", alive}}},
          {"mean_lifetime_absorbed", absorbed ? json(life / static_cast<double>(absorbed)) : json(nullptr)},
          {"mean_end_time", end / static_cast<double>(paths)},
          {"skip_free_paths", skip_free}};
      emit(c.out, csv.str());
      // The summary goes to stdout only when the CSV went to a file.
      if (c.out.empty()) {
        std::cerr << dump(summary);
      } else {
        std::cout << dump(summary);
        std::cerr << "wrote " << paths << " path(s) to " << c.out << '\n';
      }
      return kOk;
    }
    if (*ver) {
      const Triple t = load_triple(c.input);
      const RegularizedPackage pkg = image_regularization(t);
      sopt.mc.n_paths = vpaths;
      sopt.mc.threads = c.threads;
      const SuiteReport rep = run_suite(pkg, sopt);
      json out = suite_to_json(rep);
      out["seed"] = sopt.mc.seed;
      out["suite"] = sopt.suite;
      emit(c.out, dump(out));
      for (const auto& m : rep.comparisons)
        std::cerr << (m.passed() ? "PASS " : "FAIL ") << m.label << " z=" << m.z << '\n';
      std::cerr << (rep.passed ? "all gates passed\n" : "gate failure\n");
      return rep.passed ? kOk : kGateFailure;
    }
    if (*gal) {
      const Triple t = gallery_triple(gname, gparams);
      emit(c.out, dump(triple_to_json(t)));
      std::cerr << "gallery entry " << gname << '\n';
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
