#include "quasidiff/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "quasidiff/exit_solver.hpp"
#include "quasidiff/regularize.hpp"

namespace quasidiff {

namespace {

Triple checked(Triple t) {
  const ValidationReport rep = validate_triple(t);
  if (!rep.ok()) throw ValidationError(rep.summary());
  return t;
}

const ExtendedReal kInf = ExtendedReal::pos_inf();
const ExtendedReal kNegInf = ExtendedReal::neg_inf();

}  // namespace

Triple example_3_1() {
  GeneralizedScale s(0.0, 3.0, {{0, 0}, {1, 1}, {2, 1}, {3, 2}}, {{2.0, 1.0, 0.0}});
  return checked(Triple(std::move(s), MeasureSpec({{0.0, 3.0, 1.0}}, {})));
}

Triple regular_diffusion(ExtendedReal l, ExtendedReal r, std::vector<Breakpoint> breakpoints,
                         MeasureSpec m) {
  GeneralizedScale s(l, r, std::move(breakpoints), {});
  if (!s.is_strictly_increasing())
    throw DomainError("regular_diffusion needs a strictly increasing scale");
  return checked(Triple(std::move(s), std::move(m)));
}

Triple reflecting_bm() {
  return regular_diffusion(0.0, 1.0, {{0, 0}, {1, 1}}, MeasureSpec({{0.0, 1.0, 1.0}}, {}));
}

Triple bm_line() {
  return regular_diffusion(kNegInf, kInf, {{0, 0}, {1, 1}}, MeasureSpec({{kNegInf, kInf, 1.0}}, {}));
}

Triple absorbing_bm() {
  return regular_diffusion(0.0, 1.0, {{0, 0}, {1, 1}},
                           MeasureSpec({{0.0, 1.0, 1.0}}, {{1.0, kInf}}));
}

Triple cubic_diffusion(std::size_t pieces) {
  if (pieces < 2) throw DomainError("cubic_diffusion needs at least 2 pieces");
  std::vector<Breakpoint> bps;
  for (std::size_t i = 0; i <= pieces; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(pieces);
    bps.push_back({x, x * x * x});
  }
  return regular_diffusion(-1.0, 1.0, std::move(bps), MeasureSpec({{-1.0, 1.0, 1.0}}, {}));
}

Triple snapping_out(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("snapping_out needs kappa > 0");
  GeneralizedScale s(kNegInf, kInf, {{0, 0}, {1, 1}}, {{0.0, 2.0 / kappa, 0.0}});
  return checked(Triple(std::move(s), MeasureSpec({{kNegInf, kInf, 1.0}}, {})));
}

Triple random_walk(const std::vector<double>& c, const std::vector<double>& masses) {
  if (c.empty() || c.size() != masses.size())
    throw DomainError("random_walk needs matching non-empty position and mass lists");
  std::vector<Jump> jumps;
  std::vector<DensityPiece> pieces;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k > 0) {
      if (!(c[k] > c[k - 1])) throw DomainError("random_walk positions must increase");
      jumps.push_back({static_cast<double>(k), c[k] - c[k - 1], 0.0});
    }
    if (!(masses[k] > 0.0)) throw DomainError("random_walk masses must be positive");
    pieces.push_back({static_cast<double>(k), static_cast<double>(k + 1), masses[k]});
  }
  GeneralizedScale s(0.0, static_cast<double>(c.size()), {{0.0, c[0]}}, std::move(jumps));
  return checked(Triple(std::move(s), MeasureSpec(std::move(pieces), {})));
}

Triple constant_speed_walk(const std::vector<double>& c) {
  if (c.size() < 2) throw DomainError("constant_speed_walk needs at least 2 states");
  std::vector<double> m(c.size(), 0.0);
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    const double mu = 1.0 / (2.0 * (c[k + 1] - c[k]));
    m[k] += mu;
    m[k + 1] += mu;
  }
  return random_walk(c, m);
}

// ---- birth-death ---------------------------------------------------------------

BirthDeathRates birth_death_family(const std::string& name) {
  BirthDeathRates r;
  r.name = name;
  if (name == "constant") {
    r.a = [](std::size_t) { return 1.0; };
    r.b = [](std::size_t) { return 1.0; };
  } else if (name == "linear") {
    r.a = [](std::size_t k) { return static_cast<double>(k + 1); };
    r.b = [](std::size_t k) { return static_cast<double>(k + 1); };
  } else if (name == "quadratic") {
    r.a = [](std::size_t k) { return std::pow(static_cast<double>(k + 1), 2); };
    r.b = [](std::size_t k) { return 2.0 * std::pow(static_cast<double>(k + 1), 2); };
  } else if (name == "entrance") {
    r.a = [](std::size_t k) { return std::pow(static_cast<double>(k), 2); };
    r.b = [](std::size_t) { return 1.0; };
  } else {
    throw DomainError("unknown birth-death family '" + name + "'");
  }
  return r;
}

namespace {

struct LogChain {
  std::vector<double> log_pi;     // log pi_k, k = 0..n
  std::vector<double> log_delta;  // log (c_{k+1} - c_k), k = 0..n-1
};

LogChain log_chain(const BirthDeathRates& r, std::size_t n) {
  LogChain lc;
  lc.log_pi.push_back(0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double bk = r.b(k), ak1 = r.a(k + 1);
    if (!(bk > 0.0) || !(ak1 > 0.0)) throw DomainError("birth-death rates must be positive");
    lc.log_delta.push_back(-std::log(2.0) - std::log(bk) - lc.log_pi[k]);
    lc.log_pi.push_back(lc.log_pi[k] + std::log(bk) - std::log(ak1));
  }
  return lc;
}

UniquenessReport uniqueness(const LogChain& lc, std::size_t q_max, std::size_t horizon) {
  UniquenessReport u;
  u.q_max = q_max;
  u.horizon = horizon;
  std::vector<double> pos, mass, series;
  double log_m = -INFINITY;
  for (std::size_t k = 0; k < horizon; ++k) {
    log_m = log_add(log_m, lc.log_pi[k]);
    pos.push_back(lc.log_delta[k]);
    mass.push_back(lc.log_pi[k]);
    series.push_back(lc.log_delta[k] + log_m);
  }
  u.c_infinity = classify_series(pos);
  u.total_mass = classify_series(mass);
  u.series = classify_series(series);
  const auto div = [](const SeriesResult& s) { return s.verdict == SeriesVerdict::diverges; };
  const auto dec = [](const SeriesResult& s) { return s.verdict != SeriesVerdict::inconclusive; };
  u.symmetric_unique = div(u.c_infinity) || div(u.total_mass);
  u.unique = div(u.series);
  u.determined = dec(u.series) && (div(u.c_infinity) || div(u.total_mass) ||
                                   (dec(u.c_infinity) && dec(u.total_mass)));
  return u;
}

// Holding means and jump probabilities of the regularized chain against rates.
double rate_round_trip(const Triple& t, const std::vector<double>& a, const std::vector<double>& b) {
  const RegularizedPackage pkg = image_regularization(t);
  const SkipFreeChain ch = build_chain(pkg.measure, EndBehavior::reflect, EndBehavior::reflect);
  const std::size_t q = ch.size() - 1;
  double worst = 0.0;
  const auto rel = [&](double x, double y) {
    worst = std::max(worst, std::abs(x - y) / std::max(std::abs(y), 1e-300));
  };
  for (std::size_t k = 0; k <= q; ++k) {
    const double ak = k == 0 ? 0.0 : a[k];
    const double bk = k == q ? 0.0 : b[k];
    const double qk = ak + bk;
    rel(ch.holding_mean(k), 1.0 / qk);
    if (k < q) rel(ch.p_up(k), bk / qk);
  }
  return worst;
}

}  // namespace

BirthDeath birth_death(const BirthDeathRates& rates, std::size_t q_max, std::size_t horizon) {
  if (q_max < 1) throw DomainError("birth_death needs q_max >= 1");
  if (horizon == 0) horizon = std::max<std::size_t>(64, 4 * q_max);
  if (horizon < q_max + 17) horizon = q_max + 17;
  auto lc = std::make_shared<LogChain>(log_chain(rates, horizon + 1));

  std::vector<double> c{0.0}, pi{1.0}, a(q_max + 1, 0.0), b(q_max + 1, 0.0);
  for (std::size_t k = 0; k < q_max; ++k) {
    c.push_back(c.back() + std::exp(lc->log_delta[k]));
    pi.push_back(std::exp(lc->log_pi[k + 1]));
    b[k] = rates.b(k);
    a[k + 1] = rates.a(k + 1);
  }
  Triple t = random_walk(c, pi);
  BirthDeath out{t, c, pi, {}, 0.0, uniqueness(*lc, q_max, horizon), {}};
  for (std::size_t k = 0; k <= q_max; ++k) out.q_rates.push_back(a[k] + (k < q_max ? b[k] : 0.0));
  out.round_trip_error = rate_round_trip(t, a, b);
  if (out.round_trip_error > 1e-9)
    throw DomainError("birth-death chain does not reproduce its rates");
  out.tail.first = q_max + 1;
  out.tail.horizon = horizon - q_max - 1;
  out.tail.log_spacing = [lc](std::size_t j) { return lc->log_delta[j - 1]; };
  out.tail.log_mass = [lc](std::size_t j) { return lc->log_pi[j]; };
  return out;
}

BirthDeath birth_death(const std::vector<double>& a_list, const std::vector<double>& b_list) {
  const std::size_t q = b_list.size();
  if (q < 1 || a_list.size() != q)
    throw DomainError("birth_death lists need a_1..a_q and b_0..b_{q-1} of equal length");
  BirthDeathRates r;
  r.name = "explicit";
  r.a = [a_list](std::size_t k) { return a_list.at(k - 1); };
  r.b = [b_list](std::size_t k) { return b_list.at(k); };
  const LogChain lc = log_chain(r, q);
  std::vector<double> c{0.0}, pi{1.0}, a(q + 1, 0.0), b(q + 1, 0.0);
  for (std::size_t k = 0; k < q; ++k) {
    c.push_back(c.back() + std::exp(lc.log_delta[k]));
    pi.push_back(std::exp(lc.log_pi[k + 1]));
    b[k] = b_list[k];
    a[k + 1] = a_list[k];
  }
  Triple t = random_walk(c, pi);
  UniquenessReport u;
  u.q_max = q;
  u.c_infinity.test = u.total_mass.test = u.series.test = "finite list";
  BirthDeath out{t, c, pi, {}, 0.0, u, {}};
  for (std::size_t k = 0; k <= q; ++k) out.q_rates.push_back(a[k] + (k < q ? b[k] : 0.0));
  out.round_trip_error = rate_round_trip(t, a, b);
  if (out.round_trip_error > 1e-9)
    throw DomainError("birth-death chain does not reproduce its rates");
  return out;
}

// ---- Cantor ------------------------------------------------------------------------

std::vector<std::pair<double, double>> cantor_gaps(std::size_t depth, std::size_t cells) {
  std::vector<std::pair<double, double>> kept{{0.0, 1.0}}, removed;
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<std::pair<double, double>> next;
    for (const auto& [u, v] : kept) {
      const double w = (v - u) / 3.0;
      next.push_back({u, u + w});
      next.push_back({v - w, v});
      removed.push_back({u + w, v - w});
    }
    kept = std::move(next);
  }
  std::sort(removed.begin(), removed.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t n = 0; n < cells; ++n)
    for (const auto& [u, v] : removed) out.push_back({u + n, v + n});
  return out;
}

Triple cantor(std::size_t depth, CantorVariant variant, std::size_t cells) {
  if (cells < 1) throw DomainError("cantor needs at least one cell");
  const auto gaps = cantor_gaps(depth, cells);
  const double r = static_cast<double>(cells);
  std::vector<Breakpoint> bps{{0.0, 0.0}};
  std::vector<Jump> jumps;
  std::vector<DensityPiece> pieces;
  std::vector<PointMass> atoms;
  double removed = 0.0, cursor = 0.0;
  for (const auto& [a, b] : gaps) {
    if (a > cursor) pieces.push_back({cursor, a, 1.0});
    bps.push_back({a, a - removed});
    bps.push_back({b, a - removed});
    jumps.push_back({b, b - a, 0.0});
    if (variant == CantorVariant::bm_on_cantor) {
      atoms.push_back({a, (b - a) / 2.0});
      atoms.push_back({b, (b - a) / 2.0});
    }
    removed += b - a;
    cursor = b;
  }
  if (r > cursor) pieces.push_back({cursor, r, 1.0});
  bps.push_back({r, r - removed});
  GeneralizedScale s(0.0, r, std::move(bps), std::move(jumps));
  return checked(Triple(std::move(s), MeasureSpec(std::move(pieces), std::move(atoms))));
}

// ---- named entries -----------------------------------------------------------------

namespace {

double param(const std::map<std::string, std::string>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size())
    throw DomainError("parameter --" + key + ": '" + it->second + "' is not a number");
  return v;
}

std::size_t count_param(const std::map<std::string, std::string>& p, const std::string& key,
                        std::size_t dflt) {
  const double v = param(p, key, static_cast<double>(dflt));
  if (v < 0 || v != std::floor(v)) throw DomainError("parameter --" + key + " must be a count");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"example_3_1", "reflecting_bm", "bm_line",         "absorbing_bm",
          "cubic",       "snapping_out",  "random_walk",     "constant_speed_walk",
          "birth_death", "cantor"};
}

Triple gallery_triple(const std::string& name, const std::map<std::string, std::string>& params) {
  if (name == "example_3_1") return example_3_1();
  if (name == "reflecting_bm") return reflecting_bm();
  if (name == "bm_line") return bm_line();
  if (name == "absorbing_bm") return absorbing_bm();
  if (name == "cubic") return cubic_diffusion(count_param(params, "pieces", 8));
  if (name == "snapping_out") return snapping_out(param(params, "kappa", 2.0));
  if (name == "random_walk" || name == "constant_speed_walk") {
    const std::size_t n = count_param(params, "states", 4);
    if (n < 1) throw DomainError("--states must be at least 1");
    std::vector<double> c(n), m(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) c[k] = static_cast<double>(k);
    return name == "random_walk" ? random_walk(c, m) : constant_speed_walk(c);
  }
  if (name == "birth_death") {
    auto it = params.find("family");
    const std::string fam = it == params.end() ? "constant" : it->second;
    return birth_death(birth_death_family(fam), count_param(params, "q-max", 16)).triple;
  }
  if (name == "cantor") {
    auto it = params.find("variant");
    const std::string v = it == params.end() ? "bm_on_cantor" : it->second;
    CantorVariant var;
    if (v == "timechange") {
      var = CantorVariant::timechange;
    } else if (v == "bm_on_cantor") {
      var = CantorVariant::bm_on_cantor;
    } else {
      throw DomainError("--variant must be timechange or bm_on_cantor");
    }
    return cantor(count_param(params, "depth", 2), var, count_param(params, "cells", 1));
  }
  throw DomainError("unknown gallery entry '" + name + "'");
}

}  // namespace quasidiff
