#include "quasidiff/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

namespace quasidiff {

ExtendedReal EndValue::as_extended() const {
  if (finiteness == Finiteness::infinite) return ExtendedReal::pos_inf();
  return value;
}

const char* to_string(FellerClass c) {
  switch (c) {
    case FellerClass::regular: return "regular";
    case FellerClass::exit: return "exit";
    case FellerClass::entrance: return "entrance";
    case FellerClass::natural: return "natural";
    default: return "undetermined";
  }
}

const char* to_string(Finiteness f) {
  switch (f) {
    case Finiteness::finite: return "finite";
    case Finiteness::infinite: return "infinite";
    default: return "undetermined";
  }
}

namespace {

EndValue finite_value(double v) { return {Finiteness::finite, v, "closed form"}; }
EndValue infinite_value() { return {Finiteness::infinite, INFINITY, "closed form"}; }

// sigma and lambda on one side. dir = +1 measures u = x - base, dir = -1
// measures u = base - x; R is the distance to the endpoint (may be inf).
std::pair<EndValue, EndValue> side_integrals(const MeasureSpec& m, double base, int dir,
                                             double R) {
  double sig = 0.0, lam = 0.0, mass = 0.0;
  bool lam_inf = false;
  for (const auto& a : m.atoms()) {
    const double u = dir * (a.x.as_double() - base);
    if (!(u > 0.0) || u > R) continue;
    const double w = a.mass.value();
    mass += w;
    if (u == INFINITY) {
      lam_inf = true;
      continue;
    }
    lam += u * w;
    if (u < R && std::isfinite(R)) sig += (R - u) * w;
  }
  for (const auto& p : m.pieces()) {
    double u1 = dir * (p.a.as_double() - base);
    double u2 = dir * (p.b.as_double() - base);
    if (u1 > u2) std::swap(u1, u2);
    u1 = std::max(u1, 0.0);
    u2 = std::min(u2, R);
    if (!(u2 > u1)) continue;
    mass += 1.0;  // only positivity matters below
    if (u2 == INFINITY) {
      lam_inf = true;
      continue;
    }
    lam += p.density * (u2 * u2 - u1 * u1) / 2.0;
    if (std::isfinite(R)) sig += p.density * ((R - u1) * (R - u1) - (R - u2) * (R - u2)) / 2.0;
  }
  if (!std::isfinite(R)) {
    const EndValue s = mass > 0.0 ? infinite_value() : finite_value(0.0);
    return {s, lam_inf ? infinite_value() : finite_value(lam)};
  }
  return {finite_value(sig), lam_inf ? infinite_value() : finite_value(lam)};
}

EndValue from_series(double explicit_part, const SeriesResult& r) {
  EndValue v;
  v.method = r.test;
  v.value = explicit_part + std::exp(r.log_partial_sum);
  switch (r.verdict) {
    case SeriesVerdict::converges: v.finiteness = Finiteness::finite; break;
    case SeriesVerdict::diverges:
      v.finiteness = Finiteness::infinite;
      v.value = INFINITY;
      break;
    default: v.finiteness = Finiteness::undetermined;
  }
  return v;
}

EndpointReport make_report(ExtendedReal pos, bool included, EndValue sigma, EndValue lambda) {
  EndpointReport e;
  e.position = pos;
  e.in_state_space = included;
  e.sigma = std::move(sigma);
  e.lambda = std::move(lambda);
  e.cls = class_from(e.sigma, e.lambda);
  e.accessible = e.sigma.is_finite();
  return e;
}

void finish(FellerReport& rep) {
  rep.conservative = true;
  for (const EndpointReport* e : {&rep.left, &rep.right}) {
    if (e->sigma.finiteness == Finiteness::undetermined ||
        e->lambda.finiteness == Finiteness::undetermined)
      rep.determined = false;
    if (e->in_state_space) continue;
    if (e->sigma.finiteness == Finiteness::undetermined) rep.conservative = false;
    if (e->sigma.is_finite()) rep.conservative = false;
  }
}

}  // namespace

double default_base(const RegularizedPackage& p) {
  const ExtendedReal l = p.set.l_hat, r = p.set.r_hat;
  if (!(l < r)) throw DomainError("image state space is a single point");
  if (l < 0.0 && ExtendedReal(0.0) < r) return 0.0;
  if (l.is_finite() && r.is_finite()) return (l.value() + r.value()) / 2.0;
  if (l.is_finite()) return l.value() + 1.0;
  return r.value() - 1.0;
}

SigmaLambda sigma_lambda(const RegularizedPackage& p, double base) {
  const double l = p.set.l_hat.as_double(), r = p.set.r_hat.as_double();
  if (!(l < base && base < r)) throw DomainError("base point must lie inside (l_hat, r_hat)");
  SigmaLambda out;
  std::tie(out.sigma_l, out.lambda_l) = side_integrals(p.measure, base, -1, base - l);
  std::tie(out.sigma_r, out.lambda_r) = side_integrals(p.measure, base, +1, r - base);
  return out;
}

SigmaLambda sigma_lambda(const RegularizedPackage& p) { return sigma_lambda(p, default_base(p)); }

FellerClass class_from(const EndValue& sigma, const EndValue& lambda) {
  if (sigma.finiteness == Finiteness::undetermined || lambda.finiteness == Finiteness::undetermined)
    return FellerClass::undetermined;
  if (sigma.is_finite()) return lambda.is_finite() ? FellerClass::regular : FellerClass::exit;
  return lambda.is_finite() ? FellerClass::entrance : FellerClass::natural;
}

FellerReport feller_classify(const RegularizedPackage& p) {
  FellerReport rep;
  rep.base = default_base(p);
  const SigmaLambda sl = sigma_lambda(p, rep.base);
  rep.left = make_report(p.set.l_hat, p.set.include_l, sl.sigma_l, sl.lambda_l);
  rep.right = make_report(p.set.r_hat, p.set.include_r, sl.sigma_r, sl.lambda_r);
  finish(rep);
  return rep;
}

FellerReport feller_classify(const RegularizedPackage& p, const AtomTail& tail) {
  if (!p.is_atomic()) throw DomainError("an atom tail needs a purely atomic image measure");
  if (!tail.log_spacing || !tail.log_mass) throw DomainError("atom tail is incomplete");
  FellerReport rep;
  rep.base = default_base(p);
  const double c = rep.base;
  const SigmaLambda sl = sigma_lambda(p, c);
  rep.left = make_report(p.set.l_hat, p.set.include_l, sl.sigma_l, sl.lambda_l);

  // Explicit atoms right of the base, in order.
  std::vector<std::pair<double, double>> right;
  for (const auto& a : p.measure.atoms()) {
    const double x = a.x.as_double();
    if (x > c) right.emplace_back(x, a.mass.value());
  }
  if (right.empty()) throw DomainError("atom tail needs an explicit atom right of the base");
  double sigma_expl = 0.0, lambda_expl = 0.0, mass = 0.0;
  for (std::size_t k = 0; k < right.size(); ++k) {
    mass += right[k].second;
    lambda_expl += (right[k].first - c) * right[k].second;
    if (k + 1 < right.size()) sigma_expl += (right[k + 1].first - right[k].first) * mass;
  }

  std::vector<double> log_pos, log_sigma, log_lambda;
  double log_mass_cum = std::log(mass);
  double log_dist = std::log(right.back().first - c);
  for (std::size_t j = tail.first; j < tail.first + tail.horizon; ++j) {
    const double ls = tail.log_spacing(j);
    const double lm = tail.log_mass(j);
    log_pos.push_back(ls);
    log_sigma.push_back(ls + log_mass_cum);
    log_dist = log_add(log_dist, ls);
    log_lambda.push_back(log_dist + lm);
    log_mass_cum = log_add(log_mass_cum, lm);
  }
  const SeriesResult pos = classify_series(log_pos);
  ExtendedReal r_hat = ExtendedReal::pos_inf();
  if (pos.verdict != SeriesVerdict::diverges)
    r_hat = right.back().first + std::exp(pos.log_partial_sum);
  rep.right = make_report(r_hat, false, from_series(sigma_expl, classify_series(log_sigma)),
                          from_series(lambda_expl, classify_series(log_lambda)));
  finish(rep);
  return rep;
}

}  // namespace quasidiff
