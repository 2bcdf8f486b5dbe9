#include "quasidiff/triple.hpp"

#include <algorithm>
#include <sstream>

namespace quasidiff {

Triple::Triple(GeneralizedScale scale, MeasureSpec measure)
    : scale_(std::move(scale)), measure_(std::move(measure)) {
  for (const auto& p : measure_.pieces())
    if (p.a < l() || p.b > r()) throw DomainError("measure: density piece outside [l, r]");
  for (const auto& a : measure_.atoms()) {
    if (a.x < l() || a.x > r()) throw DomainError("measure: atom outside [l, r]");
    if (!a.mass.is_finite() && a.x != l() && a.x != r())
      throw DomainError("measure: infinite atom at interior point " + a.x.to_string());
  }
}

std::string EndpointClass::label() const {
  if (reflecting) return "reflecting";
  if (regular) return "absorbing";
  return "n/a";
}

EndpointClass classify_endpoint_triple(Side side, const Triple& t) {
  EndpointClass c;
  const ExtendedReal j = t.endpoint(side);
  const ExtendedReal sj = side == Side::left ? t.scale().at_l() : t.scale().at_r();
  c.approachable = sj.is_finite();
  // For a finite endpoint m(j-+) is finite: densities are finite and interior
  // atoms carry finite mass. At an infinite endpoint it diverges exactly when
  // a positive density reaches it.
  bool near_mass_infinite = false;
  if (!j.is_finite())
    for (const auto& p : t.measure().pieces())
      if ((side == Side::left ? p.a : p.b) == j) near_mass_infinite = true;
  c.regular = c.approachable && !near_mass_infinite;
  c.reflecting = c.regular && t.measure().atom_at(j).is_finite();
  return c;
}

bool ValidationReport::ok() const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [](const ClauseResult& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : clauses)
    if (!c.passed) os << c.clause << " failed at " << c.witness << "; ";
  std::string s = os.str();
  return s.empty() ? "ok" : s.substr(0, s.size() - 2);
}

std::vector<ClosedInterval> measure_support(const MeasureSpec& m) {
  std::vector<ClosedInterval> raw;
  for (const auto& p : m.pieces()) raw.push_back({p.a, p.b});
  for (const auto& a : m.atoms()) raw.push_back({a.x, a.x});
  std::sort(raw.begin(), raw.end(),
            [](const ClosedInterval& u, const ClosedInterval& v) { return u.lo < v.lo; });
  std::vector<ClosedInterval> out;
  for (const auto& iv : raw) {
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

namespace {

std::string interval_text(ExtendedReal a, ExtendedReal b) {
  return "(" + a.to_string() + ", " + b.to_string() + ")";
}

}  // namespace

ValidationReport validate_triple(const Triple& t) {
  ValidationReport rep;
  const ScaleSupports sup = compute_supports(t.scale());
  const EndpointClass cl = classify_endpoint_triple(Side::left, t);
  const EndpointClass cr = classify_endpoint_triple(Side::right, t);

  bool dk_checked = false;
  for (const auto& p : sup.isolated_intervals()) {
    if (p.c == t.l()) {
      rep.clauses.push_back({"DK", cl.reflecting, "l = " + t.l().to_string() + " ends isolated " +
                                                      interval_text(p.c, p.d)});
      dk_checked = true;
    }
    if (p.d == t.r()) {
      rep.clauses.push_back({"DK", cr.reflecting, "r = " + t.r().to_string() + " ends isolated " +
                                                      interval_text(p.c, p.d)});
      dk_checked = true;
    }
  }
  if (!dk_checked) rep.clauses.push_back({"DK", true, ""});

  const auto em = measure_support(t.measure());
  bool support_ok = true;
  for (const auto& comp : sup.E_s) {
    const bool covered = std::any_of(em.begin(), em.end(), [&](const ClosedInterval& e) {
      return e.lo <= comp.lo && comp.hi <= e.hi;
    });
    if (!covered) {
      rep.clauses.push_back(
          {"DM-support", false, "[" + comp.lo.to_string() + ", " + comp.hi.to_string() + "]"});
      support_ok = false;
    }
  }
  if (support_ok) rep.clauses.push_back({"DM-support", true, ""});

  bool atoms_ok = true;
  for (double x : sup.D_zero) {
    if (!(t.measure().atom_at(x) > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << x;
      rep.clauses.push_back({"DM-atom", false, os.str()});
      atoms_ok = false;
    }
  }
  if (atoms_ok) rep.clauses.push_back({"DM-atom", true, ""});

  bool iso_ok = true;
  for (const auto& p : sup.isolated_intervals()) {
    const bool c_closed = !(p.c.is_finite() && std::binary_search(sup.D_plus.begin(),
                                                                  sup.D_plus.end(), p.c.value()));
    const bool d_closed = !(p.d.is_finite() && std::binary_search(sup.D_minus.begin(),
                                                                  sup.D_minus.end(), p.d.value()));
    const ExtendedReal mass = t.measure().mass({p.c, p.d, c_closed, d_closed});
    if (!(mass > 0.0)) {
      rep.clauses.push_back({"DM-isolated", false, interval_text(p.c, p.d)});
      iso_ok = false;
    }
  }
  if (iso_ok) rep.clauses.push_back({"DM-isolated", true, ""});
  return rep;
}

}  // namespace quasidiff
