#include <random>

#include "doctest.h"
#include "quasidiff/gallery.hpp"
#include "quasidiff/scale.hpp"
#include "quasidiff/triple.hpp"

using namespace quasidiff;

namespace {

bool has_failed(const ValidationReport& r, const std::string& clause) {
  for (const auto& c : r.clauses)
    if (c.clause == clause && !c.passed) return true;
  return false;
}

}  // namespace

TEST_CASE("extended reals order and reject undefined arithmetic") {
  const ExtendedReal inf = ExtendedReal::pos_inf(), ninf = ExtendedReal::neg_inf();
  CHECK(ninf < ExtendedReal(-1e300));
  CHECK(ExtendedReal(1e300) < inf);
  CHECK(ExtendedReal(2.0) + inf == inf);
  CHECK(ExtendedReal(-3.0) * inf == ninf);
  CHECK_THROWS_AS(inf - inf, DomainError);
  CHECK_THROWS_AS(ExtendedReal(0.0) * inf, DomainError);
  CHECK_THROWS_AS(inf.value(), DomainError);
  CHECK(ExtendedReal(INFINITY) == inf);
}

TEST_CASE("identity scale has no jump part") {
  GeneralizedScale s(-1.0, 1.0, {{-1, -1}, {1, 1}}, {});
  const auto d = decompose_scale(s);
  CHECK(d.mu_d_plus.empty());
  CHECK(d.mu_d_minus.empty());
  CHECK(d.mu_c.mass({-0.5, 0.25, false, false}).value() == doctest::Approx(0.75));
  CHECK(s.normalized(0.0) == 0.0);
}

TEST_CASE("example 3.1 decomposition and supports") {
  const Triple t = example_3_1();
  const auto d = decompose_scale(t.scale());
  REQUIRE(d.mu_d_minus.atoms().size() == 1);
  CHECK(d.mu_d_minus.atoms()[0].x == ExtendedReal(2.0));
  CHECK(d.mu_d_minus.atoms()[0].mass == ExtendedReal(1.0));
  CHECK(d.mu_d_plus.empty());

  const auto sup = compute_supports(t.scale());
  REQUIRE(sup.plateaus.size() == 1);
  CHECK(sup.plateaus[0].c == ExtendedReal(1.0));
  CHECK(sup.plateaus[0].d == ExtendedReal(2.0));
  REQUIRE(sup.E_s.size() == 2);
  CHECK(sup.E_s[0].lo == ExtendedReal(0.0));
  CHECK(sup.E_s[0].hi == ExtendedReal(1.0));
  CHECK(sup.E_s[1].lo == ExtendedReal(2.0));
  CHECK(sup.E_s[1].hi == ExtendedReal(3.0));
  CHECK(sup.D_minus == std::vector<double>{2.0});
  CHECK(sup.D_plus.empty());

  CHECK(validate_triple(t).ok());
  const auto l = classify_endpoint_triple(Side::left, t);
  const auto r = classify_endpoint_triple(Side::right, t);
  CHECK(l.label() == "reflecting");
  CHECK(r.label() == "reflecting");
}

TEST_CASE("snapping-out jump sits at 0 with gap 2/kappa") {
  const Triple t = snapping_out(2.0);
  const auto d = decompose_scale(t.scale());
  const auto all = d.mu_d_plus.total() + d.mu_d_minus.total();
  CHECK(all == ExtendedReal(1.0));
  CHECK(t.scale().right_limit(0.0) - t.scale().left_limit(0.0) == doctest::Approx(1.0));
  CHECK(d.mu_c.mass({-2.0, 3.0, false, false}).value() == doctest::Approx(5.0));
}

TEST_CASE("increments match the three measures") {
  std::mt19937_64 gen(7);
  const std::vector<Triple> triples = {example_3_1(), snapping_out(3.0), cantor(2, CantorVariant::timechange),
                                       random_walk({0, 1, 3, 4}, {1, 2, 1, 1})};
  for (const auto& t : triples) {
    const auto& s = t.scale();
    const auto d = decompose_scale(s);
    const std::vector<double> lo_hi = {std::max(-5.0, s.l().as_double()),
                                       std::min(5.0, s.r().as_double())};
    std::uniform_real_distribution<double> u(lo_hi[0], lo_hi[1]);
    for (int i = 0; i < 200; ++i) {
      double a = u(gen), b = u(gen);
      if (a > b) std::swap(a, b);
      if (a == b || s.jump_index(a) || s.jump_index(b)) continue;
      const double lhs = s.at(b) - s.at(a);
      const double rhs = d.mu_c.mass({a, b, false, false}).value() +
                         d.mu_d_plus.mass({a, b, true, false}).value() +
                         d.mu_d_minus.mass({a, b, false, true}).value();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("cantor staircase plateau counts") {
  CHECK(compute_supports(cantor(0, CantorVariant::timechange).scale()).plateaus.empty());
  CHECK(compute_supports(cantor(1, CantorVariant::timechange).scale()).plateaus.size() == 1);
  CHECK(compute_supports(cantor(2, CantorVariant::timechange).scale()).plateaus.size() == 3);
  CHECK(compute_supports(cantor(3, CantorVariant::timechange).scale()).plateaus.size() == 7);
  CHECK(compute_supports(cantor(2, CantorVariant::timechange, 2).scale()).plateaus.size() == 6);
}

TEST_CASE("supports are disjoint and cover the interval") {
  const auto sup = compute_supports(cantor(3, CantorVariant::timechange).scale());
  double covered = 0.0;
  for (const auto& e : sup.E_s) covered += e.hi.value() - e.lo.value();
  for (const auto& p : sup.plateaus) covered += p.d.value() - p.c.value();
  CHECK(covered == doctest::Approx(1.0));
  for (std::size_t i = 1; i < sup.plateaus.size(); ++i)
    CHECK(sup.plateaus[i - 1].d <= sup.plateaus[i].c);
}

TEST_CASE("an isolated jump point without an atom fails the atom clause") {
  GeneralizedScale s(-1.0, 1.0, {{-1, -1}, {1, 1}}, {{0.5, 0.5, 0.5}});
  Triple bad(s, MeasureSpec({{-1.0, 1.0, 1.0}}, {}));
  const auto rep = validate_triple(bad);
  CHECK_FALSE(rep.ok());
  CHECK(has_failed(rep, "DM-atom"));
  Triple good(s, MeasureSpec({{-1.0, 1.0, 1.0}}, {{0.5, 1.0}}));
  CHECK(validate_triple(good).ok());
}

TEST_CASE("endpoint classes") {
  const auto line = bm_line();
  CHECK_FALSE(classify_endpoint_triple(Side::right, line).approachable);
  const auto abs = absorbing_bm();
  const auto r = classify_endpoint_triple(Side::right, abs);
  CHECK(r.approachable);
  CHECK(r.regular);
  CHECK_FALSE(r.reflecting);
  CHECK(r.label() == "absorbing");
  const auto l = classify_endpoint_triple(Side::left, abs);
  CHECK(l.reflecting);
}

TEST_CASE("infinite interior atoms are rejected") {
  GeneralizedScale s(0.0, 1.0, {{0, 0}, {1, 1}}, {});
  CHECK_THROWS(Triple(s, MeasureSpec({}, {{0.5, ExtendedReal::pos_inf()}})));
}
