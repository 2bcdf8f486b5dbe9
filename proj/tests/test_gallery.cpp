#include <cmath>

#include "doctest.h"
#include "quasidiff/gallery.hpp"
#include "quasidiff/simulate.hpp"

using namespace quasidiff;

namespace {

SkipFreeChain chain_of(const Triple& t) {
  ChainSpec spec;
  spec.delta = 0.1;
  return build_chain(image_regularization(t), spec);
}

}  // namespace

TEST_CASE("every gallery entry validates") {
  for (const auto& name : gallery_names()) {
    CAPTURE(name);
    const Triple t = gallery_triple(name, {});
    CHECK(validate_triple(t).ok());
    CHECK_NOTHROW(image_regularization(t));
  }
  CHECK_THROWS(gallery_triple("nope", {}));
  CHECK_THROWS(gallery_triple("snapping_out", {{"kappa", "-1"}}));
  CHECK_THROWS(gallery_triple("snapping_out", {{"kappa", "abc"}}));
}

TEST_CASE("regular diffusions reject flat pieces") {
  CHECK_THROWS_AS(regular_diffusion(0.0, 2.0, {{0, 0}, {1, 1}, {2, 1}},
                                    MeasureSpec({{0.0, 2.0, 1.0}}, {})),
                  Error);
  const auto sup = compute_supports(cubic_diffusion(8).scale());
  CHECK(sup.plateaus.empty());
  CHECK(sup.D_plus.empty());
  CHECK(sup.D_minus.empty());
}

TEST_CASE("snapping-out gap shrinks with kappa") {
  for (double kappa : {1.0, 2.0, 100.0}) {
    const auto p = image_regularization(snapping_out(kappa));
    REQUIRE(p.gaps.size() == 1);
    CHECK(p.gaps[0].length() == doctest::Approx(2.0 / kappa));
  }
}

TEST_CASE("random walks on a lattice") {
  const auto two = image_regularization(random_walk({0, 1}, {1, 1}));
  CHECK(two.measure.atoms().size() == 2);
  const auto c = chain_of(constant_speed_walk({0, 1, 3, 3.5, 5}));
  REQUIRE(c.size() == 5);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c.holding_mean(k) == doctest::Approx(1.0));
  const auto w = chain_of(random_walk({0, 1, 2, 3}, {1, 1, 1, 1}));
  CHECK(w.holding_mean(1) == doctest::Approx(1.0));
  CHECK(w.holding_mean(0) == doctest::Approx(2.0));
  CHECK(w.p_up(1) == doctest::Approx(0.5));
}

TEST_CASE("birth-death from explicit rates") {
  const BirthDeath bd = birth_death({1.0, 1.0}, {2.0, 3.0});
  REQUIRE(bd.positions.size() == 3);
  CHECK(bd.positions[0] == 0.0);
  CHECK(bd.positions[1] == doctest::Approx(0.25));
  CHECK(bd.positions[2] == doctest::Approx(0.25 + 1.0 / 12.0));
  CHECK(bd.masses[0] == doctest::Approx(1.0));
  CHECK(bd.masses[1] == doctest::Approx(2.0));
  CHECK(bd.masses[2] == doctest::Approx(6.0));
  CHECK(bd.round_trip_error <= 1e-12);
  const auto c = chain_of(bd.triple);
  CHECK(c.holding_mean(1) == doctest::Approx(0.25));
  CHECK(c.p_up(1) == doctest::Approx(0.75));
  CHECK(c.holding_mean(0) == doctest::Approx(0.5));
  CHECK(c.holding_mean(2) == doctest::Approx(1.0));
  CHECK(detailed_balance(c));

  const BirthDeath small = birth_death({1.0}, {2.0});
  const auto c2 = chain_of(small.triple);
  CHECK(c2.mu_up(0) == doctest::Approx(2.0));
  CHECK(c2.holding_mean(0) == doctest::Approx(0.5));
  CHECK_THROWS(birth_death({1.0, 2.0}, {1.0}));
  CHECK_THROWS(birth_death({-1.0}, {1.0}));
}

TEST_CASE("birth-death families round trip their rates") {
  for (const char* name : {"constant", "linear", "quadratic", "entrance"}) {
    CAPTURE(name);
    const auto rates = birth_death_family(name);
    const BirthDeath bd = birth_death(rates, 10);
    CHECK(bd.round_trip_error <= 1e-9);
    const auto c = chain_of(bd.triple);
    REQUIRE(c.size() == 11);
    for (std::size_t k = 1; k < 10; ++k) {
      CHECK(c.holding_mean(k) == doctest::Approx(1.0 / (rates.a(k) + rates.b(k))));
      CHECK(c.p_up(k) == doctest::Approx(rates.b(k) / (rates.a(k) + rates.b(k))));
    }
    CHECK(c.holding_mean(0) == doctest::Approx(1.0 / rates.b(0)));
    CHECK(bd.report.q_max == 10);
    CHECK(bd.report.horizon >= 64);
  }
  CHECK_THROWS(birth_death_family("cubic"));
}

TEST_CASE("uniqueness criteria per family") {
  const auto constant = birth_death(birth_death_family("constant"), 32).report;
  CHECK(constant.unique);
  CHECK(constant.symmetric_unique);
  const auto quad = birth_death(birth_death_family("quadratic"), 32).report;
  CHECK_FALSE(quad.unique);
  CHECK(quad.c_infinity.verdict == SeriesVerdict::converges);
  CHECK(quad.total_mass.verdict == SeriesVerdict::diverges);
  const auto linear = birth_death(birth_death_family("linear"), 32).report;
  CHECK(linear.unique);
}

TEST_CASE("cantor constructions") {
  const auto g1 = cantor_gaps(1);
  REQUIRE(g1.size() == 1);
  CHECK(g1[0].first == doctest::Approx(1.0 / 3.0));
  CHECK(g1[0].second == doctest::Approx(2.0 / 3.0));
  CHECK(cantor_gaps(2).size() == 3);
  CHECK(cantor_gaps(2, 2).size() == 6);
  CHECK(cantor_gaps(0).empty());

  const Triple t = cantor(1, CantorVariant::bm_on_cantor);
  CHECK(t.measure().atom_at(g1[0].first).value() == doctest::Approx(1.0 / 6.0));
  CHECK(t.measure().atom_at(g1[0].second).value() == doctest::Approx(1.0 / 6.0));
  const auto p = image_regularization(t);
  REQUIRE(p.gaps.size() == 1);
  CHECK(p.gaps[0].a == doctest::Approx(1.0 / 3.0));
  CHECK(p.gaps[0].b == doctest::Approx(2.0 / 3.0));

  const Triple plain = cantor(0, CantorVariant::timechange);
  CHECK(compute_supports(plain.scale()).plateaus.empty());
  CHECK(image_regularization(plain).gaps.empty());

  const Triple d2 = cantor(2, CantorVariant::timechange);
  CHECK(d2.measure().total().value() == doctest::Approx(4.0 / 9.0));
  const Triple d2b = cantor(2, CantorVariant::bm_on_cantor);
  // Lebesgue on K plus (b-a) per removed interval.
  CHECK(d2b.measure().total().value() == doctest::Approx(1.0));
}
