#include <random>

#include "doctest.h"
#include "quasidiff/dirichlet_form.hpp"
#include "quasidiff/gallery.hpp"

using namespace quasidiff;

namespace {

TripleFunction random_function(const GeneralizedScale& s, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  TripleFunction f;
  f.c0 = n(gen);
  for (const auto& seg : s.segments())
    f.g_c.push_back(seg.lo.is_finite() && seg.hi.is_finite() ? n(gen) : 0.0);
  for (std::size_t j = 0; j < s.jumps().size(); ++j) {
    f.g_minus.push_back(n(gen));
    f.g_plus.push_back(n(gen));
  }
  return f;
}

}  // namespace

TEST_CASE("lift of s is the identity on the image") {
  const Triple t = example_3_1();
  const auto p = image_regularization(t);
  const auto f = lift(TripleFunction::identity(t.scale()), t, p);
  for (double y : {0.0, 0.3, 1.0, 2.0, 2.7, 3.0}) CHECK(f(y) == doctest::Approx(y));
  CHECK(energy_triple(TripleFunction::identity(t.scale()), t.scale()) == doctest::Approx(1.5));
  CHECK(energy_image(f, p) == doctest::Approx(1.5));
}

TEST_CASE("snapping-out unit step has energy kappa/4") {
  for (double kappa : {0.5, 2.0, 8.0}) {
    const Triple t = snapping_out(kappa);
    const auto p = image_regularization(t);
    TripleFunction f;
    f.g_c.assign(t.scale().segments().size(), 0.0);
    f.g_minus.assign(1, 0.0);
    f.g_plus.assign(1, 0.0);
    const Jump& j = t.scale().jumps()[0];
    if (j.left_gap > 0.0) f.g_minus[0] = 1.0 / j.left_gap;
    else f.g_plus[0] = 1.0 / j.right_gap;
    const auto fh = lift(f, t, p);
    const double lo = fh(p.gaps[0].a - 3.0), hi = fh(p.gaps[0].b + 3.0);
    CHECK(hi - lo == doctest::Approx(1.0));
    CHECK(energy_triple(f, t.scale()) == doctest::Approx(kappa / 4.0));
    CHECK(energy_image(fh, p) == doctest::Approx(kappa / 4.0));
  }
}

TEST_CASE("lattice energy has no local part") {
  const auto p = image_regularization(random_walk({0, 1, 2}, {1, 1, 1}));
  LiftedFunction f;
  f.breakpoints = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
  CHECK(energy_image(f, p) == doctest::Approx(1.0));
  LiftedFunction c;
  c.breakpoints = {{0.0, 3.0}, {2.0, 3.0}};
  CHECK(energy_image(c, p) == 0.0);
}

TEST_CASE("triple and image energies agree on random functions") {
  std::mt19937_64 gen(11);
  const std::vector<Triple> triples = {example_3_1(), snapping_out(2.0),
                                       cantor(2, CantorVariant::bm_on_cantor),
                                       random_walk({0, 0.5, 2, 2.25}, {1, 1, 2, 1}),
                                       cubic_diffusion(6)};
  for (const auto& t : triples) {
    const auto p = image_regularization(t);
    for (int i = 0; i < 10; ++i) {
      const auto f = random_function(t.scale(), gen);
      const double et = energy_triple(f, t.scale());
      const double ei = energy_image(lift(f, t, p), p);
      CHECK(std::abs(et - ei) <= 1e-10 * std::max(1.0, std::abs(et)));
    }
  }
}

TEST_CASE("constant functions have zero energy") {
  const Triple t = cantor(2, CantorVariant::timechange);
  const auto p = image_regularization(t);
  TripleFunction f;
  f.c0 = 2.5;
  f.g_c.assign(t.scale().segments().size(), 0.0);
  f.g_minus.assign(t.scale().jumps().size(), 0.0);
  f.g_plus.assign(t.scale().jumps().size(), 0.0);
  CHECK(energy_triple(f, t.scale()) == 0.0);
  const auto fh = lift(f, t, p);
  CHECK(energy_image(fh, p) == 0.0);
  CHECK(fh(0.4) == doctest::Approx(2.5));
}

TEST_CASE("functions varying on a plateau are rejected") {
  const Triple t = example_3_1();
  auto nodes = TripleFunction::identity(t.scale()).node_values(t.scale());
  for (auto& v : nodes)
    if (v.x == ExtendedReal(2.0)) v.left += 0.5;
  CHECK_THROWS_AS(TripleFunction::from_node_values(t.scale(), nodes), NotInScaleClass);
  const auto ok = TripleFunction::from_node_values(
      t.scale(), TripleFunction::identity(t.scale()).node_values(t.scale()));
  CHECK(energy_triple(ok, t.scale()) == doctest::Approx(1.5));
}

TEST_CASE("membership in the form domain") {
  LiftedFunction one;
  one.breakpoints = {{0.0, 1.0}};
  CHECK(membership_F(one, image_regularization(reflecting_bm())));
  const auto abs = image_regularization(absorbing_bm());
  CHECK_FALSE(membership_F(one, abs));
  LiftedFunction id;
  id.breakpoints = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK_FALSE(membership_F(id, abs));
  LiftedFunction down;
  down.breakpoints = {{0.0, 1.0}, {1.0, 0.0}};
  CHECK(membership_F(down, abs));
  CHECK(l2_norm_squared(down, abs) == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(membership_F(one, image_regularization(bm_line())));
}

TEST_CASE("transience") {
  CHECK(transience(image_regularization(reflecting_bm())) == Recurrence::recurrent);
  CHECK(transience(image_regularization(absorbing_bm())) == Recurrence::transient);
  CHECK(transience(image_regularization(bm_line())) == Recurrence::recurrent);
}

TEST_CASE("arclength maps") {
  const auto p = image_regularization(example_3_1());
  const auto m = arclength_maps(p);
  CHECK(m.F(2.5) == doctest::Approx(1.5));
  CHECK(m.G(1.5) == ExtendedReal(2.5));
  CHECK(m.F(1.5) == doctest::Approx(1.0));
  CHECK(m.G(1.0) == ExtendedReal(2.0));
  const auto bm = arclength_maps(image_regularization(reflecting_bm()));
  for (double x : {0.0, 0.25, 0.9}) CHECK(bm.F(x) == doctest::Approx(x));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(gen);
    if (x >= 1.0 && x <= 2.0) continue;
    CHECK(m.G(m.F(x)).value() == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("unit contraction does not increase energy") {
  std::mt19937_64 gen(19);
  const std::vector<Triple> triples = {example_3_1(), snapping_out(1.0), cubic_diffusion(4)};
  for (const auto& t : triples) {
    const auto p = image_regularization(t);
    for (int i = 0; i < 20; ++i) {
      const auto f = lift(random_function(t.scale(), gen), t, p);
      const auto g = unit_contraction(f);
      CHECK(energy_image(g, p) <= energy_image(f, p) * (1.0 + 1e-12) + 1e-15);
      for (const auto& b : g.breakpoints) {
        CHECK(b.second >= 0.0);
        CHECK(b.second <= 1.0);
      }
    }
  }
}
