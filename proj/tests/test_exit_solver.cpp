#include <random>

#include "doctest.h"
#include "quasidiff/exit_solver.hpp"

using namespace quasidiff;

namespace {

MeasureSpec unit_atoms(std::vector<double> xs, std::vector<double> ms) {
  std::vector<PointMass> a;
  // Zero entries stand for kill states whose mass is never used.
  for (std::size_t i = 0; i < xs.size(); ++i) a.push_back({xs[i], ms[i] > 0.0 ? ms[i] : 1.0});
  return MeasureSpec({}, a);
}

}  // namespace

TEST_CASE("hitting probability on natural scale") {
  CHECK(hitting_probability(0.0, 0.0, 3.0) == 0.0);
  CHECK(hitting_probability(3.0, 0.0, 3.0) == 1.0);
  CHECK(hitting_probability(1.0, 0.0, 3.0) == doctest::Approx(1.0 / 3.0));
  CHECK(hitting_probability(0.5, 0.0, 3.0) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(hitting_probability(1.0, 2.0, 2.0), DomainError);
  GeneralizedScale s(0.0, 3.0, {{0, 0}, {1, 1}, {2, 1}, {3, 2}}, {{2.0, 1.0, 0.0}});
  CHECK(hitting_probability(0.5, 0.0, 3.0, s) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("three and four state exit times") {
  const auto c3 = build_chain(unit_atoms({0, 1, 2}, {0, 1, 0}), EndBehavior::absorb,
                              EndBehavior::absorb);
  const auto h3 = exit_time_oracle(c3, 0, 2);
  CHECK(h3[0] == 0.0);
  CHECK(h3[2] == 0.0);
  CHECK(h3[1] == doctest::Approx(1.0));

  const auto c4 = build_chain(unit_atoms({0, 1, 2, 3}, {0, 1, 1, 0}), EndBehavior::absorb,
                              EndBehavior::absorb);
  const auto h4 = exit_time_oracle(c4, 0, 3);
  CHECK(h4[1] == doctest::Approx(2.0));
  CHECK(h4[2] == doctest::Approx(2.0));
  const auto rec = speed_from_exit_times(h4, c4.states);
  REQUIRE(rec.masses.size() == 2);
  CHECK(rec.masses[0] == doctest::Approx(1.0));
  CHECK(rec.masses[1] == doctest::Approx(1.0));
  CHECK(rec.concave);
}

TEST_CASE("speed from exit times") {
  const auto r = speed_from_exit_times({0.0, 1.0, 0.0}, {0.0, 1.0, 2.0});
  REQUIRE(r.masses.size() == 1);
  CHECK(r.masses[0] == 1.0);
  CHECK(r.positions[0] == 1.0);
  const auto affine = speed_from_exit_times({0.0, 1.0, 3.0, 0.0}, {0.0, 1.0, 3.0, 4.0});
  CHECK(affine.masses[0] == doctest::Approx(0.0));
  const auto bad = speed_from_exit_times({0.0, -1.0, 0.0}, {0.0, 1.0, 2.0});
  CHECK_FALSE(bad.concave);
  CHECK(bad.worst_violation == doctest::Approx(-1.0));
}

TEST_CASE("random chains: round trip, concavity and gambler's ruin") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 12;
    std::vector<double> xs{0.0}, ms{0.0};
    for (std::size_t k = 1; k < n; ++k) {
      xs.push_back(xs.back() + u(gen));
      ms.push_back(k + 1 < n ? u(gen) : 0.0);
    }
    const auto c = build_chain(unit_atoms(xs, ms), EndBehavior::absorb, EndBehavior::absorb);
    const auto h = exit_time_oracle(c, 0, n - 1);
    const auto rec = speed_from_exit_times(h, c.states);
    CHECK(rec.concave);
    for (std::size_t i = 0; i < rec.masses.size(); ++i)
      CHECK(std::abs(rec.masses[i] - ms[i + 1]) <= 1e-12 * ms[i + 1]);
    const auto g = gambler_ruin(c, 0, n - 1);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(g[k] == doctest::Approx(hitting_probability(xs[k], xs[0], xs[n - 1])).epsilon(1e-12));
  }
}

TEST_CASE("windowing: a sub-window recovers the same masses") {
  const std::vector<double> xs{0, 1, 1.5, 3, 4, 4.5, 6}, ms{0, 2, 1, 0.5, 3, 1, 0};
  const auto c = build_chain(unit_atoms(xs, ms), EndBehavior::absorb, EndBehavior::absorb);
  const auto inner = exit_time_oracle(c, 1, 5);
  const auto rec = speed_from_exit_times(inner, {xs.begin() + 1, xs.begin() + 6});
  for (std::size_t i = 0; i < rec.masses.size(); ++i)
    CHECK(rec.masses[i] == doctest::Approx(ms[i + 2]).epsilon(1e-12));
}

TEST_CASE("chain rates") {
  const auto flip = build_chain(unit_atoms({0, 1}, {1, 1}), EndBehavior::reflect,
                                EndBehavior::reflect);
  CHECK(flip.conductance[0] == 0.5);
  CHECK(flip.holding_mean(0) == 2.0);
  CHECK(flip.holding_mean(1) == 2.0);
  CHECK(flip.p_up(0) == 1.0);
  CHECK(flip.mu_down(0) == 0.0);

  const auto c = build_chain(unit_atoms({0, 0.25, 1}, {1, 2, 1}), EndBehavior::reflect,
                             EndBehavior::absorb);
  CHECK(c.mu_up(0) == 2.0);
  CHECK(c.holding_mean(0) == 0.5);
  CHECK(c.absorbing(2));
  CHECK_FALSE(c.absorbing(0));
  CHECK(c.index_of(0.25) == 1);
  CHECK_THROWS_AS(c.index_of(0.3), DomainError);
  CHECK(c.nearest(0.3) == 1);
  CHECK_THROWS(build_chain(MeasureSpec(), EndBehavior::reflect, EndBehavior::reflect));
}

TEST_CASE("exit moments") {
  const auto c = build_chain(unit_atoms({0, 1, 2}, {0, 1, 0}), EndBehavior::absorb,
                             EndBehavior::absorb);
  const auto m = exit_moments(c, 0, 2, 2);
  // From 1 the exit time is exponential with mean 1.
  CHECK(m[0][1] == doctest::Approx(1.0));
  CHECK(m[1][1] == doctest::Approx(2.0));
}

TEST_CASE("reflecting row gives one-sided exit times") {
  const auto c = build_chain(unit_atoms({0, 1, 2}, {1, 1, 0}), EndBehavior::reflect,
                             EndBehavior::absorb);
  const auto h = solve_generator(c, 0, 2, false, true, c.masses);
  // h0 = 2 + h1 (holding 2, then to 1); h1 = 1 + h0/2.
  CHECK(h[1] == doctest::Approx(4.0));
  CHECK(h[0] == doctest::Approx(6.0));
}
