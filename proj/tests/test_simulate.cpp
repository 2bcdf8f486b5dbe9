#include <cmath>
#include <sstream>

#include "doctest.h"
#include "quasidiff/gallery.hpp"
#include "quasidiff/simulate.hpp"

using namespace quasidiff;

namespace {

SkipFreeChain atoms_chain(std::vector<double> xs, std::vector<double> ms, EndBehavior l,
                          EndBehavior r) {
  std::vector<PointMass> a;
  for (std::size_t i = 0; i < xs.size(); ++i) a.push_back({xs[i], ms[i]});
  return build_chain(MeasureSpec({}, a), l, r);
}

bool same_events(const PathSample& a, const PathSample& b) {
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (a.events[i].t != b.events[i].t || a.events[i].state != b.events[i].state) return false;
  return a.end_time == b.end_time;
}

}  // namespace

TEST_CASE("rng streams") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  CHECK(path_seed(1, 0) != path_seed(1, 1));
  CHECK(path_seed(1, 5) == path_seed(1, 5));
  Rng r(7);
  double sum = 0.0, lo = 1.0, hi = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += r.exponential();
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 1.0) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("midpoint discretization") {
  const auto m = discretize_measure(MeasureSpec({{0.0, 1.0, 1.0}}, {}), 0.5);
  REQUIRE(m.atoms().size() == 2);
  CHECK(m.atoms()[0].x == ExtendedReal(0.25));
  CHECK(m.atoms()[1].x == ExtendedReal(0.75));
  CHECK(m.atoms()[0].mass == ExtendedReal(0.5));
  CHECK(m.is_atomic());

  const MeasureSpec atomic({}, {{0.0, 1.0}, {2.0, 3.0}});
  const auto same = discretize_measure(atomic, 0.1);
  REQUIRE(same.atoms().size() == 2);
  CHECK(same.atoms()[1].mass == ExtendedReal(3.0));
  CHECK_THROWS_AS(discretize_measure(atomic, 0.0), DomainError);
  CHECK_THROWS(discretize_measure(MeasureSpec({{0.0, ExtendedReal::pos_inf(), 1.0}}, {}), 0.1));

  const auto p = image_regularization(example_3_1());
  const auto d = discretize_measure(p.measure, 0.25);
  CHECK(d.atoms().size() == 9);
  CHECK(d.atom_at(1.0) == ExtendedReal(1.0));
  CHECK(d.atom_at(0.125) == ExtendedReal(0.25));
  CHECK(d.atom_at(2.875) == ExtendedReal(0.25));
  CHECK(d.total().value() == doctest::Approx(3.0));
}

TEST_CASE("package chains pin gap edges and keep detailed balance") {
  const auto p = image_regularization(example_3_1());
  ChainSpec spec;
  spec.delta = 0.25;
  const auto c = build_chain(p, spec);
  CHECK_NOTHROW(c.index_of(1.0));
  CHECK_NOTHROW(c.index_of(2.0));
  const std::size_t k = c.index_of(1.0);
  CHECK(c.states[k + 1] == 2.0);
  CHECK(c.conductance[k] == 0.5);
  double total = 0.0;
  for (double m : c.masses) total += m;
  CHECK(total == doctest::Approx(3.0));
  CHECK(detailed_balance(c));
  CHECK(c.left == EndBehavior::reflect);
  CHECK(c.right == EndBehavior::reflect);

  for (const auto& t : {snapping_out(2.0), cantor(2, CantorVariant::timechange), bm_line(),
                        absorbing_bm(), cubic_diffusion(5)}) {
    const auto q = image_regularization(t);
    ChainSpec s;
    s.delta = 0.05;
    CHECK(detailed_balance(build_chain(q, s)));
  }
}

TEST_CASE("default windows") {
  const auto abs = image_regularization(absorbing_bm());
  const auto [lo, hi] = default_window(abs);
  CHECK(lo.behavior == EndBehavior::reflect);
  CHECK(hi.behavior == EndBehavior::absorb);
  CHECK(hi.position == 1.0);
  const auto line = image_regularization(bm_line());
  const auto w = default_window(line);
  CHECK(w.first.behavior == EndBehavior::none);
  CHECK(w.second.behavior == EndBehavior::none);
}

TEST_CASE("single state chain gives a constant path") {
  const auto c = atoms_chain({0.0}, {2.0}, EndBehavior::reflect, EndBehavior::reflect);
  const auto p = simulate_path(c, 0, 5.0, 9);
  CHECK(p.events.size() == 1);
  CHECK(p.jumps == 0);
  CHECK(p.end_time == 5.0);
  CHECK(occupation_of(p, 0) == 5.0);
  CHECK(markov_local_time_at(p, 0, c, 3.0) == doctest::Approx(1.5));
  CHECK(markov_local_time_at(p, 0, c, 5.0) == doctest::Approx(2.5));
  CHECK_FALSE(p.absorbed_at.has_value());
}

TEST_CASE("three-state absorbed walk") {
  const auto c = atoms_chain({0, 1, 2}, {1, 1, 1}, EndBehavior::absorb, EndBehavior::absorb);
  const std::size_t n = 100000;
  const auto paths = simulate_paths(c, 1, 1e9, n, 3, 0);
  std::size_t top = 0;
  bool ends_ok = true;
  for (const auto& p : paths) {
    ends_ok = ends_ok && p.absorbed_at && (*p.absorbed_at == 0 || *p.absorbed_at == 2) &&
              p.end_time == p.lifetime;
    top += p.absorbed_at && *p.absorbed_at == 2;
  }
  CHECK(ends_ok);
  const double est = double(top) / n;
  CHECK(std::abs(est - 0.5) <= 4.0 * std::sqrt(0.25 / n));
  const auto immediate = simulate_path(c, 0, 1.0, 1);
  CHECK(immediate.lifetime == 0.0);
  CHECK(skip_free_check(immediate, c));
}

TEST_CASE("holding times match mass over total conductance") {
  const auto c = atoms_chain({0, 1}, {1, 1}, EndBehavior::reflect, EndBehavior::reflect);
  const auto p = simulate_path(c, 0, 200000.0, 17);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < p.events.size(); ++i) {
    if (p.events[i].state != 0) continue;
    sum += p.events[i + 1].t - p.events[i].t;
    ++count;
  }
  const double mean = sum / count;
  // Exponential holding: stderr = mean / sqrt(count).
  CHECK(std::abs(mean - 2.0) <= 4.0 * 2.0 / std::sqrt(double(count)));
  const double ell = markov_local_time_at(p, 0, c, p.end_time) / p.end_time;
  CHECK(ell == doctest::Approx(0.5).epsilon(0.02));
  const auto ell_path = markov_local_time(p, 0, c);
  bool monotone = true;
  for (std::size_t i = 1; i < ell_path.size(); ++i)
    monotone = monotone && ell_path[i].second >= ell_path[i - 1].second;
  CHECK(monotone);
}

TEST_CASE("occupation sums to the end time") {
  const auto p = image_regularization(cantor(2, CantorVariant::bm_on_cantor));
  ChainSpec spec;
  spec.delta = 0.02;
  const auto c = build_chain(p, spec);
  const auto paths = simulate_paths(c, c.nearest(0.5), 3.0, 200, 5, 2);
  for (const auto& s : paths) {
    double total = 0.0;
    for (const auto& [k, t] : s.occupation) total += t;
    CHECK(total == doctest::Approx(s.end_time).epsilon(1e-12));
    CHECK(skip_free_check(s, c));
    bool increasing = true;
    for (std::size_t i = 1; i < s.events.size(); ++i)
      increasing = increasing && s.events[i].t > s.events[i - 1].t;
    CHECK(increasing);
  }
}

TEST_CASE("unvisited states have zero local time") {
  const auto c = atoms_chain({0, 1, 2}, {1, 1, 1}, EndBehavior::reflect, EndBehavior::reflect);
  const auto p = simulate_path(c, 0, 1e-9, 1);
  CHECK(markov_local_time_at(p, 2, c, 1e-9) == 0.0);
  auto killed = c;
  killed.masses[0] = 0.0;
  CHECK_THROWS_AS(markov_local_time_at(p, 0, killed, 1e-9), DomainError);
}

TEST_CASE("skip-free checks") {
  CHECK_FALSE(skip_free_check(std::vector<double>{0.0, 2.0}, std::vector<double>{0, 1, 2}));
  CHECK(skip_free_check(std::vector<double>{0.0, 1.0, 2.0, 1.0}, std::vector<double>{0, 1, 2}));
  CHECK(skip_free_check(std::vector<double>{}, std::vector<double>{0, 1, 2}));
  const auto c = atoms_chain({0, 1, 2}, {1, 1, 1}, EndBehavior::reflect, EndBehavior::reflect);
  PathSample bad;
  bad.events = {{0.0, 0}, {1.0, 2}};
  CHECK_FALSE(skip_free_check(bad, c));
  CHECK(skip_free_check(PathSample{}, c));
}

TEST_CASE("paths do not depend on the thread count") {
  const auto p = image_regularization(snapping_out(2.0));
  ChainSpec spec;
  spec.delta = 0.1;
  const auto c = build_chain(p, spec);
  const auto x0 = c.nearest(0.0);
  const auto one = simulate_paths(c, x0, 2.0, 300, 77, 1);
  const auto four = simulate_paths(c, x0, 2.0, 300, 77, 4);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(same_events(one[i], four[i]));
  std::ostringstream a, b;
  write_csv(a, one, c, &p.pullback);
  write_csv(b, four, c, &p.pullback);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("path_id,t,state,x\n", 0) == 0);
}

TEST_CASE("snapping-out projection removes the gap") {
  const double kappa = 2.0;
  const auto p = image_regularization(snapping_out(kappa));
  const Gap g = p.gaps[0];
  ChainSpec spec;
  spec.delta = 0.1;
  spec.lo = WindowEnd{g.a - 2.0, EndBehavior::reflect};
  spec.hi = WindowEnd{g.b + 2.0, EndBehavior::reflect};
  const auto c = build_chain(p, spec);
  const auto paths = simulate_paths(c, c.index_of(g.a), 4.0, 500, 2, 0);
  std::size_t crossings = 0;
  for (const auto& s : paths) {
    const auto proj = project_unregularized(s, c, p.pullback);
    REQUIRE(proj.size() == s.events.size());
    for (std::size_t i = 1; i < proj.size(); ++i) {
      const double da = proj[i].image - proj[i - 1].image;
      const bool across = std::abs(std::abs(da) - (g.b - g.a)) < 1e-12 &&
                          std::min(proj[i].image, proj[i - 1].image) == g.a;
      if (across) {
        ++crossings;
        CHECK(proj[i].x == 0.0);
        CHECK(proj[i - 1].x == 0.0);
      }
    }
  }
  CHECK(crossings > 0);
}

TEST_CASE("example 3.1 projection maps the darned point to the plateau midpoint") {
  const auto p = image_regularization(example_3_1());
  ChainSpec spec;
  spec.delta = 0.25;
  const auto c = build_chain(p, spec);
  const auto s = simulate_path(c, c.index_of(1.0), 0.5, 3);
  const auto proj = project_unregularized(s, c, p.pullback);
  CHECK(proj[0].image == 1.0);
  CHECK(proj[0].x == doctest::Approx(1.5));
}
