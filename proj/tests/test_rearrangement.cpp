#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "varlex/error.hpp"
#include "varlex/rearrangement.hpp"

using namespace varlex;

TEST_CASE("distribution function") {
  CHECK(distribution_function(indicator(0.0, 0.25), 0.5) == 0.25);
  CHECK(distribution_function(StepFn::constant(3.0), 3.0) == 0.0);
  StepFn f({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, {1.0, 2.0, 3.0});
  CHECK(distribution_function(f, 1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(distribution_function(f, -1.0), DomainError);
}

TEST_CASE("decreasing rearrangement examples") {
  CHECK(decreasing_rearrangement(indicator(0.5, 0.75)) == indicator(0.0, 0.25));

  StepFn mono({0.0, 0.25, 1.0}, {3.0, 1.0});
  CHECK(decreasing_rearrangement(mono) == mono);

  StepFn f({0.0, 0.5, 0.8, 1.0}, {1.0, 4.0, 2.0});
  StepFn r = decreasing_rearrangement(f);
  REQUIRE(r.cells() == 3);
  CHECK(r.value(0) == 4.0);
  CHECK(r.value(1) == 2.0);
  CHECK(r.value(2) == 1.0);
  CHECK(r.length(0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(r.length(1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(r.length(2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("rearrangement matches the sort oracle on random step functions") {
  vt::Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    StepFn f = vt::random_stepfn(rng);
    StepFn r = decreasing_rearrangement(f);
    auto oracle = vt::sorted_cells_oracle(f);
    REQUIRE(r.is_non_increasing());
    REQUIRE(equimeasurable(f, r, 0.0));
    for (int s = 0; s < 200; ++s) {
      double t = vt::uniform(rng, 0.0, 1.0);
      if (distance_to_breakpoint(r, t) < 1e-12) continue;
      REQUIRE(r(t) == vt::sorted_oracle_at(oracle, t));
    }
    // Distribution functions agree with a direct cell scan at every level.
    for (double v : f.values())
      REQUIRE(distribution_function(r, v) == vt::distribution_oracle(f, v));
    StepFn rr = decreasing_rearrangement(r);
    REQUIRE(rr == r);
    double a = integrate(f);
    REQUIRE(std::abs(integrate(r) - a) <= 1e-12 * std::max(1.0, a));
  }
}

TEST_CASE("equimeasurability") {
  CHECK(equimeasurable(indicator(0.0, 0.5), indicator(0.5, 1.0), 0.0));
  CHECK_FALSE(equimeasurable(StepFn::constant(1.0), StepFn::constant(2.0), 0.0));
  CHECK_FALSE(equimeasurable(indicator(0.0, 0.5), indicator(0.0, 0.25), 0.0));
  CHECK(equimeasurable(indicator(0.0, 0.5), indicator(0.0, 0.5 + 1e-14), 1e-12));
  CHECK_THROWS_AS(equimeasurable(indicator(0.0, 0.5), indicator(0.0, 0.5), -1.0), DomainError);
}

TEST_CASE("transport map validation") {
  CHECK_NOTHROW(TransportMap({{0.0, 0.5, 0.5}, {0.5, 1.0, 0.0}}));
  CHECK_THROWS_AS(TransportMap({}), ValidationError);
  CHECK_THROWS_AS(TransportMap({{0.0, 0.4, 0.0}, {0.5, 1.0, 0.4}}), ValidationError);
  CHECK_THROWS_AS(TransportMap({{0.0, 0.5, 0.0}, {0.5, 1.0, 0.25}}), ValidationError);
  CHECK_THROWS_AS(TransportMap({{0.0, 1.0, 0.5}}), ValidationError);
}

TEST_CASE("sorting transport") {
  TransportMap id = sorting_transport(StepFn({0.0, 0.5, 1.0}, {2.0, 1.0}));
  for (double t : {0.0, 0.3, 0.5, 0.9})
    CHECK(id(t) == t);

  TransportMap swap = sorting_transport(indicator(0.5, 1.0));
  auto pieces = swap.pieces();
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0] == TransportPiece{0.0, 0.5, 0.5});
  CHECK(pieces[1] == TransportPiece{0.5, 1.0, 0.0});
  CHECK(swap(0.75) == 0.25);
  CHECK(swap(0.25) == 0.75);
}

TEST_CASE("transport reproduces f from f*") {
  vt::Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    StepFn f = vt::random_stepfn(rng);
    StepFn fs = decreasing_rearrangement(f);
    TransportMap omega = sorting_transport(f);
    double total = 0.0;
    for (const auto& p : omega.pieces())
      total += p.length();
    REQUIRE(std::abs(total - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < f.cells(); ++i) {
      double t = vt::interior_point(rng, f, i);
      REQUIRE(fs(omega(t)) == f(t));
    }
    for (int s = 0; s < 1000; ++s) {
      double t = vt::uniform(rng, 0.0, 1.0);
      if (distance_to_breakpoint(f, t) < 1e-12) continue;
      REQUIRE(fs(omega(t)) == f(t));
    }
  }
}

TEST_CASE("pull back") {
  StepFn p({0.0, 0.25, 1.0}, {3.0, 1.0});
  CHECK(pull_back(p, TransportMap::identity()) == p);

  vt::Rng rng(7);
  StepFn scrambled = vt::random_stepfn(rng);
  StepFn c = pull_back(StepFn::constant(2.5), sorting_transport(scrambled));
  for (double v : c.values())
    CHECK(v == 2.5);

  StepFn two({0.0, 0.5, 1.0}, {2.0, 1.0});
  StepFn swapped = pull_back(two, sorting_transport(indicator(0.5, 1.0)));
  CHECK(swapped(0.25) == 1.0);
  CHECK(swapped(0.75) == 2.0);

  for (int trial = 0; trial < 200; ++trial) {
    StepFn q = vt::random_stepfn(rng, 48, 1.0, 8.0);
    StepFn back = pull_back(decreasing_rearrangement(q), sorting_transport(q));
    for (int s = 0; s < 500; ++s) {
      double t = vt::uniform(rng, 0.0, 1.0);
      if (distance_to_breakpoint(q, t) < 1e-12) continue;
      REQUIRE(back(t) == q(t));
    }
  }
}
