#include <catch_amalgamated.hpp>

#include "bft/fixtures.hpp"

using namespace bft;

TEST_CASE("fixtures are deterministic given the seed") {
  for (auto kind : {FixtureKind::Random, FixtureKind::Diagonal, FixtureKind::Nilpotent,
                    FixtureKind::DegenerateAtPoint}) {
    FixtureSpec spec{kind, Format({2, 1, 1}), 99};
    if (kind == FixtureKind::Nilpotent) spec.format = Format({4, 2, 2});
    auto a = generate(spec);
    auto b = generate(spec);
    REQUIRE(a.tensor == b.tensor);
    REQUIRE(a.infeasible == b.infeasible);
  }
}

TEST_CASE("identity fixture carries its support expectation") {
  auto fx = generate({FixtureKind::Identity, Format({4, 2, 2}), 1});
  REQUIRE(fx.expected.cls == StabClass::SL2);
  Rational total(0);
  for (const auto& e : fx.tensor.entries) total += e;
  REQUIRE(total == 9);  // nine support cells
  REQUIRE(check_support(fx.tensor, SupportKind::Identity));
}

TEST_CASE("random fixture entries stay in [-9, 9]") {
  auto fx = generate({FixtureKind::Random, Format({3, 1, 2}), 7});
  for (const auto& e : fx.tensor.entries) {
    REQUIRE(e >= -9);
    REQUIRE(e <= 9);
    REQUIRE(denominator(e) == 1);
  }
  REQUIRE(fx.expected.cls == StabClass::SL2);  // 2 x 3 x 4 single-orbit expectation
  REQUIRE(fx.expected.cls_basis == "generic-expectation");
}

TEST_CASE("diagonal fixture rejects mismatched entry lists") {
  FixtureSpec spec{FixtureKind::Diagonal, Format({4, 2, 2}), 1};
  spec.diagonal = {Rational(1), Rational(2)};
  REQUIRE_THROWS_AS(generate(spec), precondition_error);
}

TEST_CASE("degenerate fixture has a vanishing fiber at its witness point") {
  FixtureSpec spec{FixtureKind::DegenerateAtPoint, Format({2, 1, 1}), 21};
  FiberPoint<Rational> pt;
  pt.j = 1;
  pt.x.resize(3);
  pt.x[2] = {Rational(1), Rational(0)};
  spec.point = pt;
  auto fx = generate(spec);
  REQUIRE(fx.witness_point.has_value());
  REQUIRE(fiber_map(fx.tensor, *fx.witness_point).is_zero());
  REQUIRE(hyperdet_p2(fx.tensor) == 0);
}

TEST_CASE("nilpotent fixture construction is invariant by construction") {
  auto fx = generate({FixtureKind::Nilpotent, Format({4, 2, 2}), 3});
  if (fx.infeasible) {
    WARN("nilpotent fixture infeasible: " << fx.note);
    return;
  }
  StabGenerator x;
  for (auto& m : embed_derived(sl2_e(), fx.tensor.format)) x.X.push_back(m);
  REQUIRE(lie_apply(x, fx.tensor).is_zero());
  REQUIRE(hyperdet_p2(fx.tensor) != 0);
  auto gens = stab_algebra(fx.tensor);
  REQUIRE(gens.size() == 1);
}
