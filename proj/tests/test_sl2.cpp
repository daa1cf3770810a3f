#include <catch_amalgamated.hpp>
#include <random>

#include "bft/identity.hpp"
#include "bft/sl2.hpp"

using namespace bft;

TEST_CASE("sym_power_rep degree 1 is the matrix itself") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    RMatrix g = random_sl2(rng);
    REQUIRE(sym_power_rep(g, 1) == g);
  }
}

TEST_CASE("sym_power_rep of a shear in degree 2") {
  RMatrix g(2, 2, {Rational(1), Rational(1), Rational(0), Rational(1)});
  RMatrix expect(3, 3, {Rational(1), Rational(1), Rational(1),
                        Rational(0), Rational(1), Rational(2),
                        Rational(0), Rational(0), Rational(1)});
  REQUIRE(sym_power_rep(g, 2) == expect);
}

TEST_CASE("sym_power_rep of a torus element in degree 2") {
  Rational t(3);
  RMatrix g(2, 2, {t, Rational(0), Rational(0), Rational(1) / t});
  RMatrix r = sym_power_rep(g, 2);
  REQUIRE(r(0, 0) == t * t);
  REQUIRE(r(1, 1) == 1);
  REQUIRE(r(2, 2) == Rational(1) / (t * t));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) REQUIRE(r(i, j) == 0);
}

TEST_CASE("sym_power_rep is multiplicative with determinant (det g)^(k(k+1)/2)") {
  std::mt19937_64 rng(17);
  for (int k = 1; k <= 4; ++k)
    for (int trial = 0; trial < 5; ++trial) {
      RMatrix g = random_sl2(rng), h = random_sl2(rng);
      REQUIRE(sym_power_rep(g, k) * sym_power_rep(h, k) == sym_power_rep(g * h, k));
      REQUIRE(det(sym_power_rep(g, k)) == 1);  // (det g)^{k(k+1)/2} with det g = 1
    }
  // non-unimodular case for the determinant law
  RMatrix g(2, 2, {Rational(2), Rational(1), Rational(0), Rational(3)});
  REQUIRE(det(sym_power_rep(g, 2)) == Rational(6 * 6 * 6));
}

TEST_CASE("sym_power_derived matches the model triple") {
  int k = 3;
  RMatrix dh = sym_power_derived(sl2_h(), k);
  RMatrix de = sym_power_derived(sl2_e(), k);
  RMatrix df = sym_power_derived(sl2_f(), k);
  for (int m = 0; m <= k; ++m) REQUIRE(dh(m, m) == k - 2 * m);
  for (int m = 1; m <= k; ++m) REQUIRE(de(m - 1, m) == m);
  for (int m = 0; m < k; ++m) REQUIRE(df(m + 1, m) == k - m);
  // commutation relations
  REQUIRE(bracket(dh, de) == de * Rational(2));
  REQUIRE(bracket(dh, df) == df * Rational(-2));
  REQUIRE(bracket(de, df) == dh);
}

TEST_CASE("build_identity support") {
  SECTION("(2;1,1)") {
    auto I = build_identity(Format({2, 1, 1}));
    std::vector<std::vector<int>> ones = {{0, 0, 0}, {1, 0, 1}, {1, 1, 0}, {2, 1, 1}};
    int count = 0;
    std::vector<int> idx(3, 0);
    do {
      bool expect_one = false;
      for (auto& o : ones) expect_one |= (o == idx);
      REQUIRE(I.at(idx) == (expect_one ? 1 : 0));
      if (expect_one) ++count;
    } while (next_index(I.format.dims(), idx));
    REQUIRE(count == 4);
  }
  SECTION("(3;1,2)") {
    auto I = build_identity(Format({3, 1, 2}));
    std::vector<std::vector<int>> ones = {{0, 0, 0}, {1, 0, 1}, {1, 1, 0},
                                          {2, 0, 2}, {2, 1, 1}, {3, 1, 2}};
    Rational total(0);
    for (const auto& e : I.entries) total += e;
    REQUIRE(total == 6);
    for (auto& o : ones) REQUIRE(I.at(o) == 1);
  }
  SECTION("p=1 rejected") {
    REQUIRE_THROWS_AS(Format({2, 2}), precondition_error);
  }
}

TEST_CASE("embed fixes the identity exactly") {
  std::mt19937_64 rng(23);
  for (const auto& ks : {std::vector<int>{2, 1, 1}, {3, 1, 2}, {3, 1, 1, 1}, {4, 2, 2}}) {
    Format f(ks);
    auto I = build_identity(f);
    SECTION("format " + f.to_string()) {
      for (int trial = 0; trial < 8; ++trial) {
        RMatrix g = random_sl2(rng);
        auto sigma = embed(g, f);
        REQUIRE(act(sigma, I) == I);
      }
      // the spec'd shear and torus elements on (2;1,1)
      RMatrix shear(2, 2, {Rational(1), Rational(1), Rational(0), Rational(1)});
      REQUIRE(act(embed(shear, f), I) == I);
      RMatrix torus(2, 2, {Rational(2), Rational(0), Rational(0), Rational(1, 2)});
      REQUIRE(act(embed(torus, f), I) == I);
    }
  }
}

TEST_CASE("embed is a homomorphism") {
  Format f({3, 1, 2});
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    RMatrix g = random_sl2(rng), h = random_sl2(rng);
    auto lhs = embed(g * h, f);
    auto rhs = compose(embed(g, f), embed(h, f));
    for (size_t i = 0; i < lhs.g.size(); ++i) REQUIRE(lhs.g[i] == rhs.g[i]);
  }
}

TEST_CASE("embed demands determinant one") {
  RMatrix g(2, 2, {Rational(2), Rational(0), Rational(0), Rational(1)});
  REQUIRE_THROWS_AS(embed(g, Format({2, 1, 1})), precondition_error);
}

TEST_CASE("embed components are unimodular") {
  std::mt19937_64 rng(31);
  Format f({4, 1, 1, 2});
  RMatrix g = random_sl2(rng);
  auto sigma = embed(g, f);
  for (const auto& comp : sigma.g) REQUIRE(det(comp) == 1);
}

TEST_CASE("make_vandermonde") {
  Format f({2, 1, 1});
  NodeFamily<Rational> nodes({Rational(0), Rational(1), Rational(2)});
  auto A = make_vandermonde(f, nodes);

  SECTION("slice s=2 is (1,2) (x) (1,2)") {
    REQUIRE(A.at({2, 0, 0}) == 1);
    REQUIRE(A.at({2, 0, 1}) == 2);
    REQUIRE(A.at({2, 1, 0}) == 2);
    REQUIRE(A.at({2, 1, 1}) == 4);
  }
  SECTION("repeated nodes rejected") {
    REQUIRE_THROWS_AS(NodeFamily<Rational>({Rational(0), Rational(1), Rational(1)}),
                      precondition_error);
  }
  SECTION("every coordinate dual has an exactly decomposable slice") {
    for (int s = 0; s < 3; ++s) {
      RVector xi(3, Rational(0));
      xi[s] = 1;
      auto slice = contract0(A, xi);
      REQUIRE(decomposable_exact(slice));
      REQUIRE(residual_rank_one(slice) == 0.0);
    }
  }
  SECTION("equals the identity pushed through the Vandermonde matrix") {
    auto I = build_identity<Rational>(f);
    auto w = vandermonde_group_element(f, nodes);
    REQUIRE(act(w, I) == A);
  }
  SECTION("same equality on (3;1,2)") {
    Format f2({3, 1, 2});
    NodeFamily<Rational> n2({Rational(0), Rational(1), Rational(2), Rational(-1)});
    auto A2 = make_vandermonde(f2, n2);
    auto I2 = build_identity<Rational>(f2);
    REQUIRE(act(vandermonde_group_element(f2, n2), I2) == A2);
  }
}
