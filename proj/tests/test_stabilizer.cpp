#include <catch_amalgamated.hpp>
#include <random>

#include "bft/canonicalize.hpp"
#include "bft/fixtures.hpp"
#include "bft/identity.hpp"
#include "bft/sl2.hpp"
#include "bft/stabilizer.hpp"

using namespace bft;

namespace {

NondegeneracyVerdict verdict_for(const BoundaryTensor<Rational>& a, int restarts = 32) {
  NondegOptions opt;
  opt.restarts = restarts;
  return nondegenerate(a, opt);
}

}  // namespace

TEST_CASE("identity stabilizer algebra is the embedded sl(2)") {
  for (auto ks : {std::vector<int>{2, 1, 1}, {3, 1, 2}, {3, 1, 1, 1}}) {
    Format f(ks);
    auto I = build_identity<Rational>(f);
    auto gens = stab_algebra(I);
    REQUIRE(gens.size() == 3);
    // the embedded model triple lies in the kernel span
    std::vector<RVector> span;
    for (const auto& g : gens) span.push_back(stack_generator(g));
    for (const auto& x : {sl2_h(), sl2_e(), sl2_f()}) {
      StabGenerator mg;
      for (auto& m : embed_derived(x, f)) mg.X.push_back(m);
      REQUIRE(lie_apply(mg, I).is_zero());
      REQUIRE(coordinates_in_span(span, stack_generator(mg)).has_value());
    }
  }
}

TEST_CASE("generic (4;2,2) tensors have trivial stabilizer") {
  auto fx = generate({FixtureKind::Random, Format({4, 2, 2}), 123});
  REQUIRE(stab_algebra(fx.tensor).empty());
}

TEST_CASE("diagonal tensors contain the explicit weight torus") {
  auto fx = generate({FixtureKind::Diagonal, Format({4, 2, 2}), 1});
  StabGenerator torus;
  for (auto& m : embed_derived(sl2_h(), fx.tensor.format)) torus.X.push_back(m);
  REQUIRE(lie_apply(torus, fx.tensor).is_zero());
  auto gens = stab_algebra(fx.tensor);
  REQUIRE(gens.size() >= 1);
}

TEST_CASE("classify: identity tensors are SL2") {
  SECTION("(2;1,1), exact nondegeneracy") {
    auto I = build_identity<Rational>(Format({2, 1, 1}));
    auto rep = classify(I, verdict_for(I));
    REQUIRE(rep.cls == StabClass::SL2);
    REQUIRE(rep.dim == 3);
    REQUIRE(rep.bracket_closed);
    REQUIRE(rep.perfect);
    REQUIRE(!rep.nondegeneracy_warning);
  }
  SECTION("(3;1,1,1), numeric nondegeneracy carries a warning") {
    auto I = build_identity<Rational>(Format({3, 1, 1, 1}));
    NondegOptions opt;
    opt.restarts = 24;
    auto rep = classify(I, nondegenerate(I, opt));
    REQUIRE(rep.cls == StabClass::SL2);
    REQUIRE(rep.nondegeneracy_warning);
  }
}

TEST_CASE("classify: generic diagonal is a torus with the progression weights") {
  auto fx = generate({FixtureKind::Diagonal, Format({4, 2, 2}), 1});
  auto rep = classify(fx.tensor, verdict_for(fx.tensor));
  REQUIRE(rep.cls == StabClass::Torus);
  REQUIRE(rep.dim == 1);
  REQUIRE(rep.weight_progression_ok);
  REQUIRE(rep.lambda_rational);
  // per-factor weights proportional to (-k_j, -k_j+2, ..., k_j)
  auto s = rational_sqrt(rep.lambda_sq);
  REQUIRE(s.has_value());
  for (int slot = 0; slot < 3; ++slot) {
    int k = fx.tensor.format.k[slot];
    REQUIRE(rep.weights[slot].size() == static_cast<size_t>(k + 1));
    int i = 0;
    for (int w = -k; w <= k; w += 2) REQUIRE(rep.weights[slot][i++] == *s * w);
  }
}

TEST_CASE("classify: trivial class") {
  auto fx = generate({FixtureKind::Random, Format({4, 2, 2}), 123});
  auto rep = classify(fx.tensor, verdict_for(fx.tensor));
  REQUIRE(rep.cls == StabClass::Trivial);
  REQUIRE(rep.dim == 0);
}

TEST_CASE("classify: nilpotent-invariant fixture is additive") {
  auto fx = generate({FixtureKind::Nilpotent, Format({4, 2, 2}), 7});
  if (fx.infeasible) {
    WARN("nilpotent fixture infeasible: " << fx.note);
    return;
  }
  auto rep = classify(fx.tensor, verdict_for(fx.tensor));
  REQUIRE(rep.cls == StabClass::Additive);
  REQUIRE(rep.dim == 1);
  for (bool nil : rep.nilpotent_flags) REQUIRE(nil);
  // the triangulating basis is best-effort but expected to work here
  REQUIRE(rep.triangular_basis_found);
  REQUIRE(check_support(act(*rep.triangularizer, fx.tensor), SupportKind::Triangular));
}

TEST_CASE("classify rejects degenerate and relaxed inputs") {
  auto dfx = generate({FixtureKind::DegenerateAtPoint, Format({2, 1, 1}), 5});
  REQUIRE_THROWS_AS(classify(dfx.tensor, verdict_for(dfx.tensor)), precondition_error);
}

TEST_CASE("check_support") {
  auto I = build_identity<Rational>(Format({3, 1, 2}));
  REQUIRE(check_support(I, SupportKind::Identity));
  REQUIRE(check_support(I, SupportKind::Diagonal));
  REQUIRE(check_support(I, SupportKind::Triangular));

  auto dfx = generate({FixtureKind::Diagonal, Format({4, 2, 2}), 1});
  REQUIRE(check_support(dfx.tensor, SupportKind::Diagonal));
  REQUIRE(!check_support(dfx.tensor, SupportKind::Identity));

  std::mt19937_64 rng(8);
  auto g = random_group_element(I.format, rng);
  auto moved = act(g, I);
  // a generic basis destroys the special supports
  REQUIRE(!check_support(moved, SupportKind::Identity));
  REQUIRE(!check_support(moved, SupportKind::Diagonal));
}

TEST_CASE("stabilizer dimension and generators are equivariant") {
  std::mt19937_64 rng(31);
  auto fx = generate({FixtureKind::Diagonal, Format({3, 1, 2}), 2});
  auto gens = stab_algebra(fx.tensor);
  auto g = random_group_element(fx.tensor.format, rng);
  auto moved = act(g, fx.tensor);
  auto gens2 = stab_algebra(moved);
  REQUIRE(gens.size() == gens2.size());
  // conjugated generators annihilate the moved tensor and span its kernel
  std::vector<RVector> span2;
  for (const auto& x : gens2) span2.push_back(stack_generator(x));
  for (const auto& x : gens) {
    StabGenerator conj;
    for (size_t i = 0; i < x.X.size(); ++i) {
      auto inv = inverse(g.g[i]);
      REQUIRE(inv.has_value());
      conj.X.push_back(g.g[i] * x.X[i] * *inv);
    }
    REQUIRE(lie_apply(conj, moved).is_zero());
    REQUIRE(coordinates_in_span(span2, stack_generator(conj)).has_value());
  }
}

TEST_CASE("diagonalize_torus") {
  SECTION("already diagonal: support check passes") {
    auto fx = generate({FixtureKind::Diagonal, Format({4, 2, 2}), 1});
    auto rep = classify(fx.tensor, verdict_for(fx.tensor));
    auto res = diagonalize_torus(fx.tensor, rep);
    REQUIRE(res.g.has_value());
    REQUIRE(check_support(act(*res.g, fx.tensor), SupportKind::Diagonal));
  }
  SECTION("conjugated diagonal fixture is diagonalized exactly") {
    auto fx = generate({FixtureKind::Diagonal, Format({4, 1, 1, 2}), 3});
    std::mt19937_64 rng(17);
    auto h = random_group_element(fx.tensor.format, rng);
    auto moved = act(h, fx.tensor);
    auto rep = classify(moved, verdict_for(moved));
    REQUIRE(rep.cls == StabClass::Torus);
    auto res = diagonalize_torus(moved, rep);
    REQUIRE(res.g.has_value());
    REQUIRE(check_support(act(*res.g, moved), SupportKind::Diagonal));
  }
  SECTION("additive input is rejected") {
    auto fx = generate({FixtureKind::Nilpotent, Format({4, 2, 2}), 7});
    if (fx.infeasible) return;
    auto rep = classify(fx.tensor, verdict_for(fx.tensor));
    REQUIRE_THROWS_AS(diagonalize_torus(fx.tensor, rep), precondition_error);
  }
}

TEST_CASE("canonicalize_identity") {
  SECTION("the identity itself") {
    auto I = build_identity<Rational>(Format({2, 1, 1}));
    auto res = canonicalize_identity(I);
    REQUIRE(res.ok);
    REQUIRE(res.exact);
    REQUIRE(act(*res.g_exact, I) == I);
  }
  SECTION("vandermonde fixture maps back to the identity") {
    Format f({2, 1, 1});
    auto A = make_vandermonde(f, NodeFamily<Rational>({Rational(0), Rational(1), Rational(2)}));
    auto res = canonicalize_identity(A);
    REQUIRE(res.ok);
    if (res.exact)
      REQUIRE(act(*res.g_exact, A) == build_identity<Rational>(f));
  }
  SECTION("random unimodular conjugates of the identity") {
    for (auto ks : {std::vector<int>{2, 1, 1}, {3, 1, 2}}) {
      Format f(ks);
      auto I = build_identity<Rational>(f);
      std::mt19937_64 rng(19);
      for (int t = 0; t < 3; ++t) {
        auto g = random_group_element(f, rng);
        auto A = act(g, I);
        auto res = canonicalize_identity(A);
        REQUIRE(res.ok);
        if (res.exact) {
          REQUIRE(act(*res.g_exact, A) == I);
        } else {
          auto Ac = to_complex_tensor(A);
          auto J = act(*res.g_float, Ac);
          double err = 0, ref = 0;
          auto Ic = to_complex_tensor(I);
          for (size_t i = 0; i < J.entries.size(); ++i) {
            err += std::norm(J.entries[i] - Ic.entries[i]);
            ref += std::norm(Ic.entries[i]);
          }
          REQUIRE(std::sqrt(err / ref) < 1e-8);
        }
      }
    }
  }
  SECTION("non-SL2 inputs are rejected") {
    auto fx = generate({FixtureKind::Diagonal, Format({4, 2, 2}), 1});
    REQUIRE_THROWS_AS(canonicalize_identity(fx.tensor), precondition_error);
  }
}
