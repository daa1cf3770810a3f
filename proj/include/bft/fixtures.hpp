#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bft/identity.hpp"
#include "bft/nondegeneracy.hpp"
#include "bft/sl2.hpp"
#include "bft/stabilizer.hpp"

// Deterministic fixture generators for every tensor class used in tests:
// identity, Vandermonde, generic diagonal, nilpotent-invariant, random, and
// degenerate-at-a-chosen-point. Every expectation a fixture carries is
// labeled with how it was obtained and is re-derived by the analysis
// modules in the test suites; nothing is asserted unverified.

namespace bft {

enum class FixtureKind { Identity, Vandermonde, Diagonal, Nilpotent, Random, DegenerateAtPoint };

inline std::string to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::Identity: return "identity";
    case FixtureKind::Vandermonde: return "vandermonde";
    case FixtureKind::Diagonal: return "diagonal";
    case FixtureKind::Nilpotent: return "nilpotent";
    case FixtureKind::Random: return "random";
    case FixtureKind::DegenerateAtPoint: return "degenerate_at_point";
  }
  return "?";
}

inline std::optional<FixtureKind> fixture_kind_from_string(const std::string& s) {
  for (auto k : {FixtureKind::Identity, FixtureKind::Vandermonde, FixtureKind::Diagonal,
                 FixtureKind::Nilpotent, FixtureKind::Random, FixtureKind::DegenerateAtPoint})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct FixtureSpec {
  FixtureKind kind = FixtureKind::Random;
  Format format;
  std::uint64_t seed = 12345;
  std::vector<Rational> nodes;     // Vandermonde: k0+1 distinct nodes
  std::vector<Rational> diagonal;  // Diagonal: entries over the support cells, row-major
  std::optional<FiberPoint<Rational>> point;  // DegenerateAtPoint
  int budget = 40;                 // Nilpotent: candidate draws before giving up
};

struct FixtureExpectation {
  std::optional<StabClass> cls;
  std::string cls_basis;  // "constructed-invariance" or "generic-expectation"
  std::optional<bool> nondegenerate;
  std::string nondegenerate_basis;
};

struct Fixture {
  BoundaryTensor<Rational> tensor;
  FixtureExpectation expected;
  std::optional<FiberPoint<Rational>> witness_point;  // degenerate kind
  bool infeasible = false;
  std::string note;
};

namespace detail {

inline std::vector<std::vector<int>> support_cells(const Format& f) {
  std::vector<std::vector<int>> cells;
  const auto dims = f.dims();
  std::vector<int> idx(dims.size(), 0);
  do {
    int sum = 0;
    for (size_t i = 1; i < idx.size(); ++i) sum += idx[i];
    if (idx[0] == sum) cells.push_back(idx);
  } while (next_index(dims, idx));
  return cells;
}

}  // namespace detail

inline Fixture generate(const FixtureSpec& spec) {
  const Format& f = spec.format;
  Fixture out;
  std::mt19937_64 rng(spec.seed);

  switch (spec.kind) {
    case FixtureKind::Identity: {
      out.tensor = build_identity<Rational>(f);
      out.expected.cls = StabClass::SL2;
      out.expected.cls_basis = "constructed-invariance";
      out.expected.nondegenerate = true;
      out.expected.nondegenerate_basis = "constructed-invariance";
      return out;
    }
    case FixtureKind::Vandermonde: {
      std::vector<Rational> nodes = spec.nodes;
      if (nodes.empty())
        for (int s = 0; s <= f.k[0]; ++s) nodes.push_back(s);
      out.tensor = make_vandermonde(f, NodeFamily<Rational>(nodes));
      out.expected.cls = StabClass::SL2;
      out.expected.cls_basis = "constructed-invariance";
      out.expected.nondegenerate = true;
      out.expected.nondegenerate_basis = "constructed-invariance";
      return out;
    }
    case FixtureKind::Diagonal: {
      auto cells = detail::support_cells(f);
      std::vector<Rational> entries = spec.diagonal;
      if (entries.empty())
        for (size_t i = 0; i < cells.size(); ++i) entries.push_back(static_cast<int>(i) + 1);
      if (entries.size() != cells.size())
        throw precondition_error("diagonal fixture: need one entry per support cell (" +
                                 std::to_string(cells.size()) + ")");
      out.tensor = BoundaryTensor<Rational>(f);
      for (size_t i = 0; i < cells.size(); ++i) {
        if (entries[i] == 0)
          throw precondition_error("diagonal fixture: zero entry on the support");
        out.tensor.at(cells[i]) = entries[i];
      }
      out.expected.cls = StabClass::Torus;
      out.expected.cls_basis = "generic-expectation";
      out.expected.nondegenerate = true;
      out.expected.nondegenerate_basis = "generic-expectation";
      return out;
    }
    case FixtureKind::Random: {
      std::uniform_int_distribution<int> d(-9, 9);
      out.tensor = BoundaryTensor<Rational>(f);
      do {
        for (auto& e : out.tensor.entries) e = d(rng);
      } while (out.tensor.is_zero());
      // 2 x k x (k+1) formats have a single nondegenerate orbit
      if (f.p() == 2 && std::min(f.k[1], f.k[2]) == 1) {
        out.expected.cls = StabClass::SL2;
        out.expected.cls_basis = "generic-expectation";
      }
      out.expected.nondegenerate = true;
      out.expected.nondegenerate_basis = "generic-expectation";
      return out;
    }
    case FixtureKind::Nilpotent: {
      // kernel of the linearized action of the model raising operators
      auto xs = embed_derived(sl2_e(), f);
      StabGenerator x;
      for (auto& m : xs) x.X.push_back(m);
      const int n = static_cast<int>(f.entry_count());
      RMatrix lin(n, n);
      for (int col = 0; col < n; ++col) {
        BoundaryTensor<Rational> basis(f);
        basis.entries[col] = 1;
        auto img = lie_apply(x, basis);
        for (int r = 0; r < n; ++r) lin(r, col) = img.entries[r];
      }
      auto kernel = nullspace(lin);
      std::uniform_int_distribution<int> d(-4, 4);
      for (int attempt = 0; attempt < spec.budget; ++attempt) {
        BoundaryTensor<Rational> cand(f);
        for (const auto& v : kernel) {
          int c = d(rng);
          if (c == 0) continue;
          for (int i = 0; i < n; ++i) cand.entries[i] += Rational(c) * v[i];
        }
        if (cand.is_zero()) continue;
        if (!lie_apply(x, cand).is_zero())
          throw verification_error("nilpotent fixture: kernel combination not invariant");
        NondegOptions nopt;
        nopt.seed = spec.seed + attempt;
        auto verdict = nondegenerate(cand, nopt);
        if (!verdict.nondegenerate_ish()) continue;
        auto gens = stab_algebra(cand);
        if (gens.size() != 1) continue;
        bool nil = true;
        for (const auto& m : gens[0].X) nil &= is_nilpotent(m);
        if (!nil) continue;
        out.tensor = cand;
        out.expected.cls = StabClass::Additive;
        out.expected.cls_basis = "constructed-invariance";
        out.expected.nondegenerate = true;
        out.expected.nondegenerate_basis =
            verdict.exact ? "verified-exact" : "verified-numeric";
        return out;
      }
      out.infeasible = true;
      out.note = "nilpotent fixture search exhausted its budget of " +
                 std::to_string(spec.budget) + " draws on format " + f.to_string();
      return out;
    }
    case FixtureKind::DegenerateAtPoint: {
      FiberPoint<Rational> pt;
      if (spec.point) {
        pt = *spec.point;
      } else {
        pt.j = 1;
        pt.x.resize(f.num_slots());
        for (int i = 1; i < f.num_slots(); ++i) {
          if (i == pt.j) continue;
          RVector v(f.dim(i));
          for (int l = 0; l < f.dim(i); ++l) v[l] = l + 1;
          pt.x[i] = v;
        }
      }
      pt.validate(f);
      // linear conditions: every entry of the fiber map at pt vanishes
      const int n = static_cast<int>(f.entry_count());
      const int rows = f.dim(pt.j) * f.dim(0);
      RMatrix cond(rows, n);
      const auto dims = f.dims();
      std::vector<int> idx(dims.size(), 0);
      int col = 0;
      do {
        Rational w(1);
        for (size_t i = 1; i < dims.size(); ++i) {
          if (static_cast<int>(i) == pt.j) continue;
          w *= pt.x[i][idx[i]];
        }
        cond(idx[pt.j] * f.dim(0) + idx[0], col) += w;
        ++col;
      } while (next_index(dims, idx));
      auto kernel = nullspace(cond);
      if (kernel.empty())
        throw verification_error("degenerate fixture: no tensors vanish at the point");
      std::uniform_int_distribution<int> d(-9, 9);
      BoundaryTensor<Rational> cand(f);
      do {
        BoundaryTensor<Rational> acc(f);
        for (const auto& v : kernel) {
          int c = d(rng);
          if (c == 0) continue;
          for (int i = 0; i < n; ++i) acc.entries[i] += Rational(c) * v[i];
        }
        cand = acc;
      } while (cand.is_zero());
      if (!fiber_map(cand, pt).is_zero())
        throw verification_error("degenerate fixture: fiber map does not vanish at the point");
      out.tensor = cand;
      out.witness_point = pt;
      out.expected.nondegenerate = false;
      out.expected.nondegenerate_basis = "constructed-invariance";
      return out;
    }
  }
  throw precondition_error("unknown fixture kind");
}

}  // namespace bft
