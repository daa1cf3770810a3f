#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bft/linalg.hpp"
#include "bft/nondegeneracy.hpp"
#include "bft/tensor.hpp"

// Lie algebra of the stabilizer of A inside SL(V0) x ... x SL(Vp), computed
// exactly as the kernel of the linearized action, and the classification of
// the connected stabilizer into {Trivial, Additive, Torus, SL2}.

namespace bft {

struct StabGenerator {
  std::vector<RMatrix> X;  // one trace-zero matrix per slot
};

enum class StabClass { Trivial, Additive, Torus, SL2 };

inline std::string to_string(StabClass c) {
  switch (c) {
    case StabClass::Trivial: return "Trivial";
    case StabClass::Additive: return "Additive";
    case StabClass::Torus: return "Torus";
    case StabClass::SL2: return "SL2";
  }
  return "?";
}

// Signals a numeric verdict that is neither positive nor negative; callers
// map it to a dedicated exit code.
struct inconclusive_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Basis of sl(d): elementary matrices E_ab (a != b) followed by the
// diagonal differences E_tt - E_(t+1)(t+1).
inline std::vector<RMatrix> sl_basis(int d) {
  std::vector<RMatrix> basis;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == b) continue;
      RMatrix m(d, d);
      m(a, b) = 1;
      basis.push_back(m);
    }
  for (int t = 0; t + 1 < d; ++t) {
    RMatrix m(d, d);
    m(t, t) = 1;
    m(t + 1, t + 1) = -1;
    basis.push_back(m);
  }
  return basis;
}

// Derivative of the slot-wise action: sum_i X_i applied on slot i.
inline BoundaryTensor<Rational> lie_apply(const StabGenerator& x,
                                          const BoundaryTensor<Rational>& a) {
  BoundaryTensor<Rational> out(a.format);
  for (int slot = 0; slot < a.format.num_slots(); ++slot) {
    auto term = mode_multiply(x.X[slot], a, slot);
    for (size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += term.entries[i];
  }
  return out;
}

// Exact basis of {(X_0,...,X_p) in sl x ... x sl : sum_i X_i ._i A = 0}.
inline std::vector<StabGenerator> stab_algebra(const BoundaryTensor<Rational>& a) {
  if (a.is_zero()) throw precondition_error("stab_algebra: zero tensor");
  const Format& f = a.format;
  const int slots = f.num_slots();
  std::vector<std::vector<RMatrix>> bases(slots);
  std::vector<int> offset(slots + 1, 0);
  for (int i = 0; i < slots; ++i) {
    bases[i] = sl_basis(f.dim(i));
    offset[i + 1] = offset[i] + static_cast<int>(bases[i].size());
  }
  const int unknowns = offset[slots];
  const int rows = static_cast<int>(a.entries.size());
  RMatrix k(rows, unknowns);
  for (int i = 0; i < slots; ++i)
    for (size_t b = 0; b < bases[i].size(); ++b) {
      auto col = mode_multiply(bases[i][b], a, i);
      for (int r = 0; r < rows; ++r) k(r, offset[i] + static_cast<int>(b)) = col.entries[r];
    }
  std::vector<StabGenerator> gens;
  for (const auto& v : nullspace(k)) {
    StabGenerator g;
    for (int i = 0; i < slots; ++i) {
      RMatrix x(f.dim(i), f.dim(i));
      for (size_t b = 0; b < bases[i].size(); ++b) {
        const Rational& c = v[offset[i] + static_cast<int>(b)];
        if (c == 0) continue;
        x = x + bases[i][b] * c;
      }
      g.X.push_back(x);
    }
    if (!lie_apply(g, a).is_zero())
      throw verification_error("stab_algebra: kernel vector fails the defining equation");
    gens.push_back(std::move(g));
  }
  return gens;
}

// Stack a generator into one long coordinate vector (for span arithmetic).
inline RVector stack_generator(const StabGenerator& g) {
  RVector v;
  for (const auto& m : g.X)
    for (const auto& e : m.data()) v.push_back(e);
  return v;
}

inline StabGenerator bracket(const StabGenerator& a, const StabGenerator& b) {
  StabGenerator r;
  for (size_t i = 0; i < a.X.size(); ++i) r.X.push_back(bracket(a.X[i], b.X[i]));
  return r;
}

struct StabilizerReport {
  int dim = 0;
  StabClass cls = StabClass::Trivial;
  std::vector<StabGenerator> generators;

  // torus data
  std::vector<std::vector<Rational>> weights;  // per slot, ascending (rational case)
  Rational lambda_sq;                          // shared proportionality constant, squared
  bool lambda_rational = false;
  bool weight_progression_ok = false;

  // certificates
  std::vector<bool> semisimple_flags, nilpotent_flags;  // dim-1 generator, per slot
  bool bracket_closed = false;
  bool perfect = false;

  // provenance of the nondegeneracy precondition
  std::string nondegeneracy_status;
  bool nondegeneracy_warning = false;  // verdict was probabilistic, not exact

  // additive case: triangulating basis (best effort)
  bool triangular_basis_found = false;
  std::optional<GroupElement<Rational>> triangularizer;
};

enum class SupportKind { Triangular, Diagonal, Identity };

// Support predicate in the GIVEN basis: triangular a=0 for i0 > sum i_t,
// diagonal a=0 for i0 != sum i_t, identity additionally a=1 on the diagonal.
template <class S>
bool check_support(const BoundaryTensor<S>& a, SupportKind kind) {
  const auto dims = a.format.dims();
  std::vector<int> idx(dims.size(), 0);
  do {
    int sum = 0;
    for (size_t i = 1; i < idx.size(); ++i) sum += idx[i];
    const S& v = a.at(idx);
    switch (kind) {
      case SupportKind::Triangular:
        if (idx[0] > sum && !(v == S(0))) return false;
        break;
      case SupportKind::Diagonal:
        if (idx[0] != sum && !(v == S(0))) return false;
        break;
      case SupportKind::Identity:
        if (idx[0] != sum && !(v == S(0))) return false;
        if (idx[0] == sum && !(v == S(1))) return false;
        break;
    }
  } while (next_index(dims, idx));
  return true;
}

namespace detail {

// Model characteristic polynomial prod_m (x - lambda (k-2m)) as an exact
// polynomial in x given mu = lambda^2; the weight set is symmetric so only
// even powers of lambda occur.
inline RPoly model_weight_charpoly(int k, const Rational& mu) {
  RPoly p{Rational(1)};
  if (k % 2 == 0) p = RPoly{Rational(0), Rational(1)};  // weight 0 factor: x
  for (int w = k; w > 0; w -= 2) {
    // factor x^2 - mu w^2
    RPoly q{-mu * w * w, Rational(0), Rational(1)};
    p = poly_mul(p, q);
  }
  return p;
}

// Try to build the basis turning a principal nilpotent pair into the model
// raising operators; slot 0 uses X q_m = m q_(m-1), slots >= 1 use
// X c_(m-1) = -m c_m.
inline std::optional<RMatrix> nilpotent_chain_basis(const RMatrix& x, int slot) {
  const int d = x.rows();
  const int k = d - 1;
  // candidate cyclic vectors: coordinates, then a couple of fixed combos
  std::vector<RVector> candidates;
  for (int i = 0; i < d; ++i) {
    RVector e(d, Rational(0));
    e[i] = 1;
    candidates.push_back(e);
  }
  RVector ones(d, Rational(1));
  candidates.push_back(ones);
  RVector ramp(d);
  for (int i = 0; i < d; ++i) ramp[i] = i + 1;
  candidates.push_back(ramp);

  for (const auto& v : candidates) {
    RVector probe = v;
    for (int i = 0; i < k; ++i) probe = x * probe;
    if (is_zero(probe)) continue;  // not cyclic
    std::vector<RVector> cols(d);
    if (slot == 0) {
      cols[k] = v;
      for (int m = k; m >= 1; --m) cols[m - 1] = scaled(x * cols[m], Rational(1, m));
    } else {
      cols[0] = v;
      for (int m = 1; m <= k; ++m) cols[m] = scaled(x * cols[m - 1], Rational(-1, m));
    }
    RMatrix b(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) b(r, c) = cols[c][r];
    if (det(b) != 0) return b;
  }
  return std::nullopt;
}

}  // namespace detail

// Best-effort triangulating basis for the additive class: maps the
// generator to the model raising operators slot by slot; the result is
// verified by the triangular support predicate.
inline std::pair<bool, std::optional<GroupElement<Rational>>> triangulate_additive(
    const BoundaryTensor<Rational>& a, const StabGenerator& gen) {
  GroupElement<Rational> g;
  for (int i = 0; i < a.format.num_slots(); ++i) {
    const RMatrix& x = gen.X[i];
    // a principal nilpotent is required; otherwise give up
    RMatrix p = x;
    for (int e = 1; e < a.format.dim(i) - 1; ++e) p = p * x;
    if (p.is_zero()) return {false, std::nullopt};  // nilpotency index too small
    auto basis = detail::nilpotent_chain_basis(x, i);
    if (!basis) return {false, std::nullopt};
    auto inv = inverse(*basis);
    if (!inv) return {false, std::nullopt};
    g.g.push_back(*inv);
  }
  if (!check_support(act(g, a), SupportKind::Triangular)) return {false, std::nullopt};
  return {true, g};
}

// Classify the connected stabilizer. The nondegeneracy verdict is a
// precondition: exact degeneracy rejects the input, a probable verdict is
// accepted with a warning flag, an inconclusive one raises
// inconclusive_error.
inline StabilizerReport classify(const BoundaryTensor<Rational>& a,
                                 const NondegeneracyVerdict& verdict) {
  const Format& f = a.format;
  if (f.relaxed)
    throw precondition_error("classify: factors of dimension one are not classifiable");
  if (verdict.status == NondegStatus::DegenerateExact ||
      verdict.status == NondegStatus::DegenerateWitness)
    throw precondition_error("classify: input is degenerate");
  if (verdict.status == NondegStatus::Inconclusive)
    throw inconclusive_error("classify: nondegeneracy verdict inconclusive");

  StabilizerReport rep;
  rep.nondegeneracy_status = to_string(verdict.status);
  rep.nondegeneracy_warning = verdict.status == NondegStatus::NondegenerateProbable;
  rep.generators = stab_algebra(a);
  rep.dim = static_cast<int>(rep.generators.size());

  if (rep.dim == 0) {
    rep.cls = StabClass::Trivial;
    return rep;
  }

  if (rep.dim == 1) {
    const StabGenerator& x = rep.generators[0];
    bool all_nil = true, all_semi = true;
    for (const auto& m : x.X) {
      bool nil = is_nilpotent(m);
      bool semi = is_semisimple(m);
      rep.nilpotent_flags.push_back(nil);
      rep.semisimple_flags.push_back(semi);
      all_nil &= nil;
      all_semi &= semi;
    }
    if (all_nil) {
      rep.cls = StabClass::Additive;
      auto [found, tri] = triangulate_additive(a, x);
      rep.triangular_basis_found = found;
      rep.triangularizer = tri;
      return rep;
    }
    if (all_semi) {
      rep.cls = StabClass::Torus;
      // shared proportionality constant: lambda^2 = tr(X_i^2) / sum w^2
      bool ok = true;
      Rational mu;
      bool mu_set = false;
      for (int i = 0; i < f.num_slots(); ++i) {
        Rational wsum(0);
        for (int m = 0; m <= f.k[i]; ++m) wsum += Rational((f.k[i] - 2 * m)) * (f.k[i] - 2 * m);
        Rational tr2 = (x.X[i] * x.X[i]).trace();
        Rational mu_i = tr2 / wsum;
        if (!mu_set) { mu = mu_i; mu_set = true; }
        else if (mu_i != mu) ok = false;
      }
      if (mu == 0) ok = false;
      if (ok)
        for (int i = 0; i < f.num_slots(); ++i)
          if (charpoly(x.X[i]) != detail::model_weight_charpoly(f.k[i], mu)) ok = false;
      rep.lambda_sq = mu;
      rep.weight_progression_ok = ok;
      if (ok) {
        if (auto s = rational_sqrt(mu)) {
          rep.lambda_rational = true;
          for (int i = 0; i < f.num_slots(); ++i) {
            std::vector<Rational> ws;
            for (int w = -f.k[i]; w <= f.k[i]; w += 2) ws.push_back(*s * w);
            rep.weights.push_back(ws);
          }
        }
      }
      if (!ok)
        throw verification_error(
            "classify: torus generator weights are not a scaled progression -(k_j)..k_j "
            "(input likely degenerate or implementation bug)");
      return rep;
    }
    throw verification_error(
        "classify: mixed Jordan type in a 1-dimensional stabilizer (input likely degenerate "
        "or implementation bug)");
  }

  if (rep.dim == 3) {
    // bracket closure inside the kernel, then perfectness [L, L] = L
    std::vector<RVector> span;
    for (const auto& g : rep.generators) span.push_back(stack_generator(g));
    std::vector<RVector> brackets;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto br = bracket(rep.generators[i], rep.generators[j]);
        if (!coordinates_in_span(span, stack_generator(br)))
          throw verification_error("classify: 3-dimensional kernel is not bracket-closed");
        brackets.push_back(stack_generator(br));
      }
    rep.bracket_closed = true;
    RMatrix bm(static_cast<int>(brackets[0].size()), 3);
    for (int c = 0; c < 3; ++c)
      for (size_t r = 0; r < brackets[c].size(); ++r) bm(static_cast<int>(r), c) = brackets[c][r];
    rep.perfect = rank(bm) == 3;
    if (!rep.perfect)
      throw verification_error("classify: 3-dimensional stabilizer algebra is not perfect");
    rep.cls = StabClass::SL2;
    return rep;
  }

  throw verification_error("classify: stabilizer dimension " + std::to_string(rep.dim) +
                           " violates the {0,1,3} classification (input likely degenerate "
                           "or implementation bug)");
}

struct DiagonalizeResult {
  std::optional<GroupElement<Rational>> g;
  std::string note;
};

// For a torus-class tensor, sort per-slot eigenbases of the generator by
// weight (slot 0 descending, others ascending); the result carries A to
// diagonal support. Requires the proportionality constant to be rational.
inline DiagonalizeResult diagonalize_torus(const BoundaryTensor<Rational>& a,
                                           const StabilizerReport& rep) {
  if (rep.cls != StabClass::Torus)
    throw precondition_error("diagonalize_torus: torus class required");
  DiagonalizeResult res;
  if (!rep.lambda_rational) {
    res.note = "torus weights are irrational; no rational eigenbasis exists";
    return res;
  }
  auto s = rational_sqrt(rep.lambda_sq);
  const StabGenerator& x = rep.generators[0];
  const Format& f = a.format;
  GroupElement<Rational> g;
  for (int i = 0; i < f.num_slots(); ++i) {
    const int d = f.dim(i);
    std::vector<Rational> eigs;
    for (int m = 0; m <= f.k[i]; ++m) eigs.push_back(*s * (f.k[i] - 2 * m));
    if (i > 0) std::reverse(eigs.begin(), eigs.end());  // ascending on the factors
    RMatrix p(d, d);
    for (int c = 0; c < d; ++c) {
      RMatrix shifted = x.X[i];
      for (int r = 0; r < d; ++r) shifted(r, r) -= eigs[c];
      auto ns = nullspace(shifted);
      if (ns.size() != 1)
        throw verification_error("diagonalize_torus: eigenspace is not one-dimensional");
      for (int r = 0; r < d; ++r) p(r, c) = ns[0][r];
    }
    auto inv = inverse(p);
    if (!inv) throw verification_error("diagonalize_torus: eigenbasis is singular");
    g.g.push_back(*inv);
  }
  if (!check_support(act(g, a), SupportKind::Diagonal))
    throw verification_error(
        "diagonalize_torus: verified diagonalization failed; this contradicts the torus "
        "equivalence and flags a bug");
  res.g = g;
  return res;
}

}  // namespace bft
