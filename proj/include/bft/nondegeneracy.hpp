#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bft/linalg.hpp"
#include "bft/numeric.hpp"
#include "bft/tensor.hpp"

// Nondegeneracy: Det A != 0. For p = 2 over the rationals this is decided
// exactly by the determinant of a square multiplication map; for p >= 3 a
// seeded multi-start descent searches for points where the fiber map drops
// rank. Degeneracy witnesses are certified exactly whenever the input is
// rational; nondegeneracy from the numeric path is only "probable".

namespace bft {

// Evaluation point for the fiber map with slot j omitted: one nonzero
// vector per slot i not in {0, j}.
template <class S>
struct FiberPoint {
  int j = 1;
  std::vector<Vector<S>> x;  // indexed by slot; x[0] and x[j] unused

  void validate(const Format& f) const {
    if (j < 1 || j > f.p()) throw precondition_error("fiber point: slot out of range");
    if (static_cast<int>(x.size()) != f.num_slots())
      throw precondition_error("fiber point: wrong slot count");
    for (int i = 1; i < f.num_slots(); ++i) {
      if (i == j) continue;
      if (static_cast<int>(x[i].size()) != f.dim(i))
        throw precondition_error("fiber point: vector size mismatch on slot " + std::to_string(i));
      if (is_zero(x[i])) throw precondition_error("fiber point: zero vector on slot " + std::to_string(i));
    }
  }
};

template <class S>
FiberPoint<Complex> to_complex_point(const FiberPoint<S>& p) {
  FiberPoint<Complex> q;
  q.j = p.j;
  q.x.resize(p.x.size());
  for (size_t i = 0; i < p.x.size(); ++i)
    for (const auto& v : p.x[i]) q.x[i].push_back(to_complex(v));
  return q;
}

// Matrix of the morphism V0^dual -> V_j at the point x: entry (i_j, i0) is
// the contraction of a_{i0 . i_j .} with the x_i coordinates on the
// remaining slots.
template <class S>
Matrix<S> fiber_map(const BoundaryTensor<S>& a, const FiberPoint<S>& pt) {
  pt.validate(a.format);
  const auto dims = a.format.dims();
  Matrix<S> m(dims[pt.j], dims[0]);
  std::vector<int> idx(dims.size(), 0);
  size_t flat = 0;
  do {
    const S& v = a.entries[flat++];
    if (v == S(0)) continue;
    S w = v;
    for (size_t i = 1; i < dims.size(); ++i) {
      if (static_cast<int>(i) == pt.j) continue;
      w *= pt.x[i][idx[i]];
    }
    m(idx[pt.j], idx[0]) += w;
  } while (next_index(dims, idx));
  return m;
}

// --- exact p = 2 determinant ----------------------------------------------

// Exponent tuples of total degree `deg` in `vars` variables, lexicographic.
inline void enumerate_monomials(int vars, int deg, std::vector<int>& current,
                                std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == vars - 1) {
    int used = 0;
    for (int e : current) used += e;
    current.push_back(deg - used);
    out.push_back(current);
    current.pop_back();
    return;
  }
  int used = 0;
  for (int e : current) used += e;
  for (int e = deg - used; e >= 0; --e) {
    current.push_back(e);
    enumerate_monomials(vars, deg, current, out);
    current.pop_back();
  }
}

inline std::vector<std::vector<int>> monomials(int vars, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_monomials(vars, deg, cur, out);
  return out;
}

// The square matrix whose determinant detects Det A for p = 2: blocks map
// (V0 dual) x (degree-k1 monomials in the d2 coordinates) to
// V1 x (degree-(k1+1) monomials); the (i1,m') x (i0,m) entry is
// sum_{i2} a_{i0 i1 i2} [m' = m * x_{i2}].
inline RMatrix hyperdet_p2_matrix(const BoundaryTensor<Rational>& a) {
  const Format& f = a.format;
  if (f.p() != 2) throw precondition_error("hyperdet_p2: p = 2 required");
  const int k1 = f.k[1], d0 = f.dim(0), d1 = f.dim(1), d2 = f.dim(2);
  auto cols_mono = monomials(d2, k1);
  auto rows_mono = monomials(d2, k1 + 1);
  std::map<std::vector<int>, int> row_index;
  for (size_t i = 0; i < rows_mono.size(); ++i) row_index[rows_mono[i]] = static_cast<int>(i);
  const int ncols = d0 * static_cast<int>(cols_mono.size());
  const int nrows = d1 * static_cast<int>(rows_mono.size());
  if (nrows != ncols)
    throw verification_error("hyperdet_p2: map is not square; format not boundary?");
  RMatrix phi(nrows, ncols);
  for (int i0 = 0; i0 < d0; ++i0)
    for (size_t mc = 0; mc < cols_mono.size(); ++mc) {
      int col = i0 * static_cast<int>(cols_mono.size()) + static_cast<int>(mc);
      for (int i2 = 0; i2 < d2; ++i2) {
        std::vector<int> target = cols_mono[mc];
        target[i2] += 1;
        int r_m = row_index.at(target);
        for (int i1 = 0; i1 < d1; ++i1) {
          const Rational& v = a.at({i0, i1, i2});
          if (v == 0) continue;
          int row = i1 * static_cast<int>(rows_mono.size()) + r_m;
          phi(row, col) += v;
        }
      }
    }
  return phi;
}

// Exact scalar proportional to the hyperdeterminant: zero iff Det A = 0.
inline Rational hyperdet_p2(const BoundaryTensor<Rational>& a) {
  return det(hyperdet_p2_matrix(a));
}

// --- verdicts ---------------------------------------------------------------

enum class NondegStatus {
  NondegenerateExact,
  DegenerateExact,
  NondegenerateProbable,
  DegenerateWitness,
  Inconclusive,
};

inline std::string to_string(NondegStatus s) {
  switch (s) {
    case NondegStatus::NondegenerateExact: return "NondegenerateExact";
    case NondegStatus::DegenerateExact: return "DegenerateExact";
    case NondegStatus::NondegenerateProbable: return "NondegenerateProbable";
    case NondegStatus::DegenerateWitness: return "DegenerateWitness";
    case NondegStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct NondegeneracyVerdict {
  NondegStatus status = NondegStatus::Inconclusive;
  std::optional<Rational> det_value;              // exact p = 2 path
  std::optional<double> min_sigma;                // numeric path
  std::optional<FiberPoint<Rational>> witness;    // exactly certified rank drop
  std::optional<FiberPoint<Complex>> witness_float;
  int witness_slot = 0;
  bool exact = false;

  bool nondegenerate_ish() const {
    return status == NondegStatus::NondegenerateExact ||
           status == NondegStatus::NondegenerateProbable;
  }
};

struct NondegOptions {
  enum class Method { Auto, Exact, Numeric };
  Method method = Method::Auto;
  int restarts = 64;
  double tol_zero = 1e-10;
  double tol_pos = 1e-6;
  std::uint64_t seed = 12345;
  int max_sweeps = 120;
};

namespace detail {

// Contraction used by the descent: fix a left vector u on slot j (conjugated)
// and unit vectors on all slots except {0, j, t}; returns the d_t x d0 matrix
// C with (u^H M(x))_{i0} = sum_l x_t[l] C(l, i0).
inline CMatrix reduced_matrix(const BoundaryTensor<Complex>& a, const FiberPoint<Complex>& pt,
                              const CVector& u, int t) {
  const auto dims = a.format.dims();
  CMatrix c(dims[t], dims[0]);
  std::vector<int> idx(dims.size(), 0);
  size_t flat = 0;
  do {
    const Complex& v = a.entries[flat++];
    if (v == Complex(0)) continue;
    Complex w = v * std::conj(u[idx[pt.j]]);
    for (size_t i = 1; i < dims.size(); ++i) {
      if (static_cast<int>(i) == pt.j || static_cast<int>(i) == t) continue;
      w *= pt.x[i][idx[i]];
    }
    c(idx[t], idx[0]) += w;
  } while (next_index(dims, idx));
  return c;
}

// Multi-start alternating descent on the smallest singular value of the
// fiber map for a fixed omitted slot j. Each block step -- the left vector u
// and each sphere factor x_t -- is solved in closed form by a small SVD, so
// the objective is non-increasing. Returns the best point found.
struct SlotSearchResult {
  double min_sigma = std::numeric_limits<double>::infinity();
  FiberPoint<Complex> point;
};

inline SlotSearchResult min_sigma_search(const BoundaryTensor<Complex>& a, int j,
                                         const NondegOptions& opt) {
  const Format& f = a.format;
  const auto dims = f.dims();
  std::vector<int> free_slots;
  for (int i = 1; i < f.num_slots(); ++i)
    if (i != j) free_slots.push_back(i);

  SlotSearchResult best;
  for (int start = 0; start < opt.restarts; ++start) {
    std::mt19937_64 rng(opt.seed + 0x9e3779b9ull * (start + 1) + 131 * j);
    FiberPoint<Complex> pt;
    pt.j = j;
    pt.x.resize(f.num_slots());
    for (int t : free_slots) pt.x[t] = random_unit_vector(dims[t], rng);

    // sigma_min(M(x)) is non-increasing along the block updates: each step
    // minimizes the bound ||u^H M(x)|| exactly in its own block.
    double sigma = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      auto tr = svd_smallest(fiber_map(a, pt));
      double prev = sigma;
      sigma = tr.sigma;
      if (sigma < opt.tol_zero * 1e-3) break;
      if (sweep > 3 && prev - sigma < 1e-15 + 1e-9 * prev) break;
      for (int t : free_slots) {
        CMatrix c = reduced_matrix(a, pt, tr.left, t);
        pt.x[t] = svd_smallest(c.transposed()).right;
      }
    }
    sigma = std::min(sigma, svd_smallest(fiber_map(a, pt)).sigma);
    if (sigma < best.min_sigma) {
      best.min_sigma = sigma;
      best.point = pt;
    }
  }
  return best;
}

// Try to turn a floating near-witness into an exactly certified rational one.
inline std::optional<FiberPoint<Rational>> certify_witness(
    const BoundaryTensor<Rational>& a, const FiberPoint<Complex>& pt) {
  const Format& f = a.format;
  for (const Integer max_den : {Integer(8), Integer(64), Integer(4096), Integer(1000000)}) {
    FiberPoint<Rational> cand;
    cand.j = pt.j;
    cand.x.resize(pt.x.size());
    bool viable = true;
    for (int i = 1; i < f.num_slots() && viable; ++i) {
      if (i == pt.j) continue;
      // normalize by the largest coordinate so phases cancel
      const CVector& v = pt.x[i];
      int piv = 0;
      for (size_t l = 1; l < v.size(); ++l)
        if (std::abs(v[l]) > std::abs(v[piv])) piv = static_cast<int>(l);
      if (std::abs(v[piv]) == 0.0) { viable = false; break; }
      RVector rv(v.size());
      for (size_t l = 0; l < v.size(); ++l) {
        Complex z = v[l] / v[piv];
        if (std::abs(z.imag()) > 1e-6) { viable = false; break; }
        rv[l] = rationalize(z.real(), max_den);
      }
      if (viable) cand.x[i] = rv;
    }
    if (!viable) continue;
    bool nonzero_ok = true;
    for (int i = 1; i < f.num_slots(); ++i) {
      if (i == pt.j) continue;
      if (is_zero(cand.x[i])) nonzero_ok = false;
    }
    if (!nonzero_ok) continue;
    if (rank(fiber_map(a, cand)) < f.dim(pt.j)) return cand;
  }
  return std::nullopt;
}

}  // namespace detail

template <class S>
NondegeneracyVerdict nondegenerate(const BoundaryTensor<S>& a, NondegOptions opt = {}) {
  const Format& f = a.format;
  if (!f.boundary()) throw precondition_error("nondegenerate: boundary format required");
  if (a.is_zero()) throw precondition_error("nondegenerate: zero tensor");
  using Method = NondegOptions::Method;

  bool want_exact = opt.method == Method::Exact ||
                    (opt.method == Method::Auto && f.p() == 2 && is_rational_v<S>);
  if (want_exact) {
    if constexpr (is_rational_v<S>) {
      if (f.p() != 2)
        throw precondition_error("nondegenerate: exact method needs p = 2");
      NondegeneracyVerdict v;
      v.det_value = hyperdet_p2(a);
      v.exact = true;
      v.status = (*v.det_value != 0) ? NondegStatus::NondegenerateExact
                                     : NondegStatus::DegenerateExact;
      return v;
    } else {
      throw precondition_error("nondegenerate: exact method needs rational entries");
    }
  }

  BoundaryTensor<Complex> ac = to_complex_tensor(a);
  NondegeneracyVerdict v;
  double worst = std::numeric_limits<double>::infinity();
  double scale = frobenius_norm(ac);
  if (scale == 0) throw precondition_error("nondegenerate: zero tensor");
  for (int j = 1; j <= f.p(); ++j) {
    auto res = detail::min_sigma_search(ac, j, opt);
    double rel = res.min_sigma / scale;
    if (rel < worst) {
      worst = rel;
      v.min_sigma = res.min_sigma;
      v.witness_slot = j;
      v.witness_float = res.point;
    }
    if (rel < opt.tol_zero) {
      if constexpr (is_rational_v<S>) {
        if (auto cert = detail::certify_witness(a, res.point)) {
          v.status = NondegStatus::DegenerateWitness;
          v.witness = cert;
          v.exact = true;
          v.min_sigma = res.min_sigma;
          v.witness_slot = j;
          v.witness_float = res.point;
          return v;
        }
      } else {
        v.status = NondegStatus::DegenerateWitness;
        v.min_sigma = res.min_sigma;
        v.witness_slot = j;
        v.witness_float = res.point;
        return v;
      }
    }
  }
  v.status = worst > opt.tol_pos ? NondegStatus::NondegenerateProbable
                                 : NondegStatus::Inconclusive;
  return v;
}

}  // namespace bft
