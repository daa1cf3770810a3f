#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bft/numeric.hpp"
#include "bft/stabilizer.hpp"
#include "bft/tensor.hpp"

// Jumping hyperplanes: covectors xi on V0 whose slice A.xi is decomposable
// (strong) or rank one in the V_j-versus-rest flattening (weak-(j)).
// Detection is a seeded multi-start alternating search over the unit sphere
// of covectors; candidates are clustered projectively and, for rational
// inputs, confirmed exactly whenever a small-height rationalization exists.

namespace bft {

struct JumpingOptions {
  int restarts = 256;
  double tol = 1e-8;          // accept a candidate below this relative residual
  double cluster_tol = 1e-6;  // projective distance for clustering
  std::uint64_t seed = 12345;
  int max_sweeps = 60;
};

struct JumpingHyperplane {
  bool strong = true;
  int slot = 0;  // weak detections: the flattened factor j
  CVector xi;    // normalized so the pivot coordinate is exactly 1
  std::optional<RVector> xi_exact;  // exact covector when confirmed
  std::vector<CVector> factors;     // strong: witness directions v_1..v_p
  CVector vj, h;                    // weak: slice = vj . h^T (flattened)
  double residual = 0.0;            // rank-one residual; exact zero when confirmed
  bool exact = false;
};

struct JumpingReport {
  std::vector<JumpingHyperplane> items;
  int count_distinct = 0;
  bool identity_flag = false;
  bool curve_detected = false;
  std::vector<Rational> curve_nodes;  // fitted moment-curve parameters
};

namespace detail {

// Slices matrix S with S[I][i0] = A_{i0, I}; its Gram matrix drives the
// covector update step.
inline CMatrix slices_matrix(const BoundaryTensor<Complex>& a) {
  const auto dims = a.format.dims();
  long long rest = 1;
  for (size_t i = 1; i < dims.size(); ++i) rest *= dims[i];
  CMatrix s(static_cast<int>(rest), dims[0]);
  for (int i0 = 0; i0 < dims[0]; ++i0)
    for (long long r = 0; r < rest; ++r) s(static_cast<int>(r), i0) = a.entries[i0 * rest + r];
  return s;
}

// One multi-start state for the rank-one fit of the slice.
struct SearchState {
  CVector xi;
  std::vector<CVector> v;  // strong mode: unit factor per slot 1..p
  CVector u, w;            // weak mode: rank-one pair of the flattening
};

inline Tensor<Complex> strong_target(const std::vector<CVector>& v, const std::vector<int>& dims) {
  Tensor<Complex> t(dims);
  std::vector<int> idx(dims.size(), 0);
  size_t flat = 0;
  do {
    Complex prod(1, 0);
    for (size_t i = 0; i < dims.size(); ++i) prod *= v[i][idx[i]];
    t.data[flat++] = prod;
  } while (next_index(dims, idx));
  return t;
}

inline Tensor<Complex> weak_target(const CVector& u, const CVector& w,
                                   const std::vector<int>& dims, int axis) {
  Tensor<Complex> t(dims);
  std::vector<int> rdims;
  for (size_t i = 0; i < dims.size(); ++i)
    if (static_cast<int>(i) != axis) rdims.push_back(dims[i]);
  std::vector<int> idx(dims.size(), 0), ridx(rdims.size(), 0);
  size_t flat = 0;
  do {
    size_t at = 0;
    for (size_t i = 0; i < dims.size(); ++i)
      if (static_cast<int>(i) != axis) ridx[at++] = idx[i];
    t.data[flat++] = u[idx[axis]] * w[flat_offset(rdims, ridx)];
  } while (next_index(dims, idx));
  return t;
}

// HOPM factor update: contract T against the conjugate factors except slot t.
inline CVector hopm_factor(const Tensor<Complex>& t, const std::vector<CVector>& v, int axis) {
  CVector out(t.dims[axis], Complex(0, 0));
  std::vector<int> idx(t.dims.size(), 0);
  size_t flat = 0;
  do {
    Complex prod = t.data[flat++];
    if (prod == Complex(0, 0)) continue;
    for (size_t i = 0; i < t.dims.size(); ++i) {
      if (static_cast<int>(i) == axis) continue;
      prod *= std::conj(v[i][idx[i]]);
    }
    out[idx[axis]] += prod;
  } while (next_index(t.dims, idx));
  return out;
}

// residual of the single flattening (weak) or the worst flattening (strong)
inline double mode_residual(const Tensor<Complex>& t, bool strong, int axis) {
  if (strong) return residual_rank_one(t);
  auto s = singular_values(flatten(t, axis + 1));
  if (s.size() < 2 || s[0] == 0) return 0.0;
  return s[1] / s[0];
}

inline int pivot_index(const CVector& xi) {
  double top = 0;
  for (const auto& z : xi) top = std::max(top, std::abs(z));
  for (size_t i = 0; i < xi.size(); ++i)
    if (std::abs(xi[i]) > 1e-3 * top) return static_cast<int>(i);
  return 0;
}

inline void pivot_normalize(CVector& xi) {
  int piv = pivot_index(xi);
  Complex z = xi[piv];
  for (auto& c : xi) c /= z;
}

// exact confirmation: coordinate-wise rationalization ladder
inline std::optional<RVector> rationalize_covector(const CVector& xi_normalized) {
  for (const Integer max_den : {Integer(8), Integer(64), Integer(4096), Integer(1000000)}) {
    RVector r(xi_normalized.size());
    bool viable = true;
    for (size_t i = 0; i < xi_normalized.size(); ++i) {
      const Complex& z = xi_normalized[i];
      if (std::abs(z.imag()) > 1e-7) { viable = false; break; }
      r[i] = rationalize(z.real(), max_den);
      if (std::abs(to_double(r[i]) - z.real()) > 1e-7) viable = false;
    }
    if (viable && !is_zero(r)) return r;
  }
  return std::nullopt;
}

inline bool confirm_exact(const BoundaryTensor<Rational>& a, const RVector& xi, bool strong,
                          int j) {
  if (is_zero(xi)) return false;
  auto slice = contract0(a, xi);
  if (slice.is_zero()) return false;
  if (strong) return decomposable_exact(slice);
  RMatrix m = flatten(slice, j);
  for (int r1 = 0; r1 < m.rows(); ++r1)
    for (int r2 = r1 + 1; r2 < m.rows(); ++r2)
      for (int c1 = 0; c1 < m.cols(); ++c1)
        for (int c2 = c1 + 1; c2 < m.cols(); ++c2)
          if (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1) != 0) return false;
  return true;
}

}  // namespace detail

// Core detector; strong mode fits a full decomposable slice, weak mode fits
// a rank-one flattening along slot j.
template <class S>
JumpingReport detect_jumping(const BoundaryTensor<S>& a, bool strong, int j,
                             const JumpingOptions& opt = {}) {
  const Format& f = a.format;
  if (a.is_zero()) throw precondition_error("detect: zero tensor");
  if (!strong && (j < 1 || j > f.p())) throw precondition_error("detect: slot out of range");
  const int axis = strong ? -1 : j - 1;

  BoundaryTensor<Complex> ac = to_complex_tensor(a);
  double anorm = frobenius_norm(ac);
  for (auto& e : ac.entries) e /= anorm;  // scale-free residuals

  const std::vector<int> all_dims = f.dims();
  std::vector<int> rest_dims(all_dims.begin() + 1, all_dims.end());
  CMatrix slices = detail::slices_matrix(ac);
  CMatrix gram = slices.transposed();  // placeholder; build S^H S below
  {
    CMatrix sh(slices.cols(), slices.rows());
    for (int r = 0; r < slices.rows(); ++r)
      for (int c = 0; c < slices.cols(); ++c) sh(c, r) = std::conj(slices(r, c));
    gram = sh * slices;
  }

  const int d0 = f.dim(0);
  const bool rational_input = is_rational_v<S>;
  bool identity_support = false;
  if constexpr (is_rational_v<S>) identity_support = check_support(a, SupportKind::Identity);

  std::vector<JumpingHyperplane> accepted;

  for (int start = 0; start < opt.restarts; ++start) {
    std::mt19937_64 rng(opt.seed + 0x51f3c6a7ull * (start + 1));
    detail::SearchState st;
    if (start < d0) {
      st.xi.assign(d0, Complex(0, 0));
      st.xi[start] = 1.0;  // coordinate covectors first
    } else {
      st.xi = random_unit_vector(d0, rng);
    }
    auto slice = contract0(ac, st.xi);
    if (frobenius_norm(slice) < 1e-12) continue;
    if (strong) {
      st.v.clear();
      for (int t = 0; t < f.p(); ++t) st.v.push_back(random_unit_vector(rest_dims[t], rng));
    }

    double residual = 1.0;
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      // factor update
      Tensor<Complex> target;
      if (strong) {
        for (int pass = 0; pass < 2; ++pass)
          for (int t = 0; t < f.p(); ++t) {
            CVector w = detail::hopm_factor(slice, st.v, t);
            double n = norm2(w);
            if (n == 0) break;
            for (auto& z : w) z /= n;
            st.v[t] = w;
          }
        target = detail::strong_target(st.v, rest_dims);
      } else {
        auto top = svd_largest(flatten(slice, j));
        st.u = top.left;
        st.w = top.right;
        for (auto& z : st.w) z = std::conj(z);  // right factor as a plain row
        target = detail::weak_target(st.u, st.w, rest_dims, axis);
      }
      double tn = frobenius_norm(target);
      if (tn == 0) break;
      for (auto& z : target.data) z /= tn;

      // covector update: smallest eigenvector of G - q q^H
      CVector q(d0, Complex(0, 0));
      for (int i0 = 0; i0 < d0; ++i0)
        for (size_t r = 0; r < target.data.size(); ++r)
          q[i0] += std::conj(slices(static_cast<int>(r), i0)) * target.data[r];
      CMatrix m(d0, d0);
      for (int r = 0; r < d0; ++r)
        for (int c = 0; c < d0; ++c) m(r, c) = gram(r, c) - q[r] * std::conj(q[c]);
      st.xi = hermitian_smallest_eigvec(m);
      slice = contract0(ac, st.xi);
      double sn = frobenius_norm(slice);
      if (sn < 1e-12) break;

      double res = detail::mode_residual(slice, strong, axis);
      if (sweep > 3 && res > residual * (1 - 1e-10) && std::abs(residual - res) < 1e-14) {
        residual = std::min(residual, res);
        break;
      }
      residual = std::min(residual, res);
      if (res < opt.tol * 1e-3) break;
    }

    // final evaluation at the converged covector
    slice = contract0(ac, st.xi);
    if (frobenius_norm(slice) < 1e-12) continue;
    residual = detail::mode_residual(slice, strong, axis);
    if (residual > opt.tol) continue;

    JumpingHyperplane item;
    item.strong = strong;
    item.slot = strong ? 0 : j;
    item.xi = st.xi;
    detail::pivot_normalize(item.xi);
    item.residual = residual;
    if (strong) {
      for (int t = 0; t < f.p(); ++t) {
        CVector w = detail::hopm_factor(slice, st.v, t);
        double n = norm2(w);
        if (n > 0)
          for (auto& z : w) z /= n;
        item.factors.push_back(w);
      }
    } else {
      auto top = svd_largest(flatten(slice, j));
      item.vj = top.left;
      item.h = top.right;
      for (auto& z : item.h) z = std::conj(z);
    }
    accepted.push_back(std::move(item));
  }

  // deterministic greedy clustering in start order
  JumpingReport rep;
  for (auto& cand : accepted) {
    bool merged = false;
    for (auto& seen : rep.items) {
      if (projective_distance(cand.xi, seen.xi) < opt.cluster_tol) {
        if (cand.residual < seen.residual) {
          auto keep_exact = seen.exact;
          auto keep_xi = seen.xi_exact;
          seen = cand;
          seen.exact = keep_exact;
          seen.xi_exact = keep_xi;
        }
        merged = true;
        break;
      }
    }
    if (!merged) rep.items.push_back(cand);
  }

  // exact confirmation for rational inputs
  if constexpr (is_rational_v<S>) {
    for (auto& item : rep.items) {
      if (auto r = detail::rationalize_covector(item.xi)) {
        if (detail::confirm_exact(a, *r, strong, j)) {
          item.xi_exact = r;
          item.exact = true;
          item.residual = 0.0;
          continue;
        }
      }
      if (identity_support) {
        // snap to the moment curve (1, t, ..., t^k0) or its point at infinity
        const int k0 = f.k[0];
        CVector einf(d0, Complex(0, 0));
        einf[d0 - 1] = 1;
        if (projective_distance(item.xi, einf) < 1e-4) {
          RVector r(d0, Rational(0));
          r[d0 - 1] = 1;
          if (detail::confirm_exact(a, r, strong, j)) {
            item.xi_exact = r;
            item.exact = true;
            item.residual = 0.0;
            continue;
          }
        }
        if (std::abs(item.xi[0]) > 1e-8) {
          Complex tc = item.xi[1] / item.xi[0];
          if (std::abs(tc.imag()) < 1e-7) {
            for (const Integer max_den : {Integer(64), Integer(4096), Integer(1000000)}) {
              Rational t = rationalize(tc.real(), max_den);
              RVector r(d0);
              for (int i = 0; i < d0; ++i) r[i] = scalar_pow(t, i);
              CVector rf(d0);
              for (int i = 0; i < d0; ++i) rf[i] = to_complex(r[i]);
              if (projective_distance(rf, item.xi) < opt.cluster_tol * 10 &&
                  detail::confirm_exact(a, r, strong, j)) {
                item.xi_exact = r;
                item.exact = true;
                item.residual = 0.0;
                break;
              }
            }
          }
        }
      }
    }
    // fitted moment-curve nodes
    if (identity_support) {
      for (const auto& item : rep.items)
        if (item.exact && item.xi_exact && (*item.xi_exact)[0] == 1)
          rep.curve_nodes.push_back((*item.xi_exact)[1]);
      std::sort(rep.curve_nodes.begin(), rep.curve_nodes.end());
      rep.curve_detected = rep.curve_nodes.size() >= 3;
    }
  }

  rep.count_distinct = static_cast<int>(rep.items.size());
  rep.identity_flag = rep.count_distinct >= f.k[0] + 3 || rep.curve_detected;
  return rep;
}

template <class S>
JumpingReport detect_strong(const BoundaryTensor<S>& a, const JumpingOptions& opt = {}) {
  return detect_jumping(a, true, 0, opt);
}

template <class S>
JumpingReport detect_weak(const BoundaryTensor<S>& a, int j, const JumpingOptions& opt = {}) {
  return detect_jumping(a, false, j, opt);
}

struct DirectionCluster {
  CVector direction;
  int hits = 0;
};

struct DirectionLocus {
  std::vector<DirectionCluster> clusters;
  bool infinite = false;  // identity-orbit inputs have a whole curve of directions
};

// Witness directions in the V_j factor of detected strong hyperplanes,
// clustered projectively.
template <class S>
DirectionLocus strong_direction_locus(const BoundaryTensor<S>& a, int j,
                                      const JumpingOptions& opt = {}) {
  if (j < 1 || j > a.format.p()) throw precondition_error("direction locus: slot out of range");
  auto rep = detect_strong(a, opt);
  DirectionLocus loc;
  loc.infinite = rep.identity_flag;
  for (const auto& item : rep.items) {
    const CVector& dir = item.factors[j - 1];
    bool merged = false;
    for (auto& cl : loc.clusters)
      if (projective_distance(cl.direction, dir) < std::max(opt.cluster_tol, 1e-6)) {
        ++cl.hits;
        merged = true;
        break;
      }
    if (!merged) loc.clusters.push_back({dir, 1});
  }
  return loc;
}

namespace detail {

template <class S>
int first_nonzero_pivot(const Vector<S>& v) {
  if constexpr (is_rational_v<S>) {
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] != S(0)) return static_cast<int>(i);
    return -1;
  } else {
    int best = -1;
    double top = 0;
    for (size_t i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > top) {
        top = std::abs(v[i]);
        best = static_cast<int>(i);
      }
    return best;
  }
}

}  // namespace detail

// Witness (v_j, h) of a verified weak-(j) covector: the slice flattening is
// v_j h^T; h is normalized to 1 at the pivot column.
template <class S>
std::pair<Vector<S>, Vector<S>> weak_witness(const BoundaryTensor<S>& a, const Vector<S>& xi,
                                             int j, double tol = 1e-8) {
  auto slice = contract0(a, xi);
  if (slice.is_zero()) throw precondition_error("weak witness: slice vanishes");
  Matrix<S> m = flatten(slice, j);
  bool rank_one;
  if constexpr (is_rational_v<S>) {
    rank_one = true;
    for (int r1 = 0; r1 < m.rows() && rank_one; ++r1)
      for (int r2 = r1 + 1; r2 < m.rows() && rank_one; ++r2)
        for (int c1 = 0; c1 < m.cols() && rank_one; ++c1)
          for (int c2 = c1 + 1; c2 < m.cols(); ++c2)
            if (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1) != 0) {
              rank_one = false;
              break;
            }
  } else {
    auto s = singular_values(m);
    rank_one = s.size() < 2 || s[0] == 0 || s[1] / s[0] < tol;
  }
  if (!rank_one)
    throw precondition_error("weak witness: covector is not a verified weak jumping hyperplane");
  // pivot entry
  int pr = -1, pc = -1;
  if constexpr (is_rational_v<S>) {
    for (int r = 0; r < m.rows() && pr < 0; ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (m(r, c) != S(0)) {
          pr = r;
          pc = c;
          break;
        }
  } else {
    double top = 0;
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (std::abs(m(r, c)) > top) {
          top = std::abs(m(r, c));
          pr = r;
          pc = c;
        }
  }
  Vector<S> vj(m.rows()), h(m.cols());
  for (int r = 0; r < m.rows(); ++r) vj[r] = m(r, pc);
  for (int c = 0; c < m.cols(); ++c) h[c] = m(pr, c) / m(pr, pc);
  return {vj, h};
}

struct TransformOptions {
  double tol = 1e-8;  // float verification tolerance
};

// Elementary transformation: quotient A by the directions (v0, v_j) attached
// to a weak-(j) covector. v0 follows the deterministic rule: coordinate dual
// of the pivot entry over the rationals, xi-conjugate over the floats. The
// kernel of xi and the complement of v_j are completed in Gaussian pivot
// order, and the quotient components are the sub-block dropping both
// leading directions.
template <class S>
BoundaryTensor<S> elementary_transform(const BoundaryTensor<S>& a, const Vector<S>& xi, int j,
                                       const TransformOptions& opt = {}) {
  const Format& f = a.format;
  if (j < 1 || j > f.p()) throw precondition_error("elementary_transform: slot out of range");
  if (f.k[j] < 1)
    throw precondition_error("elementary_transform: slot already has projective dimension 0");
  if (static_cast<int>(xi.size()) != f.dim(0))
    throw precondition_error("elementary_transform: covector size mismatch");
  auto [vj, h] = weak_witness(a, xi, j, opt.tol);  // verifies the precondition
  (void)h;

  const int d0 = f.dim(0), dj = f.dim(j);
  // slot-0 basis: v0 first, then the kernel of xi in pivot order
  int piv = detail::first_nonzero_pivot(xi);
  if (piv < 0) throw precondition_error("elementary_transform: zero covector");
  Matrix<S> b0(d0, d0);
  if constexpr (is_rational_v<S>) {
    b0(piv, 0) = S(1) / xi[piv];  // v0 = e_piv / xi_piv
  } else {
    double n2 = 0;
    for (const auto& z : xi) n2 += std::norm(z);
    for (int r = 0; r < d0; ++r) b0(r, 0) = std::conj(xi[r]) / n2;  // v0 = xi^dag/|xi|^2
  }
  {
    int col = 1;
    for (int i = 0; i < d0; ++i) {
      if (i == piv) continue;
      // w_i = e_i - (xi_i / xi_piv) e_piv spans ker xi
      b0(i, col) = S(1);
      b0(piv, col) = -xi[i] / xi[piv];
      ++col;
    }
  }
  // slot-j basis: v_j first, then the coordinate complement of its pivot
  int jpiv = detail::first_nonzero_pivot(vj);
  Matrix<S> bj(dj, dj);
  for (int r = 0; r < dj; ++r) bj(r, 0) = vj[r];
  {
    int col = 1;
    for (int i = 0; i < dj; ++i) {
      if (i == jpiv) continue;
      bj(i, col) = S(1);
      ++col;
    }
  }

  Matrix<S> b0i, bji;
  if constexpr (is_rational_v<S>) {
    auto i0 = inverse(b0), ij = inverse(bj);
    if (!i0 || !ij) throw verification_error("elementary_transform: basis completion singular");
    b0i = *i0;
    bji = *ij;
  } else {
    b0i = inverse(b0);
    bji = inverse(bj);
  }
  auto in_bases = mode_multiply(bji, mode_multiply(b0i, a, 0), j);

  std::vector<int> new_k = f.k;
  new_k[0] -= 1;
  new_k[j] -= 1;
  BoundaryTensor<S> out{Format(new_k, /*relaxed_ok=*/true)};
  const auto odims = out.format.dims();
  std::vector<int> idx(odims.size(), 0);
  do {
    std::vector<int> src = idx;
    src[0] += 1;
    src[j] += 1;
    out.at(idx) = in_bases.at(src);
  } while (next_index(odims, idx));
  return out;
}

struct InclusionCheck {
  bool holds = true;
  bool conclusive = true;
  int checked = 0;
  std::string note;
};

// Advisory check of the jumping-locus inclusion under an elementary
// transformation: every weak-(j) hyperplane h' of A other than the one used
// must reappear among the weak-(j) hyperplanes of the transform.
template <class S>
InclusionCheck weak_locus_inclusion_check(const BoundaryTensor<S>& a, const Vector<S>& xi, int j,
                                          const JumpingOptions& opt = {},
                                          double match_tol = 1e-5) {
  InclusionCheck result;
  auto [vj, h] = weak_witness(a, xi, j);
  CVector h_used(h.size());
  for (size_t i = 0; i < h.size(); ++i) h_used[i] = to_complex(h[i]);

  auto rep_a = detect_weak(a, j, opt);
  if (rep_a.items.empty()) {
    result.note = "no weak detections on the input; vacuously true";
    return result;
  }
  auto a_prime = elementary_transform(a, xi, j);
  auto rep_p = detect_weak(a_prime, j, opt);
  for (const auto& item : rep_a.items) {
    if (projective_distance(item.h, h_used) < match_tol) continue;  // the deleted hyperplane
    ++result.checked;
    bool found = false;
    for (const auto& other : rep_p.items)
      if (projective_distance(item.h, other.h) < match_tol) {
        found = true;
        break;
      }
    if (!found) result.holds = false;
  }
  if (result.checked == 0) result.note = "only the deleted hyperplane was detected";
  return result;
}

}  // namespace bft
