#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bft/format.hpp"
#include "bft/linalg.hpp"
#include "bft/matrix.hpp"
#include "bft/numeric.hpp"
#include "bft/rational.hpp"

namespace bft {

// Generic dense tensor, row-major with the last index fastest. Used for
// slices (the p-factor tensors living in V1 x ... x Vp).
template <class S>
struct Tensor {
  std::vector<int> dims;
  std::vector<S> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> d) : dims(std::move(d)) {
    long long n = 1;
    for (int x : dims) n *= x;
    data.assign(static_cast<size_t>(n), S(0));
  }

  S& at(const std::vector<int>& idx) { return data[flat_offset(dims, idx)]; }
  const S& at(const std::vector<int>& idx) const { return data[flat_offset(dims, idx)]; }

  bool is_zero() const {
    for (const auto& v : data) if (!(v == S(0))) return false;
    return true;
  }
};

// Boundary-format tensor in V0 x V1 x ... x Vp.
template <class S>
struct BoundaryTensor {
  Format format;
  std::vector<S> entries;

  BoundaryTensor() = default;
  explicit BoundaryTensor(Format f) : format(std::move(f)) {
    entries.assign(static_cast<size_t>(format.entry_count()), S(0));
  }

  S& at(const std::vector<int>& idx) { return entries[flat_offset(format.dims(), idx)]; }
  const S& at(const std::vector<int>& idx) const {
    return entries[flat_offset(format.dims(), idx)];
  }

  bool is_zero() const {
    for (const auto& v : entries) if (!(v == S(0))) return false;
    return true;
  }

  bool operator==(const BoundaryTensor& o) const {
    return format == o.format && entries == o.entries;
  }
};

// Tuple of invertible matrices acting slot-wise, g_i of size dim(i).
template <class S>
struct GroupElement {
  std::vector<Matrix<S>> g;
  bool special = false;  // when set, det g_i = 1 is asserted on use

  static GroupElement identity(const Format& f) {
    GroupElement e;
    for (int i = 0; i < f.num_slots(); ++i) e.g.push_back(Matrix<S>::identity(f.dim(i)));
    return e;
  }
};

template <class S>
BoundaryTensor<Complex> to_complex_tensor(const BoundaryTensor<S>& a) {
  BoundaryTensor<Complex> b(a.format);
  for (size_t i = 0; i < a.entries.size(); ++i) b.entries[i] = to_complex(a.entries[i]);
  return b;
}

template <class S>
Tensor<Complex> to_complex_tensor(const Tensor<S>& a) {
  Tensor<Complex> b(a.dims);
  for (size_t i = 0; i < a.data.size(); ++i) b.data[i] = to_complex(a.data[i]);
  return b;
}

template <class S>
Matrix<Complex> to_complex_matrix(const Matrix<S>& m) {
  Matrix<Complex> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = to_complex(m(i, j));
  return r;
}

// Slice of A against a covector on the V0 side:
// (A . xi)_{i1..ip} = sum_{i0} xi_{i0} a_{i0 i1 .. ip}.
template <class S>
Tensor<S> contract0(const BoundaryTensor<S>& a, const Vector<S>& xi) {
  const auto dims = a.format.dims();
  if (static_cast<int>(xi.size()) != dims[0])
    throw precondition_error("contract0: covector size does not match dim V0");
  if (is_zero(xi)) throw precondition_error("contract0: zero covector");
  std::vector<int> rest(dims.begin() + 1, dims.end());
  Tensor<S> t(rest);
  long long block = static_cast<long long>(t.data.size());
  for (int i0 = 0; i0 < dims[0]; ++i0) {
    const S& w = xi[i0];
    if (w == S(0)) continue;
    const S* src = a.entries.data() + i0 * block;
    for (long long r = 0; r < block; ++r) t.data[r] += w * src[r];
  }
  return t;
}

// Flatten a p-factor slice along factor slot j (1-based, matching the
// numbering of the V_j): rows indexed by the slot-j index, columns row-major
// over the remaining slots in ascending slot order.
template <class S>
Matrix<S> flatten(const Tensor<S>& t, int j) {
  int p = static_cast<int>(t.dims.size());
  if (j < 1 || j > p) throw precondition_error("flatten: slot out of range");
  int axis = j - 1;
  int dj = t.dims[axis];
  long long rest = 1;
  for (int i = 0; i < p; ++i)
    if (i != axis) rest *= t.dims[i];
  Matrix<S> m(dj, static_cast<int>(rest));
  std::vector<int> idx(p, 0);
  std::vector<int> rdims;
  for (int i = 0; i < p; ++i)
    if (i != axis) rdims.push_back(t.dims[i]);
  std::vector<int> ridx(rdims.size(), 0);
  do {
    int r = idx[axis];
    size_t c_at = 0;
    for (int i = 0; i < p; ++i)
      if (i != axis) ridx[c_at++] = idx[i];
    m(r, static_cast<int>(flat_offset(rdims, ridx))) = t.at(idx);
  } while (next_index(t.dims, idx));
  return m;
}

// Apply a matrix on one slot of a boundary tensor: the mode-`slot` product.
template <class S>
BoundaryTensor<S> mode_multiply(const Matrix<S>& m, const BoundaryTensor<S>& a, int slot) {
  const auto dims = a.format.dims();
  if (m.cols() != dims[slot] || m.rows() != dims[slot])
    throw precondition_error("mode_multiply: size mismatch");
  BoundaryTensor<S> out(a.format);
  // stride of the slot index and size of the trailing block
  long long inner = 1;
  for (size_t i = slot + 1; i < dims.size(); ++i) inner *= dims[i];
  long long outer = 1;
  for (int i = 0; i < slot; ++i) outer *= dims[i];
  int d = dims[slot];
  for (long long o = 0; o < outer; ++o)
    for (long long in = 0; in < inner; ++in) {
      const long long base = o * d * inner + in;
      for (int r = 0; r < d; ++r) {
        S acc(0);
        for (int c = 0; c < d; ++c) {
          const S& v = a.entries[base + c * inner];
          if (v == S(0)) continue;
          acc += m(r, c) * v;
        }
        out.entries[base + r * inner] = acc;
      }
    }
  return out;
}

// Apply one matrix per factor of a p-factor slice (gs[i] acts on axis i,
// i.e. on the spec's slot i+1).
template <class S>
Tensor<S> act_factors(const std::vector<Matrix<S>>& gs, const Tensor<S>& t) {
  if (gs.size() != t.dims.size())
    throw precondition_error("act_factors: factor count mismatch");
  Tensor<S> out = t;
  for (size_t axis = 0; axis < gs.size(); ++axis) {
    const Matrix<S>& m = gs[axis];
    if (m.rows() != t.dims[axis] || m.cols() != t.dims[axis])
      throw precondition_error("act_factors: size mismatch");
    Tensor<S> next(out.dims);
    long long inner = 1;
    for (size_t i = axis + 1; i < out.dims.size(); ++i) inner *= out.dims[i];
    long long outer = 1;
    for (size_t i = 0; i < axis; ++i) outer *= out.dims[i];
    int d = out.dims[axis];
    for (long long o = 0; o < outer; ++o)
      for (long long in = 0; in < inner; ++in) {
        long long base = o * d * inner + in;
        for (int r = 0; r < d; ++r) {
          S acc(0);
          for (int c = 0; c < d; ++c) {
            const S& v = out.data[base + c * inner];
            if (v == S(0)) continue;
            acc += m(r, c) * v;
          }
          next.data[base + r * inner] = acc;
        }
      }
    out = next;
  }
  return out;
}

template <class S>
bool matrix_invertible(const Matrix<S>& m) {
  if constexpr (is_rational_v<S>) {
    return det(m) != 0;
  } else {
    auto s = singular_values(m);
    return !s.empty() && s.back() > 1e-12 * std::max(1.0, s.front());
  }
}

// Slot-wise change of basis: (g.A)_{i0..ip} = sum (g0)_{i0 j0}...(gp)_{ip jp} a_{j0..jp}.
template <class S>
BoundaryTensor<S> act(const GroupElement<S>& g, const BoundaryTensor<S>& a) {
  if (static_cast<int>(g.g.size()) != a.format.num_slots())
    throw precondition_error("act: group element and tensor have different slot counts");
  for (int i = 0; i < a.format.num_slots(); ++i) {
    if (g.g[i].rows() != a.format.dim(i) || g.g[i].cols() != a.format.dim(i))
      throw precondition_error("act: component size mismatch on slot " + std::to_string(i));
    if (!matrix_invertible(g.g[i]))
      throw precondition_error("act: singular component on slot " + std::to_string(i));
    if constexpr (is_rational_v<S>) {
      if (g.special && det(g.g[i]) != 1)
        throw precondition_error("act: special flag set but det != 1 on slot " + std::to_string(i));
    }
  }
  BoundaryTensor<S> out = a;
  for (int slot = 0; slot < a.format.num_slots(); ++slot) out = mode_multiply(g.g[slot], out, slot);
  return out;
}

template <class S>
GroupElement<S> compose(const GroupElement<S>& g, const GroupElement<S>& h) {
  if (g.g.size() != h.g.size()) throw precondition_error("compose: slot count mismatch");
  GroupElement<S> r;
  r.special = g.special && h.special;
  for (size_t i = 0; i < g.g.size(); ++i) r.g.push_back(g.g[i] * h.g[i]);
  return r;
}

inline double frobenius_norm(const Tensor<Complex>& t) {
  double s = 0;
  for (const auto& z : t.data) s += std::norm(z);
  return std::sqrt(s);
}

inline double frobenius_norm(const BoundaryTensor<Complex>& t) {
  double s = 0;
  for (const auto& z : t.entries) s += std::norm(z);
  return std::sqrt(s);
}

// Do all 2x2 minors of every flattening vanish? Exact decomposability test.
inline bool decomposable_exact(const Tensor<Rational>& t) {
  int p = static_cast<int>(t.dims.size());
  for (int j = 1; j <= p; ++j) {
    RMatrix m = flatten(t, j);
    for (int r1 = 0; r1 < m.rows(); ++r1)
      for (int r2 = r1 + 1; r2 < m.rows(); ++r2)
        for (int c1 = 0; c1 < m.cols(); ++c1)
          for (int c2 = c1 + 1; c2 < m.cols(); ++c2)
            if (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1) != 0) return false;
  }
  return true;
}

// Largest relative second singular value over all flattenings; 0 iff the
// slice is decomposable. The rational backend decides decomposability
// exactly and only reports a floating residual when it is nonzero.
template <class S>
double residual_rank_one(const Tensor<S>& t) {
  if (t.is_zero()) throw precondition_error("residual_rank_one: zero tensor");
  if constexpr (is_rational_v<S>) {
    if (decomposable_exact(t)) return 0.0;
    return residual_rank_one(to_complex_tensor(t));
  } else {
    int p = static_cast<int>(t.dims.size());
    double worst = 0.0;
    for (int j = 1; j <= p; ++j) {
      auto s = singular_values(flatten(t, j));
      if (s.size() >= 2 && s[0] > 0) worst = std::max(worst, s[1] / s[0]);
    }
    return worst;
  }
}

}  // namespace bft
