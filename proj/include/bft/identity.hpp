#pragma once

#include <vector>

#include "bft/sl2.hpp"
#include "bft/tensor.hpp"

namespace bft {

// The multidimensional identity: unit entries exactly on the diagonal
// support i0 = i1 + ... + ip. Coordinates of the multiplication map
// S^{k1}U x ... x S^{kp}U -> S^{k0}U in the monomial bases.
template <class S = Rational>
BoundaryTensor<S> build_identity(const Format& f) {
  if (!f.boundary()) throw precondition_error("build_identity: boundary format required");
  if (f.relaxed) throw precondition_error("build_identity: zero-dimensional factor");
  BoundaryTensor<S> t(f);
  const auto dims = f.dims();
  std::vector<int> idx(dims.size(), 0);
  do {
    int sum = 0;
    for (size_t i = 1; i < idx.size(); ++i) sum += idx[i];
    if (idx[0] == sum) t.at(idx) = S(1);
  } while (next_index(dims, idx));
  return t;
}

template <class S>
struct NodeFamily {
  std::vector<S> nodes;  // pairwise distinct

  explicit NodeFamily(std::vector<S> ns) : nodes(std::move(ns)) {
    for (size_t i = 0; i < nodes.size(); ++i)
      for (size_t j = i + 1; j < nodes.size(); ++j)
        if (nodes[i] == nodes[j]) throw precondition_error("node family must be pairwise distinct");
  }
};

// A = sum_s e_s^(0) (x) prod_j (sum_i t_s^i e_i^(j)): the identity pushed
// through the slot-0 Vandermonde change of basis. Every coordinate dual
// e_s on V0 is a strong jumping covector of the result.
template <class S>
BoundaryTensor<S> make_vandermonde(const Format& f, const NodeFamily<S>& nodes) {
  if (!f.boundary()) throw precondition_error("make_vandermonde: boundary format required");
  if (static_cast<int>(nodes.nodes.size()) != f.k[0] + 1)
    throw precondition_error("make_vandermonde: need k0+1 nodes");
  BoundaryTensor<S> t(f);
  const auto dims = f.dims();
  std::vector<int> idx(dims.size(), 0);
  do {
    int sum = 0;
    for (size_t i = 1; i < idx.size(); ++i) sum += idx[i];
    t.at(idx) = scalar_pow(nodes.nodes[idx[0]], sum);
  } while (next_index(dims, idx));
  return t;
}

// Slot-0 group element carrying build_identity onto make_vandermonde:
// V[s][j] = t_s^j, identity on the other slots.
template <class S>
GroupElement<S> vandermonde_group_element(const Format& f, const NodeFamily<S>& nodes) {
  GroupElement<S> g = GroupElement<S>::identity(f);
  int n = f.dim(0);
  Matrix<S> v(n, n);
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j) v(s, j) = scalar_pow(nodes.nodes[s], j);
  g.g[0] = v;
  return g;
}

}  // namespace bft
