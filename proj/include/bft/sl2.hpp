#pragma once

#include <random>
#include <vector>

#include "bft/linalg.hpp"
#include "bft/matrix.hpp"
#include "bft/tensor.hpp"

// SL(2) symmetric powers. Basis convention for S^k U throughout: the
// monomials e_m = u0^(k-m) u1^m, m = 0..k. Slot 0 of a boundary tensor
// carries the plain representation, slots >= 1 the inverse-transpose twist,
// so the identity tensor is fixed exactly (see identity.hpp).

namespace bft {

template <class S>
S scalar_pow(S base, int e) {
  S r(1);
  while (e-- > 0) r *= base;
  return r;
}

inline Integer binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Integer r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Induced matrix of g on S^k U: column m holds the coefficients of
// (g u0)^(k-m) (g u1)^m in the monomial basis.
template <class S>
Matrix<S> sym_power_rep(const Matrix<S>& g, int k) {
  if (g.rows() != 2 || g.cols() != 2) throw precondition_error("sym_power_rep: need a 2x2 matrix");
  if (!matrix_invertible(g)) throw precondition_error("sym_power_rep: singular matrix");
  const S a = g(0, 0), c = g(1, 0);  // g u0 = a u0 + c u1
  const S b = g(0, 1), d = g(1, 1);  // g u1 = b u0 + d u1
  Matrix<S> rho(k + 1, k + 1);
  for (int m = 0; m <= k; ++m) {
    // (a u0 + c u1)^(k-m) convolved with (b u0 + d u1)^m
    std::vector<S> first(k - m + 1), second(m + 1);
    for (int i = 0; i <= k - m; ++i)
      first[i] = S(static_cast<long long>(binomial(k - m, i))) * scalar_pow(a, k - m - i) *
                 scalar_pow(c, i);
    for (int j = 0; j <= m; ++j)
      second[j] = S(static_cast<long long>(binomial(m, j))) * scalar_pow(b, m - j) *
                  scalar_pow(d, j);
    for (int i = 0; i <= k - m; ++i)
      for (int j = 0; j <= m; ++j) rho(i + j, m) += first[i] * second[j];
  }
  return rho;
}

// Induced action of a 2x2 Lie algebra element on S^k U.
template <class S>
Matrix<S> sym_power_derived(const Matrix<S>& x, int k) {
  if (x.rows() != 2 || x.cols() != 2)
    throw precondition_error("sym_power_derived: need a 2x2 matrix");
  const S al = x(0, 0), ga = x(1, 0), be = x(0, 1), de = x(1, 1);
  Matrix<S> d(k + 1, k + 1);
  for (int m = 0; m <= k; ++m) {
    if (m > 0) d(m - 1, m) += S(m) * be;
    d(m, m) += S(k - m) * al + S(m) * de;
    if (m < k) d(m + 1, m) += S(k - m) * ga;
  }
  return d;
}

inline RMatrix sl2_h() { return RMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(-1)}); }
inline RMatrix sl2_e() { return RMatrix(2, 2, {Rational(0), Rational(1), Rational(0), Rational(0)}); }
inline RMatrix sl2_f() { return RMatrix(2, 2, {Rational(0), Rational(0), Rational(1), Rational(0)}); }

// sigma(g) = (rho_{k0}(g), rho_{k1}(g)^{-T}, ..., rho_{kp}(g)^{-T}).
template <class S>
GroupElement<S> embed(const Matrix<S>& g, const Format& f) {
  if (g.rows() != 2 || g.cols() != 2) throw precondition_error("embed: need a 2x2 matrix");
  if constexpr (is_rational_v<S>) {
    if (det(g) != 1) throw precondition_error("embed: det g must be exactly 1");
  } else {
    S d = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (abs_value(d - S(1)) > 1e-9) throw precondition_error("embed: det g must be 1");
  }
  GroupElement<S> sigma;
  sigma.special = true;
  sigma.g.push_back(sym_power_rep(g, f.k[0]));
  for (int j = 1; j < f.num_slots(); ++j) {
    Matrix<S> rho = sym_power_rep(g, f.k[j]);
    if constexpr (is_rational_v<S>) {
      auto inv = inverse(rho);
      if (!inv) throw verification_error("embed: symmetric power unexpectedly singular");
      sigma.g.push_back(inv->transposed());
    } else {
      sigma.g.push_back(bft::inverse(rho).transposed());
    }
  }
  return sigma;
}

// Infinitesimal version of embed: (d rho_{k0}(x), -d rho_{k1}(x)^T, ...).
template <class S>
std::vector<Matrix<S>> embed_derived(const Matrix<S>& x, const Format& f) {
  std::vector<Matrix<S>> xs;
  xs.push_back(sym_power_derived(x, f.k[0]));
  for (int j = 1; j < f.num_slots(); ++j)
    xs.push_back(-sym_power_derived(x, f.k[j]).transposed());
  return xs;
}

// Random element of SL(2, Q) as a product of elementary shears: exact
// determinant one by construction.
inline RMatrix random_sl2(std::mt19937_64& rng, int shears = 4) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  RMatrix m = RMatrix::identity(2);
  for (int i = 0; i < shears; ++i) {
    RMatrix s = RMatrix::identity(2);
    if (i % 2 == 0)
      s(0, 1) = coeff(rng);
    else
      s(1, 0) = coeff(rng);
    m = m * s;
  }
  return m;
}

// Random element of SL(n, Q) as a product of transvections.
inline RMatrix random_unimodular(int n, std::mt19937_64& rng, int steps = 6) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> pick(0, n - 1);
  RMatrix m = RMatrix::identity(n);
  for (int i = 0; i < steps; ++i) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    RMatrix t = RMatrix::identity(n);
    t(a, b) = coeff(rng);
    m = m * t;
  }
  return m;
}

// Random unimodular slot-wise group element for a format.
inline GroupElement<Rational> random_group_element(const Format& f, std::mt19937_64& rng) {
  GroupElement<Rational> g;
  g.special = true;
  for (int i = 0; i < f.num_slots(); ++i) g.g.push_back(random_unimodular(f.dim(i), rng));
  return g;
}

}  // namespace bft
