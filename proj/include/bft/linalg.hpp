#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "bft/matrix.hpp"
#include "bft/rational.hpp"

// Exact linear algebra over the rationals. Everything here returns exact
// results; the floating-point counterparts live in numeric.hpp.

namespace bft {

using RMatrix = Matrix<Rational>;
using RVector = Vector<Rational>;

// Reduced row echelon form in place. Returns the pivot column of each
// pivot row, in order.
inline std::vector<int> rref(RMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    Rational inv = Rational(1) / m(row, col);
    for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (int c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(RMatrix m) { return static_cast<int>(rref(m).size()); }

// Exact kernel basis; vectors indexed by the free columns of the RREF.
inline std::vector<RVector> nullspace(const RMatrix& m) {
  RMatrix r = m;
  std::vector<int> pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<RVector> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RVector v(m.cols(), Rational(0));
    v[free] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(static_cast<int>(i), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<RMatrix> inverse(const RMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  int n = m.rows();
  RMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  if (static_cast<int>(rref(aug).size()) != n) return std::nullopt;
  RMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// One solution of m x = b, if the system is consistent.
inline std::optional<RVector> solve(const RMatrix& m, const RVector& b) {
  RMatrix aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  RVector x(m.cols(), Rational(0));
  for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(static_cast<int>(i), m.cols());
  return x;
}

// Fraction-free (Bareiss) determinant: rows are cleared of denominators
// first so the elimination runs over integers.
inline Rational det(const RMatrix& m) {
  if (m.rows() != m.cols()) throw precondition_error("det: square matrix required");
  int n = m.rows();
  if (n == 0) return Rational(1);
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  Rational scale(1);
  for (int i = 0; i < n; ++i) {
    Integer lcm = 1;
    for (int j = 0; j < n; ++j) {
      Integer d = denominator(m(i, j));
      lcm = boost::multiprecision::lcm(lcm, d);
    }
    scale /= Rational(lcm);
    for (int j = 0; j < n; ++j) {
      const Rational& q = m(i, j);
      a[i][j] = numerator(q) * (lcm / denominator(q));
    }
  }
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) { piv = r; break; }
      if (piv < 0) return Rational(0);
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return scale * Rational(sign * a[n - 1][n - 1]);
}

// --- dense polynomial helpers (coefficients ascending) -------------------

using RPoly = std::vector<Rational>;

inline void poly_trim(RPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline int poly_deg(const RPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

inline RPoly poly_mul(const RPoly& a, const RPoly& b) {
  RPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  poly_trim(r);
  return r;
}

inline Rational poly_eval(const RPoly& p, const Rational& x) {
  Rational r(0);
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) r = r * x + p[i];
  return r;
}

inline RPoly poly_derivative(const RPoly& p) {
  if (p.size() <= 1) return {Rational(0)};
  RPoly r(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Rational(static_cast<int>(i));
  return r;
}

inline RPoly poly_monic(RPoly p) {
  int d = poly_deg(p);
  if (d < 0) return p;
  Rational lead = p[d];
  for (auto& c : p) c /= lead;
  poly_trim(p);
  return p;
}

// Remainder of a modulo b.
inline RPoly poly_mod(RPoly a, const RPoly& b) {
  int db = poly_deg(b);
  if (db < 0) throw precondition_error("poly_mod: division by zero polynomial");
  for (int da = poly_deg(a); da >= db; da = poly_deg(a)) {
    Rational f = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
    a[da] = 0;  // force exact cancellation of the leading term
  }
  poly_trim(a);
  return a;
}

inline RPoly poly_gcd(RPoly a, RPoly b) {
  poly_trim(a);
  poly_trim(b);
  while (poly_deg(b) >= 0) {
    RPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

// --- matrix polynomials ---------------------------------------------------

// Characteristic polynomial det(xI - m), exact, via interpolation at
// x = 0..n (n+1 Bareiss determinants).
inline RPoly charpoly(const RMatrix& m) {
  if (m.rows() != m.cols()) throw precondition_error("charpoly: square matrix required");
  int n = m.rows();
  if (n == 0) return {Rational(1)};
  std::vector<Rational> xs(n + 1), ys(n + 1);
  for (int t = 0; t <= n; ++t) {
    RMatrix shifted = -m;
    for (int i = 0; i < n; ++i) shifted(i, i) += Rational(t);
    xs[t] = Rational(t);
    ys[t] = det(shifted);
  }
  // Lagrange interpolation.
  RPoly result{Rational(0)};
  result.resize(n + 1, Rational(0));
  for (int i = 0; i <= n; ++i) {
    RPoly term{Rational(1)};
    Rational denom(1);
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      term = poly_mul(term, RPoly{-xs[j], Rational(1)});
      denom *= xs[i] - xs[j];
    }
    Rational f = ys[i] / denom;
    term.resize(n + 1, Rational(0));
    for (int c = 0; c <= n; ++c) result[c] += f * term[c];
  }
  poly_trim(result);
  return result;
}

// Monic minimal polynomial: least-degree dependency among I, m, m^2, ...
inline RPoly minimal_polynomial(const RMatrix& m) {
  if (m.rows() != m.cols()) throw precondition_error("minimal_polynomial: square matrix required");
  int n = m.rows();
  std::vector<RMatrix> powers;
  powers.push_back(RMatrix::identity(n));
  for (int d = 1;; ++d) {
    powers.push_back(powers.back() * m);
    // Does m^d lie in the span of lower powers?
    RMatrix sys(n * n, d);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sys(i * n + j, k) = powers[k](i, j);
    RVector rhs(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rhs[i * n + j] = powers[d](i, j);
    if (auto x = solve(sys, rhs)) {
      RPoly mu(d + 1, Rational(0));
      mu[d] = 1;
      for (int k = 0; k < d; ++k) mu[k] = -(*x)[k];
      return mu;
    }
  }
}

// Semisimple over C <=> the minimal polynomial is squarefree.
inline bool is_semisimple(const RMatrix& m) {
  RPoly mu = minimal_polynomial(m);
  RPoly g = poly_gcd(mu, poly_derivative(mu));
  return poly_deg(g) == 0;
}

inline bool is_nilpotent(const RMatrix& m) {
  if (m.rows() != m.cols()) throw precondition_error("is_nilpotent: square matrix required");
  RMatrix p = m;
  for (int i = 1; i < m.rows(); ++i) {
    if (p.is_zero()) return true;
    p = p * m;
  }
  return p.is_zero();
}

// Is v in the span of basis? If so, optionally return the coefficients.
inline std::optional<RVector> coordinates_in_span(const std::vector<RVector>& basis,
                                                  const RVector& v) {
  if (basis.empty()) {
    if (is_zero(v)) return RVector{};
    return std::nullopt;
  }
  RMatrix sys(static_cast<int>(v.size()), static_cast<int>(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k)
    for (size_t i = 0; i < v.size(); ++i) sys(static_cast<int>(i), static_cast<int>(k)) = basis[k][i];
  return solve(sys, v);
}

}  // namespace bft
