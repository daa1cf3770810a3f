#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <vector>

#include "bft/matrix.hpp"
#include "bft/rational.hpp"

// Floating-point backend: thin wrappers around Eigen for the complex<double>
// side of the library (SVD, numerical kernels, eigenproblems).

namespace bft {

using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e) {
  CMatrix m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline Eigen::VectorXcd to_eigen(const CVector& v) {
  Eigen::VectorXcd e(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) e(static_cast<int>(i)) = v[i];
  return e;
}

inline CVector from_eigen_vec(const Eigen::VectorXcd& e) {
  CVector v(static_cast<size_t>(e.size()));
  for (int i = 0; i < e.size(); ++i) v[i] = e(i);
  return v;
}

// Singular values, descending.
inline std::vector<double> singular_values(const CMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  std::vector<double> s(svd.singularValues().data(),
                        svd.singularValues().data() + svd.singularValues().size());
  return s;
}

struct SingularTriple {
  double sigma = 0.0;
  CVector left;
  CVector right;
};

inline SingularTriple svd_smallest(const CMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  int k = static_cast<int>(svd.singularValues().size()) - 1;
  SingularTriple t;
  t.sigma = svd.singularValues()(k);
  t.left = from_eigen_vec(svd.matrixU().col(k));
  t.right = from_eigen_vec(svd.matrixV().col(k));
  return t;
}

inline SingularTriple svd_largest(const CMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  SingularTriple t;
  t.sigma = svd.singularValues()(0);
  t.left = from_eigen_vec(svd.matrixU().col(0));
  t.right = from_eigen_vec(svd.matrixV().col(0));
  return t;
}

// Numerical rank with relative tolerance (default 1e-8).
inline int numerical_rank(const CMatrix& m, double rel_tol = 1e-8) {
  auto s = singular_values(m);
  if (s.empty() || s[0] == 0.0) return 0;
  int r = 0;
  for (double v : s)
    if (v > rel_tol * s[0]) ++r;
  return r;
}

// Kernel basis from the SVD; residuals are bounded by rel_tol * ||m||.
inline std::vector<CVector> nullspace(const CMatrix& m, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double top = s.size() ? s(0) : 0.0;
  std::vector<CVector> basis;
  int n = m.cols();
  int nsv = static_cast<int>(s.size());
  for (int k = 0; k < n; ++k) {
    double sigma = k < nsv ? s(k) : 0.0;
    if (top == 0.0 || sigma <= rel_tol * top)
      basis.push_back(from_eigen_vec(svd.matrixV().col(k)));
  }
  return basis;
}

// Unit eigenvector of a Hermitian matrix for its smallest eigenvalue.
inline CVector hermitian_smallest_eigvec(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
  return from_eigen_vec(es.eigenvectors().col(0));
}

inline CMatrix inverse(const CMatrix& m) {
  return from_eigen(to_eigen(m).inverse());
}

inline std::vector<Complex> eigenvalues(const CMatrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
  std::vector<Complex> ev(static_cast<size_t>(es.eigenvalues().size()));
  for (int i = 0; i < es.eigenvalues().size(); ++i) ev[i] = es.eigenvalues()(i);
  return ev;
}

// Roots of a dense polynomial (ascending coefficients) via the companion
// matrix. Leading zeros are stripped.
inline std::vector<Complex> poly_roots(std::vector<Complex> coeffs) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -coeffs[i] / coeffs[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

inline double norm2(const CVector& v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline void normalize(CVector& v) {
  double n = norm2(v);
  if (n > 0)
    for (auto& z : v) z /= n;
}

// Hermitian inner product <a, b> = sum a_i conj(b_i).
inline Complex hdot(const CVector& a, const CVector& b) {
  Complex s(0, 0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

// Chordal projective distance: sin of the angle between the lines spanned
// by a and b.
inline double projective_distance(const CVector& a, const CVector& b) {
  double na = norm2(a), nb = norm2(b);
  if (na == 0 || nb == 0) return 1.0;
  double c = std::abs(hdot(a, b)) / (na * nb);
  double s2 = 1.0 - c * c;
  return s2 <= 0 ? 0.0 : std::sqrt(s2);
}

inline CVector random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(static_cast<size_t>(n));
  for (auto& z : v) z = Complex(g(rng), g(rng));
  normalize(v);
  return v;
}

}  // namespace bft
