#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bft/identity.hpp"
#include "bft/stabilizer.hpp"

// Canonicalization of identity-orbit tensors: given A with a 3-dimensional
// stabilizer algebra, reconstruct g with act(g, A) equal to the identity
// tensor. The primary route reconstructs an sl(2)-triple inside the kernel
// and intertwines each slot with the model symmetric-power operators; it is
// exact whenever a suitable rational normalization exists, and falls back to
// the same construction in floating point otherwise. The final equality is
// always verified before the result is returned.

namespace bft {

struct CanonicalizationResult {
  bool ok = false;
  bool exact = false;
  std::optional<GroupElement<Rational>> g_exact;
  std::optional<GroupElement<Complex>> g_float;
  std::string note;
};

namespace detail {

inline StabGenerator combine(const std::vector<StabGenerator>& gens, const RVector& c) {
  StabGenerator r;
  for (size_t slot = 0; slot < gens[0].X.size(); ++slot) {
    RMatrix m(gens[0].X[slot].rows(), gens[0].X[slot].cols());
    for (size_t k = 0; k < gens.size(); ++k)
      if (c[k] != 0) m = m + gens[k].X[slot] * c[k];
    r.X.push_back(m);
  }
  return r;
}

struct ExactTriple {
  StabGenerator h, e, f;
};

inline std::optional<RVector> span_coordinates(const std::vector<StabGenerator>& gens,
                                               const StabGenerator& z) {
  std::vector<RVector> span;
  for (const auto& g : gens) span.push_back(stack_generator(g));
  return coordinates_in_span(span, stack_generator(z));
}

// Matrix of ad(z) on the kernel in the generator coordinates.
inline std::optional<RMatrix> ad_matrix(const std::vector<StabGenerator>& gens,
                                        const StabGenerator& z) {
  const int n = static_cast<int>(gens.size());
  RMatrix ad(n, n);
  for (int k = 0; k < n; ++k) {
    auto coords = span_coordinates(gens, bracket(z, gens[k]));
    if (!coords) return std::nullopt;
    for (int r = 0; r < n; ++r) ad(r, k) = (*coords)[r];
  }
  return ad;
}

inline bool generator_is_zero(const StabGenerator& g) {
  for (const auto& m : g.X)
    if (!m.is_zero()) return false;
  return true;
}

// Complete a normalized semisimple element to a triple: eigenvectors of
// ad(h) for the eigenvalues +-2, with f rescaled so that [e, f] = h.
inline std::optional<ExactTriple> complete_from_h(const std::vector<StabGenerator>& gens,
                                                  const StabGenerator& h) {
  auto ad = ad_matrix(gens, h);
  if (!ad) return std::nullopt;
  auto eig_coords = [&](const Rational& lambda) -> std::optional<RVector> {
    RMatrix shifted = *ad;
    for (int i = 0; i < shifted.rows(); ++i) shifted(i, i) -= lambda;
    auto ns = nullspace(shifted);
    if (ns.size() != 1) return std::nullopt;
    return ns[0];
  };
  auto ec = eig_coords(Rational(2));
  auto fc = eig_coords(Rational(-2));
  if (!ec || !fc) return std::nullopt;
  StabGenerator e = combine(gens, *ec);
  StabGenerator f = combine(gens, *fc);
  // [e, f] = c h for a nonzero scalar c; rescale f.
  auto coords = span_coordinates(gens, bracket(e, f));
  auto hc = span_coordinates(gens, h);
  if (!coords || !hc) return std::nullopt;
  Rational c(0);
  bool found = false;
  for (size_t i = 0; i < hc->size(); ++i) {
    if ((*hc)[i] != 0) {
      c = (*coords)[i] / (*hc)[i];
      found = true;
      break;
    }
  }
  if (!found || c == 0) return std::nullopt;
  for (size_t i = 0; i < hc->size(); ++i)
    if ((*coords)[i] != c * (*hc)[i]) return std::nullopt;
  StabGenerator f_scaled = combine(gens, scaled(*fc, Rational(1) / c));
  ExactTriple t{h, e, f_scaled};
  // verify the relations exactly
  auto expect = [&](const StabGenerator& lhs, const StabGenerator& rhs, const Rational& s) {
    auto l = stack_generator(lhs);
    auto r = scaled(stack_generator(rhs), s);
    return l == r;
  };
  if (!expect(bracket(t.h, t.e), t.e, Rational(2))) return std::nullopt;
  if (!expect(bracket(t.h, t.f), t.f, Rational(-2))) return std::nullopt;
  if (!expect(bracket(t.e, t.f), t.h, Rational(1))) return std::nullopt;
  return t;
}

// Jacobson-Morozov over the kernel: complete a nonzero nilpotent e to a
// triple by solving the linear conditions [h, e] = 2e, [h, f] = -2f,
// [e, f] = h inside the kernel.
inline std::optional<ExactTriple> complete_from_e(const std::vector<StabGenerator>& gens,
                                                  const StabGenerator& e) {
  const int n = static_cast<int>(gens.size());
  RVector se = stack_generator(e);
  const int len = static_cast<int>(se.size());
  // h: sum h_k [g_k, e] = 2 e
  RMatrix m(len, n);
  for (int k = 0; k < n; ++k) {
    auto col = stack_generator(bracket(gens[k], e));
    for (int r = 0; r < len; ++r) m(r, k) = col[r];
  }
  auto hc = solve(m, scaled(se, Rational(2)));
  if (!hc) return std::nullopt;
  StabGenerator h = combine(gens, *hc);
  RVector sh = stack_generator(h);
  // f: [h, f] + 2f = 0 and [e, f] = h, both linear in the coordinates of f
  RMatrix big(2 * len, n);
  RVector rhs(2 * len, Rational(0));
  for (int k = 0; k < n; ++k) {
    auto c1 = stack_generator(bracket(h, gens[k]));
    auto g1 = stack_generator(gens[k]);
    for (int r = 0; r < len; ++r) big(r, k) = c1[r] + Rational(2) * g1[r];
    auto c2 = stack_generator(bracket(e, gens[k]));
    for (int r = 0; r < len; ++r) big(len + r, k) = c2[r];
  }
  for (int r = 0; r < len; ++r) rhs[len + r] = sh[r];
  auto fc = solve(big, rhs);
  if (!fc) return std::nullopt;
  StabGenerator f = combine(gens, *fc);
  if (generator_is_zero(f)) return std::nullopt;
  return ExactTriple{h, e, f};
}

// Search for an sl(2)-triple in the kernel with rational structure: small
// integer combinations first, then seeded random ones.
inline std::optional<ExactTriple> find_exact_triple(const std::vector<StabGenerator>& gens,
                                                    const Format& f, std::uint64_t seed) {
  Rational w0(0);
  for (int m = 0; m <= f.k[0]; ++m) w0 += Rational(f.k[0] - 2 * m) * (f.k[0] - 2 * m);
  std::vector<RVector> candidates;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        candidates.push_back(RVector{Rational(a), Rational(b), Rational(c)});
      }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-30, 30);
  for (int t = 0; t < 256; ++t)
    candidates.push_back(RVector{Rational(d(rng)), Rational(d(rng)), Rational(d(rng))});

  for (const auto& coeffs : candidates) {
    StabGenerator y = combine(gens, coeffs);
    if (generator_is_zero(y)) continue;
    Rational mu = (y.X[0] * y.X[0]).trace() / w0;
    if (mu == 0) {
      bool nil = true;
      for (const auto& m : y.X) nil &= is_nilpotent(m);
      if (!nil) continue;
      if (auto triple = complete_from_e(gens, y)) return triple;
      continue;
    }
    auto s = rational_sqrt(mu);
    if (!s) continue;
    StabGenerator h = combine(gens, scaled(coeffs, Rational(1) / *s));
    if (auto triple = complete_from_h(gens, h)) return triple;
  }
  return std::nullopt;
}

// Unique-up-to-scale intertwiner g with g X = X_model g for the three
// operators; exact. Returns an invertible solution or nothing.
inline std::optional<RMatrix> intertwiner(const std::vector<RMatrix>& ours,
                                          const std::vector<RMatrix>& model) {
  const int d = ours[0].rows();
  RMatrix sys(3 * d * d, d * d);
  int row = 0;
  for (int which = 0; which < 3; ++which) {
    const RMatrix& x = ours[which];
    const RMatrix& xm = model[which];
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        for (int k = 0; k < d; ++k) {
          sys(row, r * d + k) += x(k, c);   // g(r,k) x(k,c)
          sys(row, k * d + c) -= xm(r, k);  // - xm(r,k) g(k,c)
        }
        ++row;
      }
  }
  auto ns = nullspace(sys);
  if (ns.size() != 1) return std::nullopt;
  RMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = ns[0][r * d + c];
  if (det(g) == 0) return std::nullopt;
  return g;
}

}  // namespace detail

// Exact route: kernel triple -> per-slot intertwiners -> scale fix.
inline std::optional<GroupElement<Rational>> canonicalize_exact(
    const BoundaryTensor<Rational>& a, const std::vector<StabGenerator>& gens,
    std::uint64_t seed) {
  const Format& f = a.format;
  auto triple = detail::find_exact_triple(gens, f, seed);
  if (!triple) return std::nullopt;
  auto model_h = embed_derived(sl2_h(), f);
  auto model_e = embed_derived(sl2_e(), f);
  auto model_f = embed_derived(sl2_f(), f);
  GroupElement<Rational> g;
  for (int i = 0; i < f.num_slots(); ++i) {
    auto gi = detail::intertwiner({triple->h.X[i], triple->e.X[i], triple->f.X[i]},
                                  {model_h[i], model_e[i], model_f[i]});
    if (!gi) return std::nullopt;
    g.g.push_back(*gi);
  }
  auto j = act(g, a);
  auto identity = build_identity<Rational>(f);
  // j must be a scalar multiple of the identity tensor
  Rational c(0);
  for (size_t i = 0; i < identity.entries.size(); ++i) {
    if (identity.entries[i] != 0) {
      c = j.entries[i];
      break;
    }
  }
  if (c == 0) return std::nullopt;
  for (size_t i = 0; i < identity.entries.size(); ++i)
    if (j.entries[i] != c * identity.entries[i]) return std::nullopt;
  g.g[0] = g.g[0] * (Rational(1) / c);
  if (!(act(g, a) == identity)) return std::nullopt;  // mandatory final verification
  return g;
}

namespace detail {

inline CVector stack_complex(const std::vector<CMatrix>& xs) {
  CVector v;
  for (const auto& m : xs)
    for (const auto& e : m.data()) v.push_back(e);
  return v;
}

inline std::vector<CMatrix> combine_c(const std::vector<std::vector<CMatrix>>& gens,
                                      const CVector& c) {
  std::vector<CMatrix> r;
  for (size_t slot = 0; slot < gens[0].size(); ++slot) {
    CMatrix m(gens[0][slot].rows(), gens[0][slot].cols());
    for (size_t k = 0; k < gens.size(); ++k) m = m + gens[k][slot] * c[k];
    r.push_back(m);
  }
  return r;
}

inline std::vector<CMatrix> bracket_c(const std::vector<CMatrix>& a,
                                      const std::vector<CMatrix>& b) {
  std::vector<CMatrix> r;
  for (size_t i = 0; i < a.size(); ++i) r.push_back(bracket(a[i], b[i]));
  return r;
}

}  // namespace detail

// Floating-point fallback of the same construction; verified to the given
// relative tolerance.
inline std::optional<GroupElement<Complex>> canonicalize_float(const BoundaryTensor<Complex>& a,
                                                               std::uint64_t seed,
                                                               double tol = 1e-8) {
  const Format& f = a.format;
  const int slots = f.num_slots();
  // kernel of the linearized action, numerically
  std::vector<std::vector<CMatrix>> bases(slots);
  std::vector<int> offset(slots + 1, 0);
  for (int i = 0; i < slots; ++i) {
    for (const auto& b : sl_basis(f.dim(i))) bases[i].push_back(to_complex_matrix(b));
    offset[i + 1] = offset[i] + static_cast<int>(bases[i].size());
  }
  const int unknowns = offset[slots];
  const int rows = static_cast<int>(a.entries.size());
  CMatrix k(rows, unknowns);
  auto mode_mul_c = [&](const CMatrix& m, int slot) {
    BoundaryTensor<Complex> t = a;
    return mode_multiply(m, t, slot);
  };
  for (int i = 0; i < slots; ++i)
    for (size_t b = 0; b < bases[i].size(); ++b) {
      auto col = mode_mul_c(bases[i][b], i);
      for (int r = 0; r < rows; ++r) k(r, offset[i] + static_cast<int>(b)) = col.entries[r];
    }
  auto kernel = nullspace(k, 1e-8);
  if (kernel.size() != 3) return std::nullopt;
  std::vector<std::vector<CMatrix>> gens;
  for (const auto& v : kernel) {
    std::vector<CMatrix> g;
    for (int i = 0; i < slots; ++i) {
      CMatrix x(f.dim(i), f.dim(i));
      for (size_t b = 0; b < bases[i].size(); ++b)
        x = x + bases[i][b] * v[offset[i] + static_cast<int>(b)];
      g.push_back(x);
    }
    gens.push_back(std::move(g));
  }

  double w0 = 0;
  for (int m = 0; m <= f.k[0]; ++m) w0 += double(f.k[0] - 2 * m) * (f.k[0] - 2 * m);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 24; ++attempt) {
    CVector coeffs(3);
    for (auto& z : coeffs) z = Complex(gauss(rng), gauss(rng));
    auto y = detail::combine_c(gens, coeffs);
    Complex mu = (y[0] * y[0]).trace() / Complex(w0);
    if (std::abs(mu) < 1e-10) continue;
    Complex s = std::sqrt(mu);
    CVector hc = coeffs;
    for (auto& z : hc) z /= s;
    auto h = detail::combine_c(gens, hc);

    // ad(h) on the kernel via least squares in the generator coordinates
    CMatrix span(static_cast<int>(detail::stack_complex(gens[0]).size()), 3);
    for (int c = 0; c < 3; ++c) {
      auto sc = detail::stack_complex(gens[c]);
      for (size_t r = 0; r < sc.size(); ++r) span(static_cast<int>(r), c) = sc[r];
    }
    Eigen::MatrixXcd span_e = to_eigen(span);
    auto coords_of = [&](const std::vector<CMatrix>& z) {
      Eigen::VectorXcd rhs = to_eigen(detail::stack_complex(z));
      Eigen::VectorXcd sol = span_e.colPivHouseholderQr().solve(rhs);
      return sol;
    };
    Eigen::MatrixXcd ad(3, 3);
    for (int c = 0; c < 3; ++c) ad.col(c) = coords_of(detail::bracket_c(h, gens[c]));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ad);
    int ie = -1, iff = -1;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(es.eigenvalues()(i) - Complex(2, 0)) < 1e-6) ie = i;
      if (std::abs(es.eigenvalues()(i) + Complex(2, 0)) < 1e-6) iff = i;
    }
    if (ie < 0 || iff < 0) continue;
    auto e = detail::combine_c(gens, from_eigen_vec(es.eigenvectors().col(ie)));
    auto fl = detail::combine_c(gens, from_eigen_vec(es.eigenvectors().col(iff)));
    // scale f so that [e, f] = h
    auto br = detail::stack_complex(detail::bracket_c(e, fl));
    auto sh = detail::stack_complex(h);
    Complex num(0), den(0);
    for (size_t i = 0; i < sh.size(); ++i) {
      num += br[i] * std::conj(sh[i]);
      den += sh[i] * std::conj(sh[i]);
    }
    Complex c = num / den;
    if (std::abs(c) < 1e-12) continue;
    for (auto& m : fl) m = m * (Complex(1) / c);

    auto model_h = embed_derived(to_complex_matrix(sl2_h()), f);
    auto model_e = embed_derived(to_complex_matrix(sl2_e()), f);
    auto model_f = embed_derived(to_complex_matrix(sl2_f()), f);
    GroupElement<Complex> g;
    bool good = true;
    for (int i = 0; i < slots && good; ++i) {
      const int d = f.dim(i);
      CMatrix sys(3 * d * d, d * d);
      int row = 0;
      std::vector<const CMatrix*> ours{&h[i], &e[i], &fl[i]};
      std::vector<const CMatrix*> model{&model_h[i], &model_e[i], &model_f[i]};
      for (int which = 0; which < 3; ++which) {
        for (int r = 0; r < d; ++r)
          for (int cc = 0; cc < d; ++cc) {
            for (int kk = 0; kk < d; ++kk) {
              sys(row, r * d + kk) += (*ours[which])(kk, cc);
              sys(row, kk * d + cc) -= (*model[which])(r, kk);
            }
            ++row;
          }
      }
      auto sol = svd_smallest(sys);
      CMatrix gi(d, d);
      for (int r = 0; r < d; ++r)
        for (int cc = 0; cc < d; ++cc) gi(r, cc) = sol.right[r * d + cc];
      auto sv = singular_values(gi);
      if (sv.back() < 1e-8 * sv.front()) { good = false; break; }
      g.g.push_back(gi);
    }
    if (!good) continue;
    auto j = act(g, a);
    auto identity = to_complex_tensor(build_identity<Rational>(f));
    Complex num2(0), den2(0);
    for (size_t i = 0; i < j.entries.size(); ++i) {
      num2 += j.entries[i] * std::conj(identity.entries[i]);
      den2 += identity.entries[i] * std::conj(identity.entries[i]);
    }
    Complex scale = num2 / den2;
    if (std::abs(scale) < 1e-14) continue;
    double err = 0, ref = 0;
    for (size_t i = 0; i < j.entries.size(); ++i) {
      err += std::norm(j.entries[i] - scale * identity.entries[i]);
      ref += std::norm(scale * identity.entries[i]);
    }
    if (std::sqrt(err / ref) > tol) continue;
    g.g[0] = g.g[0] * (Complex(1) / scale);
    return g;
  }
  return std::nullopt;
}

// Public entry point: exact when achievable, floating otherwise; failure is
// reported, never silently accepted.
inline CanonicalizationResult canonicalize_identity(const BoundaryTensor<Rational>& a,
                                                    std::uint64_t seed = 12345) {
  auto gens = stab_algebra(a);
  if (gens.size() != 3)
    throw precondition_error("canonicalize_identity: stabilizer dimension is not 3");
  CanonicalizationResult res;
  if (auto g = canonicalize_exact(a, gens, seed)) {
    res.ok = true;
    res.exact = true;
    res.g_exact = g;
    res.note = "exact";
    return res;
  }
  if (auto g = canonicalize_float(to_complex_tensor(a), seed)) {
    res.ok = true;
    res.exact = false;
    res.g_float = g;
    res.note = "floating-point route, verified to 1e-8";
    return res;
  }
  res.note = "canonicalization unverified";
  return res;
}

}  // namespace bft
