#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eisen/errors.hpp"
#include "eisen/matrix.hpp"

namespace eisen {

/// Permutation matrix with rows e_1..e_{j-1}, e_{j+1}..e_mn, e_j (1-based j).
template <class T>
Matrix<T> weyl_rep(std::size_t j, std::size_t mn, const T& proto) {
  if (j < 1 || j > mn)
    fail(ErrorCode::IndexOutOfRange, "weyl_rep index " + std::to_string(j) + " outside 1.." + std::to_string(mn));
  Matrix<T> w(mn, mn, proto);
  std::size_t row = 0;
  for (std::size_t k = 0; k < mn; ++k)
    if (k != j - 1) w(row++, k) = one_like(proto);
  w(mn - 1, j - 1) = one_like(proto);
  return w;
}

/// Identity with row j replaced by (0_{j-1}, 1, v); v has length mn - j.
template <class T>
Matrix<T> unipotent_rep(std::size_t j, std::size_t mn, const std::vector<T>& v, const T& proto) {
  if (j < 1 || j > mn)
    fail(ErrorCode::IndexOutOfRange, "unipotent_rep index " + std::to_string(j) + " outside 1.." + std::to_string(mn));
  if (v.size() != mn - j)
    fail(ErrorCode::DimensionMismatch,
         "unipotent_rep needs a vector of length " + std::to_string(mn - j) + ", got " + std::to_string(v.size()));
  Matrix<T> u = Matrix<T>::identity(mn, proto);
  for (std::size_t k = 0; k < v.size(); ++k) u(j - 1, j + k) = v[k];
  return u;
}

/// The double-coset representative w_{(m-r)n} u_{(m-r)n}(b_r), where b_r
/// concatenates the unit rows e_{n-1}, ..., e_{n-r}.
template <class T>
Matrix<T> epsilon_rep(std::size_t m, std::size_t n, std::size_t r, const T& proto) {
  if (n < 1 || n > m) fail(ErrorCode::BadShape, "epsilon_rep needs 1 <= n <= m");
  if (r >= n)
    fail(ErrorCode::RankOutOfRange, "r = " + std::to_string(r) + " outside 0.." + std::to_string(n - 1));
  std::size_t mn = m * n, j = (m - r) * n;
  std::vector<T> b(r * n, zero_like(proto));
  for (std::size_t k = 1; k <= r; ++k) b[(k - 1) * n + (n - k - 1)] = one_like(proto);
  return weyl_rep(j, mn, proto) * unipotent_rep(j, mn, b, proto);
}

/// The anti-diagonal permutation w~_r; it is its own inverse.
template <class T>
Matrix<T> anti_diagonal(std::size_t r, const T& proto) {
  Matrix<T> w(r, r, proto);
  for (std::size_t i = 0; i < r; ++i) w(i, r - 1 - i) = one_like(proto);
  return w;
}

/// Y* = (Y^T)^{-1}.
template <class T>
Matrix<T> star(const Matrix<T>& y) {
  return y.transpose().inverse();
}

/// d* = w~^{-1} (d^T)^{-1} w~, the involution used for the stabilizers.
template <class T>
Matrix<T> twisted_star(const Matrix<T>& d) {
  Matrix<T> w = anti_diagonal(d.rows(), d.zero());
  return w * star(d) * w;
}

/// Block sizes of the standard parabolic P_{l,r} inside GL_{l+r}.
struct ParabolicShape {
  std::size_t ell = 0;
  std::size_t r = 0;

  std::size_t size() const { return ell + r; }

  template <class T>
  bool contains(const Matrix<T>& p) const {
    return p.rows() == size() && p.cols() == size() && p.is_upper_block_triangular(ell);
  }

  /// Levi components (A, B); an empty block is reported as a 1x1 identity.
  template <class T>
  std::pair<Matrix<T>, Matrix<T>> levi(const Matrix<T>& p) const {
    if (!contains(p))
      fail(ErrorCode::NotInParabolic,
           "matrix " + p.shape() + " is not in P_{" + std::to_string(ell) + "," + std::to_string(r) + "}");
    Matrix<T> a = ell ? p.block(0, 0, ell, ell) : Matrix<T>::identity(1, p.zero());
    Matrix<T> b = r ? p.block(ell, ell, r, r) : Matrix<T>::identity(1, p.zero());
    return {a, b};
  }
};

/// (det A)^r (det B)^{-l}, signed; absolute values are applied separately.
template <class T>
T modulus_character(const ParabolicShape& shape, const Matrix<T>& p) {
  auto [a, b] = shape.levi(p);
  T det_b = b.det();
  if (is_zero(det_b)) fail(ErrorCode::SingularBlock, "Levi block B is singular");
  return pow(a.det(), static_cast<long>(shape.r)) * pow(det_b, -static_cast<long>(shape.ell));
}

enum class AbsoluteValue { Archimedean, PAdic };

inline Rational absolute(const Rational& x, AbsoluteValue kind, long p = 0) {
  if (kind == AbsoluteValue::Archimedean) return abs(x);
  if (p < 2) fail(ErrorCode::DomainError, "p-adic absolute value needs a prime");
  return p_adic_abs(x, p);
}

/// |det A|^r |det B|^{-l} under the chosen absolute value.
inline Rational modulus_character_abs(const ParabolicShape& shape, const Matrix<Rational>& p, AbsoluteValue kind,
                                      long prime = 0) {
  return absolute(modulus_character(shape, p), kind, prime);
}

/// Outcome of comparing the two modulus characters linked by the
/// conjugation by e~ = epsilon_{n-1}.
struct ModulusCompatibility {
  bool conjugate_in_parabolic = false;
  bool alpha_is_one = false;
  Rational lhs;  ///< delta_{P_{mn-1,1}}(e~ t(p, D*) e~^{-1})
  Rational rhs;  ///< delta_{P_{m-n,n}}(p)
  bool ok() const { return conjugate_in_parabolic && alpha_is_one && lhs == rhs; }
};

inline ModulusCompatibility check_modulus_compatibility(std::size_t m, std::size_t n, const Matrix<Rational>& p) {
  if (n < 1 || n > m) fail(ErrorCode::BadShape, "need 1 <= n <= m");
  ParabolicShape levi_shape{m - n, n};
  if (!levi_shape.contains(p)) fail(ErrorCode::NotInParabolic, "p is not in P_{m-n,n}");
  Matrix<Rational> d = p.block(m - n, m - n, n, n);
  if (d.det() == 0) fail(ErrorCode::SingularBlock, "block D is singular");
  if (m > n && p.block(0, 0, m - n, m - n).det() == 0) fail(ErrorCode::SingularBlock, "block A is singular");

  Rational proto(0);
  Matrix<Rational> eps = epsilon_rep(m, n, n - 1, proto);
  Matrix<Rational> x = eps * kronecker(p, twisted_star(d)) * eps.inverse();

  ModulusCompatibility out;
  ParabolicShape mirabolic{m * n - 1, 1};
  out.conjugate_in_parabolic = mirabolic.contains(x);
  out.alpha_is_one = x(m * n - 1, m * n - 1) == 1;
  out.rhs = modulus_character_abs(levi_shape, p, AbsoluteValue::Archimedean);
  out.lhs = out.conjugate_in_parabolic ? modulus_character_abs(mirabolic, x, AbsoluteValue::Archimedean) : Rational(-1);
  return out;
}

inline bool verify_modulus_compatibility(std::size_t m, std::size_t n, const Matrix<Rational>& p) {
  return check_modulus_compatibility(m, n, p).ok();
}

}  // namespace eisen
