#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "eisen/errors.hpp"
#include "eisen/matrix.hpp"
#include "eisen/prime_field.hpp"
#include "eisen/qroot.hpp"
#include "eisen/rational.hpp"

namespace eisen {

/// Exponents (r_1, ..., r_{n-1}) of diag(p^{r_1}, ..., p^{r_{n-1}}, 1) with
/// r_1 >= ... >= r_{n-1} >= 0.
struct DominantCochar {
  std::vector<long> exps;

  bool is_dominant() const {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] < 0) return false;
      if (i > 0 && exps[i] > exps[i - 1]) return false;
    }
    return true;
  }
  void require_dominant() const {
    if (!is_dominant()) fail(ErrorCode::NonDominant, "exponents " + str() + " are not dominant");
  }
  long total() const { return std::accumulate(exps.begin(), exps.end(), 0L); }
  std::size_t rank() const { return exps.size() + 1; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < exps.size(); ++i) s += (i ? "," : "") + std::to_string(exps[i]);
    return s + ")";
  }

  friend bool operator==(const DominantCochar& a, const DominantCochar& b) { return a.exps == b.exps; }
  friend bool operator<(const DominantCochar& a, const DominantCochar& b) { return a.exps < b.exps; }
};

/// A * diag(p^{exps}) * B = input, with A and B in GL_n(Z_(p)).
struct CartanForm {
  Matrix<Rational> a;
  Matrix<Rational> b;
  std::vector<long> exps;  ///< nonincreasing

  Matrix<Rational> diagonal(long p) const {
    std::vector<Rational> d;
    for (long e : exps) d.push_back(pow(Rational(p), e));
    return Matrix<Rational>::diagonal(d);
  }
};

/// True when every entry lies in Z_(p) and the determinant is a p-adic unit.
inline bool is_p_unimodular(const Matrix<Rational>& m, long p) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_p_integral(m(i, j), p)) return false;
  Rational d = m.det();
  return d != 0 && valuation(d, p) == 0;
}

/// Elementary divisors over Z_(p). The pivot is an entry of least valuation
/// in the remaining block, first in row-major order.
inline CartanForm cartan_decompose(const Matrix<Rational>& g, long p) {
  if (!g.is_square()) fail(ErrorCode::DimensionMismatch, "Cartan decomposition needs a square matrix");
  if (p < 2 || !is_prime(p)) fail(ErrorCode::DomainError, "p must be prime");
  std::size_t n = g.rows();
  Matrix<Rational> m = g;
  Matrix<Rational> left = Matrix<Rational>::identity(n, Rational(0));   // left * g * right = diag
  Matrix<Rational> right = Matrix<Rational>::identity(n, Rational(0));
  std::vector<long> exps(n);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = n, pj = n;
    long best = 0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (m(i, j) == 0) continue;
        long v = valuation(m(i, j), p);
        if (pi == n || v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi == n) fail(ErrorCode::SingularMatrix, "Cartan decomposition of a singular matrix");

    m.swap_rows(pi, k);
    left.swap_rows(pi, k);
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(m(i, pj), m(i, k));
      std::swap(right(i, pj), right(i, k));
    }

    Rational pivot = m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / pivot;
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        left(i, j) -= f * left(k, j);
      }
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (m(k, j) == 0) continue;
      Rational f = m(k, j) / pivot;
      for (std::size_t i = 0; i < n; ++i) {
        m(i, j) -= f * m(i, k);
        right(i, j) -= f * right(i, k);
      }
    }
    // Divide out the unit part of the pivot.
    Rational unit = pivot / pow(Rational(p), best);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) /= unit;
      left(k, j) /= unit;
    }
    exps[k] = best;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return exps[x] > exps[y]; });
  Matrix<Rational> perm(n, n, Rational(0));
  std::vector<long> sorted(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm(i, order[i]) = 1;
    sorted[i] = exps[order[i]];
  }
  // g = left^{-1} diag right^{-1} = (left^{-1} perm^T)(perm diag perm^T)(perm right^{-1}).
  return {left.inverse() * perm.transpose(), perm * right.inverse(), sorted};
}

/// phi_j(t) = (1 - t)(1 - t^2)...(1 - t^j).
inline Rational phi_poly(std::size_t j, const Rational& t) {
  Rational r(1);
  for (std::size_t k = 1; k <= j; ++k) r *= 1 - pow(t, static_cast<long>(k));
  return r;
}

/// Volume of K t K relative to K, with the center-normalized last exponent 0
/// taking part in the constant runs.
inline QRoot macdonald_measure(const DominantCochar& t, std::size_t n, int q) {
  t.require_dominant();
  if (t.exps.size() + 1 != n)
    fail(ErrorCode::DimensionMismatch, "cocharacter " + t.str() + " does not belong to GL_" + std::to_string(n));
  std::vector<long> r = t.exps;
  r.push_back(0);
  long weight = 0;
  for (std::size_t i = 1; i <= n; ++i) weight += static_cast<long>(n - 2 * i + 1) * r[i - 1];

  Rational inv_q(1, q);
  Rational value = pow(Rational(q), weight) * phi_poly(n, inv_q) / pow(1 - inv_q, static_cast<long>(n));
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && r[j] == r[i]) ++j;
    std::size_t run = j - i;
    value *= pow(1 - inv_q, static_cast<long>(run)) / phi_poly(run, inv_q);
    i = j;
  }
  return QRoot::rational(value, q);
}

/// Number of lattices g Z_p^n with g in K diag(p^{r_1}, ..., p^{r_{n-1}}, 1) K,
/// counted over upper-triangular Hermite forms of index p^{sum r}.
inline long count_cell_lattices(const DominantCochar& t, long p) {
  t.require_dominant();
  std::size_t n = t.rank();
  long total = t.total();
  std::vector<long> target = t.exps;
  target.push_back(0);
  long count = 0;
  std::vector<long> diag(n);
  auto visit = [&]() {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    std::vector<long> bound;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        slots.push_back({i, j});
        long b = 1;
        for (long e = 0; e < diag[i]; ++e) b *= p;
        bound.push_back(b);
      }
    std::vector<long> cur(slots.size(), 0);
    while (true) {
      Matrix<Rational> h(n, n, Rational(0));
      for (std::size_t i = 0; i < n; ++i) h(i, i) = pow(Rational(p), diag[i]);
      for (std::size_t s = 0; s < slots.size(); ++s) h(slots[s].first, slots[s].second) = cur[s];
      if (cartan_decompose(h, p).exps == target) ++count;
      std::size_t s = 0;
      while (s < slots.size() && ++cur[s] == bound[s]) cur[s++] = 0;
      if (s == slots.size()) return;
    }
  };
  auto rec = [&](auto&& self, std::size_t i, long left) -> void {
    if (i + 1 == n) {
      diag[i] = left;
      visit();
      return;
    }
    for (long v = 0; v <= left; ++v) {
      diag[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return count;
}

/// All dominant (r_1, ..., r_{n-1}) with r_1 <= height, in lexicographic order.
inline std::vector<DominantCochar> enumerate_dominant(std::size_t n, long height) {
  if (n < 1) fail(ErrorCode::BadShape, "n must be positive");
  if (height < 0) fail(ErrorCode::DomainError, "height must be nonnegative");
  std::vector<DominantCochar> out;
  std::vector<long> cur;
  auto rec = [&](auto&& self, long bound) -> void {
    if (cur.size() + 1 == n) {
      out.push_back({cur});
      return;
    }
    for (long v = 0; v <= bound; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, height);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace eisen
