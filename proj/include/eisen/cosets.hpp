#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisen/errors.hpp"
#include "eisen/groups.hpp"
#include "eisen/matrix.hpp"
#include "eisen/prime_field.hpp"

namespace eisen {

using Fq = PrimeFieldElem;

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Last row of g scaled so that its first nonzero entry is 1. The label
/// names the coset P_{mn-1,1} g.
template <class T>
std::vector<T> coset_label(const Matrix<T>& g) {
  if (!g.is_square()) fail(ErrorCode::DimensionMismatch, "coset_label needs a square matrix");
  if (is_zero(g.det())) fail(ErrorCode::SingularMatrix, "coset_label of a singular matrix");
  std::vector<T> v = g.row(g.rows() - 1);
  auto lead = std::find_if(v.begin(), v.end(), [](const T& x) { return !is_zero(x); });
  T inv = one_like(*lead) / *lead;
  for (auto& x : v) x = x * inv;
  return v;
}

/// Cuts a length-mn row into m consecutive blocks of length n.
template <class T>
Matrix<T> reshape_row(const std::vector<T>& v, std::size_t m, std::size_t n) {
  if (v.size() != m * n || v.empty())
    fail(ErrorCode::DimensionMismatch, "row of length " + std::to_string(v.size()) + " is not " +
                                           std::to_string(m) + "x" + std::to_string(n));
  Matrix<T> r(m, n, v[0]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = v[i * n + j];
  return r;
}

template <class T>
std::vector<T> flatten(const Matrix<T>& r) {
  std::vector<T> v;
  v.reserve(r.rows() * r.cols());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) v.push_back(r(i, j));
  return v;
}

/// Invertible X, Y with X * R * Y = diag(I_rank, 0).
template <class T>
struct RankNormalForm {
  Matrix<T> x;
  Matrix<T> y;
  std::size_t rank = 0;
};

/// Pivot is the first nonzero entry, in row-major order, of the remaining
/// lower-right block; it is moved to the corner, scaled to 1 and used to clear
/// its row and column.
template <class T>
RankNormalForm<T> rank_normal_form(const Matrix<T>& r) {
  std::size_t m = r.rows(), n = r.cols();
  Matrix<T> a = r;
  Matrix<T> x = Matrix<T>::identity(m, r.zero());
  Matrix<T> y = Matrix<T>::identity(n, r.zero());
  std::size_t k = 0;
  for (; k < std::min(m, n); ++k) {
    std::optional<std::pair<std::size_t, std::size_t>> pivot;
    for (std::size_t i = k; i < m && !pivot; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (!is_zero(a(i, j))) {
          pivot = {i, j};
          break;
        }
    if (!pivot) break;
    auto [pi, pj] = *pivot;
    a.swap_rows(pi, k);
    x.swap_rows(pi, k);
    for (std::size_t i = 0; i < m; ++i) std::swap(a(i, pj), a(i, k));
    for (std::size_t i = 0; i < n; ++i) std::swap(y(i, pj), y(i, k));

    T inv = one_like(a(k, k)) / a(k, k);
    for (std::size_t j = 0; j < n; ++j) a(k, j) *= inv;
    for (std::size_t j = 0; j < m; ++j) x(k, j) *= inv;
    for (std::size_t i = k + 1; i < m; ++i) {
      if (is_zero(a(i, k))) continue;
      T f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (is_zero(a(k, j))) continue;
      T f = a(k, j);
      for (std::size_t i = 0; i < m; ++i) a(i, j) -= f * a(i, k);
      for (std::size_t i = 0; i < n; ++i) y(i, j) -= f * y(i, k);
    }
  }
  return {x, y, k};
}

template <class T>
struct CosetWitness {
  Matrix<T> p;  ///< in P_{mn-1,1}
  Matrix<T> h;  ///< in GL_m
  Matrix<T> g;  ///< in GL_n
};

/// Double coset P_{mn-1,1} epsilon_r T_{m,n} containing an element.
template <class T>
struct DoubleCosetClass {
  std::size_t r = 0;
  std::optional<CosetWitness<T>> witness;
};

/// r is the rank of the reshaped coset label minus one. The witness satisfies
/// input = p * epsilon_r * t(h, g) exactly.
template <class T>
DoubleCosetClass<T> classify_double_coset(const Matrix<T>& g, std::size_t m, std::size_t n,
                                          bool want_witness = true) {
  if (n < 1 || n > m) fail(ErrorCode::BadShape, "classification needs 1 <= n <= m");
  if (g.rows() != m * n || !g.is_square())
    fail(ErrorCode::DimensionMismatch, "expected a " + std::to_string(m * n) + "-square matrix, got " + g.shape());
  if (is_zero(g.det())) fail(ErrorCode::SingularMatrix, "cannot classify a singular matrix");

  Matrix<T> shape = reshape_row(g.row(m * n - 1), m, n);
  RankNormalForm<T> nf = rank_normal_form(shape);
  DoubleCosetClass<T> out;
  out.r = nf.rank - 1;
  if (!want_witness) return out;

  Matrix<T> eps = epsilon_rep(m, n, out.r, g.zero());
  RankNormalForm<T> target = rank_normal_form(reshape_row(eps.row(m * n - 1), m, n));
  // h0^T R g0 = R_eps, hence label(g t(h0, g0)) = label(eps).
  Matrix<T> h0 = (target.x.inverse() * nf.x).transpose();
  Matrix<T> g0 = nf.y * target.y.inverse();
  Matrix<T> p = g * kronecker(h0, g0) * eps.inverse();
  if (!ParabolicShape{m * n - 1, 1}.contains(p))
    fail(ErrorCode::AssertionFailed, "witness factor is not in the mirabolic parabolic");
  CosetWitness<T> w{p, h0.inverse(), g0.inverse()};
  if (w.p * eps * kronecker(w.h, w.g) != g) fail(ErrorCode::AssertionFailed, "witness does not reproduce the input");
  out.witness = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------
// Compact finite-field kernels. Matrices are flat row-major byte arrays with
// entries in [0, q).

namespace ff {

using Bytes = std::vector<std::uint8_t>;

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Saturating count of F_q-points; stops growing past the cap.
inline std::uint64_t gl_order(std::size_t n, int q, std::uint64_t cap = UINT64_MAX / 4) {
  std::uint64_t qn = ipow(static_cast<std::uint64_t>(q), n), r = 1, qk = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t f = qn - qk;
    if (r > cap / f) return cap;
    r *= f;
    qk *= static_cast<std::uint64_t>(q);
  }
  return r;
}

inline std::size_t rank(Bytes a, std::size_t rows, std::size_t cols, int q) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a[p * cols + j], a[r * cols + j]);
    int inv = static_cast<int>(Fq(a[r * cols + c], q).inverse().residue());
    for (std::size_t i = r + 1; i < rows; ++i) {
      int f = a[i * cols + c] * inv % q;
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        a[i * cols + j] = static_cast<std::uint8_t>(((a[i * cols + j] - f * a[r * cols + j]) % q + q) % q);
    }
    ++r;
  }
  return r;
}

/// All invertible n x n matrices over F_q, in increasing base-q order.
inline std::vector<Bytes> enumerate_gl(std::size_t n, int q, std::uint64_t budget) {
  std::uint64_t total = ipow(static_cast<std::uint64_t>(q), n * n);
  if (n * n > 40 || total > budget)
    fail(ErrorCode::BudgetExceeded, "enumerating GL_" + std::to_string(n) + "(F_" + std::to_string(q) + ") needs " +
                                        std::to_string(total) + " candidates, budget " + std::to_string(budget));
  std::vector<Bytes> out;
  Bytes a(n * n, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t k = n * n; k-- > 0;) {
      a[k] = static_cast<std::uint8_t>(c % static_cast<std::uint64_t>(q));
      c /= static_cast<std::uint64_t>(q);
    }
    if (rank(a, n, n, q) == n) out.push_back(a);
  }
  return out;
}

inline Matrix<Fq> to_matrix(const Bytes& a, std::size_t rows, std::size_t cols, int q) {
  Matrix<Fq> m(rows, cols, Fq(0, q));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Fq(a[i * cols + j], q);
  return m;
}

inline Bytes from_matrix(const Matrix<Fq>& m) {
  Bytes a(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i * m.cols() + j] = static_cast<std::uint8_t>(m(i, j).residue());
  return a;
}

inline Bytes mul(const Bytes& a, const Bytes& b, std::size_t n, std::size_t k, std::size_t l, int q) {
  Bytes c(n * l, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      int s = 0;
      for (std::size_t t = 0; t < k; ++t) s += a[i * k + t] * b[t * l + j];
      c[i * l + j] = static_cast<std::uint8_t>(s % q);
    }
  return c;
}

inline Bytes transpose(const Bytes& a, std::size_t rows, std::size_t cols) {
  Bytes t(a.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = a[i * cols + j];
  return t;
}

inline Bytes kronecker(const Bytes& h, std::size_t m, const Bytes& g, std::size_t n, int q) {
  std::size_t mn = m * n;
  Bytes out(mn * mn, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          out[(i * n + a) * mn + j * n + b] = static_cast<std::uint8_t>(h[i * m + j] * g[a * n + b] % q);
  return out;
}

/// Scales v so its first nonzero entry is 1; returns false for the zero vector.
inline bool normalize(Bytes& v, int q) {
  auto lead = std::find_if(v.begin(), v.end(), [](std::uint8_t x) { return x != 0; });
  if (lead == v.end()) return false;
  if (*lead == 1) return true;
  int inv = static_cast<int>(Fq(*lead, q).inverse().residue());
  for (auto& x : v) x = static_cast<std::uint8_t>(x * inv % q);
  return true;
}

inline std::uint64_t encode(const Bytes& v, int q) {
  std::uint64_t c = 0;
  for (auto x : v) c = c * static_cast<std::uint64_t>(q) + x;
  return c;
}

inline Bytes decode(std::uint64_t c, std::size_t len, int q) {
  Bytes v(len);
  for (std::size_t k = len; k-- > 0;) {
    v[k] = static_cast<std::uint8_t>(c % static_cast<std::uint64_t>(q));
    c /= static_cast<std::uint64_t>(q);
  }
  return v;
}

}  // namespace ff

// ---------------------------------------------------------------------------
// Orbits of t(GL_m, GL_n) on the projective space of coset labels.

struct Orbit {
  std::size_t id = 0;
  std::size_t size = 0;
  std::size_t rank = 0;                      ///< common rank of the reshaped labels
  std::vector<std::size_t> epsilon_ranks;   ///< r such that label(epsilon_r) lies here
  std::vector<std::uint32_t> representative;  ///< smallest label in the orbit
};

struct OrbitTable {
  std::size_t m = 0, n = 0;
  int q = 0;
  std::uint64_t points = 0;
  bool rank_certified = true;  ///< every orbit is contained in a single rank stratum
  std::vector<Orbit> orbits;

  std::string to_csv() const {
    std::ostringstream os;
    os << "orbit_id,size,rank,contains_epsilon_r\n";
    for (const auto& o : orbits) {
      os << o.id << ',' << o.size << ',' << o.rank << ',';
      for (std::size_t k = 0; k < o.epsilon_ranks.size(); ++k) os << (k ? ";" : "") << o.epsilon_ranks[k];
      os << '\n';
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& o : orbits)
      rows.push_back({{"orbit_id", o.id},
                      {"size", o.size},
                      {"rank", o.rank},
                      {"contains_epsilon_r", o.epsilon_ranks},
                      {"representative", o.representative}});
    return {{"m", m}, {"n", n}, {"q", q}, {"points", points}, {"rank_certified", rank_certified}, {"orbits", rows}};
  }
};

/// Breadth-first closure of each point under generators of GL_m x GL_n acting
/// by R -> h^T R g: elementary transvections plus diag(zeta, 1, ..., 1).
inline OrbitTable enumerate_orbits(std::size_t m, std::size_t n, int q,
                                   std::uint64_t budget = kDefaultEnumerationBudget) {
  if (m < 1 || n < 1) fail(ErrorCode::BadShape, "orbit enumeration needs m, n >= 1");
  if (!is_prime(q)) fail(ErrorCode::DomainError, "q must be prime");
  std::size_t mn = m * n;
  if (mn > 40) fail(ErrorCode::BudgetExceeded, "projective space too large");
  std::uint64_t total = ff::ipow(static_cast<std::uint64_t>(q), mn);
  std::uint64_t points = (total - 1) / static_cast<std::uint64_t>(q - 1);
  if (points > budget)
    fail(ErrorCode::BudgetExceeded,
         std::to_string(points) + " projective points exceed the budget " + std::to_string(budget));

  std::uint8_t zeta = static_cast<std::uint8_t>(primitive_root(q));
  std::vector<std::int32_t> orbit_of(total, -1);

  auto neighbours = [&](const ff::Bytes& v, auto&& visit) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        ff::Bytes w = v;
        for (std::size_t c = 0; c < n; ++c) w[j * n + c] = static_cast<std::uint8_t>((w[j * n + c] + w[i * n + c]) % q);
        visit(w);
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        ff::Bytes w = v;
        for (std::size_t r = 0; r < m; ++r) w[r * n + j] = static_cast<std::uint8_t>((w[r * n + j] + w[r * n + i]) % q);
        visit(w);
      }
    if (q > 2) {
      ff::Bytes w = v;
      for (std::size_t c = 0; c < n; ++c) w[c] = static_cast<std::uint8_t>(w[c] * zeta % q);
      visit(w);
      w = v;
      for (std::size_t r = 0; r < m; ++r) w[r * n] = static_cast<std::uint8_t>(w[r * n] * zeta % q);
      visit(w);
    }
  };

  OrbitTable table;
  table.m = m;
  table.n = n;
  table.q = q;
  table.points = points;

  for (std::uint64_t code = 1; code < total; ++code) {
    ff::Bytes start = ff::decode(code, mn, q);
    ff::normalize(start, q);
    if (ff::encode(start, q) != code || orbit_of[code] >= 0) continue;

    Orbit orbit;
    orbit.id = table.orbits.size();
    orbit.representative.assign(start.begin(), start.end());
    orbit.rank = ff::rank(start, m, n, q);
    auto id = static_cast<std::int32_t>(orbit.id);
    std::deque<ff::Bytes> frontier{start};
    orbit_of[code] = id;
    while (!frontier.empty()) {
      ff::Bytes v = std::move(frontier.front());
      frontier.pop_front();
      ++orbit.size;
      if (ff::rank(v, m, n, q) != orbit.rank) table.rank_certified = false;
      neighbours(v, [&](ff::Bytes& w) {
        ff::normalize(w, q);
        std::uint64_t c = ff::encode(w, q);
        if (orbit_of[c] < 0) {
          orbit_of[c] = id;
          frontier.push_back(std::move(w));
        }
      });
    }
    table.orbits.push_back(std::move(orbit));
  }

  if (n <= m) {
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<Fq> label = coset_label(epsilon_rep(m, n, r, Fq(0, q)));
      ff::Bytes v(mn);
      for (std::size_t k = 0; k < mn; ++k) v[k] = static_cast<std::uint8_t>(label[k].residue());
      table.orbits[static_cast<std::size_t>(orbit_of[ff::encode(v, q)])].epsilon_ranks.push_back(r);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Stabilizers.

/// A set of mn x mn matrices over F_q, stored as flat byte strings.
using KroneckerImageSet = std::set<ff::Bytes>;

/// All t(h, g) with epsilon_r t(h, g) epsilon_r^{-1} in P_{mn-1,1}, found by
/// testing every pair (h, g). Equivalently h^T R g is proportional to R, with
/// R the reshaped label of epsilon_r.
inline KroneckerImageSet stabilizer_bruteforce(std::size_t m, std::size_t n, std::size_t r, int q,
                                               std::uint64_t budget = kDefaultEnumerationBudget) {
  if (n < 1 || n > m) fail(ErrorCode::BadShape, "stabilizers need 1 <= n <= m");
  if (r >= n) fail(ErrorCode::RankOutOfRange, "r must be below n");
  std::uint64_t pairs = ff::gl_order(m, q) * ff::gl_order(n, q);
  if (ff::gl_order(m, q) > budget || pairs > budget)
    fail(ErrorCode::BudgetExceeded, "|GL_m||GL_n| = " + std::to_string(pairs) + " exceeds the budget " +
                                        std::to_string(budget));
  std::vector<ff::Bytes> gl_m = ff::enumerate_gl(m, q, budget), gl_n = ff::enumerate_gl(n, q, budget);

  Matrix<Fq> eps = epsilon_rep(m, n, r, Fq(0, q));
  ff::Bytes label = ff::from_matrix(reshape_row(eps.row(m * n - 1), m, n));

  KroneckerImageSet out;
  for (const auto& h : gl_m) {
    ff::Bytes hr = ff::mul(ff::transpose(h, m, m), label, m, m, n, q);
    for (const auto& g : gl_n) {
      ff::Bytes x = ff::mul(hr, g, m, n, n, q);
      // x must equal lambda * label for some nonzero lambda.
      int lambda = -1;
      bool ok = true;
      for (std::size_t k = 0; k < x.size() && ok; ++k) {
        if (label[k] == 0) {
          ok = x[k] == 0;
        } else if (lambda < 0) {
          lambda = x[k] * static_cast<int>(Fq(label[k], q).inverse().residue()) % q;
          ok = lambda != 0;
        } else {
          ok = x[k] == lambda * label[k] % q;
        }
      }
      if (ok) out.insert(ff::kronecker(h, m, g, n, q));
    }
  }
  return out;
}

/// The predicted stabilizer t_Delta(P^m_{r+1}, P^n_{r+1}): all t(h, g) with
/// h = [[A, B], [0, lambda d*]] and g = [[a, b], [0, d]], d in GL_{r+1}.
inline KroneckerImageSet predicted_stabilizer(std::size_t m, std::size_t n, std::size_t r, int q,
                                              std::uint64_t budget = kDefaultEnumerationBudget) {
  if (n < 1 || n > m) fail(ErrorCode::BadShape, "stabilizers need 1 <= n <= m");
  if (r >= n) fail(ErrorCode::RankOutOfRange, "r must be below n");
  std::size_t k = r + 1, lm = m - k, ln = n - k;
  std::uint64_t count = ff::gl_order(lm, q) * ff::gl_order(ln, q) * ff::gl_order(k, q) *
                        ff::ipow(static_cast<std::uint64_t>(q), lm * k + ln * k) * static_cast<std::uint64_t>(q - 1);
  if (count > budget) fail(ErrorCode::BudgetExceeded, "predicted stabilizer too large to list");

  std::vector<ff::Bytes> gl_lm = lm ? ff::enumerate_gl(lm, q, budget) : std::vector<ff::Bytes>{ff::Bytes{}};
  std::vector<ff::Bytes> gl_ln = ln ? ff::enumerate_gl(ln, q, budget) : std::vector<ff::Bytes>{ff::Bytes{}};
  std::vector<ff::Bytes> gl_k = ff::enumerate_gl(k, q, budget);
  std::uint64_t nb = ff::ipow(static_cast<std::uint64_t>(q), lm * k);
  std::uint64_t nbb = ff::ipow(static_cast<std::uint64_t>(q), ln * k);

  KroneckerImageSet out;
  for (const auto& d : gl_k) {
    ff::Bytes dstar = ff::from_matrix(twisted_star(ff::to_matrix(d, k, k, q)));
    for (int lambda = 1; lambda < q; ++lambda) {
      for (const auto& big_a : gl_lm)
        for (std::uint64_t bc = 0; bc < nb; ++bc) {
          ff::Bytes big_b = ff::decode(bc, lm * k, q);
          ff::Bytes h(m * m, 0);
          for (std::size_t i = 0; i < lm; ++i)
            for (std::size_t j = 0; j < lm; ++j) h[i * m + j] = big_a[i * lm + j];
          for (std::size_t i = 0; i < lm; ++i)
            for (std::size_t j = 0; j < k; ++j) h[i * m + lm + j] = big_b[i * k + j];
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
              h[(lm + i) * m + lm + j] = static_cast<std::uint8_t>(lambda * dstar[i * k + j] % q);
          for (const auto& small_a : gl_ln)
            for (std::uint64_t sc = 0; sc < nbb; ++sc) {
              ff::Bytes small_b = ff::decode(sc, ln * k, q);
              ff::Bytes g(n * n, 0);
              for (std::size_t i = 0; i < ln; ++i)
                for (std::size_t j = 0; j < ln; ++j) g[i * n + j] = small_a[i * ln + j];
              for (std::size_t i = 0; i < ln; ++i)
                for (std::size_t j = 0; j < k; ++j) g[i * n + ln + j] = small_b[i * k + j];
              for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) g[(ln + i) * n + ln + j] = d[i * k + j];
              out.insert(ff::kronecker(h, m, g, n, q));
            }
        }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampled and exhaustive lemma checks.

/// Random element of H_{1,k-1}(F_q): first column e_1, lower-right block invertible.
inline Matrix<Fq> random_mirabolic_upper(std::size_t k, int q, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, q - 1);
  while (true) {
    Matrix<Fq> h = Matrix<Fq>::identity(k, Fq(0, q));
    for (std::size_t j = 1; j < k; ++j) h(0, j) = Fq(dist(rng), q);
    for (std::size_t i = 1; i < k; ++i)
      for (std::size_t j = 1; j < k; ++j) h(i, j) = Fq(dist(rng), q);
    if (!h.det().is_zero()) return h;
  }
}

/// w_1 u_1(R) with R an m x n matrix whose top-left entry is 1.
inline Matrix<Fq> first_cell_element(const Matrix<Fq>& r) {
  std::size_t mn = r.rows() * r.cols();
  std::vector<Fq> v = flatten(r);
  std::vector<Fq> tail(v.begin() + 1, v.end());
  return weyl_rep(1, mn, r.zero()) * unipotent_rep(1, mn, tail, r.zero());
}

/// For sampled h, g in the mirabolic-type subgroups and R with top-left 1:
/// label(w_1 u_1(R) t(h, g)) = label(w_1 u_1(h^T R g)).
inline bool verify_orbit_lemma(std::size_t m, std::size_t n, int q, std::size_t trials, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, q - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    Matrix<Fq> r(m, n, Fq(0, q));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = Fq(dist(rng), q);
    r(0, 0) = Fq(1, q);
    Matrix<Fq> h = random_mirabolic_upper(m, q, rng), g = random_mirabolic_upper(n, q, rng);
    Matrix<Fq> lhs = first_cell_element(r) * kronecker(h, g);
    Matrix<Fq> rhs = first_cell_element(h.transpose() * r * g);
    if (coset_label(lhs) != coset_label(rhs)) return false;
  }
  return true;
}

/// Exhaustive over GL_m(F_q) x GL_n(F_q): t(h, g) = I iff h = lambda I and
/// g = lambda^{-1} I. Returns the number of kernel pairs found, or -1 on a
/// counterexample.
inline long verify_kronecker_kernel(std::size_t m, std::size_t n, int q,
                                    std::uint64_t budget = 200'000'000) {
  std::uint64_t pairs = ff::gl_order(m, q) * ff::gl_order(n, q);
  if (pairs > budget) fail(ErrorCode::BudgetExceeded, std::to_string(pairs) + " pairs exceed the budget");
  std::vector<ff::Bytes> gl_m = ff::enumerate_gl(m, q, budget), gl_n = ff::enumerate_gl(n, q, budget);
  auto scalar_of = [q](const ff::Bytes& a, std::size_t k) -> int {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (a[i * k + j] != (i == j ? a[0] : 0)) return -1;
    return a[0] % q;
  };
  long kernel = 0;
  for (const auto& h : gl_m) {
    int hs = scalar_of(h, m);
    for (const auto& g : gl_n) {
      bool identity = true;
      for (std::size_t i = 0; i < m && identity; ++i)
        for (std::size_t j = 0; j < m && identity; ++j)
          for (std::size_t a = 0; a < n && identity; ++a)
            for (std::size_t b = 0; b < n; ++b)
              if (h[i * m + j] * g[a * n + b] % q != static_cast<int>(i == j && a == b)) {
                identity = false;
                break;
              }
      int gs = scalar_of(g, n);
      bool predicted = hs > 0 && gs > 0 && hs * gs % q == 1;
      if (identity != predicted) return -1;
      if (identity) ++kernel;
    }
  }
  return kernel;
}

/// Exhaustive check over F_q of: (S (x) R) sum_j e_j (x) e_j = alpha sum_j e_j (x) e_j
/// iff S R^T = alpha I, for all l x l matrices S, R and all alpha.
inline bool verify_tensor_inv_lemma(std::size_t l, int q, std::uint64_t budget = kDefaultEnumerationBudget) {
  if (l < 1) fail(ErrorCode::BadShape, "l must be positive");
  std::uint64_t mats = ff::ipow(static_cast<std::uint64_t>(q), l * l);
  if (l * l > 20 || mats * mats > budget)
    fail(ErrorCode::BudgetExceeded, std::to_string(mats) + "^2 matrix pairs exceed the budget");
  std::size_t ll = l * l;
  ff::Bytes fixed(ll, 0);
  for (std::size_t j = 0; j < l; ++j) fixed[j * l + j] = 1;

  std::vector<ff::Bytes> all(mats);
  for (std::uint64_t c = 0; c < mats; ++c) all[c] = ff::decode(c, ll, q);

  for (const auto& s : all)
    for (const auto& rr : all) {
      ff::Bytes kr = ff::kronecker(s, l, rr, l, q);
      ff::Bytes image = ff::mul(kr, fixed, ll, ll, 1, q);
      ff::Bytes srt = ff::mul(s, ff::transpose(rr, l, l), l, l, l, q);
      for (int alpha = 0; alpha < q; ++alpha) {
        bool tensor_side = true, matrix_side = true;
        for (std::size_t k = 0; k < ll; ++k) {
          if (image[k] != alpha * fixed[k] % q) tensor_side = false;
          if (srt[k] != alpha * fixed[k] % q) matrix_side = false;
        }
        if (tensor_side != matrix_side) return false;
      }
    }
  return true;
}

}  // namespace eisen
