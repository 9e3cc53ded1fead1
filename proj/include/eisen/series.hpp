#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisen/errors.hpp"
#include "eisen/qroot.hpp"

namespace eisen {

/// Power series in the formal variable X (standing for q^-s), exact mod X^(N+1).
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1) {}
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1) {}
  TruncatedSeries(std::vector<QRoot> coeffs, std::size_t order) : coeffs_(std::move(coeffs)) {
    coeffs_.resize(order + 1);
  }

  static TruncatedSeries constant(const QRoot& c, std::size_t order) {
    TruncatedSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }
  /// c * X^k, vanishing when k exceeds the order.
  static TruncatedSeries monomial(const QRoot& c, std::size_t k, std::size_t order) {
    TruncatedSeries s(order);
    if (k <= order) s.coeffs_[k] = c;
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<QRoot>& coeffs() const { return coeffs_; }
  const QRoot& operator[](std::size_t k) const { return coeffs_.at(k); }
  QRoot& operator[](std::size_t k) { return coeffs_.at(k); }

  /// Drops terms above the new order; raising the order pads with zeros.
  TruncatedSeries truncated(std::size_t order) const { return TruncatedSeries(coeffs_, order); }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    reduce_to(o.order());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    reduce_to(o.order());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  TruncatedSeries& operator*=(const QRoot& c) {
    for (auto& x : coeffs_) x *= c;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries x, const TruncatedSeries& y) { return x += y; }
  friend TruncatedSeries operator-(TruncatedSeries x, const TruncatedSeries& y) { return x -= y; }
  friend TruncatedSeries operator*(TruncatedSeries x, const QRoot& c) { return x *= c; }
  friend TruncatedSeries operator*(const QRoot& c, TruncatedSeries x) { return x *= c; }

  friend TruncatedSeries operator*(const TruncatedSeries& x, const TruncatedSeries& y) {
    std::size_t n = std::min(x.order(), y.order());
    TruncatedSeries out(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (x.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j <= n; ++j) {
        if (y.coeffs_[j].is_zero()) continue;
        out.coeffs_[i + j] += x.coeffs_[i] * y.coeffs_[j];
      }
    }
    return out;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  /// Equality up to the smaller of the two orders.
  friend bool operator==(const TruncatedSeries& x, const TruncatedSeries& y) {
    return !first_mismatch(x, y).has_value();
  }
  friend bool operator!=(const TruncatedSeries& x, const TruncatedSeries& y) { return !(x == y); }

  /// Index of the lowest differing coefficient, comparing up to the common order.
  friend std::optional<std::size_t> first_mismatch(const TruncatedSeries& x, const TruncatedSeries& y) {
    std::size_t n = std::min(x.order(), y.order());
    for (std::size_t k = 0; k <= n; ++k)
      if (x.coeffs_[k] != y.coeffs_[k]) return k;
    return std::nullopt;
  }

  friend std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s) { return os << s.str(); }

  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + coeffs_[k].str() + ")";
      if (k > 0) s += "X^" + std::to_string(k);
    }
    return (s.empty() ? "0" : s) + " + O(X^" + std::to_string(order() + 1) + ")";
  }

 private:
  void reduce_to(std::size_t order) {
    if (order < this->order()) coeffs_.resize(order + 1);
  }

  std::vector<QRoot> coeffs_;
};

/// f^-1 mod X^(N+1), by the recurrence g_k = -(1/f_0) * sum_{i=1..k} f_i g_(k-i).
inline TruncatedSeries series_invert(const TruncatedSeries& f) {
  if (f[0].is_zero()) fail(ErrorCode::ZeroConstantTerm, "cannot invert a series with zero constant term");
  std::size_t n = f.order();
  TruncatedSeries g(n);
  QRoot inv0 = f[0].inverse();
  g[0] = inv0;
  for (std::size_t k = 1; k <= n; ++k) {
    QRoot acc = zero_like(inv0);
    for (std::size_t i = 1; i <= k; ++i)
      if (!f[i].is_zero()) acc += f[i] * g[k - i];
    g[k] = -(acc * inv0);
  }
  return g;
}

/// Finite sum of c_k X^k with k of either sign; zero terms are not stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(const QRoot& c) { add_term(0, c); }  // NOLINT(google-explicit-constructor)

  static LaurentPoly monomial(const QRoot& c, int k) {
    LaurentPoly p;
    p.add_term(k, c);
    return p;
  }

  const std::map<int, QRoot>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int min_degree() const {
    if (is_zero()) fail(ErrorCode::DomainError, "degree of the zero polynomial");
    return terms_.begin()->first;
  }
  int max_degree() const {
    if (is_zero()) fail(ErrorCode::DomainError, "degree of the zero polynomial");
    return terms_.rbegin()->first;
  }
  QRoot coeff(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? QRoot() : it->second;
  }

  void add_term(int k, const QRoot& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly x, const LaurentPoly& y) { return x += y; }
  friend LaurentPoly operator-(LaurentPoly x, const LaurentPoly& y) { return x -= y; }
  friend LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y) {
    LaurentPoly out;
    for (const auto& [i, a] : x.terms_)
      for (const auto& [j, b] : y.terms_) out.add_term(i + j, a * b);
    return out;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& x, const LaurentPoly& y) { return x.terms_ == y.terms_; }

  /// Requires min_degree() >= 0.
  TruncatedSeries to_series(std::size_t order) const {
    TruncatedSeries s(order);
    for (const auto& [k, c] : terms_) {
      if (k < 0) fail(ErrorCode::DomainError, "negative power of X has no power-series expansion");
      if (static_cast<std::size_t>(k) <= order) s[static_cast<std::size_t>(k)] = c;
    }
    return s;
  }

 private:
  std::map<int, QRoot> terms_;
};

/// Formal quotient of Laurent polynomials, kept unreduced.
class RationalFunction {
 public:
  RationalFunction(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) fail(ErrorCode::DomainError, "rational function with zero denominator");
  }
  explicit RationalFunction(LaurentPoly num) : RationalFunction(std::move(num), LaurentPoly(QRoot(1))) {}

  const LaurentPoly& numerator() const { return num_; }
  const LaurentPoly& denominator() const { return den_; }

  friend RationalFunction operator*(const RationalFunction& x, const RationalFunction& y) {
    return RationalFunction(x.num_ * y.num_, x.den_ * y.den_);
  }
  friend RationalFunction operator/(const RationalFunction& x, const RationalFunction& y) {
    if (y.num_.is_zero()) fail(ErrorCode::DomainError, "division by the zero rational function");
    return RationalFunction(x.num_ * y.den_, x.den_ * y.num_);
  }

 private:
  LaurentPoly num_, den_;
};

/// Power-series expansion of r to order N. The denominator must be a
/// polynomial with nonzero constant term.
inline TruncatedSeries expand(const RationalFunction& r, std::size_t order) {
  const LaurentPoly& den = r.denominator();
  if (den.min_degree() < 0 || den.coeff(0).is_zero())
    fail(ErrorCode::ZeroConstantTerm, "denominator has no nonzero constant term");
  if (r.numerator().is_zero()) return TruncatedSeries(order);
  return r.numerator().to_series(order) * series_invert(den.to_series(order));
}

// JSON: a QRoot is [a_num, a_den, b_num, b_den]; integers that overflow a
// 64-bit signed value are written as decimal strings.

namespace detail {
inline nlohmann::json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}
inline mpz_class integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) fail(ErrorCode::ParseError, "bad integer " + j.dump());
    return z;
  }
  fail(ErrorCode::ParseError, "expected integer, got " + j.dump());
}
inline Rational ratio_from_json(const nlohmann::json& num, const nlohmann::json& den) {
  mpz_class d = integer_from_json(den);
  if (d == 0) fail(ErrorCode::ParseError, "zero denominator in JSON");
  Rational r(integer_from_json(num), d);
  r.canonicalize();
  return r;
}
}  // namespace detail

inline nlohmann::json to_json(const QRoot& x) {
  return nlohmann::json::array({detail::integer_to_json(x.a().get_num()), detail::integer_to_json(x.a().get_den()),
                                detail::integer_to_json(x.b().get_num()), detail::integer_to_json(x.b().get_den())});
}

inline QRoot qroot_from_json(const nlohmann::json& j, int q) {
  if (!j.is_array() || j.size() != 4) fail(ErrorCode::ParseError, "QRoot must be a 4-element array");
  Rational a = detail::ratio_from_json(j[0], j[1]);
  Rational b = detail::ratio_from_json(j[2], j[3]);
  if (b != 0 && q <= 0) fail(ErrorCode::ParseError, "irrational coefficient without modulus q");
  return QRoot(a, b, b == 0 ? (q > 0 ? q : 0) : q);
}

inline nlohmann::json to_json(const TruncatedSeries& s) {
  int q = 0;
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : s.coeffs()) {
    if (c.q() != 0) q = c.q();
    coeffs.push_back(to_json(c));
  }
  return {{"variable", "X"}, {"order", s.order()}, {"q", q}, {"coeffs", coeffs}};
}

inline TruncatedSeries series_from_json(const nlohmann::json& j) {
  try {
    std::size_t order = j.at("order").get<std::size_t>();
    int q = j.at("q").get<int>();
    const auto& cs = j.at("coeffs");
    if (cs.size() != order + 1) fail(ErrorCode::ParseError, "coefficient count does not match order");
    std::vector<QRoot> coeffs;
    for (const auto& c : cs) coeffs.push_back(qroot_from_json(c, q));
    return TruncatedSeries(std::move(coeffs), order);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

}  // namespace eisen
