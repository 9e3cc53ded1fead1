#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "eisen/errors.hpp"
#include "eisen/rational.hpp"

namespace eisen {

/// Element a + b*sqrt(q) of Q(sqrt q), q a prime.
///
/// q == 0 marks a value built without a context (necessarily b == 0); it
/// adopts the modulus of whatever it is combined with.
class QRoot {
 public:
  QRoot() = default;
  QRoot(long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QRoot(const Rational& a) : a_(a) { a_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  QRoot(const Rational& a, const Rational& b, int q) : a_(a), b_(b), q_(q) {
    if (q < 0) fail(ErrorCode::DomainError, "negative modulus for sqrt");
    if (q == 0 && b_ != 0) fail(ErrorCode::DomainError, "irrational part without a modulus");
    a_.canonicalize();
    b_.canonicalize();
  }

  /// The pure rational r inside the context of q.
  static QRoot rational(const Rational& r, int q) { return QRoot(r, Rational(0), q); }
  static QRoot sqrt_q(int q) { return QRoot(Rational(0), Rational(1), q); }

  /// q^(k/2) for any integer k.
  static QRoot half_power(int q, long k) {
    if (q <= 0) fail(ErrorCode::DomainError, "half_power needs a positive modulus");
    long whole = k >= 0 ? k / 2 : -((-k + 1) / 2);
    Rational scale = pow(Rational(q), whole);
    if (k - 2 * whole == 0) return QRoot(scale, Rational(0), q);
    return QRoot(Rational(0), scale, q);
  }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  int q() const { return q_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  double to_double() const {
    double s = q_ > 0 ? std::sqrt(static_cast<double>(q_)) : 0.0;
    return a_.get_d() + b_.get_d() * s;
  }

  QRoot operator-() const { return QRoot(-a_, -b_, q_); }

  QRoot& operator+=(const QRoot& o) {
    q_ = joint_modulus(q_, o.q_);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QRoot& operator-=(const QRoot& o) {
    q_ = joint_modulus(q_, o.q_);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QRoot& operator*=(const QRoot& o) {
    int q = joint_modulus(q_, o.q_);
    Rational na = a_ * o.a_ + b_ * o.b_ * q;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    q_ = q;
    return *this;
  }
  QRoot& operator/=(const QRoot& o) { return *this *= o.inverse(); }

  /// (a - b sqrt q) / (a^2 - q b^2); the norm vanishes only at zero since q is not a square.
  QRoot inverse() const {
    if (is_zero()) fail(ErrorCode::DomainError, "inverse of zero in Q(sqrt q)");
    Rational norm = a_ * a_ - b_ * b_ * q_;
    return QRoot(a_ / norm, -b_ / norm, q_);
  }

  friend QRoot operator+(QRoot x, const QRoot& y) { return x += y; }
  friend QRoot operator-(QRoot x, const QRoot& y) { return x -= y; }
  friend QRoot operator*(QRoot x, const QRoot& y) { return x *= y; }
  friend QRoot operator/(QRoot x, const QRoot& y) { return x /= y; }

  friend bool operator==(const QRoot& x, const QRoot& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.q_ == y.q_);
  }
  friend bool operator!=(const QRoot& x, const QRoot& y) { return !(x == y); }

  std::string str() const {
    if (b_ == 0) return a_.get_str();
    std::string s;
    if (a_ != 0) s = a_.get_str() + (b_ > 0 ? "+" : "");
    return s + b_.get_str() + "*sqrt(" + std::to_string(q_) + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const QRoot& x) { return os << x.str(); }

 private:
  static int joint_modulus(int p, int q) {
    if (p == 0) return q;
    if (q == 0 || p == q) return p;
    fail(ErrorCode::RingMismatch, "sqrt(" + std::to_string(p) + ") combined with sqrt(" + std::to_string(q) + ")");
  }

  Rational a_{0};
  Rational b_{0};
  int q_ = 0;
};

inline QRoot pow(const QRoot& base, long exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  QRoot result = QRoot::rational(Rational(1), base.q());
  QRoot b = base;
  while (exponent > 0) {
    if (exponent & 1L) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

}  // namespace eisen
