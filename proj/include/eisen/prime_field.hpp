#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "eisen/errors.hpp"
#include "eisen/qroot.hpp"
#include "eisen/rational.hpp"

namespace eisen {

inline bool is_prime(long q) {
  if (q < 2) return false;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

/// Residue class modulo a prime q. The modulus travels with the value, so
/// mixing fields is caught at runtime.
class PrimeFieldElem {
 public:
  PrimeFieldElem(long residue, int q) : q_(q) {
    if (q < 2) fail(ErrorCode::DomainError, "field modulus must be prime, got " + std::to_string(q));
    long r = residue % q;
    r_ = static_cast<std::uint32_t>(r < 0 ? r + q : r);
  }

  std::uint32_t residue() const { return r_; }
  int q() const { return q_; }
  bool is_zero() const { return r_ == 0; }

  PrimeFieldElem operator-() const { return PrimeFieldElem(r_ == 0 ? 0 : q_ - static_cast<long>(r_), q_); }

  PrimeFieldElem& operator+=(const PrimeFieldElem& o) {
    check(o);
    r_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r_) + o.r_) % static_cast<std::uint64_t>(q_));
    return *this;
  }
  PrimeFieldElem& operator-=(const PrimeFieldElem& o) { return *this += -o; }
  PrimeFieldElem& operator*=(const PrimeFieldElem& o) {
    check(o);
    r_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r_) * o.r_) % static_cast<std::uint64_t>(q_));
    return *this;
  }
  PrimeFieldElem& operator/=(const PrimeFieldElem& o) { return *this *= o.inverse(); }

  PrimeFieldElem pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    std::uint64_t result = 1 % static_cast<std::uint64_t>(q_), b = r_, m = static_cast<std::uint64_t>(q_);
    while (e > 0) {
      if (e & 1L) result = result * b % m;
      b = b * b % m;
      e >>= 1;
    }
    return PrimeFieldElem(static_cast<long>(result), q_);
  }

  PrimeFieldElem inverse() const {
    if (r_ == 0) fail(ErrorCode::DomainError, "inverse of zero in F_" + std::to_string(q_));
    long t = 0, new_t = 1, r = q_, new_r = r_;
    while (new_r != 0) {
      long quot = r / new_r;
      t -= quot * new_t;
      std::swap(t, new_t);
      r -= quot * new_r;
      std::swap(r, new_r);
    }
    return PrimeFieldElem(t, q_);
  }

  friend PrimeFieldElem operator+(PrimeFieldElem x, const PrimeFieldElem& y) { return x += y; }
  friend PrimeFieldElem operator-(PrimeFieldElem x, const PrimeFieldElem& y) { return x -= y; }
  friend PrimeFieldElem operator*(PrimeFieldElem x, const PrimeFieldElem& y) { return x *= y; }
  friend PrimeFieldElem operator/(PrimeFieldElem x, const PrimeFieldElem& y) { return x /= y; }
  friend bool operator==(const PrimeFieldElem& x, const PrimeFieldElem& y) { return x.q_ == y.q_ && x.r_ == y.r_; }
  friend bool operator!=(const PrimeFieldElem& x, const PrimeFieldElem& y) { return !(x == y); }
  friend bool operator<(const PrimeFieldElem& x, const PrimeFieldElem& y) { return x.r_ < y.r_; }

  std::string str() const { return std::to_string(r_); }
  friend std::ostream& operator<<(std::ostream& os, const PrimeFieldElem& x) { return os << x.r_; }

 private:
  void check(const PrimeFieldElem& o) const {
    if (o.q_ != q_)
      fail(ErrorCode::RingMismatch, "F_" + std::to_string(q_) + " combined with F_" + std::to_string(o.q_));
  }

  std::uint32_t r_ = 0;
  int q_;
};

// Ring-generic helpers so that matrix code can build constants of the right
// ring from an existing element.

inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline bool is_zero(const Rational& x) { return x == 0; }
inline std::string str(const Rational& x) { return x.get_str(); }

inline QRoot zero_like(const QRoot& x) { return QRoot::rational(Rational(0), x.q()); }
inline QRoot one_like(const QRoot& x) { return QRoot::rational(Rational(1), x.q()); }
inline bool is_zero(const QRoot& x) { return x.is_zero(); }
inline std::string str(const QRoot& x) { return x.str(); }

inline PrimeFieldElem zero_like(const PrimeFieldElem& x) { return PrimeFieldElem(0, x.q()); }
inline PrimeFieldElem one_like(const PrimeFieldElem& x) { return PrimeFieldElem(1, x.q()); }
inline bool is_zero(const PrimeFieldElem& x) { return x.is_zero(); }
inline std::string str(const PrimeFieldElem& x) { return x.str(); }

inline PrimeFieldElem pow(const PrimeFieldElem& x, long e) { return x.pow(e); }

/// Smallest generator of F_q^x.
inline long primitive_root(int q) {
  if (q == 2) return 1;
  long phi = q - 1;
  for (long g = 2; g < q; ++g) {
    bool ok = true;
    long rest = phi;
    for (long d = 2; d * d <= rest && ok; ++d) {
      if (rest % d != 0) continue;
      while (rest % d == 0) rest /= d;
      if (PrimeFieldElem(g, q).pow(phi / d) == PrimeFieldElem(1, q)) ok = false;
    }
    if (ok && rest > 1 && PrimeFieldElem(g, q).pow(phi / rest) == PrimeFieldElem(1, q)) ok = false;
    if (ok) return g;
  }
  fail(ErrorCode::DomainError, "no primitive root mod " + std::to_string(q));
}

}  // namespace eisen
