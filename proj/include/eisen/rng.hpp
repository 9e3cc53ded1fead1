#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "eisen/matrix.hpp"
#include "eisen/rational.hpp"

namespace eisen {

/// The one PRNG used for every randomized check.
using Rng = std::mt19937_64;

/// Nonzero rational with numerator and denominator bounded by span.
inline Rational sample_nonzero_rational(Rng& rng, long span = 7) {
  std::uniform_int_distribution<long> num(1, span), den(1, span), sign(0, 1);
  long a = num(rng);
  if (sign(rng)) a = -a;
  return make_rational(a, den(rng));
}

/// n pairwise distinct nonzero rationals; collisions are resampled.
inline std::vector<Rational> sample_regular_alphas(std::size_t n, Rng& rng, long span = 7) {
  std::vector<Rational> out;
  while (out.size() < n) {
    Rational x = sample_nonzero_rational(rng, span);
    bool fresh = true;
    for (const auto& y : out) fresh = fresh && y != x;
    if (fresh) out.push_back(x);
  }
  return out;
}

inline Matrix<Rational> sample_rational_matrix(std::size_t r, std::size_t c, Rng& rng, long span = 6) {
  std::uniform_int_distribution<long> num(-span, span), den(1, 4);
  Matrix<Rational> m(r, c, Rational(0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = make_rational(num(rng), den(rng));
  return m;
}

inline Matrix<Rational> sample_invertible_rational(std::size_t n, Rng& rng) {
  while (true) {
    Matrix<Rational> m = sample_rational_matrix(n, n, rng);
    if (m.det() != 0) return m;
  }
}

/// Invertible integer matrix with entries in [-span, span].
inline Matrix<Rational> sample_invertible_integer(std::size_t n, Rng& rng, long span = 30) {
  std::uniform_int_distribution<long> dist(-span, span);
  while (true) {
    Matrix<Rational> m(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
    if (m.det() != 0) return m;
  }
}

/// Derives an independent stream for the k-th check of a run.
inline Rng substream(std::uint64_t seed, std::uint64_t k) {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return Rng(s);
}

}  // namespace eisen
