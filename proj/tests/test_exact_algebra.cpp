#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "eisen/prime_field.hpp"
#include "eisen/qroot.hpp"
#include "eisen/rational.hpp"
#include "eisen/series.hpp"

using namespace eisen;

namespace {

QRoot rq(long a, long b, int q) { return QRoot(Rational(a), Rational(b), q); }

TruncatedSeries series_of(std::vector<QRoot> c, std::size_t n) { return TruncatedSeries(std::move(c), n); }

LaurentPoly poly(std::initializer_list<long> cs) {
  LaurentPoly p;
  int k = 0;
  for (long c : cs) p.add_term(k++, QRoot(c));
  return p;
}

QRoot random_qroot(std::mt19937_64& rng, int q) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  return QRoot(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), q);
}

TruncatedSeries random_series(std::mt19937_64& rng, std::size_t n, int q) {
  TruncatedSeries s(n);
  for (std::size_t k = 0; k <= n; ++k) s[k] = random_qroot(rng, q);
  return s;
}

}  // namespace

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(to_string(parse_rational("-6/14")), "-3/7");
  EXPECT_EQ(to_string(parse_rational("5")), "5");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rational, Valuation) {
  EXPECT_EQ(valuation(Rational(12), 2), 2);
  EXPECT_EQ(valuation(Rational(5, 18), 3), -2);
  EXPECT_EQ(valuation(Rational(7), 5), 0);
  EXPECT_EQ(p_adic_abs(Rational(9, 2), 3), Rational(1, 9));
}

TEST(QRoot, MultiplicationMatchesFloatOracle) {
  std::mt19937_64 rng(11);
  for (int q : {2, 3, 5, 7}) {
    for (int trial = 0; trial < 200; ++trial) {
      QRoot x = random_qroot(rng, q), y = random_qroot(rng, q);
      QRoot z = x * y;
      EXPECT_EQ(z.a(), x.a() * y.a() + x.b() * y.b() * q);
      EXPECT_EQ(z.b(), x.a() * y.b() + x.b() * y.a());
      EXPECT_NEAR(z.to_double(), x.to_double() * y.to_double(), 1e-9);
    }
  }
}

TEST(QRoot, InverseAndHalfPowers) {
  QRoot x = rq(3, -2, 5);
  EXPECT_EQ(x * x.inverse(), QRoot(1));
  EXPECT_EQ(QRoot::half_power(3, 2), QRoot(3));
  EXPECT_EQ(QRoot::half_power(3, 1) * QRoot::half_power(3, 1), QRoot(3));
  EXPECT_EQ(QRoot::half_power(3, -1) * QRoot::half_power(3, 1), QRoot(1));
  EXPECT_EQ(QRoot::half_power(2, -3) * QRoot::half_power(2, 3), QRoot(1));
  EXPECT_NEAR(QRoot::half_power(7, -5).to_double(), std::pow(7.0, -2.5), 1e-12);
  EXPECT_THROW(QRoot().inverse(), Error);
}

TEST(QRoot, MixedModuliRejected) {
  try {
    (void)(QRoot::sqrt_q(2) + QRoot::sqrt_q(3));
    FAIL() << "expected RingMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RingMismatch);
  }
  EXPECT_EQ(QRoot(2) * QRoot::sqrt_q(3), rq(0, 2, 3));
}

TEST(PrimeField, FermatExhaustive) {
  for (int q : {2, 3, 5, 7, 11, 13}) {
    for (long x = 1; x < q; ++x) {
      PrimeFieldElem e(x, q);
      EXPECT_EQ(e.pow(q - 1), PrimeFieldElem(1, q)) << x << " mod " << q;
      EXPECT_EQ(e * e.inverse(), PrimeFieldElem(1, q));
    }
  }
}

TEST(PrimeField, AxiomsExhaustiveSmall) {
  for (int q : {2, 3, 5, 7}) {
    for (long a = 0; a < q; ++a)
      for (long b = 0; b < q; ++b)
        for (long c = 0; c < q; ++c) {
          PrimeFieldElem x(a, q), y(b, q), z(c, q);
          EXPECT_EQ((x + y) + z, x + (y + z));
          EXPECT_EQ((x * y) * z, x * (y * z));
          EXPECT_EQ(x * (y + z), x * y + x * z);
          EXPECT_EQ(x * y, y * x);
        }
  }
}

TEST(PrimeField, ModulusMismatchAndZeroInverse) {
  EXPECT_THROW(PrimeFieldElem(1, 3) + PrimeFieldElem(1, 5), Error);
  EXPECT_THROW(PrimeFieldElem(0, 7).inverse(), Error);
  EXPECT_EQ(PrimeFieldElem(-1, 5).residue(), 4u);
}

TEST(PrimeField, PrimitiveRootGeneratesGroup) {
  for (int q : {2, 3, 5, 7, 11, 13}) {
    PrimeFieldElem g(primitive_root(q), q);
    std::set<std::uint32_t> seen;
    PrimeFieldElem x(1, q);
    for (int k = 0; k < q - 1; ++k) {
      seen.insert(x.residue());
      x *= g;
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(q - 1));
  }
}

TEST(Series, InvertGeometric) {
  TruncatedSeries f = series_of({QRoot(1), QRoot(-1)}, 3);
  EXPECT_EQ(series_invert(f), series_of({QRoot(1), QRoot(1), QRoot(1), QRoot(1)}, 3));
  TruncatedSeries one = TruncatedSeries::constant(QRoot(1), 5);
  EXPECT_EQ(series_invert(one), one);
}

TEST(Series, InvertWithSqrtCoefficient) {
  TruncatedSeries f = series_of({QRoot(1), -QRoot::sqrt_q(2)}, 2);
  TruncatedSeries g = series_invert(f);
  EXPECT_EQ(g, series_of({QRoot(1), QRoot::sqrt_q(2), QRoot(2)}, 2));
  EXPECT_EQ(f * g, TruncatedSeries::constant(QRoot(1), 2));
}

TEST(Series, InvertRejectsZeroConstant) {
  try {
    series_invert(series_of({QRoot(0), QRoot(1)}, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroConstantTerm);
  }
}

TEST(Series, ExpandExamples) {
  EXPECT_EQ(expand(RationalFunction(poly({1}), poly({1, -1})), 4),
            series_of({QRoot(1), QRoot(1), QRoot(1), QRoot(1), QRoot(1)}, 4));
  EXPECT_EQ(expand(RationalFunction(poly({1, 0, -1}), poly({1, -1})), 3),
            series_of({QRoot(1), QRoot(1), QRoot(0), QRoot(0)}, 3));
  RationalFunction r(poly({1, 0, -2}), poly({1, -1}) * poly({1, -2}));
  EXPECT_EQ(expand(r, 2), series_of({QRoot(1), QRoot(3), QRoot(5)}, 2));
}

TEST(Series, ExpandAgreesWithGeometricConvolutionOracle) {
  // (1-2X^2)/((1-X)(1-2X)): convolve the closed-form geometric coefficients
  // 1 and 2^k, then apply the numerator.
  const std::size_t n = 10;
  RationalFunction r(poly({1, 0, -2}), poly({1, -1}) * poly({1, -2}));
  TruncatedSeries got = expand(r, n);
  std::vector<Rational> prod(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t i = 0; i <= k; ++i) prod[k] += pow(Rational(2), static_cast<long>(i));
  for (std::size_t k = 0; k <= n; ++k) {
    Rational want = prod[k] - (k >= 2 ? 2 * prod[k - 2] : Rational(0));
    EXPECT_EQ(got[k], QRoot(want)) << "X^" << k;
  }
  EXPECT_EQ(got * poly({1, -1}).to_series(n) * poly({1, -2}).to_series(n), poly({1, 0, -2}).to_series(n));
}

TEST(Series, ExpandRejectsDenominatorWithoutConstant) {
  LaurentPoly den = LaurentPoly::monomial(QRoot(1), 1);
  EXPECT_THROW(expand(RationalFunction(poly({1}), den), 3), Error);
}

TEST(Series, RingAxiomsRandomized) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    TruncatedSeries a = random_series(rng, 6, 3), b = random_series(rng, 6, 3), c = random_series(rng, 6, 3);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b, b + a);
  }
}

TEST(Series, DoubleInverseIsIdentity) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    TruncatedSeries f = random_series(rng, 8, 5);
    if (f[0].is_zero()) f[0] = QRoot(1);
    EXPECT_EQ(series_invert(series_invert(f)), f);
    EXPECT_EQ(f * series_invert(f), TruncatedSeries::constant(QRoot(1), 8));
  }
}

TEST(Series, JsonRoundTrip) {
  std::mt19937_64 rng(7);
  TruncatedSeries f = random_series(rng, 5, 7);
  f[2] = QRoot(Rational(mpz_class("123456789012345678901234567890"), 7), Rational(0), 7);
  nlohmann::json j = to_json(f);
  EXPECT_EQ(series_from_json(nlohmann::json::parse(j.dump())), f);
  EXPECT_TRUE(j["coeffs"][2][0].is_string());
  EXPECT_THROW(series_from_json(nlohmann::json::parse("{\"order\":1}")), Error);
}

TEST(LaurentPoly, ArithmeticAndCancellation) {
  LaurentPoly p = LaurentPoly::monomial(QRoot(2), -1) + poly({1});
  LaurentPoly q = LaurentPoly::monomial(QRoot(-2), -1);
  EXPECT_EQ(p + q, poly({1}));
  EXPECT_EQ((p * p).coeff(-2), QRoot(4));
  EXPECT_EQ((p * p).min_degree(), -2);
}
