#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "eisen/cosets.hpp"
#include "eisen/groups.hpp"
#include "eisen/matrix.hpp"
#include "test_support.hpp"

using namespace eisen;
using eisen::testing::random_invertible_fq;
using eisen::testing::random_invertible_rational;
using eisen::testing::random_rational_matrix;

namespace {

const Rational kQ(0);

Matrix<Rational> ints(const std::vector<std::vector<long>>& rows) { return Matrix<Rational>::from_integers(rows, kQ); }

Matrix<Rational> identity(std::size_t n) { return Matrix<Rational>::identity(n, kQ); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::AssertionFailed;
}

}  // namespace

TEST(Matrix, DeterminantInverseRank) {
  Matrix<Rational> a = ints({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  EXPECT_EQ(a.det(), Rational(18));
  EXPECT_EQ(a * a.inverse(), identity(3));
  EXPECT_EQ(ints({{1, 2}, {2, 4}}).rank(), 1u);
  EXPECT_EQ(code_of([] { (void)ints({{1, 2}, {2, 4}}).inverse(); }), ErrorCode::SingularMatrix);
  EXPECT_EQ(code_of([] { (void)(ints({{1, 2}}) * ints({{1, 2}})); }), ErrorCode::DimensionMismatch);
}

TEST(Matrix, JsonAndPrettyPrint) {
  Matrix<Rational> a(2, 2, kQ);
  a(0, 0) = make_rational(-3, 7);
  a(1, 1) = Rational(12);
  nlohmann::json j = to_json(a);
  EXPECT_EQ(j[0][0], "-3/7");
  EXPECT_EQ(rational_matrix_from_json(j), a);
  EXPECT_EQ(a.pretty(), "[-3/7  0]\n[   0 12]\n");
  EXPECT_THROW(rational_matrix_from_json(nlohmann::json::parse("[[\"1\"],[\"1\",\"2\"]]")), Error);
}

TEST(Matrix, FieldMismatchRejected) {
  Matrix<Fq> a = Matrix<Fq>::identity(2, Fq(0, 3));
  Matrix<Fq> b = Matrix<Fq>::identity(2, Fq(0, 5));
  EXPECT_EQ(code_of([&] { (void)(a * b); }), ErrorCode::RingMismatch);
  EXPECT_EQ(code_of([&] { (void)kronecker(a, b); }), ErrorCode::RingMismatch);
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(identity(2), identity(2)), identity(4));
  Matrix<Rational> swap = ints({{0, 1}, {1, 0}});
  EXPECT_EQ(kronecker(swap, identity(2)), ints({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));

  Matrix<Rational> h = ints({{2, 0}, {0, 3}}), g = ints({{5, 0}, {0, 7}});
  Matrix<Rational> t = kronecker(h, g);
  // Direct oracle: entry ((i,a),(j,b)) is h_ij g_ab.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(t(2 * i + a, 2 * j + b), h(i, j) * g(a, b));
  EXPECT_EQ(t, ints({{10, 0, 0, 0}, {0, 14, 0, 0}, {0, 0, 15, 0}, {0, 0, 0, 21}}));
  EXPECT_EQ(t.det(), Rational(44100));
  EXPECT_EQ(code_of([] { (void)kronecker(ints({{1, 2}}), identity(2)); }), ErrorCode::DimensionMismatch);
}

TEST(Kronecker, IdentitiesOverRationals) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = 1 + trial % 3, n = 1 + (trial / 3) % 3;
    Matrix<Rational> h = random_invertible_rational(m, rng), g = random_invertible_rational(n, rng);
    Matrix<Rational> t = kronecker(h, g);
    EXPECT_EQ(t, kronecker(h, identity(n)) * kronecker(identity(m), g));
    EXPECT_EQ(t, kronecker(identity(m), g) * kronecker(h, identity(n)));
    EXPECT_EQ(t.transpose(), kronecker(h.transpose(), g.transpose()));
    EXPECT_EQ(t.det(), pow(h.det(), static_cast<long>(n)) * pow(g.det(), static_cast<long>(m)));
    EXPECT_EQ(star(t), kronecker(star(h), star(g)));
  }
}

TEST(Kronecker, IdentitiesOverPrimeFields) {
  std::mt19937_64 rng(22);
  for (int q : {2, 3, 5}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t m = 1 + trial % 3, n = 1 + (trial / 3) % 3;
      Matrix<Fq> h = random_invertible_fq(m, q, rng), g = random_invertible_fq(n, q, rng);
      Matrix<Fq> im = Matrix<Fq>::identity(m, Fq(0, q)), in = Matrix<Fq>::identity(n, Fq(0, q));
      Matrix<Fq> t = kronecker(h, g);
      EXPECT_EQ(t, kronecker(h, in) * kronecker(im, g));
      EXPECT_EQ(t, kronecker(im, g) * kronecker(h, in));
      EXPECT_EQ(t.transpose(), kronecker(h.transpose(), g.transpose()));
      EXPECT_EQ(t.det(), h.det().pow(static_cast<long>(n)) * g.det().pow(static_cast<long>(m)));
      EXPECT_EQ(star(t), kronecker(star(h), star(g)));
    }
  }
}

TEST(Kronecker, KernelExhaustiveSmallFields) {
  for (int q : {2, 3})
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; n <= 3; ++n) EXPECT_EQ(verify_kronecker_kernel(m, n, q), q - 1) << m << "," << n;
}

TEST(WeylRep, Examples) {
  EXPECT_EQ(weyl_rep(4, 4, kQ), identity(4));
  EXPECT_EQ(weyl_rep(2, 4, kQ), ints({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}}));
  for (std::size_t j = 1; j <= 6; ++j) {
    Matrix<Rational> w = weyl_rep(j, 6, kQ);
    for (std::size_t i = 0; i < 6; ++i) {
      int row_ones = 0, col_ones = 0;
      for (std::size_t k = 0; k < 6; ++k) {
        row_ones += w(i, k) == 1;
        col_ones += w(k, i) == 1;
      }
      EXPECT_EQ(row_ones, 1);
      EXPECT_EQ(col_ones, 1);
    }
  }
  EXPECT_EQ(code_of([] { (void)weyl_rep(0, 4, kQ); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([] { (void)weyl_rep(5, 4, kQ); }), ErrorCode::IndexOutOfRange);
}

TEST(UnipotentRep, ExamplesAndGroupLaw) {
  EXPECT_EQ(unipotent_rep(2, 4, {Rational(0), Rational(0)}, kQ), identity(4));
  EXPECT_EQ(unipotent_rep(2, 4, {Rational(1), Rational(0)}, kQ),
            ints({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
  std::mt19937_64 rng(3);
  for (std::size_t j = 1; j <= 5; ++j) {
    std::vector<Rational> v = random_rational_matrix(1, 6, rng).row(0), w = random_rational_matrix(1, 6, rng).row(0);
    v.resize(6 - j);
    w.resize(6 - j);
    std::vector<Rational> sum(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) sum[k] = v[k] + w[k];
    EXPECT_EQ(unipotent_rep(j, 6, v, kQ) * unipotent_rep(j, 6, w, kQ), unipotent_rep(j, 6, sum, kQ));
  }
  EXPECT_EQ(code_of([] { (void)unipotent_rep(7, 6, {}, kQ); }), ErrorCode::IndexOutOfRange);
}

TEST(EpsilonRep, Examples) {
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t n = 1; n <= m; ++n) EXPECT_EQ(epsilon_rep(m, n, 0, kQ), identity(m * n));
  EXPECT_EQ(epsilon_rep(2, 2, 1, kQ), ints({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 1, 0}}));
  EXPECT_EQ(code_of([] { (void)epsilon_rep(3, 2, 2, kQ); }), ErrorCode::RankOutOfRange);
}

TEST(EpsilonRep, StructureAndRank) {
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t n = 1; n <= m; ++n)
      for (std::size_t r = 0; r < n; ++r) {
        Matrix<Rational> e = epsilon_rep(m, n, r, kQ);
        std::size_t rows_with_single_one = 0;
        for (std::size_t i = 0; i < m * n; ++i) {
          int ones = 0;
          for (std::size_t j = 0; j < m * n; ++j) {
            EXPECT_TRUE(e(i, j) == 0 || e(i, j) == 1);
            ones += e(i, j) == 1;
          }
          rows_with_single_one += ones == 1;
        }
        EXPECT_EQ(rows_with_single_one, m * n - (r > 0 ? 1 : 0)) << m << n << r;
        EXPECT_NE(e.det(), 0);
        // Last row: a 1 in slot (m-r)n followed by the unit rows e_{n-1}..e_{n-r}.
        std::vector<Rational> expect(m * n, Rational(0));
        expect[(m - r) * n - 1] = 1;
        for (std::size_t k = 1; k <= r; ++k) expect[(m - r) * n + (k - 1) * n + (n - k - 1)] = 1;
        EXPECT_EQ(e.row(m * n - 1), expect);
        EXPECT_EQ(reshape_row(e.row(m * n - 1), m, n).rank(), r + 1);
      }
}

TEST(ModulusCharacter, Examples) {
  EXPECT_EQ(modulus_character(ParabolicShape{2, 1}, identity(3)), Rational(1));
  Matrix<Rational> d = ints({{4, 0}, {0, 9}});
  EXPECT_EQ(modulus_character(ParabolicShape{1, 1}, d), make_rational(4, 9));
  Matrix<Rational> p = ints({{2, 0, 7}, {0, 3, -1}, {0, 0, 5}});
  EXPECT_EQ(modulus_character(ParabolicShape{2, 1}, p), make_rational(6, 25));
  EXPECT_EQ(code_of([] { (void)modulus_character(ParabolicShape{1, 1}, ints({{1, 0}, {1, 1}})); }),
            ErrorCode::NotInParabolic);
  Matrix<Rational> neg = ints({{-2, 0}, {0, 1}});
  EXPECT_EQ(modulus_character_abs(ParabolicShape{1, 1}, neg, AbsoluteValue::Archimedean), Rational(2));
  Matrix<Rational> padic = ints({{12, 0}, {0, 1}});
  EXPECT_EQ(modulus_character_abs(ParabolicShape{1, 1}, padic, AbsoluteValue::PAdic, 2), make_rational(1, 4));
}

TEST(StarContext, AntiDiagonalIsInvolution) {
  for (std::size_t r = 1; r <= 5; ++r) EXPECT_EQ(anti_diagonal(r, kQ) * anti_diagonal(r, kQ), identity(r));
  std::mt19937_64 rng(8);
  Matrix<Rational> d = random_invertible_rational(3, rng);
  EXPECT_EQ(twisted_star(twisted_star(d)), d);
  EXPECT_EQ(star(star(d)), d);
}

TEST(ModulusCompatibility, Examples) {
  EXPECT_TRUE(verify_modulus_compatibility(2, 1, identity(2)));
  ModulusCompatibility c = check_modulus_compatibility(2, 1, ints({{3, 0}, {0, 1}}));
  EXPECT_TRUE(c.ok());
  EXPECT_EQ(c.lhs, Rational(3));
  EXPECT_EQ(c.rhs, Rational(3));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix<Rational> p = random_rational_matrix(3, 3, rng);
    for (std::size_t i = 1; i < 3; ++i) p(i, 0) = 0;
    if (p(0, 0) == 0) p(0, 0) = 1;
    if (p.block(1, 1, 2, 2).det() == 0) continue;
    ModulusCompatibility r = check_modulus_compatibility(3, 2, p);
    EXPECT_TRUE(r.ok());
    // Independent evaluation of the right side: |det A|^n |det D|^{-(m-n)}.
    EXPECT_EQ(r.rhs, abs(p(0, 0)) * abs(p(0, 0)) / abs(p.block(1, 1, 2, 2).det()));
  }
  EXPECT_EQ(code_of([] { (void)check_modulus_compatibility(2, 1, ints({{1, 0}, {0, 0}})); }),
            ErrorCode::SingularBlock);
}

TEST(ModulusCompatibility, PlainStarDoesNotStabilize) {
  // With (D^T)^{-1} in place of the twisted star the conjugate leaves the
  // mirabolic parabolic for a generic D.
  Matrix<Rational> p = ints({{1, 1}, {3, 2}});
  Matrix<Rational> eps = epsilon_rep(2, 2, 1, kQ);
  Matrix<Rational> x = eps * kronecker(p, star(p)) * eps.inverse();
  EXPECT_FALSE((ParabolicShape{3, 1}.contains(x)));
  Matrix<Rational> y = eps * kronecker(p, twisted_star(p)) * eps.inverse();
  EXPECT_TRUE((ParabolicShape{3, 1}.contains(y)));
}
