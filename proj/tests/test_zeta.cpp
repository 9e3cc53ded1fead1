#include <gtest/gtest.h>

#include <algorithm>

#include "eisen/rng.hpp"
#include "eisen/zeta.hpp"

using namespace eisen;

namespace {

QRoot qr(const Rational& x, int q) { return QRoot::rational(x, q); }
QRoot qr(long num, long den, int q) { return QRoot::rational(make_rational(num, den), q); }

}  // namespace

TEST(LFactor, Examples) {
  int q = 5;
  Rational c(3);
  // 1/(1 - cX)
  TruncatedSeries s = expand(l_factor(SatakeParams::from_rationals({c}, q), 1, 0), 6);
  for (std::size_t k = 0; k <= 6; ++k) EXPECT_EQ(s[k], qr(pow(c, static_cast<long>(k)), q));
  // 1/(1 - X)^2 has coefficients k + 1.
  TruncatedSeries d = expand(l_factor({qr(1, 1, q), qr(1, 1, q)}, q, 1, 0), 6);
  for (std::size_t k = 0; k <= 6; ++k) EXPECT_EQ(d[k], qr(static_cast<long>(k) + 1, 1, q));
  // L(2s + 1, omega) for n = 2.
  QRoot omega = qr(7, 2, q);
  TruncatedSeries w = expand(l_factor({omega}, q, 2, 2), 6);
  EXPECT_EQ(w[1], qr(0, 1, q));
  EXPECT_EQ(w[2], omega * qr(1, q, q));
  EXPECT_EQ(w[4], omega * omega * qr(1, q * q, q));
  // Half-integral shift.
  TruncatedSeries h = expand(l_factor({qr(1, 1, q)}, q, 1, 1), 2);
  EXPECT_EQ(h[1], QRoot::half_power(q, -1));
  EXPECT_EQ(h[2], qr(1, q, q));
}

TEST(CenterFactor, ExamplesAndGeometricIdentity) {
  for (int q : {2, 3, 5}) {
    TruncatedSeries one = center_factor(1, qr(1, 1, q), q, 8);
    for (std::size_t k = 0; k <= 8; ++k) EXPECT_EQ(one[k], qr(1, 1, q));
    QRoot omega = qr(-3, 4, q);
    TruncatedSeries two = center_factor(2, omega, q, 8);
    EXPECT_EQ(two[1], qr(0, 1, q));
    EXPECT_EQ(two[2], omega * qr(1, q, q));
    EXPECT_EQ(two[4], omega * omega * qr(1, q * q, q));
    for (std::size_t n = 1; n <= 4; ++n) {
      TruncatedSeries c = center_factor(n, omega, q, 12);
      long shift = static_cast<long>(n * (n - 1));
      EXPECT_EQ(c, expand(l_factor({omega}, q, static_cast<int>(n), shift), 12));
      TruncatedSeries killer = TruncatedSeries::constant(qr(1, 1, q), 12) -
                               TruncatedSeries::monomial(omega * QRoot::half_power(q, -shift), n, 12);
      EXPECT_EQ(c * killer, TruncatedSeries::constant(qr(1, 1, q), 12));
    }
  }
}

TEST(Spherical, NormalizationAndRankTwo) {
  for (int q : {2, 3, 7}) {
    auto p2 = SatakeParams::from_rationals({2, make_rational(-1, 3)}, q);
    auto p3 = SatakeParams::from_rationals({2, 5, make_rational(1, 2)}, q);
    EXPECT_EQ(spherical_coeff({{0}}, p2), qr(1, 1, q));
    EXPECT_EQ(spherical_coeff({{0, 0}}, p3), qr(1, 1, q));
    EXPECT_EQ(spherical_coeff({{}}, SatakeParams::from_rationals({4}, q)), qr(1, 1, q));
    // q^{1/2} (a1 + a2) / (q + 1)
    EXPECT_EQ(spherical_coeff({{1}}, p2),
              QRoot::sqrt_q(q) * (p2.alphas[0] + p2.alphas[1]) / qr(q + 1, 1, q));
    // r = (2): (h_2 - e_2/q) / (q + 1), by summing the two Weyl terms by hand.
    QRoot a1 = p2.alphas[0], a2 = p2.alphas[1];
    QRoot h2 = a1 * a1 + a1 * a2 + a2 * a2;
    EXPECT_EQ(spherical_coeff({{2}}, p2), (h2 - a1 * a2 * qr(1, q, q)) / qr(q + 1, 1, q));
  }
}

TEST(Spherical, WeylInvariance) {
  Rng rng(5);
  for (int q : {2, 3, 5})
    for (int trial = 0; trial < 5; ++trial) {
      auto alphas = sample_regular_alphas(3, rng);
      auto base = SatakeParams::from_rationals(alphas, q);
      std::sort(alphas.begin(), alphas.end());
      do {
        auto permuted = SatakeParams::from_rationals(alphas, q);
        for (const auto& t : enumerate_dominant(3, 2)) EXPECT_EQ(spherical_coeff(t, permuted), spherical_coeff(t, base));
      } while (std::next_permutation(alphas.begin(), alphas.end()));
    }
}

TEST(Spherical, RejectsCollisions) {
  auto p = SatakeParams::from_rationals({2, 2}, 3);
  EXPECT_FALSE(p.is_regular());
  try {
    spherical_coeff({{1}}, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonRegularSatake);
  }
  EXPECT_THROW(zeta_gj_torus_sum(p, 4), Error);
  EXPECT_THROW(SatakeParams::from_rationals({0, 1}, 3), Error);
  EXPECT_THROW(SatakeParams::from_rationals({1, 2}, 4), Error);
}

TEST(SectionValue, Examples) {
  int q = 3;
  Monomial a = section_value_on_torus(2, 2, {{0}}, q);
  EXPECT_EQ(a.degree, 0u);
  EXPECT_EQ(a.coeff, qr(1, 1, q));
  Monomial b = section_value_on_torus(2, 2, {{1}}, q);
  EXPECT_EQ(b.degree, 2u);
  EXPECT_EQ(b.coeff, qr(1, q, q));
  Monomial c = section_value_on_torus(3, 3, {{2, 1}}, q);
  EXPECT_EQ(c.degree, 9u);
  EXPECT_EQ(c.coeff, QRoot::half_power(q, -9));
  EXPECT_THROW(section_value_on_torus(3, 3, {{1, 2}}, q), Error);
  EXPECT_THROW(section_value_on_torus(2, 3, {{1, 0}}, q), Error);
}

TEST(GodementJacquet, RankOneIsCenterFactor) {
  for (int q : {2, 3, 5}) {
    auto p = SatakeParams::from_rationals({make_rational(-2, 3)}, q);
    EXPECT_EQ(zeta_gj_torus_sum(p, 10), center_factor(1, p.omega(), q, 10));
    EXPECT_NO_THROW(verify_gj_identity(p, 10));
  }
}

TEST(GodementJacquet, Examples) {
  auto p = SatakeParams::from_rationals({2, 3}, 5);
  TruncatedSeries z = zeta_gj_torus_sum(p, 6);
  EXPECT_EQ(z[0], qr(1, 1, 5));
  // 1/((1-2X)(1-3X)) has coefficients 3^{k+1} - 2^{k+1}.
  for (std::size_t k = 0; k <= 6; ++k)
    EXPECT_EQ(z[k], qr(pow(Rational(3), static_cast<long>(k) + 1) - pow(Rational(2), static_cast<long>(k) + 1), 5));
  EXPECT_TRUE(verify_gj_identity(SatakeParams::from_rationals({1, make_rational(1, 2)}, 3), 10).passed());
  EXPECT_TRUE(verify_gj_identity(SatakeParams::from_rationals({1, 2, 4}, 2), 9).passed());
}

TEST(GodementJacquet, RandomSweep) {
  Rng rng(11);
  for (std::size_t n = 1; n <= 3; ++n)
    for (int q : {2, 3, 5})
      for (int trial = 0; trial < 4; ++trial) {
        auto p = SatakeParams::from_rationals(sample_regular_alphas(n, rng), q);
        IdentityReport r = gj_identity_report(p, 8);
        EXPECT_TRUE(r.passed()) << p.str() << " " << r.mismatch_detail();
      }
}

TEST(GodementJacquet, LedgerPartialSumsReproduceSeries) {
  auto p = SatakeParams::from_rationals({2, make_rational(1, 3), -1}, 3);
  IdentityReport r = gj_identity_report(p, 6);
  const auto& rows = r.ledger.rows;
  ASSERT_FALSE(rows.empty());
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), [](const LedgerRow& x, const LedgerRow& y) {
    return x.degree != y.degree ? x.degree < y.degree : x.cell < y.cell;
  }));
  TruncatedSeries rebuilt(6);
  for (const auto& row : rows) rebuilt[row.degree] += row.contribution;
  EXPECT_EQ(rebuilt, r.ledger.torus_series(6, 3));
  EXPECT_EQ(rebuilt * center_factor(3, p.omega(), 3, 6), r.actual);
  std::string csv = r.ledger.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find(',')), "exps");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), rows.size() + 1);
  EXPECT_EQ(r.ledger.to_json().size(), rows.size());
}

TEST(LocalIntegral, RankOneIsTrivial) {
  for (std::size_t m = 1; m <= 4; ++m) {
    auto p = SatakeParams::from_rationals({5}, 3);
    EXPECT_EQ(local_integral_torus_sum(m, p, 9), TruncatedSeries::constant(qr(1, 1, 3), 9));
    IdentityReport r = verify_local_identity(m, p, 9);
    EXPECT_TRUE(r.variant("A")->matches());
    EXPECT_TRUE(r.variant("B")->matches());
  }
}

TEST(LocalIntegral, SquareCoefficients) {
  for (int q : {2, 3, 5}) {
    auto p = SatakeParams::from_rationals({2, make_rational(-1, 2)}, q);
    QRoot a1 = p.alphas[0], a2 = p.alphas[1];
    TruncatedSeries s = local_integral_torus_sum(2, p, 5);
    EXPECT_EQ(s[1], qr(0, 1, q));
    EXPECT_EQ(s[2], (a1 + a2) * QRoot::half_power(q, -1));
    EXPECT_EQ(s[3], qr(0, 1, q));
    EXPECT_EQ(s[4], qr(1, q, q) * (a1 * a1 + a1 * a2 + a2 * a2) - qr(1, q * q, q) * a1 * a2);
  }
}

TEST(LocalIntegral, VariantsForSquareShape) {
  auto p = SatakeParams::from_rationals({2, 3}, 5);
  IdentityReport r = verify_local_identity(2, p, 8);
  EXPECT_TRUE(r.variant("A")->matches());
  ASSERT_FALSE(r.variant("B")->matches());
  // The two denominators are 1 - w q^{-2} X^4 and 1 - w q^{-1} X^2, so the
  // series part company at X^m already.
  EXPECT_EQ(*r.variant("B")->first_mismatch, 2u);
  EXPECT_TRUE(verify_local_identity(3, SatakeParams::from_rationals({1, make_rational(1, 2)}, 2), 9)
                  .variant("A")
                  ->matches());
}

TEST(LocalIntegral, VariantASweepAndVariantBDegree) {
  Rng rng(12);
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 2}, {3, 3}, {4, 2}})
    for (int q : {2, 3, 5})
      for (int trial = 0; trial < 3; ++trial) {
        auto p = SatakeParams::from_rationals(sample_regular_alphas(n, rng), q);
        IdentityReport r = local_identity_report(m, p, 9);
        EXPECT_TRUE(r.variant("A")->matches()) << m << n << p.str();
        ASSERT_FALSE(r.variant("B")->matches());
        EXPECT_EQ(*r.variant("B")->first_mismatch, m);
      }
}

TEST(LocalIntegral, HeightCutoffIsComplete) {
  Rng rng(13);
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 2}, {3, 3}})
    for (int trial = 0; trial < 3; ++trial) {
      auto p = SatakeParams::from_rationals(sample_regular_alphas(n, rng), 3);
      std::size_t order = 9;
      long h = ceil_div(static_cast<long>(order), static_cast<long>(m));
      TruncatedSeries base = local_integral_torus_sum(m, p, order);
      for (long extra = 1; extra <= 3; ++extra) EXPECT_EQ(local_integral_torus_sum(m, p, order, h + extra), base);
    }
  EXPECT_THROW(local_integral_torus_sum(2, SatakeParams::from_rationals({1, 2, 3}, 2), 4), Error);
}

TEST(IdentityReport, FailureCarriesFirstMismatch) {
  auto p = SatakeParams::from_rationals({2, 3}, 5);
  IdentityReport r = gj_identity_report(p, 5);
  r.variants = {make_variant("wrong", "L(s,pi)^2", l_factor(p, 1, 0) * l_factor(p, 1, 0), r.actual)};
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(*r.variants[0].first_mismatch, 1u);
  nlohmann::json j = r.to_json();
  EXPECT_EQ(j["variants"][0]["first_mismatch"]["degree"], 1);
  EXPECT_FALSE(j["passed"].get<bool>());
}
