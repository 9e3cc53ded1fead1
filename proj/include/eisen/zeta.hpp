#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisen/errors.hpp"
#include "eisen/padic.hpp"
#include "eisen/qroot.hpp"
#include "eisen/series.hpp"

namespace eisen {

/// Satake parameters of an unramified representation of GL_n.
struct SatakeParams {
  std::vector<QRoot> alphas;
  int q = 2;

  SatakeParams() = default;
  SatakeParams(std::vector<QRoot> a, int q_) : alphas(std::move(a)), q(q_) {
    if (q < 2 || !is_prime(q)) fail(ErrorCode::DomainError, "q = " + std::to_string(q) + " is not prime");
    if (alphas.empty()) fail(ErrorCode::BadShape, "need at least one Satake parameter");
    for (auto& x : alphas) {
      if (x.is_zero()) fail(ErrorCode::DomainError, "Satake parameters must be nonzero");
      x = x + QRoot::rational(Rational(0), q);  // attach the modulus
    }
  }
  static SatakeParams from_rationals(const std::vector<Rational>& a, int q) {
    std::vector<QRoot> v;
    for (const auto& x : a) v.push_back(QRoot::rational(x, q));
    return {v, q};
  }

  std::size_t n() const { return alphas.size(); }

  bool is_regular() const {
    for (std::size_t i = 0; i < alphas.size(); ++i)
      for (std::size_t j = i + 1; j < alphas.size(); ++j)
        if (alphas[i] == alphas[j]) return false;
    return true;
  }
  void require_regular() const {
    if (!is_regular()) fail(ErrorCode::NonRegularSatake, "Satake parameters " + str() + " are not pairwise distinct");
  }

  /// omega(p) = product of the alphas.
  QRoot omega() const {
    QRoot w = QRoot::rational(Rational(1), q);
    for (const auto& a : alphas) w *= a;
    return w;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < alphas.size(); ++i) s += (i ? "," : "") + alphas[i].str();
    return s + ")";
  }
};

/// prod_i (1 - alpha_i q^{-b} X^a)^{-1} with b = twice_b / 2.
inline RationalFunction l_factor(const std::vector<QRoot>& alphas, int q, int a, long twice_b) {
  if (a < 1) fail(ErrorCode::DomainError, "L-factor needs a >= 1");
  LaurentPoly den(QRoot::rational(Rational(1), q));
  QRoot shift = QRoot::half_power(q, -twice_b);
  for (const auto& alpha : alphas)
    den *= LaurentPoly(QRoot::rational(Rational(1), q)) - LaurentPoly::monomial(alpha * shift, a);
  return RationalFunction(LaurentPoly(QRoot::rational(Rational(1), q)), den);
}

inline RationalFunction l_factor(const SatakeParams& params, int a, long twice_b) {
  return l_factor(params.alphas, params.q, a, twice_b);
}

/// sum_j omega^j q^{-j n(n-1)/2} X^{jn}, truncated at X^order.
inline TruncatedSeries center_factor(std::size_t n, const QRoot& omega, int q, std::size_t order) {
  if (n < 1) fail(ErrorCode::BadShape, "n must be positive");
  if (omega.is_zero()) fail(ErrorCode::DomainError, "central character value must be nonzero");
  TruncatedSeries s(order);
  QRoot step = omega * pow(QRoot::rational(Rational(q), q), -static_cast<long>(n * (n - 1) / 2));
  QRoot term = QRoot::rational(Rational(1), q);
  for (std::size_t d = 0; d <= order; d += n) {
    s[d] = term;
    term *= step;
  }
  return s;
}

/// Macdonald's formula for the normalized spherical matrix coefficient at
/// diag(p^{r_1}, ..., p^{r_{n-1}}, 1).
inline QRoot spherical_coeff(const DominantCochar& t, const SatakeParams& params) {
  t.require_dominant();
  std::size_t n = params.n();
  if (t.rank() != n)
    fail(ErrorCode::DimensionMismatch, "cocharacter " + t.str() + " does not match " + std::to_string(n) + " parameters");
  params.require_regular();
  int q = params.q;
  std::vector<long> lambda = t.exps;
  lambda.push_back(0);

  QRoot inv_q = QRoot::rational(Rational(1, q), q);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  QRoot sum = QRoot::rational(Rational(0), q);
  do {
    QRoot term = QRoot::rational(Rational(1), q);
    for (std::size_t i = 0; i < n; ++i) {
      const QRoot& zi = params.alphas[perm[i]];
      for (std::size_t j = i + 1; j < n; ++j) {
        const QRoot& zj = params.alphas[perm[j]];
        term *= (zi - inv_q * zj) / (zi - zj);
      }
      term *= pow(zi, lambda[i]);
    }
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));

  long rho = 0;
  for (std::size_t i = 1; i <= n; ++i) rho += static_cast<long>(n - 2 * i + 1) * lambda[i - 1];
  Rational poincare = phi_poly(n, Rational(1, q)) / pow(1 - Rational(1, q), static_cast<long>(n));
  return QRoot::half_power(q, -rho) * sum / QRoot::rational(poincare, q);
}

/// coeff * X^degree.
struct Monomial {
  std::size_t degree = 0;
  QRoot coeff;
};

/// |det t|^{ms + m/2} for t = diag(p^{r_1}, ..., p^{r_{n-1}}, 1).
inline Monomial section_value_on_torus(std::size_t m, std::size_t n, const DominantCochar& t, int q) {
  t.require_dominant();
  if (n < 1 || n > m) fail(ErrorCode::BadShape, "section value needs 1 <= n <= m");
  if (t.rank() != n) fail(ErrorCode::DimensionMismatch, "cocharacter " + t.str() + " is not for GL_" + std::to_string(n));
  long total = t.total();
  return {static_cast<std::size_t>(static_cast<long>(m) * total), QRoot::half_power(q, -static_cast<long>(m) * total)};
}

struct LedgerRow {
  DominantCochar cell;
  QRoot mu;
  QRoot spherical;
  std::size_t degree = 0;
  QRoot weight;        ///< scalar of the |det t| monomial
  QRoot contribution;  ///< mu * spherical * weight
  QRoot partial_sum;   ///< running total of contributions at this degree
};

/// Per-cell audit trail of a torus sum, sorted by (degree, exponents).
struct TorusSummandLedger {
  std::vector<LedgerRow> rows;

  /// Rebuilds the torus polynomial from the last partial sum at each degree.
  TruncatedSeries torus_series(std::size_t order, int q) const {
    TruncatedSeries s = TruncatedSeries::constant(QRoot::rational(Rational(0), q), order);
    for (const auto& r : rows)
      if (r.degree <= order) s[r.degree] = r.partial_sum;
    return s;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "exps,mu_numerator,mu_denominator,spherical,degree,weight,contribution,partial_sum\n";
    for (const auto& r : rows) {
      std::string e;
      for (std::size_t i = 0; i < r.cell.exps.size(); ++i) e += (i ? " " : "") + std::to_string(r.cell.exps[i]);
      os << e << ',' << r.mu.a().get_num().get_str() << ',' << r.mu.a().get_den().get_str() << ',' << r.spherical
         << ',' << r.degree << ',' << r.weight << ',' << r.contribution << ',' << r.partial_sum << '\n';
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
      out.push_back({{"exps", r.cell.exps},
                     {"mu", eisen::to_json(r.mu)},
                     {"spherical", eisen::to_json(r.spherical)},
                     {"degree", r.degree},
                     {"weight", eisen::to_json(r.weight)},
                     {"contribution", eisen::to_json(r.contribution)},
                     {"partial_sum", eisen::to_json(r.partial_sum)}});
    return out;
  }
};

/// sum over dominant cells of mu(t) c(t) q^{-b |t|/2} X^{a |t|}, where
/// |t| = r_1 + ... + r_{n-1}; cells beyond X^order are skipped.
inline TorusSummandLedger torus_ledger(const SatakeParams& params, std::size_t order, std::size_t degree_scale,
                                       long twice_weight_scale, long height) {
  params.require_regular();
  std::size_t n = params.n();
  int q = params.q;
  std::vector<LedgerRow> rows;
  for (const auto& cell : enumerate_dominant(n, height)) {
    std::size_t degree = degree_scale * static_cast<std::size_t>(cell.total());
    if (degree > order) continue;
    LedgerRow r;
    r.cell = cell;
    r.mu = macdonald_measure(cell, n, q);
    r.spherical = spherical_coeff(cell, params);
    r.degree = degree;
    r.weight = QRoot::half_power(q, -twice_weight_scale * cell.total());
    r.contribution = r.mu * r.spherical * r.weight;
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const LedgerRow& x, const LedgerRow& y) {
    if (x.degree != y.degree) return x.degree < y.degree;
    return x.cell < y.cell;
  });
  QRoot running = QRoot::rational(Rational(0), q);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 || rows[i].degree != rows[i - 1].degree) running = QRoot::rational(Rational(0), q);
    running += rows[i].contribution;
    rows[i].partial_sum = running;
  }
  return {rows};
}

inline long ceil_div(long a, long b) { return (a + b - 1) / b; }

inline TorusSummandLedger gj_ledger(const SatakeParams& params, std::size_t order) {
  return torus_ledger(params, order, 1, static_cast<long>(params.n()) - 1, static_cast<long>(order));
}

inline TorusSummandLedger local_ledger(std::size_t m, const SatakeParams& params, std::size_t order,
                                       std::optional<long> height = std::nullopt) {
  if (m < 1) fail(ErrorCode::BadShape, "m must be positive");
  if (params.n() > m) fail(ErrorCode::BadShape, "local integral needs n <= m");
  long h = height ? *height : ceil_div(static_cast<long>(order), static_cast<long>(m));
  return torus_ledger(params, order, m, static_cast<long>(m), h);
}

/// Godement-Jacquet integral of the spherical data, summed over the torus.
inline TruncatedSeries zeta_gj_torus_sum(const SatakeParams& params, std::size_t order) {
  return gj_ledger(params, order).torus_series(order, params.q) *
         center_factor(params.n(), params.omega(), params.q, order);
}

/// The local integral c(I, s) as a torus sum.
inline TruncatedSeries local_integral_torus_sum(std::size_t m, const SatakeParams& params, std::size_t order,
                                                std::optional<long> height = std::nullopt) {
  return local_ledger(m, params, order, height).torus_series(order, params.q);
}

/// L(m(s+1/2) - (n-1)/2, pi) / L(mn(s+1/2), omega).
inline RationalFunction local_variant_a(std::size_t m, const SatakeParams& params) {
  long n = static_cast<long>(params.n()), mm = static_cast<long>(m);
  return l_factor(params, static_cast<int>(m), mm - n + 1) /
         l_factor({params.omega()}, params.q, static_cast<int>(mm * n), mm * n);
}

/// L(m(s+1/2) - (n-1)/2, pi) / L(m(s+1/2), omega).
inline RationalFunction local_variant_b(std::size_t m, const SatakeParams& params) {
  long n = static_cast<long>(params.n()), mm = static_cast<long>(m);
  return l_factor(params, static_cast<int>(m), mm - n + 1) / l_factor({params.omega()}, params.q, static_cast<int>(m), mm);
}

struct VariantCheck {
  std::string name;
  std::string formula;
  TruncatedSeries expected;
  std::optional<std::size_t> first_mismatch;

  bool matches() const { return !first_mismatch; }
};

struct IdentityReport {
  std::string identity;  ///< "gj" or "local"
  std::size_t m = 0;     ///< 0 for the Godement-Jacquet identity
  SatakeParams params;
  std::size_t order = 0;
  TruncatedSeries actual;
  std::vector<VariantCheck> variants;
  TorusSummandLedger ledger;

  const VariantCheck* variant(const std::string& name) const {
    for (const auto& v : variants)
      if (v.name == name) return &v;
    return nullptr;
  }
  bool passed() const {
    return std::any_of(variants.begin(), variants.end(), [](const VariantCheck& v) { return v.matches(); });
  }
  std::string mismatch_detail() const {
    std::string s;
    for (const auto& v : variants) {
      if (v.matches()) continue;
      std::size_t k = *v.first_mismatch;
      s += "variant " + v.name + " differs at X^" + std::to_string(k) + ": expected " + v.expected[k].str() +
           ", torus sum " + actual[k].str() + "; ";
    }
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json alphas = nlohmann::json::array();
    for (const auto& a : params.alphas) alphas.push_back(eisen::to_json(a));
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : variants) {
      nlohmann::json entry = {{"name", v.name}, {"formula", v.formula}, {"matches", v.matches()}};
      if (v.first_mismatch) {
        std::size_t k = *v.first_mismatch;
        entry["first_mismatch"] = {
            {"degree", k}, {"expected", eisen::to_json(v.expected[k])}, {"actual", eisen::to_json(actual[k])}};
      } else {
        entry["first_mismatch"] = nullptr;
      }
      vs.push_back(entry);
    }
    return {{"identity", identity}, {"m", m},        {"n", params.n()},  {"q", params.q},
            {"alphas", alphas},     {"order", order}, {"passed", passed()}, {"variants", vs},
            {"series", eisen::to_json(actual)}};
  }
};

inline VariantCheck make_variant(std::string name, std::string formula, const RationalFunction& f,
                                 const TruncatedSeries& actual) {
  TruncatedSeries expected = expand(f, actual.order());
  return {std::move(name), std::move(formula), expected, first_mismatch(actual, expected)};
}

inline IdentityReport gj_identity_report(const SatakeParams& params, std::size_t order) {
  IdentityReport r;
  r.identity = "gj";
  r.params = params;
  r.order = order;
  r.ledger = gj_ledger(params, order);
  r.actual = r.ledger.torus_series(order, params.q) * center_factor(params.n(), params.omega(), params.q, order);
  r.variants.push_back(make_variant("L", "L(s,pi)", l_factor(params, 1, 0), r.actual));
  return r;
}

inline IdentityReport verify_gj_identity(const SatakeParams& params, std::size_t order) {
  IdentityReport r = gj_identity_report(params, order);
  if (!r.passed()) fail(ErrorCode::IdentityFailed, "Godement-Jacquet identity: " + r.mismatch_detail());
  return r;
}

inline IdentityReport local_identity_report(std::size_t m, const SatakeParams& params, std::size_t order) {
  IdentityReport r;
  r.identity = "local";
  r.m = m;
  r.params = params;
  r.order = order;
  r.ledger = local_ledger(m, params, order);
  r.actual = r.ledger.torus_series(order, params.q);
  r.variants.push_back(make_variant("A", "L(m(s+1/2)-(n-1)/2,pi)/L(mn(s+1/2),omega)", local_variant_a(m, params), r.actual));
  r.variants.push_back(make_variant("B", "L(m(s+1/2)-(n-1)/2,pi)/L(m(s+1/2),omega)", local_variant_b(m, params), r.actual));
  return r;
}

inline IdentityReport verify_local_identity(std::size_t m, const SatakeParams& params, std::size_t order) {
  IdentityReport r = local_identity_report(m, params, order);
  if (!r.passed()) fail(ErrorCode::IdentityFailed, "local identity: " + r.mismatch_detail());
  return r;
}

}  // namespace eisen
