#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "eisen/arch.hpp"
#include "eisen/cosets.hpp"
#include "eisen/groups.hpp"
#include "eisen/padic.hpp"
#include "eisen/report.hpp"
#include "eisen/rng.hpp"
#include "eisen/zeta.hpp"

namespace eisen {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cosets", "stabilizers", "kron-props", "gj", "local-identity",
                                              "arch-iwasawa"};
  return names;
}

using Shape2 = std::array<std::size_t, 2>;
using Shape3 = std::array<std::size_t, 3>;

struct RunConfig {
  std::string suite = "all";
  std::uint64_t seed = 1729;
  std::size_t order = 12;
  std::size_t samples = 20;
  std::vector<int> q_values{2, 3, 5};
  std::vector<std::size_t> gj_ranks{1, 2, 3};
  std::vector<Shape2> local_shapes{{2, 1}, {2, 2}, {3, 2}, {3, 3}};
  std::vector<Shape3> coset_shapes{{2, 2, 2}, {2, 2, 3}, {2, 2, 5}, {3, 2, 2}, {3, 3, 2}};
  std::vector<Shape3> stabilizer_shapes{{2, 2, 2}, {2, 2, 3}, {3, 2, 2}};
  std::vector<Shape2> tensor_cases{{2, 2}, {2, 3}, {3, 2}};
  std::vector<Shape3> orbit_lemma_shapes{{2, 2, 3}, {3, 2, 2}, {3, 3, 5}};
  std::size_t orbit_lemma_trials = 200;
  std::vector<Shape3> kernel_shapes{{2, 2, 2}, {2, 3, 2}, {3, 3, 2}, {2, 2, 3}};
  std::size_t kron_checks = 1000;
  std::vector<Shape2> modulus_shapes{{2, 1}, {3, 2}, {4, 2}};
  std::size_t modulus_checks = 200;
  std::vector<int> cartan_primes{2, 3, 5};
  std::size_t cartan_checks = 500;
  std::size_t macdonald_height = 3;
  std::size_t arch_points = 500;
  std::size_t arch_max_rank = 8;
  std::vector<Shape2> arch_shapes{{2, 2}, {3, 2}, {3, 3}};
  std::size_t arch_section_points = 5;
  double arch_tolerance = 1e-10;
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::size_t jobs = 1;
  bool timings = false;

  void validate() const {
    auto bad = [](const std::string& what) { fail(ErrorCode::ConfigError, what); };
    if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
      bad("unknown suite '" + suite + "'");
    if (budget == 0 || jobs == 0 || samples == 0) bad("budgets, jobs and sample counts must be positive");
    if (!(arch_tolerance > 0)) bad("tolerances must be positive");
    for (int q : q_values)
      if (!is_prime(q)) bad("q = " + std::to_string(q) + " is not prime");
    for (int p : cartan_primes)
      if (!is_prime(p)) bad("p = " + std::to_string(p) + " is not prime");
    for (auto n : gj_ranks)
      if (n < 1) bad("ranks must be positive");
    for (const auto& s : coset_shapes)
      if (s[0] < 1 || s[1] < 1 || !is_prime(static_cast<long>(s[2]))) bad("invalid coset shape");
    for (const auto& s : stabilizer_shapes)
      if (s[1] < 1 || s[1] > s[0] || !is_prime(static_cast<long>(s[2]))) bad("invalid stabilizer shape");
    for (const auto& s : local_shapes)
      if (s[1] < 1 || s[1] > s[0]) bad("local-identity shapes need 1 <= n <= m");
    for (const auto& s : arch_shapes)
      if (s[1] < 1 || s[1] > s[0]) bad("arch shapes need 1 <= n <= m");
    for (const auto& s : modulus_shapes)
      if (s[1] < 1 || s[1] > s[0]) bad("modulus shapes need 1 <= n <= m");
    if (arch_max_rank < 1) bad("arch_max_rank must be positive");
  }

  nlohmann::json to_json() const {
    return {{"suite", suite},
            {"seed", seed},
            {"order", order},
            {"samples", samples},
            {"q_values", q_values},
            {"gj_ranks", gj_ranks},
            {"local_shapes", local_shapes},
            {"coset_shapes", coset_shapes},
            {"stabilizer_shapes", stabilizer_shapes},
            {"tensor_cases", tensor_cases},
            {"orbit_lemma_shapes", orbit_lemma_shapes},
            {"orbit_lemma_trials", orbit_lemma_trials},
            {"kernel_shapes", kernel_shapes},
            {"kron_checks", kron_checks},
            {"modulus_shapes", modulus_shapes},
            {"modulus_checks", modulus_checks},
            {"cartan_primes", cartan_primes},
            {"cartan_checks", cartan_checks},
            {"macdonald_height", macdonald_height},
            {"arch_points", arch_points},
            {"arch_max_rank", arch_max_rank},
            {"arch_shapes", arch_shapes},
            {"arch_section_points", arch_section_points},
            {"arch_tolerance", arch_tolerance},
            {"budget", budget},
            {"timings", timings}};
  }

  /// Overrides the fields present in j; unknown keys are rejected.
  void apply_json(const nlohmann::json& j) {
    if (!j.is_object()) fail(ErrorCode::ConfigError, "configuration must be a JSON object");
    std::map<std::string, std::function<void(const nlohmann::json&)>> setters{
        {"suite", [&](const nlohmann::json& v) { v.get_to(suite); }},
        {"seed", [&](const nlohmann::json& v) { v.get_to(seed); }},
        {"order", [&](const nlohmann::json& v) { v.get_to(order); }},
        {"samples", [&](const nlohmann::json& v) { v.get_to(samples); }},
        {"q_values", [&](const nlohmann::json& v) { v.get_to(q_values); }},
        {"gj_ranks", [&](const nlohmann::json& v) { v.get_to(gj_ranks); }},
        {"local_shapes", [&](const nlohmann::json& v) { v.get_to(local_shapes); }},
        {"coset_shapes", [&](const nlohmann::json& v) { v.get_to(coset_shapes); }},
        {"stabilizer_shapes", [&](const nlohmann::json& v) { v.get_to(stabilizer_shapes); }},
        {"tensor_cases", [&](const nlohmann::json& v) { v.get_to(tensor_cases); }},
        {"orbit_lemma_shapes", [&](const nlohmann::json& v) { v.get_to(orbit_lemma_shapes); }},
        {"orbit_lemma_trials", [&](const nlohmann::json& v) { v.get_to(orbit_lemma_trials); }},
        {"kernel_shapes", [&](const nlohmann::json& v) { v.get_to(kernel_shapes); }},
        {"kron_checks", [&](const nlohmann::json& v) { v.get_to(kron_checks); }},
        {"modulus_shapes", [&](const nlohmann::json& v) { v.get_to(modulus_shapes); }},
        {"modulus_checks", [&](const nlohmann::json& v) { v.get_to(modulus_checks); }},
        {"cartan_primes", [&](const nlohmann::json& v) { v.get_to(cartan_primes); }},
        {"cartan_checks", [&](const nlohmann::json& v) { v.get_to(cartan_checks); }},
        {"macdonald_height", [&](const nlohmann::json& v) { v.get_to(macdonald_height); }},
        {"arch_points", [&](const nlohmann::json& v) { v.get_to(arch_points); }},
        {"arch_max_rank", [&](const nlohmann::json& v) { v.get_to(arch_max_rank); }},
        {"arch_shapes", [&](const nlohmann::json& v) { v.get_to(arch_shapes); }},
        {"arch_section_points", [&](const nlohmann::json& v) { v.get_to(arch_section_points); }},
        {"arch_tolerance", [&](const nlohmann::json& v) { v.get_to(arch_tolerance); }},
        {"budget", [&](const nlohmann::json& v) { v.get_to(budget); }},
        {"jobs", [&](const nlohmann::json& v) { v.get_to(jobs); }},
        {"timings", [&](const nlohmann::json& v) { v.get_to(timings); }},
    };
    for (const auto& [key, value] : j.items()) {
      auto it = setters.find(key);
      if (it == setters.end()) fail(ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
      try {
        it->second(value);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ConfigError, "bad value for '" + key + "': " + e.what());
      }
    }
  }
};

/// A planned check: kind + params fully determine its execution.
struct CheckSpec {
  std::string id;
  std::string suite;
  std::string kind;
  nlohmann::json params;
};

namespace detail {

inline nlohmann::json rationals_to_json(const std::vector<Rational>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : xs) out.push_back(x.get_str());
  return out;
}

inline std::vector<Rational> rationals_from_json(const nlohmann::json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(parse_rational(x.get<std::string>()));
  return out;
}

inline std::string shape_tag(std::initializer_list<std::pair<const char*, long>> parts) {
  std::string s;
  for (const auto& [k, v] : parts) s += (s.empty() ? "" : ",") + std::string(k) + "=" + std::to_string(v);
  return s;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string index_tag(std::size_t k) {
  std::string s = std::to_string(k);
  return "#" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

/// Number of rank-k m x n matrices over F_q.
inline std::uint64_t rank_stratum_size(std::size_t m, std::size_t n, std::size_t k, std::uint64_t q) {
  mpz_class num = 1, den = 1, qq = static_cast<unsigned long>(q);
  for (std::size_t i = 0; i < k; ++i) {
    mpz_class qi;
    mpz_pow_ui(qi.get_mpz_t(), qq.get_mpz_t(), i);
    mpz_class qm, qn, qk;
    mpz_pow_ui(qm.get_mpz_t(), qq.get_mpz_t(), m);
    mpz_pow_ui(qn.get_mpz_t(), qq.get_mpz_t(), n);
    mpz_pow_ui(qk.get_mpz_t(), qq.get_mpz_t(), k);
    num *= (qm - qi) * (qn - qi);
    den *= qk - qi;
  }
  mpz_class r = num / den;
  return r.get_ui();
}

struct Outcome {
  bool ok = true;
  std::string detail;
  nlohmann::json payload = nlohmann::json::object();
};

inline Outcome check_orbit_count(const nlohmann::json& p) {
  auto m = p.at("m").get<std::size_t>(), n = p.at("n").get<std::size_t>();
  int q = p.at("q").get<int>();
  OrbitTable t = enumerate_orbits(m, n, q, p.at("budget").get<std::uint64_t>());
  Outcome o;
  o.payload["orbits"] = t.orbits.size();
  o.payload["points"] = t.points;
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& orb : t.orbits) sizes.push_back(orb.size);
  o.payload["sizes"] = sizes;
  if (n > m) {
    o.ok = false;
    o.detail = std::to_string(t.orbits.size()) + " orbits, expected " + std::to_string(n) +
               "; epsilon_r is only defined for n <= m";
    return o;
  }
  std::vector<std::size_t> owner;
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& orb : t.orbits)
      if (std::find(orb.epsilon_ranks.begin(), orb.epsilon_ranks.end(), r) != orb.epsilon_ranks.end())
        owner.push_back(orb.id);
  std::vector<std::size_t> distinct = owner;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  o.ok = t.orbits.size() == n && owner.size() == n && distinct.size() == n && t.rank_certified;
  o.detail = std::to_string(t.orbits.size()) + " orbits on " + std::to_string(t.points) + " points, representatives in " +
             std::to_string(distinct.size()) + " distinct orbits";
  return o;
}

inline Outcome check_orbit_sizes(const nlohmann::json& p) {
  auto m = p.at("m").get<std::size_t>(), n = p.at("n").get<std::size_t>();
  int q = p.at("q").get<int>();
  OrbitTable t = enumerate_orbits(m, n, q, p.at("budget").get<std::uint64_t>());
  Outcome o;
  std::uint64_t total = 0;
  for (const auto& orb : t.orbits) {
    std::uint64_t want = rank_stratum_size(m, n, orb.rank, static_cast<std::uint64_t>(q)) / static_cast<std::uint64_t>(q - 1);
    total += orb.size;
    if (orb.size != want && o.ok) {
      o.ok = false;
      o.payload["counterexample"] = {{"orbit", orb.id}, {"rank", orb.rank}, {"size", orb.size}, {"stratum", want}};
    }
  }
  o.ok = o.ok && total == t.points;
  o.detail = std::to_string(t.orbits.size()) + " orbits, sizes " + (o.ok ? "match" : "differ from") + " rank strata";
  o.payload["table"] = t.to_json();
  return o;
}

inline Outcome check_stabilizer(const nlohmann::json& p) {
  auto m = p.at("m").get<std::size_t>(), n = p.at("n").get<std::size_t>(), r = p.at("r").get<std::size_t>();
  int q = p.at("q").get<int>();
  std::uint64_t budget = p.at("budget").get<std::uint64_t>();
  KroneckerImageSet brute = stabilizer_bruteforce(m, n, r, q, budget);
  KroneckerImageSet predicted = predicted_stabilizer(m, n, r, q, budget);
  Outcome o;
  o.ok = brute == predicted;
  o.detail = "brute force " + std::to_string(brute.size()) + " elements, prediction " +
             std::to_string(predicted.size());
  if (!o.ok) {
    for (const auto& x : brute)
      if (!predicted.count(x)) {
        o.payload["unpredicted"] = std::vector<int>(x.begin(), x.end());
        break;
      }
    for (const auto& x : predicted)
      if (!brute.count(x)) {
        o.payload["missing"] = std::vector<int>(x.begin(), x.end());
        break;
      }
  }
  o.payload["size"] = brute.size();
  return o;
}

inline Outcome check_tensor_lemma(const nlohmann::json& p) {
  Outcome o;
  o.ok = verify_tensor_inv_lemma(p.at("l").get<std::size_t>(), p.at("q").get<int>(), p.at("budget").get<std::uint64_t>());
  o.detail = o.ok ? "equivalence holds on every pair" : "equivalence fails";
  return o;
}

inline Outcome check_orbit_lemma(const nlohmann::json& p) {
  Outcome o;
  o.ok = verify_orbit_lemma(p.at("m").get<std::size_t>(), p.at("n").get<std::size_t>(), p.at("q").get<int>(),
                            p.at("trials").get<std::size_t>(), p.at("seed").get<std::uint64_t>());
  o.detail = o.ok ? "all sampled trials agree" : "a sampled trial disagrees";
  return o;
}

inline Outcome check_kron_kernel(const nlohmann::json& p) {
  int q = p.at("q").get<int>();
  long kernel = verify_kronecker_kernel(p.at("m").get<std::size_t>(), p.at("n").get<std::size_t>(), q);
  Outcome o;
  o.ok = kernel == q - 1;
  o.detail = "kernel size " + std::to_string(kernel) + ", expected " + std::to_string(q - 1);
  return o;
}

inline Outcome check_kron_identities(const nlohmann::json& p) {
  Rng rng = substream(p.at("seed").get<std::uint64_t>(), 0);
  std::size_t count = p.at("count").get<std::size_t>(), max_dim = p.at("max_dim").get<std::size_t>();
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  Outcome o;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t m = dim(rng), n = dim(rng);
    Matrix<Rational> a = sample_invertible_rational(m, rng), c = sample_invertible_rational(m, rng);
    Matrix<Rational> b = sample_invertible_rational(n, rng), d = sample_invertible_rational(n, rng);
    Matrix<Rational> t = kronecker(a, b);
    const char* broken = nullptr;
    if (t * kronecker(c, d) != kronecker(a * c, b * d)) broken = "mixed product";
    else if (t.transpose() != kronecker(a.transpose(), b.transpose())) broken = "transpose";
    else if (t.det() != pow(a.det(), static_cast<long>(n)) * pow(b.det(), static_cast<long>(m))) broken = "determinant";
    else if (star(t) != kronecker(star(a), star(b))) broken = "star";
    if (broken) {
      o.ok = false;
      o.detail = std::string(broken) + " law fails at instance " + std::to_string(k);
      o.payload["counterexample"] = {{"h", to_json(a)}, {"g", to_json(b)}, {"h2", to_json(c)}, {"g2", to_json(d)}};
      return o;
    }
  }
  o.detail = std::to_string(count) + " instances satisfy the mixed product, transpose, determinant and star laws";
  return o;
}

inline Matrix<Rational> sample_levi_parabolic(std::size_t m, std::size_t n, Rng& rng) {
  while (true) {
    Matrix<Rational> p = sample_rational_matrix(m, m, rng);
    for (std::size_t i = m - n; i < m; ++i)
      for (std::size_t j = 0; j < m - n; ++j) p(i, j) = 0;
    bool ok = p.block(m - n, m - n, n, n).det() != 0;
    if (m > n) ok = ok && p.block(0, 0, m - n, m - n).det() != 0;
    if (ok) return p;
  }
}

inline Outcome check_modulus(const nlohmann::json& p) {
  auto m = p.at("m").get<std::size_t>(), n = p.at("n").get<std::size_t>();
  Rng rng = substream(p.at("seed").get<std::uint64_t>(), 0);
  std::size_t count = p.at("count").get<std::size_t>();
  Outcome o;
  for (std::size_t k = 0; k < count; ++k) {
    Matrix<Rational> x = sample_levi_parabolic(m, n, rng);
    ModulusCompatibility c = check_modulus_compatibility(m, n, x);
    if (!c.ok()) {
      o.ok = false;
      o.detail = "instance " + std::to_string(k) + ": lhs " + c.lhs.get_str() + ", rhs " + c.rhs.get_str();
      o.payload["counterexample"] = to_json(x);
      return o;
    }
  }
  o.detail = std::to_string(count) + " parabolic elements, conjugates mirabolic with alpha = 1 and equal moduli";
  return o;
}

inline Outcome check_cartan(const nlohmann::json& p) {
  long prime = p.at("p").get<long>();
  std::size_t n = p.at("n").get<std::size_t>(), count = p.at("count").get<std::size_t>();
  Rng rng = substream(p.at("seed").get<std::uint64_t>(), 0);
  Outcome o;
  for (std::size_t k = 0; k < count; ++k) {
    Matrix<Rational> g = sample_invertible_integer(n, rng);
    CartanForm c = cartan_decompose(g, prime);
    bool sorted = std::is_sorted(c.exps.rbegin(), c.exps.rend());
    if (!sorted || !is_p_unimodular(c.a, prime) || !is_p_unimodular(c.b, prime) || c.a * c.diagonal(prime) * c.b != g) {
      o.ok = false;
      o.detail = "reconstruction fails at instance " + std::to_string(k);
      o.payload["counterexample"] = to_json(g);
      return o;
    }
  }
  o.detail = std::to_string(count) + " integer matrices reconstructed exactly";
  return o;
}

inline Outcome check_macdonald(const nlohmann::json& p) {
  int q = p.at("q").get<int>();
  long height = p.at("height").get<long>();
  Outcome o;
  for (std::size_t n = 1; n <= 4; ++n) {
    DominantCochar zero{std::vector<long>(n - 1, 0)};
    if (macdonald_measure(zero, n, q) != QRoot::rational(Rational(1), q)) {
      o.ok = false;
      o.detail = "mu(0) != 1 for n = " + std::to_string(n);
      return o;
    }
  }
  nlohmann::json rows = nlohmann::json::array();
  for (long r = 1; r <= height; ++r) {
    QRoot mu = macdonald_measure({{r}}, 2, q);
    Rational closed = pow(Rational(q), r - 1) * (q + 1);
    long counted = count_cell_lattices({{r}}, q);
    rows.push_back({{"r", r}, {"mu", mu.str()}, {"counted", counted}});
    if (mu != QRoot::rational(closed, q) || Rational(counted) != closed) {
      o.ok = false;
      o.detail = "mu((" + std::to_string(r) + ")) = " + mu.str() + ", closed form " + closed.get_str() +
                 ", lattice count " + std::to_string(counted);
      o.payload["cells"] = rows;
      return o;
    }
  }
  o.payload["cells"] = rows;
  o.detail = "mu(0) = 1 and mu((r)) = q^(r-1)(q+1) = lattice count for r <= " + std::to_string(height);
  return o;
}

inline Outcome check_gj(const nlohmann::json& p) {
  int q = p.at("q").get<int>();
  auto params = SatakeParams::from_rationals(rationals_from_json(p.at("alphas")), q);
  IdentityReport r = gj_identity_report(params, p.at("order").get<std::size_t>());
  Outcome o;
  o.ok = r.passed();
  o.detail = o.ok ? "torus sum equals L(s,pi) through X^" + std::to_string(r.order) : r.mismatch_detail();
  nlohmann::json j = r.to_json();
  o.payload["variants"] = j["variants"];
  o.payload["cells"] = r.ledger.rows.size();
  return o;
}

inline Outcome check_local(const nlohmann::json& p) {
  int q = p.at("q").get<int>();
  std::size_t m = p.at("m").get<std::size_t>();
  auto params = SatakeParams::from_rationals(rationals_from_json(p.at("alphas")), q);
  IdentityReport r = local_identity_report(m, params, p.at("order").get<std::size_t>());
  const VariantCheck* a = r.variant("A");
  const VariantCheck* b = r.variant("B");
  Outcome o;
  o.ok = a->matches();
  o.detail = o.ok ? "variant A matches through X^" + std::to_string(r.order) : r.mismatch_detail();
  nlohmann::json j = r.to_json();
  o.payload["variants"] = j["variants"];
  o.payload["informational"] = {
      {"variant_b_matches", b->matches()},
      {"variant_b_first_mismatch", b->first_mismatch ? nlohmann::json(*b->first_mismatch) : nlohmann::json(nullptr)}};
  return o;
}

inline RealTorusPoint sample_torus_point(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  RealTorusPoint p;
  for (std::size_t i = 0; i + 1 < n; ++i) p.t.push_back(dist(rng));
  std::sort(p.t.begin(), p.t.end());
  return p;
}

inline Outcome check_arch_recursion(const nlohmann::json& p) {
  Rng rng = substream(p.at("seed").get<std::uint64_t>(), 0);
  std::size_t points = p.at("points").get<std::size_t>(), max_rank = p.at("max_rank").get<std::size_t>();
  double tol = p.at("tolerance").get<double>();
  double worst_phi = 0, worst_closed = 0, worst_norm = 0, worst_telescope = 0, worst_recon = 0;
  for (std::size_t k = 0; k < points; ++k) {
    std::size_t n = 1 + k % max_rank;
    RealTorusPoint pt = sample_torus_point(n, rng);
    auto phi = phi_sequence(pt);
    for (std::size_t i = 2; i <= n; ++i) {
      worst_phi = std::max(worst_phi, std::abs(phi[i - 1] + pt.t[i - 2] * pt.t[i - 2] - phi[i - 2]));
      double ta = pt.t[i - 2];
      worst_telescope =
          std::max(worst_telescope, std::abs(1 / phi[i - 2] + ta * ta / (phi[i - 1] * phi[i - 2]) - 1 / phi[i - 1]));
    }
    GramSchmidtFactors f = gram_schmidt_explicit(pt);
    auto oracle = iterative_gram_schmidt(torus_row_matrix(pt));
    for (std::size_t i = 0; i < n; ++i) {
      worst_closed = std::max(worst_closed, (f.v_prime[i] - oracle[i]).cwiseAbs().maxCoeff());
      worst_norm = std::max(worst_norm, std::abs(oracle[i].squaredNorm() - f.norms[i]));
    }
    worst_recon = std::max(worst_recon, relative_residual(f.y_p * f.y_k, torus_row_matrix(pt)));
  }
  Outcome o;
  o.ok = worst_phi <= 1e-14 && worst_telescope <= 1e-14 && worst_closed <= tol && worst_norm <= tol &&
         worst_recon <= 1e-12;
  o.payload = {{"phi_recursion", worst_phi},
               {"telescoping", worst_telescope},
               {"closed_vs_iterative", worst_closed},
               {"norms", worst_norm},
               {"reconstruction", worst_recon}};
  o.detail = std::to_string(points) + " torus points, worst closed-form deviation " + std::to_string(worst_closed);
  return o;
}

inline Outcome check_arch_section(const nlohmann::json& p) {
  RealTorusPoint pt{p.at("t").get<std::vector<double>>()};
  SectionExponents e = section_value_exponents(p.at("m").get<std::size_t>(), pt, p.at("tolerance").get<double>());
  Outcome o;
  o.payload = {{"alpha", e.alpha},           {"predicted_alpha", e.predicted_alpha},
               {"delta", e.delta},           {"predicted_delta", e.predicted_delta},
               {"det_power", e.det_power},   {"phi_power", e.phi_power},
               {"reconstruction", e.reconstruction_error}};
  o.detail = "alpha = sqrt(phi_1), delta = |det t|^m phi_1^(-mn/2)";
  return o;
}

inline const std::map<std::string, std::function<Outcome(const nlohmann::json&)>>& executors() {
  static const std::map<std::string, std::function<Outcome(const nlohmann::json&)>> table{
      {"orbit-count", check_orbit_count},
      {"orbit-sizes", check_orbit_sizes},
      {"stabilizer", check_stabilizer},
      {"tensor-lemma", check_tensor_lemma},
      {"orbit-lemma", check_orbit_lemma},
      {"kron-identities", check_kron_identities},
      {"kron-kernel", check_kron_kernel},
      {"modulus-compatibility", check_modulus},
      {"cartan", check_cartan},
      {"macdonald", check_macdonald},
      {"gj-identity", check_gj},
      {"local-identity", check_local},
      {"arch-recursion", check_arch_recursion},
      {"arch-section", check_arch_section},
  };
  return table;
}

}  // namespace detail

/// Runs one planned check; library errors become records with status error.
inline CheckRecord execute_check(const CheckSpec& spec, bool timed = false) {
  CheckRecord rec{spec.id, spec.suite, spec.kind, spec.params, CheckStatus::Pass, "", nlohmann::json::object(), {}};
  auto start = std::chrono::steady_clock::now();
  try {
    auto it = detail::executors().find(spec.kind);
    if (it == detail::executors().end()) fail(ErrorCode::ConfigError, "unknown check kind '" + spec.kind + "'");
    detail::Outcome out = it->second(spec.params);
    rec.status = out.ok ? CheckStatus::Pass : CheckStatus::Fail;
    rec.detail = out.detail;
    rec.payload = out.payload;
  } catch (const Error& e) {
    rec.status = CheckStatus::Error;
    rec.detail = e.what();
    rec.payload = {{"error", to_string(e.code())}};
  } catch (const nlohmann::json::exception& e) {
    rec.status = CheckStatus::Error;
    rec.detail = std::string("bad parameters: ") + e.what();
    rec.payload = {{"error", to_string(ErrorCode::ConfigError)}};
  }
  if (timed)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

/// Re-executes a record from its own serialized parameters.
inline CheckRecord rerun(const CheckRecord& r, bool timed = false) {
  return execute_check({r.id, r.suite, r.kind, r.params}, timed);
}

inline std::vector<CheckSpec> plan_suite(const std::string& suite, const RunConfig& c) {
  using detail::index_tag;
  using detail::shape_tag;
  using nlohmann::json;
  std::vector<CheckSpec> out;
  auto add = [&](const std::string& kind, const std::string& tag, json params) {
    out.push_back({suite + "/" + kind + "/" + tag, suite, kind, std::move(params)});
  };
  // Stream k of a suite is substream(seed, hash(suite) + k), so adding a
  // suite never perturbs the samples of another.
  std::uint64_t base = detail::fnv1a(suite) & 0xffffffffULL;
  std::uint64_t stream = 0;
  auto next_seed = [&]() { return substream(c.seed, base + stream++)(); };

  if (suite == "cosets") {
    for (const auto& s : c.coset_shapes) {
      long m = static_cast<long>(s[0]), n = static_cast<long>(s[1]), q = static_cast<long>(s[2]);
      std::string tag = shape_tag({{"m", m}, {"n", n}, {"q", q}});
      add("orbit-count", tag, {{"m", m}, {"n", n}, {"q", q}, {"budget", c.budget}});
      add("orbit-sizes", tag, {{"m", m}, {"n", n}, {"q", q}, {"budget", c.budget}});
    }
  } else if (suite == "stabilizers") {
    for (const auto& s : c.stabilizer_shapes)
      for (std::size_t r = 0; r < s[1]; ++r) {
        long m = static_cast<long>(s[0]), n = static_cast<long>(s[1]), q = static_cast<long>(s[2]);
        add("stabilizer", shape_tag({{"m", m}, {"n", n}, {"r", static_cast<long>(r)}, {"q", q}}),
            {{"m", m}, {"n", n}, {"r", r}, {"q", q}, {"budget", c.budget}});
      }
    for (const auto& s : c.tensor_cases)
      add("tensor-lemma", shape_tag({{"l", static_cast<long>(s[0])}, {"q", static_cast<long>(s[1])}}),
          {{"l", s[0]}, {"q", s[1]}, {"budget", c.budget}});
    for (const auto& s : c.orbit_lemma_shapes)
      add("orbit-lemma",
          shape_tag({{"m", static_cast<long>(s[0])}, {"n", static_cast<long>(s[1])}, {"q", static_cast<long>(s[2])}}),
          {{"m", s[0]}, {"n", s[1]}, {"q", s[2]}, {"trials", c.orbit_lemma_trials}, {"seed", next_seed()}});
  } else if (suite == "kron-props") {
    add("kron-identities", "rational", {{"count", c.kron_checks}, {"max_dim", 3}, {"seed", next_seed()}});
    for (const auto& s : c.kernel_shapes)
      add("kron-kernel",
          shape_tag({{"m", static_cast<long>(s[0])}, {"n", static_cast<long>(s[1])}, {"q", static_cast<long>(s[2])}}),
          {{"m", s[0]}, {"n", s[1]}, {"q", s[2]}});
    for (const auto& s : c.modulus_shapes)
      add("modulus-compatibility", shape_tag({{"m", static_cast<long>(s[0])}, {"n", static_cast<long>(s[1])}}),
          {{"m", s[0]}, {"n", s[1]}, {"count", c.modulus_checks}, {"seed", next_seed()}});
  } else if (suite == "gj") {
    // cartan_checks matrices spread over the (p, n) cells, remainder first.
    std::size_t cells = 4 * c.cartan_primes.size(), cell = 0;
    for (int p : c.cartan_primes)
      for (std::size_t n = 1; n <= 4; ++n, ++cell) {
        std::size_t count = c.cartan_checks / cells + (cell < c.cartan_checks % cells ? 1 : 0);
        add("cartan", shape_tag({{"p", p}, {"n", static_cast<long>(n)}}),
            {{"p", p}, {"n", n}, {"count", count}, {"seed", next_seed()}});
      }
    for (int q : c.q_values)
      add("macdonald", shape_tag({{"q", q}}), {{"q", q}, {"height", c.macdonald_height}});
    for (auto n : c.gj_ranks)
      for (int q : c.q_values) {
        Rng rng = substream(c.seed, base + stream++);
        for (std::size_t k = 0; k < c.samples; ++k)
          add("gj-identity", shape_tag({{"n", static_cast<long>(n)}, {"q", q}}) + "/" + index_tag(k),
              {{"q", q}, {"alphas", detail::rationals_to_json(sample_regular_alphas(n, rng))}, {"order", c.order}});
      }
  } else if (suite == "local-identity") {
    for (const auto& s : c.local_shapes)
      for (int q : c.q_values) {
        Rng rng = substream(c.seed, base + stream++);
        for (std::size_t k = 0; k < c.samples; ++k)
          add("local-identity",
              shape_tag({{"m", static_cast<long>(s[0])}, {"n", static_cast<long>(s[1])}, {"q", q}}) + "/" + index_tag(k),
              {{"m", s[0]},
               {"q", q},
               {"alphas", detail::rationals_to_json(sample_regular_alphas(s[1], rng))},
               {"order", c.order}});
      }
  } else if (suite == "arch-iwasawa") {
    add("arch-recursion", "random",
        {{"points", c.arch_points}, {"max_rank", c.arch_max_rank}, {"tolerance", c.arch_tolerance}, {"seed", next_seed()}});
    for (const auto& s : c.arch_shapes) {
      Rng rng = substream(c.seed, base + stream++);
      for (std::size_t k = 0; k < c.arch_section_points; ++k)
        add("arch-section",
            shape_tag({{"m", static_cast<long>(s[0])}, {"n", static_cast<long>(s[1])}}) + "/" + index_tag(k),
            {{"m", s[0]}, {"t", detail::sample_torus_point(s[1], rng).t}, {"tolerance", c.arch_tolerance}});
    }
  } else {
    fail(ErrorCode::ConfigError, "unknown suite '" + suite + "'");
  }
  return out;
}

inline std::vector<CheckSpec> plan(const RunConfig& c) {
  c.validate();
  if (c.suite != "all") return plan_suite(c.suite, c);
  std::vector<CheckSpec> all;
  for (const auto& s : suite_names()) {
    auto part = plan_suite(s, c);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

/// Executes specs on `jobs` workers; results keep the order of specs.
inline std::vector<CheckRecord> execute_all(const std::vector<CheckSpec>& specs, std::size_t jobs, bool timed) {
  std::vector<CheckRecord> out(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < specs.size(); i = next++) out[i] = execute_check(specs[i], timed);
  };
  std::size_t workers = std::min(jobs, std::max<std::size_t>(1, specs.size()));
  if (workers <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

inline Report run_suite(const RunConfig& c) {
  Report r;
  r.suite = c.suite;
  r.config = c.to_json();
  r.records = execute_all(plan(c), c.jobs, c.timings);
  return r;
}

}  // namespace eisen
