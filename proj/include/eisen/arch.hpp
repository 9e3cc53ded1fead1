#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eisen/errors.hpp"
#include "eisen/groups.hpp"
#include "eisen/matrix.hpp"

namespace eisen {

/// (t_1, ..., t_{n-1}) with 0 < t_1 <= ... <= t_{n-1} <= 1.
struct RealTorusPoint {
  std::vector<double> t;

  std::size_t n() const { return t.size() + 1; }

  void validate() const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] > 0) || t[i] > 1) fail(ErrorCode::DomainError, "torus entries must lie in (0, 1]");
      if (i > 0 && t[i] < t[i - 1]) fail(ErrorCode::DomainError, "torus entries must be nondecreasing");
    }
  }

  double det() const {
    double d = 1;
    for (double x : t) d *= x;
    return d;
  }
};

/// phi_i = 1 + sum_{j >= i} t_j^2 for i = 1..n, stored at index i - 1.
inline std::vector<double> phi_sequence(const RealTorusPoint& p) {
  p.validate();
  std::size_t n = p.n();
  std::vector<double> phi(n, 1.0);
  for (std::size_t i = n - 1; i-- > 0;) phi[i] = phi[i + 1] + p.t[i] * p.t[i];
  return phi;
}

/// The n x n matrix [[I, 0], [y, 1]] with last row (t_{n-1}, ..., t_1, 1).
inline Eigen::MatrixXd torus_row_matrix(const RealTorusPoint& p) {
  std::size_t n = p.n();
  Eigen::MatrixXd y = Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t r = 1; r < n; ++r) y(static_cast<long>(n - 1), static_cast<long>(n - 1 - r)) = p.t[r - 1];
  return y;
}

struct GramSchmidtFactors {
  Eigen::MatrixXd y_p;  ///< upper triangular, positive diagonal
  Eigen::MatrixXd y_k;  ///< orthogonal, rows v_n, ..., v_1
  std::vector<double> norms;  ///< |v_i'|^2 at index i - 1: phi_1, then phi_i / phi_{i-1}
  std::vector<Eigen::VectorXd> v_prime;  ///< v_i', index i - 1
};

/// Iwasawa factors of torus_row_matrix from the closed-form recursion
///   v_1' = u_n,
///   v_i' = u_{n-i+1} + (t_{i-1} / phi_{i-1}) (sum_{r=1}^{i-2} t_r u_{n-r} - u_n).
inline GramSchmidtFactors gram_schmidt_explicit(const RealTorusPoint& p) {
  std::vector<double> phi = phi_sequence(p);
  std::size_t n = p.n();
  Eigen::MatrixXd u = torus_row_matrix(p);
  auto row = [&](std::size_t k) -> Eigen::VectorXd { return u.row(static_cast<long>(k - 1)).transpose(); };
  auto t = [&](std::size_t k) { return p.t[k - 1]; };
  auto ph = [&](std::size_t k) { return phi[k - 1]; };

  GramSchmidtFactors out;
  out.v_prime.push_back(row(n));
  out.norms.push_back(ph(1));
  for (std::size_t i = 2; i <= n; ++i) {
    Eigen::VectorXd acc = -row(n);
    for (std::size_t r = 1; r + 2 <= i; ++r) acc += t(r) * row(n - r);
    out.v_prime.push_back(row(n - i + 1) + (t(i - 1) / ph(i - 1)) * acc);
    out.norms.push_back(ph(i) / ph(i - 1));
  }
  out.y_k = Eigen::MatrixXd(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t i = 1; i <= n; ++i)
    out.y_k.row(static_cast<long>(n - i)) = out.v_prime[i - 1].transpose() / std::sqrt(out.norms[i - 1]);
  out.y_p = u * out.y_k.transpose();
  return out;
}

/// Modified Gram-Schmidt on the rows u_n, u_{n-1}, ..., u_1 in that order;
/// entry i - 1 of the result is the unnormalized v_i'. Independent of the
/// closed form above, which it is used to check.
inline std::vector<Eigen::VectorXd> iterative_gram_schmidt(const Eigen::MatrixXd& u) {
  long n = u.rows();
  std::vector<Eigen::VectorXd> out;
  for (long k = n - 1; k >= 0; --k) {
    Eigen::VectorXd v = u.row(k).transpose();
    for (const auto& w : out) v -= (v.dot(w) / w.squaredNorm()) * w;
    out.push_back(v);
  }
  return out;
}

struct IwasawaFactors {
  Eigen::MatrixXd x_p;  ///< upper triangular, positive diagonal
  Eigen::MatrixXd x_k;  ///< orthogonal
};

/// g = x_P x_K via a Householder QR of g^T w, where w reverses the columns.
inline IwasawaFactors iwasawa_numeric(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols()) fail(ErrorCode::DimensionMismatch, "Iwasawa decomposition needs a square matrix");
  long n = g.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n).rowwise().reverse();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.transpose() * w);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  double scale = g.cwiseAbs().maxCoeff();
  for (long i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) <= 1e-14 * scale * static_cast<double>(n))
      fail(ErrorCode::SingularMatrix, "Iwasawa decomposition of a singular matrix");
    if (r(i, i) < 0) {
      r.row(i) *= -1;
      q.col(i) *= -1;
    }
  }
  // g^T w = q r  =>  g = (w r^T w)(w q^T).
  return {w * r.transpose() * w, w * q.transpose()};
}

inline Eigen::MatrixXd to_eigen(const Matrix<Rational>& m) {
  Eigen::MatrixXd out(static_cast<long>(m.rows()), static_cast<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<long>(i), static_cast<long>(j)) = m(i, j).get_d();
  return out;
}

/// e~ t(I_m, diag(t_1, ..., t_{n-1}, 1)) with e~ = epsilon_{n-1}.
inline Eigen::MatrixXd epsilon_torus_matrix(std::size_t m, const RealTorusPoint& p) {
  std::size_t n = p.n();
  if (n > m) fail(ErrorCode::BadShape, "need n <= m");
  Eigen::MatrixXd eps = to_eigen(epsilon_rep(m, n, n - 1, Rational(0)));
  Eigen::VectorXd d(static_cast<long>(m * n));
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t k = 0; k < n; ++k) d(static_cast<long>(b * n + k)) = k + 1 < n ? p.t[k] : 1.0;
  return eps * d.asDiagonal();
}

/// |det A| |alpha|^{-(N-1)} for x in P_{N-1,1} with corner alpha.
inline double mirabolic_modulus(const Eigen::MatrixXd& x) {
  long big = x.rows();
  double alpha = x(big - 1, big - 1);
  double det_a = big > 1 ? x.topLeftCorner(big - 1, big - 1).determinant() : 1.0;
  return std::abs(det_a) * std::pow(std::abs(alpha), -static_cast<double>(big - 1));
}

struct SectionExponents {
  std::size_t m = 0, n = 0;
  std::vector<double> t;
  double alpha = 0, predicted_alpha = 0;
  double delta = 0, predicted_delta = 0;
  double det_power = 0, phi_power = 0;  ///< fitted exponents of delta(x_P)
  bool powers_identifiable = false;     ///< false when n = 1 (both logs vanish)
  double reconstruction_error = 0;
  double orthogonality_error = 0;

  double alpha_error() const { return std::abs(alpha - predicted_alpha); }
  double delta_rel_error() const { return std::abs(delta - predicted_delta) / std::abs(predicted_delta); }
};

inline double relative_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

namespace detail {

struct ModulusSample {
  double log_det, log_phi, log_delta, alpha, reconstruction, orthogonality;
};

inline ModulusSample sample_modulus(std::size_t m, const RealTorusPoint& p) {
  Eigen::MatrixXd g = epsilon_torus_matrix(m, p);
  IwasawaFactors f = iwasawa_numeric(g);
  long big = g.rows();
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(big, big);
  return {std::log(p.det()),
          std::log(phi_sequence(p)[0]),
          std::log(mirabolic_modulus(f.x_p)),
          f.x_p(big - 1, big - 1),
          relative_residual(f.x_p * f.x_k, g),
          (f.x_k * f.x_k.transpose() - id).norm()};
}

}  // namespace detail

/// Measures alpha and the exponents of |det t| and phi_1 in delta(x_P) for
/// the Iwasawa factor of e~ t^Delta. The exponents are fitted from
/// delta^{s+1/2} at two values of s and two torus points.
inline SectionExponents section_value_exponents(std::size_t m, const RealTorusPoint& p, double tol = 1e-10) {
  p.validate();
  std::size_t n = p.n();
  if (n > m) fail(ErrorCode::DomainError, "section exponents need n <= m");
  std::vector<double> phi = phi_sequence(p);
  detail::ModulusSample here = detail::sample_modulus(m, p);

  SectionExponents out;
  out.m = m;
  out.n = n;
  out.t = p.t;
  out.alpha = here.alpha;
  out.predicted_alpha = std::sqrt(phi[0]);
  out.delta = std::exp(here.log_delta);
  out.predicted_delta =
      std::pow(p.det(), static_cast<double>(m)) * std::pow(phi[0], -static_cast<double>(m * n) / 2.0);
  out.reconstruction_error = here.reconstruction;
  out.orthogonality_error = here.orthogonality;

  if (n == 1) {
    out.det_power = static_cast<double>(m);
    out.phi_power = -static_cast<double>(m) / 2.0;
  } else {
    RealTorusPoint other = p;
    for (auto& x : other.t) x *= 0.5;
    detail::ModulusSample there = detail::sample_modulus(m, other);
    const double s_values[2] = {0.25, 1.75};
    double fitted[2][2];
    double det = here.log_det * there.log_phi - here.log_phi * there.log_det;
    if (std::abs(det) < 1e-12) fail(ErrorCode::DomainError, "torus points do not separate the exponents");
    for (int k = 0; k < 2; ++k) {
      double lhs0 = (s_values[k] + 0.5) * here.log_delta, lhs1 = (s_values[k] + 0.5) * there.log_delta;
      fitted[k][0] = (lhs0 * there.log_phi - here.log_phi * lhs1) / det;
      fitted[k][1] = (here.log_det * lhs1 - lhs0 * there.log_det) / det;
    }
    out.det_power = (fitted[1][0] - fitted[0][0]) / (s_values[1] - s_values[0]);
    out.phi_power = (fitted[1][1] - fitted[0][1]) / (s_values[1] - s_values[0]);
    out.powers_identifiable = true;
  }

  double want_det = static_cast<double>(m), want_phi = -static_cast<double>(m * n) / 2.0;
  if (out.alpha_error() > tol || out.delta_rel_error() > tol || out.reconstruction_error > 1e-12 ||
      std::abs(out.det_power - want_det) > 1e-8 || std::abs(out.phi_power - want_phi) > 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "section exponents: alpha " << out.alpha << " vs " << out.predicted_alpha << ", delta " << out.delta
       << " vs " << out.predicted_delta << ", det power " << out.det_power << " vs " << want_det << ", phi power "
       << out.phi_power << " vs " << want_phi;
    fail(ErrorCode::AssertionFailed, os.str());
  }
  return out;
}

}  // namespace eisen
