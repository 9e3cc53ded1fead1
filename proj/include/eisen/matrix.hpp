#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisen/errors.hpp"
#include "eisen/prime_field.hpp"
#include "eisen/qroot.hpp"
#include "eisen/rational.hpp"

namespace eisen {

inline Rational from_integer(long v, const Rational&) { return Rational(v); }
inline QRoot from_integer(long v, const QRoot& proto) { return QRoot::rational(Rational(v), proto.q()); }
inline PrimeFieldElem from_integer(long v, const PrimeFieldElem& proto) { return PrimeFieldElem(v, proto.q()); }

/// Identifier of the ring an element lives in; 0 means "any" (plain rationals).
inline int ring_id(const Rational&) { return 0; }
inline int ring_id(const QRoot& x) { return x.q(); }
inline int ring_id(const PrimeFieldElem& x) { return x.q(); }

/// Dense row-major matrix over an exact ring T. Every matrix carries a zero
/// of its ring so that rings with runtime parameters (F_q) need no global state.
template <class T>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const T& zero)
      : rows_(rows), cols_(cols), zero_(zero_like(zero)), data_(rows * cols, zero_like(zero)) {
    if (rows == 0 || cols == 0) fail(ErrorCode::DimensionMismatch, "matrices must be nonempty");
  }

  explicit Matrix(const std::vector<std::vector<T>>& rows) : Matrix(rows.size(), rows.empty() ? 0 : rows[0].size(), first_entry(rows)) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (rows[i].size() != cols_) fail(ErrorCode::DimensionMismatch, "ragged row list");
      for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = rows[i][j];
    }
  }

  static Matrix identity(std::size_t n, const T& proto) {
    Matrix m(n, n, proto);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one_like(proto);
    return m;
  }

  static Matrix from_integers(const std::vector<std::vector<long>>& rows, const T& proto) {
    if (rows.empty() || rows[0].empty()) fail(ErrorCode::DimensionMismatch, "matrices must be nonempty");
    Matrix m(rows.size(), rows[0].size(), proto);
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) fail(ErrorCode::DimensionMismatch, "ragged row list");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = from_integer(rows[i][j], proto);
    }
    return m;
  }

  static Matrix diagonal(const std::vector<T>& d) {
    if (d.empty()) fail(ErrorCode::DimensionMismatch, "empty diagonal");
    Matrix m(d.size(), d.size(), d[0]);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const T& zero() const { return zero_; }
  T one() const { return one_like(zero_); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  T& at(std::size_t i, std::size_t j) {
    check_index(i, j);
    return (*this)(i, j);
  }
  const T& at(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return (*this)(i, j);
  }

  std::vector<T> row(std::size_t i) const {
    check_index(i, 0);
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) fail(ErrorCode::IndexOutOfRange, "block outside matrix");
    Matrix b(nr, nc, zero_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) fail(ErrorCode::IndexOutOfRange, "block outside matrix");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_)
      fail(ErrorCode::DimensionMismatch, "cannot multiply " + x.shape() + " by " + y.shape());
    check_ring(x.zero_, y.zero_);
    Matrix out(x.rows_, y.cols_, x.zero_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const T& a = x(i, k);
        if (is_zero(a)) continue;
        for (std::size_t j = 0; j < y.cols_; ++j)
          if (!is_zero(y(k, j))) out(i, j) += a * y(k, j);
      }
    return out;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    x.check_same_shape(y);
    Matrix out = x;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += y.data_[k];
    return out;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    x.check_same_shape(y);
    Matrix out = x;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] -= y.data_[k];
    return out;
  }
  friend Matrix operator*(const T& c, const Matrix& x) {
    Matrix out = x;
    for (auto& v : out.data_) v = c * v;
    return out;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

  T det() const {
    require_square("det");
    Matrix a = *this;
    T result = one();
    for (std::size_t c = 0; c < cols_; ++c) {
      std::size_t p = c;
      while (p < rows_ && is_zero(a(p, c))) ++p;
      if (p == rows_) return zero_;
      if (p != c) {
        a.swap_rows(p, c);
        result = -result;
      }
      result *= a(c, c);
      T inv = one() / a(c, c);
      for (std::size_t i = c + 1; i < rows_; ++i) {
        if (is_zero(a(i, c))) continue;
        T f = a(i, c) * inv;
        for (std::size_t j = c; j < cols_; ++j) a(i, j) -= f * a(c, j);
      }
    }
    return result;
  }

  std::size_t rank() const {
    Matrix a = *this;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && is_zero(a(p, c))) ++p;
      if (p == rows_) continue;
      a.swap_rows(p, r);
      T inv = one() / a(r, c);
      for (std::size_t i = r + 1; i < rows_; ++i) {
        if (is_zero(a(i, c))) continue;
        T f = a(i, c) * inv;
        for (std::size_t j = c; j < cols_; ++j) a(i, j) -= f * a(r, j);
      }
      ++r;
    }
    return r;
  }

  /// Gauss-Jordan inverse; throws SingularMatrix.
  Matrix inverse() const {
    require_square("inverse");
    std::size_t n = rows_;
    Matrix a = *this;
    Matrix inv = identity(n, zero_);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && is_zero(a(p, c))) ++p;
      if (p == n) fail(ErrorCode::SingularMatrix, "matrix is not invertible");
      a.swap_rows(p, c);
      inv.swap_rows(p, c);
      T s = one() / a(c, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(c, j) *= s;
        inv(c, j) *= s;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || is_zero(a(i, c))) continue;
        T f = a(i, c);
        for (std::size_t j = 0; j < n; ++j) {
          a(i, j) -= f * a(c, j);
          inv(i, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

  bool is_upper_block_triangular(std::size_t l) const {
    for (std::size_t i = l; i < rows_; ++i)
      for (std::size_t j = 0; j < l && j < cols_; ++j)
        if (!is_zero((*this)(i, j))) return false;
    return true;
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  /// Right-aligned columns, one row per line; stable across runs.
  std::string pretty() const {
    std::vector<std::string> cells(data_.size());
    std::vector<std::size_t> width(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        cells[i * cols_ + j] = str((*this)(i, j));
        width[j] = std::max(width[j], cells[i * cols_ + j].size());
      }
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
      os << "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        const std::string& c = cells[i * cols_ + j];
        os << (j ? " " : "") << std::string(width[j] - c.size(), ' ') << c;
      }
      os << "]\n";
    }
    return os.str();
  }

 private:
  static const T& first_entry(const std::vector<std::vector<T>>& rows) {
    if (rows.empty() || rows[0].empty()) fail(ErrorCode::DimensionMismatch, "matrices must be nonempty");
    return rows[0][0];
  }
  void check_index(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_)
      fail(ErrorCode::IndexOutOfRange,
           "(" + std::to_string(i) + "," + std::to_string(j) + ") outside " + shape());
  }
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::DimensionMismatch, shape() + " vs " + o.shape());
    check_ring(zero_, o.zero_);
  }
  void require_square(const char* what) const {
    if (!is_square()) fail(ErrorCode::DimensionMismatch, std::string(what) + " of non-square " + shape());
  }
  static void check_ring(const T& a, const T& b) {
    int x = ring_id(a), y = ring_id(b);
    if (x != 0 && y != 0 && x != y)
      fail(ErrorCode::RingMismatch, "ring " + std::to_string(x) + " vs ring " + std::to_string(y));
  }

  std::size_t rows_, cols_;
  T zero_;
  std::vector<T> data_;
};

/// t(h, g): the block matrix whose (i, j) block is h(i, j) * g.
template <class T>
Matrix<T> kronecker(const Matrix<T>& h, const Matrix<T>& g) {
  if (!h.is_square() || !g.is_square())
    fail(ErrorCode::DimensionMismatch, "kronecker needs square factors, got " + h.shape() + " and " + g.shape());
  int x = ring_id(h.zero()), y = ring_id(g.zero());
  if (x != 0 && y != 0 && x != y) fail(ErrorCode::RingMismatch, "kronecker factors over different rings");
  std::size_t m = h.rows(), n = g.rows();
  Matrix<T> out(m * n, m * n, h.zero());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (is_zero(h(i, j))) continue;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out(i * n + a, j * n + b) = h(i, j) * g(a, b);
    }
  return out;
}

/// Rows given as exact-rational strings, e.g. [["1","-3/7"],["0","2"]].
inline nlohmann::json to_json(const Matrix<Rational>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(row);
  }
  return rows;
}

inline Matrix<Rational> rational_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    fail(ErrorCode::ParseError, "matrix must be a nonempty array of rows");
  Matrix<Rational> m(j.size(), j[0].size(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols()) fail(ErrorCode::ParseError, "ragged matrix rows");
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const auto& cell = j[i][k];
      if (cell.is_string()) m(i, k) = parse_rational(cell.get<std::string>());
      else if (cell.is_number_integer()) m(i, k) = Rational(cell.get<long>());
      else fail(ErrorCode::ParseError, "matrix entry must be a rational string");
    }
  }
  return m;
}

}  // namespace eisen
