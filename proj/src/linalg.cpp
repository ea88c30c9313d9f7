#include "chevfiber/linalg.hpp"

#include "chevfiber/error.hpp"

#include <utility>

namespace chevfiber {

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVec>& cols, std::size_t rows) {
  RatMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(ErrorCode::dimension_mismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::dimension_mismatch, "row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatVec RatMatrix::column(std::size_t j) const {
  RatVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

RatVec RatMatrix::row(std::size_t i) const {
  return RatVec(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product shape mismatch");
  RatMatrix p(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& aik = (*this)(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += aik * o(k, j);
    }
  return p;
}

RatVec RatMatrix::operator*(const RatVec& v) const {
  if (cols_ != v.size()) throw Error(ErrorCode::dimension_mismatch, "matrix-vector shape mismatch");
  RatVec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

bool RatMatrix::operator==(const RatMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

std::vector<std::size_t> row_echelon(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t RatMatrix::rank() const {
  RatMatrix m = *this;
  return row_echelon(m).size();
}

Rational RatMatrix::determinant() const {
  if (rows_ != cols_) throw Error(ErrorCode::dimension_mismatch, "determinant of non-square matrix");
  RatMatrix m = *this;
  Rational det = 1;
  for (std::size_t c = 0; c < cols_; ++c) {
    std::size_t p = c;
    while (p < rows_ && sgn(m(p, c)) == 0) ++p;
    if (p == rows_) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < rows_; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

RatMatrix RatMatrix::inverse() const {
  if (rows_ != cols_) throw Error(ErrorCode::dimension_mismatch, "inverse of non-square matrix");
  const std::size_t n = rows_;
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(aug(p, c)) == 0) ++p;
    if (p == n) throw Error(ErrorCode::singular, "matrix is singular");
    if (p != c)
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug(p, j), aug(c, j));
    Rational piv = aug(c, c);
    for (std::size_t j = 0; j < 2 * n; ++j) aug(c, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(aug(i, c)) == 0) continue;
      Rational f = aug(i, c);
      for (std::size_t j = 0; j < 2 * n; ++j) aug(i, j) -= f * aug(c, j);
    }
  }
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::vector<RatVec> RatMatrix::nullspace() const {
  RatMatrix m = *this;
  auto pivots = row_echelon(m);
  // back-substitute to reduced form
  for (std::size_t k = pivots.size(); k-- > 0;) {
    std::size_t c = pivots[k];
    Rational piv = m(k, c);
    for (std::size_t j = 0; j < cols_; ++j) m(k, j) /= piv;
    for (std::size_t i = 0; i < k; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) -= f * m(k, j);
    }
  }
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols_);
    v[f] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "dot product length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational form(const RatVec& a, const RatMatrix& gram, const RatVec& b) { return dot(a, gram * b); }

bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

RatVec primitive(const RatVec& v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0;
  std::vector<mpz_class> ints;
  ints.reserve(v.size());
  for (const auto& x : v) {
    mpz_class n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    ints.push_back(n);
  }
  RatVec out(v.size());
  if (g == 0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
  return out;
}

std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace chevfiber
