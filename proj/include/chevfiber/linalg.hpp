#pragma once

// Small dense matrices over Q. Sizes here are at most a few hundred rows, so
// plain fraction Gaussian elimination is adequate.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace chevfiber {

using Rational = mpq_class;
using RatVec = std::vector<Rational>;

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_columns(const std::vector<RatVec>& cols, std::size_t rows);
  static RatMatrix from_rows(const std::vector<RatVec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RatVec column(std::size_t j) const;
  RatVec row(std::size_t i) const;

  RatMatrix transpose() const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatVec operator*(const RatVec& v) const;
  bool operator==(const RatMatrix& o) const;

  std::size_t rank() const;
  Rational determinant() const;
  // Throws Error(singular) when not invertible.
  RatMatrix inverse() const;
  // Basis of {v : A v = 0}.
  std::vector<RatVec> nullspace() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Reduces `m` in place to row echelon form; returns the pivot columns.
std::vector<std::size_t> row_echelon(RatMatrix& m);

Rational dot(const RatVec& a, const RatVec& b);
// a^T G b
Rational form(const RatVec& a, const RatMatrix& gram, const RatVec& b);
bool is_zero(const RatVec& v);
// Multiplies by the lcm of denominators and divides by the content so the
// result is a primitive integer vector with the same direction.
RatVec primitive(const RatVec& v);
std::string to_string(const RatVec& v);

}  // namespace chevfiber
