#pragma once

// Exact multivariate polynomials over Q.
//
// A Polynomial carries its ordered variable list; two polynomials combine only
// when their variable lists are identical. Terms are kept in a map ordered by
// descending graded-lex exponent, which is also the canonical print order.

#include "chevfiber/linalg.hpp"

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chevfiber {

using Exponent = std::vector<unsigned>;
using Complex = std::complex<double>;

unsigned total_degree(const Exponent& e);

/// Descending graded-lex: higher total degree first, ties broken
/// lexicographically with the first variable most significant.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables);

  static Polynomial constant(std::vector<std::string> variables, const Rational& c);
  static Polynomial variable(std::vector<std::string> variables, const std::string& name);
  static Polynomial monomial(std::vector<std::string> variables, Exponent e, const Rational& c);
  /// sum_i coeffs[i] * variables[i]
  static Polynomial linear_form(std::vector<std::string> variables, const RatVec& coeffs);
  /// Parses the canonical text form ("3/2*x1^2*t1 - x1 + 7").
  static Polynomial parse(const std::string& text, std::vector<std::string> variables);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t num_variables() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  /// m if every term has total degree m, nullopt otherwise. Throws on zero.
  std::optional<unsigned> homogeneous_degree() const;
  /// Index of `name` in the variable list; throws unknown_variable.
  std::size_t index_of(const std::string& name) const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial pow(unsigned k) const;
  bool operator==(const Polynomial& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  void add_term(const Exponent& e, const Rational& c);

  Polynomial derivative(const std::string& var) const;
  Polynomial derivative(std::size_t index) const;

  /// Drops every term with a positive power of some variable in `tvars`; the
  /// result lives in the remaining variables (original order kept).
  Polynomial restrict_zero(const std::vector<std::string>& tvars) const;

  /// Substitutes images[i] for variable i. All images must share one variable
  /// list, which becomes the variable list of the result.
  Polynomial compose(const std::vector<Polynomial>& images) const;

  /// Same terms over a renamed variable list of equal length.
  Polynomial rename(std::vector<std::string> variables) const;

  /// Coefficients are rounded to double once, then monomials are accumulated
  /// from per-variable power tables.
  Complex eval(std::span<const Complex> z) const;
  Rational eval_exact(const RatVec& z) const;

  /// Canonical text form: terms in descending graded-lex order joined by
  /// " + " / " - "; coefficients as p/q (unit coefficients omitted);
  /// monomials as v1^a1*...*vn^an with zero exponents and ^1 omitted.
  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& o) const;

  std::vector<std::string> vars_;
  TermMap terms_;
};

/// (sum_i coeffs[i] * variables[i])^k, expanded with multinomial coefficients.
Polynomial linear_form_power(const std::vector<std::string>& variables, const RatVec& coeffs, unsigned k);

/// det[dU_i/dx_j] by cofactor expansion along rows; zero rows short-circuit.
Polynomial jacobian_det(const std::vector<Polynomial>& polys, const std::vector<std::string>& xs);

/// Exact value of the Jacobian matrix [dU_i/dx_j] at a rational point.
RatMatrix jacobian_at(const std::vector<Polynomial>& polys, const std::vector<std::string>& xs, const RatVec& point);

/// p divided by its content, with a positive leading coefficient.
Polynomial primitive_part(const Polynomial& p);

/// "x1".."xn" style names.
std::vector<std::string> numbered_variables(const std::string& stem, std::size_t n);

}  // namespace chevfiber
