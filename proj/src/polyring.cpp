#include "chevfiber/polyring.hpp"

#include "chevfiber/error.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace chevfiber {

unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::vector<std::string> variables) : vars_(std::move(variables)) {}

Polynomial Polynomial::constant(std::vector<std::string> variables, const Rational& c) {
  Polynomial p(std::move(variables));
  p.add_term(Exponent(p.vars_.size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> variables, const std::string& name) {
  Polynomial p(std::move(variables));
  Exponent e(p.vars_.size(), 0);
  e[p.index_of(name)] = 1;
  p.add_term(e, 1);
  return p;
}

Polynomial Polynomial::monomial(std::vector<std::string> variables, Exponent e, const Rational& c) {
  Polynomial p(std::move(variables));
  if (e.size() != p.vars_.size()) throw Error(ErrorCode::dimension_mismatch, "exponent length mismatch");
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::linear_form(std::vector<std::string> variables, const RatVec& coeffs) {
  Polynomial p(std::move(variables));
  if (coeffs.size() != p.vars_.size()) throw Error(ErrorCode::dimension_mismatch, "linear form length mismatch");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Exponent e(coeffs.size(), 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (sgn(c) == 0) return;
  Rational q = c;
  q.canonicalize();
  auto [it, inserted] = terms_.try_emplace(e, q);
  if (!inserted) {
    it->second += q;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

std::size_t Polynomial::index_of(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw Error(ErrorCode::unknown_variable, "unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - vars_.begin());
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(chevfiber::total_degree(terms_.begin()->first));
}

std::optional<unsigned> Polynomial::homogeneous_degree() const {
  if (terms_.empty()) throw Error(ErrorCode::invalid_argument, "homogeneous_degree of the zero polynomial");
  unsigned top = chevfiber::total_degree(terms_.begin()->first);
  unsigned bottom = chevfiber::total_degree(terms_.rbegin()->first);
  if (top != bottom) return std::nullopt;
  return top;
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (vars_ != o.vars_) throw Error(ErrorCode::dimension_mismatch, "polynomials over different variable lists");
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r -= o;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_compatible(o);
  Polynomial r(vars_);
  Exponent e(vars_.size());
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  if (sgn(c) == 0) return Polynomial(vars_);
  Rational q = c;
  q.canonicalize();
  Polynomial r = *this;
  for (auto& [e, v] : r.terms_) v *= q;
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(vars_, 1);
  Polynomial base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(const std::string& var) const { return derivative(index_of(var)); }

Polynomial Polynomial::derivative(std::size_t index) const {
  if (index >= vars_.size()) throw Error(ErrorCode::unknown_variable, "derivative index out of range");
  Polynomial r(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    Exponent d = e;
    --d[index];
    r.add_term(d, c * e[index]);
  }
  return r;
}

Polynomial Polynomial::restrict_zero(const std::vector<std::string>& tvars) const {
  std::vector<bool> drop(vars_.size(), false);
  for (const auto& t : tvars) drop[index_of(t)] = true;
  std::vector<std::string> keep;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (!drop[i]) keep.push_back(vars_[i]);
  Polynomial r(keep);
  for (const auto& [e, c] : terms_) {
    bool vanishes = false;
    Exponent reduced;
    reduced.reserve(keep.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (drop[i]) {
        if (e[i] > 0) {
          vanishes = true;
          break;
        }
      } else {
        reduced.push_back(e[i]);
      }
    }
    if (!vanishes) r.add_term(reduced, c);
  }
  return r;
}

namespace {

using TermRef = std::pair<const Exponent*, const Rational*>;

// Horner scheme over the variables in order: p = sum_e img_j^e * p_e, where the
// p_e are composed recursively in the later variables.
Polynomial horner(const std::vector<TermRef>& terms, std::size_t j, const std::vector<Polynomial>& images,
                  std::vector<std::vector<Polynomial>>& powers, const std::vector<std::string>& out_vars) {
  if (j == images.size()) {
    Rational c = 0;
    for (const auto& t : terms) c += *t.second;
    return Polynomial::constant(out_vars, c);
  }
  std::map<unsigned, std::vector<TermRef>, std::greater<>> groups;
  for (const auto& t : terms) groups[(*t.first)[j]].push_back(t);

  auto power = [&](unsigned k) -> const Polynomial& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(Polynomial::constant(out_vars, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[j]);
    return cache[k];
  };

  Polynomial acc(out_vars);
  bool first = true;
  unsigned prev = 0;
  for (const auto& [e, group] : groups) {
    if (!first) acc = acc * power(prev - e);
    acc += horner(group, j + 1, images, powers, out_vars);
    prev = e;
    first = false;
  }
  if (prev > 0) acc = acc * power(prev);
  return acc;
}

}  // namespace

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
  if (images.size() != vars_.size())
    throw Error(ErrorCode::dimension_mismatch, "compose needs one image per variable");
  std::vector<std::string> out_vars;
  if (!images.empty()) {
    out_vars = images.front().vars_;
    for (const auto& im : images) images.front().check_compatible(im);
  }
  if (terms_.empty()) return Polynomial(out_vars);
  std::vector<TermRef> refs;
  refs.reserve(terms_.size());
  for (const auto& [e, c] : terms_) refs.emplace_back(&e, &c);
  std::vector<std::vector<Polynomial>> powers(images.size());
  return horner(refs, 0, images, powers, out_vars);
}

Polynomial Polynomial::rename(std::vector<std::string> variables) const {
  if (variables.size() != vars_.size()) throw Error(ErrorCode::dimension_mismatch, "rename needs equal length");
  Polynomial r(std::move(variables));
  r.terms_ = terms_;
  return r;
}

Complex Polynomial::eval(std::span<const Complex> z) const {
  if (z.size() != vars_.size()) throw Error(ErrorCode::dimension_mismatch, "evaluation point has wrong dimension");
  if (terms_.empty()) return {0.0, 0.0};
  std::vector<std::vector<Complex>> pw(vars_.size());
  const unsigned deg = static_cast<unsigned>(total_degree());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    pw[i].resize(deg + 1);
    pw[i][0] = 1.0;
    for (unsigned k = 1; k <= deg; ++k) pw[i][k] = pw[i][k - 1] * z[i];
  }
  // accumulate lowest degree first to limit cancellation against large terms
  Complex sum = 0.0;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Complex m = it->second.get_d();
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (it->first[i]) m *= pw[i][it->first[i]];
    sum += m;
  }
  return sum;
}

Rational Polynomial::eval_exact(const RatVec& z) const {
  if (z.size() != vars_.size()) throw Error(ErrorCode::dimension_mismatch, "evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      mpq_class p;
      mpz_pow_ui(p.get_num_mpz_t(), z[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(p.get_den_mpz_t(), z[i].get_den_mpz_t(), e[i]);
      m *= p;
    }
    sum += m;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational mag = abs(c);
    bool negative = sgn(c) < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;

    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += mag.get_str();
    else if (mag == 1)
      out += mono;
    else
      out += mag.get_str() + "*" + mono;
  }
  return out;
}

namespace {

class TermParser {
 public:
  TermParser(const std::string& text, const Polynomial& shape) : s_(text), shape_(shape) {}

  Polynomial run() {
    skip_ws();
    if (pos_ == s_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return p;
  }

 private:
  // expr := [+|-] term {(+|-) term}
  Polynomial expr() {
    Polynomial acc(shape_.variables());
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      first = false;
      Polynomial t = term();
      if (sign < 0) acc -= t;
      else acc += t;
    }
    return acc;
  }

  // term := factor {* factor}
  Polynomial term() {
    Polynomial acc = factor();
    while (true) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  // factor := primary [^ uint]
  Polynomial factor() {
    Polynomial base = primary();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip_ws();
      return base.pow(static_cast<unsigned>(parse_uint()));
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ == s_.size()) fail("unexpected end of input");
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) return Polynomial::constant(shape_.variables(), parse_number());
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t col = pos_;
      std::string name = parse_ident();
      const auto& vs = shape_.variables();
      if (std::find(vs.begin(), vs.end(), name) == vs.end())
        throw Error(ErrorCode::unknown_variable,
                    "polynomial parse error at column " + std::to_string(col + 1) + ": unknown variable '" + name + "'");
      return Polynomial::variable(vs, name);
    }
    if (ch == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_ws();
      if (pos_ == s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  Rational parse_number() {
    mpz_class num(parse_digits());
    mpz_class den = 1;
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      den = mpz_class(parse_digits());
      if (den == 0) fail("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string parse_digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return s_.substr(start, pos_ - start);
  }

  unsigned long parse_uint() {
    std::string d = parse_digits();
    if (d.size() > 4) fail("exponent too large");
    return std::stoul(d);
  }

  std::string parse_ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::parse, "polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  const std::string& s_;
  const Polynomial& shape_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, std::vector<std::string> variables) {
  Polynomial shape(std::move(variables));
  return TermParser(text, shape).run();
}

Polynomial linear_form_power(const std::vector<std::string>& variables, const RatVec& coeffs, unsigned k) {
  const std::size_t n = variables.size();
  if (coeffs.size() != n) throw Error(ErrorCode::dimension_mismatch, "linear form length mismatch");
  Polynomial result(variables);
  if (n == 0) return k == 0 ? Polynomial::constant(variables, 1) : result;

  std::vector<std::vector<Rational>> pw(n, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    pw[i][0] = 1;
    for (unsigned e = 1; e <= k; ++e) pw[i][e] = pw[i][e - 1] * coeffs[i];
  }
  std::vector<mpz_class> fact(k + 1);
  fact[0] = 1;
  for (unsigned e = 1; e <= k; ++e) fact[e] = fact[e - 1] * e;

  Exponent e(n, 0);
  // enumerate compositions of k into n parts
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == n) {
      e[i] = left;
      mpz_class denom = 1;
      Rational c = 1;
      for (std::size_t j = 0; j < n; ++j) {
        denom *= fact[e[j]];
        c *= pw[j][e[j]];
      }
      if (sgn(c) != 0) result.add_term(e, c * Rational(fact[k] / denom));
      return;
    }
    for (unsigned a = 0; a <= left; ++a) {
      e[i] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, k);
  return result;
}

namespace {

Polynomial det_rec(const std::vector<std::vector<Polynomial>>& m, std::vector<std::size_t>& cols, std::size_t row,
                   const std::vector<std::string>& vars) {
  const std::size_t n = m.size();
  if (row == n) return Polynomial::constant(vars, 1);
  Polynomial acc(vars);
  int sign = 1;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::size_t c = cols[k];
    const Polynomial& entry = m[row][c];
    if (!entry.is_zero()) {
      std::vector<std::size_t> rest;
      rest.reserve(cols.size() - 1);
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (j != k) rest.push_back(cols[j]);
      Polynomial minor = det_rec(m, rest, row + 1, vars);
      if (!minor.is_zero()) {
        if (sign > 0)
          acc += entry * minor;
        else
          acc -= entry * minor;
      }
    }
    sign = -sign;
  }
  return acc;
}

}  // namespace

Polynomial jacobian_det(const std::vector<Polynomial>& polys, const std::vector<std::string>& xs) {
  if (polys.empty() || polys.size() != xs.size())
    throw Error(ErrorCode::dimension_mismatch, "jacobian_det needs r polynomials and r variables, r >= 1");
  const auto& vars = polys.front().variables();
  for (const auto& p : polys)
    if (p.variables() != vars) throw Error(ErrorCode::dimension_mismatch, "jacobian_det: mixed variable lists");
  std::vector<std::vector<Polynomial>> m(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    bool zero_row = true;
    for (const auto& x : xs) {
      m[i].push_back(polys[i].derivative(x));
      zero_row = zero_row && m[i].back().is_zero();
    }
    if (zero_row) return Polynomial(vars);
  }
  std::vector<std::size_t> cols(xs.size());
  std::iota(cols.begin(), cols.end(), 0);
  return det_rec(m, cols, 0, vars);
}

RatMatrix jacobian_at(const std::vector<Polynomial>& polys, const std::vector<std::string>& xs, const RatVec& point) {
  RatMatrix m(polys.size(), xs.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) m(i, j) = polys[i].derivative(xs[j]).eval_exact(point);
  return m;
}

Polynomial primitive_part(const Polynomial& p) {
  if (p.is_zero()) return p;
  mpz_class num = 0, den = 1;
  for (const auto& [e, c] : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(den, num);
  scale.canonicalize();
  if (sgn(p.terms().begin()->second) < 0) scale = -scale;
  return p * scale;
}

std::vector<std::string> numbered_variables(const std::string& stem, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
  return v;
}

}  // namespace chevfiber
