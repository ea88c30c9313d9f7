#pragma once

#include "chevfiber/error.hpp"
#include "chevfiber/polyring.hpp"

#include <doctest.h>

#include <random>
#include <string>

#ifndef CHEVFIBER_SOURCE_DIR
#define CHEVFIBER_SOURCE_DIR "."
#endif

namespace testing {

inline std::string source_path(const std::string& rel) { return std::string(CHEVFIBER_SOURCE_DIR) + "/" + rel; }

template <typename F>
chevfiber::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const chevfiber::Error& e) {
    return e.code();
  }
  return static_cast<chevfiber::ErrorCode>(0);
}

/// Random polynomial with small rational coefficients and total degree <= deg.
inline chevfiber::Polynomial random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars, unsigned deg,
                                         int terms = 5) {
  using namespace chevfiber;
  Polynomial p(vars);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4), ex(0, static_cast<int>(deg));
  for (int k = 0; k < terms; ++k) {
    Exponent e(vars.size(), 0);
    unsigned left = deg;
    for (auto& x : e) {
      x = static_cast<unsigned>(std::uniform_int_distribution<int>(0, static_cast<int>(left))(rng));
      left -= x;
    }
    p.add_term(e, Rational(num(rng), den(rng)));
  }
  return p;
}

inline chevfiber::Polynomial random_homogeneous(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                                unsigned deg, int terms = 5) {
  using namespace chevfiber;
  Polynomial p(vars);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  for (int k = 0; k < terms; ++k) {
    Exponent e(vars.size(), 0);
    unsigned left = deg;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      e[i] = static_cast<unsigned>(std::uniform_int_distribution<int>(0, static_cast<int>(left))(rng));
      left -= e[i];
    }
    e.back() = left;
    p.add_term(e, Rational(num(rng), den(rng)));
  }
  return p;
}

inline chevfiber::Complex random_complex(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

}  // namespace testing

#define CHECK_CODE(expr, code) CHECK(testing::error_code_of([&] { (void)(expr); }) == chevfiber::ErrorCode::code)

namespace doctest {
template <>
struct StringMaker<chevfiber::Polynomial> {
  static String convert(const chevfiber::Polynomial& p) { return p.to_string().c_str(); }
};
}  // namespace doctest
