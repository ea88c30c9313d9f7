#include "support.hpp"

#include <algorithm>
#include <numeric>

using namespace chevfiber;

namespace {

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m, int spread = 5) {
  std::uniform_int_distribution<int> num(-spread, spread), den(1, 3);
  RatMatrix a(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      a(i, j) = q;
    }
  return a;
}

// Leibniz permutation sum
Rational leibniz_det(const RatMatrix& a) {
  std::vector<std::size_t> p(a.rows());
  std::iota(p.begin(), p.end(), 0);
  Rational total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++inversions;
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < p.size(); ++i) term *= a(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace

TEST_CASE("determinant matches the permutation expansion") {
  std::mt19937_64 rng(21);
  for (std::size_t n = 1; n <= 5; ++n)
    for (int k = 0; k < 10; ++k) {
      RatMatrix a = random_matrix(rng, n, n);
      CHECK(a.determinant() == leibniz_det(a));
    }
}

TEST_CASE("det is multiplicative and inverse is exact") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 20; ++k) {
    RatMatrix a = random_matrix(rng, 4, 4), b = random_matrix(rng, 4, 4);
    CHECK((a * b).determinant() == a.determinant() * b.determinant());
    if (a.determinant() != 0) CHECK(a * a.inverse() == RatMatrix::identity(4));
  }
  RatMatrix s = RatMatrix::from_rows({{1, 2}, {2, 4}}, 2);
  CHECK_CODE(s.inverse(), singular);
}

TEST_CASE("rank-nullity and nullspace vectors") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    RatMatrix a = random_matrix(rng, 3, 5);
    // make a row dependent sometimes
    if (k % 2) {
      RatMatrix b = a;
      for (std::size_t j = 0; j < 5; ++j) b(2, j) = a(0, j) * Rational(2) - a(1, j);
      a = b;
    }
    auto ns = a.nullspace();
    CHECK(a.rank() + ns.size() == 5);
    for (const auto& v : ns) CHECK(is_zero(a * v));
  }
}

TEST_CASE("primitive vectors") {
  RatVec v = {Rational(1, 2), Rational(-3, 4), 0};
  CHECK(primitive(v) == RatVec{2, -3, 0});
  CHECK(primitive(RatVec{6, 4}) == RatVec{3, 2});
  CHECK(form({1, 0}, RatMatrix::from_rows({{2, 1}, {1, 2}}, 2), {0, 1}) == 1);
}
