#include "support.hpp"

#include "chevfiber/fiber.hpp"
#include "chevfiber/restrict.hpp"

#include <cmath>

using namespace chevfiber;

namespace {

struct Setup {
  Pair pair;
  RestrictedFamily fam;
  DeformedSystem sys;
};

Setup setup(const std::string& name) {
  Pair p = Pair::create(PairConfig::load(testing::source_path("configs/" + name + ".cfg")));
  RestrictedFamily f = restrict_family(p, p.default_selection());
  DeformedSystem s = DeformedSystem::from_family(p, f);
  return {std::move(p), std::move(f), std::move(s)};
}

FiberOptions opts(std::uint64_t seed = 1) {
  FiberOptions o;
  o.seed = seed;
  o.threads = 1;
  return o;
}

bool contains(const std::vector<CVec>& sols, const CVec& x, double tol = 1e-9) {
  for (const auto& s : sols) {
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(s[i] - x[i]));
    if (d < tol) return true;
  }
  return false;
}

CVec apply(const std::vector<double>& g, const CVec& x) {
  const std::size_t r = x.size();
  CVec y(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) y[i] += g[i * r + j] * x[j];
  return y;
}

const char* kFamilies[] = {"toy", "synthetic", "a2_split", "b2_split", "c2_split", "bc2_split"};

}  // namespace

TEST_CASE("portable generator matches the reference mt19937_64 stream") {
  PortableRng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  CHECK(v == 9981545732273789042ull);
  PortableRng a(3);
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(std::abs(std::abs(a.unit_circle()) - 1.0) < 1e-15);
  }
}

TEST_CASE("deformed system validation") {
  std::vector<std::string> t = {"t"}, x = {"x"}, tx = {"t", "x"};
  CHECK_CODE(DeformedSystem({Polynomial::parse("x^2 + 1", tx)}, t, x), invalid_argument);
  CHECK_CODE(DeformedSystem({Polynomial(tx)}, t, x), dependent);
  CHECK_CODE(DeformedSystem({Polynomial::parse("x^2", tx), Polynomial::parse("t^2", tx)}, t, x), dimension_mismatch);
  DeformedSystem s({Polynomial::parse("x^4 + t^2*x^2", tx)}, t, x);
  CHECK(s.bezout_bound() == 4);
}

TEST_CASE("jacobian_J examples") {
  auto toy = setup("toy");
  CHECK(jacobian_J(toy.sys).to_string() == "2*x1");
  CHECK(toy.sys.jacobian().restrict_zero(toy.sys.t_vars()).to_string() == "2*x1");
  auto syn = setup("synthetic");
  CHECK(jacobian_J(syn.sys).to_string() == "2*t1^2*x1 + 4*x1^3");
  CHECK(syn.sys.jacobian().restrict_zero(syn.sys.t_vars()).to_string() == "4*x1^3");
  auto bc2 = setup("bc2_split");
  CHECK(jacobian_J(bc2.sys).homogeneous_degree() == 4u);
}

TEST_CASE("leading-term law and degree law") {
  for (const char* name : kFamilies) {
    CAPTURE(name);
    auto s = setup(name);
    CHECK(s.sys.jacobian().restrict_zero(s.sys.t_vars()) == s.fam.jacobian);
    unsigned expected = 0;
    for (unsigned m : s.sys.degrees()) expected += m - 1;
    CHECK(s.sys.jacobian().homogeneous_degree() == expected);
  }
}

TEST_CASE("is_unramified examples") {
  auto toy = setup("toy");
  CVec one = {1.0};
  CHECK(is_unramified(toy.sys, one, CVec{2.0}));
  CHECK(!is_unramified(toy.sys, one, CVec{0.0}));
  auto syn = setup("synthetic");
  CHECK(!is_unramified(syn.sys, one, CVec{Complex(0, 1 / std::sqrt(2.0))}));
  CHECK(is_unramified(syn.sys, one, CVec{Complex(0.3, 0.1)}));
}

TEST_CASE("is_generic examples") {
  auto toy = setup("toy");
  const auto& f = toy.pair.restricted_functionals();
  REQUIRE(!f.empty());
  double scale = std::abs(f[0][0].get_d());
  CVec one = {1.0};
  // <x, alpha> = 1
  CHECK(!is_generic(toy.sys, one, CVec{1.0 / scale}, f));
  // half the fundamental coweight: every pairing is +-1/2
  CVec half = {0.5 / scale};
  CHECK(is_unramified(toy.sys, one, half));
  CHECK(is_generic(toy.sys, one, half, f));
  CHECK(!is_generic(toy.sys, one, CVec{0.0}, f));
  // complex pairing near an integer only counts when the imaginary part is small
  CHECK(is_generic(toy.sys, one, CVec{Complex(1.0 / scale, 0.3)}, f));
}

TEST_CASE("solve_fiber examples") {
  auto toy = setup("toy");
  auto r = solve_fiber(toy.sys, CVec{1.0}, CVec{5.0}, opts(), &toy.pair.little_group());
  REQUIRE(r.solutions.size() == 2);
  CHECK(contains(r.solutions, {2.0}));
  CHECK(contains(r.solutions, {-2.0}));
  CHECK(r.orbit_classes.size() == 1);

  auto syn = setup("synthetic");
  auto s = solve_fiber(syn.sys, CVec{1.0}, CVec{6.0}, opts(), &syn.pair.little_group());
  REQUIRE(s.solutions.size() == 4);
  // x^4 + x^2 - 6 = (x^2 - 2)(x^2 + 3)
  for (Complex z : {Complex(std::sqrt(2.0)), Complex(-std::sqrt(2.0)), Complex(0, std::sqrt(3.0)),
                    Complex(0, -std::sqrt(3.0))})
    CHECK(contains(s.solutions, {z}));
  CHECK(s.orbit_classes.size() == 2);

  auto z = solve_fiber(syn.sys, CVec{0.0}, CVec{16.0}, opts(), &syn.pair.little_group());
  REQUIRE(z.solutions.size() == 4);
  for (Complex w : {Complex(2), Complex(-2), Complex(0, 2), Complex(0, -2)}) CHECK(contains(z.solutions, {w}));
  for (const auto& x : z.solutions) CHECK(is_unramified(syn.sys, CVec{0.0}, x));
  CHECK(z.path_stats.merged == 0);
}

TEST_CASE("solve_fiber rejects bad dimensions") {
  auto toy = setup("toy");
  CHECK_CODE(solve_fiber(toy.sys, CVec{}, CVec{5.0}, opts()), dimension_mismatch);
  CHECK_CODE(solve_fiber(toy.sys, CVec{1.0}, CVec{5.0, 1.0}, opts()), dimension_mismatch);
}

TEST_CASE("fiber count law, residuals, Bezout ceiling and equivariance") {
  for (const char* name : kFamilies) {
    CAPTURE(name);
    auto s = setup(name);
    const WeylGroup& little = s.pair.little_group();
    std::uint64_t d = rank_d(s.fam.degrees, fundamental_degrees(s.pair.restricted().components()));
    auto elems = little.elements_in_coordinates_numeric();
    PortableRng rng(2024);
    for (int draw = 0; draw < 5; ++draw) {
      CVec zeta(s.sys.num_t()), target(s.sys.r());
      for (auto& z : zeta) z = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      for (auto& a : target) a = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      auto r = solve_fiber(s.sys, zeta, target, opts(100 + draw), &little);
      CHECK(r.solutions.size() == little.order() * d);
      CHECK(r.solutions.size() <= s.sys.bezout_bound());
      for (double res : r.residuals) CHECK(res < 1e-8);
      for (const auto& x : r.solutions)
        for (const auto& g : elems) CHECK(contains(r.solutions, apply(g, x), 1e-6));
    }
  }
}

TEST_CASE("fiber results are deterministic and thread-count independent") {
  auto s = setup("a2_split");
  FiberOptions o1 = opts(77), o4 = opts(77);
  o4.threads = 4;
  auto a = solve_fiber(s.sys, CVec{}, CVec{Complex(0.3, 0.2), Complex(-0.5, 0.1)}, o1, &s.pair.little_group());
  auto b = solve_fiber(s.sys, CVec{}, CVec{Complex(0.3, 0.2), Complex(-0.5, 0.1)}, o1, &s.pair.little_group());
  auto c = solve_fiber(s.sys, CVec{}, CVec{Complex(0.3, 0.2), Complex(-0.5, 0.1)}, o4, &s.pair.little_group());
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_json() == c.to_json());
  CHECK(a.to_json().find("\"seed\": 77") != std::string::npos);
}

TEST_CASE("solve_lambda_xi examples") {
  for (const char* name : kFamilies) {
    auto s = setup(name);
    PortableRng rng(5);
    CVec lambda(s.sys.r());
    for (auto& l : lambda) l = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    auto r = solve_lambda_xi(s.sys, CVec(s.sys.num_t(), 0.0), lambda, opts());
    CHECK(contains(r.solutions, lambda, 1e-10));
  }
  auto toy = setup("toy");
  auto r = solve_lambda_xi(toy.sys, CVec{1.0}, CVec{2.0}, opts());
  REQUIRE(r.target.size() == 1);
  CHECK(std::abs(r.target[0] - 4.0) < 1e-14);
  CHECK(contains(r.solutions, {std::sqrt(3.0)}));
  CHECK(contains(r.solutions, {-std::sqrt(3.0)}));

  auto syn = setup("synthetic");
  auto g = solve_lambda_xi(syn.sys, CVec{Complex(0.7, -0.4)}, CVec{Complex(1.3, 0.2)}, opts(),
                           &syn.pair.little_group());
  CHECK(g.solutions.size() == 4);
  CHECK(g.orbit_classes.size() >= 2);
}

TEST_CASE("local_inverse_psi examples") {
  auto toy = setup("toy");
  auto same = local_inverse_psi(toy.sys, CVec{1.0}, CVec{2.0}, CVec{5.0});
  CHECK(same.iterations == 0);
  CHECK(same.nu[0] == Complex(2.0));
  auto near = local_inverse_psi(toy.sys, CVec{1.0}, CVec{2.0}, CVec{5.1});
  CHECK(std::abs(near.nu[0] - std::sqrt(4.1)) < 1e-12);
  CHECK_CODE(local_inverse_psi(toy.sys, CVec{1.0}, CVec{0.0}, CVec{5.0}), ramified);
}

TEST_CASE("psi round trip") {
  for (const char* name : {"toy", "synthetic", "a2_split", "b2_split"}) {
    CAPTURE(name);
    auto s = setup(name);
    PortableRng rng(8);
    for (int k = 0; k < 25; ++k) {
      CVec zeta(s.sys.num_t()), nu(s.sys.r()), start(s.sys.r());
      for (auto& z : zeta) z = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      for (auto& v : nu) v = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      if (!is_unramified(s.sys, zeta, nu, 1e-3)) continue;
      CVec target = evaluate(s.sys, zeta, nu);
      for (std::size_t i = 0; i < nu.size(); ++i) start[i] = nu[i] + Complex(1e-4 * rng.uniform(), 1e-4 * rng.uniform());
      auto r = local_inverse_psi(s.sys, zeta, start, target);
      double err = 0;
      for (std::size_t i = 0; i < nu.size(); ++i) err = std::max(err, std::abs(r.nu[i] - nu[i]));
      CHECK(err < 1e-10);
    }
  }
}

TEST_CASE("orbit_partition examples") {
  auto toy = setup("toy");
  const WeylGroup& w = toy.pair.little_group();
  CHECK(orbit_partition({{2.0}, {-2.0}}, w).size() == 1);
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  auto p = orbit_partition({{r2}, {-r2}, {Complex(0, r3)}, {Complex(0, -r3)}}, w);
  CHECK(p.size() == 2);
  CHECK(orbit_partition({{0.0}}, w).size() == 1);
}

TEST_CASE("ramified locus of rank-one families is finite") {
  for (const char* name : {"toy", "synthetic"}) {
    auto s = setup(name);
    // J(zeta; x) as a polynomial in x has at most deg J zeros; sample a grid
    // and count the sign-isolated near-zeros along a line through them.
    Polynomial J = s.sys.jacobian();
    unsigned deg = static_cast<unsigned>(J.total_degree());
    std::size_t zeros = 0;
    const double step = 1e-3;
    double prev = J.eval(CVec{0.5, -3.0}).real();
    for (double x = -3.0 + step; x <= 3.0; x += step) {
      double cur = J.eval(CVec{0.5, x}).real();
      if ((prev < 0) != (cur < 0)) ++zeros;
      prev = cur;
    }
    CHECK(zeros <= deg);
  }
}

TEST_CASE("thread count from the environment") { CHECK(default_thread_count() >= 1); }
