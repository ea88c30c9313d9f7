// Acceptance checks: one PASS/FAIL line per criterion.
//
// usage: acceptance SOURCE_DIR CLI_PATH

#include "chevfiber/error.hpp"
#include "chevfiber/fiber.hpp"
#include "chevfiber/pairdb.hpp"
#include "chevfiber/restrict.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace chevfiber;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_source, g_cli;

// pinned tolerances
constexpr double kResidualTol = 1e-8;       // criterion 1
constexpr double kLambdaTol = 1e-10;        // criterion 4
constexpr double kRoundTripTol = 1e-10;     // criterion 5
constexpr double kFiberSeconds = 120.0;     // criterion 1
constexpr double kE6Seconds = 60.0;         // criterion 3
constexpr int kDraws = 20;
constexpr int kPsiSamples = 100;
constexpr unsigned kDegreeBound = 12;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Family {
  std::string name;
  Pair pair;
  RestrictedFamily fam;
  DeformedSystem sys;
  std::uint64_t d;
};

Family load(const std::string& name) {
  Pair p = Pair::create(PairConfig::load(g_source + "/configs/" + name + ".cfg"));
  RestrictedFamily f = restrict_family(p, p.default_selection());
  DeformedSystem s = DeformedSystem::from_family(p, f);
  std::uint64_t d = rank_d(f.degrees, fundamental_degrees(p.restricted().components()));
  return {name, std::move(p), std::move(f), std::move(s), d};
}

const std::vector<std::string> kFiberFamilies = {"toy", "synthetic", "a2_split", "b2_split", "c2_split", "bc2_split"};

Complex draw(PortableRng& rng) { return {2 * rng.uniform() - 1, 2 * rng.uniform() - 1}; }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

void print(int n, const std::string& title, const Verdict& v, const std::string& summary) {
  std::cout << "criterion " << n << " (" << title << "): " << (v.pass ? "PASS" : "FAIL") << "  " << summary << "\n";
  for (const auto& s : v.notes) std::cout << "    " << s << "\n";
}

int run(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<long long> hilbert(const std::vector<unsigned>& degrees, unsigned n) {
  std::vector<long long> c(n + 1, 0);
  c[0] = 1;
  for (unsigned e : degrees)
    for (unsigned k = e; k <= n; ++k) c[k] += c[k - e];
  return c;
}

// sum of the coefficients of prod(1 - q^m) / prod(1 - q^e)
long long hilbert_rank(const std::vector<unsigned>& m, const std::vector<unsigned>& e) {
  unsigned n = std::accumulate(m.begin(), m.end(), 0u);
  std::vector<long long> num(n + 1, 0);
  num[0] = 1;
  for (unsigned d : m)
    for (unsigned k = n; k >= d; --k) num[k] -= num[k - d];
  auto h = hilbert(e, n);
  long long total = 0;
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = 0; i + j <= n; ++j) total += num[i] * h[j];
  return total;
}

// ---- criterion 1 / 7 ----

struct FiberRun {
  Verdict v;
  std::string json;
  std::size_t solves = 0;
  double max_residual = 0;
  double seconds = 0;
};

FiberRun fiber_count_law(std::vector<Family>& fams) {
  FiberRun out;
  auto t0 = Clock::now();
  for (auto& f : fams) {
    const WeylGroup& little = f.pair.little_group();
    const std::size_t expected = little.order() * f.d;
    PortableRng rng(f.pair.config().seed.value_or(1));
    FiberOptions o;
    for (int k = 0; k < kDraws; ++k) {
      CVec zeta(f.sys.num_t()), target(f.sys.r());
      FiberResult res;
      for (int attempt = 0;; ++attempt) {
        for (auto& z : zeta) z = draw(rng);
        for (auto& a : target) a = draw(rng);
        o.seed = rng.next();
        res = solve_fiber(f.sys, zeta, target, o, &little);
        if (fiber_is_generic(f.sys, zeta, res.solutions, f.pair.restricted_functionals()) || attempt == 5) break;
      }
      ++out.solves;
      out.v.require(res.solutions.size() == expected, f.name + " draw " + std::to_string(k) + ": " +
                                                            std::to_string(res.solutions.size()) + " solutions, expected " +
                                                            std::to_string(expected));
      for (double r : res.residuals) {
        out.max_residual = std::max(out.max_residual, r);
        out.v.require(r < kResidualTol, f.name + ": residual " + std::to_string(r));
      }
      out.json += res.to_json();
    }
  }
  out.seconds = seconds_since(t0);
  out.v.require(out.seconds < kFiberSeconds, "runtime " + std::to_string(out.seconds) + " s");
  return out;
}

// ---- criterion 2 ----

Verdict surjectivity(std::vector<Family>& fams, std::string& summary) {
  Verdict v;
  std::ostringstream s;
  for (auto& f : fams) {
    if (f.name == "toy") continue;
    auto rep = surjectivity_check(f.pair, kDegreeBound);
    auto e = fundamental_degrees(f.pair.restricted().components());
    const bool split = f.name.find("_split") != std::string::npos;
    if (split) {
      v.require(rep.surjective, f.name + " not surjective");
      v.require(f.d == 1, f.name + " d != 1");
    } else {
      v.require(!rep.surjective && rep.failing_degree == 2u, f.name + " should fail at degree 2");
      v.require(f.d == 2, f.name + " d != 2");
    }
    v.require(static_cast<long long>(f.d) == hilbert_rank(f.fam.degrees, e), f.name + " rank_d disagrees with oracle");
    auto inv = hilbert(e, kDegreeBound), gen = hilbert(f.fam.degrees, kDegreeBound);
    for (const auto& d : rep.degrees)
      v.require(static_cast<long long>(d.invariant_dim) == inv[d.degree] &&
                    static_cast<long long>(d.generated_dim) == gen[d.degree],
                f.name + " graded dimension mismatch at degree " + std::to_string(d.degree));
    s << f.name << ": " << (rep.surjective ? "surjective" : "fails at " + std::to_string(*rep.failing_degree))
      << ", d=" << f.d << "; ";
  }
  summary = s.str();
  return v;
}

// ---- criterion 3 ----

// deg J from the exact scaling J(c p) = c^D J(p) at the certificate point,
// for families whose symbolic determinant is too large to expand
bool scaling_degree(const InvariantFamily& fam, const std::vector<std::string>& vars, unsigned expected) {
  const RatVec& p = fam.certificate_point;
  Rational a = jacobian_at(fam.polys, vars, p).determinant();
  if (a == 0 || a != fam.certificate_value) return false;
  for (const Rational c : {Rational(2), Rational(3, 2)}) {
    RatVec q = p;
    for (auto& x : q) x *= c;
    Rational scale = 1;
    for (unsigned k = 0; k < expected; ++k) scale *= c;
    if (jacobian_at(fam.polys, vars, q).determinant() != a * scale) return false;
  }
  return true;
}

Verdict degree_identities(const std::vector<Family>& fams, std::string& summary) {
  Verdict v;
  const std::vector<std::pair<std::string, int>> types = {
      {"A", 1}, {"A", 2}, {"A", 3}, {"A", 4}, {"B", 2}, {"B", 3}, {"B", 4}, {"C", 2}, {"C", 3}, {"C", 4},
      {"D", 4}, {"G", 2}, {"F", 4}, {"BC", 2}, {"BC", 3}, {"E", 6}};
  double e6_seconds = 0;
  std::ostringstream s;
  for (const auto& [family, rank] : types) {
    const std::string label = family + std::to_string(rank);
    auto t0 = Clock::now();
    RootSystem rs = RootSystem::build(family, rank);
    WeylGroup w = WeylGroup::enumerate(rs);
    if (label == "E6") e6_seconds = seconds_since(t0);
    auto degs = fundamental_degrees(rs.components());
    std::size_t prod = 1;
    unsigned expected = 0;
    for (unsigned m : degs) {
      prod *= m;
      expected += m - 1;
    }
    v.require(prod == w.order(), label + ": product of degrees " + std::to_string(prod) + " != |W| " +
                                     std::to_string(w.order()));
    auto fam = invariant_family(rs, w);
    auto vars = coordinate_variables(static_cast<std::size_t>(rs.rank()));
    bool ok;
    if (rs.rank() <= 4) {
      Polynomial J = jacobian_det(fam.polys, vars);
      ok = !J.is_zero() && (expected == 0 ? J.total_degree() == 0 : J.homogeneous_degree() == expected);
    } else {
      ok = scaling_degree(fam, vars, expected);
    }
    v.require(ok, label + ": deg J != sum(m_i - 1)");
    s << label << " " << w.order() << "; ";
  }
  for (const auto& f : fams) {
    unsigned expected = 0;
    for (unsigned m : f.sys.degrees()) expected += m - 1;
    v.require(f.sys.jacobian().homogeneous_degree() == expected, f.name + ": deg J(t;x) != sum(m_i - 1)");
  }
  v.require(e6_seconds < kE6Seconds, "E6 closure took " + std::to_string(e6_seconds) + " s");
  summary = s.str() + "E6 closure " + std::to_string(e6_seconds).substr(0, 5) + " s";
  return v;
}

// ---- criterion 4 ----

Verdict lambda_witness(std::vector<Family>& fams, std::string& summary) {
  Verdict v;
  double worst = 0;
  std::size_t min_classes = 1000;
  for (auto& f : fams) {
    PortableRng rng(99);
    FiberOptions o;
    for (int k = 0; k < kDraws; ++k) {
      CVec lambda(f.sys.r());
      for (auto& l : lambda) l = draw(rng);
      o.seed = rng.next();
      auto res = solve_lambda_xi(f.sys, CVec(f.sys.num_t(), 0.0), lambda, o);
      double best = 1e300;
      for (const auto& x : res.solutions) {
        double d = 0;
        for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - lambda[i]));
        best = std::min(best, d);
      }
      worst = std::max(worst, best);
      v.require(best < kLambdaTol, f.name + ": lambda missing (distance " + std::to_string(best) + ")");
    }
    if (f.name == "synthetic") {
      for (int k = 0; k < kDraws; ++k) {
        CVec xi = {draw(rng)}, lambda = {draw(rng)};
        o.seed = rng.next();
        auto res = solve_lambda_xi(f.sys, xi, lambda, o, &f.pair.little_group());
        min_classes = std::min(min_classes, res.orbit_classes.size());
        v.require(res.orbit_classes.size() >= f.d, "synthetic: only " + std::to_string(res.orbit_classes.size()) +
                                                       " orbit classes");
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max distance to lambda %.3g; synthetic orbit classes >= %zu", worst, min_classes);
  summary = buf;
  return v;
}

// ---- criterion 5 ----

Verdict psi_round_trip(std::vector<Family>& fams, std::string& summary) {
  Verdict v;
  double worst = 0;
  std::size_t samples = 0;
  for (auto& f : fams) {
    if (f.name != "toy" && f.name != "synthetic") continue;
    PortableRng rng(4242);
    int done = 0;
    while (done < kPsiSamples) {
      CVec zeta(f.sys.num_t()), nu(f.sys.r()), start(f.sys.r());
      for (auto& z : zeta) z = draw(rng);
      for (auto& x : nu) x = draw(rng);
      if (!is_unramified(f.sys, zeta, nu, 1e-3)) continue;
      CVec target = evaluate(f.sys, zeta, nu);
      for (std::size_t i = 0; i < nu.size(); ++i) start[i] = nu[i] + 1e-3 * draw(rng);
      try {
        auto r = local_inverse_psi(f.sys, zeta, start, target);
        double err = 0;
        for (std::size_t i = 0; i < nu.size(); ++i) err = std::max(err, std::abs(r.nu[i] - nu[i]));
        worst = std::max(worst, err);
        v.require(err < kRoundTripTol, f.name + ": round trip error " + std::to_string(err));
      } catch (const Error& e) {
        v.require(false, f.name + ": " + e.what());
      }
      ++done;
      ++samples;
    }
    // ramified start points: x = 0 for both, x = i/sqrt(2) at zeta = 1 for synthetic
    std::vector<CVec> ramified = {{0.0}};
    if (f.name == "synthetic") ramified.push_back({Complex(0, 1 / std::sqrt(2.0))});
    for (const auto& x0 : ramified) {
      ErrorCode code{};
      try {
        local_inverse_psi(f.sys, CVec{1.0}, x0, CVec{3.0});
      } catch (const Error& e) {
        code = e.code();
      }
      v.require(code == ErrorCode::ramified, f.name + ": ramified start point not rejected");
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%zu round trips, max error %.3g; ramified starts rejected", samples, worst);
  summary = buf;
  return v;
}

// ---- criterion 6 ----

Verdict classification(std::string& summary) {
  Verdict v;
  PairDB db = PairDB::load(g_source + "/data/pairs.db");
  auto rep = db.check_integrity();
  v.require(rep.ok, "integrity problems reported");
  for (const auto& p : rep.problems) v.require(false, p);
  std::size_t n35 = 0, n10 = 0;
  try {
    auto list = db.corrected_prop31();
    n35 = list.size();
    for (const auto& k : replacement_pairs())
      v.require(std::any_of(list.begin(), list.end(), [&](const PairRecord& r) { return r.key() == k; }),
                "replacement " + k + " missing");
    for (const auto& k : removed_pairs())
      v.require(std::none_of(list.begin(), list.end(), [&](const PairRecord& r) { return r.key() == k; }),
                "removed pair " + k + " present");
    n10 = db.b_exceptional_list().size();
  } catch (const Error& e) {
    v.require(false, e.what());
  }
  for (const auto& r : db.records()) {
    if (r.dual_name) v.require(is_exceptional(r) == is_exceptional(db.dual_of(r)), "dual invariance fails for " + r.key());
    if (r.sigma_b && is_split(r)) v.require(!is_b_exceptional(r), r.key() + " split and b-exceptional");
  }
  auto rows = [](const std::string& text) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) ++n;
    return n == 0 ? 0 : n - 1;  // header
  };
  const std::string out = "acceptance_classify.csv";
  const std::string base = "\"" + g_cli + "\" classify --db \"" + g_source + "/data/pairs.db\" --format csv --out " + out;
  int rc_all = run(base + " > /dev/null 2>&1");
  int rc_ex = run(base + " --filter exceptional > /dev/null 2>&1");
  std::size_t cli_ex = rows(slurp(out));
  int rc_b = run(base + " --filter b_exceptional > /dev/null 2>&1");
  std::size_t cli_b = rows(slurp(out));
  std::remove(out.c_str());
  v.require(rc_all == 0 && rc_ex == 0 && rc_b == 0, "classify exit codes " + std::to_string(rc_all) + "," +
                                                        std::to_string(rc_ex) + "," + std::to_string(rc_b));
  v.require(cli_ex == kExceptionalCount, "CLI lists " + std::to_string(cli_ex) + " exceptional pairs");
  v.require(cli_b == kBExceptionalCount, "CLI lists " + std::to_string(cli_b) + " b-exceptional pairs");
  summary = "exceptional " + std::to_string(n35) + ", b-exceptional " + std::to_string(n10) + "; CLI " +
            std::to_string(cli_ex) + " / " + std::to_string(cli_b) + ", exit " + std::to_string(rc_all);
  return v;
}

// ---- criterion 7 ----

Verdict determinism(const FiberRun& first, std::vector<Family>& fams, std::string& summary) {
  Verdict v;
  FiberRun second = fiber_count_law(fams);
  v.require(first.json == second.json, "library fiber JSON differs between runs");
  const std::string a = "acceptance_det_a.json", b = "acceptance_det_b.json";
  const std::string cmd = "\"" + g_cli + "\" fiber --config \"" + g_source + "/configs/synthetic.cfg\" --seed 7 --out ";
  int ra = run(cmd + a + " > /dev/null 2>&1");
  int rb = run(cmd + b + " > /dev/null 2>&1");
  const std::string ja = slurp(a), jb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  v.require(ra == 0 && rb == 0, "CLI fiber exit codes " + std::to_string(ra) + "," + std::to_string(rb));
  v.require(!ja.empty() && ja == jb, "CLI fiber output differs between runs");
  summary = std::to_string(first.json.size()) + " bytes of fiber JSON identical across runs; CLI output identical";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance SOURCE_DIR CLI_PATH\n";
    return 1;
  }
  g_source = argv[1];
  g_cli = argv[2];
  bool all = true;
  auto record = [&](int n, const std::string& title, const std::function<Verdict(std::string&)>& body) {
    std::string summary;
    Verdict v;
    try {
      v = body(summary);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    print(n, title, v, summary);
  };

  std::vector<Family> fams;
  for (const auto& name : kFiberFamilies) fams.push_back(load(name));

  FiberRun first;
  record(1, "fiber count |W| d", [&](std::string& s) {
    first = fiber_count_law(fams);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu fibers over %zu families, max residual %.3g, %.2f s", first.solves, fams.size(),
                  first.max_residual, first.seconds);
    s = buf;
    return first.v;
  });
  record(2, "surjectivity and rank d", [&](std::string& s) { return surjectivity(fams, s); });
  record(3, "degree identities", [&](std::string& s) { return degree_identities(fams, s); });
  record(4, "lambda witness", [&](std::string& s) { return lambda_witness(fams, s); });
  record(5, "local inverse psi", [&](std::string& s) { return psi_round_trip(fams, s); });
  record(6, "classification", [&](std::string& s) { return classification(s); });
  record(7, "determinism", [&](std::string& s) { return determinism(first, fams, s); });
  std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
  return all ? 0 : 1;
}
