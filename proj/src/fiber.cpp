#include "chevfiber/fiber.hpp"

#include "chevfiber/error.hpp"
#include "chevfiber/restrict.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <thread>

namespace chevfiber {

Complex PortableRng::unit_circle() {
  const double a = 2.0 * M_PI * uniform();
  return {std::cos(a), std::sin(a)};
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("CHEVFIBER_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

DeformedSystem::DeformedSystem(std::vector<Polynomial> polys, std::vector<std::string> tvars,
                               std::vector<std::string> xvars)
    : polys_(std::move(polys)), tvars_(std::move(tvars)), xvars_(std::move(xvars)) {
  if (polys_.size() != xvars_.size() || polys_.empty())
    throw Error(ErrorCode::dimension_mismatch, "need one polynomial per x-variable");
  auto vars = tvars_;
  vars.insert(vars.end(), xvars_.begin(), xvars_.end());
  for (std::size_t i = 0; i < polys_.size(); ++i) {
    if (polys_[i].variables() != vars)
      throw Error(ErrorCode::dimension_mismatch, "U" + std::to_string(i + 1) + " is not in the (t;x) variables");
    if (polys_[i].is_zero()) throw Error(ErrorCode::dependent, "U" + std::to_string(i + 1) + " is zero");
    auto m = polys_[i].homogeneous_degree();
    if (!m || *m == 0)
      throw Error(ErrorCode::invalid_argument, "U" + std::to_string(i + 1) + " is not homogeneous of positive degree");
    degrees_.push_back(*m);
  }
  jacobian_ = jacobian_det(polys_, xvars_);
}

DeformedSystem DeformedSystem::from_family(const Pair& pair, const RestrictedFamily& fam) {
  return DeformedSystem(fam.adapted, pair.t_vars(), pair.x_vars());
}

std::uint64_t DeformedSystem::bezout_bound() const {
  std::uint64_t b = 1;
  for (auto m : degrees_) b *= m;
  return b;
}

Polynomial jacobian_J(const DeformedSystem& sys) { return sys.jacobian(); }

namespace {

using CMat = Eigen::MatrixXcd;
using CV = Eigen::VectorXcd;

// Polynomial in x with complex coefficients (t already specialized).
struct CPoly {
  std::vector<std::vector<unsigned>> exps;
  std::vector<Complex> coeffs;
};

struct Specialized {
  std::size_t r = 0;
  std::vector<CPoly> f;
  std::vector<std::vector<CPoly>> df;
  std::vector<unsigned> maxdeg;  // per variable

  void powers(const CV& x, std::vector<std::vector<Complex>>& pw) const {
    pw.resize(r);
    for (std::size_t j = 0; j < r; ++j) {
      pw[j].resize(maxdeg[j] + 1);
      pw[j][0] = 1.0;
      for (unsigned e = 1; e <= maxdeg[j]; ++e) pw[j][e] = pw[j][e - 1] * x[static_cast<Eigen::Index>(j)];
    }
  }
  static Complex eval(const CPoly& p, const std::vector<std::vector<Complex>>& pw) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      Complex m = p.coeffs[k];
      for (std::size_t j = 0; j < p.exps[k].size(); ++j)
        if (p.exps[k][j]) m *= pw[j][p.exps[k][j]];
      s += m;
    }
    return s;
  }
  void values(const CV& x, CV& out, CMat* jac) const {
    std::vector<std::vector<Complex>> pw;
    powers(x, pw);
    out.resize(static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i) out[static_cast<Eigen::Index>(i)] = eval(f[i], pw);
    if (jac) {
      jac->resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          (*jac)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval(df[i][j], pw);
    }
  }
};

CPoly differentiate(const CPoly& p, std::size_t j) {
  CPoly d;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    unsigned e = p.exps[k][j];
    if (e == 0) continue;
    auto ex = p.exps[k];
    ex[j] = e - 1;
    d.exps.push_back(std::move(ex));
    d.coeffs.push_back(p.coeffs[k] * static_cast<double>(e));
  }
  return d;
}

Specialized specialize(const DeformedSystem& sys, std::span<const Complex> zeta) {
  if (zeta.size() != sys.num_t())
    throw Error(ErrorCode::dimension_mismatch, "zeta has " + std::to_string(zeta.size()) + " entries, expected " +
                                                   std::to_string(sys.num_t()));
  for (const auto& z : zeta)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::invalid_argument, "zeta is not finite");
  Specialized s;
  s.r = sys.r();
  const std::size_t nt = sys.num_t();
  s.maxdeg.assign(s.r, 0);
  for (const auto& p : sys.polys()) {
    std::map<std::vector<unsigned>, Complex> acc;
    for (const auto& [e, c] : p.terms()) {
      Complex v = c.get_d();
      for (std::size_t k = 0; k < nt; ++k)
        for (unsigned a = 0; a < e[k]; ++a) v *= zeta[k];
      std::vector<unsigned> xe(e.begin() + static_cast<std::ptrdiff_t>(nt), e.end());
      for (std::size_t j = 0; j < s.r; ++j) s.maxdeg[j] = std::max(s.maxdeg[j], xe[j]);
      acc[xe] += v;
    }
    CPoly cp;
    for (auto& [xe, v] : acc) {
      if (v == Complex(0.0)) continue;
      cp.exps.push_back(xe);
      cp.coeffs.push_back(v);
    }
    s.f.push_back(std::move(cp));
  }
  for (const auto& p : s.f) {
    std::vector<CPoly> row;
    for (std::size_t j = 0; j < s.r; ++j) row.push_back(differentiate(p, j));
    s.df.push_back(std::move(row));
  }
  return s;
}

CV to_eigen(std::span<const Complex> v) {
  CV out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

CVec from_eigen(const CV& v) { return CVec(v.data(), v.data() + v.size()); }

double max_abs(const CV& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void check_finite(std::span<const Complex> v, const char* what) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::invalid_argument, std::string(what) + " is not finite");
}

struct Homotopy {
  const Specialized& sys;
  CV target;
  Complex gamma;
  CV c;                        // start constants
  std::vector<unsigned> m;     // start degrees

  // H = (1-s) gamma G + s F with G_i = x_i^m_i - c_i, F = U - target.
  void eval(const CV& x, double s, CV& h, CMat& hx, CV* hs) const {
    const auto r = static_cast<Eigen::Index>(m.size());
    CV f;
    CMat fx;
    sys.values(x, f, &fx);
    f -= target;
    CV g(r);
    CMat gx = CMat::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      Complex p = std::pow(x[i], static_cast<int>(m[static_cast<std::size_t>(i)]) - 1);
      g[i] = p * x[i] - c[i];
      gx(i, i) = static_cast<double>(m[static_cast<std::size_t>(i)]) * p;
    }
    h = (1.0 - s) * gamma * g + s * f;
    hx = (1.0 - s) * gamma * gx + s * fx;
    if (hs) *hs = f - gamma * g;
  }
};

enum class PathOutcome { ok, step_underflow, diverged, singular };

struct PathEnd {
  PathOutcome outcome = PathOutcome::ok;
  CV x;
  double residual = 0;
};

bool solve_linear(const CMat& a, const CV& b, CV& out) {
  Eigen::PartialPivLU<CMat> lu(a);
  if (!(lu.rcond() > 1e-15)) return false;
  out = lu.solve(b);
  return out.allFinite();
}

// Newton correction of H(., s); converged when the step is below newton_tol
// (relative) or has stagnated at rounding level.
bool correct(const Homotopy& h, CV& x, double s, const FiberOptions& o) {
  CV hv, dx;
  CMat hx;
  double prev = HUGE_VAL;
  for (int it = 0; it < 4; ++it) {
    h.eval(x, s, hv, hx, nullptr);
    if (!solve_linear(hx, hv, dx)) return false;
    x -= dx;
    const double n = max_abs(dx), scale = 1.0 + max_abs(x);
    if (n <= o.newton_tol * scale) return true;
    if (n <= 1e-8 * scale && n >= 0.5 * prev) return true;
    if (it > 0 && n > prev) return false;
    prev = n;
  }
  return prev <= 1e-8 * (1.0 + max_abs(x));
}

void polish(const Specialized& sys, const CV& target, CV& x, const FiberOptions& o) {
  CV f, dx;
  CMat fx;
  double prev = HUGE_VAL;
  for (int it = 0; it < 25; ++it) {
    sys.values(x, f, &fx);
    f -= target;
    if (!solve_linear(fx, f, dx)) return;
    CV next = x - dx;
    const double n = max_abs(dx);
    if (n >= prev && n > o.newton_tol * (1.0 + max_abs(x))) return;
    x = next;
    if (n <= 1e-3 * o.newton_tol * (1.0 + max_abs(x))) return;
    prev = n;
  }
}

PathEnd track(const Homotopy& h, CV x, const FiberOptions& o) {
  PathEnd end;
  double s = 0.0, step = std::min(o.max_step, 0.01);
  int streak = 0;
  CV hv, hs, dx;
  CMat hx;
  while (s < 1.0) {
    step = std::min(step, 1.0 - s);
    h.eval(x, s, hv, hx, &hs);
    if (!solve_linear(hx, hs, dx)) {
      end.outcome = PathOutcome::singular;
      end.x = x;
      return end;
    }
    CV trial = x - step * dx;
    double s1 = (1.0 - s - step) <= 1e-15 ? 1.0 : s + step;
    if (correct(h, trial, s1, o)) {
      x = trial;
      s = s1;
      if (++streak >= 3) {
        step = std::min(step * 2.0, o.max_step);
        streak = 0;
      }
    } else {
      streak = 0;
      step *= 0.5;
      if (step < o.min_step) {
        end.outcome = PathOutcome::step_underflow;
        end.x = x;
        return end;
      }
    }
    if (!(max_abs(x) < o.divergence_bound)) {
      end.outcome = PathOutcome::diverged;
      end.x = x;
      return end;
    }
  }
  polish(h.sys, h.target, x, o);
  CV f;
  h.sys.values(x, f, nullptr);
  end.residual = max_abs(f - h.target);
  end.x = x;
  return end;
}

bool canonical_less(const CVec& a, const CVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

double distance(const CVec& a, const CVec& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void append_number(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

void append_complex(std::string& s, const Complex& z) {
  s += "[";
  append_number(s, z.real());
  s += ", ";
  append_number(s, z.imag());
  s += "]";
}

void append_cvec(std::string& s, const CVec& v) {
  s += "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    append_complex(s, v[i]);
  }
  s += "]";
}

}  // namespace

CVec evaluate(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> x) {
  if (x.size() != sys.r()) throw Error(ErrorCode::dimension_mismatch, "point has the wrong dimension");
  auto sp = specialize(sys, zeta);
  CV out;
  sp.values(to_eigen(x), out, nullptr);
  return from_eigen(out);
}

FiberResult solve_fiber(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> target,
                        const FiberOptions& opts, const WeylGroup* little) {
  if (target.size() != sys.r())
    throw Error(ErrorCode::dimension_mismatch, "target has " + std::to_string(target.size()) + " entries, expected " +
                                                   std::to_string(sys.r()));
  check_finite(target, "target");
  const Specialized sp = specialize(sys, zeta);
  const std::size_t r = sys.r();
  const auto& m = sys.degrees();
  const std::uint64_t paths = sys.bezout_bound();
  unsigned threads = opts.threads ? opts.threads : default_thread_count();
  threads = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, paths)));

  FiberResult res;
  res.seed = opts.seed;
  res.zeta.assign(zeta.begin(), zeta.end());
  res.target.assign(target.begin(), target.end());
  PortableRng rng(opts.seed);
  const CV tgt = to_eigen(target);

  std::vector<PathEnd> ends;
  std::size_t failed = 0;
  int attempt = 0;
  for (;; ++attempt) {
    Homotopy h{sp, tgt, rng.unit_circle(), CV(static_cast<Eigen::Index>(r)), m};
    for (std::size_t i = 0; i < r; ++i) h.c[static_cast<Eigen::Index>(i)] = rng.unit_circle();

    ends.assign(paths, PathEnd{});
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (std::uint64_t p = next++; p < paths; p = next++) {
        // mixed-radix digits of p pick the start root of each x_i^m_i = c_i
        CV x0(static_cast<Eigen::Index>(r));
        std::uint64_t q = p;
        for (std::size_t i = 0; i < r; ++i) {
          const unsigned k = static_cast<unsigned>(q % m[i]);
          q /= m[i];
          const double arg = (std::arg(h.c[static_cast<Eigen::Index>(i)]) + 2.0 * M_PI * k) / m[i];
          x0[static_cast<Eigen::Index>(i)] = std::polar(std::pow(std::abs(h.c[static_cast<Eigen::Index>(i)]), 1.0 / m[i]), arg);
        }
        ends[p] = track(h, x0, opts);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    failed = 0;
    for (const auto& e : ends)
      if (e.outcome != PathOutcome::ok || !(e.residual < opts.tol)) ++failed;
    if (static_cast<double>(failed) <= opts.failure_threshold * static_cast<double>(paths)) break;
    if (attempt >= opts.max_retries)
      throw Error(ErrorCode::solver_failure, "path tracking failed on " + std::to_string(failed) + " of " +
                                                 std::to_string(paths) + " paths after " + std::to_string(attempt + 1) +
                                                 " attempts (tracked=" + std::to_string(paths) +
                                                 ", failed=" + std::to_string(failed) + ")");
  }

  std::vector<std::pair<CVec, double>> good;
  for (const auto& e : ends)
    if (e.outcome == PathOutcome::ok && e.residual < opts.tol) good.emplace_back(from_eigen(e.x), e.residual);
  std::sort(good.begin(), good.end(), [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
  std::vector<std::pair<CVec, double>> reps;
  std::size_t merged = 0;
  for (auto& g : good) {
    auto it = std::find_if(reps.begin(), reps.end(),
                           [&](const auto& rep) { return distance(rep.first, g.first) < opts.cluster_radius; });
    if (it == reps.end()) {
      reps.push_back(std::move(g));
    } else {
      ++merged;
      if (g.second < it->second) *it = std::move(g);
    }
  }
  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
  for (auto& rep : reps) {
    res.solutions.push_back(std::move(rep.first));
    res.residuals.push_back(rep.second);
  }
  res.path_stats = {static_cast<std::size_t>(paths), failed, merged, attempt + 1};
  if (little) res.orbit_classes = orbit_partition(res.solutions, *little, opts.cluster_radius);
  return res;
}

FiberResult solve_lambda_xi(const DeformedSystem& sys, std::span<const Complex> lambda_xi,
                            std::span<const Complex> lambda, const FiberOptions& opts, const WeylGroup* little) {
  if (lambda.size() != sys.r()) throw Error(ErrorCode::dimension_mismatch, "lambda has the wrong dimension");
  check_finite(lambda, "lambda");
  const CVec origin(sys.num_t(), Complex(0.0));
  const CVec target = evaluate(sys, origin, lambda);
  FiberResult res = solve_fiber(sys, lambda_xi, target, opts, little);
  for (std::size_t k = 0; k < res.solutions.size(); ++k) {
    CVec v = evaluate(sys, lambda_xi, res.solutions[k]);
    double worst = 0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(v[i] - target[i]));
    if (!(worst < opts.tol))
      throw Error(ErrorCode::internal, "lambda(xi) solution " + std::to_string(k) + " fails the residual recheck");
  }
  return res;
}

bool is_unramified(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> x,
                   double singular_tol) {
  const Polynomial& j = sys.jacobian();
  if (j.is_zero()) return false;
  if (zeta.size() != sys.num_t() || x.size() != sys.r())
    throw Error(ErrorCode::dimension_mismatch, "point has the wrong dimension");
  CVec z(zeta.begin(), zeta.end());
  z.insert(z.end(), x.begin(), x.end());
  double coef = 0, norm2 = 0;
  for (const auto& [e, c] : j.terms()) coef = std::max(coef, std::abs(c.get_d()));
  for (const auto& v : z) norm2 += std::norm(v);
  const double scale = coef * std::pow(std::max(1.0, std::sqrt(norm2)), j.total_degree());
  return std::abs(j.eval(z)) > singular_tol * scale;
}

bool is_generic(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> x,
                const std::vector<RatVec>& functionals, double singular_tol, double int_tol) {
  if (!is_unramified(sys, zeta, x, singular_tol)) return false;
  for (const auto& f : functionals) {
    if (f.size() != x.size()) throw Error(ErrorCode::dimension_mismatch, "root functional has the wrong dimension");
    Complex p = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) p += f[i].get_d() * x[i];
    if (std::abs(p.imag()) <= int_tol && std::abs(p.real() - std::round(p.real())) <= int_tol) return false;
  }
  return true;
}

bool fiber_is_generic(const DeformedSystem& sys, std::span<const Complex> zeta, const std::vector<CVec>& fiber,
                      const std::vector<RatVec>& functionals, double singular_tol, double int_tol) {
  return std::all_of(fiber.begin(), fiber.end(), [&](const CVec& x) {
    return is_generic(sys, zeta, x, functionals, singular_tol, int_tol);
  });
}

PsiResult local_inverse_psi(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> nu0,
                            std::span<const Complex> target, const FiberOptions& opts) {
  if (nu0.size() != sys.r() || target.size() != sys.r())
    throw Error(ErrorCode::dimension_mismatch, "nu0/target have the wrong dimension");
  check_finite(nu0, "nu0");
  check_finite(target, "target");
  if (!is_unramified(sys, zeta, nu0, opts.singular_tol))
    throw Error(ErrorCode::ramified, "nu0 is ramified: J(zeta;nu0) vanishes, no local inverse");
  const Specialized sp = specialize(sys, zeta);
  const CV tgt = to_eigen(target);
  CV nu = to_eigen(nu0), f, dx;
  CMat fx;
  const double bound = opts.divergence_bound * (1.0 + max_abs(nu));
  PsiResult res;
  for (int it = 0; it <= opts.max_newton; ++it) {
    sp.values(nu, f, &fx);
    f -= tgt;
    if (max_abs(f) == 0.0) break;
    if (it == opts.max_newton)
      throw Error(ErrorCode::diverged, "Newton iteration did not converge in " + std::to_string(opts.max_newton) +
                                           " steps (target outside the basin of nu0)");
    if (!solve_linear(fx, f, dx))
      throw Error(ErrorCode::singular, "singular Jacobian at Newton iterate " + std::to_string(it));
    nu -= dx;
    res.iterations = it + 1;
    if (!nu.allFinite() || max_abs(nu) > bound)
      throw Error(ErrorCode::diverged, "Newton iterates left every bounded neighbourhood of nu0");
    if (max_abs(dx) <= 1e-3 * opts.newton_tol * (1.0 + max_abs(nu))) break;
  }
  sp.values(nu, f, nullptr);
  res.residual = max_abs(f - tgt);
  if (!(res.residual < opts.tol))
    throw Error(ErrorCode::diverged, "Newton stalled with residual " + std::to_string(res.residual));
  res.nu = from_eigen(nu);
  return res;
}

std::vector<std::vector<std::size_t>> orbit_partition(const std::vector<CVec>& solutions, const WeylGroup& little,
                                                      double radius) {
  const std::size_t n = solutions.size();
  if (n == 0) return {};
  const std::size_t r = solutions[0].size();
  if (static_cast<std::size_t>(little.rank()) != r)
    throw Error(ErrorCode::dimension_mismatch, "little group rank does not match the solution dimension");
  const auto mats = little.elements_in_coordinates_numeric();

  std::vector<std::vector<std::size_t>> related(n);
  CVec img(r);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& mtx : mats) {
      for (std::size_t a = 0; a < r; ++a) {
        Complex s = 0.0;
        for (std::size_t b = 0; b < r; ++b) s += mtx[a * r + b] * solutions[i][b];
        img[a] = s;
      }
      for (std::size_t j = 0; j < n; ++j)
        if (distance(img, solutions[j]) < radius) related[i].push_back(j);
    }
    std::sort(related[i].begin(), related[i].end());
    related[i].erase(std::unique(related[i].begin(), related[i].end()), related[i].end());
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : related[i]) {
      auto a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) classes[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : classes) {
    for (auto i : members)
      if (related[i] != members)
        throw Error(ErrorCode::clustering, "orbit relation is not transitive at solution " + std::to_string(i) +
                                               "; use a smaller tolerance or cluster radius");
    out.push_back(std::move(members));
  }
  return out;
}

std::string FiberResult::to_json() const {
  std::string s = "{\n  \"seed\": " + std::to_string(seed) + ",\n  \"zeta\": ";
  append_cvec(s, zeta);
  s += ",\n  \"target\": ";
  append_cvec(s, target);
  s += ",\n  \"solutions\": [";
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    s += i ? ",\n    " : "\n    ";
    append_cvec(s, solutions[i]);
  }
  s += solutions.empty() ? "],\n  \"residuals\": [" : "\n  ],\n  \"residuals\": [";
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (i) s += ", ";
    append_number(s, residuals[i]);
  }
  s += "],\n  \"path_stats\": {\"tracked\": " + std::to_string(path_stats.tracked) +
       ", \"failed\": " + std::to_string(path_stats.failed) + ", \"merged\": " + std::to_string(path_stats.merged) +
       "},\n  \"orbit_classes\": [";
  for (std::size_t i = 0; i < orbit_classes.size(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (std::size_t k = 0; k < orbit_classes[i].size(); ++k) {
      if (k) s += ", ";
      s += std::to_string(orbit_classes[i][k]);
    }
    s += "]";
  }
  s += "]\n}\n";
  return s;
}

}  // namespace chevfiber
