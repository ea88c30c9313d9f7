#pragma once

// Fibers of x -> (U_1(zeta;x), ..., U_r(zeta;x)).
//
// The degree of J(t;x) = det[dU_i/dx_j] is sum(deg U_i - 1) whenever J is
// nonzero; a product of the (deg U_i - 1) would be wrong already for r = 2.

#include "chevfiber/polyring.hpp"
#include "chevfiber/rootsys.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace chevfiber {

class Pair;
struct RestrictedFamily;

using CVec = std::vector<Complex>;

/// Seeded generator with a platform-independent mapping to [0,1).
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  /// exp(2 pi i u)
  Complex unit_circle();
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

class DeformedSystem {
 public:
  /// polys live in tvars followed by xvars; each must be nonzero and
  /// homogeneous, and there must be one per x-variable.
  DeformedSystem(std::vector<Polynomial> polys, std::vector<std::string> tvars, std::vector<std::string> xvars);
  static DeformedSystem from_family(const Pair& pair, const RestrictedFamily& fam);

  std::size_t r() const { return xvars_.size(); }
  std::size_t num_t() const { return tvars_.size(); }
  const std::vector<Polynomial>& polys() const { return polys_; }
  const std::vector<unsigned>& degrees() const { return degrees_; }
  const std::vector<std::string>& t_vars() const { return tvars_; }
  const std::vector<std::string>& x_vars() const { return xvars_; }
  /// J(t;x) = det[dU_i/dx_j].
  const Polynomial& jacobian() const { return jacobian_; }
  /// Product of the degrees (number of homotopy paths).
  std::uint64_t bezout_bound() const;

 private:
  std::vector<Polynomial> polys_;
  std::vector<unsigned> degrees_;
  std::vector<std::string> tvars_, xvars_;
  Polynomial jacobian_;
};

/// J(t;x) of the system; zero when the members are dependent in x.
Polynomial jacobian_J(const DeformedSystem& sys);

struct FiberOptions {
  std::uint64_t seed = 0;
  double tol = 1e-8;              // residual acceptance
  double newton_tol = 1e-12;      // relative Newton step size
  double cluster_radius = 1e-6;
  double singular_tol = 1e-10;
  double int_tol = 1e-8;
  double min_step = 1e-9;
  double max_step = 1e-1;
  double failure_threshold = 0.05;
  int max_retries = 3;
  int max_newton = 50;            // local_inverse_psi
  double divergence_bound = 1e8;
  unsigned threads = 0;           // 0: CHEVFIBER_THREADS, else hardware
};

struct PathStats {
  std::size_t tracked = 0;
  std::size_t failed = 0;
  std::size_t merged = 0;
  int attempts = 0;
};

struct FiberResult {
  std::uint64_t seed = 0;
  CVec zeta;
  CVec target;
  std::vector<CVec> solutions;
  std::vector<double> residuals;
  PathStats path_stats;
  std::vector<std::vector<std::size_t>> orbit_classes;

  /// Fields seed, zeta, target, solutions, residuals, path_stats, orbit_classes;
  /// numbers with 17 significant digits.
  std::string to_json() const;
};

/// (U_1(zeta;x) - target_1, ...); with an empty target, the values themselves.
CVec evaluate(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> x);

/// Total-degree homotopy from x_i^{m_i} = c_i with the gamma trick. Retries
/// with fresh random constants while more than failure_threshold of the paths
/// fail; throws solver_failure (with stats) after max_retries. When `little`
/// is given, orbit_classes is filled.
FiberResult solve_fiber(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> target,
                        const FiberOptions& opts, const WeylGroup* little = nullptr);

/// Fiber over a_i = U_i(0; lambda) at zeta = Lambda_xi.
FiberResult solve_lambda_xi(const DeformedSystem& sys, std::span<const Complex> lambda_xi,
                            std::span<const Complex> lambda, const FiberOptions& opts,
                            const WeylGroup* little = nullptr);

/// |J(zeta;x)| > singular_tol * max|coef J| * max(1, |(zeta;x)|)^deg J.
bool is_unramified(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> x,
                   double singular_tol = 1e-10);

/// Unramified and no <x, alpha> within int_tol of an integer, for the
/// restricted roots given as functionals on x.
bool is_generic(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> x,
                const std::vector<RatVec>& functionals, double singular_tol = 1e-10, double int_tol = 1e-8);
/// Every point of the fiber is generic.
bool fiber_is_generic(const DeformedSystem& sys, std::span<const Complex> zeta, const std::vector<CVec>& fiber,
                      const std::vector<RatVec>& functionals, double singular_tol = 1e-10, double int_tol = 1e-8);

struct PsiResult {
  CVec nu;
  int iterations = 0;
  double residual = 0;
};

/// Newton iteration for U(zeta;nu) = target started at nu0. Throws ramified
/// when nu0 is ramified, singular when an iterate has a singular Jacobian and
/// diverged when max_newton iterations do not converge.
PsiResult local_inverse_psi(const DeformedSystem& sys, std::span<const Complex> zeta, std::span<const Complex> nu0,
                            std::span<const Complex> target, const FiberOptions& opts = {});

/// Classes of solutions related by the little group within `radius`. Throws
/// clustering when the relation fails to be transitive.
std::vector<std::vector<std::size_t>> orbit_partition(const std::vector<CVec>& solutions, const WeylGroup& little,
                                                      double radius = 1e-6);

/// CHEVFIBER_THREADS when set and positive, else the hardware count.
unsigned default_thread_count();

}  // namespace chevfiber
