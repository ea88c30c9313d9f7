#pragma once

// Symmetric-pair configurations a_q inside c and restriction of ambient
// invariants to a_q.
//
// Ambient polynomial coordinates are the y-coordinates of the ambient
// RootSystem (variables u1..un). A configuration fixes r embedding vectors
// E_1..E_r in those coordinates; the adapted coordinates (t;x) are defined by
// y = T t + E x, where T is an exact Gram-Schmidt complement of E for the
// coordinate Gram matrix. Setting t = 0 is restriction to a_q.

#include "chevfiber/rootsys.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chevfiber {

/// Parsed configuration file. Pair keys: name, ambient_type, ambient_rank,
/// restricted_type, restricted_rank, embedding (one line per row),
/// little_subgroup_order. Family keys: invariant (one ambient invariant per
/// line, in u1..un), selection (1-based indices). Run keys: seed, tol,
/// degree_bound, zeta, target.
struct PairConfig {
  std::string name;
  std::string ambient_type;
  int ambient_rank = 0;
  std::string restricted_type;
  int restricted_rank = 0;
  std::vector<RatVec> embedding;
  std::optional<std::uint64_t> little_subgroup_order;

  std::vector<std::string> invariants;
  std::vector<std::size_t> selection;  // 0-based

  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<unsigned> degree_bound;
  std::vector<std::complex<double>> zeta;
  std::vector<std::complex<double>> target;

  /// Errors carry "line N:" prefixes.
  static PairConfig parse(const std::string& text);
  static PairConfig load(const std::string& path);
};

/// "3", "-1/2", "2.5", "1+2i", "-i", "0.5-1.5i".
std::complex<double> parse_complex(const std::string& text);

class Pair {
 public:
  /// Builds both root systems, the ambient and little Weyl groups and the
  /// adapted coordinates. The restricted roots are derived from the ambient
  /// ones and must match restricted_type (root count and |W| = product of
  /// degrees); throws invalid_argument otherwise.
  static Pair create(const PairConfig& cfg);

  const PairConfig& config() const { return cfg_; }
  const RootSystem& ambient() const { return *ambient_; }
  const WeylGroup& ambient_group() const { return *ambient_group_; }
  const RootSystem& restricted() const { return *restricted_; }
  /// Little Weyl group acting on x-coordinates.
  const WeylGroup& little_group() const { return *little_group_; }

  std::size_t n() const { return static_cast<std::size_t>(ambient_->rank()); }
  std::size_t r() const { return embedding_.cols(); }
  const std::vector<std::string>& ambient_vars() const { return uvars_; }
  const std::vector<std::string>& t_vars() const { return tvars_; }
  const std::vector<std::string>& x_vars() const { return xvars_; }
  /// t-variables followed by x-variables.
  std::vector<std::string> adapted_vars() const;
  /// n x r, columns E_j.
  const RatMatrix& embedding() const { return embedding_; }
  /// n x (n-r), columns T_k.
  const RatMatrix& complement() const { return complement_; }

  /// Restricted roots as linear functionals on x (distinct, nonzero).
  const std::vector<RatVec>& restricted_functionals() const { return functionals_; }

  /// U(y) rewritten in (t;x); exact.
  Polynomial adapt(const Polynomial& u) const;
  /// restrict_zero(adapt(u), t-variables), a polynomial in x.
  Polynomial restrict(const Polynomial& u) const;

  /// Ambient invariants: the configured `invariant:` lines (checked exactly
  /// against the ambient generators) or the generated invariant family.
  const std::vector<Polynomial>& ambient_invariants() const { return invariants_; }
  /// Members used for restrict_family: the configured selection, else all
  /// invariants when there are exactly r, else the first r.
  std::vector<std::size_t> default_selection() const;

 private:
  PairConfig cfg_;
  std::shared_ptr<const RootSystem> ambient_, restricted_;
  std::shared_ptr<const WeylGroup> ambient_group_, little_group_;
  std::vector<std::string> uvars_, tvars_, xvars_;
  RatMatrix embedding_, complement_;
  std::vector<RatVec> functionals_;
  std::vector<Polynomial> invariants_;
};

struct RestrictedFamily {
  std::vector<Polynomial> adapted;  // U_i(t;x)
  std::vector<Polynomial> polys;    // W_i(x) = U_i(0;x)
  std::vector<unsigned> degrees;
  std::vector<std::size_t> source;  // indices into the ambient invariants
  Polynomial jacobian;              // J(0;x) = det[dW_i/dx_j]
};

/// Restricts the selected ambient invariants. Throws dependent (with the
/// restrictions in the message) when det[dW_i/dx_j] vanishes identically,
/// invalid_argument when a restriction is not little-group invariant.
RestrictedFamily restrict_family(const Pair& pair, const std::vector<std::size_t>& selection);

/// prod(m) / prod(e); throws non_integer when the ratio is fractional and
/// dimension_mismatch when the lengths differ.
std::uint64_t rank_d(const std::vector<unsigned>& m, const std::vector<unsigned>& e);

struct DegreeReport {
  unsigned degree = 0;
  std::size_t invariant_dim = 0;  // dim of degree-k little-group invariants
  std::size_t generated_dim = 0;  // dim of degree-k products of restrictions
  bool contained = false;
};

struct SurjectivityReport {
  bool surjective = true;
  std::optional<unsigned> failing_degree;
  unsigned degree_bound = 0;
  std::vector<DegreeReport> degrees;
  std::string reasoning;
};

inline constexpr unsigned kDefaultDegreeBound = 12;

/// Degree-by-degree comparison, k = 1..N, of the little-group invariants
/// (common kernel of s_i - 1 on S^k) with the span of all products of
/// restricted ambient invariants. Stops at the first failing degree.
SurjectivityReport surjectivity_check(const Pair& pair, unsigned degree_bound = kDefaultDegreeBound);

/// (order_little / order_subgroup) * d; throws non_integer on non-divisibility.
std::uint64_t dim_E(std::uint64_t order_little, std::uint64_t order_subgroup, std::uint64_t d);

/// Monomials of total degree k in r variables, in descending graded-lex order.
std::vector<Exponent> monomials_of_degree(std::size_t r, unsigned k);

}  // namespace chevfiber
