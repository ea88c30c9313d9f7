#pragma once

// Root systems, their Weyl groups and generated invariant families.
//
// A RootSystem lives in an ambient rational space Q^N with a symmetric
// positive-definite Gram matrix (the identity for every built-in type). The
// roots span an r-dimensional subspace V; polynomial work happens in
// coordinates y with respect to a fixed rational basis P of V, so that an
// ambient vector in V is P*y. For types with a rational orthonormal
// realization in Q^r (A1, B, C, BC, D, F4) P is the identity; A_n (n >= 2), G2
// and E6 use their simple roots as P.

#include "chevfiber/linalg.hpp"
#include "chevfiber/polyring.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace chevfiber {

struct TypeComponent {
  std::string family;  // A, B, C, D, BC, E, F, G
  int rank = 0;
  std::string label() const;  // "A2", "BC2", "E6", ...
};

/// Parses "A2", "BC3", "E6", "A1+A1" (ranks inside the label) or a bare family
/// letter together with `rank`. Throws unsupported.
std::vector<TypeComponent> parse_type(const std::string& type_label, int rank);

/// Fundamental degrees of an irreducible type from the built-in table (E7 and
/// E8 included as labels). BC_n answers with the C_n degrees.
std::vector<unsigned> fundamental_degrees(const TypeComponent& c);
std::vector<unsigned> fundamental_degrees(const std::vector<TypeComponent>& cs);
/// Root count implied by the type (used to validate derived root sets).
std::size_t expected_root_count(const std::vector<TypeComponent>& cs);

class RootSystem {
 public:
  /// Standard realization; roots are the closure of the simple roots (plus 2e_n
  /// for BC) under the simple reflections. Supported: A1-A6, B2-B6, C2-C6,
  /// BC1-BC6, D3-D6, G2, F4, E6 and '+'-joined sums of those.
  static RootSystem build(const std::string& type_label, int rank);

  /// Root system from an explicit root list in Q^N with inner product `gram`.
  /// Positive and simple roots come from a generic linear functional;
  /// polynomial coordinates are the ambient ones (P = I, so N must equal the
  /// span dimension). Throws invalid_argument when the set is not closed
  /// under its own reflections.
  static RootSystem from_roots(std::vector<TypeComponent> type, std::vector<RatVec> roots, RatMatrix gram);

  const std::vector<TypeComponent>& components() const { return components_; }
  std::string label() const;
  int rank() const { return static_cast<int>(simple_.size()); }
  std::size_t ambient_dim() const { return gram_.rows(); }
  const RatMatrix& gram() const { return gram_; }
  const std::vector<RatVec>& roots() const { return roots_; }
  const std::vector<RatVec>& simple_roots() const { return simple_; }
  /// N x r basis of V used for polynomial coordinates.
  const RatMatrix& coordinate_basis() const { return basis_; }
  /// Coefficients of the linear functional y -> <alpha, P y> on polynomial
  /// coordinates.
  RatVec pairing(const RatVec& ambient_vector) const;
  /// Gram matrix of the polynomial coordinates, P^T G P.
  RatMatrix coordinate_gram() const;
  /// Cartan integers <alpha_j, alpha_i^vee> indexed [i][j].
  std::vector<std::vector<int>> cartan_integers() const;
  /// Ambient simple reflection s_i (orthogonal for the Gram form).
  RatMatrix simple_reflection(std::size_t i) const;
  RatVec reflect(const RatVec& v, const RatVec& root) const;
  std::vector<RatVec> fundamental_weights() const;
  bool is_regular(const RatVec& v) const;

  /// type/rank/ambient_dim header followed by the sorted root tuples.
  std::string manifest() const;

 private:
  std::vector<TypeComponent> components_;
  RatMatrix gram_;
  std::vector<RatVec> roots_;
  std::vector<RatVec> simple_;
  RatMatrix basis_;
};

/// Finite reflection group of a RootSystem, materialized as integer matrices
/// in the simple-root basis (w(alpha_j) = sum_i M[i][j] alpha_i).
class WeylGroup {
 public:
  static constexpr std::size_t kDefaultCap = 100000;

  /// Breadth-first closure over the simple reflections. Throws capacity when
  /// more than `cap` elements appear.
  static WeylGroup enumerate(const RootSystem& rs, std::size_t cap = kDefaultCap);

  std::size_t order() const { return count_; }
  int rank() const { return rank_; }
  /// Element k as an r x r integer matrix in the simple-root basis.
  std::vector<int> element(std::size_t k) const;
  bool contains(const std::vector<int>& m) const;
  /// Element k acting on polynomial coordinates y (rational r x r).
  RatMatrix in_coordinates(std::size_t k) const;
  std::vector<RatMatrix> generators_in_coordinates() const;
  /// All elements on polynomial coordinates, as doubles (row-major r x r).
  std::vector<std::vector<double>> elements_in_coordinates_numeric() const;

  /// w^{-1} is enumerated for every w.
  bool inverse_closed() const;
  /// Products of `samples` pseudo-random pairs stay inside the set.
  bool closed_on_samples(std::size_t samples, std::uint64_t seed) const;

 private:
  int rank_ = 0;
  std::size_t count_ = 0;
  std::vector<std::int16_t> data_;  // count_ * rank_^2
  std::vector<std::vector<int>> generators_;
  RatMatrix to_simple_;    // C: y-coordinates -> simple-root coordinates
  RatMatrix from_simple_;  // C^{-1}
  RatMatrix simple_gram_;
  // open-addressing index over data_
  std::vector<std::uint32_t> table_;
  std::size_t find(const std::int16_t* m) const;
  void insert_index(std::size_t k);
  static std::uint64_t hash(const std::int16_t* m, std::size_t n);
};

/// sum over roots of <alpha, x>^k on polynomial coordinates; zero for odd k
/// when the root set is symmetric.
Polynomial orbit_sum_invariant(const RootSystem& rs, unsigned k);

/// sum over the W-orbit of v of <p, x>^k (each orbit point once).
Polynomial orbit_power_sum(const RootSystem& rs, const RatVec& v, unsigned k);
std::vector<RatVec> orbit(const RootSystem& rs, const RatVec& v, std::size_t cap = WeylGroup::kDefaultCap);

/// v_j = (1, j+1, (j+1)^2, ...) in ambient coordinates.
RatVec regular_candidate(std::size_t ambient_dim, std::size_t j);

struct InvariantFamily {
  std::vector<Polynomial> polys;
  std::vector<unsigned> degrees;
  /// ambient vector whose orbit generated each member
  std::vector<RatVec> generators;
  /// rational point where det[dU_i/dy_j] != 0, and that value
  RatVec certificate_point;
  Rational certificate_value;
};

/// One invariant per fundamental degree: orbit power sums of the regular
/// vectors v_0, v_1, ... (groups up to kRegularOrbitCap elements), falling
/// back to fundamental-weight orbits and the root orbit. A candidate is kept
/// only if it raises the rank of the Jacobian of the partial family. Throws
/// dependent when the candidate sequence is exhausted.
InvariantFamily invariant_family(const RootSystem& rs, const WeylGroup& w);
inline constexpr std::size_t kRegularOrbitCap = 2000;
inline constexpr std::size_t kRegularCandidates = 16;

/// p(M y) == p(y) exactly for every matrix in `maps`.
bool is_invariant(const Polynomial& p, const std::vector<RatMatrix>& maps);

std::vector<std::string> coordinate_variables(std::size_t n);

}  // namespace chevfiber
