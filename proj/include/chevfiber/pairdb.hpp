#pragma once

// Symmetric-pair classification records and the exceptional /
// b-exceptional criteria on restricted root system labels.

#include "chevfiber/rootsys.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chevfiber {

struct PairRecord {
  std::string name_g;
  std::string name_h;
  TypeComponent sigma_c;
  std::optional<TypeComponent> sigma_b;
  TypeComponent sigma_aq;
  /// "g/h" of the dual pair; equal to key() for self-dual pairs.
  std::optional<std::string> dual_name;
  bool is_group_case = false;
  bool removed = false;
  bool riemannian = false;
  std::string provenance;
  std::size_t line = 0;

  std::string key() const { return name_g + "/" + name_h; }
};

/// (E6,BC2), (E6,A2), (E7,C3), (E8,F4).
bool is_exceptional_label_pair(const TypeComponent& big, const TypeComponent& small);
bool is_exceptional(const PairRecord& rec);
/// Throws invalid_argument when sigma_b is missing.
bool is_b_exceptional(const PairRecord& rec);
bool is_split(const PairRecord& rec);

struct IntegrityReport {
  bool ok = true;
  std::size_t exceptional = 0;
  std::size_t b_exceptional = 0;
  std::vector<std::string> problems;
};

class PairDB {
 public:
  /// Line format: name_g | name_h | sigma_c | sigma_b | sigma_aq | dual | flags.
  /// '#' starts a comment; sigma_b and dual may be "-". Malformed lines are
  /// collected and reported together with their line numbers (parse error).
  static PairDB parse(const std::string& text);
  static PairDB load(const std::string& path);

  const std::vector<PairRecord>& records() const { return records_; }
  /// Record with key "g/h"; nullptr when absent.
  const PairRecord* find(const std::string& key) const;
  /// Throws not_found when the link is missing or unresolvable.
  const PairRecord& dual_of(const PairRecord& rec) const;

  /// Exceptional, non-removed records. Throws integrity unless there are
  /// exactly 35 and the erratum replacements / removals are respected.
  std::vector<PairRecord> corrected_prop31() const;
  /// b-exceptional records; throws integrity unless there are exactly 10.
  std::vector<PairRecord> b_exceptional_list() const;

  /// Records matching a filter: terms exceptional, b_exceptional, split,
  /// group_case, removed, riemannian or all, optionally negated with '!' and
  /// joined by '&' (also "and" or U+2227). Throws invalid_argument on unknown
  /// terms.
  std::vector<const PairRecord*> select(const std::string& filter) const;

  /// Counts, replacement/removal checks, rank ordering, dual symmetry,
  /// dual invariance of exceptionality and split => not b-exceptional.
  IntegrityReport check_integrity() const;

 private:
  std::vector<PairRecord> records_;
};

inline constexpr std::size_t kExceptionalCount = 35;
inline constexpr std::size_t kBExceptionalCount = 10;

/// Pairs that replace the four mislisted entries, and the mislisted entries.
const std::vector<std::string>& replacement_pairs();
const std::vector<std::string>& removed_pairs();

}  // namespace chevfiber
