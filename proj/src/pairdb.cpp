#include "chevfiber/pairdb.hpp"

#include "chevfiber/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace chevfiber {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

TypeComponent parse_sigma(const std::string& s) {
  auto cs = parse_type(s, 0);
  if (cs.size() != 1) throw Error(ErrorCode::parse, "restricted root system '" + s + "' must be irreducible");
  return cs[0];
}

bool same(const TypeComponent& a, const TypeComponent& b) { return a.family == b.family && a.rank == b.rank; }

}  // namespace

const std::vector<std::string>& replacement_pairs() {
  static const std::vector<std::string> v = {"e6^C/so10(C)+C", "e6^C/f4^C", "e7^C/e6^C+C", "e8^C/e7^C+sl2(C)"};
  return v;
}

const std::vector<std::string>& removed_pairs() {
  static const std::vector<std::string> v = {"e6^C/e6(-14)", "e6^C/e6(-26)", "e7^C/e7(-25)", "e8^C/e8(-24)"};
  return v;
}

bool is_exceptional_label_pair(const TypeComponent& big, const TypeComponent& small) {
  static const std::pair<const char*, const char*> table[] = {{"E6", "BC2"}, {"E6", "A2"}, {"E7", "C3"}, {"E8", "F4"}};
  const std::string b = big.label(), s = small.label();
  return std::any_of(std::begin(table), std::end(table), [&](const auto& p) { return b == p.first && s == p.second; });
}

bool is_exceptional(const PairRecord& rec) { return is_exceptional_label_pair(rec.sigma_c, rec.sigma_aq); }

bool is_b_exceptional(const PairRecord& rec) {
  if (!rec.sigma_b) throw Error(ErrorCode::invalid_argument, rec.key() + " has no sigma_b");
  return is_exceptional_label_pair(*rec.sigma_b, rec.sigma_aq);
}

bool is_split(const PairRecord& rec) {
  if (!rec.sigma_b) throw Error(ErrorCode::invalid_argument, rec.key() + " has no sigma_b");
  return same(*rec.sigma_b, rec.sigma_aq);
}

PairDB PairDB::parse(const std::string& text) {
  PairDB db;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> errors;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    try {
      auto f = split(line, '|');
      if (f.size() != 7) throw Error(ErrorCode::parse, "expected 7 '|'-separated fields, got " + std::to_string(f.size()));
      PairRecord r;
      r.line = lineno;
      r.name_g = f[0];
      r.name_h = f[1];
      if (r.name_g.empty() || r.name_h.empty()) throw Error(ErrorCode::parse, "empty algebra name");
      r.sigma_c = parse_sigma(f[2]);
      if (f[3] != "-") r.sigma_b = parse_sigma(f[3]);
      r.sigma_aq = parse_sigma(f[4]);
      if (f[5] == "self") r.dual_name = r.key();
      else if (f[5] != "-" && !f[5].empty()) r.dual_name = f[5];
      if (!f[6].empty())
        for (const auto& flag : split(f[6], ',')) {
          if (flag == "group_case") r.is_group_case = true;
          else if (flag == "removed") r.removed = true;
          else if (flag == "riemannian") r.riemannian = true;
          else if (flag.rfind("provenance=", 0) == 0) r.provenance = flag.substr(11);
          else throw Error(ErrorCode::parse, "unknown flag '" + flag + "'");
        }
      if (r.sigma_aq.rank > r.sigma_c.rank || (r.sigma_b && (r.sigma_aq.rank > r.sigma_b->rank || r.sigma_b->rank > r.sigma_c.rank)))
        throw Error(ErrorCode::parse, "ranks must satisfy rank(sigma_aq) <= rank(sigma_b) <= rank(sigma_c)");
      auto [it, fresh] = seen.emplace(r.key(), lineno);
      if (!fresh) throw Error(ErrorCode::parse, "duplicate pair " + r.key() + " (first on line " + std::to_string(it->second) + ")");
      db.records_.push_back(std::move(r));
    } catch (const Error& e) {
      errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = std::to_string(errors.size()) + " malformed record(s)";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(ErrorCode::parse, msg);
  }
  return db;
}

PairDB PairDB::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

const PairRecord* PairDB::find(const std::string& key) const {
  for (const auto& r : records_)
    if (r.key() == key) return &r;
  return nullptr;
}

const PairRecord& PairDB::dual_of(const PairRecord& rec) const {
  if (!rec.dual_name) throw Error(ErrorCode::not_found, rec.key() + " has no recorded dual");
  const PairRecord* d = find(*rec.dual_name);
  if (!d) throw Error(ErrorCode::not_found, "dual " + *rec.dual_name + " of " + rec.key() + " is not in the database");
  return *d;
}

std::vector<PairRecord> PairDB::corrected_prop31() const {
  std::vector<PairRecord> out;
  for (const auto& r : records_)
    if (!r.removed && is_exceptional(r)) out.push_back(r);
  if (out.size() != kExceptionalCount)
    throw Error(ErrorCode::integrity, "expected " + std::to_string(kExceptionalCount) + " exceptional pairs, found " +
                                          std::to_string(out.size()));
  auto contains = [&](const std::string& k) {
    return std::any_of(out.begin(), out.end(), [&](const PairRecord& r) { return r.key() == k; });
  };
  for (const auto& k : replacement_pairs())
    if (!contains(k)) throw Error(ErrorCode::integrity, "replacement pair " + k + " is missing");
  for (const auto& k : removed_pairs())
    if (contains(k)) throw Error(ErrorCode::integrity, "removed pair " + k + " is still listed as exceptional");
  return out;
}

std::vector<PairRecord> PairDB::b_exceptional_list() const {
  std::vector<PairRecord> out;
  for (const auto& r : records_)
    if (!r.removed && r.sigma_b && is_b_exceptional(r)) out.push_back(r);
  if (out.size() != kBExceptionalCount)
    throw Error(ErrorCode::integrity, "expected " + std::to_string(kBExceptionalCount) + " b-exceptional pairs, found " +
                                          std::to_string(out.size()));
  return out;
}

std::vector<const PairRecord*> PairDB::select(const std::string& filter) const {
  std::string f = filter;
  for (const std::string sep : {"\u2227", " and ", "&&", ","}) {
    for (auto pos = f.find(sep); pos != std::string::npos; pos = f.find(sep)) f.replace(pos, sep.size(), "&");
  }
  struct Term {
    std::string name;
    bool negate;
  };
  std::vector<Term> terms;
  for (auto t : split(f, '&')) {
    bool neg = false;
    while (!t.empty() && t[0] == '!') {
      neg = !neg;
      t = trim(t.substr(1));
    }
    std::replace(t.begin(), t.end(), '-', '_');
    if (t.empty() && !neg && filter.find_first_not_of(" ") == std::string::npos) t = "all";
    static const char* known[] = {"exceptional", "b_exceptional", "split", "group_case", "removed", "riemannian", "all"};
    if (std::find(std::begin(known), std::end(known), t) == std::end(known))
      throw Error(ErrorCode::invalid_argument, "unknown filter term '" + t + "'");
    terms.push_back({t, neg});
  }
  auto holds = [](const PairRecord& r, const std::string& t) {
    if (t == "all") return true;
    if (t == "exceptional") return !r.removed && is_exceptional(r);
    if (t == "b_exceptional") return !r.removed && r.sigma_b && is_b_exceptional(r);
    if (t == "split") return r.sigma_b && is_split(r);
    if (t == "group_case") return r.is_group_case;
    if (t == "removed") return r.removed;
    return r.riemannian;
  };
  std::vector<const PairRecord*> out;
  for (const auto& r : records_)
    if (std::all_of(terms.begin(), terms.end(), [&](const Term& t) { return holds(r, t.name) != t.negate; }))
      out.push_back(&r);
  return out;
}

IntegrityReport PairDB::check_integrity() const {
  IntegrityReport rep;
  auto fail = [&](std::string s) {
    rep.ok = false;
    rep.problems.push_back(std::move(s));
  };
  for (const auto& r : records_) {
    if (r.removed) continue;
    if (is_exceptional(r)) ++rep.exceptional;
    if (r.sigma_b && is_b_exceptional(r)) {
      ++rep.b_exceptional;
      if (!is_exceptional(r)) fail(r.key() + " is b-exceptional but not exceptional");
    }
    if (r.sigma_b && is_split(r) && is_b_exceptional(r)) fail(r.key() + " is split and b-exceptional");
    if (r.dual_name) {
      const PairRecord* d = find(*r.dual_name);
      if (!d) {
        fail("dual " + *r.dual_name + " of " + r.key() + " is missing");
        continue;
      }
      if (!d->dual_name || *d->dual_name != r.key()) fail("dual link " + r.key() + " -> " + d->key() + " is not symmetric");
      if (!same(d->sigma_c, r.sigma_c) || !same(d->sigma_aq, r.sigma_aq))
        fail(r.key() + " and its dual have different (sigma_c, sigma_aq)");
      if (is_exceptional(*d) != is_exceptional(r)) fail("exceptionality differs across dual pair " + r.key());
    }
  }
  try {
    corrected_prop31();
  } catch (const Error& e) {
    fail(e.what());
  }
  try {
    b_exceptional_list();
  } catch (const Error& e) {
    fail(e.what());
  }
  return rep;
}

}  // namespace chevfiber
