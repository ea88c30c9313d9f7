#include "chevfiber/restrict.hpp"

#include "chevfiber/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace chevfiber {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Rational parse_rational(const std::string& s) {
  bool ok = !s.empty();
  for (std::size_t i = 0; i < s.size() && ok; ++i) {
    char ch = s[i];
    ok = std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ((ch == '-' || ch == '+') && i == 0);
  }
  if (ok && s.back() == '/') ok = false;
  Rational q;
  std::string body = !s.empty() && s[0] == '+' ? s.substr(1) : s;
  if (!ok || q.set_str(body, 10) != 0 || q.get_den() == 0)
    throw Error(ErrorCode::parse, "malformed rational '" + s + "'");
  q.canonicalize();
  return q;
}

double parse_real(const std::string& s) {
  if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::parse, "malformed number '" + s + "'");
  return v;
}

template <typename T>
T parse_unsigned(const std::string& s, const std::string& key) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw Error(ErrorCode::parse, key + " expects a non-negative integer, got '" + s + "'");
  return static_cast<T>(std::stoull(s));
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error(ErrorCode::parse, "empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  double imv;
  if (im.empty() || im == "+") imv = 1.0;
  else if (im == "-") imv = -1.0;
  else imv = parse_real(im[0] == '+' ? im.substr(1) : im);
  return {re.empty() ? 0.0 : parse_real(re), imv};
}

PairConfig PairConfig::parse(const std::string& text) {
  PairConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> seen;
  const std::set<std::string> repeatable = {"embedding", "invariant"};
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::parse, where + "expected 'key: value'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (!repeatable.count(key) && !seen.insert(key).second)
      throw Error(ErrorCode::parse, where + "duplicate key '" + key + "'");
    try {
      if (key == "name") {
        cfg.name = value;
      } else if (key == "ambient_type") {
        cfg.ambient_type = value;
      } else if (key == "ambient_rank") {
        cfg.ambient_rank = parse_unsigned<int>(value, key);
      } else if (key == "restricted_type") {
        cfg.restricted_type = value;
      } else if (key == "restricted_rank") {
        cfg.restricted_rank = parse_unsigned<int>(value, key);
      } else if (key == "embedding") {
        RatVec row;
        for (const auto& tok : split_values(value)) row.push_back(parse_rational(tok));
        if (row.empty()) throw Error(ErrorCode::parse, "empty embedding row");
        cfg.embedding.push_back(std::move(row));
      } else if (key == "little_subgroup_order") {
        cfg.little_subgroup_order = parse_unsigned<std::uint64_t>(value, key);
      } else if (key == "invariant") {
        if (value.empty()) throw Error(ErrorCode::parse, "empty invariant");
        cfg.invariants.push_back(value);
      } else if (key == "selection") {
        for (const auto& tok : split_values(value)) {
          auto k = parse_unsigned<std::size_t>(tok, key);
          if (k == 0) throw Error(ErrorCode::parse, "selection indices are 1-based");
          cfg.selection.push_back(k - 1);
        }
      } else if (key == "seed") {
        cfg.seed = parse_unsigned<std::uint64_t>(value, key);
      } else if (key == "tol") {
        cfg.tol = parse_real(value);
        if (!(*cfg.tol > 0)) throw Error(ErrorCode::parse, "tol must be positive");
      } else if (key == "degree_bound") {
        cfg.degree_bound = parse_unsigned<unsigned>(value, key);
      } else if (key == "zeta" || key == "target") {
        auto& dst = key == "zeta" ? cfg.zeta : cfg.target;
        for (const auto& tok : split_values(value)) dst.push_back(parse_complex(tok));
      } else {
        throw Error(ErrorCode::parse, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      throw Error(ErrorCode::parse, where + e.what());
    }
  }
  for (const char* k : {"name", "ambient_type", "restricted_type"})
    if (!seen.count(k)) throw Error(ErrorCode::parse, std::string("missing required key '") + k + "'");
  if (cfg.embedding.empty()) throw Error(ErrorCode::parse, "missing required key 'embedding'");
  return cfg;
}

PairConfig PairConfig::load(const std::string& path) {
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

// ---------------------------------------------------------------------------

namespace {

struct VecLess {
  bool operator()(const RatVec& a, const RatVec& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

RatVec unit(std::size_t n, std::size_t i) {
  RatVec v(n);
  v[i] = 1;
  return v;
}

}  // namespace

Pair Pair::create(const PairConfig& cfg) {
  Pair p;
  p.cfg_ = cfg;
  auto amb = std::make_shared<RootSystem>(RootSystem::build(cfg.ambient_type, cfg.ambient_rank));
  p.ambient_ = amb;
  p.ambient_group_ = std::make_shared<WeylGroup>(WeylGroup::enumerate(*amb));

  const std::size_t n = static_cast<std::size_t>(amb->rank());
  const std::size_t r = cfg.embedding.size();
  auto little_type = parse_type(cfg.restricted_type, cfg.restricted_rank);
  std::size_t little_rank = 0;
  for (const auto& c : little_type) little_rank += static_cast<std::size_t>(c.rank);
  if (r != little_rank)
    throw Error(ErrorCode::dimension_mismatch, "embedding has " + std::to_string(r) + " rows but the restricted rank is " +
                                                   std::to_string(little_rank));
  if (r > n) throw Error(ErrorCode::dimension_mismatch, "restricted rank exceeds ambient rank");
  for (const auto& row : cfg.embedding)
    if (row.size() != n)
      throw Error(ErrorCode::dimension_mismatch, "embedding rows need " + std::to_string(n) + " entries");
  p.embedding_ = RatMatrix::from_columns(cfg.embedding, n);
  if (p.embedding_.rank() != r) throw Error(ErrorCode::invalid_argument, "embedding is rank-deficient");

  // Gram-Schmidt complement, unnormalized, over e_1..e_n in order.
  const RatMatrix gc = amb->coordinate_gram();
  std::vector<RatVec> orth;
  auto project_out = [&](RatVec v) {
    for (const auto& b : orth) {
      Rational c = form(v, gc, b) / form(b, gc, b);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
    }
    return v;
  };
  for (const auto& e : cfg.embedding) orth.push_back(project_out(e));
  std::vector<RatVec> tcols;
  for (std::size_t k = 0; k < n && tcols.size() < n - r; ++k) {
    RatVec v = project_out(unit(n, k));
    if (is_zero(v)) continue;
    v = primitive(v);
    orth.push_back(v);
    tcols.push_back(v);
  }
  p.complement_ = RatMatrix::from_columns(tcols, n);

  p.uvars_ = coordinate_variables(n);
  p.tvars_ = numbered_variables("t", n - r);
  p.xvars_ = numbered_variables("x", r);

  std::set<RatVec, VecLess> funcs;
  const RatMatrix et = p.embedding_.transpose();
  for (const auto& a : amb->roots()) {
    RatVec f = et * amb->pairing(a);
    if (!is_zero(f)) funcs.insert(f);
  }
  p.functionals_.assign(funcs.begin(), funcs.end());

  const RatMatrix m = et * gc * p.embedding_;
  const RatMatrix minv = m.inverse();
  std::vector<RatVec> vecs;
  for (const auto& f : p.functionals_) vecs.push_back(minv * f);
  const std::string expected = cfg.restricted_type + (cfg.restricted_rank ? " (rank " + std::to_string(cfg.restricted_rank) + ")" : "");
  if (vecs.size() != expected_root_count(little_type))
    throw Error(ErrorCode::invalid_argument, "embedding yields " + std::to_string(vecs.size()) +
                                                 " restricted roots, which does not match " + expected);
  auto little = std::make_shared<RootSystem>(RootSystem::from_roots(little_type, vecs, m));
  p.restricted_ = little;
  p.little_group_ = std::make_shared<WeylGroup>(WeylGroup::enumerate(*little));
  std::uint64_t prod = 1;
  for (auto d : fundamental_degrees(little_type)) prod *= d;
  if (p.little_group_->order() != prod)
    throw Error(ErrorCode::invalid_argument, "restricted Weyl group has order " +
                                                 std::to_string(p.little_group_->order()) + ", not " +
                                                 std::to_string(prod) + " as " + expected + " requires");

  if (!cfg.invariants.empty()) {
    auto gens = p.ambient_group_->generators_in_coordinates();
    for (std::size_t i = 0; i < cfg.invariants.size(); ++i) {
      Polynomial u;
      try {
        u = Polynomial::parse(cfg.invariants[i], p.uvars_);
      } catch (const Error& e) {
        throw Error(e.code(), "invariant " + std::to_string(i + 1) + ": " + e.what());
      }
      if (u.is_zero() || !u.homogeneous_degree())
        throw Error(ErrorCode::invalid_argument, "invariant " + std::to_string(i + 1) + " is not a nonzero homogeneous polynomial");
      if (!is_invariant(u, gens))
        throw Error(ErrorCode::invalid_argument, "invariant " + std::to_string(i + 1) + " is not invariant under W(" +
                                                     amb->label() + ")");
      p.invariants_.push_back(std::move(u));
    }
  } else {
    p.invariants_ = invariant_family(*amb, *p.ambient_group_).polys;
  }
  for (auto s : cfg.selection)
    if (s >= p.invariants_.size())
      throw Error(ErrorCode::invalid_argument, "selection index " + std::to_string(s + 1) + " out of range");
  return p;
}

std::vector<std::string> Pair::adapted_vars() const {
  auto v = tvars_;
  v.insert(v.end(), xvars_.begin(), xvars_.end());
  return v;
}

Polynomial Pair::adapt(const Polynomial& u) const {
  if (u.variables() != uvars_) throw Error(ErrorCode::dimension_mismatch, "polynomial is not in ambient coordinates");
  const auto vars = adapted_vars();
  const std::size_t nt = tvars_.size();
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < n(); ++i) {
    RatVec coeffs(vars.size());
    for (std::size_t k = 0; k < nt; ++k) coeffs[k] = complement_(i, k);
    for (std::size_t j = 0; j < r(); ++j) coeffs[nt + j] = embedding_(i, j);
    images.push_back(Polynomial::linear_form(vars, coeffs));
  }
  return u.compose(images);
}

Polynomial Pair::restrict(const Polynomial& u) const { return adapt(u).restrict_zero(tvars_); }

std::vector<std::size_t> Pair::default_selection() const {
  if (!cfg_.selection.empty()) return cfg_.selection;
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < std::min(r(), invariants_.size()); ++i) s.push_back(i);
  return s;
}

RestrictedFamily restrict_family(const Pair& pair, const std::vector<std::size_t>& selection) {
  if (selection.size() != pair.r())
    throw Error(ErrorCode::dimension_mismatch, "selection picks " + std::to_string(selection.size()) +
                                                   " invariants; the restricted rank is " + std::to_string(pair.r()));
  RestrictedFamily fam;
  const auto gens = pair.little_group().generators_in_coordinates();
  for (auto s : selection) {
    if (s >= pair.ambient_invariants().size())
      throw Error(ErrorCode::invalid_argument, "selection index " + std::to_string(s + 1) + " out of range");
    const Polynomial& u = pair.ambient_invariants()[s];
    Polynomial a = pair.adapt(u);
    Polynomial w = a.restrict_zero(pair.t_vars());
    if (!w.is_zero() && !is_invariant(w, gens))
      throw Error(ErrorCode::invalid_argument, "restriction of invariant " + std::to_string(s + 1) +
                                                   " is not invariant under the little Weyl group");
    fam.adapted.push_back(std::move(a));
    fam.polys.push_back(std::move(w));
    fam.degrees.push_back(*u.homogeneous_degree());
    fam.source.push_back(s);
  }
  fam.jacobian = jacobian_det(fam.polys, pair.x_vars());
  if (fam.jacobian.is_zero()) {
    std::string msg = "restrictions are algebraically dependent: det[dW_i/dx_j] = 0 identically for";
    for (std::size_t i = 0; i < fam.polys.size(); ++i)
      msg += (i ? ", W" : " W") + std::to_string(i + 1) + " = " + fam.polys[i].to_string();
    throw Error(ErrorCode::dependent, msg);
  }
  return fam;
}

std::uint64_t rank_d(const std::vector<unsigned>& m, const std::vector<unsigned>& e) {
  if (m.size() != e.size() || m.empty())
    throw Error(ErrorCode::dimension_mismatch, "rank_d needs equally many (nonzero count) degrees");
  std::uint64_t pm = 1, pe = 1;
  for (auto x : m) pm *= x;
  for (auto x : e) pe *= x;
  if (pe == 0 || pm % pe != 0)
    throw Error(ErrorCode::non_integer, "degree product " + std::to_string(pm) + " is not a multiple of " +
                                            std::to_string(pe) + "; no free parameter system with these degrees");
  return pm / pe;
}

std::uint64_t dim_E(std::uint64_t order_little, std::uint64_t order_subgroup, std::uint64_t d) {
  if (order_subgroup == 0 || order_little % order_subgroup != 0)
    throw Error(ErrorCode::non_integer, std::to_string(order_subgroup) + " does not divide " + std::to_string(order_little));
  return order_little / order_subgroup * d;
}

std::vector<Exponent> monomials_of_degree(std::size_t r, unsigned k) {
  std::vector<Exponent> out;
  if (r == 0) return out;
  Exponent e(r, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == r) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned a = left + 1; a-- > 0;) {
      e[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, k);
  return out;
}

SurjectivityReport surjectivity_check(const Pair& pair, unsigned degree_bound) {
  const auto e = fundamental_degrees(pair.restricted().components());
  const unsigned emax = e.empty() ? 0 : e.back();
  if (degree_bound < emax)
    throw Error(ErrorCode::invalid_argument, "degree bound " + std::to_string(degree_bound) +
                                                 " is below the largest fundamental degree " + std::to_string(emax));
  const auto& xs = pair.x_vars();
  const std::size_t r = xs.size();
  const auto gens = pair.little_group().generators_in_coordinates();

  std::vector<Polynomial> rest;
  std::vector<unsigned> rdeg;
  for (const auto& u : pair.ambient_invariants()) {
    Polynomial w = pair.restrict(u);
    if (w.is_zero()) continue;
    rest.push_back(w);
    rdeg.push_back(*w.homogeneous_degree());
  }

  std::vector<std::vector<Polynomial>> action;  // linear forms of each generator
  for (const auto& g : gens) {
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < r; ++i) images.push_back(Polynomial::linear_form(xs, g.row(i)));
    action.push_back(std::move(images));
  }

  SurjectivityReport rep;
  rep.degree_bound = degree_bound;
  for (unsigned k = 1; k <= degree_bound; ++k) {
    const auto monos = monomials_of_degree(r, k);
    std::map<Exponent, std::size_t> index;
    for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
    auto coeffs = [&](const Polynomial& p) {
      RatVec v(monos.size());
      for (const auto& [ex, c] : p.terms()) v[index.at(ex)] = c;
      return v;
    };

    RatMatrix a(gens.size() * monos.size(), monos.size());
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (std::size_t j = 0; j < monos.size(); ++j) {
        Polynomial m = Polynomial::monomial(xs, monos[j], 1);
        RatVec col = coeffs(m.compose(action[g]) - m);
        for (std::size_t i = 0; i < monos.size(); ++i) a(g * monos.size() + i, j) = col[i];
      }
    const auto inv_basis = a.nullspace();

    std::vector<RatVec> products;
    Polynomial one = Polynomial::constant(xs, 1);
    std::function<void(std::size_t, unsigned, const Polynomial&)> rec = [&](std::size_t from, unsigned left,
                                                                            const Polynomial& acc) {
      if (left == 0) {
        products.push_back(coeffs(acc));
        return;
      }
      for (std::size_t i = from; i < rest.size(); ++i)
        if (rdeg[i] <= left && rdeg[i] > 0) rec(i, left - rdeg[i], acc * rest[i]);
    };
    rec(0, k, one);

    DegreeReport d;
    d.degree = k;
    d.invariant_dim = inv_basis.size();
    d.generated_dim = products.empty() ? 0 : RatMatrix::from_rows(products, monos.size()).rank();
    auto both = products;
    both.insert(both.end(), inv_basis.begin(), inv_basis.end());
    std::size_t both_rank = both.empty() ? 0 : RatMatrix::from_rows(both, monos.size()).rank();
    d.contained = both_rank == d.generated_dim;
    rep.degrees.push_back(d);
    if (!d.contained) {
      rep.surjective = false;
      rep.failing_degree = k;
      break;
    }
  }
  std::string fam = pair.restricted().label();
  if (rep.surjective) {
    rep.reasoning = "the invariants of W(" + fam + ") are generated in degrees <= " + std::to_string(emax) +
                    "; every degree 1.." + std::to_string(degree_bound) + " is spanned by products of restrictions";
  } else {
    const auto& d = rep.degrees.back();
    rep.reasoning = "degree " + std::to_string(d.degree) + ": W(" + fam + ") has " + std::to_string(d.invariant_dim) +
                    " independent invariants but products of restrictions span only " + std::to_string(d.generated_dim);
  }
  return rep;
}

}  // namespace chevfiber
