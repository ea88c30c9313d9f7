#include "chevfiber/rootsys.hpp"

#include "chevfiber/error.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <random>
#include <set>

namespace chevfiber {

std::string TypeComponent::label() const { return family + std::to_string(rank); }

namespace {

bool family_known(const std::string& f) {
  return f == "A" || f == "B" || f == "C" || f == "D" || f == "BC" || f == "E" || f == "F" || f == "G";
}

void validate_label(const TypeComponent& c) {
  const auto& f = c.family;
  const int n = c.rank;
  bool ok = (f == "A" && n >= 1) || ((f == "B" || f == "C") && n >= 2) || (f == "BC" && n >= 1) ||
            (f == "D" && n >= 3) || (f == "E" && n >= 6 && n <= 8) || (f == "F" && n == 4) || (f == "G" && n == 2);
  if (!ok) throw Error(ErrorCode::unsupported, "unsupported root system type " + c.label());
}

TypeComponent parse_component(const std::string& token, int rank_hint) {
  std::size_t i = 0;
  while (i < token.size() && std::isalpha(static_cast<unsigned char>(token[i]))) ++i;
  TypeComponent c;
  c.family = token.substr(0, i);
  std::transform(c.family.begin(), c.family.end(), c.family.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  std::string digits = token.substr(i);
  if (!family_known(c.family)) throw Error(ErrorCode::unsupported, "unknown root system family '" + token + "'");
  if (!digits.empty()) {
    if (!std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw Error(ErrorCode::unsupported, "malformed root system label '" + token + "'");
    c.rank = std::stoi(digits);
    if (rank_hint > 0 && rank_hint != c.rank)
      throw Error(ErrorCode::unsupported, "rank " + std::to_string(rank_hint) + " does not match label " + token);
  } else {
    c.rank = rank_hint;
  }
  validate_label(c);
  return c;
}

}  // namespace

std::vector<TypeComponent> parse_type(const std::string& type_label, int rank) {
  std::string s;
  for (char ch : type_label)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error(ErrorCode::unsupported, "empty root system type");
  std::vector<TypeComponent> out;
  if (s.find('+') == std::string::npos) {
    out.push_back(parse_component(s, rank));
    return out;
  }
  int total = 0;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t plus = s.find('+', start);
    std::string tok = s.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    if (tok.empty() || std::isalpha(static_cast<unsigned char>(tok.back())))
      throw Error(ErrorCode::unsupported, "each summand of '" + type_label + "' needs an explicit rank");
    out.push_back(parse_component(tok, 0));
    total += out.back().rank;
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  if (rank > 0 && rank != total)
    throw Error(ErrorCode::unsupported, "rank " + std::to_string(rank) + " does not match " + type_label);
  return out;
}

std::vector<unsigned> fundamental_degrees(const TypeComponent& c) {
  validate_label(c);
  const unsigned n = static_cast<unsigned>(c.rank);
  std::vector<unsigned> d;
  if (c.family == "A") {
    for (unsigned k = 2; k <= n + 1; ++k) d.push_back(k);
  } else if (c.family == "B" || c.family == "C" || c.family == "BC") {
    for (unsigned k = 1; k <= n; ++k) d.push_back(2 * k);
  } else if (c.family == "D") {
    for (unsigned k = 1; k < n; ++k) d.push_back(2 * k);
    d.push_back(n);
  } else if (c.family == "G") {
    d = {2, 6};
  } else if (c.family == "F") {
    d = {2, 6, 8, 12};
  } else if (c.family == "E" && n == 6) {
    d = {2, 5, 6, 8, 9, 12};
  } else if (c.family == "E" && n == 7) {
    d = {2, 6, 8, 10, 12, 14, 18};
  } else if (c.family == "E" && n == 8) {
    d = {2, 8, 12, 14, 18, 20, 24, 30};
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<unsigned> fundamental_degrees(const std::vector<TypeComponent>& cs) {
  std::vector<unsigned> d;
  for (const auto& c : cs) {
    auto e = fundamental_degrees(c);
    d.insert(d.end(), e.begin(), e.end());
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::size_t expected_root_count(const std::vector<TypeComponent>& cs) {
  std::size_t total = 0;
  for (const auto& c : cs) {
    const std::size_t n = static_cast<std::size_t>(c.rank);
    if (c.family == "A") total += n * (n + 1);
    else if (c.family == "B" || c.family == "C") total += 2 * n * n;
    else if (c.family == "BC") total += 2 * n * (n + 1);
    else if (c.family == "D") total += 2 * n * (n - 1);
    else if (c.family == "G") total += 12;
    else if (c.family == "F") total += 48;
    else if (c.family == "E") total += n == 6 ? 72 : n == 7 ? 126 : 240;
  }
  return total;
}

namespace {

struct Realization {
  std::size_t dim = 0;
  std::vector<RatVec> simple;
  std::vector<RatVec> seeds;  // extra roots for non-reduced types
  bool simple_basis = false;  // polynomial coordinates on the simple roots
};

RatVec unit(std::size_t n, std::size_t i, const Rational& c = 1) {
  RatVec v(n);
  v[i] = c;
  return v;
}

RatVec diff(std::size_t n, std::size_t i, std::size_t j) {
  RatVec v(n);
  v[i] = 1;
  v[j] = -1;
  return v;
}

Realization realize(const TypeComponent& c) {
  Realization r;
  const std::size_t n = static_cast<std::size_t>(c.rank);
  if (c.rank > 6) throw Error(ErrorCode::unsupported, c.label() + " is a classification label only; rank > 6 is not enumerated");
  if (c.family == "A" && n == 1) {
    r.dim = 1;
    r.simple = {RatVec{1}};
  } else if (c.family == "A") {
    r.dim = n + 1;
    for (std::size_t i = 0; i < n; ++i) r.simple.push_back(diff(n + 1, i, i + 1));
    r.simple_basis = true;
  } else if (c.family == "B" || c.family == "BC" || c.family == "C") {
    r.dim = n;
    for (std::size_t i = 0; i + 1 < n; ++i) r.simple.push_back(diff(n, i, i + 1));
    r.simple.push_back(unit(n, n - 1, c.family == "C" ? 2 : 1));
    if (c.family == "BC") r.seeds.push_back(unit(n, n - 1, 2));
  } else if (c.family == "D") {
    r.dim = n;
    for (std::size_t i = 0; i + 1 < n; ++i) r.simple.push_back(diff(n, i, i + 1));
    RatVec last(n);
    last[n - 2] = 1;
    last[n - 1] = 1;
    r.simple.push_back(last);
  } else if (c.family == "G") {
    r.dim = 3;
    r.simple = {RatVec{1, -1, 0}, RatVec{-2, 1, 1}};
    r.simple_basis = true;
  } else if (c.family == "F") {
    r.dim = 4;
    Rational h(1, 2);
    r.simple = {RatVec{0, 1, -1, 0}, RatVec{0, 0, 1, -1}, RatVec{0, 0, 0, 1}, RatVec{h, -h, -h, -h}};
  } else if (c.family == "E" && n == 6) {
    // Bourbaki realization inside Q^8
    r.dim = 8;
    Rational h(1, 2);
    r.simple = {RatVec{h, -h, -h, -h, -h, -h, -h, h}, RatVec{1, 1, 0, 0, 0, 0, 0, 0},
                RatVec{-1, 1, 0, 0, 0, 0, 0, 0},     RatVec{0, -1, 1, 0, 0, 0, 0, 0},
                RatVec{0, 0, -1, 1, 0, 0, 0, 0},     RatVec{0, 0, 0, -1, 1, 0, 0, 0}};
    r.simple_basis = true;
  } else {
    throw Error(ErrorCode::unsupported, "no realization for " + c.label());
  }
  return r;
}

struct VecLess {
  bool operator()(const RatVec& a, const RatVec& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace

RatVec RootSystem::reflect(const RatVec& v, const RatVec& root) const {
  Rational num = form(v, gram_, root);
  if (sgn(num) == 0) return v;
  Rational f = 2 * num / form(root, gram_, root);
  RatVec out = v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= f * root[i];
  return out;
}

RootSystem RootSystem::build(const std::string& type_label, int rank) {
  RootSystem rs;
  rs.components_ = parse_type(type_label, rank);
  std::vector<Realization> parts;
  std::size_t total_dim = 0, total_rank = 0;
  for (const auto& c : rs.components_) {
    parts.push_back(realize(c));
    total_dim += parts.back().dim;
    total_rank += static_cast<std::size_t>(c.rank);
  }
  rs.gram_ = RatMatrix::identity(total_dim);
  rs.basis_ = RatMatrix(total_dim, total_rank);
  std::vector<RatVec> seeds;
  std::size_t off = 0, col = 0;
  for (const auto& p : parts) {
    auto lift = [&](const RatVec& v) {
      RatVec out(total_dim);
      for (std::size_t i = 0; i < v.size(); ++i) out[off + i] = v[i];
      return out;
    };
    for (std::size_t k = 0; k < p.simple.size(); ++k) {
      rs.simple_.push_back(lift(p.simple[k]));
      if (p.simple_basis) {
        for (std::size_t i = 0; i < p.dim; ++i) rs.basis_(off + i, col + k) = p.simple[k][i];
      } else {
        rs.basis_(off + k, col + k) = 1;
      }
    }
    for (const auto& s : p.seeds) seeds.push_back(lift(s));
    off += p.dim;
    col += p.simple.size();
  }

  std::set<RatVec, VecLess> found;
  std::deque<RatVec> queue;
  auto push = [&](const RatVec& v) {
    if (found.insert(v).second) queue.push_back(v);
  };
  for (const auto& s : rs.simple_) push(s);
  for (const auto& s : seeds) push(s);
  while (!queue.empty()) {
    RatVec v = queue.front();
    queue.pop_front();
    for (const auto& s : rs.simple_) push(rs.reflect(v, s));
  }
  rs.roots_.assign(found.begin(), found.end());
  if (rs.roots_.size() != expected_root_count(rs.components_))
    throw Error(ErrorCode::internal, "reflection closure of " + rs.label() + " produced " +
                                         std::to_string(rs.roots_.size()) + " roots");
  return rs;
}

RootSystem RootSystem::from_roots(std::vector<TypeComponent> type, std::vector<RatVec> roots, RatMatrix gram) {
  RootSystem rs;
  rs.components_ = std::move(type);
  rs.gram_ = std::move(gram);
  const std::size_t n = rs.gram_.rows();
  std::set<RatVec, VecLess> set;
  for (auto& r : roots) {
    if (r.size() != n) throw Error(ErrorCode::dimension_mismatch, "root has wrong dimension");
    if (is_zero(r)) throw Error(ErrorCode::invalid_argument, "zero vector in root set");
    set.insert(r);
  }
  rs.roots_.assign(set.begin(), set.end());
  for (const auto& a : rs.roots_)
    for (const auto& b : rs.roots_)
      if (!set.count(rs.reflect(b, a)))
        throw Error(ErrorCode::invalid_argument, "vectors are not closed under their reflections: " +
                                                     to_string(b) + " reflected in " + to_string(a));

  RatVec h;
  for (std::size_t j = 1; j < 64 && h.empty(); ++j) {
    RatVec cand = regular_candidate(n, j);
    bool ok = std::all_of(rs.roots_.begin(), rs.roots_.end(),
                          [&](const RatVec& a) { return sgn(form(a, rs.gram_, cand)) != 0; });
    if (ok) h = cand;
  }
  if (h.empty()) throw Error(ErrorCode::internal, "no generic functional found for root set");

  std::vector<RatVec> positive;
  for (const auto& a : rs.roots_) {
    if (sgn(form(a, rs.gram_, h)) <= 0) continue;
    RatVec half = a;
    for (auto& x : half) x /= 2;
    if (set.count(half)) continue;  // divisible: 2*beta
    positive.push_back(a);
  }
  std::set<RatVec, VecLess> pos_set(positive.begin(), positive.end());
  for (const auto& a : positive) {
    bool decomposable = false;
    for (const auto& b : positive) {
      RatVec rest = a;
      for (std::size_t i = 0; i < n; ++i) rest[i] -= b[i];
      if (pos_set.count(rest)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) rs.simple_.push_back(a);
  }
  if (rs.simple_.size() != n || RatMatrix::from_columns(rs.simple_, n).rank() != n)
    throw Error(ErrorCode::invalid_argument, "root set does not span its ambient space");
  rs.basis_ = RatMatrix::identity(n);
  return rs;
}

std::string RootSystem::label() const {
  std::string s;
  for (const auto& c : components_) {
    if (!s.empty()) s += "+";
    s += c.label();
  }
  return s;
}

RatVec RootSystem::pairing(const RatVec& v) const { return basis_.transpose() * (gram_ * v); }

RatMatrix RootSystem::coordinate_gram() const { return basis_.transpose() * gram_ * basis_; }

std::vector<std::vector<int>> RootSystem::cartan_integers() const {
  const std::size_t r = simple_.size();
  std::vector<std::vector<int>> c(r, std::vector<int>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Rational q = 2 * form(simple_[j], gram_, simple_[i]) / form(simple_[i], gram_, simple_[i]);
      if (q.get_den() != 1) throw Error(ErrorCode::invalid_argument, "non-crystallographic Cartan integer");
      c[i][j] = static_cast<int>(q.get_num().get_si());
    }
  return c;
}

RatMatrix RootSystem::simple_reflection(std::size_t i) const {
  const std::size_t n = ambient_dim();
  RatMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec col = reflect(unit(n, j), simple_.at(i));
    for (std::size_t k = 0; k < n; ++k) m(k, j) = col[k];
  }
  return m;
}

std::vector<RatVec> RootSystem::fundamental_weights() const {
  const std::size_t r = simple_.size();
  RatMatrix dg(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    Rational scale = Rational(2) / form(simple_[j], gram_, simple_[j]);
    for (std::size_t k = 0; k < r; ++k) dg(j, k) = scale * form(simple_[j], gram_, simple_[k]);
  }
  RatMatrix inv = dg.inverse();
  std::vector<RatVec> out;
  for (std::size_t i = 0; i < r; ++i) {
    RatVec w(ambient_dim());
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t a = 0; a < w.size(); ++a) w[a] += inv(k, i) * simple_[k][a];
    out.push_back(std::move(w));
  }
  return out;
}

bool RootSystem::is_regular(const RatVec& v) const {
  return std::all_of(roots_.begin(), roots_.end(), [&](const RatVec& a) { return sgn(form(a, gram_, v)) != 0; });
}

std::string RootSystem::manifest() const {
  std::string s = "type: " + label() + "\n";
  s += "rank: " + std::to_string(rank()) + "\n";
  s += "ambient_dim: " + std::to_string(ambient_dim()) + "\n";
  s += "roots: " + std::to_string(roots_.size()) + "\n";
  for (const auto& r : roots_) s += to_string(r) + "\n";
  return s;
}

// ---------------------------------------------------------------------------

std::uint64_t WeylGroup::hash(const std::int16_t* m, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::uint16_t>(m[i]);
    h *= 1099511628211ull;
  }
  return h;
}

std::size_t WeylGroup::find(const std::int16_t* m) const {
  const std::size_t n = static_cast<std::size_t>(rank_ * rank_);
  const std::size_t mask = table_.size() - 1;
  for (std::size_t slot = hash(m, n) & mask;; slot = (slot + 1) & mask) {
    std::uint32_t e = table_[slot];
    if (e == 0) return count_;
    const std::int16_t* cand = data_.data() + (e - 1) * n;
    if (std::equal(cand, cand + n, m)) return e - 1;
  }
}

void WeylGroup::insert_index(std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(rank_ * rank_);
  const std::size_t mask = table_.size() - 1;
  std::size_t slot = hash(data_.data() + k * n, n) & mask;
  while (table_[slot] != 0) slot = (slot + 1) & mask;
  table_[slot] = static_cast<std::uint32_t>(k + 1);
}

WeylGroup WeylGroup::enumerate(const RootSystem& rs, std::size_t cap) {
  WeylGroup w;
  const int r = rs.rank();
  const std::size_t n = static_cast<std::size_t>(r * r);
  w.rank_ = r;
  auto cartan = rs.cartan_integers();
  for (int i = 0; i < r; ++i) {
    std::vector<int> g(n, 0);
    for (int k = 0; k < r; ++k) g[static_cast<std::size_t>(k * r + k)] = 1;
    for (int j = 0; j < r; ++j) g[static_cast<std::size_t>(i * r + j)] -= cartan[i][j];
    w.generators_.push_back(std::move(g));
  }

  const RatMatrix s = RatMatrix::from_columns(rs.simple_roots(), rs.ambient_dim());
  w.simple_gram_ = s.transpose() * rs.gram() * s;
  w.to_simple_ = w.simple_gram_.inverse() * s.transpose() * rs.gram() * rs.coordinate_basis();
  w.from_simple_ = w.to_simple_.inverse();

  w.table_.assign(1024, 0);
  auto add = [&](const std::int16_t* m) -> bool {
    if (w.find(m) != w.count_) return false;
    if (w.count_ >= cap)
      throw Error(ErrorCode::capacity, "Weyl group of " + rs.label() + " exceeds the materialization cap of " +
                                           std::to_string(cap) + " elements");
    w.data_.insert(w.data_.end(), m, m + n);
    ++w.count_;
    if (2 * w.count_ > w.table_.size()) {
      w.table_.assign(w.table_.size() * 2, 0);
      for (std::size_t k = 0; k < w.count_; ++k) w.insert_index(k);
    } else {
      w.insert_index(w.count_ - 1);
    }
    return true;
  };

  std::vector<std::int16_t> id(n, 0);
  for (int k = 0; k < r; ++k) id[static_cast<std::size_t>(k * r + k)] = 1;
  add(id.data());
  std::vector<std::int16_t> next(n);
  for (std::size_t head = 0; head < w.count_; ++head) {
    for (int i = 0; i < r; ++i) {
      const std::int16_t* m = w.data_.data() + head * n;
      std::copy(m, m + n, next.begin());
      // s_i * M changes row i only
      for (int col = 0; col < r; ++col) {
        int acc = m[i * r + col];
        for (int l = 0; l < r; ++l) acc -= cartan[i][l] * m[l * r + col];
        next[static_cast<std::size_t>(i * r + col)] = static_cast<std::int16_t>(acc);
      }
      add(next.data());
    }
  }
  return w;
}

std::vector<int> WeylGroup::element(std::size_t k) const {
  const std::size_t n = static_cast<std::size_t>(rank_ * rank_);
  const std::int16_t* m = data_.data() + k * n;
  return std::vector<int>(m, m + n);
}

bool WeylGroup::contains(const std::vector<int>& m) const {
  std::vector<std::int16_t> v(m.begin(), m.end());
  if (v.size() != static_cast<std::size_t>(rank_ * rank_)) return false;
  return find(v.data()) != count_;
}

RatMatrix WeylGroup::in_coordinates(std::size_t k) const {
  RatMatrix m(static_cast<std::size_t>(rank_), static_cast<std::size_t>(rank_));
  auto e = element(k);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e[static_cast<std::size_t>(i * rank_ + j)];
  return from_simple_ * m * to_simple_;
}

std::vector<RatMatrix> WeylGroup::generators_in_coordinates() const {
  std::vector<RatMatrix> out;
  for (const auto& g : generators_) {
    RatMatrix m(static_cast<std::size_t>(rank_), static_cast<std::size_t>(rank_));
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = g[static_cast<std::size_t>(i * rank_ + j)];
    out.push_back(from_simple_ * m * to_simple_);
  }
  return out;
}

std::vector<std::vector<double>> WeylGroup::elements_in_coordinates_numeric() const {
  std::vector<std::vector<double>> out;
  out.reserve(count_);
  for (std::size_t k = 0; k < count_; ++k) {
    RatMatrix m = in_coordinates(k);
    std::vector<double> d(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) d[i * m.cols() + j] = m(i, j).get_d();
    out.push_back(std::move(d));
  }
  return out;
}

bool WeylGroup::inverse_closed() const {
  const std::size_t r = static_cast<std::size_t>(rank_);
  RatMatrix ginv = simple_gram_.inverse();
  for (std::size_t k = 0; k < count_; ++k) {
    RatMatrix m(r, r);
    auto e = element(k);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) m(i, j) = e[i * r + j];
    RatMatrix inv = ginv * m.transpose() * simple_gram_;
    std::vector<int> flat(r * r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        if (inv(i, j).get_den() != 1) return false;
        flat[i * r + j] = static_cast<int>(inv(i, j).get_num().get_si());
      }
    if (!contains(flat)) return false;
  }
  return true;
}

bool WeylGroup::closed_on_samples(std::size_t samples, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  const std::size_t r = static_cast<std::size_t>(rank_);
  for (std::size_t s = 0; s < samples; ++s) {
    auto a = element(rng() % count_);
    auto b = element(rng() % count_);
    std::vector<int> p(r * r, 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t j = 0; j < r; ++j) p[i * r + j] += a[i * r + k] * b[k * r + j];
    if (!contains(p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::vector<std::string> coordinate_variables(std::size_t n) { return numbered_variables("u", n); }

RatVec regular_candidate(std::size_t ambient_dim, std::size_t j) {
  RatVec v(ambient_dim);
  mpz_class base = static_cast<unsigned long>(j + 1), p = 1;
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    v[i] = Rational(p);
    p *= base;
  }
  return v;
}

std::vector<RatVec> orbit(const RootSystem& rs, const RatVec& v, std::size_t cap) {
  std::set<RatVec, VecLess> seen{v};
  std::vector<RatVec> out{v};
  for (std::size_t head = 0; head < out.size(); ++head)
    for (const auto& s : rs.simple_roots()) {
      RatVec w = rs.reflect(out[head], s);
      if (seen.insert(w).second) {
        if (out.size() >= cap) throw Error(ErrorCode::capacity, "orbit exceeds cap");
        out.push_back(std::move(w));
      }
    }
  return out;
}

namespace {

// sum_p (l_p . y)^k computed over integers after clearing denominators.
Polynomial power_sum(const std::vector<RatVec>& forms, unsigned k, const std::vector<std::string>& vars) {
  const std::size_t r = vars.size();
  Polynomial result(vars);
  if (forms.empty()) return result;
  mpz_class den = 1;
  for (const auto& f : forms)
    for (const auto& x : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  // pw[p][i][e] = L_{p,i}^e
  std::vector<std::vector<std::vector<mpz_class>>> pw(forms.size(), std::vector<std::vector<mpz_class>>(r));
  for (std::size_t p = 0; p < forms.size(); ++p)
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class base = forms[p][i].get_num() * (den / forms[p][i].get_den());
      auto& row = pw[p][i];
      row.resize(k + 1);
      row[0] = 1;
      for (unsigned e = 1; e <= k; ++e) row[e] = row[e - 1] * base;
    }
  std::vector<mpz_class> fact(k + 1);
  fact[0] = 1;
  for (unsigned e = 1; e <= k; ++e) fact[e] = fact[e - 1] * e;
  mpz_class den_k;
  mpz_pow_ui(den_k.get_mpz_t(), den.get_mpz_t(), k);

  Exponent e(r, 0);
  mpz_class sum, term;
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == r) {
      e[i] = left;
      sum = 0;
      for (std::size_t p = 0; p < forms.size(); ++p) {
        term = 1;
        for (std::size_t j = 0; j < r; ++j)
          if (e[j]) term *= pw[p][j][e[j]];
        sum += term;
      }
      if (sum != 0) {
        mpz_class multi = fact[k];
        for (std::size_t j = 0; j < r; ++j) multi /= fact[e[j]];
        Rational c(sum * multi, den_k);
        c.canonicalize();
        result.add_term(e, c);
      }
      return;
    }
    for (unsigned a = 0; a <= left; ++a) {
      e[i] = a;
      self(self, i + 1, left - a);
    }
  };
  if (r == 0) return result;
  rec(rec, 0, k);
  return result;
}

RatVec test_point(std::size_t r, std::size_t s) {
  // small, distinct, deliberately irregular rationals
  static const int nums[] = {3, -7, 11, 5, -2, 13, 17, -19, 23, 4, -29, 31};
  static const int dens[] = {2, 3, 1, 5, 7, 1, 4, 3, 1, 9, 2, 5};
  RatVec v(r);
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t a = (i * 5 + s * 7) % 12, b = (i * 3 + s * 11 + 1) % 12;
    v[i] = Rational(nums[a] + static_cast<int>(s), dens[b]);
    v[i].canonicalize();
  }
  return v;
}

constexpr std::size_t kTestPoints = 8;

bool full_row_rank_somewhere(const std::vector<Polynomial>& polys, const std::vector<std::string>& vars) {
  for (std::size_t s = 0; s < kTestPoints; ++s)
    if (jacobian_at(polys, vars, test_point(vars.size(), s)).rank() == polys.size()) return true;
  return false;
}

}  // namespace

Polynomial orbit_sum_invariant(const RootSystem& rs, unsigned k) {
  std::vector<RatVec> forms;
  for (const auto& a : rs.roots()) forms.push_back(rs.pairing(a));
  return power_sum(forms, k, coordinate_variables(static_cast<std::size_t>(rs.rank())));
}

Polynomial orbit_power_sum(const RootSystem& rs, const RatVec& v, unsigned k) {
  std::vector<RatVec> forms;
  for (const auto& p : orbit(rs, v)) forms.push_back(rs.pairing(p));
  return power_sum(forms, k, coordinate_variables(static_cast<std::size_t>(rs.rank())));
}

InvariantFamily invariant_family(const RootSystem& rs, const WeylGroup& w) {
  const auto vars = coordinate_variables(static_cast<std::size_t>(rs.rank()));
  const auto degrees = fundamental_degrees(rs.components());

  // An empty vector stands for the root orbit.
  std::vector<RatVec> candidates;
  if (w.order() <= kRegularOrbitCap)
    for (std::size_t j = 0; j < kRegularCandidates; ++j) {
      RatVec v = regular_candidate(rs.ambient_dim(), j);
      if (rs.is_regular(v)) candidates.push_back(std::move(v));
    }
  for (auto& wt : rs.fundamental_weights()) candidates.push_back(std::move(wt));
  candidates.emplace_back();

  InvariantFamily fam;
  for (unsigned m : degrees) {
    bool accepted = false;
    for (const auto& v : candidates) {
      Polynomial u = v.empty() ? orbit_sum_invariant(rs, m) : orbit_power_sum(rs, v, m);
      if (u.is_zero()) continue;
      u = primitive_part(u);
      auto trial = fam.polys;
      trial.push_back(u);
      if (!full_row_rank_somewhere(trial, vars)) continue;
      fam.polys.push_back(std::move(u));
      fam.degrees.push_back(m);
      fam.generators.push_back(v);
      accepted = true;
      break;
    }
    if (!accepted)
      throw Error(ErrorCode::dependent, "invariant_family(" + rs.label() + "): no candidate of degree " +
                                            std::to_string(m) + " raises the transcendence degree");
  }
  for (std::size_t s = 0; s < kTestPoints; ++s) {
    RatVec p = test_point(vars.size(), s);
    Rational det = jacobian_at(fam.polys, vars, p).determinant();
    if (sgn(det) != 0) {
      fam.certificate_point = p;
      fam.certificate_value = det;
      return fam;
    }
  }
  throw Error(ErrorCode::dependent, "invariant_family(" + rs.label() + "): Jacobian vanishes at every test point");
}

bool is_invariant(const Polynomial& p, const std::vector<RatMatrix>& maps) {
  const auto& vars = p.variables();
  for (const auto& m : maps) {
    if (m.rows() != vars.size() || m.cols() != vars.size())
      throw Error(ErrorCode::dimension_mismatch, "group element size does not match variable count");
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < vars.size(); ++i) images.push_back(Polynomial::linear_form(vars, m.row(i)));
    if (p.compose(images) != p) return false;
  }
  return true;
}

}  // namespace chevfiber
