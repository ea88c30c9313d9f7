#include "chevfiber/chevfiber.h"

#include "chevfiber/error.hpp"
#include "chevfiber/fiber.hpp"
#include "chevfiber/pairdb.hpp"
#include "chevfiber/restrict.hpp"

#include <json.hpp>

#include <cstring>
#include <memory>
#include <optional>
#include <sstream>

using namespace chevfiber;
using json = nlohmann::ordered_json;

struct cf_poly {
  Polynomial p;
};

struct cf_rootsys {
  RootSystem rs;
  WeylGroup w;
};

struct cf_pair {
  Pair pair;
  std::optional<RestrictedFamily> fam;
  std::shared_ptr<DeformedSystem> sys;
  std::optional<std::uint64_t> d;
};

struct cf_fiber_result {
  FiberResult res;
  std::shared_ptr<DeformedSystem> sys;
  std::vector<RatVec> functionals;
};

struct cf_pairdb {
  PairDB db;
};

namespace {

thread_local std::string last_error;

cf_status fail(cf_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <typename F>
cf_status guard(F&& f) {
  try {
    f();
    return CF_OK;
  } catch (const Error& e) {
    return fail(static_cast<cf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CF_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::invalid_argument, std::string("null argument: ") + what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> names(const char* const* v, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    require(v && v[i], "variable name");
    out.emplace_back(v[i]);
  }
  return out;
}

CVec to_cvec(const cf_complex* z, std::size_t n) {
  if (n) require(z, "complex vector");
  CVec v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(z[i].re, z[i].im);
  return v;
}

void ensure_family(cf_pair* p) {
  if (p->fam) return;
  p->fam = restrict_family(p->pair, p->pair.default_selection());
  p->sys = std::make_shared<DeformedSystem>(DeformedSystem::from_family(p->pair, *p->fam));
  p->d = rank_d(p->fam->degrees, fundamental_degrees(p->pair.restricted().components()));
}

FiberOptions to_options(const cf_fiber_options* o) {
  FiberOptions f;
  if (o) {
    f.seed = o->seed;
    if (o->tol > 0) f.tol = o->tol;
    if (o->cluster_radius > 0) f.cluster_radius = o->cluster_radius;
    f.threads = o->threads;
  }
  return f;
}

json rational_vec(const RatVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

json poly_list(const std::vector<Polynomial>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "1.0.0"; }

const char* cf_last_error(void) { return last_error.c_str(); }

const char* cf_status_name(cf_status s) {
  static const char* table[] = {"ok",          "invalid_argument", "dimension_mismatch", "unknown_variable",
                                "unsupported", "parse",            "dependent",          "non_integer",
                                "ramified",    "diverged",         "singular",           "solver_failure",
                                "integrity",   "clustering",       "capacity",           "not_found",
                                "io",          "internal"};
  int k = static_cast<int>(s);
  return k >= 0 && k <= 17 ? table[k] : "unknown";
}

void cf_string_free(char* s) { std::free(s); }

cf_status cf_complex_parse(const char* text, cf_complex* out) {
  return guard([&] {
    require(text && out, "text/out");
    auto z = parse_complex(text);
    *out = {z.real(), z.imag()};
  });
}

// ---- polynomials ----

cf_status cf_poly_parse(const char* text, const char* const* vars, size_t nvars, cf_poly** out) {
  return guard([&] {
    require(text && out, "text/out");
    *out = new cf_poly{Polynomial::parse(text, names(vars, nvars))};
  });
}

void cf_poly_free(cf_poly* p) { delete p; }

cf_status cf_poly_to_string(const cf_poly* p, char** out) {
  return guard([&] {
    require(p && out, "poly/out");
    *out = dup(p->p.to_string());
  });
}

cf_status cf_poly_eval(const cf_poly* p, const cf_complex* z, size_t n, cf_complex* out) {
  return guard([&] {
    require(p && out, "poly/out");
    if (n != p->p.num_variables()) throw Error(ErrorCode::dimension_mismatch, "point has the wrong dimension");
    CVec v = to_cvec(z, n);
    Complex r = p->p.eval(v);
    *out = {r.real(), r.imag()};
  });
}

cf_status cf_poly_derivative(const cf_poly* p, const char* var, cf_poly** out) {
  return guard([&] {
    require(p && var && out, "poly/var/out");
    *out = new cf_poly{p->p.derivative(std::string(var))};
  });
}

cf_status cf_poly_jacobian_det(const cf_poly* const* polys, size_t r, const char* const* xs, cf_poly** out) {
  return guard([&] {
    require(polys && out, "polys/out");
    std::vector<Polynomial> ps;
    for (size_t i = 0; i < r; ++i) {
      require(polys[i], "poly");
      ps.push_back(polys[i]->p);
    }
    *out = new cf_poly{jacobian_det(ps, names(xs, r))};
  });
}

cf_status cf_poly_restrict_zero(const cf_poly* p, const char* const* tvars, size_t nt, cf_poly** out) {
  return guard([&] {
    require(p && out, "poly/out");
    *out = new cf_poly{p->p.restrict_zero(names(tvars, nt))};
  });
}

cf_status cf_poly_homogeneous_degree(const cf_poly* p, int* out) {
  return guard([&] {
    require(p && out, "poly/out");
    auto d = p->p.homogeneous_degree();
    *out = d ? static_cast<int>(*d) : -1;
  });
}

// ---- root systems ----

cf_status cf_rootsys_build(const char* type, int rank, cf_rootsys** out) {
  return guard([&] {
    require(type && out, "type/out");
    RootSystem rs = RootSystem::build(type, rank);
    WeylGroup w = WeylGroup::enumerate(rs);
    *out = new cf_rootsys{std::move(rs), std::move(w)};
  });
}

void cf_rootsys_free(cf_rootsys* rs) { delete rs; }

cf_status cf_rootsys_info(const cf_rootsys* rs, int* rank, size_t* num_roots, uint64_t* weyl_order) {
  return guard([&] {
    require(rs, "rootsys");
    if (rank) *rank = rs->rs.rank();
    if (num_roots) *num_roots = rs->rs.roots().size();
    if (weyl_order) *weyl_order = rs->w.order();
  });
}

cf_status cf_rootsys_degrees(const cf_rootsys* rs, unsigned* out, size_t cap, size_t* count) {
  return guard([&] {
    require(rs, "rootsys");
    auto d = fundamental_degrees(rs->rs.components());
    if (count) *count = d.size();
    for (size_t i = 0; i < d.size() && i < cap && out; ++i) out[i] = d[i];
  });
}

cf_status cf_rootsys_manifest(const cf_rootsys* rs, char** out) {
  return guard([&] {
    require(rs && out, "rootsys/out");
    *out = dup(rs->rs.manifest());
  });
}

cf_status cf_rootsys_report_json(const cf_rootsys* rs, char** out) {
  return guard([&] {
    require(rs && out, "rootsys/out");
    auto d = fundamental_degrees(rs->rs.components());
    std::uint64_t prod = 1;
    for (auto x : d) prod *= x;
    json j;
    j["type"] = rs->rs.label();
    j["rank"] = rs->rs.rank();
    j["roots"] = rs->rs.roots().size();
    j["order"] = rs->w.order();
    j["degrees"] = d;
    j["degree_product"] = prod;
    j["product_matches"] = prod == rs->w.order();
    *out = dup(j.dump(2) + "\n");
  });
}

cf_status cf_rootsys_invariants_json(const cf_rootsys* rs, char** out) {
  return guard([&] {
    require(rs && out, "rootsys/out");
    auto fam = invariant_family(rs->rs, rs->w);
    auto gens = rs->w.generators_in_coordinates();
    json j;
    j["type"] = rs->rs.label();
    j["variables"] = coordinate_variables(static_cast<std::size_t>(rs->rs.rank()));
    json inv = json::array();
    for (std::size_t i = 0; i < fam.polys.size(); ++i) {
      json e;
      e["degree"] = fam.degrees[i];
      e["polynomial"] = fam.polys[i].to_string();
      e["invariant"] = is_invariant(fam.polys[i], gens);
      inv.push_back(e);
    }
    j["invariants"] = inv;
    j["certificate"] = {{"point", rational_vec(fam.certificate_point)}, {"jacobian", fam.certificate_value.get_str()}};
    *out = dup(j.dump(2) + "\n");
  });
}

cf_status cf_degrees_for_label(const char* type, int rank, unsigned* out, size_t cap, size_t* count) {
  return guard([&] {
    require(type, "type");
    auto d = fundamental_degrees(parse_type(type, rank));
    if (count) *count = d.size();
    for (size_t i = 0; i < d.size() && i < cap && out; ++i) out[i] = d[i];
  });
}

// ---- pairs ----

cf_status cf_pair_load(const char* path, cf_pair** out) {
  return guard([&] {
    require(path && out, "path/out");
    *out = new cf_pair{Pair::create(PairConfig::load(path)), {}, {}, {}};
  });
}

cf_status cf_pair_parse(const char* text, cf_pair** out) {
  return guard([&] {
    require(text && out, "text/out");
    *out = new cf_pair{Pair::create(PairConfig::parse(text)), {}, {}, {}};
  });
}

void cf_pair_free(cf_pair* pair) { delete pair; }

cf_status cf_pair_restrict(cf_pair* pair) {
  return guard([&] {
    require(pair, "pair");
    ensure_family(pair);
  });
}

cf_status cf_pair_rank_d(cf_pair* pair, uint64_t* d) {
  return guard([&] {
    require(pair && d, "pair/d");
    ensure_family(pair);
    *d = *pair->d;
  });
}

cf_status cf_pair_little_order(const cf_pair* pair, uint64_t* order) {
  return guard([&] {
    require(pair && order, "pair/order");
    *order = pair->pair.little_group().order();
  });
}

cf_status cf_pair_expected_count(cf_pair* pair, uint64_t* count) {
  return guard([&] {
    require(pair && count, "pair/count");
    ensure_family(pair);
    *count = pair->pair.little_group().order() * *pair->d;
  });
}

cf_status cf_pair_dim_E(cf_pair* pair, uint64_t* out) {
  return guard([&] {
    require(pair && out, "pair/out");
    const auto& sub = pair->pair.config().little_subgroup_order;
    if (!sub) throw Error(ErrorCode::not_found, "configuration has no little_subgroup_order");
    ensure_family(pair);
    *out = dim_E(pair->pair.little_group().order(), *sub, *pair->d);
  });
}

cf_status cf_pair_surjectivity(cf_pair* pair, unsigned degree_bound, int* surjective, unsigned* failing_degree) {
  return guard([&] {
    require(pair && surjective, "pair/surjective");
    auto rep = surjectivity_check(pair->pair, degree_bound);
    *surjective = rep.surjective ? 1 : 0;
    if (failing_degree) *failing_degree = rep.failing_degree.value_or(0);
  });
}

cf_status cf_pair_report_json(cf_pair* pair, unsigned degree_bound, char** out) {
  return guard([&] {
    require(pair && out, "pair/out");
    ensure_family(pair);
    const Pair& p = pair->pair;
    const auto& fam = *pair->fam;
    json j;
    j["name"] = p.config().name;
    j["ambient"] = p.ambient().label();
    j["restricted"] = p.restricted().label();
    j["ambient_variables"] = p.ambient_vars();
    j["t_variables"] = p.t_vars();
    j["x_variables"] = p.x_vars();
    json emb = json::array(), comp = json::array();
    for (std::size_t c = 0; c < p.embedding().cols(); ++c) emb.push_back(rational_vec(p.embedding().column(c)));
    for (std::size_t c = 0; c < p.complement().cols(); ++c) comp.push_back(rational_vec(p.complement().column(c)));
    j["embedding"] = emb;
    j["complement"] = comp;
    json roots = json::array();
    for (const auto& f : p.restricted_functionals()) roots.push_back(rational_vec(f));
    j["restricted_roots"] = roots;
    json sel = json::array();
    for (auto s : fam.source) sel.push_back(s + 1);
    j["selection"] = sel;
    j["adapted"] = poly_list(fam.adapted);
    j["restricted_family"] = poly_list(fam.polys);
    j["degrees"] = fam.degrees;
    j["little_degrees"] = fundamental_degrees(p.restricted().components());
    j["little_order"] = p.little_group().order();
    j["jacobian"] = pair->sys->jacobian().to_string();
    j["jacobian_degree"] = pair->sys->jacobian().total_degree();
    j["jacobian_at_t0"] = fam.jacobian.to_string();
    j["rank_d"] = *pair->d;
    j["expected_fiber_count"] = p.little_group().order() * *pair->d;
    if (p.config().little_subgroup_order)
      j["dim_E"] = dim_E(p.little_group().order(), *p.config().little_subgroup_order, *pair->d);
    auto rep = surjectivity_check(p, degree_bound);
    json degs = json::array();
    for (const auto& d : rep.degrees)
      degs.push_back({{"degree", d.degree},
                      {"invariants", d.invariant_dim},
                      {"generated", d.generated_dim},
                      {"contained", d.contained}});
    j["surjectivity"] = {{"degree_bound", rep.degree_bound},
                         {"surjective", rep.surjective},
                         {"failing_degree", rep.failing_degree ? json(*rep.failing_degree) : json(nullptr)},
                         {"degrees", degs},
                         {"reasoning", rep.reasoning}};
    *out = dup(j.dump(2) + "\n");
  });
}

cf_status cf_pair_defaults(const cf_pair* pair, uint64_t* seed, int* has_seed, double* tol, int* has_tol,
                           unsigned* degree_bound, int* has_degree_bound) {
  return guard([&] {
    require(pair, "pair");
    const auto& c = pair->pair.config();
    if (has_seed) *has_seed = c.seed.has_value();
    if (seed && c.seed) *seed = *c.seed;
    if (has_tol) *has_tol = c.tol.has_value();
    if (tol && c.tol) *tol = *c.tol;
    if (has_degree_bound) *has_degree_bound = c.degree_bound.has_value();
    if (degree_bound && c.degree_bound) *degree_bound = *c.degree_bound;
  });
}

cf_status cf_pair_default_point(const cf_pair* pair, const char* which, cf_complex* out, size_t cap, size_t* count) {
  return guard([&] {
    require(pair && which, "pair/which");
    const auto& c = pair->pair.config();
    const std::string w = which;
    if (w != "zeta" && w != "target") throw Error(ErrorCode::invalid_argument, "which must be zeta or target");
    const auto& v = w == "zeta" ? c.zeta : c.target;
    if (count) *count = v.size();
    for (size_t i = 0; i < v.size() && i < cap && out; ++i) out[i] = {v[i].real(), v[i].imag()};
  });
}

cf_status cf_pair_dims(const cf_pair* pair, size_t* num_t, size_t* r) {
  return guard([&] {
    require(pair, "pair");
    if (num_t) *num_t = pair->pair.t_vars().size();
    if (r) *r = pair->pair.r();
  });
}

// ---- fibers ----

void cf_fiber_options_default(cf_fiber_options* opts) {
  if (!opts) return;
  FiberOptions f;
  *opts = {f.seed, f.tol, f.cluster_radius, 0};
}

cf_status cf_fiber_solve(cf_pair* pair, const cf_complex* zeta, size_t nz, const cf_complex* target, size_t nt,
                         const cf_fiber_options* opts, cf_fiber_result** out) {
  return guard([&] {
    require(pair && out, "pair/out");
    ensure_family(pair);
    auto res = solve_fiber(*pair->sys, to_cvec(zeta, nz), to_cvec(target, nt), to_options(opts),
                           &pair->pair.little_group());
    *out = new cf_fiber_result{std::move(res), pair->sys, pair->pair.restricted_functionals()};
  });
}

cf_status cf_lambda_solve(cf_pair* pair, const cf_complex* lambda_xi, size_t nz, const cf_complex* lambda, size_t nl,
                          const cf_fiber_options* opts, cf_fiber_result** out) {
  return guard([&] {
    require(pair && out, "pair/out");
    ensure_family(pair);
    auto res = solve_lambda_xi(*pair->sys, to_cvec(lambda_xi, nz), to_cvec(lambda, nl), to_options(opts),
                               &pair->pair.little_group());
    *out = new cf_fiber_result{std::move(res), pair->sys, pair->pair.restricted_functionals()};
  });
}

void cf_fiber_result_free(cf_fiber_result* res) { delete res; }

size_t cf_fiber_result_count(const cf_fiber_result* res) { return res ? res->res.solutions.size() : 0; }

size_t cf_fiber_result_dim(const cf_fiber_result* res) { return res ? res->sys->r() : 0; }

cf_status cf_fiber_result_solution(const cf_fiber_result* res, size_t k, cf_complex* out, size_t cap) {
  return guard([&] {
    require(res && out, "result/out");
    if (k >= res->res.solutions.size()) throw Error(ErrorCode::invalid_argument, "solution index out of range");
    const auto& s = res->res.solutions[k];
    if (cap < s.size()) throw Error(ErrorCode::dimension_mismatch, "output buffer too small");
    for (size_t i = 0; i < s.size(); ++i) out[i] = {s[i].real(), s[i].imag()};
  });
}

double cf_fiber_result_residual(const cf_fiber_result* res, size_t k) {
  return res && k < res->res.residuals.size() ? res->res.residuals[k] : -1.0;
}

size_t cf_fiber_result_classes(const cf_fiber_result* res) { return res ? res->res.orbit_classes.size() : 0; }

cf_status cf_fiber_result_stats(const cf_fiber_result* res, size_t* tracked, size_t* failed, size_t* merged) {
  return guard([&] {
    require(res, "result");
    if (tracked) *tracked = res->res.path_stats.tracked;
    if (failed) *failed = res->res.path_stats.failed;
    if (merged) *merged = res->res.path_stats.merged;
  });
}

cf_status cf_fiber_result_generic(const cf_fiber_result* res, int* generic) {
  return guard([&] {
    require(res && generic, "result/generic");
    *generic = fiber_is_generic(*res->sys, res->res.zeta, res->res.solutions, res->functionals) ? 1 : 0;
  });
}

cf_status cf_fiber_result_to_json(const cf_fiber_result* res, char** out) {
  return guard([&] {
    require(res && out, "result/out");
    *out = dup(res->res.to_json());
  });
}

cf_status cf_psi(cf_pair* pair, const cf_complex* zeta, size_t nz, const cf_complex* nu0, const cf_complex* target,
                 size_t r, cf_complex* out) {
  return guard([&] {
    require(pair && out, "pair/out");
    ensure_family(pair);
    auto res = local_inverse_psi(*pair->sys, to_cvec(zeta, nz), to_cvec(nu0, r), to_cvec(target, r));
    for (size_t i = 0; i < r; ++i) out[i] = {res.nu[i].real(), res.nu[i].imag()};
  });
}

cf_status cf_is_unramified(cf_pair* pair, const cf_complex* zeta, size_t nz, const cf_complex* x, size_t r, int* out) {
  return guard([&] {
    require(pair && out, "pair/out");
    ensure_family(pair);
    *out = is_unramified(*pair->sys, to_cvec(zeta, nz), to_cvec(x, r)) ? 1 : 0;
  });
}

// ---- classification database ----

cf_status cf_pairdb_load(const char* path, cf_pairdb** out) {
  return guard([&] {
    require(path && out, "path/out");
    *out = new cf_pairdb{PairDB::load(path)};
  });
}

void cf_pairdb_free(cf_pairdb* db) { delete db; }

size_t cf_pairdb_size(const cf_pairdb* db) { return db ? db->db.records().size() : 0; }

cf_status cf_pairdb_table(const cf_pairdb* db, const char* filter, const char* format, char** out, size_t* rows) {
  return guard([&] {
    require(db && out, "db/out");
    const std::string fmt = format ? format : "text";
    auto sel = db->db.select(filter ? filter : "all");
    if (rows) *rows = sel.size();
    auto opt = [](const std::optional<TypeComponent>& t) { return t ? t->label() : std::string("-"); };
    auto dual = [](const PairRecord& r) {
      if (!r.dual_name) return std::string("-");
      return *r.dual_name == r.key() ? std::string("self") : *r.dual_name;
    };
    const char* header[] = {"g", "h", "sigma_c", "sigma_b", "sigma_aq", "dual", "exceptional", "b_exceptional",
                            "split", "group_case", "provenance"};
    std::vector<std::vector<std::string>> table;
    for (const auto* r : sel) {
      const bool exc = !r->removed && is_exceptional(*r);
      const bool bexc = !r->removed && r->sigma_b && is_b_exceptional(*r);
      const bool spl = r->sigma_b && is_split(*r);
      table.push_back({r->name_g, r->name_h, r->sigma_c.label(), opt(r->sigma_b), r->sigma_aq.label(), dual(*r),
                       exc ? "yes" : "no", bexc ? "yes" : "no", spl ? "yes" : "no", r->is_group_case ? "yes" : "no",
                       r->removed ? "removed" : (r->provenance.empty() ? "-" : r->provenance)});
    }
    std::ostringstream os;
    if (fmt == "json") {
      json a = json::array();
      for (const auto& row : table) {
        json o;
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i >= 6 && i <= 9) o[header[i]] = row[i] == "yes";
          else o[header[i]] = row[i];
        }
        a.push_back(o);
      }
      json j;
      j["filter"] = filter ? filter : "all";
      j["rows"] = table.size();
      j["pairs"] = a;
      os << j.dump(2) << "\n";
    } else if (fmt == "csv") {
      for (std::size_t i = 0; i < std::size(header); ++i) os << (i ? "," : "") << header[i];
      os << "\n";
      for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
      }
    } else if (fmt == "text") {
      std::vector<std::size_t> w(std::size(header));
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::strlen(header[i]);
      for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], row[i].size());
      auto line = [&](auto get) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
          std::string cell = get(i);
          s += cell + std::string(w[i] - cell.size() + (i + 1 < w.size() ? 2 : 0), ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        os << s << "\n";
      };
      line([&](std::size_t i) { return std::string(header[i]); });
      for (const auto& row : table) line([&](std::size_t i) { return row[i]; });
      os << table.size() << " row(s)\n";
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown format '" + fmt + "'");
    }
    *out = dup(os.str());
  });
}

cf_status cf_pairdb_integrity(const cf_pairdb* db, int* ok, size_t* exceptional, size_t* b_exceptional,
                              char** problems) {
  return guard([&] {
    require(db, "db");
    auto rep = db->db.check_integrity();
    if (ok) *ok = rep.ok ? 1 : 0;
    if (exceptional) *exceptional = rep.exceptional;
    if (b_exceptional) *b_exceptional = rep.b_exceptional;
    if (problems) {
      std::string s;
      for (const auto& p : rep.problems) s += p + "\n";
      *problems = dup(s);
    }
  });
}

}  // extern "C"
