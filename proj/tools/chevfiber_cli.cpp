// chevfiber command-line front-end.

#include "chevfiber/chevfiber.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef CHEVFIBER_DEFAULT_DB
#define CHEVFIBER_DEFAULT_DB "data/pairs.db"
#endif

using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kVerdict = 2, kNumeric = 3 };

struct Failure {
  cf_status status;
  std::string message;
};

int exit_code(cf_status s) {
  switch (s) {
    case CF_OK:
      return kOk;
    case CF_ERR_INTEGRITY:
    case CF_ERR_DEPENDENT:
    case CF_ERR_NON_INTEGER:
      return kVerdict;
    case CF_ERR_RAMIFIED:
    case CF_ERR_DIVERGED:
    case CF_ERR_SINGULAR:
    case CF_ERR_SOLVER_FAILURE:
    case CF_ERR_CLUSTERING:
    case CF_ERR_CAPACITY:
    case CF_ERR_INTERNAL:
      return kNumeric;
    default:
      return kUsage;
  }
}

void check(cf_status s) {
  if (s != CF_OK) throw Failure{s, cf_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  cf_string_free(s);
  return out;
}

struct Common {
  std::string format = "json";
  std::string out;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Failure{CF_ERR_IO, "cannot write " + c.out};
  f << text;
}

// Verdict lines go to stdout when the document went to a file, else stderr,
// so that stdout stays a single parseable document.
void verdict(const Common& c, const std::string& line) {
  (c.out.empty() ? std::cerr : std::cout) << line << "\n";
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string complex_text(const json& z) {
  double re = z[0].get<double>(), im = z[1].get<double>();
  if (im == 0) return g17(re);
  return g17(re) + (im < 0 || std::signbit(im) ? "-" : "+") + g17(std::fabs(im)) + "i";
}

std::vector<cf_complex> parse_point(const std::string& text) {
  std::vector<cf_complex> v;
  std::string tok;
  std::istringstream in(text);
  while (in >> tok) {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= tok.size(); ++i) {
      if (i == tok.size() || tok[i] == ',') {
        if (i > start) {
          cf_complex z;
          check(cf_complex_parse(tok.substr(start, i - start).c_str(), &z));
          v.push_back(z);
        }
        start = i + 1;
      }
    }
  }
  return v;
}

std::vector<cf_complex> default_point(const cf_pair* p, const char* which) {
  size_t n = 0;
  check(cf_pair_default_point(p, which, nullptr, 0, &n));
  std::vector<cf_complex> v(n);
  check(cf_pair_default_point(p, which, v.data(), n, &n));
  return v;
}

// ---- roots / invariants ----

std::pair<std::string, int> split_label(const std::string& type, int rank) {
  if (rank > 0) return {type, rank};
  return {type, 0};
}

int cmd_roots(const Common& c, const std::string& type, int rank, bool invariants) {
  auto [label, r] = split_label(type, rank);
  cf_rootsys* rs = nullptr;
  check(cf_rootsys_build(label.c_str(), r, &rs));
  char* s = nullptr;
  cf_status st = invariants ? cf_rootsys_invariants_json(rs, &s) : cf_rootsys_report_json(rs, &s);
  cf_rootsys_free(rs);
  check(st);
  json j = json::parse(take(s));
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else if (c.format == "csv") {
    std::ostringstream os;
    if (invariants) {
      os << "degree,polynomial\n";
      for (const auto& e : j["invariants"]) os << e["degree"].get<unsigned>() << ",\"" << e["polynomial"].get<std::string>() << "\"\n";
    } else {
      os << "type,rank,roots,order,degrees,degree_product,product_matches\n";
      std::string degs;
      for (const auto& d : j["degrees"]) degs += (degs.empty() ? "" : " ") + std::to_string(d.get<unsigned>());
      os << j["type"].get<std::string>() << "," << j["rank"] << "," << j["roots"] << "," << j["order"] << "," << degs
         << "," << j["degree_product"] << "," << (j["product_matches"].get<bool>() ? "true" : "false") << "\n";
    }
    emit(c, os.str());
  } else {
    std::ostringstream os;
    if (invariants) {
      os << "invariants of W(" << j["type"].get<std::string>() << ")\n";
      for (const auto& e : j["invariants"])
        os << "  degree " << e["degree"].get<unsigned>() << ": " << e["polynomial"].get<std::string>() << "\n";
      os << "jacobian at certificate point: " << j["certificate"]["jacobian"].get<std::string>() << "\n";
    } else {
      os << "type     " << j["type"].get<std::string>() << "\n"
         << "rank     " << j["rank"] << "\n"
         << "roots    " << j["roots"] << "\n"
         << "|W|      " << j["order"] << "\n"
         << "degrees  ";
      for (const auto& d : j["degrees"]) os << d.get<unsigned>() << " ";
      os << "\nproduct  " << j["degree_product"] << (j["product_matches"].get<bool>() ? " == |W|" : " != |W|") << "\n";
    }
    emit(c, os.str());
  }
  return kOk;
}

// ---- restrict ----

cf_pair* load_pair(const std::string& path) {
  cf_pair* p = nullptr;
  check(cf_pair_load(path.c_str(), &p));
  return p;
}

struct PairHandle {
  cf_pair* p;
  explicit PairHandle(const std::string& path) : p(load_pair(path)) {}
  ~PairHandle() { cf_pair_free(p); }
  PairHandle(const PairHandle&) = delete;
  PairHandle& operator=(const PairHandle&) = delete;
};

int cmd_restrict(const Common& c, const std::string& config, std::optional<unsigned> bound) {
  PairHandle h(config);
  unsigned n = 12, cfg_n = 0;
  int has = 0;
  check(cf_pair_defaults(h.p, nullptr, nullptr, nullptr, nullptr, &cfg_n, &has));
  if (has) n = cfg_n;
  if (bound) n = *bound;
  char* s = nullptr;
  check(cf_pair_report_json(h.p, n, &s));
  json j = json::parse(take(s));
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else if (c.format == "csv") {
    std::ostringstream os;
    os << "degree,invariants,generated,contained\n";
    for (const auto& d : j["surjectivity"]["degrees"])
      os << d["degree"] << "," << d["invariants"] << "," << d["generated"] << ","
         << (d["contained"].get<bool>() ? "true" : "false") << "\n";
    emit(c, os.str());
  } else {
    std::ostringstream os;
    os << "pair " << j["name"].get<std::string>() << ": " << j["ambient"].get<std::string>() << " -> "
       << j["restricted"].get<std::string>() << "\n";
    for (std::size_t i = 0; i < j["adapted"].size(); ++i)
      os << "  U" << i + 1 << "(t;x) = " << j["adapted"][i].get<std::string>() << "\n"
         << "  W" << i + 1 << "(x)   = " << j["restricted_family"][i].get<std::string>() << "\n";
    os << "J(t;x) = " << j["jacobian"].get<std::string>() << "\n"
       << "J(0;x) = " << j["jacobian_at_t0"].get<std::string>() << "\n"
       << "d = " << j["rank_d"] << ", |W(a_q)| = " << j["little_order"] << "\n"
       << j["surjectivity"]["reasoning"].get<std::string>() << "\n";
    emit(c, os.str());
  }
  return kOk;
}

// ---- fiber / lambda ----

struct FiberArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string zeta, target, lambda;
};

cf_fiber_options options_for(const cf_pair* p, const FiberArgs& a) {
  cf_fiber_options o;
  cf_fiber_options_default(&o);
  std::uint64_t seed = 0;
  double tol = 0;
  int has_seed = 0, has_tol = 0;
  check(cf_pair_defaults(p, &seed, &has_seed, &tol, &has_tol, nullptr, nullptr));
  if (has_seed) o.seed = seed;
  if (has_tol) o.tol = tol;
  if (a.seed) o.seed = *a.seed;
  if (a.tol) o.tol = *a.tol;
  return o;
}

std::string fiber_document(const Common& c, const json& j) {
  if (c.format == "json") return j.dump(2) + "\n";
  std::ostringstream os;
  if (c.format == "csv") {
    std::size_t r = j["solutions"].empty() ? 0 : j["solutions"][0].size();
    os << "index";
    for (std::size_t i = 0; i < r; ++i) os << ",x" << i + 1 << "_re,x" << i + 1 << "_im";
    os << ",residual,class\n";
    std::vector<int> cls(j["solutions"].size(), -1);
    for (std::size_t k = 0; k < j["orbit_classes"].size(); ++k)
      for (const auto& idx : j["orbit_classes"][k]) cls[idx.get<std::size_t>()] = static_cast<int>(k);
    for (std::size_t s = 0; s < j["solutions"].size(); ++s) {
      os << s;
      for (const auto& z : j["solutions"][s]) os << "," << g17(z[0].get<double>()) << "," << g17(z[1].get<double>());
      os << "," << g17(j["residuals"][s].get<double>()) << "," << cls[s] << "\n";
    }
    return os.str();
  }
  os << "seed " << j["seed"] << "\n";
  for (std::size_t s = 0; s < j["solutions"].size(); ++s) {
    os << "  [" << s << "]";
    for (const auto& z : j["solutions"][s]) os << "  " << complex_text(z);
    os << "   residual " << g17(j["residuals"][s].get<double>()) << "\n";
  }
  const auto& ps = j["path_stats"];
  os << "paths tracked " << ps["tracked"] << ", failed " << ps["failed"] << ", merged " << ps["merged"] << "\n"
     << "orbit classes " << j["orbit_classes"].size() << "\n";
  return os.str();
}

int run_fiber(const Common& c, const FiberArgs& a, bool lambda_mode) {
  PairHandle h(a.config);
  check(cf_pair_restrict(h.p));
  cf_fiber_options o = options_for(h.p, a);
  std::vector<cf_complex> zeta =
      a.zeta.empty() ? (lambda_mode ? std::vector<cf_complex>{} : default_point(h.p, "zeta")) : parse_point(a.zeta);
  std::vector<cf_complex> second =
      lambda_mode ? parse_point(a.lambda) : (a.target.empty() ? default_point(h.p, "target") : parse_point(a.target));
  if (lambda_mode && a.zeta.empty() && zeta.empty()) {
    size_t nt = 0;
    check(cf_pair_dims(h.p, &nt, nullptr));
    zeta.assign(nt, cf_complex{0, 0});
  }
  if (second.empty())
    throw Failure{CF_ERR_INVALID_ARGUMENT, lambda_mode ? "--lambda is required" : "no target given (--target or config)"};
  cf_fiber_result* res = nullptr;
  check(lambda_mode ? cf_lambda_solve(h.p, zeta.data(), zeta.size(), second.data(), second.size(), &o, &res)
                    : cf_fiber_solve(h.p, zeta.data(), zeta.size(), second.data(), second.size(), &o, &res));
  char* s = nullptr;
  cf_status st = cf_fiber_result_to_json(res, &s);
  std::uint64_t expected = 0;
  if (st == CF_OK) st = cf_pair_expected_count(h.p, &expected);
  std::size_t count = cf_fiber_result_count(res);
  bool found = false;
  if (lambda_mode && st == CF_OK) {
    std::vector<cf_complex> x(cf_fiber_result_dim(res));
    for (std::size_t k = 0; k < count && st == CF_OK; ++k) {
      st = cf_fiber_result_solution(res, k, x.data(), x.size());
      double dist = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        dist = std::max(dist, std::hypot(x[i].re - second[i].re, x[i].im - second[i].im));
      if (dist < 1e-8) found = true;
    }
  }
  cf_fiber_result_free(res);
  check(st);
  json j = json::parse(take(s));
  emit(c, fiber_document(c, j));
  bool pass = count == expected;
  verdict(c, "count == |W|·d : " + std::string(pass ? "PASS" : "FAIL") + " (" + std::to_string(count) +
                 " of " + std::to_string(expected) + ")");
  if (lambda_mode) {
    // lambda is a solution only at Lambda_xi = 0
    const bool at_origin = std::all_of(zeta.begin(), zeta.end(), [](cf_complex z) { return z.re == 0 && z.im == 0; });
    if (at_origin) {
      verdict(c, "lambda in fiber : " + std::string(found ? "PASS" : "FAIL"));
      pass = pass && found;
    } else {
      verdict(c, std::string("lambda in fiber : ") + (found ? "yes" : "no") + " (not required, Lambda_xi != 0)");
    }
  }
  return pass ? kOk : kVerdict;
}

// ---- classify ----

int cmd_classify(const Common& c, const std::string& db_path, const std::string& filter) {
  cf_pairdb* db = nullptr;
  check(cf_pairdb_load(db_path.c_str(), &db));
  char* table = nullptr;
  size_t rows = 0;
  int ok = 0;
  size_t exc = 0, bexc = 0;
  char* problems = nullptr;
  cf_status st = cf_pairdb_table(db, filter.c_str(), c.format.c_str(), &table, &rows);
  if (st == CF_OK) st = cf_pairdb_integrity(db, &ok, &exc, &bexc, &problems);
  cf_pairdb_free(db);
  check(st);
  emit(c, take(table));
  std::string probs = take(problems);
  verdict(c, "exceptional " + std::to_string(exc) + ", b-exceptional " + std::to_string(bexc) + " : " +
                 (ok ? "PASS" : "FAIL"));
  if (!ok) std::cerr << probs;
  return ok ? kOk : kVerdict;
}

void report(const Common& c, const Failure& f) {
  if (c.format == "json") {
    json j;
    j["error"] = {{"status", cf_status_name(f.status)}, {"code", static_cast<int>(f.status)}, {"message", f.message}};
    std::cerr << j.dump(2) << "\n";
  } else {
    std::cerr << "error [" << cf_status_name(f.status) << "]: " << f.message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chevfiber: fibers of restricted Chevalley invariants"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cf_version());

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    sub->add_option("--out", common.out, "write the document to PATH");
  };

  std::string type;
  int rank = 0;
  auto* roots = app.add_subcommand("roots", "root count, |W| and fundamental degrees");
  auto* invs = app.add_subcommand("invariants", "basic invariants of the Weyl group");
  for (auto* sub : {roots, invs}) {
    sub->add_option("--type", type, "type label, e.g. A, A2, BC, E6, A1+A1")->required();
    sub->add_option("--rank", rank, "rank when the label has none");
    add_common(sub);
  }

  std::string config;
  std::optional<unsigned> bound;
  auto* restrict_cmd = app.add_subcommand("restrict", "restricted family, J and surjectivity report");
  restrict_cmd->add_option("--config", config, "pair configuration")->required()->check(CLI::ExistingFile);
  restrict_cmd->add_option("--degree-bound", bound, "surjectivity degree bound N");
  add_common(restrict_cmd);

  FiberArgs fa;
  auto* fiber = app.add_subcommand("fiber", "solve U(zeta;x) = target");
  auto* lambda = app.add_subcommand("lambda", "solve U(Lambda_xi;x) = U(0;lambda)");
  for (auto* sub : {fiber, lambda}) {
    sub->add_option("--config", fa.config, "pair configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", fa.seed, "64-bit seed");
    sub->add_option("--tol", fa.tol, "residual tolerance")->check(CLI::PositiveNumber);
    add_common(sub);
  }
  fiber->add_option("--zeta", fa.zeta, "t-coordinates, e.g. \"1 0.5-2i\"");
  fiber->add_option("--target", fa.target, "target values a_1 .. a_r");
  lambda->add_option("--zeta,--lambda-xi", fa.zeta, "Lambda_xi (default 0)");
  lambda->add_option("--lambda", fa.lambda, "point lambda in a_q")->required();

  std::string db = CHEVFIBER_DEFAULT_DB, filter = "all";
  auto* classify = app.add_subcommand("classify", "exceptional / b-exceptional pair tables");
  classify->add_option("--db", db, "pair database")->capture_default_str();
  classify->add_option("--filter", filter, "e.g. exceptional, b_exceptional, split&b_exceptional")->capture_default_str();
  add_common(classify);
  classify->get_option("--format")->default_str("text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (classify->parsed() && classify->count("--format") == 0) common.format = "text";

  try {
    if (roots->parsed()) return cmd_roots(common, type, rank, false);
    if (invs->parsed()) return cmd_roots(common, type, rank, true);
    if (restrict_cmd->parsed()) return cmd_restrict(common, config, bound);
    if (fiber->parsed()) return run_fiber(common, fa, false);
    if (lambda->parsed()) return run_fiber(common, fa, true);
    if (classify->parsed()) return cmd_classify(common, db, filter);
  } catch (const Failure& f) {
    report(common, f);
    return exit_code(f.status);
  } catch (const std::exception& e) {
    report(common, {CF_ERR_INTERNAL, e.what()});
    return kNumeric;
  }
  return kUsage;
}
