#include "support.hpp"

#include "chevfiber/pairdb.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace chevfiber;

namespace {

PairDB db() { return PairDB::load(testing::source_path("data/pairs.db")); }

std::string db_text() {
  std::ifstream in(testing::source_path("data/pairs.db"));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PairRecord record(const std::string& c, const std::string& b, const std::string& aq) {
  PairRecord r;
  r.name_g = "g";
  r.name_h = "h";
  r.sigma_c = parse_type(c, 0)[0];
  if (!b.empty()) r.sigma_b = parse_type(b, 0)[0];
  r.sigma_aq = parse_type(aq, 0)[0];
  return r;
}

bool has(const std::vector<PairRecord>& v, const std::string& key) {
  return std::any_of(v.begin(), v.end(), [&](const PairRecord& r) { return r.key() == key; });
}

}  // namespace

TEST_CASE("is_exceptional examples") {
  CHECK(is_exceptional(record("E6", "", "BC2")));
  CHECK(!is_exceptional(record("E6", "", "BC1")));
  CHECK(!is_exceptional(record("F4", "", "BC1")));
  CHECK(is_exceptional(record("E6", "", "A2")));
  CHECK(is_exceptional(record("E7", "", "C3")));
  CHECK(is_exceptional(record("E8", "", "F4")));
  CHECK(!is_exceptional(record("E7", "", "F4")));
}

TEST_CASE("is_b_exceptional examples") {
  CHECK(is_b_exceptional(record("E7", "E7", "C3")));
  CHECK(!is_b_exceptional(record("E7", "C3", "C3")));
  CHECK_CODE(is_b_exceptional(record("E7", "", "C3")), invalid_argument);
  PairDB d = db();
  const PairRecord* r = d.find("e8(-24)/so(12,4)");
  REQUIRE(r);
  CHECK(is_b_exceptional(*r));
}

TEST_CASE("corrected_prop31 examples") {
  auto list = db().corrected_prop31();
  CHECK(list.size() == 35);
  CHECK(has(list, "e7^C/e6^C+C"));
  CHECK(!has(list, "e7^C/e7(-25)"));
  for (const auto& k : replacement_pairs()) CHECK(has(list, k));
  for (const auto& k : removed_pairs()) CHECK(!has(list, k));
}

TEST_CASE("b_exceptional_list examples") {
  auto list = db().b_exceptional_list();
  CHECK(list.size() == 10);
  CHECK(has(list, "e7(-25)/su*(8)"));
  CHECK(has(list, "e8(-24)+e8(-24)/d(e8(-24))"));
  std::size_t groups = std::count_if(list.begin(), list.end(), [](const PairRecord& r) { return r.is_group_case; });
  CHECK(groups == 4);
}

TEST_CASE("dual_of examples") {
  PairDB d = db();
  const PairRecord* g = d.find("e6(-14)+e6(-14)/d(e6(-14))");
  REQUIRE(g);
  CHECK(d.dual_of(*g).key() == "e6^C/so10(C)+C");
  const PairRecord* riem = d.find("e6(-14)/so(10)+so(2)");
  REQUIRE(riem);
  CHECK(&d.dual_of(*riem) == riem);
  for (const auto& r : d.records())
    if (r.dual_name) CHECK(d.dual_of(d.dual_of(r)).key() == r.key());
  PairRecord lone = record("A2", "A2", "A2");
  CHECK_CODE(d.dual_of(lone), not_found);
}

TEST_CASE("is_split examples") {
  PairDB d = db();
  for (const auto& r : d.records())
    if (r.riemannian) CHECK(is_split(r));
  const PairRecord* r = d.find("e6(-14)/sp(2,2)");
  REQUIRE(r);
  CHECK(!is_split(*r));
  const PairRecord* g = d.find("e6(6)+e6(6)/d(e6(6))");
  REQUIRE(g);
  CHECK(is_split(*g));
}

TEST_CASE("database-wide invariants") {
  PairDB d = db();
  auto rep = d.check_integrity();
  CHECK(rep.ok);
  CHECK(rep.exceptional == kExceptionalCount);
  CHECK(rep.b_exceptional == kBExceptionalCount);
  for (const auto& r : d.records()) {
    if (r.dual_name) CHECK(is_exceptional(r) == is_exceptional(d.dual_of(r)));
    if (r.sigma_b) {
      if (is_split(r)) CHECK(!is_b_exceptional(r));
      if (is_b_exceptional(r)) CHECK(is_exceptional(r));
      CHECK(r.sigma_aq.rank <= r.sigma_b->rank);
      CHECK(r.sigma_b->rank <= r.sigma_c.rank);
    }
  }
}

TEST_CASE("filters") {
  PairDB d = db();
  CHECK(d.select("exceptional").size() == 35);
  CHECK(d.select("b_exceptional").size() == 10);
  CHECK(d.select("b-exceptional").size() == 10);
  CHECK(d.select("split & b_exceptional").empty());
  CHECK(d.select("split ∧ b_exceptional").empty());
  CHECK(d.select("exceptional and !b_exceptional").size() == 25);
  CHECK(d.select("").size() == d.records().size());
  CHECK(d.select("all").size() == d.records().size());
  CHECK(d.select("removed").size() == 4);
  CHECK_CODE(d.select("bogus"), invalid_argument);
}

TEST_CASE("malformed records are all reported with line numbers") {
  const std::string text =
      "a | b | E6 | E6 | BC2 | self |\n"
      "# comment\n"
      "a | c | E6 | BC2\n"
      "a | d | Q6 | E6 | BC2 | self |\n"
      "a | e | A2 | A2 | E6 | self |\n"
      "a | b | E6 | E6 | BC2 | self |\n"
      "a | f | E6 | E6 | BC2 | self | shiny\n";
  try {
    PairDB::parse(text);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    std::string msg = e.what();
    for (const char* l : {"line 3", "line 4", "line 5", "line 6", "line 7"}) CHECK(msg.find(l) != std::string::npos);
    CHECK(msg.find("line 1:") == std::string::npos);
    CHECK(msg.find("5 malformed") != std::string::npos);
  }
}

TEST_CASE("integrity failures are detected") {
  std::string text = db_text();
  // drop one b-exceptional record (and its dual link target stays dangling)
  const std::string victim = "e7(-25) | su*(8)";
  auto pos = text.find(victim);
  REQUIRE(pos != std::string::npos);
  auto end = text.find('\n', pos);
  text.erase(pos, end - pos + 1);
  PairDB d = PairDB::parse(text);
  CHECK_CODE(d.corrected_prop31(), integrity);
  CHECK_CODE(d.b_exceptional_list(), integrity);
  auto rep = d.check_integrity();
  CHECK(!rep.ok);
  CHECK(rep.exceptional == 34);
  CHECK(!rep.problems.empty());
}

TEST_CASE("missing files") { CHECK_CODE(PairDB::load("/nonexistent/pairs.db"), io); }
