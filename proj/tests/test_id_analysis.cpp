#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "idcert/id_analysis.hpp"
#include "idcert/json_io.hpp"

using namespace idcert;

namespace {

std::vector<PauliOperator> parse_all(const std::vector<std::string>& words) {
  std::vector<PauliOperator> out;
  for (const auto& w : words) out.push_back(parse_pauli(w));
  return out;
}

IdTable load_fixture(const std::string& file) {
  return id_from_json(load_json_file(std::string(IDCERT_DATA_DIR) + "/ids/" + file));
}

std::set<std::string> row_set(const IdTable& id) {
  std::set<std::string> out;
  for (const auto& r : id.rows) out.insert(format_pauli(r));
  return out;
}

bool setting_covers(const std::string& setting, const PauliOperator& r) {
  for (int q = 1; q <= r.n; ++q) {
    const char c = pauli_letter(r, q);
    if (c != 'I' && c != setting[q - 1]) return false;
  }
  return true;
}

void check_cover(const std::vector<std::string>& settings,
                 const std::vector<PauliOperator>& rows) {
  for (const auto& r : rows) {
    bool hit = false;
    for (const auto& s : settings) hit = hit || setting_covers(s, r);
    CHECK_MESSAGE(hit, "row ", format_pauli(r), " not covered");
  }
}

}  // namespace

TEST_CASE("three-qubit whole negative fixture") {
  IdTable id = load_fixture("id4_3_w.json");
  REQUIRE(id.m() == 4);
  CHECK(row_set(id) == std::set<std::string>{"XXX", "YXY", "XYY", "YYX"});
  CHECK(id.lambdas == std::vector<int>{1, -1, -1, -1});
  IdClassification c = check_id(id);
  CHECK(c.sign == -1);
  CHECK(c.whole);
  CHECK(c.entangled);
  CHECK(c.critical);
  CHECK(c.k == 3);
  CHECK(c.r == 1);
  CHECK(c.min_settings == 4);
  CHECK(c.m == 4);
  CHECK(c.n == 3);
  CHECK(assignment_consistent(id));
  CHECK(!assignment_consistent(make_id(id.rows, {1, 1, 1, 1})));
}

TEST_CASE("four-qubit whole negative fixture") {
  IdTable id = load_fixture("id5_4_w.json");
  REQUIRE(id.m() == 5);
  CHECK(row_set(id) ==
        std::set<std::string>{"ZZII", "ZIXX", "IZYY", "YXXY", "YXYX"});
  IdClassification c = check_id(id);
  CHECK(c.sign == -1);
  CHECK(c.whole);
  CHECK(c.entangled);
  CHECK(c.critical);
  CHECK(c.k == 4);
  CHECK(c.r == 1);
  CHECK(c.min_settings == 4);
  CHECK(assignment_consistent(id));
}

TEST_CASE("four-qubit partial positive fixture") {
  IdTable id = load_fixture("id5_4_p.json");
  REQUIRE(id.m() == 5);
  IdClassification c = check_id(id);
  CHECK(c.sign == 1);
  CHECK(!c.whole);
  CHECK(c.entangled);
  CHECK(c.critical);
  CHECK(c.k == 4);
  CHECK(c.r == 1);
  CHECK(c.min_settings == 3);
  CHECK(assignment_consistent(id));
}

TEST_CASE("rank-2 partial fixture") {
  IdTable id = load_fixture("id4_4_p.json");
  REQUIRE(id.m() == 4);
  IdClassification c = check_id(id);
  CHECK(c.sign == 1);
  CHECK(!c.whole);
  CHECK(c.entangled);
  CHECK(c.critical);
  CHECK(c.k == 3);
  CHECK(c.r == 2);
  CHECK(c.min_settings == 4);
  CHECK(assignment_consistent(id));
}

TEST_CASE("check_id rejects malformed tables") {
  CHECK_THROWS_AS(check_id(make_id(parse_all({"XX"}))), InputError);
  CHECK_THROWS_AS(check_id(make_id(parse_all({"XI", "ZI"}))), InputError);   // anticommute
  CHECK_THROWS_AS(check_id(make_id(parse_all({"XI", "IX"}))), InputError);   // product XX
  CHECK_THROWS_AS(check_id(make_id(parse_all({"II", "XX"}))), InputError);   // identity row
  CHECK_THROWS_AS(check_id(make_id(parse_all({"XX", "XXX"}))), InputError);  // widths
  CHECK_THROWS_AS(make_id(parse_all({"XX", "YY"}), {1}), InputError);
  CHECK_THROWS_AS(make_id(parse_all({"XX", "YY"}), {1, 2}), InputError);
}

TEST_CASE("column parity predicate") {
  CHECK(is_whole(parse_all({"ZZI", "ZIZ", "IZZ"})));
  CHECK(is_whole(parse_all({"XXX", "YXY", "XYY", "YYX"})));
  CHECK(!is_whole(parse_all({"ZZII", "ZIZI", "IZIZ", "XYXY", "XYYX"})));
  CHECK(!is_whole(parse_all({"ZZI", "ZIZ", "XXX", "XYY"})));
}

TEST_CASE("separable tables are recognised") {
  CHECK(!is_entangled(parse_all({"ZZI", "ZIZ", "IZZ"})));
  CHECK(!is_entangled(parse_all({"XXX", "XYY", "IZZ"})));
  CHECK(is_entangled(parse_all({"XXX", "YXY", "XYY", "YYX"})));
}

TEST_CASE("ghz3 census: all IDs with M <= 4") {
  StabilizerGroup g = state_stabilizer(make_ghz(3));
  auto all = find_ids_in_group(g, 4);
  CHECK(all.size() == 14);
  int m3 = 0, m4 = 0;
  for (const auto& id : all) {
    if (id.m() == 3) ++m3;
    if (id.m() == 4) ++m4;
    CHECK(assignment_consistent(id));
    // Rows come canonically sorted; tables are produced sorted too.
    CHECK(std::is_sorted(id.rows.begin(), id.rows.end(), canonical_less));
  }
  CHECK(m3 == 7);
  CHECK(m4 == 7);

  IdFilters ent;
  ent.entangled = true;
  CHECK(find_ids_in_group(g, 4, ent).size() == 7);

  IdFilters whole;
  whole.whole = true;
  CHECK(find_ids_in_group(g, 4, whole).size() == 2);

  IdFilters wn;
  wn.whole = true;
  wn.negative = true;
  auto mermin = find_ids_in_group(g, 4, wn);
  REQUIRE(mermin.size() == 1);
  CHECK(row_set(mermin[0]) == std::set<std::string>{"XXX", "XYY", "YXY", "YYX"});
  std::map<std::string, int> lam;
  for (int i = 0; i < mermin[0].m(); ++i)
    lam[format_pauli(mermin[0].rows[i])] = mermin[0].lambda(i);
  CHECK(lam["XXX"] == 1);
  CHECK(lam["XYY"] == -1);
  CHECK(lam["YXY"] == -1);
  CHECK(lam["YYX"] == -1);
}

TEST_CASE("c_lin census counts") {
  StabilizerGroup g = state_stabilizer(make_c_lin());
  IdFilters ent;
  ent.entangled = true;
  CHECK(find_ids_in_group(g, 5, ent).size() == 196);

  IdFilters wne;
  wne.whole = true;
  wne.negative = true;
  wne.entangled = true;
  auto found = find_ids_in_group(g, 5, wne);
  CHECK(found.size() == 8);
  bool has_a2 = false;
  for (const auto& id : found) {
    CHECK(id.m() == 5);
    IdClassification c = check_id(id);
    CHECK(c.whole);
    CHECK(c.sign == -1);
    CHECK(c.entangled);
    CHECK(c.k == 4);
    CHECK(c.r == 1);
    if (row_set(id) == std::set<std::string>{"ZZII", "ZIXX", "IZYY", "YXXY", "YXYX"})
      has_a2 = true;
  }
  CHECK(has_a2);
}

TEST_CASE("full-width filter drops tables with idle qubits") {
  StabilizerGroup g = state_stabilizer(make_ghz(4));
  IdFilters fw;
  fw.full_width = true;
  auto with = find_ids_in_group(g, 4, fw);
  auto without = find_ids_in_group(g, 4);
  CHECK(with.size() < without.size());
  for (const auto& id : with) {
    std::uint64_t support = 0;
    for (const auto& r : id.rows) support |= r.x | r.z;
    CHECK(support == 0xFull);
  }
}

TEST_CASE("serial and parallel searches agree exactly") {
  StabilizerGroup g = state_stabilizer(make_c_lin());
  auto par = find_ids_in_group(g, 5, {}, true);
  auto ser = find_ids_in_group(g, 5, {}, false);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(row_set(par[i]) == row_set(ser[i]));
    CHECK(par[i].lambdas == ser[i].lambdas);
  }
}

TEST_CASE("find_ids_in_group validates m_max") {
  StabilizerGroup g = state_stabilizer(make_ghz(3));
  CHECK_THROWS_AS(find_ids_in_group(g, 1), InputError);
  CHECK_THROWS_AS(find_ids_in_group(g, 9), InputError);
}

TEST_CASE("minimal settings planner") {
  CHECK(min_settings(parse_all({"ZZII"})) == std::vector<std::string>{"ZZZZ"});

  auto mermin = min_settings(parse_all({"XXX", "YXY", "XYY", "YYX"}));
  CHECK(mermin == std::vector<std::string>{"XXX", "XYY", "YXY", "YYX"});

  IdTable a2 = load_fixture("id5_4_w.json");
  auto plan_w = min_settings(a2.rows);
  CHECK(plan_w.size() == 4);
  check_cover(plan_w, a2.rows);
  CHECK(plan_w == min_settings(a2.rows));  // deterministic

  IdTable p = load_fixture("id5_4_p.json");
  auto plan_p = min_settings(p.rows);
  CHECK(plan_p == std::vector<std::string>{"XYXY", "XYYX", "ZZZZ"});
  check_cover(plan_p, p.rows);

  // Whole stabilizer group of c_lin: nine settings cover all 15 elements.
  StabilizerGroup g = state_stabilizer(make_c_lin());
  auto full = min_settings(g.nonidentity_elements());
  CHECK(full.size() == 9);
  check_cover(full, g.nonidentity_elements());
}
