#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cpsim/caseio.hpp"

using namespace cpsim;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kMinimalTwoBus = R"(
baseMVA = 100;
bus = [
  1 3 0  0 0 0 1 1.0 0 230 1 1.1 0.9;
  2 1 50 0 0 0 1 1.0 0 230 1 1.1 0.9;
];
gen = [
  1 0 0 300 -300 1.0 100 1 250 10;
];
branch = [
  1 2 0 0.1 0 0 0 0 0 0 1 -360 360;
];
)";

}  // namespace

TEST_CASE("embedded 14-bus case matches the published layout") {
  NetworkCase c = builtin_case14();
  CHECK(c.buses.size() == 14);
  CHECK(c.base_mva == 100.0);
  CHECK(c.gens.size() == 5);
  CHECK(c.branches.size() == 20);

  std::set<int> gen_buses;
  for (const GenRecord& g : c.gens) gen_buses.insert(g.bus);
  CHECK(gen_buses == std::set<int>{1, 2, 3, 6, 8});

  int slack_id = -1;
  for (const BusRecord& b : c.buses)
    if (b.bus_kind == BusKind::Slack) slack_id = b.id;
  CHECK(slack_id == 1);

  std::set<std::pair<int, int>> tapped;
  for (const BranchRecord& br : c.branches)
    if (br.tap != 1.0) tapped.insert({br.from_bus, br.to_bus});
  CHECK(tapped == std::set<std::pair<int, int>>{{4, 7}, {4, 9}, {5, 6}});

  std::set<int> load_buses;
  for (const BusRecord& b : c.buses)
    if (b.pd > 0) load_buses.insert(b.id);
  CHECK(load_buses == std::set<int>{2, 3, 4, 5, 6, 9, 10, 11, 12, 13, 14});
}

TEST_CASE("embedded text is byte-identical to the bundled fixture") {
  std::string file_text = read_file(std::string(CPSIM_DATA_DIR) + "/case14.m");
  CHECK(builtin_case14_text() == file_text);
  CHECK(parse_matpower_case(file_text) == builtin_case14());
}

TEST_CASE("minimal two-bus text parses to an exact echo") {
  NetworkCase c = parse_matpower_case(kMinimalTwoBus);
  REQUIRE(c.buses.size() == 2);
  CHECK(c.base_mva == 100.0);
  CHECK(c.buses[0].id == 1);
  CHECK(c.buses[0].bus_kind == BusKind::Slack);
  CHECK(c.buses[1].bus_kind == BusKind::PQ);
  CHECK(c.buses[1].pd == 50.0);
  CHECK(c.buses[1].vmax == 1.1);
  CHECK(c.buses[1].vmin == 0.9);
  REQUIRE(c.gens.size() == 1);
  CHECK(c.gens[0].bus == 1);
  CHECK(c.gens[0].qmax == 300.0);
  CHECK(c.gens[0].qmin == -300.0);
  CHECK(c.gens[0].status);
  CHECK(c.gens[0].pmax == 250.0);
  REQUIRE(c.branches.size() == 1);
  CHECK(c.branches[0].r == 0.0);
  CHECK(c.branches[0].x == 0.1);
  CHECK(c.branches[0].tap == 1.0);  // 0 in the file means nominal
  CHECK(c.branches[0].status);
}

TEST_CASE("gen row with seven columns is a malformed row naming the line") {
  std::string text =
      "baseMVA = 100;\n"
      "bus = [\n"
      "  1 3 0 0 0 0 1 1.0 0 230 1 1.1 0.9;\n"
      "  2 1 5 0 0 0 1 1.0 0 230 1 1.1 0.9;\n"
      "];\n"
      "gen = [\n"
      "  1 0 0 300 -300 1.0 100;\n"
      "];\n"
      "branch = [ 1 2 0 0.1 0 0 0 0 0 0 1 -360 360; ];\n";
  try {
    parse_matpower_case(text);
    FAIL("expected CaseParseError");
  } catch (const CaseParseError& e) {
    CHECK(e.kind() == ParseErrorKind::MalformedRow);
    CHECK(e.line() == 7);
  }
}

TEST_CASE("structured errors for missing sections and bad references") {
  auto kind_of = [](const std::string& text) {
    try {
      parse_matpower_case(text);
    } catch (const CaseParseError& e) {
      return e.kind();
    }
    FAIL("expected CaseParseError");
    return ParseErrorKind::MissingSection;
  };

  CHECK(kind_of("baseMVA = 100;\nbus = [1 3 0 0 0 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [1 0 0 9 -9 1 100 1 9 0;];\n") == ParseErrorKind::MissingSection);
  CHECK(kind_of("baseMVA = 100;\n"
                "bus = [1 1 0 0 0 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [1 0 0 9 -9 1 100 1 9 0;];\n"
                "branch = [];\n") == ParseErrorKind::NoSlackBus);
  CHECK(kind_of("baseMVA = 100;\n"
                "bus = [1 3 0 0 0 0 1 1 0 230 1 1.1 0.9; 1 1 0 0 0 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [1 0 0 9 -9 1 100 1 9 0;];\n"
                "branch = [];\n") == ParseErrorKind::DuplicateBusId);
  CHECK(kind_of("baseMVA = 100;\n"
                "bus = [1 3 0 0 0 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [7 0 0 9 -9 1 100 1 9 0;];\n"
                "branch = [];\n") == ParseErrorKind::DanglingReference);
  CHECK(kind_of("baseMVA = 100;\n"
                "bus = [1 3 0 0 0 0 1 1 0 230 1 1.1 0.9; 2 1 0 0 0 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [1 0 0 9 -9 1 100 1 9 0;];\n"
                "branch = [1 9 0 0.1 0 0 0 0 0 0 1 -360 360;];\n") ==
        ParseErrorKind::DanglingReference);
  CHECK(kind_of("bus = [1 3 0 0 0 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [1 0 0 9 -9 1 100 1 9 0;];\nbranch = [];\n") ==
        ParseErrorKind::MissingSection);
  CHECK(kind_of("baseMVA = 100;\nbus = [1 3 0 0 banana 0 1 1 0 230 1 1.1 0.9;];\n"
                "gen = [1 0 0 9 -9 1 100 1 9 0;];\nbranch = [];\n") ==
        ParseErrorKind::MalformedRow);
}

TEST_CASE("unknown assignments and comments are skipped") {
  std::string text =
      "function mpc = case_x\n"
      "% a comment line\n"
      "mpc.version = '2';\n"
      "baseMVA = 100; % trailing comment\n"
      "bus = [1 3 0 0 0 0 1 1 0 230 1 1.1 0.9; 2 1 10 2 0 0 1 1 0 230 1 1.1 0.9;];\n"
      "gen = [1 0 0 9 -9 1 100 1 9 0 0 0 0 0 0 0 0 0 0 0 0;];\n"
      "branch = [1 2 0.01 0.1 0.02 0 0 0 0 0 1 -360 360;];\n"
      "gencost = [2 0 0 3 0.01 40 0; ];\n";
  NetworkCase c = parse_matpower_case(text);
  CHECK(c.buses.size() == 2);
  CHECK(c.gens.size() == 1);
  CHECK(c.branches.size() == 1);
}

TEST_CASE("serialize then re-parse is field-exact on all fixtures") {
  for (const char* name : {"case14.m", "case2.m", "case3.m"}) {
    NetworkCase c = parse_matpower_case(read_file(std::string(CPSIM_DATA_DIR) + "/" + name));
    NetworkCase again = parse_matpower_case(serialize_case(c));
    CHECK(again == c);
  }
}

TEST_CASE("row order is preserved") {
  NetworkCase c = builtin_case14();
  for (size_t i = 0; i < c.buses.size(); ++i) CHECK(c.buses[i].id == static_cast<int>(i) + 1);
  CHECK(c.branches[0].from_bus == 1);
  CHECK(c.branches[0].to_bus == 2);
  CHECK(c.branches[19].from_bus == 13);
  CHECK(c.branches[19].to_bus == 14);
}

TEST_CASE("bus_index maps ids and reports absences") {
  NetworkCase c = builtin_case14();
  CHECK(c.bus_index(1) == 0);
  CHECK(c.bus_index(14) == 13);
  CHECK(c.bus_index(15) == -1);
  CHECK(c.bus_index(-3) == -1);
}

TEST_CASE("validate_case reports violations without throwing") {
  CHECK(validate_case(builtin_case14()).empty());

  NetworkCase two_slacks = builtin_case14();
  two_slacks.buses[1].bus_kind = BusKind::Slack;
  std::vector<std::string> problems = validate_case(two_slacks);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("1") != std::string::npos);
  CHECK(problems[0].find("2") != std::string::npos);

  NetworkCase zero_x = builtin_case14();
  zero_x.branches[3].x = 0.0;
  problems = validate_case(zero_x);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("branch") != std::string::npos);

  NetworkCase bad_lims = builtin_case14();
  bad_lims.gens[2].qmin = 99.0;
  CHECK(validate_case(bad_lims).size() == 1);

  NetworkCase gen_unknown_bus = builtin_case14();
  gen_unknown_bus.gens[4].bus = 77;
  CHECK(!validate_case(gen_unknown_bus).empty());

  NetworkCase gen_at_pq = builtin_case14();
  gen_at_pq.buses[1].bus_kind = BusKind::PQ;
  CHECK(!validate_case(gen_at_pq).empty());

  NetworkCase no_slack = builtin_case14();
  no_slack.buses[0].bus_kind = BusKind::PV;
  CHECK(!validate_case(no_slack).empty());
}

TEST_CASE("parser is total under random byte mutations of the fixtures") {
  std::mt19937 rng(20260817);
  for (const char* name : {"case14.m", "case2.m", "case3.m"}) {
    std::string base = read_file(std::string(CPSIM_DATA_DIR) + "/" + name);
    for (int round = 0; round < 200; ++round) {
      std::string text = base;
      int edits = 1 + static_cast<int>(rng() % 4);
      for (int e = 0; e < edits; ++e) {
        size_t pos = rng() % text.size();
        switch (rng() % 3) {
          case 0: text[pos] = static_cast<char>(rng() % 256); break;
          case 1: text.erase(pos, 1 + rng() % 5); break;
          case 2: text.insert(pos, 1, static_cast<char>(' ' + rng() % 90)); break;
        }
        if (text.empty()) text = " ";
      }
      try {
        NetworkCase c = parse_matpower_case(text);
        CHECK(!c.buses.empty());
      } catch (const CaseParseError&) {
        // structured failure is an acceptable outcome
      }
    }
  }
}
