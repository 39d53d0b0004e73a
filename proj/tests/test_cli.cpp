#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

#include "spantrace/suite.hpp"

using namespace spantrace;

namespace {

const std::string fixtures = SPANTRACE_FIXTURES;

std::string read(const std::string& name) {
  std::ifstream in(fixtures + "/" + name);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string location_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.location();
  }
  return "<parsed>";
}

std::string without_timing(const std::string& json) {
  return std::regex_replace(json, std::regex("\"elapsed_ms\":[^,}]*"), "\"elapsed_ms\":0");
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(SPANTRACE_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::vector<std::string> all_fixtures{"unit.json",    "two_point.json",    "basechange.json",
                                            "lv_push.json", "lv_corrupted.json", "generated_seed42.json"};

}  // namespace

TEST_CASE("parse examples") {
  SUBCASE("minimal unit instance") {
    const Instance inst = parse_instance(read("unit.json"));
    REQUIRE(inst.sheaves.size() == 1);
    CHECK(*inst.sheaves[0].second.sheaf.stalk(0) == Complex::unit(Ring::integers()));
    CHECK(!inst.lv);
  }
  SUBCASE("missing stalk reference") {
    CHECK(location_of(read("missing_stalk.json")) == "/sheaves/L/stalks/b");
  }
  SUBCASE("worked two-point example") {
    const Instance inst = parse_instance(read("two_point.json"));
    const CCMorphism& u = inst.morphism("u").morphism;
    CHECK(u.map(0).component(0) == Matrix::from_rows(Ring::integers(), {{3}}));
    CHECK(emit_instance(inst) == read("two_point.json"));
  }
}

TEST_CASE("parse errors carry their location") {
  const std::string head = R"({"modulus": 0, "base": ["s"], "sets": {"X": ["a", "b"]}, )";
  CHECK(location_of("{") == "/");
  CHECK(location_of(R"({"base": ["s"]})") == "/modulus");
  CHECK(location_of(R"({"modulus": 1, "base": ["s"]})") == "/modulus");
  CHECK(location_of(R"({"modulus": 0, "base": ["s", "s"]})") == "/base/1");
  CHECK(location_of(R"({"modulus": 0, "base": ["s", "t"], "sets": {"X": ["a"]}})") == "/sets/X");
  CHECK(location_of(head + R"("maps": {"f": {"from": "X", "to": "Y", "graph": {}}}})") == "/maps/f/to");
  CHECK(location_of(head + R"("maps": {"f": {"from": "X", "to": "X", "graph": {"a": "b"}}}})") == "/maps/f/graph/b");
  CHECK(location_of(head + R"("maps": {"f": {"from": "X", "to": "X", "graph": {"a": "z", "b": "a"}}}})") ==
        "/maps/f/graph/a");
  // d o d != 0
  CHECK(location_of(head + R"("sheaves": {"L": {"carrier": "X", "stalks": {"a": {"ranks": {"0": 1, "1": 1, "2": 1},
        "diff": {"0": [[1]], "1": [[1]]}}, "b": {"ranks": {}}}}}})") == "/sheaves/L/stalks/a");
  // wrong shape
  CHECK(location_of(head + R"("sheaves": {"L": {"carrier": "X", "stalks": {"a": {"ranks": {"0": 1, "1": 2},
        "diff": {"0": [[1, 2]]}}, "b": {"ranks": {}}}}}})") == "/sheaves/L/stalks/a/diff/0");
  CHECK(location_of(head + R"("sheaves": {"L": {"carrier": "X", "stalks": {"a": {"ranks": {"x": 1}}, "b": {"ranks": {}}}}}})") ==
        "/sheaves/L/stalks/a/ranks/x");

  // a component that is not a chain map
  std::string two = read("two_point.json");
  auto bad = std::regex_replace(two, std::regex("\"ranks\": \\{\\n\\s*\"0\": 2\\n\\s*\\}"),
                                "\"ranks\": {\"0\": 2, \"1\": 1}, \"diff\": {\"0\": [[1, 1]]}");
  REQUIRE(bad != two);
  CHECK(location_of(bad) == "/morphisms/v/maps/b");

  // the lv diagram must commute
  std::string lv = read("lv_push.json");
  auto broken = std::regex_replace(lv, std::regex("\"c_lower\": \"idP\""), "\"c_lower\": \"id\"");
  REQUIRE(broken != lv);
  CHECK(location_of(broken).rfind("/lv", 0) == 0);
}

TEST_CASE("fixtures round-trip byte-identically") {
  for (auto& name : all_fixtures) {
    INFO(name);
    const std::string text = read(name);
    const Instance once = parse_instance(text);
    const std::string emitted = emit_instance(once);
    CHECK(emitted == text);
    CHECK(emit_instance(parse_instance(emitted)) == emitted);
  }
}

TEST_CASE("generate") {
  SUBCASE("seed 0, max-set 1 gives a point base") {
    GenParams p;
    p.max_set = 1;
    const Instance inst = generate(0, p);
    CHECK(inst.base->points.size() == 1);
    for (auto& [name, s] : inst.sets) CHECK(s->size() <= 1);
  }
  SUBCASE("same seed twice") {
    GenParams p;
    CHECK(emit_instance(generate(9, p)) == emit_instance(generate(9, p)));
    CHECK(emit_instance(generate(9, p)) != emit_instance(generate(10, p)));
  }
  SUBCASE("seed 42 with defaults passes the lv check") {
    const Instance inst = generate(42, GenParams{});
    CHECK(pairing_functorial(inst.lv_diagram()).verdict.ok);
    CHECK(emit_instance(inst) == read("generated_seed42.json"));
  }
  SUBCASE("bad parameters") {
    GenParams p;
    p.deg_min = 3;
    CHECK_THROWS_AS(generate(0, p), Error);
  }
  SUBCASE("generated instances round-trip") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      GenParams p;
      p.max_set = 3;
      p.modulus = seed % 2 == 0 ? 0 : 7;
      const std::string text = emit_instance(generate(seed, p));
      const Instance back = parse_instance(text);
      CHECK(emit_instance(back) == text);
      CHECK(pairing_functorial(back.lv_diagram()).verdict.ok);
    }
  }
}

TEST_CASE("run_suite examples") {
  SUBCASE("lv, one identity-dominated instance") {
    SuiteFlags f;
    f.suite = "lv";
    f.seed = 1;
    f.count = 1;
    f.params.max_set = 1;
    CHECK(run_suite(f).passed());
  }
  SUBCASE("oracle, 100 instances") {
    SuiteFlags f;
    f.suite = "oracle";
    f.seed = 7;
    f.count = 100;
    const Report r = run_suite(f);
    CHECK(r.passed());
    CHECK(r.checks.size() >= 100);
  }
  SUBCASE("suite name typo") {
    SuiteFlags f;
    f.suite = "lvv";
    CHECK_THROWS_AS(run_suite(f), Error);
  }
  SUBCASE("every suite passes on a few instances") {
    for (auto& name : suite_names()) {
      SuiteFlags f;
      f.suite = name;
      f.seed = 3;
      f.count = 4;
      const Report r = run_suite(f);
      INFO(emit_report(r, "text"));
      CHECK(r.passed());
    }
  }
}

TEST_CASE("reports") {
  SUBCASE("empty report") {
    Report r;
    r.suite = "lv";
    const std::string j = emit_report(r, "json");
    CHECK(j.find("\"checks\":[]") != std::string::npos);
    CHECK(j.back() == '\n');
  }
  SUBCASE("one pass") {
    SuiteFlags f;
    f.suite = "lv";
    f.count = 1;
    CHECK(emit_report(run_suite(f), "json").find("\"status\":\"pass\"") != std::string::npos);
  }
  SUBCASE("one failure carries both classes") {
    const Report r = check_file(parse_instance(read("lv_corrupted.json")));
    CHECK(r.failed() == 1);
    const std::string j = emit_report(r, "json");
    CHECK(j.find("\"status\":\"fail\"") != std::string::npos);
    CHECK(j.find(R"x("lhs":{"carrier":["(*,*)"],"values":{"(*,*)":-1}})x") != std::string::npos);
    CHECK(j.find(R"x("rhs":{"carrier":["(*,*)"],"values":{"(*,*)":0}})x") != std::string::npos);
    const std::string t = emit_report(r, "text");
    CHECK(t.find("lhs {(*,*): -1}") != std::string::npos);
  }
  SUBCASE("json reports parse back") {
    const Report r = check_file(parse_instance(read("lv_corrupted.json")));
    const std::string j = emit_report(r, "json");
    CHECK(emit_report(parse_report(j), "json") == j);
    CHECK_THROWS_AS(parse_report("{}"), ParseError);
  }
  SUBCASE("checks are sorted by instance") {
    SuiteFlags f;
    f.suite = "all";
    f.count = 5;
    const Report r = run_suite(f);
    for (std::size_t k = 1; k < r.checks.size(); ++k) {
      const auto& a = r.checks[k - 1];
      const auto& b = r.checks[k];
      CHECK((a.instance < b.instance || (a.instance == b.instance && a.name <= b.name)));
    }
  }
}

TEST_CASE("determinism: same seed, same report; serial and parallel agree") {
  SuiteFlags f;
  f.suite = "all";
  f.seed = 11;
  f.count = 12;
  const std::string a = without_timing(emit_report(run_suite(f), "json"));
  const std::string b = without_timing(emit_report(run_suite(f), "json"));
  f.serial = true;
  const std::string c = without_timing(emit_report(run_suite(f), "json"));
  CHECK(a == b);
  CHECK(a == c);
  f.seed = 12;
  CHECK(without_timing(emit_report(run_suite(f), "json")) != a);
}

TEST_CASE("exit codes") {
  const std::string fx = fixtures + "/";
  CHECK(run_tool("check " + fx + "two_point.json") == 0);
  CHECK(run_tool("check " + fx + "lv_corrupted.json") == 1);
  CHECK(run_tool("check " + fx + "missing_stalk.json") == 2);
  CHECK(run_tool("check " + fx + "no_such_file.json") == 2);
  CHECK(run_tool("lv " + fx + "lv_push.json") == 0);
  CHECK(run_tool("lv " + fx + "two_point.json") == 2);
  CHECK(run_tool("trace " + fx + "two_point.json") == 0);
  CHECK(run_tool("fuzz --suite lv --seed 1 --count 1 --max-set 1") == 0);
  CHECK(run_tool("fuzz --suite lvv --seed 1") == 2);
  CHECK(run_tool("fuzz --suite lv --deg-min 2 --deg-max 1") == 2);
  CHECK(run_tool("fuzz --suite lv --count x") == 2);
  CHECK(run_tool("frobnicate") == 2);
}
