#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "fo2e/structure.hpp"
#include "fo2e/structure_io.hpp"

using namespace fo2e;
using nlohmann::json;

static json small() {
  return json::parse(R"({
    "domain": ["a", "b", "c"],
    "unary": {"P": ["a", "c"]},
    "binary": {
      "R": [["a","b"], ["b","c"]],
      "E1": [["a","a"],["b","b"],["c","c"],["a","b"],["b","a"]],
      "E2": [["a","a"],["b","b"],["c","c"]]
    },
    "constants": {"c1": "b"}
  })");
}

TEST_CASE("structure json round trip", "[structure]") {
  Structure s = structure_from_json(small());
  CHECK(s.ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(s.un("P", 0));
  CHECK_FALSE(s.un("P", 1));
  CHECK(s.bin("R", 0, 1));
  CHECK_FALSE(s.bin("R", 1, 0));
  CHECK(s.bin("E1", 0, 1));
  CHECK(s.constants.at("c1") == 1);

  Structure t = structure_from_json(structure_to_json(s));
  CHECK(t.ids == s.ids);
  CHECK(t.unary == s.unary);
  CHECK(t.binary == s.binary);
  CHECK(t.constants == s.constants);
}

TEST_CASE("domain is sorted on load", "[structure]") {
  json j = small();
  j["domain"] = {"c", "a", "b"};
  Structure s = structure_from_json(j);
  CHECK(s.ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(s.un("P", 0));
  CHECK(s.bin("R", 0, 1));
}

TEST_CASE("equivalence validation names the violation", "[structure]") {
  auto err = [](json j) -> std::string {
    try {
      structure_from_json(j);
      return "";
    } catch (const StructureError& e) {
      return e.what();
    }
  };

  json j = small();
  j["binary"]["E1"] = json::parse(R"([["a","a"],["b","b"]])");
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("not reflexive: missing (c,c)"));

  j = small();
  j["binary"]["E1"] = json::parse(R"([["a","a"],["b","b"],["c","c"],["a","b"]])");
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("not symmetric: has (a,b)"));

  j = small();
  j["binary"]["E2"] =
      json::parse(R"([["a","a"],["b","b"],["c","c"],["a","b"],["b","a"],["b","c"],["c","b"]])");
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("not transitive: has (a,b) and (b,c)"));

  j = small();
  j["binary"].erase("E2");
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("E2 is missing"));
}

TEST_CASE("closing equivalences repairs partial input", "[structure]") {
  json j = small();
  j["binary"]["E1"] = json::parse(R"([["a","b"],["b","c"]])");
  j["binary"]["E2"] = json::array();
  CHECK_THROWS_AS(structure_from_json(j, false), StructureError);
  Structure s = structure_from_json(j, true);
  CHECK(s.bin("E1", 0, 2));  // a ~ c through b
  CHECK(s.bin("E1", 2, 0));
  CHECK(s.bin("E2", 0, 0));
  CHECK_FALSE(s.bin("E2", 0, 1));
  CHECK(validate_equivalence(s, "E1") == std::nullopt);
}

TEST_CASE("referential errors are caught on load", "[structure]") {
  auto err = [](json j) -> std::string {
    try {
      structure_from_json(j);
      return "";
    } catch (const StructureError& e) {
      return e.what();
    }
  };

  json j = small();
  j["unary"]["P"].push_back("zz");
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("unknown element 'zz'"));

  j = small();
  j["binary"]["R"].push_back(json::array({"a", "zz"}));
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("unknown element 'zz'"));

  j = small();
  j["constants"]["c9"] = "nope";
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("unknown element 'nope'"));

  j = small();
  j["domain"].push_back("a");
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("duplicate domain element 'a'"));

  j = small();
  j["binary"]["P"] = json::array();
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("both unary and binary"));

  j = small();
  j["extra"] = 1;
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("unknown key 'extra'"));

  j = small();
  j["domain"] = json::array();
  CHECK_THAT(err(j), Catch::Matchers::ContainsSubstring("non-empty 'domain'"));
}

TEST_CASE("equivalence classes", "[structure]") {
  Structure s = structure_from_json(small());
  CHECK(eq_class(s, "E1", 0) == std::vector<int>{0, 1});
  CHECK(eq_class(s, "E2", 0) == std::vector<int>{0});
}
