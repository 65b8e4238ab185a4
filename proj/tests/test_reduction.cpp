#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "fo2e/guarded.hpp"
#include "fo2e/parser.hpp"
#include "fo2e/pcp.hpp"
#include "fo2e/printer.hpp"
#include "fo2e/reduction.hpp"
#include "fo2e/signature.hpp"

using namespace fo2e;

namespace {

PcpInstance single_pair() {
  return pcp_from_json(nlohmann::json::parse(
      R"({"alphabet":["a","b"],"pairs":[{"v":"a","w":"aa"}]})"));
}

PcpInstance crossing_pairs() {
  return pcp_from_json(nlohmann::json::parse(
      R"({"alphabet":["a","b"],"pairs":[{"v":"a","w":"ab"},{"v":"ba","w":"a"}]})"));
}

std::map<std::string, int> group_counts(const std::vector<NamedConjunct>& cs) {
  std::map<std::string, int> m;
  for (const auto& c : cs) ++m[c.group];
  return m;
}

}  // namespace

TEST_CASE("instance and solution files are validated", "[pcp]") {
  CHECK_THROWS_WITH(pcp_from_json(nlohmann::json::parse(R"({"alphabet":[],"pairs":[]})")),
                    Catch::Matchers::ContainsSubstring("alphabet"));
  CHECK_THROWS_WITH(
      pcp_from_json(nlohmann::json::parse(R"({"alphabet":["ab"],"pairs":[{"v":"a","w":"a"}]})")),
      Catch::Matchers::ContainsSubstring("single lowercase"));
  CHECK_THROWS_WITH(
      pcp_from_json(nlohmann::json::parse(R"({"alphabet":["x"],"pairs":[{"v":"x","w":"x"}]})")),
      Catch::Matchers::ContainsSubstring("reserved"));
  CHECK_THROWS_WITH(
      pcp_from_json(nlohmann::json::parse(R"({"alphabet":["a"],"pairs":[{"v":"b","w":"a"}]})")),
      Catch::Matchers::ContainsSubstring("outside the alphabet"));
  CHECK_THROWS_WITH(
      pcp_from_json(nlohmann::json::parse(R"({"alphabet":["a"],"pairs":[{"v":"","w":"a"}]})")),
      Catch::Matchers::ContainsSubstring("non-empty"));

  const PcpInstance p = single_pair();
  REQUIRE(p.pairs.size() == 1);
  CHECK(p.pairs[0].v == "a");
  CHECK(p.pairs[0].w == "aa");
  CHECK_THROWS_WITH(solution_from_json(nlohmann::json::parse(R"({"period":[2]})"), p),
                    Catch::Matchers::ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(solution_from_json(nlohmann::json::parse(R"({"prefix":[1]})"), p),
                    Catch::Matchers::ContainsSubstring("period"));
  const PcpSolution s = solution_from_json(nlohmann::json::parse(R"({"prefix":[],"period":[1]})"), p);
  CHECK(solution_indices(s, 4) == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("spelling follows the index sequence block by block", "[pcp]") {
  const PcpInstance p = crossing_pairs();
  const PcpSolution s = solution_from_json(nlohmann::json::parse(R"({"period":[1,2]})"), p);

  // v side: a | ba | a | ba ...   w side: ab | a | ab | a ...
  const auto v = spell(p, s, false, 6);
  std::string letters;
  for (const auto& b : v) letters += b.letter;
  CHECK(letters == "abaaba");
  CHECK(v[0].block == 1);
  CHECK(v[0].pair_index == 1);
  CHECK(v[0].block_end);
  CHECK(v[1].block == 2);
  CHECK(v[1].pair_index == 2);
  CHECK(v[1].level == 1);
  CHECK_FALSE(v[1].block_end);
  CHECK(v[2].block_end);

  const auto w = spell(p, s, true, 6);
  letters.clear();
  for (const auto& b : w) letters += b.letter;
  CHECK(letters == "abaaba");
  CHECK(w[1].block == 1);
  CHECK(w[1].level == 2);
  CHECK(w[1].block_end);

  CHECK(solution_agrees(p, s, 40));
  const PcpSolution bad = solution_from_json(nlohmann::json::parse(R"({"period":[1]})"), p);
  CHECK_FALSE(solution_agrees(p, bad, 3));  // v: aaa..., w: ababab...
}

TEST_CASE("phi has the documented shape", "[reduction]") {
  const Reduction red(single_pair());
  const Formula phi = red.phi();
  const auto cs = flatten_and(phi.root);
  REQUIRE(cs.size() == 6);
  CHECK(to_string(cs[0]) == "X0(x)");
  CHECK(to_string(cs[1]) == "exists y . (R(x,y) & X1(y))");
  CHECK(to_string(cs[2]) == "forall x . (X1(x) -> exists y . (R(x,y) & X2(y)))");
  CHECK(to_string(cs[4]) == "forall x . forall y . ((X0(x) & X0(y)) -> x=y)");
  CHECK(to_string(cs[5]) == "exists y . ((S(x,y) & (a(y) -> a(y))) & (b(y) -> b(y)))");
  CHECK(free_vars(phi.root) == std::set<std::string>{"x"});

  const auto g = check_guarded(phi.root);
  CHECK_FALSE(g.ok);  // the unique-X0 conjunct is the only unguarded part
  CHECK(to_string(g.offender) == to_string(cs[4]));
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (i != 4) CHECK(check_guarded(cs[i]).ok);
}

TEST_CASE("guarded variant routes the cycle through constants", "[reduction]") {
  const Reduction red(single_pair());
  const Formula g = red.phi_guarded();
  REQUIRE(g.mode == Mode::gf2);
  const auto cs = flatten_and(g.root);
  REQUIRE(cs.size() == 4);
  CHECK(to_string(cs[0]) == "R(x,c1)");
  CHECK(to_string(cs[1]) == "R(c1,c2)");
  CHECK(to_string(cs[2]) == "R(c2,x)");
  CHECK(check_guarded(g.root).ok);
  CHECK(signature_of(g.root).constants == std::set<std::string>{"c1", "c2"});
  CHECK(free_vars(g.root) == std::set<std::string>{"x"});
}

TEST_CASE("negated psi conjunct groups have the documented sizes", "[reduction]") {
  SECTION("one pair, two letters") {
    const Reduction red(single_pair());
    const auto cs = red.neg_psi_conjuncts();
    const auto m = group_counts(cs);
    CHECK(m.at("generation") == 10);
    CHECK(m.at("disjointness") == 7);
    CHECK(m.at("coordination") == 5);  // 1 + 2k + 2 with k=1
    CHECK(m.at("uniqueness") == 6);    // 3 markers, 2 relations
    CHECK(cs.size() == 28);
    CHECK(red.marker_family() == std::vector<std::string>{"Pv1_1", "Pw1_1", "Pw1_2"});
  }
  SECTION("two crossing pairs") {
    const Reduction red(crossing_pairs());
    const auto m = group_counts(red.neg_psi_conjuncts());
    CHECK(m.at("generation") == 10);
    CHECK(m.at("disjointness") == 19);  // 1 letter pair + C(6,2) markers + 3
    CHECK(m.at("coordination") == 7);   // 1 + 2k + 2 with k=2
    CHECK(m.at("uniqueness") == 12);
  }
}

TEST_CASE("chain formulas spell their word level by level", "[reduction]") {
  const Reduction red(single_pair());

  CHECK(to_string(red.nu(1, 1, "x")) ==
        "((exists y . ((((S(x,y) & E1(x,y)) & a(y)) & Pv1_1(y)) & Zv2(y))) & "
        "forall y . (S(x,y) -> (((E1(x,y) & a(y)) & Pv1_1(y)) & Zv2(y))))");

  // two-letter word: levels alternate the chain variable and only the last
  // level carries the block terminal
  const std::string om = to_string(red.omega(1, 2, "x"));
  CHECK(om.find("Pw1_1(y)") != std::string::npos);
  CHECK(om.find("Pw1_2(x)") != std::string::npos);
  CHECK(om.find("Zw1(x)") != std::string::npos);
  CHECK(om.find("Zw1(y)") == std::string::npos);
  CHECK(quantifier_depth(red.omega(1, 2, "x")) == 2);
  CHECK(quantifier_depth(red.nu(1, 1, "x")) == 1);

  // subject y swaps the roles of the variables
  const std::string om_y = to_string(red.omega(1, 2, "y"));
  CHECK(om_y.find("Pw1_1(x)") != std::string::npos);
  CHECK(om_y.find("Pw1_2(y)") != std::string::npos);
}

TEST_CASE("named conjuncts match their printed forms", "[reduction]") {
  const Reduction red(single_pair());
  const auto cs = red.neg_psi_conjuncts();
  std::map<std::string, FormulaRef> by_name;
  for (const auto& c : cs) by_name[c.name] = c.f;

  CHECK(to_string(by_name.at("point-starts-v-block")) == "(Zv1(x) & Zv(x))");
  CHECK(to_string(by_name.at("s-keeps-Zv")) ==
        "forall x . forall y . ((Zv(x) & S(x,y)) -> Zv(y))");
  CHECK(to_string(by_name.at("r-successors-are-y1")) == "forall y . (R(x,y) -> Y1(y))");
  CHECK(to_string(by_name.at("y2-starts-w-block")) ==
        "forall x . forall y . ((Y2(x) & R(x,y)) -> (Zw1(y) & Zw(y)))");
  CHECK(to_string(by_name.at("r-within-e1")) == "forall x . forall y . (R(x,y) -> E1(x,y))");
  CHECK(to_string(by_name.at("disjoint(Zv,Zw)")) == "forall x . (Zv(x) -> ~Zw(x))");
  CHECK(to_string(by_name.at("zip(1)")) ==
        "forall x . forall y . (((E1(x,y) & Zv2(x)) & Zw2(y)) -> E2(x,y))");
  CHECK(to_string(by_name.at("unique(Pv1_1,2)")) ==
        "forall x . forall y . (((Pv1_1(x) & Pv1_1(y)) & E2(x,y)) -> x=y)");
  CHECK(to_string(by_name.at("transfer(1,2)")) ==
        "forall x . ((Zv2(x) & " + to_string(red.nu(1, 2, "x")) +
        ") -> forall y . ((E2(x,y) & Zw2(y)) -> " + to_string(red.omega(1, 2, "y")) + "))");
}

TEST_CASE("generated formulas survive a parse and print round trip", "[reduction]") {
  for (const PcpInstance& p : {single_pair(), crossing_pairs()}) {
    const Reduction red(p);
    for (const Formula& f : {red.phi(), red.psi(), red.neg_psi()}) {
      const Formula back = parse_formula(to_string(f.root), f.mode);
      CHECK(equal_formulas(back.root, f.root));
    }
    const Formula g = red.phi_guarded();
    CHECK(equal_formulas(parse_formula(to_string(g.root), Mode::gf2).root, g.root));
  }
}

TEST_CASE("shared signature is the chain relations plus the alphabet", "[reduction]") {
  for (const PcpInstance& p : {single_pair(), crossing_pairs()}) {
    const Reduction red(p);
    const Signature shared = intersect(signature_of(red.phi().root), signature_of(red.psi().root));
    CHECK(shared == red.rho());
    CHECK(shared.binary == std::set<std::string>{"R", "S"});
    CHECK(shared.unary == std::set<std::string>{"a", "b"});
    CHECK(shared.constants.empty());
    // the guarded variant only adds its two constants on phi's side
    const Signature gshared =
        intersect(signature_of(red.phi_guarded().root), signature_of(red.psi().root));
    CHECK(gshared == red.rho());
    CHECK(free_vars(red.psi().root) == std::set<std::string>{"x"});
  }
}
