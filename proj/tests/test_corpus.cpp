#include <sstream>

#include "doctest.h"
#include "shiftlab/corpus.hpp"
#include "shiftlab/parse.hpp"

using namespace shiftlab;

TEST_SUITE("corpus") {

TEST_CASE("aliases are closed and well-formed") {
  for (const auto& [name, term] : alias_table()) {
    CAPTURE(name);
    CHECK(is_closed(term));
  }
  CHECK(alpha_eq(alias_table().at("OMEGA"), parse("(\\x. x x) (\\x. x x)")));
  CHECK(alias_table().at("THETA_SHIFT")->kind == TermKind::Reset);
}

TEST_CASE("alias expansion replaces free occurrences only") {
  TermPtr t = parse_with_aliases("OMEGA");
  CHECK(alpha_eq(t, parse("(\\x. x x) (\\x. x x)")));
  // a bound OMEGA shadows the alias
  TermPtr shadowed = parse_with_aliases("\\OMEGA. OMEGA");
  CHECK(alpha_eq(shadowed, parse("\\q. q")));
  TermPtr applied = parse_with_aliases("ID TRUE");
  CHECK(alpha_eq(applied, parse("(\\x. x) (\\x. \\y. x)")));
}

TEST_CASE("stanza parsing") {
  std::istringstream in(
      "# a comment\n"
      "name: sample\n"
      "left: ID\n"
      "right: <ID>\n"
      "expect-relaxed: bisim=no-counterexample falsify=none-found\n"
      "expect-original: bisim=no-counterexample falsify=none-found\n"
      "ref: note text\n"
      "\n"
      "name: second\n"
      "left: OMEGA\n"
      "right: OMEGA\n"
      "expect-relaxed: bisim=no-counterexample falsify=none-found\n"
      "expect-original: bisim=no-counterexample falsify=none-found\n"
      "ref: another\n");
  auto entries = parse_corpus(in);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].name == "sample");
  CHECK(entries[0].left_src == "ID");
  CHECK(entries[0].expect_relaxed_bisim == "no-counterexample");
  CHECK(entries[0].expect_original_falsify == "none-found");
  CHECK(entries[1].ref == "another");
}

TEST_CASE("malformed stanzas are rejected") {
  std::istringstream missing("name: x\nleft: ID\n\n");
  CHECK_THROWS_AS(parse_corpus(missing), std::runtime_error);
  std::istringstream badkey("name: x\nleft: ID\nright: ID\nwhat: no\n");
  CHECK_THROWS_AS(parse_corpus(badkey), std::runtime_error);
  std::istringstream badexpect("name: x\nleft: ID\nright: ID\nexpect-relaxed: bogus\n");
  CHECK_THROWS_AS(parse_corpus(badexpect), std::runtime_error);
}

TEST_CASE("the checked-in corpus parses and uses known verdicts") {
  auto entries = parse_corpus_file(SHIFTLAB_CORPUS_FILE);
  REQUIRE(entries.size() >= 25);
  for (const auto& e : entries) {
    CAPTURE(e.name);
    CHECK_NOTHROW(parse_with_aliases(e.left_src));
    CHECK_NOTHROW(parse_with_aliases(e.right_src));
    for (const std::string& v : {e.expect_relaxed_bisim, e.expect_original_bisim})
      CHECK((v == "no-counterexample" || v == "distinguished" || v == "likely-distinguished"));
    for (const std::string& v : {e.expect_relaxed_falsify, e.expect_original_falsify})
      CHECK((v == "none-found" || v == "counterexample" || v == "likely-counterexample"));
    CHECK(!e.ref.empty());
  }
}

TEST_CASE("run_corpus reports mismatches") {
  std::istringstream in(
      "name: wrong\n"
      "left: ID\n"
      "right: ID\n"
      "expect-relaxed: bisim=distinguished falsify=none-found\n"
      "expect-original: bisim=no-counterexample falsify=none-found\n"
      "ref: deliberately wrong expectation\n");
  auto entries = parse_corpus(in);
  GameConfig cfg;
  cfg.fuel = 200;
  FalsifyBudgets budgets;
  budgets.fuel = 200;
  budgets.max_frames = 1;
  RunReport report = run_corpus(entries, cfg, budgets);
  CHECK_FALSE(report.all_pass);
  REQUIRE(report.entries.size() == 1);
  CHECK_FALSE(report.entries[0].pass);
  CHECK(report.entries[0].actual_relaxed_bisim == "no-counterexample");
}

}  // TEST_SUITE
