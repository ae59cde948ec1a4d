#include <functional>

#include "doctest.h"
#include "shiftlab/cps.hpp"
#include "shiftlab/parse.hpp"
#include "shiftlab/semantics.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace shiftlab;

namespace {

// Random closed bindings for every metavariable of a schema.
MatchBindings random_bindings(const AxiomSchema& ax, testgen::Rng& rng) {
  MatchBindings binds;
  std::function<void(const PatternPtr&)> walk = [&](const PatternPtr& p) {
    switch (p->kind) {
      case Pattern::Kind::MetaTerm:
        if (!binds.terms.count(p->name)) binds.terms[p->name] = testgen::random_tame_term(rng, 7);
        break;
      case Pattern::Kind::MetaValue:
        if (!binds.terms.count(p->name)) binds.terms[p->name] = testgen::random_tame_value(rng, 6);
        break;
      case Pattern::Kind::CtxApp:
        if (!binds.ctxs.count(p->name)) binds.ctxs[p->name] = testgen::random_closed_pure_ctx(rng, 7);
        walk(p->p0);
        return;
      default:
        break;
    }
    if (p->p0) walk(p->p0);
    if (p->p1) walk(p->p1);
  };
  walk(ax.lhs);
  walk(ax.rhs);
  return binds;
}

}  // namespace

TEST_SUITE("cps") {

TEST_CASE("translation of a variable") {
  TermPtr img = cps_translate(var("x"));
  REQUIRE(img->kind == TermKind::Lam);
  CHECK(alpha_eq(img, lam("k", app(var("k"), var("x")))));
  CHECK(is_pure(img));
}

TEST_CASE("translation output is pure") {
  testgen::Rng rng(60);
  for (int i = 0; i < 200; ++i) CHECK(is_pure(cps_translate(testgen::random_closed_term(rng, 14))));
}

TEST_CASE("delimited value collapses under the identity continuation") {
  TermPtr idk = parse("\\w. w");
  auto lhs = beta_eta_normalize(app(cps_translate(parse("<\\y. y>")), idk), 2000);
  auto rhs = beta_eta_normalize(app(cps_translate(parse("\\y. y")), idk), 2000);
  REQUIRE(lhs.has_value());
  REQUIRE(rhs.has_value());
  CHECK(alpha_eq(*lhs, *rhs));
}

TEST_CASE("beta-eta normalization") {
  auto n1 = beta_eta_normalize(parse("\\x. (\\y. y) x"), 100);
  REQUIRE(n1.has_value());
  CHECK(alpha_eq(*n1, parse("\\y. y")));

  auto n2 = beta_eta_normalize(parse("\\x. f x"), 100);
  REQUIRE(n2.has_value());
  CHECK(alpha_eq(*n2, var("f")));

  // the image of a diverging term has no normal form
  CHECK_FALSE(beta_eta_normalize(cps_translate(parse("(\\x. x x) (\\x. x x)")), 500).has_value());

  CHECK_THROWS_AS(beta_eta_normalize(parse("<\\x. x>"), 10), std::invalid_argument);
}

TEST_CASE("cps_equiv on the axiom poster children") {
  CHECK(cps_equiv(parse("<\\x. x>"), parse("\\x. x"), 2000) == CpsVerdict::Equiv);
  CHECK(cps_equiv(parse("S k. k (\\x. x)"), parse("\\x. x"), 2000) == CpsVerdict::Equiv);
  CHECK(cps_equiv(parse("\\x. x"), parse("\\x. \\y. y"), 2000) == CpsVerdict::Inequiv);
  CHECK(cps_equiv(parse("(\\x. x x) (\\x. x x)"), parse("\\x. x"), 500) == CpsVerdict::Unknown);
}

TEST_CASE("cps_equiv is symmetric and transitive where decided") {
  std::vector<TermPtr> ts = {parse("<\\x. x>"), parse("\\x. x"), parse("(\\a. a) (\\x. x)"),
                             parse("\\x. \\y. y"), parse("S k. k (\\x. x)")};
  for (const auto& a : ts)
    for (const auto& b : ts) {
      CpsVerdict ab = cps_equiv(a, b, 2000);
      CpsVerdict ba = cps_equiv(b, a, 2000);
      CHECK(ab == ba);
      for (const auto& c : ts) {
        if (cps_equiv(a, b, 2000) == CpsVerdict::Equiv &&
            cps_equiv(b, c, 2000) == CpsVerdict::Equiv)
          CHECK(cps_equiv(a, c, 2000) == CpsVerdict::Equiv);
      }
    }
}

TEST_CASE("the eight equations are present and correctly shaped") {
  const auto& axioms = kh_axioms();
  REQUIRE(axioms.size() == 8);

  auto find = [&](const std::string& name) -> const AxiomSchema& {
    for (const auto& ax : axioms)
      if (ax.name == name) return ax;
    REQUIRE(false);
    return axioms[0];
  };

  // <E[S k. t]> = <t[k := \x. <E[x]>]>
  {
    const auto& ax = find("reset-shift");
    auto ms = match_pattern(ax.lhs, parse("<(\\a. a) (S k. k)>"), ax.conditions);
    bool found = false;
    for (const auto& m : ms) {
      TermPtr rhs = instantiate_pattern(ax.rhs, m);
      if (alpha_eq(rhs, parse("<\\x. <(\\a. a) x>>"))) found = true;
    }
    CHECK(found);
  }
  // \x. v x = v with x not free in v
  {
    const auto& ax = find("eta-v");
    CHECK(match_pattern(ax.lhs, parse("\\x. (\\y. y) x"), ax.conditions).size() == 1);
    // the side condition blocks \x. x x
    CHECK(match_pattern(ax.lhs, parse("\\x. x x"), ax.conditions).empty());
  }
  // <(\x. t0) <t1>> = (\x. <t0>) <t1>
  {
    const auto& ax = find("reset-lift");
    auto ms = match_pattern(ax.lhs, parse("<(\\x. x) <\\z. z>>"), ax.conditions);
    REQUIRE(ms.size() == 1);
    CHECK(alpha_eq(instantiate_pattern(ax.rhs, ms[0]), parse("(\\x. <x>) <\\z. z>")));
  }
  // beta-omega side condition: x must not occur in E
  {
    const auto& ax = find("beta-omega");
    // (\x. x (\z. z)) t matches with E = [.] (\z. z)
    CHECK(!match_pattern(ax.lhs, parse("(\\x. x (\\z. z)) (\\w. w)"), ax.conditions).empty());
    // (\x. x x) t must not match: every decomposition has x in E or fails
    CHECK(match_pattern(ax.lhs, parse("(\\x. x x) (\\w. w)"), ax.conditions).empty());
  }
}

TEST_CASE("axiom instances are sound for the translation") {
  testgen::Rng rng(61);
  for (const auto& ax : kh_axioms()) {
    int done = 0, attempts = 0;
    while (done < 5 && attempts < 200) {
      ++attempts;
      auto [lhs, rhs] = instantiate_schema(ax, random_bindings(ax, rng));
      REQUIRE(is_closed(lhs));
      REQUIRE(is_closed(rhs));
      CpsVerdict v = cps_equiv(lhs, rhs, 5000);
      if (v == CpsVerdict::Unknown) continue;  // non-normalizing instance, resample
      CAPTURE(ax.name);
      CAPTURE(print(lhs));
      CAPTURE(print(rhs));
      REQUIRE(v == CpsVerdict::Equiv);
      ++done;
    }
    REQUIRE(done == 5);
  }
}

TEST_CASE("kh_search finds one-step derivations") {
  auto d1 = kh_search(parse("<<\\x. x>>"), parse("<\\x. x>"), 2);
  REQUIRE(d1.has_value());
  CHECK(d1->steps.size() == 1);
  CHECK(oracle::replay_derivation(*d1, parse("<<\\x. x>>"), parse("<\\x. x>")));

  auto d2 = kh_search(parse("\\q. q"), parse("\\q. q"), 0);
  REQUIRE(d2.has_value());
  CHECK(d2->steps.empty());

  auto d3 = kh_search(parse("S k. <k k>"), parse("S k. k k"), 1);
  REQUIRE(d3.has_value());
  CHECK(d3->steps.size() == 1);
  CHECK(d3->steps[0].axiom == "shift-reset");
}

TEST_CASE("kh_search needs both directions") {
  // from <v> to \x. v x takes reset-value forward and eta-v backward
  TermPtr a = parse("<\\y. \\z. y z>");
  TermPtr b = parse("\\x. (\\y. \\z. y z) x");
  auto d = kh_search(a, b, 2);
  REQUIRE(d.has_value());
  CHECK(d->steps.size() == 2);
  CHECK(oracle::replay_derivation(*d, a, b));
}

TEST_CASE("kh_search respects the depth bound") {
  CHECK_FALSE(kh_search(parse("\\x. x"), parse("\\x. \\y. y"), 3).has_value());
  CHECK_FALSE(kh_search(parse("<<\\x. x>>"), parse("<\\x. x>"), 0).has_value());
}

TEST_CASE("random rewrite round trips replay") {
  testgen::Rng rng(62);
  int done = 0;
  for (int i = 0; i < 120 && done < 40; ++i) {
    TermPtr t = testgen::random_closed_term(rng, 9);
    auto rewrites = kh_rewrites(t);
    if (rewrites.empty()) continue;
    const DerivStep& step = rewrites[rng() % rewrites.size()];
    auto d = kh_search(t, step.after, 2);
    REQUIRE(d.has_value());
    REQUIRE(oracle::replay_derivation(*d, t, step.after));
    ++done;
  }
  CHECK(done >= 30);
}

}  // TEST_SUITE
