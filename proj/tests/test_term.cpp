#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <string>

#include "doctest.h"
#include "skelmad/skterm.hpp"
#include "skelmad/suites.hpp"
#include "skelmad/term.hpp"

using namespace skelmad;

TEST_CASE("parse/print round-trip on handwritten terms") {
  const char* samples[] = {
      "x",
      "\\x. x",
      "\\x. \\y. x y",
      "(\\x. x x) (\\y. y)",
      "\\f. (\\x. f (x x)) (\\x. f (x x))",
      "x y z",
      "\\x. x (y z) w",
      "\\x. x # trailing comment\n",
  };
  for (const char* s : samples) {
    TermStore st;
    NodeId t = parse(st, s);
    auditTerm(st, t);
    std::string p = print(st, t);
    TermStore st2;
    NodeId u = parse(st2, p);
    CHECK_MESSAGE(alphaEq(st, t, st2, u), p);
    CHECK(print(st2, u) == p);
  }
}

TEST_CASE("application associates left, abstraction bodies extend right") {
  TermStore st;
  CHECK(alphaEq(st, parse(st, "x y z"), parse(st, "(x y) z")));
  CHECK_FALSE(alphaEq(st, parse(st, "x y z"), parse(st, "x (y z)")));
  CHECK(alphaEq(st, parse(st, "\\x. x y"), parse(st, "\\x. (x y)")));
  CHECK_FALSE(alphaEq(st, parse(st, "\\x. x y"), parse(st, "(\\x. x) y")));
}

TEST_CASE("alpha equivalence identifies bound names, keeps free names apart") {
  TermStore st;
  CHECK(alphaEq(st, parse(st, "\\x. x"), parse(st, "\\y. y")));
  CHECK(alphaEq(st, parse(st, "\\x. \\y. x"), parse(st, "\\a. \\b. a")));
  CHECK_FALSE(alphaEq(st, parse(st, "\\x. \\y. x"), parse(st, "\\x. \\y. y")));
  CHECK(alphaEq(st, parse(st, "\\x. x z"), parse(st, "\\y. y z")));
  CHECK_FALSE(alphaEq(st, parse(st, "\\x. x z"), parse(st, "\\x. x w")));

  // free occurrences of one name share a single decl
  NodeId t = parse(st, "z z");
  CHECK(st.node(st.node(t).a).decl == st.node(st.node(t).b).decl);
}

TEST_CASE("shadowed binders stay well-bound") {
  TermStore st;
  NodeId t = parse(st, "\\x. \\x. x");
  auditTerm(st, t);
  const TermNode& outer = st.node(t);
  const TermNode& inner = st.node(outer.a);
  CHECK(inner.kind == NodeKind::Abs);
  // the occurrence belongs to the inner binder
  CHECK(st.node(inner.a).decl == inner.decl);
  CHECK(outer.decl != inner.decl);
  CHECK(st.occurrences(t).empty());
  CHECK(st.occurrences(outer.a).size() == 1);
  // and the two binders print under distinct names
  TermStore st2;
  CHECK(alphaEq(st, t, st2, parse(st2, "\\a. \\b. b")));
}

TEST_CASE("rename copies are alpha-equal, same-sized, and share nothing") {
  TermStore st;
  NodeId t = parse(st, "\\x. x ((\\y. y x) (\\z. z)) w");
  NodeId c = rename(st, t);
  auditTerm(st, t);
  auditTerm(st, c);
  CHECK(c != t);
  CHECK(alphaEq(st, t, c));
  CHECK(termSize(st, t) == termSize(st, c));
  // bound decls are duplicated, the free decl is shared
  CHECK(st.node(c).decl != st.node(t).decl);
  std::vector<DeclId> ft = freeDecls(st, t), fc = freeDecls(st, c);
  REQUIRE(ft.size() == 1);
  REQUIRE(fc.size() == 1);
  CHECK(ft[0] == fc[0]);
}

TEST_CASE("termSize counts constructs") {
  TermStore st;
  CHECK(termSize(st, parse(st, "x")) == 1);
  CHECK(termSize(st, parse(st, "\\x. x")) == 2);
  CHECK(termSize(st, parse(st, "x y z")) == 5);
  CHECK(termSize(st, parse(st, "(\\x. x x) (\\y. y)")) == 7);
}

TEST_CASE("freeNode recycles slots and keeps occurrence lists consistent") {
  TermStore st;
  NodeId t = parse(st, "\\x. x x");
  std::vector<NodeId> occs = st.occurrences(t);
  REQUIRE(occs.size() == 2);
  std::size_t live = st.liveNodeCount();
  st.freeNode(occs[0]);
  CHECK(st.liveNodeCount() == live - 1);
  CHECK(st.occurrences(t).size() == 1);
  CHECK(st.occurrences(t)[0] == occs[1]);
}

TEST_CASE("parse errors carry a location") {
  TermStore st;
  CHECK_THROWS_AS(parse(st, "\\x"), ParseError);
  CHECK_THROWS_AS(parse(st, "(x"), ParseError);
  CHECK_THROWS_AS(parse(st, "x)"), ParseError);
  CHECK_THROWS_AS(parse(st, ""), ParseError);
  CHECK_THROWS_AS(parse(st, "\\x. x \\y. y"), ParseError);
  try {
    parse(st, "\\x.\n  ?");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("random terms survive round-trips through both representations") {
  std::mt19937 rng(42);
  for (int i = 0; i < 1000; ++i) {
    SkRef t = i % 2 ? randomClosedTerm(rng, 30) : randomValue(rng, 30);
    SkRef back = parseTree(printTree(t));
    CHECK(alphaEqTree(t, back));

    TermStore st;
    NodeId n = treeToStore(st, t);
    auditTerm(st, n);
    CHECK(termSize(st, n) == t->size);
    CHECK(alphaEqTree(t, storeToTree(st, n)));

    TermStore st2;
    NodeId m = parse(st2, printTree(t));
    CHECK(alphaEq(st, n, st2, m));
  }
}
