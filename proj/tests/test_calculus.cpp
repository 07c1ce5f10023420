#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "skelmad/calculus.hpp"
#include "skelmad/skterm.hpp"
#include "skelmad/suites.hpp"

using namespace skelmad;

namespace {

SkRef idT() { return mkAbsT("w", mkVarT("w")); }

std::uint64_t kFor(const SkRef& t) { return initialFreshCounter(t); }

// strips the substitution context off an answer
SkRef answerValue(SkRef t) {
  while (t->kind == SkKind::ES || t->kind == SkKind::SkES) t = t->a;
  return t;
}

std::uint64_t entryCount(const SkRef& t) {
  std::uint64_t n = 0;
  for (SkRef c = t; c->kind == SkKind::ES || c->kind == SkKind::SkES; c = c->a) ++n;
  return n;
}

}  // namespace

TEST_CASE("dB floats the substitution context around the abstraction") {
  // (\x. y)[y\t] u  ->  y[x\u][y\t]
  SkRef t = mkAppT(mkEST("y", mkAbsT("x", mkVarT("y")), mkVarT("t")), mkVarT("u"));
  SkRef want = mkEST("y", mkEST("x", mkVarT("y"), mkVarT("u")), mkVarT("t"));
  for (Strategy s : {Strategy::Need, Strategy::SkNeed}) {
    std::uint64_t k = kFor(t);
    auto r = stepTree(t, s, k);
    REQUIRE(r);
    CHECK(r->label == StepLabel::dB);
    CHECK(alphaEqTree(r->term, want));
  }
}

TEST_CASE("dB renames the entry when the argument would be captured") {
  // (\x. y)[y\t] y  ->  y'[x\y][y'\t]
  SkRef t = mkAppT(mkEST("y", mkAbsT("x", mkVarT("y")), mkVarT("t")), mkVarT("y"));
  std::uint64_t k = kFor(t);
  auto r = stepNeed(t, k);
  REQUIRE(r);
  CHECK(r->label == StepLabel::dB);
  SkRef want = mkEST("q", mkEST("x", mkVarT("q"), mkVarT("y")), mkVarT("t"));
  CHECK(alphaEqTree(r->term, want));
}

TEST_CASE("lsnd copies the value and floats its substitution context") {
  // (x x)[x\I[y\t]]  ->  (I x)[x\I][y\t]
  SkRef t = mkEST("x", mkAppT(mkVarT("x"), mkVarT("x")), mkEST("y", idT(), mkVarT("t")));
  std::uint64_t k = kFor(t);
  auto r = stepNeed(t, k);
  REQUIRE(r);
  CHECK(r->label == StepLabel::lsnd);
  SkRef want = mkEST("y", mkEST("x", mkAppT(idT(), mkVarT("x")), idT()), mkVarT("t"));
  CHECK(alphaEqTree(r->term, want));
}

TEST_CASE("sk then ss on a demanded identity entry") {
  // (x I (x I))[x\I]  ->sk  (x I (x I))[x\\I]  ->ss  (I I (x I))[x\\I]
  SkRef body = mkAppT(mkAppT(mkVarT("x"), idT()), mkAppT(mkVarT("x"), idT()));
  SkRef t = mkEST("x", body, idT());
  std::uint64_t k = kFor(t);
  auto r = stepSkNeed(t, k);
  REQUIRE(r);
  CHECK(r->label == StepLabel::sk);
  CHECK(alphaEqTree(r->term, mkSkEST("x", body, idT())));

  auto r2 = stepSkNeed(r->term, k);
  REQUIRE(r2);
  CHECK(r2->label == StepLabel::ss);
  SkRef want = mkSkEST("x", mkAppT(mkAppT(idT(), idT()), mkAppT(mkVarT("x"), idT())), idT());
  CHECK(alphaEqTree(r2->term, want));
}

TEST_CASE("sk cuts flesh and parks it around the skeletal entry") {
  // (x z)[x\ \y. a b ]  ->sk  (x z)[x\\ \y. p ][p\ a b ]
  SkRef v = mkAbsT("y", mkAppT(mkVarT("a"), mkVarT("b")));
  SkRef t = mkEST("x", mkAppT(mkVarT("x"), mkVarT("z")), v);
  std::uint64_t k = kFor(t);
  auto r = stepSkNeed(t, k);
  REQUIRE(r);
  CHECK(r->label == StepLabel::sk);
  SkRef want = mkEST("p", mkSkEST("x", mkAppT(mkVarT("x"), mkVarT("z")), mkAbsT("y", mkVarT("p"))),
                     mkAppT(mkVarT("a"), mkVarT("b")));
  CHECK(alphaEqTree(r->term, want));
}

TEST_CASE("values are normal in both strategies") {
  std::uint64_t k = 1;
  CHECK_FALSE(stepNeed(idT(), k));
  CHECK_FALSE(stepSkNeed(idT(), k));
  CHECK_FALSE(stepSkNeed(mkAbsT("x", mkAppT(mkVarT("x"), mkVarT("x"))), k));
}

TEST_CASE("the need rules reject skeletal substitutions") {
  SkRef t = mkSkEST("x", mkAppT(mkVarT("x"), mkVarT("x")), idT());
  std::uint64_t k = 1;
  CHECK_THROWS_AS(stepNeed(t, k), std::invalid_argument);
}

TEST_CASE("family terms: shape, purity, size") {
  SkRef t0 = familyTerm(0);
  SkRef body = mkAppT(mkAppT(mkVarT("x"), idT()), mkAppT(mkVarT("x"), idT()));
  CHECK(alphaEqTree(t0, mkAppT(mkAbsT("x", body), idT())));
  for (unsigned n = 0; n <= 6; ++n) {
    SkRef t = familyTerm(n);
    CHECK(treeIsPure(t));
    CHECK(freeNamesTree(t).empty());
    CHECK(t->size == 14 * n + 13);
  }
}

TEST_CASE("family step counts match the closed forms") {
  for (unsigned n = 0; n <= 5; ++n) {
    EvalResult s = evaluate(familyTerm(n), Strategy::SkNeed, 1'000'000);
    REQUIRE_FALSE(s.stats.fuelExhausted);
    CHECK(s.stats.db == 6 * n + 4);
    CHECK(alphaEqTree(answerValue(s.final), idT()));

    EvalResult d = evaluate(familyTerm(n), Strategy::Need, 1'000'000);
    REQUIRE_FALSE(d.stats.fuelExhausted);
    CHECK(d.stats.db == (8u << n) + n - 4);
    CHECK(alphaEqTree(answerValue(d.final), idT()));
  }
}

TEST_CASE("skeletal evaluation keeps the family small, plain need does not") {
  std::vector<std::uint64_t> skInk, skEntries, ndInk, ndEntries;
  for (unsigned n = 0; n <= 12; ++n) {
    EvalResult s = evaluate(familyTerm(n), Strategy::SkNeed, 1'000'000);
    skInk.push_back(s.stats.inkSpace);
    skEntries.push_back(entryCount(s.final));
  }
  // plain need doubles its work per level, so stop earlier
  for (unsigned n = 0; n <= 10; ++n) {
    EvalResult d = evaluate(familyTerm(n), Strategy::Need, 1'000'000);
    ndInk.push_back(d.stats.inkSpace);
    ndEntries.push_back(entryCount(d.final));
  }
  // linear: first differences settle to a constant
  for (unsigned n = 3; n <= 12; ++n) {
    CHECK(skInk[n] - skInk[n - 1] == skInk[3] - skInk[2]);
    CHECK(skEntries[n] - skEntries[n - 1] == skEntries[3] - skEntries[2]);
  }
  // geometric: successive ratios stay near 2
  for (unsigned n = 5; n <= 9; ++n) {
    CHECK(ndInk[n + 1] * 10 >= ndInk[n] * 18);
    CHECK(ndEntries[n + 1] * 10 >= ndEntries[n] * 18);
  }
}

TEST_CASE("canonicalize floats a substitution out of an application") {
  SkRef a = mkAppT(mkEST("x", mkVarT("x"), mkVarT("s")), mkVarT("u"));
  SkRef b = mkEST("x", mkAppT(mkVarT("x"), mkVarT("u")), mkVarT("s"));
  CHECK(structEqTree(canonicalize(a), canonicalize(b)));
  // an outermost substitution is already canonical
  CHECK(structEqTree(canonicalize(b), canonicalize(canonicalize(b))));
}

TEST_CASE("canonicalize relates the two placements around a skeletal entry") {
  // ((x I (x I))[x\\ \z. w z] y)[w\s]  vs  ((x I (x I))[x\\ \z. w z][w\s]) y
  SkRef core = mkSkEST("x", mkAppT(mkAppT(mkVarT("x"), idT()), mkAppT(mkVarT("x"), idT())),
                       mkAbsT("z", mkAppT(mkVarT("w"), mkVarT("z"))));
  SkRef a = mkEST("w", mkAppT(core, mkVarT("y")), mkVarT("s"));
  SkRef b = mkAppT(mkEST("w", core, mkVarT("s")), mkVarT("y"));
  CHECK(structEqTree(canonicalize(a), canonicalize(b)));
}

TEST_CASE("canonicalize floats a demanded entry's inner substitution") {
  // (x x)[x\ I[y\s] ]  vs  (x x)[x\I][y\s]
  SkRef a = mkEST("x", mkAppT(mkVarT("x"), mkVarT("x")), mkEST("y", idT(), mkVarT("s")));
  SkRef b = mkEST("y", mkEST("x", mkAppT(mkVarT("x"), mkVarT("x")), idT()), mkVarT("s"));
  CHECK(structEqTree(canonicalize(a), canonicalize(b)));
}

namespace {

// Demand computation mirroring the evaluation contexts: the variable the
// leftmost spine ends on, following demanded ES payloads, with the set of
// entry names crossed on the way.
struct Demand {
  std::string name;
  std::set<std::string> passed;
};

std::optional<Demand> demandOf(const SkRef& t) {
  switch (t->kind) {
    case SkKind::Var: return Demand{t->name, {}};
    case SkKind::Abs: return std::nullopt;
    case SkKind::App: return demandOf(t->a);
    case SkKind::ES:
    case SkKind::SkES: {
      auto d = demandOf(t->a);
      if (!d) return std::nullopt;
      if (d->name == t->name) {
        if (t->kind == SkKind::SkES) return std::nullopt;
        auto inner = demandOf(t->b);
        if (!inner) return std::nullopt;
        inner->passed.insert(d->passed.begin(), d->passed.end());
        inner->passed.insert(t->name);
        return inner;
      }
      d->passed.insert(t->name);
      return d;
    }
  }
  return std::nullopt;
}

SkRef bind(SkKind k, const std::string& n, SkRef a, SkRef b) {
  return k == SkKind::ES ? mkEST(n, std::move(a), std::move(b))
                         : mkSkEST(n, std::move(a), std::move(b));
}

using Rebuild = std::function<SkRef(const SkRef&)>;

// Enumerates single outward floats of the two structural equalities at the
// evaluation positions, returning full rewritten terms.
void floatVariantsRec(const SkRef& t, const Rebuild& rebuild, std::vector<SkRef>& out) {
  if (t->kind == SkKind::App) {
    const SkRef& h = t->a;
    if ((h->kind == SkKind::ES || h->kind == SkKind::SkES) && !nameFreeIn(t->b, h->name))
      out.push_back(rebuild(bind(h->kind, h->name, mkAppT(h->a, t->b), h->b)));
    SkRef arg = t->b;
    floatVariantsRec(h, [&rebuild, arg](const SkRef& r) { return rebuild(mkAppT(r, arg)); },
                     out);
    return;
  }
  if (t->kind != SkKind::ES && t->kind != SkKind::SkES) return;

  auto d = demandOf(t->a);
  bool demanded = d && d->name == t->name;
  const SkRef& inner = t->b;
  if (demanded && (inner->kind == SkKind::ES || inner->kind == SkKind::SkES)) {
    std::set<std::string> dom = d->passed;
    dom.insert(t->name);
    std::set<std::string> fvInner = freeNamesTree(inner);
    bool disjoint = true;
    for (const std::string& n : dom) disjoint = disjoint && !fvInner.count(n);
    if (disjoint && !nameFreeIn(t->a, inner->name))
      out.push_back(rebuild(
          bind(inner->kind, inner->name, bind(t->kind, t->name, t->a, inner->a), inner->b)));
  }
  SkKind k = t->kind;
  std::string nm = t->name;
  SkRef payload = t->b;
  floatVariantsRec(t->a,
                   [&rebuild, k, nm, payload](const SkRef& r) {
                     return rebuild(bind(k, nm, r, payload));
                   },
                   out);
  if (demanded && t->kind == SkKind::ES) {
    SkRef bodyK = t->a;
    floatVariantsRec(t->b,
                     [&rebuild, k, nm, bodyK](const SkRef& r) {
                       return rebuild(bind(k, nm, bodyK, r));
                     },
                     out);
  }
}

std::vector<SkRef> floatVariants(const SkRef& t) {
  std::vector<SkRef> out;
  floatVariantsRec(t, [](const SkRef& r) { return r; }, out);
  return out;
}

}  // namespace

TEST_CASE("single structural floats never change the canonical form") {
  std::mt19937 rng(7);
  std::uint64_t pairs = 0, bisimChecked = 0;
  for (int sample = 0; sample < 400 && pairs < 1000; ++sample) {
    SkRef t0 = randomClosedTerm(rng, 14);
    Strategy strat = sample % 2 ? Strategy::Need : Strategy::SkNeed;
    EvalResult er = evaluate(t0, strat, 300, true);
    std::vector<SkRef> terms{t0};
    for (const TraceEntry& e : er.trace) terms.push_back(e.term);
    for (const SkRef& t : terms) {
      if (t->size > 300) continue;
      for (const SkRef& u : floatVariants(t)) {
        ++pairs;
        CHECK_MESSAGE(structEqTree(canonicalize(t), canonicalize(u)),
                      printTree(t), "  vs  ", printTree(u));
        // the equivalence is a strong bisimulation: both sides step with the
        // same label to equivalent terms
        if (bisimChecked < 300) {
          ++bisimChecked;
          std::uint64_t kt = kFor(t), ku = kFor(u);
          auto rt = stepTree(t, strat, kt);
          auto ru = stepTree(u, strat, ku);
          REQUIRE(rt.has_value() == ru.has_value());
          if (rt) {
            CHECK(rt->label == ru->label);
            CHECK(structEqTree(canonicalize(rt->term), canonicalize(ru->term)));
          }
        }
        if (pairs >= 1000) break;
      }
      if (pairs >= 1000) break;
    }
  }
  CHECK(pairs >= 1000);
}

TEST_CASE("evaluate reports fuel exhaustion on divergent terms") {
  SkRef omega = mkAppT(mkAbsT("x", mkAppT(mkVarT("x"), mkVarT("x"))),
                       mkAbsT("y", mkAppT(mkVarT("y"), mkVarT("y"))));
  for (Strategy s : {Strategy::Need, Strategy::SkNeed}) {
    EvalResult r = evaluate(omega, s, 100);
    CHECK(r.stats.fuelExhausted);
    CHECK(r.stats.steps() == 100);
  }
}

TEST_CASE("inkSpace counts the largest term along the trace") {
  // the initial term itself counts
  SkRef v = idT();
  EvalResult r = evaluate(v, Strategy::SkNeed, 10);
  CHECK(r.stats.inkSpace == v->size);
  // growing run: inkSpace is at least the final size and the initial size
  SkRef t = familyTerm(2);
  EvalResult e = evaluate(t, Strategy::Need, 100000);
  CHECK(e.stats.inkSpace >= t->size);
  CHECK(e.stats.inkSpace >= e.final->size);
}
