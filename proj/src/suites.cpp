#include "skelmad/suites.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "skelmad/calculus.hpp"
#include "skelmad/machine.hpp"
#include "skelmad/skeleton.hpp"

namespace skelmad {

namespace {

void fail(SuiteResult& res, const std::string& msg) {
  ++res.failures;
  if (res.notes.size() < 8) res.notes.push_back("FAIL " + msg);
}

void note(SuiteResult& res, const std::string& msg) {
  if (res.notes.size() < 8) res.notes.push_back(msg);
}

// ---------------------------------------------------------------------------
// Generators

struct Gen {
  std::mt19937& rng;
  std::vector<std::string> scope;
  std::vector<std::string> freePool;
  unsigned next = 0;

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng); }

  SkRef var() {
    unsigned nScope = static_cast<unsigned>(scope.size());
    unsigned i = pick(nScope + static_cast<unsigned>(freePool.size()));
    return mkVarT(i < nScope ? scope[i] : freePool[i - nScope]);
  }

  SkRef term(unsigned budget) {
    bool canVar = !scope.empty() || !freePool.empty();
    if (budget <= 1) return var();  // callers keep budget >= 2 until a binder exists
    unsigned minLeaf = canVar ? 1 : 2;
    unsigned wVar = canVar ? 2 : 0;
    unsigned wApp = budget >= 1 + 2 * minLeaf ? 5 : 0;  // application-heavy, so samples reduce
    unsigned r = pick(wVar + 3 + wApp);
    if (r < wVar) return var();
    if (r < wVar + 3) {
      std::string name = "g" + std::to_string(next++);
      scope.push_back(name);
      SkRef body = term(budget - 1);
      scope.pop_back();
      return mkAbsT(std::move(name), std::move(body));
    }
    unsigned l = minLeaf + pick(budget - 2 * minLeaf);
    SkRef h = term(l);
    return mkAppT(std::move(h), term(budget - 1 - l));
  }
};

}  // namespace

SkRef randomValue(std::mt19937& rng, unsigned maxSize) {
  if (maxSize < 2) maxSize = 2;
  Gen g{rng, {}, {"a", "b", "c"}, 0};
  unsigned budget = 2 + g.pick(maxSize - 1);
  std::string name = "g" + std::to_string(g.next++);
  g.scope.push_back(name);
  SkRef body = g.term(budget - 1);
  return mkAbsT(std::move(name), std::move(body));
}

SkRef randomClosedTerm(std::mt19937& rng, unsigned maxSize) {
  if (maxSize < 4) maxSize = 4;
  Gen g{rng, {}, {}, 0};
  unsigned budget = 4 + g.pick(maxSize - 3);
  return g.term(budget);
}

// ---------------------------------------------------------------------------
// Skeleton suite

namespace {

// Variable occurrences the splitting keeps although they are unmarked: cut
// points that happen to be variables. They account for the size difference
// between the skeleton and the white size.
std::uint32_t keptVars(const MRef& m, bool parentMarked) {
  switch (m->kind) {
    case MTerm::Var:
      return !m->marked && parentMarked ? 1u : 0u;
    case MTerm::Abs:
      return m->marked ? keptVars(m->a, true) : 0u;
    case MTerm::App:
      return m->marked ? keptVars(m->a, true) + keptVars(m->b, true) : 0u;
    case MTerm::Up:
      break;
  }
  return 0;
}

}  // namespace

SuiteResult suiteSkeleton(std::uint64_t seed, unsigned cases, unsigned maxSize) {
  SuiteResult res{"skeleton", 0, 0, {}};
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  for (unsigned i = 0; i < cases; ++i) {
    SkRef v = randomValue(rng, maxSize);
    ++res.cases;

    std::uint64_t oc = 1;
    TreeDecomposition od = skdecValueTree(v, oc);

    TermStore st;
    NodeId root = treeToStore(st, v);
    std::uint64_t steps = markSkeleton(st, root);
    std::uint32_t ws = whiteSize(st, root);
    if (steps != ws) {
      fail(res, "step count " + std::to_string(steps) + " != white size " + std::to_string(ws) +
                    " on " + printTree(v));
      continue;
    }

    MRef marked = markedStoreToMTerm(st, root);
    MRef disc = discTree(v);
    if (!mtermEq(marked, disc)) {
      fail(res, "marks differ from the recursive definition on " + printTree(v) + ": got " +
                    mtermPrint(marked) + ", want " + mtermPrint(disc));
      continue;
    }
    std::uint32_t kept = keptVars(disc, false);

    SkeletalDecomposition dec = split(st, root);
    SkRef skel = storeToTree(st, dec.skeleton);
    if (dec.flesh.size() != od.flesh.size()) {
      fail(res, "flesh count " + std::to_string(dec.flesh.size()) + " != oracle " +
                    std::to_string(od.flesh.size()) + " on " + printTree(v));
      continue;
    }

    std::map<std::string, SkRef> oracleToSplit;
    std::map<std::string, SkRef> back;
    bool bodiesOk = true;
    for (std::size_t k = 0; k < dec.flesh.size(); ++k) {
      std::string name = st.decl(dec.flesh[k].var).displayName;
      SkRef body = storeToTree(st, dec.flesh[k].body);
      oracleToSplit[od.flesh[k].first] = mkVarT(name);
      back[name] = body;
      if (!alphaEqTree(body, od.flesh[k].second)) {
        fail(res, "flesh body " + std::to_string(k) + " mismatch on " + printTree(v) + ": " +
                      printTree(body) + " vs " + printTree(od.flesh[k].second));
        bodiesOk = false;
        break;
      }
      if (body->size > v->size) {
        fail(res, "flesh body larger than the value on " + printTree(v));
        bodiesOk = false;
        break;
      }
    }
    if (!bodiesOk) continue;

    if (!alphaEqTree(skel, substFreeTree(od.skeleton, oracleToSplit))) {
      fail(res, "skeleton mismatch on " + printTree(v) + ": " + printTree(skel) + " vs " +
                    printTree(od.skeleton));
      continue;
    }
    if (skel->size > v->size) {
      fail(res, "skeleton larger than the value on " + printTree(v));
      continue;
    }
    if (skel->size != ws + dec.flesh.size() + kept) {
      fail(res, "size accounting off on " + printTree(v) + ": |skel|=" +
                    std::to_string(skel->size) + " white=" + std::to_string(ws) + " flesh=" +
                    std::to_string(dec.flesh.size()) + " kept=" + std::to_string(kept));
      continue;
    }
    if (!alphaEqTree(substFreeTree(skel, back), v)) {
      fail(res, "substituting the flesh back does not recover " + printTree(v));
      continue;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Diamond suite

namespace {

// All bodies of the given size under `depth` enclosing binders, up to
// renaming: binders are named by their depth and free occurrences use a
// single name, which is enough because no rewrite rule compares names.
struct ValueEnum {
  std::map<std::pair<unsigned, unsigned>, std::vector<SkRef>> memo;

  const std::vector<SkRef>& bodies(unsigned size, unsigned depth) {
    auto key = std::make_pair(size, depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<SkRef> out;
    if (size == 1) {
      for (unsigned d = 1; d <= depth; ++d) out.push_back(mkVarT("b" + std::to_string(d)));
      out.push_back(mkVarT("f"));
    } else {
      for (const SkRef& b : bodies(size - 1, depth + 1))
        out.push_back(mkAbsT("b" + std::to_string(depth + 1), b));
      for (unsigned l = 1; l + 2 <= size; ++l) {
        const auto& ls = bodies(l, depth);
        const auto& rs = bodies(size - 1 - l, depth);
        for (const SkRef& a : ls)
          for (const SkRef& b : rs) out.push_back(mkAppT(a, b));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }
};

}  // namespace

SuiteResult suiteDiamond(unsigned maxValueSize) {
  SuiteResult res{"diamond", 0, 0, {}};
  ValueEnum en;
  std::uint64_t states = 0;
  for (unsigned n = 2; n <= maxValueSize; ++n) {
    for (const SkRef& body : en.bodies(n - 1, 1)) {
      SkRef v = mkAbsT("b1", body);
      ++res.cases;

      MRef disc = discTree(v);
      MRef target = mkMUp(disc);
      std::string targetKey = mtermKey(target);

      // Walk one maximal path first: its length is the promised step count.
      std::uint64_t steps = 0;
      for (MRef m = initMarked(v);;) {
        std::vector<MRef> rs = algSteps(m);
        if (rs.empty()) break;
        m = rs.front();
        ++steps;
      }
      if (steps != mtermMarkCount(disc)) {
        fail(res, "path length " + std::to_string(steps) + " != white size " +
                      std::to_string(mtermMarkCount(disc)) + " on " + printTree(v));
        continue;
      }

      std::unordered_map<std::string, std::vector<MRef>> succ;
      auto successors = [&](const MRef& m, const std::string& key) -> const std::vector<MRef>& {
        auto it = succ.find(key);
        if (it != succ.end()) return it->second;
        return succ.emplace(key, algSteps(m)).first->second;
      };

      MRef init = initMarked(v);
      std::deque<std::pair<MRef, std::string>> work;
      std::unordered_set<std::string> seen;
      work.emplace_back(init, mtermKey(init));
      seen.insert(work.front().second);
      bool bad = false;
      while (!work.empty() && !bad) {
        auto [m, key] = std::move(work.front());
        work.pop_front();
        ++states;
        const std::vector<MRef>& rs = successors(m, key);
        if (rs.empty() && key != targetKey) {
          fail(res, "normal form " + mtermPrint(m) + " is not the marked skeleton of " +
                        printTree(v));
          bad = true;
          break;
        }
        auto meas = mtermMeasure(m);
        std::vector<std::string> rkeys;
        rkeys.reserve(rs.size());
        for (const MRef& r : rs) {
          if (!(mtermMeasure(r) < meas)) {
            fail(res, "measure does not decrease from " + mtermPrint(m));
            bad = true;
            break;
          }
          rkeys.push_back(mtermKey(r));
          if (seen.insert(rkeys.back()).second) work.emplace_back(r, rkeys.back());
        }
        // Every peak must close in exactly one step from both sides.
        for (std::size_t i = 0; i < rs.size() && !bad; ++i) {
          for (std::size_t j = i + 1; j < rs.size() && !bad; ++j) {
            if (rkeys[i] == rkeys[j]) continue;
            const std::vector<MRef>& si = successors(rs[i], rkeys[i]);
            const std::vector<MRef>& sj = successors(rs[j], rkeys[j]);
            std::set<std::string> ki;
            for (const MRef& r : si) ki.insert(mtermKey(r));
            bool joined = false;
            for (const MRef& r : sj) {
              if (ki.count(mtermKey(r))) {
                joined = true;
                break;
              }
            }
            if (!joined) {
              fail(res, "peak of " + mtermPrint(m) + " via " + mtermPrint(rs[i]) + " and " +
                            mtermPrint(rs[j]) + " does not join in one step");
              bad = true;
            }
          }
        }
      }
    }
  }
  note(res, "visited " + std::to_string(states) + " marked terms");
  return res;
}

// ---------------------------------------------------------------------------
// Determinism suite

namespace {

// The variable a term demands, i.e. the x with t = E<x> for an evaluation
// context E. Demand continues into the content of an entry for the demanded
// variable, but stops at a skeletal entry, which is itself a redex.
std::optional<std::string> demandedVarOf(const SkRef& t) {
  switch (t->kind) {
    case SkKind::Var:
      return t->name;
    case SkKind::Abs:
      return std::nullopt;
    case SkKind::App:
      return demandedVarOf(t->a);
    case SkKind::ES: {
      auto d = demandedVarOf(t->a);
      if (d && *d == t->name) return demandedVarOf(t->b);
      return d;
    }
    case SkKind::SkES: {
      auto d = demandedVarOf(t->a);
      if (d && *d == t->name) return std::nullopt;
      return d;
    }
  }
  return std::nullopt;
}

bool isAnswerTree(const SkRef& t, bool skeletal) {
  const SkTerm* p = t.get();
  while (p->kind == SkKind::ES || (skeletal && p->kind == SkKind::SkES)) p = p->a.get();
  return p->kind == SkKind::Abs;
}

// Every decomposition t = E<r> with r a root redex, by direct recursion over
// the grammar of evaluation contexts. Written against the rules, not against
// the reducer, so the two can disagree.
void redexLabels(const SkRef& t, bool skeletal, std::vector<StepLabel>& out) {
  switch (t->kind) {
    case SkKind::Var:
    case SkKind::Abs:
      return;
    case SkKind::App:
      if (isAnswerTree(t->a, skeletal)) out.push_back(StepLabel::dB);
      redexLabels(t->a, skeletal, out);
      return;
    case SkKind::ES: {
      auto d = demandedVarOf(t->a);
      if (d && *d == t->name) {
        if (isAnswerTree(t->b, skeletal))
          out.push_back(skeletal ? StepLabel::sk : StepLabel::lsnd);
        redexLabels(t->b, skeletal, out);
      }
      redexLabels(t->a, skeletal, out);
      return;
    }
    case SkKind::SkES: {
      auto d = demandedVarOf(t->a);
      if (d && *d == t->name) out.push_back(StepLabel::ss);
      redexLabels(t->a, skeletal, out);
      return;
    }
  }
}

bool skeletalPayloadsOk(const SkRef& t) {
  if (!t) return true;
  if (t->kind == SkKind::SkES) {
    std::uint64_t c = 1;
    TreeDecomposition d = skdecValueTree(t->b, c);
    if (!d.flesh.empty() || !structEqTree(d.skeleton, t->b)) return false;
  }
  if (t->kind == SkKind::Var) return true;
  if (!skeletalPayloadsOk(t->a)) return false;
  return t->kind == SkKind::Abs || skeletalPayloadsOk(t->b);
}

const char* stratName(Strategy s) { return s == Strategy::Need ? "need" : "skneed"; }

// Checks one term of a reduction sequence: at most one decomposition, and it
// agrees with what the reducer did (`expect`, empty when the term is final).
void checkOneTerm(SuiteResult& res, const SkRef& t, Strategy strat,
                  const std::optional<StepLabel>& expect, bool fuelCut) {
  ++res.cases;
  std::vector<StepLabel> found;
  redexLabels(t, strat == Strategy::SkNeed, found);
  if (found.size() > 1) {
    fail(res, std::string(stratName(strat)) + ": " + std::to_string(found.size()) +
                  " decompositions of " + printTree(t));
    return;
  }
  if (fuelCut && !expect) return;  // reducer was cut off; only uniqueness is known
  if (expect.has_value() != !found.empty() ||
      (expect && found.front() != *expect)) {
    fail(res, std::string(stratName(strat)) + ": search found " +
                  (found.empty() ? "nothing" : labelName(found.front())) + ", reducer did " +
                  (expect ? labelName(*expect) : "nothing") + " on " + printTree(t));
  }
}

}  // namespace

SuiteResult suiteDeterminism(std::uint64_t seed, unsigned samples, unsigned maxSize) {
  SuiteResult res{"determinism", 0, 0, {}};
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  for (unsigned i = 0; i < samples; ++i) {
    SkRef t = randomClosedTerm(rng, maxSize);
    for (Strategy strat : {Strategy::Need, Strategy::SkNeed}) {
      EvalResult er = evaluate(t, strat, 200, /*keepTrace=*/true);
      bool cut = er.stats.fuelExhausted;
      SkRef cur = t;
      for (std::size_t k = 0; k <= er.trace.size(); ++k) {
        std::optional<StepLabel> next;
        if (k < er.trace.size()) next = er.trace[k].label;
        // the exhaustive search is quadratic; skip the rare blown-up terms
        if (cur->size <= 1500) checkOneTerm(res, cur, strat, next, cut);
        if (k < er.trace.size()) cur = er.trace[k].term;
      }
      if (strat == Strategy::SkNeed) {
        for (const TraceEntry& e : er.trace) {
          if (!skeletalPayloadsOk(e.term)) {
            fail(res, "non-skeletal payload in " + printTree(e.term));
            break;
          }
        }
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Bisimulation suite

namespace {

StepLabel mapPrincipal(MachLabel l) {
  switch (l) {
    case MachLabel::beta:
      return StepLabel::dB;
    case MachLabel::sub:
      return StepLabel::lsnd;
    case MachLabel::sk:
      return StepLabel::sk;
    case MachLabel::ss:
      return StepLabel::ss;
    default:
      throw std::logic_error("not a principal transition");
  }
}

// Full comparison on one terminating sample. Returns the number of principal
// steps, so the caller can decide whether stepwise tracking is worth it.
std::optional<std::uint64_t> compareVariant(SuiteResult& res, const SkRef& t, Variant var,
                                            Strategy strat, std::uint64_t fuel) {
  ++res.cases;
  EvalResult er = evaluate(t, strat, fuel, false, /*keepLabels=*/true);
  Machine m(var, t);
  std::vector<MachLabel> ml;
  RunOptions opts;
  opts.fuel = 4'000'000;
  RunStats rs = m.run(opts, &ml);
  if (!rs.halted || er.stats.fuelExhausted) {
    fail(res, std::string("termination disagreement on ") + printTree(t));
    return std::nullopt;
  }
  std::vector<StepLabel> mp;
  for (MachLabel l : ml)
    if (machPrincipal(l)) mp.push_back(mapPrincipal(l));
  if (mp != er.labels) {
    fail(res, std::string(var == Variant::MAD ? "mad" : "smad") + ": label sequences differ on " +
                  printTree(t));
    return std::nullopt;
  }
  SkRef mr = canonicalize(m.readback());
  SkRef cr = canonicalize(er.final);
  if (!structEqTree(mr, cr)) {
    fail(res, std::string(var == Variant::MAD ? "mad" : "smad") + ": final states differ on " +
                  printTree(t) + ": " + printTree(mr) + " vs " + printTree(cr));
    return std::nullopt;
  }
  return er.labels.size();
}

// Decoded machine state after every principal transition against the
// calculus trace, canonically.
void trackSteps(SuiteResult& res, const SkRef& t, Variant var, Strategy strat,
                std::uint64_t fuel) {
  ++res.cases;
  EvalResult er = evaluate(t, strat, fuel, /*keepTrace=*/true);
  Machine m(var, t);
  std::size_t k = 0;
  while (auto l = m.step()) {
    if (!machPrincipal(*l)) continue;
    if (k >= er.trace.size()) {
      fail(res, "machine took more principal transitions than the calculus on " + printTree(t));
      return;
    }
    SkRef got = canonicalize(m.readback());
    SkRef want = canonicalize(er.trace[k].term);
    if (!structEqTree(got, want)) {
      fail(res, std::string(machLabelName(*l)) + " step " + std::to_string(k) +
                    " decodes to " + printTree(got) + ", calculus has " + printTree(want) +
                    " on " + printTree(t));
      return;
    }
    ++k;
  }
  if (k != er.trace.size())
    fail(res, "machine stopped after " + std::to_string(k) + " of " +
                  std::to_string(er.trace.size()) + " principal steps on " + printTree(t));
}

}  // namespace

SuiteResult suiteBisim(std::uint64_t seed, unsigned wantTerminating, unsigned maxSize,
                       std::uint64_t fuel) {
  SuiteResult res{"bisim", 0, 0, {}};
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::vector<SkRef> fixed = {familyTerm(0), familyTerm(1), familyTerm(2), familyTerm(3)};
  unsigned terminating = 0, tracked = 0;
  std::uint64_t skipped = 0, attempts = 0;
  const std::uint64_t maxAttempts = static_cast<std::uint64_t>(wantTerminating) * 60;
  while (terminating < wantTerminating && attempts < maxAttempts) {
    SkRef t = attempts < fixed.size() ? fixed[attempts] : randomClosedTerm(rng, maxSize);
    ++attempts;

    // Fast termination probe; diverging samples are reported but not compared.
    Machine probe(Variant::MAD, t);
    RunOptions po;
    po.fuel = 2'000'000;
    RunStats pr = probe.run(po);
    if (!pr.halted || pr.beta + pr.sub > fuel) {
      ++skipped;
      continue;
    }

    auto nm = compareVariant(res, t, Variant::MAD, Strategy::Need, fuel);
    auto ns = compareVariant(res, t, Variant::SMAD, Strategy::SkNeed, fuel);
    if (!nm || !ns) continue;
    ++terminating;
    if (tracked < 150 && *nm <= 150 && *ns <= 150) {
      ++tracked;
      trackSteps(res, t, Variant::MAD, Strategy::Need, fuel);
      trackSteps(res, t, Variant::SMAD, Strategy::SkNeed, fuel);
    }
  }
  if (terminating < wantTerminating)
    fail(res, "only " + std::to_string(terminating) + " terminating samples, want " +
                  std::to_string(wantTerminating));
  note(res, std::to_string(terminating) + " terminating, " + std::to_string(skipped) +
                " diverging skipped, " + std::to_string(tracked) + " tracked stepwise");
  return res;
}

// ---------------------------------------------------------------------------
// Audit suite

namespace {

void boundsCheck(SuiteResult& res, const RunStats& r, std::uint64_t t0, Variant var,
                 const std::string& what) {
  ++res.cases;
  std::uint64_t subst = var == Variant::SMAD ? r.ss : r.sub;
  bool ok = r.sea2 <= r.beta && r.sea3 <= r.beta && subst <= 2 * r.beta + 1 &&
            (var == Variant::MAD || r.sk <= r.ss) && r.sea1 <= t0 * (subst + r.sea2 + 1);
  if (!ok) fail(res, "transition bounds violated on " + what);
}

// Runs with the per-transition state audit on; optionally also checks that
// the decoded term never changes across a search transition.
std::optional<RunStats> auditedRun(SuiteResult& res, const SkRef& t, Variant var,
                                   std::uint64_t fuel, bool transparency,
                                   const std::string& what) {
  ++res.cases;
  Machine m(var, t);
  try {
    m.auditState();
    SkRef prev = transparency ? m.readback() : nullptr;
    while (m.stats().transitions() < fuel) {
      auto l = m.step();
      if (!l) break;
      m.auditState();
      if (transparency) {
        SkRef cur = m.readback();
        if (!machPrincipal(*l) && !structEqTree(prev, cur)) {
          fail(res, std::string(machLabelName(*l)) + " changed the decoded state on " + what);
          return std::nullopt;
        }
        prev = std::move(cur);
      }
    }
  } catch (const std::exception& e) {
    fail(res, what + ": " + e.what());
    return std::nullopt;
  }
  return m.stats();
}

}  // namespace

SuiteResult suiteAudits(std::uint64_t seed, unsigned randomCases) {
  SuiteResult res{"audits", 0, 0, {}};

  for (unsigned n = 0; n <= 10; ++n) {
    SkRef t = familyTerm(n);
    auto rs = auditedRun(res, t, Variant::SMAD, 1'000'000, true, "smad family " + std::to_string(n));
    if (rs && rs->halted) boundsCheck(res, *rs, t->size, Variant::SMAD, "smad family " + std::to_string(n));
  }
  for (unsigned n = 0; n <= 8; ++n) {
    SkRef t = familyTerm(n);
    auto rs = auditedRun(res, t, Variant::MAD, 1'000'000, n <= 6, "mad family " + std::to_string(n));
    if (rs && rs->halted) boundsCheck(res, *rs, t->size, Variant::MAD, "mad family " + std::to_string(n));
  }
  // Counter bounds over the full benchmark range, without the audit overhead.
  for (unsigned n = 9; n <= 12; ++n) {
    SkRef t = familyTerm(n);
    Machine m(Variant::MAD, t);
    RunOptions opts;
    RunStats rs = m.run(opts);
    if (!rs.halted) {
      fail(res, "mad family " + std::to_string(n) + " did not halt");
      continue;
    }
    boundsCheck(res, rs, t->size, Variant::MAD, "mad family " + std::to_string(n));
  }

  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  for (unsigned i = 0; i < randomCases; ++i) {
    SkRef t = randomClosedTerm(rng, 15);
    for (Variant var : {Variant::MAD, Variant::SMAD}) {
      std::string what = std::string(var == Variant::MAD ? "mad" : "smad") + " random " +
                         std::to_string(i) + " " + printTree(t);
      auto rs = auditedRun(res, t, var, 200'000, true, what);
      if (rs && rs->halted) boundsCheck(res, *rs, t->size, var, what);
    }
  }
  return res;
}

std::vector<SuiteResult> runAllSuites(std::uint64_t seed) {
  std::vector<SuiteResult> all;
  all.push_back(suiteSkeleton(seed, 1000, 40));
  all.push_back(suiteDiamond(10));
  all.push_back(suiteDeterminism(seed + 1, 150, 12));
  all.push_back(suiteBisim(seed + 2, 500, 15, 10'000));
  all.push_back(suiteAudits(seed + 3, 40));
  return all;
}

}  // namespace skelmad
