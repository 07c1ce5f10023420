#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skelmad/skterm.hpp"

namespace skelmad {

// Small-step semantics of the two strategies on trees. Both are deterministic;
// a step either rewrites the unique redex or reports a normal form.
//
//   need:    dB    S<\x.t> u          ->  S<t[x\u]>
//            lsnd  E<x>[x\S<v>]       ->  S<E<v^a>[x\v]>
//   skneed:  dB    as above (S may contain skeletal entries)
//            sk    E<x>[x\S<v>]       ->  S<S'<E<x>[x\\v']>>   (v',S') = skdec(v)
//            ss    E<x>[x\\v]         ->  E<v^a>[x\\v]
//
// Substitution contexts floated out of an entry are renamed on the fly when
// their binders would capture a free variable of the surrounding term, and
// v^a copies rename every binder with a fresh _<k> suffix.

enum class StepLabel : std::uint8_t { dB, lsnd, sk, ss };
const char* labelName(StepLabel l);

enum class Strategy : std::uint8_t { Need, SkNeed };

struct StepResult {
  StepLabel label;
  SkRef term;
};

// One step, or nullopt on a normal form (answer, or a stuck open term).
// Throws std::invalid_argument if a Need step meets a skeletal substitution.
std::optional<StepResult> stepTree(const SkRef& t, Strategy strat, std::uint64_t& counter);
std::optional<StepResult> stepNeed(const SkRef& t, std::uint64_t& counter);
std::optional<StepResult> stepSkNeed(const SkRef& t, std::uint64_t& counter);

struct EvalStats {
  std::uint64_t db = 0, lsnd = 0, sk = 0, ss = 0;
  std::uint64_t inkSpace = 0;  // max term size along the trace, initial term included
  bool fuelExhausted = false;
  std::uint64_t steps() const { return db + lsnd + sk + ss; }
};

struct TraceEntry {
  StepLabel label;
  SkRef term;
};

struct EvalResult {
  SkRef final;
  EvalStats stats;
  std::vector<TraceEntry> trace;      // only when keepTrace
  std::vector<StepLabel> labels;      // only when keepLabels
};

// Runs the strategy to a normal form or until fuel steps were taken.
// Evaluation keeps its focus between steps, so a run costs time proportional
// to the rewriting work, not to steps times term depth.
EvalResult evaluate(const SkRef& t, Strategy strat, std::uint64_t fuel, bool keepTrace = false,
                    bool keepLabels = false);

// The size separation family:
//   I = \x.x   g = \y.\z. y I (y I) z   u_0 = I   u_{n+1} = g u_n
//   t_n = (\x. x I (x I)) u_n
// built with pairwise distinct binder names.
SkRef familyTerm(unsigned n);

// Oriented structural-equivalence normal form: substitutions are floated out
// of application frames and out of demanded-entry frames (never across other
// substitution frames, which would be a nonterminating swap), then binders
// are renamed canonically in traversal order. Two terms related by the
// machine/calculus correspondence canonicalize to structurally equal trees.
SkRef canonicalize(const SkRef& t);

// First _<k> suffix not occurring in t, so generated names stay fresh.
std::uint64_t initialFreshCounter(const SkRef& t);

// v with every binder renamed to base_<k>; free variables untouched.
SkRef freshCopy(const SkRef& v, std::uint64_t& counter);

}  // namespace skelmad
