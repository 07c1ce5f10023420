#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "skelmad/skterm.hpp"
#include "skelmad/term.hpp"

namespace skelmad {

// Linear-time skeleton extraction on term graphs. markSkeleton propagates
// mark tokens upward from variable occurrences: a token at a node marks the
// unmarked parent and climbs (one step), fans out over the occurrence list
// when the parent is an abstraction (also one step, the fan-out is part of
// it), and dies when the parent is already marked (one absorption step).
// The returned step count therefore equals the number of marked constructs,
// which whiteSize recounts independently by traversal.

// v must be a live parentless Abs with no marks under it. Marks v's skeleton
// and returns the number of propagation steps taken.
std::uint64_t markSkeleton(TermStore& store, NodeId v);

std::uint32_t whiteSize(const TermStore& store, NodeId v);

struct Flesh {
  DeclId var;
  NodeId body;
};
struct SkeletalDecomposition {
  NodeId skeleton;
  std::vector<Flesh> flesh;  // innermost first (left-to-right cut order)
};

// Consumes the marking left by markSkeleton: maximal unmarked non-variable
// subterms are detached and replaced by fresh p_<k> variables, unmarked
// variables stay in place, and all marks are cleared. In-place: the returned
// skeleton root is v itself.
SkeletalDecomposition split(TermStore& store, NodeId markedValue);

// Reference decomposition, defined by direct recursion on trees and entirely
// independent of the marking machinery. theta is the set of variables the
// skeleton must keep; subterms not touching theta become flesh, except bare
// variables which always stay.
struct TreeDecomposition {
  SkRef skeleton;
  std::vector<std::pair<std::string, SkRef>> flesh;
};
TreeDecomposition skdecTree(const SkRef& t, const std::set<std::string>& theta,
                            std::uint64_t& counter);
// Value entry point: skeleton of \x.t is \x.s where (s,F) = skdecTree(t,{x}).
TreeDecomposition skdecValueTree(const SkRef& v, std::uint64_t& counter);
TreeDecomposition skeldecOracle(const TermStore& store, NodeId t,
                                const std::set<std::string>& theta, std::uint64_t& counter);

// ---------------------------------------------------------------------------
// Reified marked terms. Used to enumerate every applicable rewrite at every
// position, for the diamond/termination tests and the check CLI; the
// production algorithm above follows one strategy and never materializes
// the propagation wrappers.

struct MTerm;
using MRef = std::shared_ptr<const MTerm>;

struct MTerm {
  enum Kind : std::uint8_t { Var, Abs, App, Up } kind;
  bool marked;  // Up nodes are never marked
  std::string name;
  MRef a, b;
};

MRef mkMVar(std::string name, bool marked);
MRef mkMAbs(std::string name, bool marked, MRef body);
MRef mkMApp(bool marked, MRef head, MRef arg);
MRef mkMUp(MRef sub);

// disc(v): the fully marked form the rewriting must reach (under one top Up).
MRef discTree(const SkRef& v);
// The initialization: \x.t becomes \x.Up(t), nothing marked.
MRef initMarked(const SkRef& v);
// Lifts a marked store term for comparison against discTree.
MRef markedStoreToMTerm(const TermStore& store, NodeId t);

// All one-step reducts at all positions, in a fixed deterministic order.
std::vector<MRef> algSteps(const MRef& m);

bool mtermEq(const MRef& a, const MRef& b);
std::string mtermKey(const MRef& m);  // stable serialization, usable as a set key
std::string mtermPrint(const MRef& m);
std::uint32_t mtermMarkCount(const MRef& m);
// Termination measure: (unmarked constructs, Up count), lexicographic.
std::pair<std::uint64_t, std::uint64_t> mtermMeasure(const MRef& m);

}  // namespace skelmad
