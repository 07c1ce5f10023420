#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "skelmad/skterm.hpp"
#include "skelmad/term.hpp"

namespace skelmad {

// Milner abstract demand machine and its skeletal variant. A state is
//   (chain, code, stack, env)
// over one shared term store. The environment is a doubly linked list of
// declarations, innermost first; every entry's content only references
// declarations to its right. The chain parks interrupted evaluations: each
// item holds the demanded occurrence, the stack and the env prefix that were
// active when the entry's content was promoted to code.
//
// Transitions (code shape / side condition):
//   sea1  App                      push argument, descend into the head
//   beta  Abs, stack nonempty      pop u, extend env with [x\u], O(1)
//   sea2  Var, entry not a value   park (stack, env prefix, occurrence),
//                                  evaluate the entry's content
//   sea3  Abs, stack empty,        store the value, restore the parked
//         chain nonempty           evaluation, splice the saved env prefix
//   sub   Var, value entry (MAD)   replace the occurrence by a fresh copy
//   sk    Var, value entry (SMAD)  split the entry into skeleton and flesh
//                                  in place; flesh entries go directly to
//                                  the entry's right, innermost first
//   ss    Var, skeletal entry      replace the occurrence by a fresh copy
//         (SMAD)                   of the skeleton
//
// A state is final when the code is a value and stack and chain are empty.

enum class Variant : std::uint8_t { MAD, SMAD };

enum class MachLabel : std::uint8_t { sea1, beta, sea2, sea3, sub, sk, ss };
const char* machLabelName(MachLabel l);
bool machPrincipal(MachLabel l);  // beta, sub, sk, ss

struct RunStats {
  std::uint64_t sea1 = 0, beta = 0, sea2 = 0, sea3 = 0;
  std::uint64_t sub = 0, sk = 0, ss = 0;
  std::uint64_t finalEnvLen = 0;
  std::uint64_t maxStateSize = 0;
  std::uint64_t wallNanos = 0;
  bool halted = false;
  bool fuelExhausted = false;
  std::uint64_t transitions() const { return sea1 + beta + sea2 + sea3 + sub + sk + ss; }
};

struct RunOptions {
  std::uint64_t fuel = 10'000'000;
  bool audit = false;  // full state invariant check after every transition
};

struct ChainItem {
  DeclId var = kNoDecl;
  NodeId varOcc = kNoNode;
  std::vector<NodeId> savedStack;
  DeclId segHead = kNoDecl;  // parked env prefix, empty when kNoDecl
  DeclId segTail = kNoDecl;
};

class Machine {
 public:
  // Loads a closed pure term into a fresh store. Throws std::invalid_argument
  // on open, impure or marked input.
  Machine(Variant variant, const SkRef& t);

  // One transition; nullopt on a final state.
  std::optional<MachLabel> step();
  bool finalState() const;

  RunStats run(const RunOptions& opts, std::vector<MachLabel>* labels = nullptr,
               const std::function<void(MachLabel)>& onStep = nullptr);

  // Decodes the full state back to a term.
  SkRef readback() const;

  // One-line "chain | code | stack | env" rendering for trace output.
  std::string describe() const;

  // Sum of the sizes of all term pieces in the state, tracked incrementally.
  std::uint64_t stateSize() const { return stateSize_; }
  std::uint64_t maxStateSize() const { return maxStateSize_; }
  std::uint64_t envLen() const;
  std::uint64_t initialSize() const { return initialSize_; }
  const RunStats& stats() const { return stats_; }

  const TermStore& store() const { return store_; }
  NodeId code() const { return code_; }

  // Throws std::logic_error with a description on any violated invariant.
  void auditState() const;

 private:
  void envPushFront(DeclId d);
  void insertAfter(DeclId a, DeclId d);
  SkRef foldEnvSeg(DeclId head, SkRef x) const;
  void bumpMax();

  Variant variant_;
  TermStore store_;
  NodeId code_ = kNoNode;
  std::vector<NodeId> stack_;  // back = top
  DeclId envHead_ = kNoDecl;
  std::vector<ChainItem> chain_;  // back = most recent
  std::uint64_t stateSize_ = 0;
  std::uint64_t maxStateSize_ = 0;
  std::uint64_t initialSize_ = 0;
  RunStats stats_;
};

}  // namespace skelmad
