#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace skelmad {

// Mutable term graphs for the abstract machines. Terms are trees of Var/Abs/App
// nodes with parent pointers, allocated in a TermStore arena. Binding is by
// VarDecl identity: an occurrence points at its declaration, never at a name.
// Explicit substitutions are not nodes; they live in VarDecl::sub, which is how
// the machines get O(1) variable lookup.

using NodeId = std::uint32_t;
using DeclId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;
inline constexpr DeclId kNoDecl = 0xffffffffu;

enum class NodeKind : std::uint8_t { Var, Abs, App };

// What a declaration currently means to the machine.
//   None    - bound by a live Abs node, free, or entry [x\t] with t not
//             yet a value
//   Sub     - environment entry [x\v] holding a value
//   SubSkel - skeletal environment entry [x\\v], v its own skeleton
//   Hole    - entry whose content is being evaluated (parked in the chain)
enum class SubKind : std::uint8_t { None, Sub, SubSkel, Hole };

struct TermNode {
  NodeKind kind = NodeKind::Var;
  bool mark = false;   // skeleton-marking episodes only; false at rest
  bool live = true;    // false once freed (slot sits on the free list)
  NodeId parent = kNoNode;
  DeclId decl = kNoDecl;  // Var: referenced decl; Abs: bound decl
  NodeId a = kNoNode;     // Abs: body; App: head
  NodeId b = kNoNode;     // App: argument
  // Var only: intrusive occurrence list of the binding Abs (valid while the
  // binder is a live Abs node; stale and unread once the binder is consumed).
  NodeId prevOcc = kNoNode;
  NodeId nextOcc = kNoNode;
  // Abs only: head of the occurrence list of its bound decl.
  NodeId occHead = kNoNode;
};

struct VarDecl {
  std::string origName;     // name as written in the source
  std::string displayName;  // unique name used for printing
  SubKind sub = SubKind::None;
  NodeId subTerm = kNoNode;  // Sub/SubSkel payload
  // Doubly-linked global environment (head = innermost/newest entry).
  DeclId prevEnv = kNoDecl;
  DeclId nextEnv = kNoDecl;
  // The Abs node binding this decl, while that node is alive.
  NodeId binder = kNoNode;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line, col;
};

class TermStore {
 public:
  // Node and decl accessors. Ids are never reused for decls; node slots are
  // recycled through a free list.
  TermNode& node(NodeId n) { return nodes_[n]; }
  const TermNode& node(NodeId n) const { return nodes_[n]; }
  VarDecl& decl(DeclId d) { return decls_[d]; }
  const VarDecl& decl(DeclId d) const { return decls_[d]; }

  DeclId mkDecl(const std::string& name);       // displayName = name
  DeclId mkFreshDecl(const std::string& base);  // displayName = base_<k>, k fresh

  NodeId mkVar(DeclId d);
  // Builds the Abs node and installs `occs` (every Var node of `d` inside
  // `body`, in list order) as its occurrence list.
  NodeId mkAbs(DeclId d, NodeId body, const std::vector<NodeId>& occs);
  NodeId mkApp(NodeId head, NodeId arg);

  // Tombstones one node. Var nodes are unlinked from their occurrence list
  // when their binder is still a live Abs.
  void freeNode(NodeId n);

  std::size_t liveNodeCount() const { return liveNodes_; }
  std::size_t declCount() const { return decls_.size(); }

  // Occurrence-list surgery (binder must be a live Abs).
  void occListPush(NodeId absNode, NodeId varNode);
  void occListRemove(NodeId varNode);
  std::vector<NodeId> occurrences(NodeId absNode) const;

  std::uint64_t freshCounter() const { return counter_; }

  // One decl per free name, shared store-wide, so occurrences of the same
  // free variable compare equal by identity.
  DeclId internFreeDecl(const std::string& name);

 private:
  NodeId alloc();
  // deques: node/decl references stay valid across allocation
  std::deque<TermNode> nodes_;
  std::deque<VarDecl> decls_;
  std::vector<NodeId> freeList_;
  std::unordered_set<std::string> usedNames_;
  std::unordered_map<std::string, DeclId> freeDecls_;
  std::uint64_t counter_ = 1;
  std::size_t liveNodes_ = 0;
};

// Parsing and printing. Grammar:
//   term ::= lam | app        lam ::= ('\' | 'λ') ident '.' term
//   app  ::= atom+            atom ::= ident | '(' term ')'
// '#' starts a line comment. Abstraction bodies extend as far right as
// possible; application associates left. Free variables are allowed and share
// one decl per name. Bound names are made pairwise distinct on collision by
// appending _<k> from the store counter, so every parsed term is well-bound.
NodeId parse(TermStore& store, const std::string& src);

// Inverse of parse up to alpha: parse(print(t)) is alphaEq to t.
std::string print(const TermStore& store, NodeId t);

// Structural comparison up to renaming of bound variables. Free variables
// must match by decl identity within one store, by displayName across stores.
bool alphaEq(const TermStore& sa, NodeId a, const TermStore& sb, NodeId b);
inline bool alphaEq(const TermStore& s, NodeId a, NodeId b) {
  return alphaEq(s, a, s, b);
}

std::uint32_t termSize(const TermStore& store, NodeId t);

// Copies the subtree rooted at t inside the same store. Decls bound within t
// are duplicated; free ones are shared (their occurrence count just grows).
// `freshen` renames every duplicated binder to origName_<k>; a plain clone
// keeps display names as they are.
NodeId copyTerm(TermStore& store, NodeId t, bool freshen);
inline NodeId rename(TermStore& store, NodeId t) { return copyTerm(store, t, true); }
inline NodeId cloneTerm(TermStore& store, NodeId t) { return copyTerm(store, t, false); }

// Decls that are referenced under t but not bound by an Abs inside t.
std::vector<DeclId> freeDecls(const TermStore& store, NodeId t);
bool isClosed(const TermStore& store, NodeId t);

// Consistency audit of the subtree at t: parent/child agreement, occurrence
// lists matching the reachable occurrences of every live Abs, no marks when
// `expectUnmarked`. Throws std::logic_error with a description on failure.
void auditTerm(const TermStore& store, NodeId t, bool expectUnmarked = true);

}  // namespace skelmad
