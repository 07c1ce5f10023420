#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "skelmad/term.hpp"

namespace skelmad {

// Immutable shared trees for the calculus side. Rewriting rebuilds only the
// spine from the redex to the root and shares everything else, so a step
// costs O(depth), and the cached size field makes term size an O(1) read.
// Binding here is by name, with the usual nearest-binder scoping.

enum class SkKind : std::uint8_t { Var, Abs, App, ES, SkES };

struct SkTerm;
using SkRef = std::shared_ptr<const SkTerm>;

struct SkTerm {
  SkKind kind;
  std::string name;  // Var: the variable; Abs/ES/SkES: the binder
  SkRef a;           // Abs: body; App: head; ES/SkES: body
  SkRef b;           // App: argument; ES: payload term; SkES: payload value
  std::uint32_t size;
};

SkRef mkVarT(std::string name);
SkRef mkAbsT(std::string name, SkRef body);
SkRef mkAppT(SkRef head, SkRef arg);
SkRef mkEST(std::string name, SkRef body, SkRef payload);   // body[name\payload]
SkRef mkSkEST(std::string name, SkRef body, SkRef value);   // body[name\\value]

// Same grammar as print() for the pure fragment; explicit substitutions are
// shown as postfix [x\t] and [x\\v] binding tighter than application.
std::string printTree(const SkRef& t);

bool treeIsPure(const SkRef& t);
bool isValueTree(const SkRef& t);  // abstraction

// Exact structural equality, names included.
bool structEqTree(const SkRef& a, const SkRef& b);
// Equality up to renaming of bound variables; free names compare by name.
bool alphaEqTree(const SkRef& a, const SkRef& b);

std::set<std::string> freeNamesTree(const SkRef& t);
bool nameFreeIn(const SkRef& t, const std::string& name);

// Capture-respecting substitution of free variables by name (replacement
// stops under a binder of the same name). Callers are responsible for the
// replacements not being capturable at the use sites.
SkRef substFreeTree(const SkRef& t, const std::map<std::string, SkRef>& subst);

// Pure trees only. Binders are well-bounded exactly like parse().
NodeId treeToStore(TermStore& store, const SkRef& t);
SkRef storeToTree(const TermStore& store, NodeId t);
SkRef parseTree(const std::string& src);

// Iteratively releases a tree whose nesting may be too deep for the default
// recursive shared_ptr teardown (the call-by-need family reaches ~10^5).
void drainTree(SkRef&& t);

}  // namespace skelmad
