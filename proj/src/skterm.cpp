#include "skelmad/skterm.hpp"

#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace skelmad {

namespace {

SkRef mk(SkKind k, std::string name, SkRef a, SkRef b) {
  auto t = std::make_shared<SkTerm>();
  t->kind = k;
  t->name = std::move(name);
  t->size = 1 + (a ? a->size : 0) + (b ? b->size : 0);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

}  // namespace

SkRef mkVarT(std::string name) { return mk(SkKind::Var, std::move(name), nullptr, nullptr); }
SkRef mkAbsT(std::string name, SkRef body) {
  return mk(SkKind::Abs, std::move(name), std::move(body), nullptr);
}
SkRef mkAppT(SkRef head, SkRef arg) {
  return mk(SkKind::App, {}, std::move(head), std::move(arg));
}
SkRef mkEST(std::string name, SkRef body, SkRef payload) {
  return mk(SkKind::ES, std::move(name), std::move(body), std::move(payload));
}
SkRef mkSkEST(std::string name, SkRef body, SkRef value) {
  return mk(SkKind::SkES, std::move(name), std::move(body), std::move(value));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void printTop(const SkRef& t, std::string& out);

void printAtomLevel(const SkRef& t, std::string& out) {
  switch (t->kind) {
    case SkKind::Var:
      out += t->name;
      return;
    case SkKind::ES:
    case SkKind::SkES:
      printAtomLevel(t->a, out);
      out += '[';
      out += t->name;
      out += t->kind == SkKind::ES ? "\\" : "\\\\";
      // keep the separator's backslashes distinct from a lambda payload's
      if (t->b->kind == SkKind::Abs) out += ' ';
      printTop(t->b, out);
      out += ']';
      return;
    default:
      out += '(';
      printTop(t, out);
      out += ')';
      return;
  }
}

void printAppLevel(const SkRef& t, std::string& out) {
  if (t->kind == SkKind::App) {
    printAppLevel(t->a, out);
    out += ' ';
    printAtomLevel(t->b, out);
    return;
  }
  printAtomLevel(t, out);
}

void printTop(const SkRef& t, std::string& out) {
  if (t->kind == SkKind::Abs) {
    out += '\\';
    out += t->name;
    out += ". ";
    printTop(t->a, out);
    return;
  }
  printAppLevel(t, out);
}

}  // namespace

std::string printTree(const SkRef& t) {
  std::string out;
  printTop(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Predicates, equality, free names

bool treeIsPure(const SkRef& t) {
  std::vector<const SkTerm*> todo{t.get()};
  while (!todo.empty()) {
    const SkTerm* cur = todo.back();
    todo.pop_back();
    if (cur->kind == SkKind::ES || cur->kind == SkKind::SkES) return false;
    if (cur->a) todo.push_back(cur->a.get());
    if (cur->b) todo.push_back(cur->b.get());
  }
  return true;
}

bool isValueTree(const SkRef& t) { return t->kind == SkKind::Abs; }

bool structEqTree(const SkRef& a, const SkRef& b) {
  std::vector<std::pair<const SkTerm*, const SkTerm*>> todo{{a.get(), b.get()}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    if (x == y) continue;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->size != y->size || x->name != y->name) return false;
    todo.emplace_back(x->a.get(), y->a.get());
    todo.emplace_back(x->b.get(), y->b.get());
  }
  return true;
}

namespace {

// Scope discipline shared by alphaEqTree: binders get levels, free names
// compare literally.
struct AlphaScope {
  std::unordered_map<std::string, std::vector<int>> levels;
  int depth = 0;
  void push(const std::string& n) { levels[n].push_back(depth++); }
  void pop(const std::string& n) {
    levels[n].pop_back();
  }
  int lookup(const std::string& n) const {
    auto it = levels.find(n);
    if (it == levels.end() || it->second.empty()) return -1;
    return it->second.back();
  }
};

bool alphaEqRec(const SkRef& a, const SkRef& b, AlphaScope& sa, AlphaScope& sb) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SkKind::Var: {
      int la = sa.lookup(a->name);
      int lb = sb.lookup(b->name);
      if (la != lb) return false;
      return la >= 0 || a->name == b->name;
    }
    case SkKind::Abs: {
      sa.push(a->name);
      sb.push(b->name);
      bool ok = alphaEqRec(a->a, b->a, sa, sb);
      sa.pop(a->name);
      sb.pop(b->name);
      --sa.depth;
      --sb.depth;
      return ok;
    }
    case SkKind::App:
      return alphaEqRec(a->a, b->a, sa, sb) && alphaEqRec(a->b, b->b, sa, sb);
    case SkKind::ES:
    case SkKind::SkES: {
      // payload first (outside the binder), then the body under it
      if (!alphaEqRec(a->b, b->b, sa, sb)) return false;
      sa.push(a->name);
      sb.push(b->name);
      bool ok = alphaEqRec(a->a, b->a, sa, sb);
      sa.pop(a->name);
      sb.pop(b->name);
      --sa.depth;
      --sb.depth;
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alphaEqTree(const SkRef& a, const SkRef& b) {
  if (a->size != b->size) return false;
  AlphaScope sa, sb;
  return alphaEqRec(a, b, sa, sb);
}

std::set<std::string> freeNamesTree(const SkRef& t) {
  std::set<std::string> out;
  // iterative scope walk: Enter processes a node, Exit pops a binder
  struct Item {
    const SkTerm* node;
    const std::string* popName;
  };
  std::unordered_map<std::string, int> shadow;
  std::vector<Item> todo{{t.get(), nullptr}};
  while (!todo.empty()) {
    Item it = todo.back();
    todo.pop_back();
    if (!it.node) {
      --shadow[*it.popName];
      continue;
    }
    const SkTerm* n = it.node;
    switch (n->kind) {
      case SkKind::Var:
        if (shadow[n->name] == 0) out.insert(n->name);
        break;
      case SkKind::Abs:
        ++shadow[n->name];
        todo.push_back({nullptr, &n->name});
        todo.push_back({n->a.get(), nullptr});
        break;
      case SkKind::App:
        todo.push_back({n->b.get(), nullptr});
        todo.push_back({n->a.get(), nullptr});
        break;
      case SkKind::ES:
      case SkKind::SkES:
        todo.push_back({n->b.get(), nullptr});  // payload: binder not in scope
        ++shadow[n->name];
        todo.push_back({nullptr, &n->name});
        todo.push_back({n->a.get(), nullptr});
        break;
    }
  }
  return out;
}

bool nameFreeIn(const SkRef& t, const std::string& name) {
  struct Item {
    const SkTerm* node;
    bool pop;
  };
  int shadow = 0;
  std::vector<Item> todo{{t.get(), false}};
  while (!todo.empty()) {
    Item it = todo.back();
    todo.pop_back();
    if (it.pop) {
      --shadow;
      continue;
    }
    const SkTerm* n = it.node;
    switch (n->kind) {
      case SkKind::Var:
        if (n->name == name && shadow == 0) return true;
        break;
      case SkKind::Abs:
        if (n->name == name) ++shadow, todo.push_back({nullptr, true});
        todo.push_back({n->a.get(), false});
        break;
      case SkKind::App:
        todo.push_back({n->b.get(), false});
        todo.push_back({n->a.get(), false});
        break;
      case SkKind::ES:
      case SkKind::SkES:
        // payload sits outside the binder: queue it below the pop marker
        todo.push_back({n->b.get(), false});
        if (n->name == name) {
          ++shadow;
          todo.push_back({nullptr, true});
        }
        todo.push_back({n->a.get(), false});
        break;
    }
  }
  return false;
}

SkRef substFreeTree(const SkRef& t, const std::map<std::string, SkRef>& subst) {
  std::unordered_map<std::string, int> shadow;
  // recursive worker; substitution targets are shallow in practice
  struct Rec {
    const std::map<std::string, SkRef>& subst;
    std::unordered_map<std::string, int>& shadow;
    SkRef run(const SkRef& n) {
      switch (n->kind) {
        case SkKind::Var: {
          auto it = subst.find(n->name);
          if (it != subst.end() && shadow[n->name] == 0) return it->second;
          return n;
        }
        case SkKind::Abs: {
          ++shadow[n->name];
          SkRef body = run(n->a);
          --shadow[n->name];
          if (body == n->a) return n;
          return mkAbsT(n->name, body);
        }
        case SkKind::App: {
          SkRef h = run(n->a);
          SkRef a = run(n->b);
          if (h == n->a && a == n->b) return n;
          return mkAppT(h, a);
        }
        case SkKind::ES:
        case SkKind::SkES: {
          SkRef payload = run(n->b);
          ++shadow[n->name];
          SkRef body = run(n->a);
          --shadow[n->name];
          if (body == n->a && payload == n->b) return n;
          return n->kind == SkKind::ES ? mkEST(n->name, body, payload)
                                       : mkSkEST(n->name, body, payload);
        }
      }
      throw std::logic_error("substFreeTree: bad kind");
    }
  } rec{subst, shadow};
  return rec.run(t);
}

// ---------------------------------------------------------------------------
// Conversions

namespace {

struct TreeToStore {
  TermStore& st;
  std::vector<std::pair<std::string, DeclId>> scope;
  std::unordered_map<DeclId, std::vector<NodeId>> occAcc;
  std::unordered_set<std::string> boundNames;

  NodeId run(const SkRef& t) {
    switch (t->kind) {
      case SkKind::Var: {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
          if (it->first == t->name) {
            NodeId v = st.mkVar(it->second);
            occAcc[it->second].push_back(v);
            return v;
          }
        }
        return st.mkVar(st.internFreeDecl(t->name));
      }
      case SkKind::Abs: {
        DeclId d = boundNames.count(t->name) ? st.mkFreshDecl(t->name) : st.mkDecl(t->name);
        boundNames.insert(st.decl(d).displayName);
        occAcc[d];
        scope.emplace_back(t->name, d);
        NodeId body = run(t->a);
        scope.pop_back();
        return st.mkAbs(d, body, occAcc[d]);
      }
      case SkKind::App: {
        NodeId h = run(t->a);
        NodeId a = run(t->b);
        return st.mkApp(h, a);
      }
      default:
        throw std::invalid_argument("treeToStore: term contains explicit substitutions");
    }
  }
};

}  // namespace

NodeId treeToStore(TermStore& store, const SkRef& t) {
  TreeToStore conv{store, {}, {}, {}};
  return conv.run(t);
}

SkRef storeToTree(const TermStore& store, NodeId t) {
  const TermNode& n = store.node(t);
  switch (n.kind) {
    case NodeKind::Var:
      return mkVarT(store.decl(n.decl).displayName);
    case NodeKind::Abs:
      return mkAbsT(store.decl(n.decl).displayName, storeToTree(store, n.a));
    case NodeKind::App:
      return mkAppT(storeToTree(store, n.a), storeToTree(store, n.b));
  }
  throw std::logic_error("storeToTree: bad node kind");
}

SkRef parseTree(const std::string& src) {
  TermStore store;
  return storeToTree(store, parse(store, src));
}

void drainTree(SkRef&& t) {
  std::vector<SkRef> todo;
  todo.push_back(std::move(t));
  while (!todo.empty()) {
    SkRef cur = std::move(todo.back());
    todo.pop_back();
    if (!cur) continue;
    if (cur.use_count() == 1) {
      auto* m = const_cast<SkTerm*>(cur.get());
      if (m->a) todo.push_back(std::move(m->a));
      if (m->b) todo.push_back(std::move(m->b));
    }
  }
}

}  // namespace skelmad
