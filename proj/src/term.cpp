#include "skelmad/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace skelmad {

ParseError::ParseError(const std::string& msg, int line_, int col_)
    : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
      line(line_),
      col(col_) {}

NodeId TermStore::alloc() {
  ++liveNodes_;
  if (!freeList_.empty()) {
    NodeId n = freeList_.back();
    freeList_.pop_back();
    nodes_[n] = TermNode{};
    return n;
  }
  nodes_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

DeclId TermStore::mkDecl(const std::string& name) {
  usedNames_.insert(name);
  decls_.push_back(VarDecl{name, name, SubKind::None, kNoNode, kNoDecl, kNoDecl, kNoNode});
  return static_cast<DeclId>(decls_.size() - 1);
}

DeclId TermStore::mkFreshDecl(const std::string& base) {
  std::string candidate;
  do {
    candidate = base + "_" + std::to_string(counter_++);
  } while (usedNames_.count(candidate));
  usedNames_.insert(candidate);
  decls_.push_back(VarDecl{base, candidate, SubKind::None, kNoNode, kNoDecl, kNoDecl, kNoNode});
  return static_cast<DeclId>(decls_.size() - 1);
}

DeclId TermStore::internFreeDecl(const std::string& name) {
  auto it = freeDecls_.find(name);
  if (it != freeDecls_.end()) return it->second;
  DeclId d = mkDecl(name);
  freeDecls_.emplace(name, d);
  return d;
}

NodeId TermStore::mkVar(DeclId d) {
  NodeId n = alloc();
  nodes_[n].kind = NodeKind::Var;
  nodes_[n].decl = d;
  return n;
}

NodeId TermStore::mkAbs(DeclId d, NodeId body, const std::vector<NodeId>& occs) {
  NodeId n = alloc();
  nodes_[n].kind = NodeKind::Abs;
  nodes_[n].decl = d;
  nodes_[n].a = body;
  nodes_[body].parent = n;
  decls_[d].binder = n;
  NodeId prev = kNoNode;
  for (NodeId occ : occs) {
    if (prev == kNoNode)
      nodes_[n].occHead = occ;
    else
      nodes_[prev].nextOcc = occ;
    nodes_[occ].prevOcc = prev;
    nodes_[occ].nextOcc = kNoNode;
    prev = occ;
  }
  return n;
}

NodeId TermStore::mkApp(NodeId head, NodeId arg) {
  NodeId n = alloc();
  nodes_[n].kind = NodeKind::App;
  nodes_[n].a = head;
  nodes_[n].b = arg;
  nodes_[head].parent = n;
  nodes_[arg].parent = n;
  return n;
}

void TermStore::occListPush(NodeId absNode, NodeId varNode) {
  TermNode& abs = nodes_[absNode];
  nodes_[varNode].prevOcc = kNoNode;
  nodes_[varNode].nextOcc = abs.occHead;
  if (abs.occHead != kNoNode) nodes_[abs.occHead].prevOcc = varNode;
  abs.occHead = varNode;
}

void TermStore::occListRemove(NodeId varNode) {
  TermNode& v = nodes_[varNode];
  NodeId binder = decls_[v.decl].binder;
  if (binder == kNoNode) return;  // env-bound or free: no list to maintain
  if (v.prevOcc != kNoNode)
    nodes_[v.prevOcc].nextOcc = v.nextOcc;
  else
    nodes_[binder].occHead = v.nextOcc;
  if (v.nextOcc != kNoNode) nodes_[v.nextOcc].prevOcc = v.prevOcc;
  v.prevOcc = v.nextOcc = kNoNode;
}

void TermStore::freeNode(NodeId n) {
  TermNode& tn = nodes_[n];
  if (!tn.live) throw std::logic_error("freeNode: double free");
  if (tn.kind == NodeKind::Var) occListRemove(n);
  tn.live = false;
  --liveNodes_;
  freeList_.push_back(n);
}

std::vector<NodeId> TermStore::occurrences(NodeId absNode) const {
  std::vector<NodeId> out;
  for (NodeId o = nodes_[absNode].occHead; o != kNoNode; o = nodes_[o].nextOcc) out.push_back(o);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { Lambda, Dot, LParen, RParen, Ident, End } kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;
  Token cur;

  explicit Lexer(const std::string& s) : src(s) { next(); }

  void advance(char c) {
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  static bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool identCont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  void next() {
    for (;;) {
      while (pos < src.size() &&
             (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\r' || src[pos] == '\n'))
        advance(src[pos]);
      if (pos < src.size() && src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') advance(src[pos]);
        continue;
      }
      break;
    }
    cur.line = line;
    cur.col = col;
    if (pos >= src.size()) {
      cur.kind = Token::End;
      return;
    }
    char c = src[pos];
    if (c == '\\') {
      advance(c);
      cur.kind = Token::Lambda;
      return;
    }
    // UTF-8 lambda
    if (static_cast<unsigned char>(c) == 0xce && pos + 1 < src.size() &&
        static_cast<unsigned char>(src[pos + 1]) == 0xbb) {
      advance(c);
      advance(src[pos]);
      cur.kind = Token::Lambda;
      return;
    }
    if (c == '.') {
      advance(c);
      cur.kind = Token::Dot;
      return;
    }
    if (c == '(') {
      advance(c);
      cur.kind = Token::LParen;
      return;
    }
    if (c == ')') {
      advance(c);
      cur.kind = Token::RParen;
      return;
    }
    if (identStart(c)) {
      std::string text;
      while (pos < src.size() && identCont(src[pos])) {
        text.push_back(src[pos]);
        advance(src[pos]);
      }
      cur.kind = Token::Ident;
      cur.text = std::move(text);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
};

struct Parser {
  TermStore& st;
  Lexer lex;
  std::vector<std::pair<std::string, DeclId>> scope;  // source name -> decl
  std::unordered_map<DeclId, std::vector<NodeId>> occAcc;
  std::unordered_set<std::string> boundNames;

  Parser(TermStore& s, const std::string& src) : st(s), lex(src) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lex.cur.line, lex.cur.col); }

  NodeId term() {
    if (lex.cur.kind == Token::Lambda) {
      lex.next();
      if (lex.cur.kind != Token::Ident) fail("expected binder after lambda");
      std::string name = lex.cur.text;
      lex.next();
      if (lex.cur.kind != Token::Dot) fail("expected '.' after binder");
      lex.next();
      DeclId d = boundNames.count(name) ? st.mkFreshDecl(name) : st.mkDecl(name);
      boundNames.insert(st.decl(d).displayName);
      occAcc[d];  // ensure the slot exists even with zero occurrences
      scope.emplace_back(name, d);
      NodeId body = term();
      scope.pop_back();
      return st.mkAbs(d, body, occAcc[d]);
    }
    return app();
  }

  NodeId app() {
    NodeId t = atom(true);
    while (lex.cur.kind == Token::Ident || lex.cur.kind == Token::LParen)
      t = st.mkApp(t, atom(false));
    return t;
  }

  NodeId atom(bool first) {
    if (lex.cur.kind == Token::Ident) {
      std::string name = lex.cur.text;
      lex.next();
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->first == name) {
          NodeId v = st.mkVar(it->second);
          occAcc[it->second].push_back(v);
          return v;
        }
      }
      return st.mkVar(st.internFreeDecl(name));
    }
    if (lex.cur.kind == Token::LParen) {
      lex.next();
      NodeId t = term();
      if (lex.cur.kind != Token::RParen) fail("expected ')'");
      lex.next();
      return t;
    }
    fail(first ? "expected a term" : "expected an atom");
  }
};

}  // namespace

NodeId parse(TermStore& store, const std::string& src) {
  Parser p(store, src);
  NodeId t = p.term();
  if (p.lex.cur.kind != Token::End) p.fail("trailing input after term");
  return t;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void printAtom(const TermStore& st, NodeId n, std::string& out);

void printTop(const TermStore& st, NodeId n, std::string& out) {
  const TermNode& t = st.node(n);
  if (t.kind == NodeKind::Abs) {
    out += '\\';
    out += st.decl(t.decl).displayName;
    out += ". ";
    printTop(st, t.a, out);
    return;
  }
  if (t.kind == NodeKind::App) {
    // head position: further apps stay bare, abstractions need parens
    if (st.node(t.a).kind == NodeKind::Abs) {
      out += '(';
      printTop(st, t.a, out);
      out += ')';
    } else {
      printTop(st, t.a, out);
    }
    out += ' ';
    printAtom(st, t.b, out);
    return;
  }
  out += st.decl(t.decl).displayName;
}

void printAtom(const TermStore& st, NodeId n, std::string& out) {
  const TermNode& t = st.node(n);
  if (t.kind == NodeKind::Var) {
    out += st.decl(t.decl).displayName;
    return;
  }
  out += '(';
  printTop(st, n, out);
  out += ')';
}

}  // namespace

std::string print(const TermStore& store, NodeId t) {
  std::string out;
  printTop(store, t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Comparison, size, copies

namespace {

bool alphaEqRec(const TermStore& sa, NodeId a, const TermStore& sb, NodeId b,
                std::unordered_map<DeclId, DeclId>& ab, std::unordered_map<DeclId, DeclId>& ba) {
  const TermNode& na = sa.node(a);
  const TermNode& nb = sb.node(b);
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case NodeKind::Var: {
      auto it = ab.find(na.decl);
      if (it != ab.end()) return it->second == nb.decl;
      if (ba.count(nb.decl)) return false;  // bound on one side only
      if (&sa == &sb) return na.decl == nb.decl;
      return sa.decl(na.decl).displayName == sb.decl(nb.decl).displayName;
    }
    case NodeKind::Abs: {
      auto savedAb = ab.find(na.decl) != ab.end() ? std::optional(ab[na.decl]) : std::nullopt;
      auto savedBa = ba.find(nb.decl) != ba.end() ? std::optional(ba[nb.decl]) : std::nullopt;
      ab[na.decl] = nb.decl;
      ba[nb.decl] = na.decl;
      bool ok = alphaEqRec(sa, na.a, sb, nb.a, ab, ba);
      if (savedAb)
        ab[na.decl] = *savedAb;
      else
        ab.erase(na.decl);
      if (savedBa)
        ba[nb.decl] = *savedBa;
      else
        ba.erase(nb.decl);
      return ok;
    }
    case NodeKind::App:
      return alphaEqRec(sa, na.a, sb, nb.a, ab, ba) && alphaEqRec(sa, na.b, sb, nb.b, ab, ba);
  }
  return false;
}

}  // namespace

bool alphaEq(const TermStore& sa, NodeId a, const TermStore& sb, NodeId b) {
  std::unordered_map<DeclId, DeclId> ab, ba;
  return alphaEqRec(sa, a, sb, b, ab, ba);
}

std::uint32_t termSize(const TermStore& store, NodeId t) {
  std::uint32_t n = 0;
  std::vector<NodeId> todo{t};
  while (!todo.empty()) {
    NodeId cur = todo.back();
    todo.pop_back();
    ++n;
    const TermNode& tn = store.node(cur);
    if (tn.kind == NodeKind::Abs) todo.push_back(tn.a);
    if (tn.kind == NodeKind::App) {
      todo.push_back(tn.a);
      todo.push_back(tn.b);
    }
  }
  return n;
}

namespace {

struct Copier {
  TermStore& st;
  bool freshen;
  std::unordered_map<DeclId, DeclId> bound;
  std::unordered_map<DeclId, std::vector<NodeId>> occAcc;

  NodeId run(NodeId n) {
    const TermNode tn = st.node(n);  // by value: mk* may reallocate the arena
    switch (tn.kind) {
      case NodeKind::Var: {
        auto it = bound.find(tn.decl);
        if (it != bound.end()) {
          NodeId v = st.mkVar(it->second);
          occAcc[it->second].push_back(v);
          return v;
        }
        NodeId v = st.mkVar(tn.decl);
        // Still bound by an Abs outside the copied region: join its list.
        NodeId binder = st.decl(tn.decl).binder;
        if (binder != kNoNode) st.occListPush(binder, v);
        return v;
      }
      case NodeKind::Abs: {
        // copy out: mkDecl below may reallocate the decl arena
        std::string origName = st.decl(tn.decl).origName;
        std::string displayName = st.decl(tn.decl).displayName;
        DeclId d = freshen ? st.mkFreshDecl(origName) : st.mkDecl(displayName);
        bound[tn.decl] = d;
        occAcc[d];
        NodeId body = run(tn.a);
        return st.mkAbs(d, body, occAcc[d]);
      }
      case NodeKind::App: {
        NodeId h = run(tn.a);
        NodeId a = run(tn.b);
        return st.mkApp(h, a);
      }
    }
    throw std::logic_error("copyTerm: bad node kind");
  }
};

}  // namespace

NodeId copyTerm(TermStore& store, NodeId t, bool freshen) {
  Copier c{store, freshen, {}, {}};
  return c.run(t);
}

std::vector<DeclId> freeDecls(const TermStore& store, NodeId t) {
  std::unordered_set<DeclId> boundHere;
  std::vector<DeclId> order;
  std::unordered_set<DeclId> seen;
  // collect binders first, then occurrences in traversal order
  std::vector<NodeId> todo{t};
  while (!todo.empty()) {
    NodeId cur = todo.back();
    todo.pop_back();
    const TermNode& tn = store.node(cur);
    if (tn.kind == NodeKind::Abs) {
      boundHere.insert(tn.decl);
      todo.push_back(tn.a);
    } else if (tn.kind == NodeKind::App) {
      todo.push_back(tn.b);
      todo.push_back(tn.a);
    }
  }
  std::vector<NodeId> walk{t};
  while (!walk.empty()) {
    NodeId cur = walk.back();
    walk.pop_back();
    const TermNode& tn = store.node(cur);
    if (tn.kind == NodeKind::Var) {
      if (!boundHere.count(tn.decl) && seen.insert(tn.decl).second) order.push_back(tn.decl);
    } else if (tn.kind == NodeKind::Abs) {
      walk.push_back(tn.a);
    } else {
      walk.push_back(tn.b);
      walk.push_back(tn.a);
    }
  }
  return order;
}

bool isClosed(const TermStore& store, NodeId t) { return freeDecls(store, t).empty(); }

// ---------------------------------------------------------------------------
// Audit

namespace {

[[noreturn]] void auditFail(const std::string& what) {
  throw std::logic_error("term audit: " + what);
}

void auditRec(const TermStore& st, NodeId n, const std::unordered_set<DeclId>& absInTree,
              std::unordered_set<DeclId>& inScope,
              std::unordered_map<DeclId, std::unordered_set<NodeId>>& found, bool expectUnmarked) {
  const TermNode& tn = st.node(n);
  if (!tn.live) auditFail("dead node reachable");
  if (expectUnmarked && tn.mark) auditFail("marked node outside a marking episode");
  switch (tn.kind) {
    case NodeKind::Var: {
      if (tn.decl == kNoDecl) auditFail("var without decl");
      if (absInTree.count(tn.decl) && !inScope.count(tn.decl))
        auditFail("occurrence of " + st.decl(tn.decl).displayName + " outside its binder's body");
      if (absInTree.count(tn.decl)) found[tn.decl].insert(n);
      break;
    }
    case NodeKind::Abs: {
      if (st.decl(tn.decl).binder != n) auditFail("abs decl does not point back at its binder");
      if (st.node(tn.a).parent != n) auditFail("abs body parent mismatch");
      inScope.insert(tn.decl);
      auditRec(st, tn.a, absInTree, inScope, found, expectUnmarked);
      inScope.erase(tn.decl);
      break;
    }
    case NodeKind::App: {
      if (st.node(tn.a).parent != n || st.node(tn.b).parent != n)
        auditFail("app child parent mismatch");
      auditRec(st, tn.a, absInTree, inScope, found, expectUnmarked);
      auditRec(st, tn.b, absInTree, inScope, found, expectUnmarked);
      break;
    }
  }
}

}  // namespace

void auditTerm(const TermStore& store, NodeId t, bool expectUnmarked) {
  std::unordered_set<DeclId> absDecls;
  std::unordered_map<DeclId, NodeId> absNode;
  std::vector<NodeId> todo{t};
  while (!todo.empty()) {
    NodeId cur = todo.back();
    todo.pop_back();
    const TermNode& tn = store.node(cur);
    if (tn.kind == NodeKind::Abs) {
      if (!absDecls.insert(tn.decl).second) auditFail("two abs nodes bind one decl");
      absNode[tn.decl] = cur;
      todo.push_back(tn.a);
    } else if (tn.kind == NodeKind::App) {
      todo.push_back(tn.a);
      todo.push_back(tn.b);
    }
  }
  std::unordered_set<DeclId> inScope;
  std::unordered_map<DeclId, std::unordered_set<NodeId>> found;
  auditRec(store, t, absDecls, inScope, found, expectUnmarked);
  for (DeclId d : absDecls) {
    auto occs = store.occurrences(absNode[d]);
    std::unordered_set<NodeId> listed(occs.begin(), occs.end());
    if (occs.size() != listed.size()) auditFail("occurrence list has duplicates");
    // doubly-linked integrity
    NodeId prev = kNoNode;
    for (NodeId o : occs) {
      if (store.node(o).prevOcc != prev) auditFail("occurrence list prev link broken");
      if (store.node(o).decl != d) auditFail("occurrence list holds foreign var");
      if (!store.node(o).live) auditFail("occurrence list holds dead node");
      prev = o;
    }
    if (listed != found[d])
      auditFail("occurrence list of " + store.decl(d).displayName +
                " disagrees with reachable occurrences");
  }
}

}  // namespace skelmad
