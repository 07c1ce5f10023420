#include "skelmad/skeleton.hpp"

#include <algorithm>
#include <functional>

namespace skelmad {

std::uint64_t markSkeleton(TermStore& store, NodeId v) {
  TermNode& root = store.node(v);
  if (root.kind != NodeKind::Abs) throw std::invalid_argument("markSkeleton: not a value");
  if (root.parent != kNoNode) throw std::invalid_argument("markSkeleton: value must be a root");
  if (root.mark) throw std::invalid_argument("markSkeleton: already marked");

  std::uint64_t steps = 1;  // marking the root abstraction and seeding its occurrences
  root.mark = true;
  std::vector<NodeId> tokens;
  auto seed = [&](NodeId absNode) {
    auto occs = store.occurrences(absNode);
    // push in reverse so the first occurrence in list order runs first
    for (auto it = occs.rbegin(); it != occs.rend(); ++it) {
      store.node(*it).mark = true;
      tokens.push_back(*it);
    }
  };
  seed(v);

  while (!tokens.empty()) {
    NodeId cur = tokens.back();
    tokens.pop_back();
    for (;;) {
      NodeId p = store.node(cur).parent;
      if (p == kNoNode) break;  // the top wrapper: no step
      TermNode& pn = store.node(p);
      if (pn.mark) {
        ++steps;  // absorbed
        break;
      }
      pn.mark = true;
      ++steps;
      if (pn.kind == NodeKind::Abs) {
        // fan out over the occurrences first (depth-first), then resume here
        tokens.push_back(p);
        seed(p);
        break;
      }
      cur = p;
    }
  }
  return steps;
}

std::uint32_t whiteSize(const TermStore& store, NodeId v) {
  std::uint32_t n = 0;
  std::vector<NodeId> todo{v};
  while (!todo.empty()) {
    NodeId cur = todo.back();
    todo.pop_back();
    const TermNode& tn = store.node(cur);
    if (tn.mark) ++n;
    if (tn.kind == NodeKind::Abs) todo.push_back(tn.a);
    if (tn.kind == NodeKind::App) {
      todo.push_back(tn.a);
      todo.push_back(tn.b);
    }
  }
  return n;
}

namespace {

struct Splitter {
  TermStore& st;
  std::vector<Flesh> flesh;

  NodeId run(NodeId n) {
    TermNode& tn = st.node(n);
    if (!tn.mark) {
      if (tn.kind == NodeKind::Var) return n;  // single variables are never fleshed out
      tn.parent = kNoNode;
      DeclId p = st.mkFreshDecl("p");
      flesh.push_back({p, n});
      return st.mkVar(p);
    }
    tn.mark = false;
    switch (tn.kind) {
      case NodeKind::Var:
        return n;
      case NodeKind::Abs: {
        NodeId body = run(tn.a);
        if (body != tn.a) {
          tn.a = body;
          st.node(body).parent = n;
        }
        return n;
      }
      case NodeKind::App: {
        NodeId h = run(tn.a);
        NodeId a = run(tn.b);
        if (h != tn.a) {
          tn.a = h;
          st.node(h).parent = n;
        }
        if (a != tn.b) {
          tn.b = a;
          st.node(a).parent = n;
        }
        return n;
      }
    }
    throw std::logic_error("split: bad node kind");
  }
};

}  // namespace

SkeletalDecomposition split(TermStore& store, NodeId markedValue) {
  if (!store.node(markedValue).mark)
    throw std::invalid_argument("split: the value root is not marked");
  Splitter s{store, {}};
  NodeId skel = s.run(markedValue);
  return {skel, std::move(s.flesh)};
}

// ---------------------------------------------------------------------------
// Tree oracle

namespace {

bool touchesTheta(const SkRef& t, const std::set<std::string>& theta) {
  for (const auto& name : theta)
    if (nameFreeIn(t, name)) return true;
  return false;
}

void skdecRec(const SkRef& t, std::set<std::string>& theta, std::uint64_t& counter,
              TreeDecomposition& out, SkRef& skel) {
  if (t->kind == SkKind::ES || t->kind == SkKind::SkES)
    throw std::invalid_argument("skdecTree: term is not pure");
  if (t->kind == SkKind::Var) {
    skel = t;
    return;
  }
  if (!touchesTheta(t, theta)) {
    std::string p = "p_" + std::to_string(counter++);
    out.flesh.emplace_back(p, t);
    skel = mkVarT(p);
    return;
  }
  if (t->kind == SkKind::Abs) {
    bool fresh = theta.insert(t->name).second;
    SkRef body;
    skdecRec(t->a, theta, counter, out, body);
    if (fresh) theta.erase(t->name);
    skel = mkAbsT(t->name, body);
    return;
  }
  SkRef h, a;
  skdecRec(t->a, theta, counter, out, h);
  skdecRec(t->b, theta, counter, out, a);
  skel = mkAppT(h, a);
}

}  // namespace

TreeDecomposition skdecTree(const SkRef& t, const std::set<std::string>& theta,
                            std::uint64_t& counter) {
  TreeDecomposition out;
  std::set<std::string> th = theta;
  skdecRec(t, th, counter, out, out.skeleton);
  return out;
}

TreeDecomposition skdecValueTree(const SkRef& v, std::uint64_t& counter) {
  if (v->kind != SkKind::Abs) throw std::invalid_argument("skdecValueTree: not a value");
  TreeDecomposition out = skdecTree(v->a, {v->name}, counter);
  out.skeleton = mkAbsT(v->name, out.skeleton);
  return out;
}

TreeDecomposition skeldecOracle(const TermStore& store, NodeId t,
                                const std::set<std::string>& theta, std::uint64_t& counter) {
  return skdecTree(storeToTree(store, t), theta, counter);
}

// ---------------------------------------------------------------------------
// Reified marked terms

MRef mkMVar(std::string name, bool marked) {
  auto m = std::make_shared<MTerm>();
  m->kind = MTerm::Var;
  m->marked = marked;
  m->name = std::move(name);
  return m;
}
MRef mkMAbs(std::string name, bool marked, MRef body) {
  auto m = std::make_shared<MTerm>();
  m->kind = MTerm::Abs;
  m->marked = marked;
  m->name = std::move(name);
  m->a = std::move(body);
  return m;
}
MRef mkMApp(bool marked, MRef head, MRef arg) {
  auto m = std::make_shared<MTerm>();
  m->kind = MTerm::App;
  m->marked = marked;
  m->a = std::move(head);
  m->b = std::move(arg);
  return m;
}
MRef mkMUp(MRef sub) {
  auto m = std::make_shared<MTerm>();
  m->kind = MTerm::Up;
  m->marked = false;
  m->a = std::move(sub);
  return m;
}

namespace {

MRef convUnmarked(const SkRef& t) {
  switch (t->kind) {
    case SkKind::Var:
      return mkMVar(t->name, false);
    case SkKind::Abs:
      return mkMAbs(t->name, false, convUnmarked(t->a));
    case SkKind::App:
      return mkMApp(false, convUnmarked(t->a), convUnmarked(t->b));
    default:
      throw std::invalid_argument("marked terms are pure");
  }
}

MRef discRec(const SkRef& t, std::set<std::string>& theta) {
  if (!touchesTheta(t, theta)) return convUnmarked(t);
  switch (t->kind) {
    case SkKind::Var:
      return mkMVar(t->name, true);
    case SkKind::Abs: {
      bool fresh = theta.insert(t->name).second;
      MRef body = discRec(t->a, theta);
      if (fresh) theta.erase(t->name);
      return mkMAbs(t->name, true, body);
    }
    case SkKind::App:
      return mkMApp(true, discRec(t->a, theta), discRec(t->b, theta));
    default:
      throw std::invalid_argument("marked terms are pure");
  }
}

}  // namespace

MRef discTree(const SkRef& v) {
  if (v->kind != SkKind::Abs) throw std::invalid_argument("discTree: not a value");
  std::set<std::string> theta{v->name};
  return mkMAbs(v->name, true, discRec(v->a, theta));
}

MRef initMarked(const SkRef& v) {
  if (v->kind != SkKind::Abs) throw std::invalid_argument("initMarked: not a value");
  return mkMAbs(v->name, false, mkMUp(convUnmarked(v->a)));
}

MRef markedStoreToMTerm(const TermStore& store, NodeId t) {
  const TermNode& n = store.node(t);
  switch (n.kind) {
    case NodeKind::Var:
      return mkMVar(store.decl(n.decl).displayName, n.mark);
    case NodeKind::Abs:
      return mkMAbs(store.decl(n.decl).displayName, n.mark, markedStoreToMTerm(store, n.a));
    case NodeKind::App:
      return mkMApp(n.mark, markedStoreToMTerm(store, n.a), markedStoreToMTerm(store, n.b));
  }
  throw std::logic_error("markedStoreToMTerm: bad node kind");
}

namespace {

// x := Up(x marked), capture-respecting
MRef substUpVar(const MRef& m, const std::string& x) {
  switch (m->kind) {
    case MTerm::Var:
      if (m->name == x) return mkMUp(mkMVar(x, true));
      return m;
    case MTerm::Abs: {
      if (m->name == x) return m;  // shadowed
      MRef body = substUpVar(m->a, x);
      if (body == m->a) return m;
      return mkMAbs(m->name, m->marked, body);
    }
    case MTerm::App: {
      MRef h = substUpVar(m->a, x);
      MRef a = substUpVar(m->b, x);
      if (h == m->a && a == m->b) return m;
      return mkMApp(m->marked, h, a);
    }
    case MTerm::Up: {
      MRef sub = substUpVar(m->a, x);
      if (sub == m->a) return m;
      return mkMUp(sub);
    }
  }
  throw std::logic_error("substUpVar: bad kind");
}

void rootSteps(const MRef& t, std::vector<MRef>& out) {
  if (t->kind == MTerm::App && !t->marked) {
    if (t->a->kind == MTerm::Up) out.push_back(mkMUp(mkMApp(true, t->a->a, t->b)));  // pr1
    if (t->b->kind == MTerm::Up) out.push_back(mkMUp(mkMApp(true, t->a, t->b->a)));  // pr2
  }
  if (t->kind == MTerm::Abs && !t->marked && t->a->kind == MTerm::Up)
    out.push_back(mkMUp(mkMAbs(t->name, true, substUpVar(t->a->a, t->name))));  // pr3
  if (t->kind == MTerm::App && t->marked) {
    if (t->a->kind == MTerm::Up) out.push_back(mkMApp(true, t->a->a, t->b));  // ab1
    if (t->b->kind == MTerm::Up) out.push_back(mkMApp(true, t->a, t->b->a));  // ab2
  }
  if (t->kind == MTerm::Abs && t->marked && t->a->kind == MTerm::Up)
    out.push_back(mkMAbs(t->name, true, t->a->a));  // ab3
}

void allSteps(const MRef& t, const std::function<MRef(MRef)>& wrap, std::vector<MRef>& out) {
  std::vector<MRef> here;
  rootSteps(t, here);
  for (auto& r : here) out.push_back(wrap(std::move(r)));
  switch (t->kind) {
    case MTerm::Var:
      return;
    case MTerm::Abs:
    case MTerm::Up:
      allSteps(
          t->a,
          [&](MRef r) {
            return wrap(t->kind == MTerm::Abs ? mkMAbs(t->name, t->marked, std::move(r))
                                              : mkMUp(std::move(r)));
          },
          out);
      return;
    case MTerm::App:
      allSteps(
          t->a, [&](MRef r) { return wrap(mkMApp(t->marked, std::move(r), t->b)); }, out);
      allSteps(
          t->b, [&](MRef r) { return wrap(mkMApp(t->marked, t->a, std::move(r))); }, out);
      return;
  }
}

}  // namespace

std::vector<MRef> algSteps(const MRef& m) {
  std::vector<MRef> out;
  allSteps(m, [](MRef r) { return r; }, out);
  return out;
}

bool mtermEq(const MRef& a, const MRef& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->marked != b->marked || a->name != b->name) return false;
  if (!!a->a != !!b->a || !!a->b != !!b->b) return false;
  if (a->a && !mtermEq(a->a, b->a)) return false;
  if (a->b && !mtermEq(a->b, b->b)) return false;
  return true;
}

namespace {

void keyRec(const MRef& m, std::string& out) {
  switch (m->kind) {
    case MTerm::Var:
      out += m->marked ? "V*" : "V";
      out += m->name;
      out += ';';
      return;
    case MTerm::Abs:
      out += m->marked ? "L*" : "L";
      out += m->name;
      out += '(';
      keyRec(m->a, out);
      out += ')';
      return;
    case MTerm::App:
      out += m->marked ? "A*(" : "A(";
      keyRec(m->a, out);
      out += ',';
      keyRec(m->b, out);
      out += ')';
      return;
    case MTerm::Up:
      out += "U(";
      keyRec(m->a, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string mtermKey(const MRef& m) {
  std::string out;
  keyRec(m, out);
  return out;
}

std::string mtermPrint(const MRef& m) {
  switch (m->kind) {
    case MTerm::Var:
      return m->name + (m->marked ? "*" : "");
    case MTerm::Abs:
      return std::string("\\") + (m->marked ? "*" : "") + m->name + ". " + mtermPrint(m->a);
    case MTerm::App: {
      std::string h = mtermPrint(m->a);
      std::string a = mtermPrint(m->b);
      return "(" + h + (m->marked ? " @* " : " ") + a + ")";
    }
    case MTerm::Up:
      return "^(" + mtermPrint(m->a) + ")";
  }
  return {};
}

std::uint32_t mtermMarkCount(const MRef& m) {
  std::uint32_t n = m->marked ? 1 : 0;
  if (m->a) n += mtermMarkCount(m->a);
  if (m->b) n += mtermMarkCount(m->b);
  return n;
}

std::pair<std::uint64_t, std::uint64_t> mtermMeasure(const MRef& m) {
  std::uint64_t unmarked = 0, ups = 0;
  std::vector<const MTerm*> todo{m.get()};
  while (!todo.empty()) {
    const MTerm* cur = todo.back();
    todo.pop_back();
    if (cur->kind == MTerm::Up)
      ++ups;
    else if (!cur->marked)
      ++unmarked;
    if (cur->a) todo.push_back(cur->a.get());
    if (cur->b) todo.push_back(cur->b.get());
  }
  return {unmarked, ups};
}

}  // namespace skelmad
