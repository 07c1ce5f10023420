#include "skelmad/calculus.hpp"

#include <cassert>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skelmad/skeleton.hpp"

namespace skelmad {

const char* labelName(StepLabel l) {
  switch (l) {
    case StepLabel::dB: return "dB";
    case StepLabel::lsnd: return "lsnd";
    case StepLabel::sk: return "sk";
    case StepLabel::ss: return "ss";
  }
  return "?";
}

namespace {

// "y_2" -> "y", "x_1_2" -> "x"; names without a numeric suffix are kept.
std::string stripBase(const std::string& n) {
  std::string s = n;
  for (;;) {
    auto p = s.rfind('_');
    if (p == std::string::npos || p == 0 || p + 1 == s.size()) return s;
    bool digits = true;
    for (size_t q = p + 1; q < s.size(); ++q)
      if (!std::isdigit(static_cast<unsigned char>(s[q]))) { digits = false; break; }
    if (!digits) return s;
    s.resize(p);
  }
}

std::string freshName(const std::string& base, std::uint64_t& counter) {
  return stripBase(base) + "_" + std::to_string(counter++);
}

bool answerShape(const SkRef& t) {
  const SkTerm* p = t.get();
  while (p->kind == SkKind::ES || p->kind == SkKind::SkES) p = p->a.get();
  return p->kind == SkKind::Abs;
}

SkRef mkBind(SkKind k, const std::string& n, const SkRef& a, const SkRef& b) {
  return k == SkKind::SkES ? mkSkEST(n, a, b) : mkEST(n, a, b);
}

// The evaluator keeps its position as a stack of frames from the root down to
// the focus. A frame's child on the descent spine is represented by the rest
// of the stack, so after a rewrite only the region below the fire point is
// rebuilt and the search resumes there. Off-spine children (f.node->b for
// AppLeft/ESBody/SkESBody, f.node->a for ESInside) are always current.
enum class FrameKind : std::uint8_t { AppLeft, ESBody, SkESBody, ESInside };

struct Frame {
  FrameKind k;
  SkRef node;
  // ESInside only: the saved path from the entry body to the demanded
  // occurrence. The body cannot change while evaluation sits in the argument,
  // so the saved frames stay valid until the entry fires.
  std::vector<Frame> bodyPath;
};

void drainFrameVec(std::vector<Frame>&& v0) {
  std::vector<std::vector<Frame>> work;
  work.push_back(std::move(v0));
  while (!work.empty()) {
    std::vector<Frame> v = std::move(work.back());
    work.pop_back();
    for (auto& f : v) {
      drainTree(std::move(f.node));
      if (!f.bodyPath.empty()) work.push_back(std::move(f.bodyPath));
    }
  }
}

SkRef rebuildPath(const Frame* path, size_t len, SkRef x) {
  for (size_t k = len; k-- > 0;) {
    const Frame& f = path[k];
    switch (f.k) {
      case FrameKind::AppLeft: x = mkAppT(x, f.node->b); break;
      case FrameKind::ESBody: x = mkEST(f.node->name, x, f.node->b); break;
      case FrameKind::SkESBody: x = mkSkEST(f.node->name, x, f.node->b); break;
      case FrameKind::ESInside: x = mkEST(f.node->name, f.node->a, x); break;
    }
  }
  return x;
}

struct ChainPart {
  SkKind kind;
  std::string name;
  SkRef payload;
};

SkRef wrapParts(const std::vector<ChainPart>& parts, SkRef x) {
  for (size_t k = parts.size(); k-- > 0;) x = mkBind(parts[k].kind, parts[k].name, x, parts[k].payload);
  return x;
}

class Engine {
 public:
  Engine(const SkRef& t, Strategy strat, std::uint64_t counter)
      : strat_(strat), counter_(counter), focus_(t), curSize_(t->size), ink_(t->size) {}

  ~Engine() {
    drainTree(std::move(focus_));
    drainFrameVec(std::move(frames_));
  }

  std::optional<StepLabel> stepOnce() {
    if (halted_) return std::nullopt;
    for (;;) {
      switch (focus_->kind) {
        case SkKind::App: {
          SkRef n = focus_;
          focus_ = n->a;
          pushFrame(FrameKind::AppLeft, std::move(n));
          break;
        }
        case SkKind::ES: {
          SkRef n = focus_;
          focus_ = n->a;
          pushFrame(FrameKind::ESBody, std::move(n));
          break;
        }
        case SkKind::SkES: {
          if (strat_ == Strategy::Need)
            throw std::invalid_argument("need evaluation met a skeletal substitution");
          SkRef n = focus_;
          focus_ = n->a;
          pushFrame(FrameKind::SkESBody, std::move(n));
          break;
        }
        case SkKind::Abs:
          return onValue();
        case SkKind::Var: {
          auto r = onVar();
          if (r || halted_) return r;
          break;  // entered an entry; keep searching
        }
      }
    }
  }

  SkRef materialize() const { return rebuildPath(frames_.data(), frames_.size(), focus_); }

  std::uint64_t counter() const { return counter_; }
  std::uint64_t curSize() const { return curSize_; }
  std::uint64_t inkSpace() const { return ink_; }

 private:
  void pushFrame(FrameKind k, SkRef n) {
    if (k == FrameKind::ESBody || k == FrameKind::SkESBody) binds_[n->name].push_back(frames_.size());
    frames_.push_back(Frame{k, std::move(n), {}});
  }

  void unbindIf(const Frame& f) {
    if (f.k == FrameKind::ESBody || f.k == FrameKind::SkESBody) {
      auto& v = binds_[f.node->name];
      assert(!v.empty());
      v.pop_back();
    }
  }

  void truncateTo(size_t i) {
    while (frames_.size() > i) {
      Frame f = std::move(frames_.back());
      frames_.pop_back();
      unbindIf(f);
      drainTree(std::move(f.node));
      if (!f.bodyPath.empty()) drainFrameVec(std::move(f.bodyPath));
    }
  }

  // Size of the current subtree at frame i's position.
  std::uint64_t regionSize(size_t i) const {
    std::uint64_t s = focus_->size;
    for (size_t k = i; k < frames_.size(); ++k) {
      const Frame& f = frames_[k];
      s += 1 + (f.k == FrameKind::ESInside ? f.node->a->size : f.node->b->size);
    }
    return s;
  }

  void applyFire(size_t i, SkRef x) {
    std::uint64_t oldSz = regionSize(i);
    curSize_ = curSize_ + x->size - oldSz;
    if (curSize_ > ink_) ink_ = curSize_;
    truncateTo(i);
    focus_ = std::move(x);
  }

  // Renames chain binders that collide with `protect`, threading the rename
  // map downward; payloads of deeper entries sit in outer binders' scope.
  std::vector<ChainPart> renameChainParts(const std::vector<const SkTerm*>& chain,
                                          const std::set<std::string>& protect,
                                          std::map<std::string, SkRef>& m) {
    std::vector<ChainPart> parts;
    parts.reserve(chain.size());
    for (const SkTerm* nd : chain) {
      SkRef payload = m.empty() ? nd->b : substFreeTree(nd->b, m);
      std::string nm = nd->name;
      if (protect.count(nm)) {
        std::string f2 = freshName(nm, counter_);
        m[nd->name] = mkVarT(f2);
        nm = f2;
      } else {
        m.erase(nd->name);
      }
      parts.push_back(ChainPart{nd->kind, std::move(nm), std::move(payload)});
    }
    return parts;
  }

  // S<\x.b> u -> S<b[x\u]>, renaming S binders that would capture fv(u).
  void fireDB(size_t j) {
    SkRef u = frames_[j].node->b;
    std::vector<const SkTerm*> chain;
    for (size_t k = j + 1; k < frames_.size(); ++k) chain.push_back(frames_[k].node.get());
    std::map<std::string, SkRef> m;
    std::vector<ChainPart> parts;
    if (!chain.empty()) {
      std::set<std::string> fvU = freeNamesTree(u);
      parts = renameChainParts(chain, fvU, m);
    }
    m.erase(focus_->name);
    SkRef body = m.empty() ? focus_->a : substFreeTree(focus_->a, m);
    SkRef x = wrapParts(parts, mkEST(focus_->name, body, u));
    applyFire(j, std::move(x));
  }

  // E<y>[y\S<v>] -> S<E<v^a>[y\v]>; S binders colliding with the body's free
  // names are renamed before the float. `body` is the current E<y>, rebuilt by
  // the caller (the frame's own node->a may predate fires inside the body).
  void fireNeedAt(size_t i, const std::vector<const SkTerm*>& chain, const SkRef& value,
                  const Frame* path, size_t pathLen, const SkRef& body) {
    const SkRef& nd = frames_[i].node;
    std::map<std::string, SkRef> m;
    std::vector<ChainPart> parts;
    if (!chain.empty()) {
      std::set<std::string> protect = freeNamesTree(body);
      parts = renameChainParts(chain, protect, m);
    }
    SkRef v = m.empty() ? value : substFreeTree(value, m);
    SkRef vCopy = freshCopy(v, counter_);
    SkRef body2 = rebuildPath(path, pathLen, std::move(vCopy));
    SkRef x = wrapParts(parts, mkEST(nd->name, body2, v));
    applyFire(i, std::move(x));
  }

  // E<y>[y\S<v>] -> S<S'<E<y>[y\\v']>> with (v',S') = skdec(v); the demanded
  // occurrence stays in place and the flesh entries wrap the skeletal entry.
  // `body` is the current E<y>, as above.
  void fireSkAt(size_t i, const std::vector<const SkTerm*>& chain, const SkRef& value,
                const SkRef& body) {
    const SkRef& nd = frames_[i].node;
    std::map<std::string, SkRef> m;
    std::vector<ChainPart> parts;
    if (!chain.empty()) {
      std::set<std::string> protect = freeNamesTree(body);
      parts = renameChainParts(chain, protect, m);
    }
    SkRef v = m.empty() ? value : substFreeTree(value, m);
    TreeDecomposition d = skdecValueTree(v, counter_);
    SkRef x = mkSkEST(nd->name, body, d.skeleton);
    for (const auto& [p, pt] : d.flesh) x = mkEST(p, x, pt);
    x = wrapParts(parts, std::move(x));
    applyFire(i, std::move(x));
  }

  // E<y>[y\\v] -> E<v^a>[y\\v]
  void fireSS(size_t i) {
    const SkRef& nd = frames_[i].node;
    SkRef vCopy = freshCopy(nd->b, counter_);
    SkRef body2 = rebuildPath(frames_.data() + i + 1, frames_.size() - i - 1, std::move(vCopy));
    SkRef x = mkSkEST(nd->name, body2, nd->b);
    applyFire(i, std::move(x));
  }

  std::optional<StepLabel> onValue() {
    size_t j = frames_.size();
    while (j > 0 && (frames_[j - 1].k == FrameKind::ESBody || frames_[j - 1].k == FrameKind::SkESBody)) --j;
    if (j == 0) {
      halted_ = true;  // the whole term is an answer S<v>
      return std::nullopt;
    }
    size_t i = j - 1;
    if (frames_[i].k == FrameKind::AppLeft) {
      fireDB(i);
      return StepLabel::dB;
    }
    // ESInside: the demanded entry's content became an answer. The frame's
    // node->a was refreshed on entry and the body cannot change while
    // evaluation sits in the content, so it is the current E<y>.
    std::vector<const SkTerm*> chain;
    for (size_t k = i + 1; k < frames_.size(); ++k) chain.push_back(frames_[k].node.get());
    if (strat_ == Strategy::Need) {
      fireNeedAt(i, chain, focus_, frames_[i].bodyPath.data(), frames_[i].bodyPath.size(),
                 frames_[i].node->a);
      return StepLabel::lsnd;
    }
    fireSkAt(i, chain, focus_, frames_[i].node->a);
    return StepLabel::sk;
  }

  // Fires a step, sets halted_ on a normal form, or enters a demanded entry
  // (in which case neither happens and the descent continues).
  std::optional<StepLabel> onVar() {
    auto it = binds_.find(focus_->name);
    if (it == binds_.end() || it->second.empty()) {
      halted_ = true;  // free variable: stuck, an open-term normal form
      return std::nullopt;
    }
    size_t i = it->second.back();
    Frame& f = frames_[i];
    if (f.k == FrameKind::SkESBody) {
      fireSS(i);
      return StepLabel::ss;
    }
    if (answerShape(f.node->b)) {
      std::vector<const SkTerm*> chain;
      SkRef cur = f.node->b;
      while (cur->kind == SkKind::ES || cur->kind == SkKind::SkES) {
        chain.push_back(cur.get());
        cur = cur->a;
      }
      SkRef body = rebuildPath(frames_.data() + i + 1, frames_.size() - i - 1, focus_);
      if (strat_ == Strategy::Need) {
        fireNeedAt(i, chain, cur, frames_.data() + i + 1, frames_.size() - i - 1, body);
        return StepLabel::lsnd;
      }
      fireSkAt(i, chain, cur, body);
      return StepLabel::sk;
    }
    enterEntry(i);
    return std::nullopt;
  }

  // Switch from the entry's body to its content: E<x>[x\E']. The path inside
  // the body is parked on the frame; the binder leaves scope (the content is
  // outside it), as do the body path's own binders.
  void enterEntry(size_t i) {
    std::vector<Frame> saved;
    saved.reserve(frames_.size() - i - 1);
    for (size_t k = i + 1; k < frames_.size(); ++k) saved.push_back(std::move(frames_[k]));
    for (size_t k = saved.size(); k-- > 0;) unbindIf(saved[k]);
    frames_.resize(i + 1);
    Frame& f = frames_[i];
    unbindIf(f);
    // Fires below this frame may have rewritten the body since the frame was
    // pushed, leaving node->a stale. From here on node->a is the off-spine
    // child, so rebuild the node around the current body first.
    SkRef body = rebuildPath(saved.data(), saved.size(), focus_);
    SkRef old = std::move(f.node);
    f.node = mkEST(old->name, std::move(body), old->b);
    drainTree(std::move(old));
    f.k = FrameKind::ESInside;
    f.bodyPath = std::move(saved);
    focus_ = f.node->b;
  }

  Strategy strat_;
  std::uint64_t counter_;
  SkRef focus_;
  std::vector<Frame> frames_;
  std::unordered_map<std::string, std::vector<size_t>> binds_;
  std::uint64_t curSize_;
  std::uint64_t ink_;
  bool halted_ = false;
};

}  // namespace

SkRef freshCopy(const SkRef& v, std::uint64_t& counter) {
  struct Rec {
    std::uint64_t& counter;
    std::vector<std::pair<std::string, std::string>> scope;
    SkRef go(const SkRef& t) {
      switch (t->kind) {
        case SkKind::Var: {
          for (size_t k = scope.size(); k-- > 0;)
            if (scope[k].first == t->name) return mkVarT(scope[k].second);
          return t;
        }
        case SkKind::Abs: {
          std::string nm = freshName(t->name, counter);
          scope.emplace_back(t->name, nm);
          SkRef body = go(t->a);
          scope.pop_back();
          return mkAbsT(nm, body);
        }
        case SkKind::App: {
          SkRef a = go(t->a), b = go(t->b);
          return (a == t->a && b == t->b) ? t : mkAppT(a, b);
        }
        case SkKind::ES:
        case SkKind::SkES: {
          SkRef payload = go(t->b);
          std::string nm = freshName(t->name, counter);
          scope.emplace_back(t->name, nm);
          SkRef body = go(t->a);
          scope.pop_back();
          return mkBind(t->kind, nm, body, payload);
        }
      }
      return t;
    }
  } rec{counter, {}};
  return rec.go(v);
}

std::optional<StepResult> stepTree(const SkRef& t, Strategy strat, std::uint64_t& counter) {
  Engine e(t, strat, counter);
  auto l = e.stepOnce();
  counter = e.counter();
  if (!l) return std::nullopt;
  return StepResult{*l, e.materialize()};
}

std::optional<StepResult> stepNeed(const SkRef& t, std::uint64_t& counter) {
  return stepTree(t, Strategy::Need, counter);
}

std::optional<StepResult> stepSkNeed(const SkRef& t, std::uint64_t& counter) {
  return stepTree(t, Strategy::SkNeed, counter);
}

EvalResult evaluate(const SkRef& t, Strategy strat, std::uint64_t fuel, bool keepTrace,
                    bool keepLabels) {
  EvalResult r;
  Engine e(t, strat, initialFreshCounter(t));
  for (;;) {
    if (r.stats.steps() >= fuel) {
      r.stats.fuelExhausted = true;
      break;
    }
    auto l = e.stepOnce();
    if (!l) break;
    switch (*l) {
      case StepLabel::dB: ++r.stats.db; break;
      case StepLabel::lsnd: ++r.stats.lsnd; break;
      case StepLabel::sk: ++r.stats.sk; break;
      case StepLabel::ss: ++r.stats.ss; break;
    }
    if (keepLabels) r.labels.push_back(*l);
    if (keepTrace) r.trace.push_back(TraceEntry{*l, e.materialize()});
  }
  r.stats.inkSpace = e.inkSpace();
  r.final = e.materialize();
  return r;
}

SkRef familyTerm(unsigned n) {
  std::uint64_t k = 0;
  auto freshI = [&k] {
    std::string w = "w" + std::to_string(++k);
    return mkAbsT(w, mkVarT(w));
  };
  SkRef u = freshI();
  for (unsigned j = 1; j <= n; ++j) {
    std::string y = "y" + std::to_string(j);
    std::string z = "z" + std::to_string(j);
    SkRef body = mkAppT(mkAppT(mkAppT(mkVarT(y), freshI()), mkAppT(mkVarT(y), freshI())), mkVarT(z));
    u = mkAppT(mkAbsT(y, mkAbsT(z, body)), u);
  }
  SkRef head = mkAbsT("x", mkAppT(mkAppT(mkVarT("x"), freshI()), mkAppT(mkVarT("x"), freshI())));
  return mkAppT(head, u);
}

std::uint64_t initialFreshCounter(const SkRef& t) {
  std::uint64_t c = 1;
  std::vector<const SkTerm*> st{t.get()};
  while (!st.empty()) {
    const SkTerm* n = st.back();
    st.pop_back();
    const std::string& nm = n->name;
    auto p = nm.rfind('_');
    if (p != std::string::npos && p != 0 && p + 1 < nm.size() && nm.size() - p - 1 <= 18) {
      bool digits = true;
      std::uint64_t v = 0;
      for (size_t q = p + 1; q < nm.size(); ++q) {
        if (!std::isdigit(static_cast<unsigned char>(nm[q]))) {
          digits = false;
          break;
        }
        v = v * 10 + static_cast<std::uint64_t>(nm[q] - '0');
      }
      if (digits && v + 1 > c) c = v + 1;
    }
    if (n->a) st.push_back(n->a.get());
    if (n->b) st.push_back(n->b.get());
  }
  return c;
}

namespace {

// The demanded variable of t, if t decomposes as E<x> for some evaluation
// context E, together with the entry binders E passes through. Terms whose
// next step is internal (a redex) yield nullopt.
struct DemandInfo {
  std::string name;
  std::set<std::string> passed;
};

std::optional<DemandInfo> demandInfo(const SkRef& t) {
  switch (t->kind) {
    case SkKind::Var: return DemandInfo{t->name, {}};
    case SkKind::Abs: return std::nullopt;
    case SkKind::App: return demandInfo(t->a);
    case SkKind::ES:
    case SkKind::SkES: {
      auto r = demandInfo(t->a);
      if (!r) return std::nullopt;
      if (r->name == t->name) {
        if (t->kind == SkKind::SkES) return std::nullopt;  // ss redex
        auto r2 = demandInfo(t->b);
        if (!r2) return std::nullopt;  // lsnd/sk redex, or stuck content
        r2->passed.insert(r->passed.begin(), r->passed.end());
        r2->passed.insert(t->name);
        return r2;
      }
      r->passed.insert(t->name);
      return r;
    }
  }
  return std::nullopt;
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  const std::set<std::string>& small = a.size() <= b.size() ? a : b;
  const std::set<std::string>& big = a.size() <= b.size() ? b : a;
  for (const auto& s : small)
    if (big.count(s)) return true;
  return false;
}

// One leftmost-outermost float at an evaluation position, if any:
//   (u[x\s]) r        -> (u r)[x\s]        x not free in r
//   E<y>[y\ u[x\s] ]  -> E<y>[y\u][x\s]    x, dom(E) fresh for the moved parts
std::optional<SkRef> floatOnce(const SkRef& t) {
  if (t->kind == SkKind::App && (t->a->kind == SkKind::ES || t->a->kind == SkKind::SkES)) {
    const SkRef& e = t->a;
    if (!nameFreeIn(t->b, e->name)) return mkBind(e->kind, e->name, mkAppT(e->a, t->b), e->b);
  }
  if (t->kind == SkKind::ES || t->kind == SkKind::SkES) {
    auto d = demandInfo(t->a);
    if (d && d->name == t->name && (t->b->kind == SkKind::ES || t->b->kind == SkKind::SkES)) {
      const SkRef& inner = t->b;
      std::set<std::string> dom = d->passed;
      dom.insert(t->name);
      std::set<std::string> fvPayload = freeNamesTree(inner);
      std::set<std::string> fvBody = freeNamesTree(t->a);
      if (!intersects(dom, fvPayload) && !fvBody.count(inner->name))
        return mkBind(inner->kind, inner->name, mkBind(t->kind, t->name, t->a, inner->a), inner->b);
    }
  }
  switch (t->kind) {
    case SkKind::App: {
      if (auto r = floatOnce(t->a)) return mkAppT(*r, t->b);
      return std::nullopt;
    }
    case SkKind::ES:
    case SkKind::SkES: {
      if (auto r = floatOnce(t->a)) return mkBind(t->kind, t->name, *r, t->b);
      if (t->kind == SkKind::ES) {
        auto d = demandInfo(t->a);
        if (d && d->name == t->name)
          if (auto r = floatOnce(t->b)) return mkBind(t->kind, t->name, t->a, *r);
      }
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

// Binder names use '$', which the parser cannot produce, so they never
// collide with free variables.
SkRef alphaNormRec(const SkRef& t, std::vector<std::pair<std::string, std::string>>& scope,
                   std::uint64_t& k) {
  switch (t->kind) {
    case SkKind::Var: {
      for (size_t i = scope.size(); i-- > 0;)
        if (scope[i].first == t->name) return mkVarT(scope[i].second);
      return t;
    }
    case SkKind::Abs: {
      std::string nm = "x$" + std::to_string(k++);
      scope.emplace_back(t->name, nm);
      SkRef body = alphaNormRec(t->a, scope, k);
      scope.pop_back();
      return mkAbsT(nm, body);
    }
    case SkKind::App: {
      SkRef a = alphaNormRec(t->a, scope, k);
      SkRef b = alphaNormRec(t->b, scope, k);
      return mkAppT(a, b);
    }
    case SkKind::ES:
    case SkKind::SkES: {
      std::string nm = "x$" + std::to_string(k++);
      scope.emplace_back(t->name, nm);
      SkRef body = alphaNormRec(t->a, scope, k);
      scope.pop_back();
      SkRef payload = alphaNormRec(t->b, scope, k);
      return mkBind(t->kind, nm, body, payload);
    }
  }
  return t;
}

}  // namespace

SkRef canonicalize(const SkRef& t) {
  SkRef cur = t;
  while (auto r = floatOnce(cur)) cur = std::move(*r);
  std::vector<std::pair<std::string, std::string>> scope;
  std::uint64_t k = 0;
  return alphaNormRec(cur, scope, k);
}

}  // namespace skelmad
