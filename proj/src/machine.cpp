#include "skelmad/machine.hpp"

#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "skelmad/skeleton.hpp"

namespace skelmad {

const char* machLabelName(MachLabel l) {
  switch (l) {
    case MachLabel::sea1: return "sea1";
    case MachLabel::beta: return "beta";
    case MachLabel::sea2: return "sea2";
    case MachLabel::sea3: return "sea3";
    case MachLabel::sub: return "sub";
    case MachLabel::sk: return "sk";
    case MachLabel::ss: return "ss";
  }
  return "?";
}

bool machPrincipal(MachLabel l) {
  return l == MachLabel::beta || l == MachLabel::sub || l == MachLabel::sk || l == MachLabel::ss;
}

Machine::Machine(Variant variant, const SkRef& t) : variant_(variant) {
  if (!treeIsPure(t)) throw std::invalid_argument("machine input must not contain substitutions");
  std::set<std::string> free = freeNamesTree(t);
  if (!free.empty())
    throw std::invalid_argument("machine input must be closed, but '" + *free.begin() +
                                "' is unbound");
  code_ = treeToStore(store_, t);
  stateSize_ = termSize(store_, code_);
  initialSize_ = stateSize_;
  maxStateSize_ = stateSize_;
}

bool Machine::finalState() const {
  return store_.node(code_).kind == NodeKind::Abs && stack_.empty() && chain_.empty();
}

void Machine::envPushFront(DeclId d) {
  VarDecl& vd = store_.decl(d);
  vd.prevEnv = kNoDecl;
  vd.nextEnv = envHead_;
  if (envHead_ != kNoDecl) store_.decl(envHead_).prevEnv = d;
  envHead_ = d;
}

void Machine::insertAfter(DeclId a, DeclId d) {
  VarDecl& va = store_.decl(a);
  DeclId nxt = va.nextEnv;
  VarDecl& vd = store_.decl(d);
  vd.prevEnv = a;
  vd.nextEnv = nxt;
  va.nextEnv = d;
  if (nxt != kNoDecl) store_.decl(nxt).prevEnv = d;
}

void Machine::bumpMax() {
  if (stateSize_ > maxStateSize_) maxStateSize_ = stateSize_;
}

std::optional<MachLabel> Machine::step() {
  TermNode& c = store_.node(code_);
  switch (c.kind) {
    case NodeKind::App: {  // sea1
      NodeId h = c.a, u = c.b;
      store_.node(h).parent = kNoNode;
      store_.node(u).parent = kNoNode;
      store_.freeNode(code_);
      stack_.push_back(u);
      code_ = h;
      --stateSize_;
      ++stats_.sea1;
      return MachLabel::sea1;
    }
    case NodeKind::Abs: {
      if (!stack_.empty()) {  // beta
        NodeId u = stack_.back();
        stack_.pop_back();
        DeclId d = c.decl;
        NodeId body = c.a;
        VarDecl& vd = store_.decl(d);
        vd.binder = kNoNode;  // the Abs node goes away; the decl lives on as an entry
        // value arguments make value entries right away: sea2 only fires on
        // entries whose content still needs evaluation
        vd.sub = store_.node(u).kind == NodeKind::Abs ? SubKind::Sub : SubKind::None;
        vd.subTerm = u;
        store_.node(body).parent = kNoNode;
        store_.freeNode(code_);
        envPushFront(d);
        code_ = body;
        --stateSize_;
        ++stats_.beta;
        return MachLabel::beta;
      }
      if (!chain_.empty()) {  // sea3
        ChainItem it = std::move(chain_.back());
        chain_.pop_back();
        VarDecl& vd = store_.decl(it.var);
        vd.sub = SubKind::Sub;
        vd.subTerm = code_;
        // env := seg :: [x\v] :: current (entries made while evaluating the
        // content stay to the right of x, keeping the closure invariant)
        vd.nextEnv = envHead_;
        if (envHead_ != kNoDecl) store_.decl(envHead_).prevEnv = it.var;
        vd.prevEnv = it.segTail;
        if (it.segTail != kNoDecl) store_.decl(it.segTail).nextEnv = it.var;
        envHead_ = it.segHead != kNoDecl ? it.segHead : it.var;
        code_ = it.varOcc;
        stack_ = std::move(it.savedStack);
        ++stats_.sea3;
        return MachLabel::sea3;
      }
      return std::nullopt;  // final
    }
    case NodeKind::Var: {
      DeclId d = c.decl;
      VarDecl& vd = store_.decl(d);
      switch (vd.sub) {
        case SubKind::None: {  // sea2
          ChainItem it;
          it.var = d;
          it.varOcc = code_;
          it.savedStack = std::move(stack_);
          stack_.clear();
          it.segHead = envHead_ == d ? kNoDecl : envHead_;
          it.segTail = vd.prevEnv;
          envHead_ = vd.nextEnv;
          if (envHead_ != kNoDecl) store_.decl(envHead_).prevEnv = kNoDecl;
          if (it.segTail != kNoDecl) store_.decl(it.segTail).nextEnv = kNoDecl;
          vd.prevEnv = vd.nextEnv = kNoDecl;
          code_ = vd.subTerm;
          vd.sub = SubKind::Hole;
          vd.subTerm = kNoNode;
          chain_.push_back(std::move(it));
          ++stats_.sea2;
          return MachLabel::sea2;
        }
        case SubKind::Sub: {
          if (variant_ == Variant::MAD) {  // sub
            NodeId copy = copyTerm(store_, vd.subTerm, true);
            std::uint64_t sz = termSize(store_, copy);
            store_.freeNode(code_);
            code_ = copy;
            stateSize_ += sz - 1;
            ++stats_.sub;
            bumpMax();
            return MachLabel::sub;
          }
          // sk: split the value entry in place; the code does not move, so the
          // next transition at this occurrence is ss on the skeleton
          markSkeleton(store_, vd.subTerm);
          SkeletalDecomposition dec = split(store_, vd.subTerm);
          vd.sub = SubKind::SubSkel;
          vd.subTerm = dec.skeleton;
          DeclId after = d;
          for (const Flesh& fl : dec.flesh) {
            VarDecl& fd = store_.decl(fl.var);
            fd.sub = store_.node(fl.body).kind == NodeKind::Abs ? SubKind::Sub : SubKind::None;
            fd.subTerm = fl.body;
            insertAfter(after, fl.var);
            after = fl.var;
          }
          stateSize_ += dec.flesh.size();
          ++stats_.sk;
          bumpMax();
          return MachLabel::sk;
        }
        case SubKind::SubSkel: {  // ss
          NodeId copy = copyTerm(store_, vd.subTerm, true);
          std::uint64_t sz = termSize(store_, copy);
          store_.freeNode(code_);
          code_ = copy;
          stateSize_ += sz - 1;
          ++stats_.ss;
          bumpMax();
          return MachLabel::ss;
        }
        case SubKind::Hole:
          throw std::logic_error("machine: demanded a variable already under evaluation");
      }
      break;
    }
  }
  throw std::logic_error("machine: unreachable code shape");
}

RunStats Machine::run(const RunOptions& opts, std::vector<MachLabel>* labels,
                      const std::function<void(MachLabel)>& onStep) {
  auto t0 = std::chrono::steady_clock::now();
  while (stats_.transitions() < opts.fuel) {
    auto l = step();
    if (!l) break;
    if (labels) labels->push_back(*l);
    if (onStep) onStep(*l);
    if (opts.audit) auditState();
  }
  auto t1 = std::chrono::steady_clock::now();
  stats_.wallNanos = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  stats_.halted = finalState();
  stats_.fuelExhausted = !stats_.halted;
  stats_.finalEnvLen = envLen();
  stats_.maxStateSize = maxStateSize_;
  return stats_;
}

std::uint64_t Machine::envLen() const {
  std::uint64_t n = 0;
  for (DeclId d = envHead_; d != kNoDecl; d = store_.decl(d).nextEnv) ++n;
  return n;
}

SkRef Machine::foldEnvSeg(DeclId head, SkRef x) const {
  for (DeclId d = head; d != kNoDecl; d = store_.decl(d).nextEnv) {
    const VarDecl& vd = store_.decl(d);
    SkRef payload = storeToTree(store_, vd.subTerm);
    x = vd.sub == SubKind::SubSkel ? mkSkEST(vd.displayName, x, payload)
                                   : mkEST(vd.displayName, x, payload);
  }
  return x;
}

SkRef Machine::readback() const {
  SkRef x = storeToTree(store_, code_);
  for (size_t i = stack_.size(); i-- > 0;) x = mkAppT(x, storeToTree(store_, stack_[i]));
  // The code plugs into the newest chain entry; each older item sits inside
  // the body of the next newer one, wrapped around that item's saved stack.
  // Any other nesting would make sea2/sea3 visible in the decoded term.
  SkRef body;
  DeclId older = kNoDecl;
  for (const ChainItem& it : chain_) {  // oldest first
    SkRef y = storeToTree(store_, it.varOcc);
    for (size_t i = it.savedStack.size(); i-- > 0;) y = mkAppT(y, storeToTree(store_, it.savedStack[i]));
    if (older != kNoDecl) y = mkEST(store_.decl(older).displayName, body, y);
    body = foldEnvSeg(it.segHead, y);
    older = it.var;
  }
  if (older != kNoDecl) x = mkEST(store_.decl(older).displayName, body, x);
  return foldEnvSeg(envHead_, x);
}

std::string Machine::describe() const {
  std::string out;
  for (const ChainItem& it : chain_) {
    if (!out.empty()) out += "::";
    out += store_.decl(it.var).displayName;
  }
  out += " | ";
  out += printTree(storeToTree(store_, code_));
  out += " | ";
  for (std::size_t i = stack_.size(); i-- > 0;) {
    out += printTree(storeToTree(store_, stack_[i]));
    if (i > 0) out += " . ";
  }
  out += " | ";
  for (DeclId d = envHead_; d != kNoDecl; d = store_.decl(d).nextEnv) {
    const VarDecl& vd = store_.decl(d);
    SkRef payload = storeToTree(store_, vd.subTerm);
    out += "[" + vd.displayName + (vd.sub == SubKind::SubSkel ? "\\\\" : "\\") +
           (payload->kind == SkKind::Abs ? " " : "") + printTree(payload) + "]";
  }
  return out;
}

namespace {

struct AuditCtx {
  const TermStore& store;
  std::uint64_t initialSize;
  std::set<DeclId> holeDecls;        // decls parked in the chain
  std::set<DeclId> envDecls;         // current env + parked segments
  std::vector<NodeId> roots;
  std::set<std::string> names;

  void fail(const std::string& msg) const { throw std::logic_error("machine audit: " + msg); }

  void addName(const std::string& n) {
    if (!names.insert(n).second) fail("duplicate display name " + n);
  }

  void addRoot(NodeId r, const char* what) {
    if (r == kNoNode || !store.node(r).live) fail(std::string(what) + " is not a live node");
    if (store.node(r).parent != kNoNode) fail(std::string(what) + " has a dangling parent link");
    auditTerm(store, r, true);
    if (termSize(store, r) > initialSize) fail(std::string(what) + " exceeds the initial term size");
    roots.push_back(r);
  }

  // Walks an env segment, checking the doubly linked structure.
  std::uint64_t walkSeg(DeclId head, DeclId expectTail, bool tailKnown) {
    std::uint64_t n = 0;
    DeclId prev = kNoDecl;
    for (DeclId d = head; d != kNoDecl; d = store.decl(d).nextEnv) {
      const VarDecl& vd = store.decl(d);
      if (vd.prevEnv != prev) fail("env prev link mismatch at " + vd.displayName);
      if (vd.sub == SubKind::Hole) fail("hole entry " + vd.displayName + " linked in an env");
      if (vd.subTerm == kNoNode) fail("entry " + vd.displayName + " has no content");
      if (!envDecls.insert(d).second) fail("entry " + vd.displayName + " linked twice");
      addName(vd.displayName);
      if (vd.sub != SubKind::None && store.node(vd.subTerm).kind != NodeKind::Abs)
        fail("value entry " + vd.displayName + " does not hold a value");
      if (vd.sub == SubKind::None && store.node(vd.subTerm).kind == NodeKind::Abs)
        fail("value content of " + vd.displayName + " was not promoted to a value entry");
      prev = d;
      ++n;
      if (n > 100000000) fail("env cycle");
    }
    if (tailKnown && prev != expectTail) fail("env segment tail mismatch");
    return n;
  }
};

}  // namespace

void Machine::auditState() const {
  AuditCtx ctx{store_, initialSize_, {}, {}, {}, {}};

  for (const ChainItem& it : chain_) {
    if (it.var == kNoDecl) ctx.fail("chain item without a decl");
    const VarDecl& vd = store_.decl(it.var);
    if (vd.sub != SubKind::Hole) ctx.fail("chain decl " + vd.displayName + " is not a hole");
    if (!ctx.holeDecls.insert(it.var).second)
      ctx.fail("decl " + vd.displayName + " parked twice");
    ctx.addName(vd.displayName);
    const TermNode& occ = store_.node(it.varOcc);
    if (!occ.live || occ.kind != NodeKind::Var || occ.decl != it.var)
      ctx.fail("chain occurrence does not reference its decl");
  }

  ctx.addRoot(code_, "code");
  for (NodeId s : stack_) ctx.addRoot(s, "stack item");
  for (const ChainItem& it : chain_) {
    ctx.addRoot(it.varOcc, "parked occurrence");
    for (NodeId s : it.savedStack) ctx.addRoot(s, "parked stack item");
    if (it.segHead != kNoDecl) ctx.walkSeg(it.segHead, it.segTail, true);
    else if (it.segTail != kNoDecl) ctx.fail("segment tail without head");
  }
  if (envHead_ != kNoDecl && store_.decl(envHead_).prevEnv != kNoDecl)
    ctx.fail("env head has a predecessor");
  ctx.walkSeg(envHead_, kNoDecl, false);
  for (DeclId d : ctx.envDecls) ctx.addRoot(store_.decl(d).subTerm, "entry content");

  // Binder display names inside every piece must not collide with entries.
  std::uint64_t sum = 0;
  for (NodeId r : ctx.roots) {
    sum += termSize(store_, r);
    std::vector<NodeId> st{r};
    while (!st.empty()) {
      NodeId n = st.back();
      st.pop_back();
      const TermNode& nd = store_.node(n);
      if (nd.kind == NodeKind::Abs) ctx.addName(store_.decl(nd.decl).displayName);
      if (nd.kind == NodeKind::Var) {
        const VarDecl& vd = store_.decl(nd.decl);
        // every occurrence must resolve: either bound inside a piece or an
        // entry/hole decl of this state
        if (vd.binder == kNoNode && !ctx.envDecls.count(nd.decl) && !ctx.holeDecls.count(nd.decl))
          ctx.fail("occurrence of " + vd.displayName + " resolves to nothing");
      }
      if (nd.a != kNoNode) st.push_back(nd.a);
      if (nd.b != kNoNode) st.push_back(nd.b);
    }
  }
  if (sum != stateSize_) ctx.fail("incremental state size drifted from the recomputed sum");

  // The decoded state being closed is the rightward-closure invariant: an
  // entry's content decodes outside its own binder but inside the entries to
  // its right. Decoding allocates a tree of the state's size, so cap it; big
  // states keep the per-occurrence resolution check above.
  if (stateSize_ <= 4096) {
    SkRef rb = readback();
    if (!freeNamesTree(rb).empty()) ctx.fail("state read-back is not closed");
  }
}

}  // namespace skelmad
