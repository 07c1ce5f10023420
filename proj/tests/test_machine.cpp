#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "skelmad/calculus.hpp"
#include "skelmad/machine.hpp"
#include "skelmad/skterm.hpp"

using namespace skelmad;

namespace {

SkRef loadData(const std::string& file) {
  std::ifstream in(std::string(SKELMAD_TESTDATA) + "/" + file);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return parseTree(buf.str());
}

}  // namespace

TEST_CASE("initial states decode to the loaded term") {
  for (const char* s : {"\\w. w", "(\\x. x x) (\\y. y)", "\\f. \\x. f (f x)"}) {
    SkRef t = parseTree(s);
    for (Variant v : {Variant::MAD, Variant::SMAD}) {
      Machine m(v, t);
      CHECK(alphaEqTree(m.readback(), t));
      CHECK(m.stateSize() == t->size);
      m.auditState();
    }
  }
  SkRef f0 = familyTerm(0);
  CHECK(alphaEqTree(Machine(Variant::MAD, f0).readback(), f0));
}

TEST_CASE("open and impure terms are rejected") {
  CHECK_THROWS_AS(Machine(Variant::MAD, parseTree("x")), std::invalid_argument);
  CHECK_THROWS_AS(Machine(Variant::SMAD, mkEST("x", mkVarT("x"), mkVarT("y"))),
                  std::invalid_argument);
  try {
    Machine m(Variant::MAD, parseTree("\\x. x y"));
    FAIL("open term accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
}

TEST_CASE("a value is immediately final") {
  Machine m(Variant::SMAD, parseTree("\\w. w"));
  CHECK(m.finalState());
  CHECK_FALSE(m.step());
  CHECK(m.stats().transitions() == 0);
  CHECK(alphaEqTree(m.readback(), parseTree("\\w. w")));
}

TEST_CASE("one env entry reads back as one substitution") {
  // (\x. \y. y) u halts after sea1 and beta as (\y. y)[x\u]
  SkRef u = mkAbsT("q", mkAbsT("r", mkAppT(mkVarT("q"), mkVarT("r"))));
  SkRef t = mkAppT(mkAbsT("x", mkAbsT("y", mkVarT("y"))), u);
  Machine m(Variant::SMAD, t);
  REQUIRE(m.step() == MachLabel::sea1);
  REQUIRE(m.step() == MachLabel::beta);
  CHECK(m.finalState());
  CHECK(m.envLen() == 1);
  CHECK(alphaEqTree(m.readback(), mkEST("x", mkAbsT("y", mkVarT("y")), u)));
}

TEST_CASE("a demanded non-value entry is parked on the chain") {
  Machine m(Variant::SMAD, parseTree("(\\x. x x) ((\\a. a) (\\b. b))"));
  REQUIRE(m.step() == MachLabel::sea1);
  REQUIRE(m.step() == MachLabel::beta);
  REQUIRE(m.step() == MachLabel::sea1);
  REQUIRE(m.step() == MachLabel::sea2);
  m.auditState();
  // the chain column names the parked entry; the env no longer lists it
  std::string d = m.describe();
  CHECK(d.substr(0, 1) == "x");
  CHECK(d.find("[x\\") == std::string::npos);
  // search steps keep the decoded term stable
  SkRef before = m.readback();
  REQUIRE(m.step() == MachLabel::sea1);
  CHECK(alphaEqTree(m.readback(), before));
  RunStats rs = m.run(RunOptions{});
  CHECK(rs.halted);
  CHECK(rs.sea2 == rs.sea3);
  CHECK(alphaEqTree(storeToTree(m.store(), m.code()), parseTree("\\b. b")));
}

TEST_CASE("value arguments become value entries without a detour") {
  // (\x. x x) (\w. w): demanding x must not produce sea2/sea3
  Machine m(Variant::SMAD, parseTree("(\\x. x x) (\\w. w)"));
  RunStats rs = m.run(RunOptions{});
  REQUIRE(rs.halted);
  CHECK(rs.beta == 2);
  CHECK(rs.sk == 2);
  CHECK(rs.ss == 3);
  CHECK(rs.sea2 == 1);  // only the copied body's entry needs evaluation
  CHECK(rs.sea3 == 1);
  CHECK(alphaEqTree(storeToTree(m.store(), m.code()), parseTree("\\w. w")));
}

TEST_CASE("sk converts the entry in place and counts even with empty flesh") {
  Machine m(Variant::SMAD, parseTree("(\\x. x x) (\\w. w)"));
  REQUIRE(m.step() == MachLabel::sea1);
  REQUIRE(m.step() == MachLabel::beta);
  REQUIRE(m.step() == MachLabel::sea1);
  std::uint64_t size = m.stateSize();
  REQUIRE(m.step() == MachLabel::sk);
  CHECK(m.stateSize() == size);  // no flesh, nothing spliced
  CHECK(m.envLen() == 1);
  CHECK(m.describe().find("[x\\\\ \\w. w]") != std::string::npos);
  REQUIRE(m.step() == MachLabel::ss);
}

TEST_CASE("per-label state size accounting") {
  Machine m(Variant::SMAD, loadData("family_3.lambda"));
  std::uint64_t prev = m.stateSize();
  while (auto l = m.step()) {
    std::int64_t delta = static_cast<std::int64_t>(m.stateSize()) -
                         static_cast<std::int64_t>(prev);
    switch (*l) {
      case MachLabel::sea1:
      case MachLabel::beta: CHECK(delta == -1); break;
      case MachLabel::sea2:
      case MachLabel::sea3: CHECK(delta == 0); break;
      case MachLabel::sk:
      case MachLabel::sub:
      case MachLabel::ss: CHECK(delta >= 0); break;
    }
    prev = m.stateSize();
    CHECK(m.maxStateSize() >= m.stateSize());
  }
}

TEST_CASE("golden run: 24 betas and the documented skeletal entries") {
  Machine m(Variant::SMAD, loadData("family_3.lambda"));
  bool sawEmptyFleshG = false, sawZSplit = false;
  while (auto l = m.step()) {
    if (*l != MachLabel::sk) continue;
    std::string d = m.describe();
    // first demand of g: the value is its own skeleton, the entry just flips
    if (d.find("[g\\\\ \\x. \\y. x i (x i) y]") != std::string::npos) sawEmptyFleshG = true;
    // the z entry splits into a skeletal entry plus one flesh entry
    if (d.find("[z\\\\ \\y_2. p_3 y_2][p_3\\x_1 i (x_1 i)]") != std::string::npos)
      sawZSplit = true;
  }
  CHECK(m.finalState());
  CHECK(m.stats().beta == 24);
  CHECK(alphaEqTree(storeToTree(m.store(), m.code()), parseTree("\\w. w")));
  CHECK(sawEmptyFleshG);
  CHECK(sawZSplit);
}

TEST_CASE("family counts on both machines") {
  Machine smad(Variant::SMAD, familyTerm(3));
  CHECK(smad.run(RunOptions{}).beta == 22);
  Machine mad(Variant::MAD, familyTerm(3));
  CHECK(mad.run(RunOptions{}).beta == 63);
  Machine pure(Variant::MAD, loadData("family_3_pure.lambda"));
  CHECK(pure.run(RunOptions{}).beta == 63);
}

TEST_CASE("fuel exhaustion is reported, not thrown") {
  Machine m(Variant::SMAD, familyTerm(3));
  RunOptions opts;
  opts.fuel = 3;
  RunStats rs = m.run(opts);
  CHECK_FALSE(rs.halted);
  CHECK(rs.fuelExhausted);
  CHECK(rs.transitions() == 3);
  // and the run can be resumed
  RunStats more = m.run(RunOptions{});
  CHECK(more.halted);
  CHECK(more.beta == 22);
}

TEST_CASE("run collects labels and invokes the step callback") {
  Machine m(Variant::SMAD, familyTerm(0));
  std::vector<MachLabel> labels;
  std::uint64_t called = 0;
  RunStats rs = m.run(RunOptions{}, &labels, [&](MachLabel) { ++called; });
  CHECK(rs.halted);
  CHECK(labels.size() == rs.transitions());
  CHECK(called == labels.size());
  std::uint64_t principals = 0;
  for (MachLabel l : labels) principals += machPrincipal(l) ? 1 : 0;
  CHECK(principals == rs.beta + rs.sub + rs.sk + rs.ss);
}
