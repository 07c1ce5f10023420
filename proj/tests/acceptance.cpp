// Whole-project acceptance gate. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failed criteria. Thresholds (step-count
// formulas, growth constants, suite sizes) are pinned here on purpose.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skelmad/calculus.hpp"
#include "skelmad/machine.hpp"
#include "skelmad/skeleton.hpp"
#include "skelmad/suites.hpp"

using namespace skelmad;

namespace {

constexpr std::uint64_t kSeed = 20250814;

struct Outcome {
  bool pass;
  std::string detail;
};

SkRef loadData(const std::string& file) {
  std::ifstream in(std::string(SKELMAD_TESTDATA) + "/" + file);
  if (!in) return nullptr;
  std::stringstream buf;
  buf << in.rdbuf();
  return parseTree(buf.str());
}

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string suiteDetail(const SuiteResult& r) {
  std::string d = "cases=" + std::to_string(r.cases) + " failures=" + std::to_string(r.failures);
  for (const std::string& n : r.notes) d += "\n      " + n;
  return d;
}

// One row per (n, machine), serialized like the bench subcommand's CSV.
struct BenchTable {
  std::string csv;
  std::vector<std::vector<std::string>> rows;  // parsed back, cells as text

  void add(unsigned n, Variant var) {
    Machine m(var, familyTerm(n));
    RunStats rs = m.run(RunOptions{});
    std::ostringstream line;
    line << n << ',' << (var == Variant::MAD ? "mad" : "smad") << ',' << rs.beta << ','
         << rs.sk << ',' << (var == Variant::MAD ? rs.sub : rs.ss) << ',' << rs.sea1 << ','
         << rs.sea2 << ',' << rs.sea3 << ',' << rs.finalEnvLen << ',' << rs.maxStateSize
         << ",," << rs.wallNanos;
    csv += line.str() + "\n";
    std::vector<std::string> cells;
    std::stringstream ss(line.str());
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(std::move(cells));
  }

  std::uint64_t cell(unsigned n, const std::string& machine, std::size_t col) const {
    for (const auto& r : rows)
      if (r[0] == std::to_string(n) && r[1] == machine) return std::stoull(r[col]);
    throw std::runtime_error("missing bench row");
  }
};

Outcome criterionGolden() {
  SkRef t = loadData("family_3.lambda");
  if (!t) return {false, "missing input file"};
  Machine m(Variant::SMAD, t);
  RunStats rs = m.run(RunOptions{});
  bool final = rs.halted && alphaEqTree(storeToTree(m.store(), m.code()), parseTree("\\w. w"));
  std::ostringstream d;
  d << "beta=" << rs.beta << " final=" << (final ? "ok" : "wrong") << " wall="
    << rs.wallNanos / 1000 << "us";
  return {final && rs.beta == 24 && rs.wallNanos < 10'000'000, d.str()};
}

Outcome criterionFamilySkeletal() {
  auto t0 = std::chrono::steady_clock::now();
  for (unsigned n = 0; n <= 10; ++n) {
    Machine m(Variant::SMAD, familyTerm(n));
    RunStats rs = m.run(RunOptions{});
    if (!rs.halted || rs.beta != 6 * n + 4)
      return {false, "machine beta mismatch at n=" + std::to_string(n)};
    EvalResult er = evaluate(familyTerm(n), Strategy::SkNeed, 1'000'000);
    if (er.stats.fuelExhausted || er.stats.db != 6 * n + 4)
      return {false, "calculus dB mismatch at n=" + std::to_string(n)};
  }
  double s = secondsSince(t0);
  std::ostringstream d;
  d << "n=0..10 beta=6n+4, calculus agrees, " << s << "s";
  return {s < 1.0, d.str()};
}

Outcome criterionFamilyNeed() {
  auto t0 = std::chrono::steady_clock::now();
  for (unsigned n = 0; n <= 12; ++n) {
    Machine m(Variant::MAD, familyTerm(n));
    RunStats rs = m.run(RunOptions{});
    std::uint64_t want = (8ull << n) + n - 4;
    if (!rs.halted || rs.beta != want)
      return {false, "beta mismatch at n=" + std::to_string(n)};
  }
  double s = secondsSince(t0);
  std::ostringstream d;
  d << "n=0..12 beta=8*2^n+n-4, " << s << "s";
  return {s < 30.0, d.str()};
}

Outcome criterionSpace(const BenchTable& bench) {
  const std::size_t envCol = 8;
  std::uint64_t diff = bench.cell(2, "smad", envCol) - bench.cell(1, "smad", envCol);
  for (unsigned n = 3; n <= 10; ++n)
    if (bench.cell(n, "smad", envCol) - bench.cell(n - 1, "smad", envCol) != diff)
      return {false, "smad env growth is not linear at n=" + std::to_string(n)};
  for (unsigned n = 5; n <= 11; ++n) {
    std::uint64_t lo = bench.cell(n, "mad", envCol), hi = bench.cell(n + 1, "mad", envCol);
    if (hi * 10 < lo * 18)
      return {false, "mad env ratio below 1.8 at n=" + std::to_string(n)};
  }
  std::ostringstream d;
  d << "smad env first difference " << diff << ", mad env(12)=" << bench.cell(12, "mad", envCol);
  return {true, d.str()};
}

Outcome criterionStepCount() {
  std::mt19937 rng(kSeed);
  std::uint64_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    SkRef v = randomValue(rng, 40);
    TermStore st;
    NodeId root = treeToStore(st, v);
    if (markSkeleton(st, root) != whiteSize(st, root)) ++failures;
  }
  return {failures == 0, "cases=1000 failures=" + std::to_string(failures)};
}

Outcome criterionOracle() {
  SuiteResult r = suiteSkeleton(kSeed, 1000, 40);
  return {r.failures == 0, suiteDetail(r)};
}

Outcome criterionDiamond() {
  SuiteResult r = suiteDiamond(10);
  return {r.failures == 0, suiteDetail(r)};
}

Outcome criterionBisim() {
  SuiteResult r = suiteBisim(kSeed + 2, 500, 15, 10'000);
  return {r.failures == 0, suiteDetail(r)};
}

Outcome criterionAudits() {
  SuiteResult r = suiteAudits(kSeed + 3, 40);
  return {r.failures == 0, suiteDetail(r)};
}

Outcome criterionBiLinear(const BenchTable& bench) {
  double worst = 0;
  for (const auto& row : bench.rows) {
    unsigned n = static_cast<unsigned>(std::stoul(row[0]));
    std::uint64_t total = 0;
    for (std::size_t c = 2; c <= 7; ++c) total += std::stoull(row[c]);
    std::uint64_t beta = std::stoull(row[2]);
    double ratio = static_cast<double>(total) /
                   (static_cast<double>(familyTerm(n)->size) * static_cast<double>(beta + 1));
    if (ratio > worst) worst = ratio;
  }
  std::ostringstream d;
  d << "worst transitions / (|t|*(beta+1)) = " << worst;
  return {worst <= 4.0, d.str()};
}

}  // namespace

int main() {
  BenchTable bench;
  for (unsigned n = 0; n <= 10; ++n) bench.add(n, Variant::SMAD);
  for (unsigned n = 0; n <= 12; ++n) bench.add(n, Variant::MAD);

  struct Criterion {
    const char* name;
    Outcome outcome;
  };
  Criterion cs[] = {
      {"golden run: 24 betas, final \\w. w, under 10ms", criterionGolden()},
      {"skeletal family: beta = 6n+4 for n=0..10, calculus agrees", criterionFamilySkeletal()},
      {"plain family: beta = 8*2^n+n-4 for n=0..12", criterionFamilyNeed()},
      {"space separation: linear smad env, geometric mad env", criterionSpace(bench)},
      {"marking steps equal the white size on 1000 random values", criterionStepCount()},
      {"split agrees with the decomposition oracle on 1000 values", criterionOracle()},
      {"diamond: all peaks from values up to size 10 join in one step", criterionDiamond()},
      {"bisimulation on 500 terminating closed terms, both variants", criterionBisim()},
      {"audits and transition-count bounds on family and random runs", criterionAudits()},
      {"bi-linear overhead: transitions <= 4*|t|*(beta+1) on the bench", criterionBiLinear(bench)},
  };

  int failures = 0;
  int i = 0;
  for (const Criterion& c : cs) {
    ++i;
    std::cout << "[" << (i < 10 ? " " : "") << i << "] "
              << (c.outcome.pass ? "PASS" : "FAIL") << "  " << c.name << " (" << c.outcome.detail
              << ")\n";
    if (!c.outcome.pass) ++failures;
  }
  std::cout << (failures ? "acceptance: FAIL (" + std::to_string(failures) + ")"
                         : "acceptance: PASS")
            << "\n";
  return failures;
}
