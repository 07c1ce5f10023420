// Command-line front end: single-run and trace workflows for the machines and
// the calculus reducers, skeleton inspection, the size-separation family
// benchmark with CSV output, and the randomized property suites.
//
// Exit codes: 0 success, 1 failed checks or violated audits, 2 input errors,
// 3 fuel exhaustion.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skelmad/calculus.hpp"
#include "skelmad/machine.hpp"
#include "skelmad/skeleton.hpp"
#include "skelmad/suites.hpp"

namespace {

using namespace skelmad;

constexpr std::uint64_t kDefaultFuel = 10'000'000;
constexpr std::uint64_t kDefaultSeed = 20250814;

SkRef loadTerm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parseTree(buf.str());
}

int cmdRun(const std::string& file, const std::string& machine, bool trace, bool audit,
           std::uint64_t fuel) {
  SkRef t = loadTerm(file);
  Variant var = machine == "mad" ? Variant::MAD : Variant::SMAD;
  Machine m(var, t);
  if (trace) std::cout << std::string(7, ' ') << m.describe() << "\n";
  while (m.stats().transitions() < fuel) {
    auto l = m.step();
    if (!l) break;
    if (audit) m.auditState();
    if (trace)
      std::cout << "→" << std::left << std::setw(5) << machLabelName(*l) << ' '
                << m.describe() << "\n";
  }
  const RunStats& rs = m.stats();
  std::cout << "machine=" << machine << "\n"
            << "beta=" << rs.beta << "\n"
            << "sub=" << rs.sub << "\n"
            << "sk=" << rs.sk << "\n"
            << "ss=" << rs.ss << "\n"
            << "sea1=" << rs.sea1 << "\n"
            << "sea2=" << rs.sea2 << "\n"
            << "sea3=" << rs.sea3 << "\n"
            << "transitions=" << rs.transitions() << "\n"
            << "envLen=" << m.envLen() << "\n"
            << "maxStateSize=" << m.maxStateSize() << "\n";
  if (!m.finalState()) {
    std::cout << "status=fuel-exhausted\n";
    return 3;
  }
  std::cout << "status=final\n";
  std::cout << "final=" << printTree(storeToTree(m.store(), m.code())) << "\n";
  return 0;
}

int cmdReduce(const std::string& file, const std::string& strategy, bool trace,
              std::uint64_t fuel) {
  SkRef t = loadTerm(file);
  Strategy strat = strategy == "need" ? Strategy::Need : Strategy::SkNeed;
  EvalResult er = evaluate(t, strat, fuel, trace);
  if (trace)
    for (const TraceEntry& e : er.trace)
      std::cout << "→_" << labelName(e.label) << "  " << printTree(e.term) << "\n";
  std::cout << "strategy=" << strategy << "\n"
            << "dB=" << er.stats.db << "\n"
            << "lsnd=" << er.stats.lsnd << "\n"
            << "sk=" << er.stats.sk << "\n"
            << "ss=" << er.stats.ss << "\n"
            << "steps=" << er.stats.steps() << "\n"
            << "inkSpace=" << er.stats.inkSpace << "\n";
  if (er.stats.fuelExhausted) {
    std::cout << "status=fuel-exhausted\n";
    return 3;
  }
  std::cout << "status=normal\n";
  std::cout << "final=" << printTree(er.final) << "\n";
  return 0;
}

int cmdSkel(const std::string& file) {
  SkRef t = loadTerm(file);
  if (!isValueTree(t)) {
    std::cerr << "skel: input must be an abstraction\n";
    return 2;
  }
  TermStore st;
  NodeId root = treeToStore(st, t);
  std::uint64_t steps = markSkeleton(st, root);
  std::uint32_t white = whiteSize(st, root);
  SkeletalDecomposition dec = split(st, root);
  std::cout << "steps=" << steps << "\n"
            << "whiteSize=" << white << "\n"
            << "skeleton=" << printTree(storeToTree(st, dec.skeleton)) << "\n";
  std::string flesh;
  for (const Flesh& f : dec.flesh)
    flesh += "[" + st.decl(f.var).displayName + "\\" + printTree(storeToTree(st, f.body)) + "]";
  std::cout << "flesh=" << flesh << "\n";
  return 0;
}

struct BenchArgs {
  std::string family;
  std::string machines = "mad,smad";
  std::string out;
  bool force = false;
  bool inkSpace = false;
  std::uint64_t fuel = kDefaultFuel;
};

int cmdBench(const BenchArgs& a) {
  unsigned lo = 0, hi = 0;
  auto dots = a.family.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = static_cast<unsigned>(std::stoul(a.family));
    } else {
      lo = static_cast<unsigned>(std::stoul(a.family.substr(0, dots)));
      hi = static_cast<unsigned>(std::stoul(a.family.substr(dots + 2)));
    }
  } catch (const std::exception&) {
    std::cerr << "bench: --family wants MIN..MAX, got '" << a.family << "'\n";
    return 2;
  }
  if (lo > hi) {
    std::cerr << "bench: empty range " << a.family << "\n";
    return 2;
  }

  std::vector<Variant> machines;
  std::stringstream ms(a.machines);
  for (std::string part; std::getline(ms, part, ',');) {
    if (part == "mad")
      machines.push_back(Variant::MAD);
    else if (part == "smad")
      machines.push_back(Variant::SMAD);
    else {
      std::cerr << "bench: unknown machine '" << part << "'\n";
      return 2;
    }
  }

  bool wantMad = false;
  for (Variant v : machines) wantMad |= v == Variant::MAD;
  if (wantMad && hi > 20 && !a.force) {
    std::cerr << "bench: mad needs about 8*2^n beta transitions; n=" << hi
              << " goes past 20, pass --force if you mean it\n";
    return 2;
  }
  if (wantMad && a.inkSpace && hi > 14 && !a.force) {
    std::cerr << "bench: the need reduction behind --ink-space is exponential; n=" << hi
              << " goes past 14, pass --force if you mean it\n";
    return 2;
  }

  std::ostringstream csv;
  csv << "n,machine,beta,sk,ss,sea1,sea2,sea3,finalEnvLen,maxStateSize,inkSpaceCalculus,"
         "wallNanos\n";
  for (unsigned n = lo; n <= hi; ++n) {
    SkRef t = familyTerm(n);
    for (Variant var : machines) {
      Machine m(var, t);
      RunOptions opts;
      opts.fuel = a.fuel;
      RunStats rs = m.run(opts);
      if (!rs.halted) {
        std::cerr << "bench: fuel exhausted on n=" << n << ", raise --fuel\n";
        return 3;
      }
      std::string ink;
      if (a.inkSpace) {
        Strategy strat = var == Variant::MAD ? Strategy::Need : Strategy::SkNeed;
        EvalResult er = evaluate(t, strat, a.fuel);
        if (er.stats.fuelExhausted) {
          std::cerr << "bench: calculus fuel exhausted on n=" << n << ", raise --fuel\n";
          return 3;
        }
        ink = std::to_string(er.stats.inkSpace);
      }
      // the mad machine has no separate skeletal counter; its sub count is
      // reported in the ss column so the two variants share one layout
      csv << n << ',' << (var == Variant::MAD ? "mad" : "smad") << ',' << rs.beta << ','
          << rs.sk << ',' << (var == Variant::MAD ? rs.sub : rs.ss) << ',' << rs.sea1 << ','
          << rs.sea2 << ',' << rs.sea3 << ',' << rs.finalEnvLen << ',' << rs.maxStateSize << ','
          << ink << ',' << rs.wallNanos << "\n";
    }
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.out);
    if (!out) {
      std::cerr << "bench: cannot write " << a.out << "\n";
      return 2;
    }
    out << csv.str();
  }
  return 0;
}

struct CheckArgs {
  std::string suite;
  std::uint64_t seed = kDefaultSeed;
  unsigned cases = 0;  // 0 = suite default
  unsigned maxSize = 0;
};

int cmdCheck(const CheckArgs& a) {
  std::vector<SuiteResult> results;
  auto pick = [&](unsigned def) { return a.cases ? a.cases : def; };
  auto size = [&](unsigned def) { return a.maxSize ? a.maxSize : def; };
  auto want = [&](const char* name) { return a.suite.empty() || a.suite == name; };
  if (want("skeleton")) results.push_back(suiteSkeleton(a.seed, pick(1000), size(40)));
  if (want("diamond")) results.push_back(suiteDiamond(size(10)));
  if (want("determinism")) results.push_back(suiteDeterminism(a.seed + 1, pick(150), size(12)));
  if (want("bisim")) results.push_back(suiteBisim(a.seed + 2, pick(500), size(15), 10'000));
  if (want("audits")) results.push_back(suiteAudits(a.seed + 3, pick(40)));
  if (results.empty()) {
    std::cerr << "check: unknown suite '" << a.suite
              << "' (skeleton, diamond, determinism, bisim, audits)\n";
    return 2;
  }

  std::uint64_t failures = 0;
  for (const SuiteResult& r : results) {
    std::cout << "suite=" << r.name << " cases=" << r.cases << " failures=" << r.failures
              << "\n";
    for (const std::string& n : r.notes) std::cout << "  " << n << "\n";
    failures += r.failures;
  }
  std::cout << "seed=" << a.seed << "\n";
  std::cout << "result=" << (failures ? "FAIL" : "PASS") << "\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"call-by-need machines with skeletal sharing"};
  app.require_subcommand(1);

  std::string file, machine = "smad", strategy = "skneed";
  bool trace = false, audit = false;
  std::uint64_t fuel = kDefaultFuel;

  CLI::App* run = app.add_subcommand("run", "run an abstract machine on a closed term");
  run->add_option("--machine", machine, "mad or smad")
      ->check(CLI::IsMember({"mad", "smad"}));
  run->add_flag("--trace", trace, "print every state");
  run->add_flag("--audit", audit, "check state invariants after every transition");
  run->add_option("--fuel", fuel, "transition budget");
  run->add_option("file", file, "input term")->required();

  CLI::App* reduce = app.add_subcommand("reduce", "small-step reduction of a term");
  reduce->add_option("--strategy", strategy, "need or skneed")
      ->check(CLI::IsMember({"need", "skneed"}));
  reduce->add_flag("--trace", trace, "print every step");
  reduce->add_option("--fuel", fuel, "step budget");
  reduce->add_option("file", file, "input term")->required();

  CLI::App* skel = app.add_subcommand("skel", "skeleton and flesh of a value");
  skel->add_option("file", file, "input value")->required();

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "family benchmark, CSV output");
  bench->add_option("--family", ba.family, "index range MIN..MAX")->required();
  bench->add_option("--machines", ba.machines, "comma-separated subset of mad,smad");
  bench->add_option("--out", ba.out, "output file (default stdout)");
  bench->add_flag("--force", ba.force, "allow ranges that take very long");
  bench->add_flag("--ink-space", ba.inkSpace, "also run the calculus and record its max term size");
  bench->add_option("--fuel", ba.fuel, "transition budget per run");

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "randomized property suites");
  check->add_option("--suite", ca.suite, "skeleton, diamond, determinism, bisim or audits");
  check->add_option("--seed", ca.seed, "generator seed");
  check->add_option("--cases", ca.cases, "sample count (suite-specific default)");
  check->add_option("--max-size", ca.maxSize, "term size bound (suite-specific default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmdRun(file, machine, trace, audit, fuel);
    if (reduce->parsed()) return cmdReduce(file, strategy, trace, fuel);
    if (skel->parsed()) return cmdSkel(file);
    if (bench->parsed()) return cmdBench(ba);
    if (check->parsed()) return cmdCheck(ca);
  } catch (const std::invalid_argument& e) {  // rejected input (open term, ...)
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {  // violated audit or internal invariant
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {  // unreadable or ill-formed input
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
