#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skelmad/skterm.hpp"

namespace skelmad {

// Randomized and exhaustive property suites shared by the check subcommand
// and the acceptance tests. Each suite is deterministic for a given seed and
// reports how many cases it examined and how many checks failed; the first
// few failures are kept as printable notes.

struct SuiteResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> notes;
};

// Size-bounded generators. Values draw variables from the enclosing binders
// plus a small free-name pool, so skeletons have nontrivial flesh; closed
// terms use binders only.
SkRef randomValue(std::mt19937& rng, unsigned maxSize);
SkRef randomClosedTerm(std::mt19937& rng, unsigned maxSize);

// Marking algorithm against the recursive decomposition oracle: step count,
// mark placement, split/oracle agreement, recovery, and size accounting.
SuiteResult suiteSkeleton(std::uint64_t seed, unsigned cases, unsigned maxSize);

// Exhaustive peak enumeration over every marked term reachable from the
// initialization of every value up to maxValueSize (values enumerated up to
// renaming): one-step joins, measure decrease, unique normal form.
SuiteResult suiteDiamond(unsigned maxValueSize);

// Independent redex enumeration: every sampled term (including the terms a
// reduction passes through) admits at most one decomposition, matching the
// reducer's choice; skeletal payloads stay skeletal along the way.
SuiteResult suiteDeterminism(std::uint64_t seed, unsigned samples, unsigned maxSize);

// Machine against calculus on random closed terms: identical principal label
// sequences, and canonically equal decoded final states; terminating samples
// are counted until wantTerminating is reached.
SuiteResult suiteBisim(std::uint64_t seed, unsigned wantTerminating, unsigned maxSize,
                       std::uint64_t fuel);

// Per-transition machine audits on family and random runs, search
// transparency of the decoded state across non-principal transitions, and
// the end-of-run transition-count bounds.
SuiteResult suiteAudits(std::uint64_t seed, unsigned randomCases);

std::vector<SuiteResult> runAllSuites(std::uint64_t seed);

}  // namespace skelmad
