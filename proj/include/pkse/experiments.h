/*
 * Copyright 2026 The pkse Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PKSE_EXPERIMENTS_H_
#define PKSE_EXPERIMENTS_H_

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pkse/paillier.h"
#include "pkse/protocol.h"
#include "pkse/random.h"
#include "pkse/tagging_index.h"

namespace pkse {

// Key seed for the default no-wrap deployment (two 32-bit primes).
inline constexpr std::uint64_t kDefaultNoWrapKeySeed = 2015;
inline constexpr unsigned kDefaultNoWrapBits = 32;

struct Fixture {
  InvertedIndex index;
  Keypair key;
  RingMode mode = RingMode::kNoWrap;
  std::vector<Tag> query;
};

// Three keywords tagged 1, 2, 3 with lists {6, 1}, {2, 3}, {1, 2}, L = 2,
// query {1, 3}. Faithful mode uses p = 11, q = 13; no-wrap mode generates
// 32-bit primes from `key_seed`.
Fixture WorkedFixture(RingMode mode,
                     std::uint64_t key_seed = kDefaultNoWrapKeySeed);

Keypair KeyForMode(RingMode mode, std::uint64_t key_seed);

// Plain set intersection of the queried lists. Throws kUnknownKeyword.
std::vector<Tag> OracleIntersection(const InvertedIndex& index,
                                    std::span<const Tag> query);

// Roots the decoder may legitimately accept beyond the intersection:
// padding roots of any keyword.
std::vector<Residue> DeclaredPadding(const IndexPolynomials& polys);

// accepted \ (oracle u padding), ascending.
std::vector<Residue> ClassifySpurious(std::span<const Residue> accepted,
                                      std::span<const Tag> oracle,
                                      std::span<const Residue> padding);

struct ReferenceRow {
  long r1;
  long r2;
  std::vector<long> roots;
};

// The worked (5, 7) case followed by the six tabulated pairs.
const std::vector<ReferenceRow>& ReferenceTable();

struct ReproRow {
  mpz_class r1;
  mpz_class r2;
  std::vector<Residue> expected;
  std::vector<Residue> decoded;
  std::vector<Residue> spurious;
  std::optional<Residue> formula;
  bool roots_match = false;
  bool spurious_outside_lists = false;
  bool pass = false;
};

struct ReproRecord {
  RingMode mode = RingMode::kNoWrap;
  ScanDomain scan;
  std::uint64_t seed = 0;
  mpz_class n;
  std::vector<ReproRow> rows;
  bool all_pass = false;
};

// Runs the worked example for every tabulated pair in no-wrap mode, scanning
// [0, 100], and checks the decoded roots against the table. Failures are
// recorded, not thrown.
ReproRecord ReproCounterexample(std::uint64_t seed = 1);

struct SweepConfig {
  enum class PairSource { kExhaustive, kSampled };

  RingMode mode = RingMode::kNoWrap;
  mpz_class lo = 4;
  mpz_class hi = 50;
  ScanDomain scan = ScanDomain::Range(0, 100);
  PairSource source = PairSource::kExhaustive;
  std::size_t samples = 0;  // kSampled only
  std::uint64_t seed = 1;
};

struct SweepRow {
  mpz_class r1;
  mpz_class r2;
  std::vector<Residue> accepted;
  std::vector<Residue> spurious;
  bool complete = false;  // oracle intersection is within accepted
};

struct SweepReport {
  SweepConfig config;
  mpz_class n;
  std::vector<Tag> query;
  std::vector<Tag> oracle;
  std::size_t total_pairs = 0;
  std::size_t pairs_with_spurious = 0;
  bool completeness_held = true;
  std::vector<SweepRow> rows;
};

// Admissible pairs are r1 < r2 in [lo, hi], both units of Z_n and neither a
// keyword tag. Exhaustive mode visits all of them in lexicographic order;
// sampled mode draws `samples` of them from the seed. The fixture's query
// must need exactly two random roots.
SweepReport SweepRandomness(const Fixture& fixture, const SweepConfig& config);

struct RepairConfig {
  RingMode mode = RingMode::kFaithfulSmallN;
  std::size_t max_repetitions = 5;
  std::size_t trials = 1000;
  ScanDomain scan = ScanDomain::Range(0, 100);
  std::uint64_t seed = 42;
};

struct RepairTrial {
  std::vector<std::vector<Residue>> round_roots;
  std::vector<std::vector<Residue>> running;  // cumulative intersection
  std::vector<std::vector<Residue>> residual_spurious;
  std::optional<std::size_t> rounds_to_clean;
  bool monotone = true;
  bool complete = true;
};

struct RepairReport {
  RepairConfig config;
  mpz_class n;
  std::vector<Tag> query;
  std::vector<Tag> oracle;
  std::vector<RepairTrial> trials;
  std::map<std::size_t, std::size_t> rounds_histogram;
  std::size_t never_clean = 0;
  bool all_monotone = true;
  bool all_complete = true;
};

// Repeats the fixture's query with fresh randomness, intersecting the
// accepted roots after each round, until the intersection equals the
// oracle result or the budget runs out.
RepairReport RepairStudy(const Fixture& fixture, const RepairConfig& config);

struct RandomIndexParams {
  std::size_t max_keywords = 5;
  std::size_t max_list = 4;
  std::size_t documents = 10;
  bool uniform_lists = false;  // every list exactly max_list long
  unsigned tag_bits = 12;
};

// Random index over PRP-tagged identifiers; keyword and document tags come
// from independently keyed permutations.
InvertedIndex RandomIndex(const RandomIndexParams& params, Rng& rng);

}  // namespace pkse

#endif  // PKSE_EXPERIMENTS_H_
