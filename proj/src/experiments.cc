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

#include "pkse/experiments.h"

#include <algorithm>
#include <iterator>
#include <set>

#include "pkse/error.h"

namespace pkse {

namespace {

constexpr int kSampleAttemptsPerPair = 1000;

std::vector<Residue> Intersect(std::span<const Residue> a,
                               std::span<const Residue> b) {
  std::vector<Residue> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool IsSubset(std::span<const Residue> small, std::span<const Residue> big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<Residue> ToResidues(std::span<const long> values) {
  return std::vector<Residue>(values.begin(), values.end());
}

bool Admissible(const mpz_class& r, const Modulus& modulus,
                std::span<const Tag> keyword_tags) {
  const Residue reduced = modulus.Reduce(r);
  return IsUnit(reduced, modulus.n()) &&
         std::find(keyword_tags.begin(), keyword_tags.end(), reduced) ==
             keyword_tags.end();
}

}  // namespace

Keypair KeyForMode(RingMode mode, std::uint64_t key_seed) {
  if (mode == RingMode::kFaithfulSmallN) return KeyFromPrimes(11, 13);
  return KeyGen(kDefaultNoWrapBits, key_seed);
}

Fixture WorkedFixture(RingMode mode, std::uint64_t key_seed) {
  InvertedIndex index({{1, {6, 1}}, {2, {2, 3}}, {3, {1, 2}}});
  return {std::move(index), KeyForMode(mode, key_seed), mode, {1, 3}};
}

std::vector<Tag> OracleIntersection(const InvertedIndex& index,
                                    std::span<const Tag> query) {
  if (query.empty()) throw Error(ErrorCode::kEmptyQuery, "no keywords given");
  std::vector<Tag> acc;
  bool first = true;
  for (const auto& keyword : query) {
    std::vector<Tag> list = index.list(keyword);
    std::sort(list.begin(), list.end());
    acc = first ? std::move(list) : Intersect(acc, list);
    first = false;
  }
  return acc;
}

std::vector<Residue> DeclaredPadding(const IndexPolynomials& polys) {
  std::vector<Residue> out;
  for (const auto& roots : polys.padding_roots) {
    out.insert(out.end(), roots.begin(), roots.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Residue> ClassifySpurious(std::span<const Residue> accepted,
                                      std::span<const Tag> oracle,
                                      std::span<const Residue> padding) {
  std::vector<Residue> out;
  for (const auto& root : accepted) {
    if (std::find(oracle.begin(), oracle.end(), root) == oracle.end() &&
        std::find(padding.begin(), padding.end(), root) == padding.end()) {
      out.push_back(root);
    }
  }
  return out;
}

const std::vector<ReferenceRow>& ReferenceTable() {
  static const std::vector<ReferenceRow> table = {
      {5, 7, {1, 8}},   {4, 6, {1, 7}},   {6, 8, {1, 9}},   {7, 9, {1, 10}},
      {5, 15, {1, 9}},  {9, 19, {1, 14}}, {9, 27, {1, 15}},
  };
  return table;
}

ReproRecord ReproCounterexample(std::uint64_t seed) {
  const Fixture fixture = WorkedFixture(RingMode::kNoWrap);
  const Deployment deployment = SetupDeployment(
      fixture.index, fixture.key, {seed, false, std::nullopt, fixture.mode});
  const std::vector<Tag> oracle =
      OracleIntersection(fixture.index, fixture.query);

  std::set<Tag> listed;
  for (const auto& keyword : fixture.query) {
    const auto& list = fixture.index.list(keyword);
    listed.insert(list.begin(), list.end());
  }

  ReproRecord record;
  record.mode = fixture.mode;
  record.scan = ScanDomain::Range(0, 100);
  record.seed = seed;
  record.n = fixture.key.pk.n;
  record.all_pass = true;
  std::uint64_t index = 0;
  for (const auto& ref : ReferenceTable()) {
    ReproRow row;
    row.r1 = ref.r1;
    row.r2 = ref.r2;
    row.expected = ToResidues(ref.roots);
    const UserQuery query{fixture.query,
                          std::vector<Residue>{row.r1, row.r2},
                          DeriveSeed(seed, ++index), record.scan};
    const QueryRun run = RunFullQuery(deployment.user, query, deployment.cloud);
    row.decoded = run.outcome.accepted_roots;
    row.spurious = ClassifySpurious(row.decoded, oracle, {});
    row.formula = SpuriousRootFormula(row.r1, row.r2,
                                      fixture.key.pk.modulus());
    row.roots_match = row.decoded == row.expected;
    row.spurious_outside_lists =
        !row.spurious.empty() &&
        std::none_of(row.spurious.begin(), row.spurious.end(),
                     [&](const Residue& r) { return listed.count(r) > 0; });
    row.pass = row.roots_match && row.spurious_outside_lists;
    record.all_pass = record.all_pass && row.pass;
    record.rows.push_back(std::move(row));
  }
  return record;
}

SweepReport SweepRandomness(const Fixture& fixture, const SweepConfig& config) {
  const Modulus modulus = fixture.key.pk.modulus();
  const Deployment deployment =
      SetupDeployment(fixture.index, fixture.key,
                      {config.seed, false, std::nullopt, fixture.mode});
  const std::vector<Tag>& keyword_tags = deployment.user.keyword_tags;
  const std::size_t non_queried = keyword_tags.size() - fixture.query.size();
  if (deployment.user.list_length + 1 != non_queried + 2) {
    throw Error(ErrorCode::kInvalidRandomness,
                "sweep needs a query with exactly two random roots");
  }

  SweepReport report;
  report.config = config;
  report.n = modulus.n();
  report.query = fixture.query;
  report.oracle = OracleIntersection(fixture.index, fixture.query);
  const std::vector<Residue> padding =
      DeclaredPadding(deployment.owner.polys);

  std::vector<std::pair<mpz_class, mpz_class>> pairs;
  if (config.source == SweepConfig::PairSource::kExhaustive) {
    for (mpz_class r1 = config.lo; r1 <= config.hi; ++r1) {
      if (!Admissible(r1, modulus, keyword_tags)) continue;
      for (mpz_class r2 = r1 + 1; r2 <= config.hi; ++r2) {
        if (Admissible(r2, modulus, keyword_tags)) pairs.emplace_back(r1, r2);
      }
    }
  } else {
    Rng rng(DeriveSeed(config.seed, 0x5a3b1e));
    for (std::size_t i = 0; i < config.samples; ++i) {
      int attempt = 0;
      mpz_class r1, r2;
      do {
        if (++attempt > kSampleAttemptsPerPair) {
          throw Error(ErrorCode::kRandomnessExhausted,
                      "no admissible pair in " + config.lo.get_str() + ".." +
                          config.hi.get_str());
        }
        r1 = rng.InRange(config.lo, config.hi);
        r2 = rng.InRange(config.lo, config.hi);
      } while (r1 == r2 || !Admissible(r1, modulus, keyword_tags) ||
               !Admissible(r2, modulus, keyword_tags));
      if (r1 > r2) std::swap(r1, r2);
      pairs.emplace_back(r1, r2);
    }
  }

  // Each pair runs from its own derived seed, so rows depend only on their
  // position in `pairs`.
  std::uint64_t index = 0;
  for (const auto& [r1, r2] : pairs) {
    const UserQuery query{fixture.query, std::vector<Residue>{r1, r2},
                          DeriveSeed(config.seed, ++index), config.scan};
    const QueryRun run = RunFullQuery(deployment.user, query, deployment.cloud);
    SweepRow row;
    row.r1 = r1;
    row.r2 = r2;
    row.accepted = run.outcome.accepted_roots;
    row.spurious = ClassifySpurious(row.accepted, report.oracle, padding);
    row.complete = IsSubset(report.oracle, row.accepted);
    report.completeness_held = report.completeness_held && row.complete;
    if (!row.spurious.empty()) ++report.pairs_with_spurious;
    report.rows.push_back(std::move(row));
  }
  report.total_pairs = report.rows.size();
  return report;
}

RepairReport RepairStudy(const Fixture& fixture, const RepairConfig& config) {
  if (config.max_repetitions < 1) {
    throw Error(ErrorCode::kParameterTooSmall,
                "repair needs at least one repetition");
  }
  const Deployment deployment =
      SetupDeployment(fixture.index, fixture.key,
                      {config.seed, false, std::nullopt, fixture.mode});
  RepairReport report;
  report.config = config;
  report.n = fixture.key.pk.n;
  report.query = fixture.query;
  report.oracle = OracleIntersection(fixture.index, fixture.query);
  const std::vector<Residue> padding =
      DeclaredPadding(deployment.owner.polys);

  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed = DeriveSeed(config.seed, t + 1);
    RepairTrial trial;
    for (std::size_t round = 0; round < config.max_repetitions; ++round) {
      const UserQuery query{fixture.query, std::nullopt,
                            DeriveSeed(trial_seed, round), config.scan};
      const QueryRun run =
          RunFullQuery(deployment.user, query, deployment.cloud);
      const auto& roots = run.outcome.accepted_roots;
      std::vector<Residue> running =
          trial.running.empty() ? roots : Intersect(trial.running.back(), roots);
      if (!trial.running.empty() && !IsSubset(running, trial.running.back())) {
        trial.monotone = false;
      }
      if (!IsSubset(report.oracle, running)) trial.complete = false;
      trial.residual_spurious.push_back(
          ClassifySpurious(running, report.oracle, padding));
      trial.round_roots.push_back(roots);
      trial.running.push_back(std::move(running));
      if (trial.residual_spurious.back().empty()) {
        trial.rounds_to_clean = round + 1;
        break;
      }
    }
    if (trial.rounds_to_clean) {
      ++report.rounds_histogram[*trial.rounds_to_clean];
    } else {
      ++report.never_clean;
    }
    report.all_monotone = report.all_monotone && trial.monotone;
    report.all_complete = report.all_complete && trial.complete;
    report.trials.push_back(std::move(trial));
  }
  return report;
}

InvertedIndex RandomIndex(const RandomIndexParams& params, Rng& rng) {
  if (params.max_keywords < 1 || params.max_list < 1 ||
      params.documents < params.max_list) {
    throw Error(ErrorCode::kInvalidIndex, "random index parameters inconsistent");
  }
  const TagPermutation keyword_perm(rng.NextU64(), params.tag_bits);
  const TagPermutation document_perm(rng.NextU64(), params.tag_bits);
  const auto keywords = static_cast<std::size_t>(
      rng.InRange(1, static_cast<unsigned long>(params.max_keywords)).get_ui());
  std::vector<std::pair<Identifier, std::vector<Identifier>>> lists;
  for (Identifier k = 0; k < keywords; ++k) {
    const std::size_t length =
        params.uniform_lists
            ? params.max_list
            : rng.InRange(1, static_cast<unsigned long>(params.max_list))
                  .get_ui();
    std::vector<Identifier> pool(params.documents);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < length; ++i) {
      const std::size_t j =
          i + rng.Below(static_cast<unsigned long>(pool.size() - i)).get_ui();
      std::swap(pool[i], pool[j]);
    }
    pool.resize(length);
    lists.emplace_back(k, std::move(pool));
  }
  return TagIndex(lists, keyword_perm, document_perm);
}

}  // namespace pkse
