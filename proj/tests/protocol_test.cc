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

#include "pkse/protocol.h"

#include <algorithm>

#include "doctest.h"
#include "pkse/error.h"
#include "pkse/experiments.h"

namespace pkse {
namespace {

std::vector<mpz_class> Ints(std::initializer_list<long> values) {
  return std::vector<mpz_class>(values.begin(), values.end());
}

const Keypair& Wide() {
  static const Keypair key = KeyGen(32, kDefaultNoWrapKeySeed);
  return key;
}

InvertedIndex WorkedIndex() {
  return InvertedIndex({{1, Ints({6, 1})}, {2, Ints({2, 3})}, {3, Ints({1, 2})}});
}

Deployment WorkedDeployment(std::uint64_t seed = 1, bool identity = false) {
  return SetupDeployment(WorkedIndex(), Wide(),
                         {seed, identity, std::nullopt, RingMode::kNoWrap});
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidFormat;
}

std::vector<Residue> Intersect(const std::vector<Residue>& a,
                               const std::vector<Residue>& b) {
  std::vector<Residue> out;
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  }
  return out;
}

TEST_CASE("Trapdoor for the worked query") {
  const Deployment d = WorkedDeployment();
  const TrapdoorResult t =
      GenTrapdoor(Ints({1, 3}), d.user.keyword_tags, 2, d.user.mask_inverse,
                  Wide().pk, 9, Ints({5, 7}));
  // x^3 - (r1 + r2 + 2) x^2 + (r1 r2 + 2 r1 + 2 r2) x - 2 r1 r2.
  const long r1 = 5, r2 = 7;
  CHECK(t.query_poly.signed_coeffs() ==
        Ints({1, -(r1 + r2 + 2), r1 * r2 + 2 * r1 + 2 * r2, -2 * r1 * r2}));
  CHECK(t.query_poly.signed_coeffs() == Ints({1, -14, 59, -70}));
  CHECK(t.spec.keywords == Ints({1, 3}));
  CHECK(t.spec.randomness == Ints({5, 7}));
  CHECK(ToSigned(Decrypt(Wide(), t.trapdoor.enc_constant), Wide().pk.modulus()) ==
        -70);
}

TEST_CASE("Identity mask leaves the top coefficients visible") {
  const Deployment d = WorkedDeployment(1, true);
  const TrapdoorResult t =
      GenTrapdoor(Ints({1, 3}), d.user.keyword_tags, 2, d.user.mask_inverse,
                  Wide().pk, 9, Ints({5, 7}));
  const Modulus m = Wide().pk.modulus();
  CHECK(ToSigned(t.trapdoor.masked_vector(0), m) == 1);
  CHECK(ToSigned(t.trapdoor.masked_vector(1), m) == -14);
  CHECK(ToSigned(t.trapdoor.masked_vector(2), m) == 59);
}

TEST_CASE("Querying every keyword uses only random roots") {
  const Deployment d = WorkedDeployment();
  const TrapdoorResult t =
      GenTrapdoor(Ints({1, 2, 3}), d.user.keyword_tags, 2, d.user.mask_inverse,
                  Wide().pk, 4);
  CHECK(t.spec.randomness.size() == 3);
  for (long tag : {1, 2, 3}) CHECK(PolyEval(t.query_poly, tag) != 0);
}

TEST_CASE("Trapdoor errors") {
  const Deployment d = WorkedDeployment();
  const auto gen = [&](std::vector<mpz_class> q,
                       std::optional<std::vector<Residue>> r = std::nullopt) {
    return GenTrapdoor(q, d.user.keyword_tags, 2, d.user.mask_inverse,
                       Wide().pk, 1, r);
  };
  CHECK(CodeOf([&] { gen({}); }) == ErrorCode::kEmptyQuery);
  CHECK(CodeOf([&] { gen(Ints({4})); }) == ErrorCode::kUnknownKeyword);
  CHECK(CodeOf([&] { gen(Ints({1, 3}), Ints({5})); }) ==
        ErrorCode::kInvalidRandomness);
  CHECK(CodeOf([&] { gen(Ints({1, 3}), Ints({2, 7})); }) ==
        ErrorCode::kInvalidRandomness);
  CHECK(CodeOf([&] { gen(Ints({1, 3}), Ints({0, 7})); }) ==
        ErrorCode::kInvalidRandomness);

  // Four keywords with L = 1: a single-keyword query leaves three factors
  // for a degree-2 polynomial.
  const InvertedIndex wide_index(
      {{1, Ints({5})}, {2, Ints({6})}, {3, Ints({7})}, {4, Ints({8})}});
  const Deployment w = SetupDeployment(wide_index, Wide(), {});
  CHECK(CodeOf([&] {
          GenTrapdoor(Ints({1}), w.user.keyword_tags, 1, w.user.mask_inverse,
                      Wide().pk, 1);
        }) == ErrorCode::kTooManyKeywords);
  CHECK_NOTHROW(GenTrapdoor(Ints({1, 2}), w.user.keyword_tags, 1,
                            w.user.mask_inverse, Wide().pk, 1));
}

TEST_CASE("Random query roots avoid every tag") {
  const Keypair toy = KeyFromPrimes(11, 13);
  const Deployment d = SetupDeployment(WorkedIndex(), toy,
                                       {3, false, std::nullopt,
                                        RingMode::kFaithfulSmallN});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TrapdoorResult t =
        GenTrapdoor(Ints({1, 3}), d.user.keyword_tags, 2, d.user.mask_inverse,
                    toy.pk, seed, std::nullopt, Ints({1, 2, 3, 6}));
    for (const auto& r : t.spec.randomness) {
      CHECK(IsUnit(r, 143));
      for (long tag : {1, 2, 3, 6}) CHECK(r != tag);
    }
  }
}

TEST_CASE("Server evaluation of the worked query") {
  const Deployment d = WorkedDeployment();
  const TrapdoorResult t =
      GenTrapdoor(Ints({1, 3}), d.user.keyword_tags, 2, d.user.mask_inverse,
                  Wide().pk, 9, Ints({5, 7}));
  const long r1 = 5, r2 = 7;
  const ResidueRowVector v = MaskedEvaluation(t.trapdoor, d.cloud.masked_dictionary);
  CHECK(v(0) == r1 * r2 + r1 + r2 - 1);
  CHECK(v(1) == 2 * r1 * r2);
  CHECK(v(2) == 3 * r1 * r2 - 3 * r1 - 3 * r2 + 9);

  const ServerResponse response =
      ServerQuery(t.trapdoor, d.cloud.masked_dictionary, d.cloud.enc_index,
                  Wide().pk, 3);
  REQUIRE(response.v_prime.size() == 3);
  const Modulus m = Wide().pk.modulus();
  CHECK(ToSigned(Decrypt(Wide(), response.v_prime[0]), m) == -24);
  CHECK(Decrypt(Wide(), response.v_prime[1]) == 0);
  CHECK(ToSigned(Decrypt(Wide(), response.v_prime[2]), m) == 8);

  EncryptedIndex truncated = d.cloud.enc_index;
  truncated.rows.pop_back();
  CHECK(CodeOf([&] {
          ServerQuery(t.trapdoor, d.cloud.masked_dictionary, truncated,
                      Wide().pk, 3);
        }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("Decoding the worked query admits the spurious root") {
  const Deployment d = WorkedDeployment();
  const UserQuery q{Ints({1, 3}), Ints({5, 7}), 11, ScanDomain::Range(0, 100)};
  const QueryRun run = RunFullQuery(d.user, q, d.cloud);
  CHECK(run.outcome.result_poly.signed_coeffs() == Ints({-16, 144, -128}));
  CHECK(run.outcome.accepted_roots == Ints({1, 8}));
  CHECK(run.outcome.mode == RingMode::kNoWrap);

  const UserQuery q46{Ints({1, 3}), Ints({4, 6}), 11, ScanDomain::Range(0, 100)};
  CHECK(RunFullQuery(d.user, q46, d.cloud).outcome.accepted_roots ==
        Ints({1, 7}));
}

TEST_CASE("Single-keyword queries decode exactly the list") {
  const Deployment d = WorkedDeployment();
  const std::vector<Residue> docs = d.user.document_tags;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QueryRun two = RunFullQuery(
        d.user, {Ints({2}), std::nullopt, seed, ScanDomain::Documents()},
        d.cloud);
    CHECK(Intersect(two.outcome.accepted_roots, docs) == Ints({2, 3}));
    const QueryRun one = RunFullQuery(
        d.user, {Ints({1}), std::nullopt, seed, ScanDomain::Documents()},
        d.cloud);
    CHECK(Intersect(one.outcome.accepted_roots, docs) == Ints({1, 6}));
  }
}

TEST_CASE("Spurious root formula") {
  const Modulus m = Wide().pk.modulus();
  CHECK(SpuriousRootFormula(5, 7, m) == mpz_class(8));
  CHECK(SpuriousRootFormula(9, 27, m) == mpz_class(15));
  CHECK(SpuriousRootFormula(4, 6, m) == mpz_class(7));
  CHECK_FALSE(SpuriousRootFormula(1, 3, m).has_value());
  CHECK_FALSE(SpuriousRootFormula(m.n() - 1, 5, m).has_value());
}

TEST_CASE("Second root vanishes when r1 + r2 = 4") {
  const Deployment d = WorkedDeployment();
  const mpz_class minus_one = Wide().pk.n - 1;
  const QueryRun run = RunFullQuery(
      d.user,
      {Ints({1, 3}), std::vector<Residue>{minus_one, 5}, 2,
       ScanDomain::Range(0, 100)},
      d.cloud);
  CHECK(run.outcome.accepted_roots == Ints({1}));
  // The linear factor degenerates to the constant 2 r1 r2 - 6 = -16.
  CHECK(run.outcome.result_poly.signed_coeffs() == Ints({-32, 32}));
}

TEST_CASE("Encrypted path equals the plaintext recomputation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Deployment d = WorkedDeployment(seed);
    const QueryRun run = RunFullQuery(
        d.user, {Ints({1, 3}), std::nullopt, seed, ScanDomain::Documents()},
        d.cloud);
    CHECK(run.outcome.result_poly ==
          PlaintextResultPolynomial(d.owner.polys, run.trapdoor.query_poly));
  }
}

TEST_CASE("Mask cancellation and zero weights at non-queried keywords") {
  Rng rng(77);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Deployment d = WorkedDeployment(seed);
    const TrapdoorResult t =
        GenTrapdoor(Ints({2}), d.user.keyword_tags, 2, d.user.mask_inverse,
                    Wide().pk, seed);
    ResidueRowVector top(3);
    for (int i = 0; i < 3; ++i) top(i) = t.query_poly.coeffs()[i];
    CHECK(MaskedEvaluation(t.trapdoor, d.cloud.masked_dictionary) ==
          VecMatMul(top, d.owner.dictionary));

    const ServerResponse response =
        ServerQuery(t.trapdoor, d.cloud.masked_dictionary, d.cloud.enc_index,
                    Wide().pk, seed);
    CHECK(Decrypt(Wide(), response.v_prime[0]) == 0);
    CHECK(Decrypt(Wide(), response.v_prime[2]) == 0);
    CHECK(Decrypt(Wide(), response.v_prime[1]) ==
          PolyEval(t.query_poly, 2));
  }
}

TEST_CASE("Decoded roots do not depend on the mask") {
  const UserQuery q{Ints({1, 3}), Ints({5, 7}), 5, ScanDomain::Range(0, 100)};
  const Deployment plain = WorkedDeployment(1, true);
  const auto expected = RunFullQuery(plain.user, q, plain.cloud).outcome;
  for (std::uint64_t seed = 2; seed < 12; ++seed) {
    const Deployment masked = WorkedDeployment(seed);
    const auto outcome = RunFullQuery(masked.user, q, masked.cloud).outcome;
    CHECK(outcome.accepted_roots == expected.accepted_roots);
    CHECK(outcome.result_poly == expected.result_poly);
  }
}

TEST_CASE("Transcript records every phase") {
  const Deployment d = WorkedDeployment();
  const QueryRun run = RunFullQuery(
      d.user, {Ints({1, 3}), Ints({5, 7}), 1, ScanDomain::Range(0, 100)},
      d.cloud);
  REQUIRE(run.transcript.size() == 4);
  CHECK(run.transcript[0].phase == "IndexGen");
  CHECK(run.transcript[1].phase == "TrapdoorGen");
  CHECK(run.transcript[1].sender == "user");
  CHECK(run.transcript[1].receiver == "cloud");
  CHECK(run.transcript[2].phase == "Query");
  CHECK(run.transcript[3].phase == "OT");
  for (const auto& record : run.transcript) {
    CHECK(record.digest == Fnv1a64Hex(record.payload.dump()));
  }
  CHECK(run.transcript[3].payload["accepted_roots"] ==
        nlohmann::json::array({"1", "8"}));
  CHECK(Fnv1a64Hex("") == "cbf29ce484222325");
  CHECK(Fnv1a64Hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("Scan domains") {
  const Modulus toy(143);
  CHECK(ScanDomain::Parse("0..3").Materialize(toy, {}) == Ints({0, 1, 2, 3}));
  CHECK(ScanDomain::Parse("documents").Materialize(toy, Ints({4, 9})) ==
        Ints({4, 9}));
  CHECK(ScanDomain::Parse("ring").Materialize(toy, {}).size() == 143);
  CHECK(ScanDomain::Parse("0..100").Describe() == "0..100");
  CHECK(CodeOf([] { ScanDomain::Parse("5..1"); }) ==
        ErrorCode::kInvalidScanDomain);
  CHECK(CodeOf([] { ScanDomain::Parse("all"); }) ==
        ErrorCode::kInvalidScanDomain);
  CHECK(CodeOf([] {
          ScanDomain::WholeRing().Materialize(Wide().pk.modulus(), {});
        }) == ErrorCode::kInvalidScanDomain);
}

TEST_CASE("Completeness on random padded instances") {
  Rng rng(2024);
  int checked = 0;
  while (checked < 40) {
    const InvertedIndex index = RandomIndex({}, rng);
    const auto keywords = index.keyword_tags();
    std::vector<Tag> query;
    for (const auto& k : keywords) {
      if (rng.Below(2) == 0) query.push_back(k);
    }
    if (query.empty()) query.push_back(keywords.front());
    const Deployment d = SetupDeployment(index, Wide(), {rng.NextU64()});
    if (keywords.size() - query.size() > d.user.list_length + 1) continue;
    const QueryRun run = RunFullQuery(
        d.user, {query, std::nullopt, rng.NextU64(), ScanDomain::Documents()},
        d.cloud);
    for (const auto& tag : OracleIntersection(index, query)) {
      CHECK(PolyEval(run.outcome.result_poly, tag) == 0);
    }
    ++checked;
  }
}

}  // namespace
}  // namespace pkse
