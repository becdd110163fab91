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

#include "pkse/tagging_index.h"

#include <set>

#include "doctest.h"
#include "pkse/error.h"

namespace pkse {
namespace {

std::vector<mpz_class> Ints(std::initializer_list<long> values) {
  return std::vector<mpz_class>(values.begin(), values.end());
}

InvertedIndex WorkedIndex() {
  return InvertedIndex({{1, Ints({6, 1})}, {2, Ints({2, 3})}, {3, Ints({1, 2})}});
}

const Keypair& Toy() {
  static const Keypair key = KeyFromPrimes(11, 13);
  return key;
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

TEST_CASE("Tag table fixture") {
  const auto perm = TagPermutation::FromTable({{1, 1}, {2, 2}, {3, 3}});
  CHECK(perm.tag(2) == 2);
  CHECK(CodeOf([&] { perm.tag(4); }) == ErrorCode::kOutOfDomain);
  CHECK(CodeOf([] { TagPermutation::FromTable({{1, 5}, {2, 5}}); }) ==
        ErrorCode::kDuplicateTag);
}

TEST_CASE("Feistel permutation is a deterministic bijection") {
  const TagPermutation perm(0xfeed, 8);
  CHECK(perm.tag(17) == perm.tag(17));
  std::set<Tag> outputs;
  for (Identifier id = 0; id < 256; ++id) {
    const Tag t = perm.tag(id);
    CHECK(t >= 1);
    CHECK(t <= 256);
    outputs.insert(t);
  }
  CHECK(outputs.size() == 256);
  CHECK(CodeOf([&] { perm.tag(256); }) == ErrorCode::kOutOfDomain);
  CHECK_FALSE(TagPermutation(1, 8).tag(5) == TagPermutation(2, 8).tag(5));
  CHECK_THROWS_AS(TagPermutation(1, 7), Error);
}

TEST_CASE("Feistel permutation at a wider width") {
  const TagPermutation perm(42, 16);
  std::set<Tag> outputs;
  for (Identifier id = 0; id < 65536; ++id) outputs.insert(perm.tag(id));
  CHECK(outputs.size() == 65536);
}

TEST_CASE("InvertedIndex validation") {
  const InvertedIndex index = WorkedIndex();
  CHECK(index.keyword_tags() == Ints({1, 2, 3}));
  CHECK(index.document_universe() == Ints({1, 2, 3, 6}));
  CHECK(index.max_list_length() == 2);
  CHECK(CodeOf([] { InvertedIndex({{1, Ints({2})}, {1, Ints({3})}}); }) ==
        ErrorCode::kDuplicateTag);
  CHECK(CodeOf([] { InvertedIndex({{1, InvertedIndex::List{}}}); }) == ErrorCode::kInvalidIndex);
  CHECK(CodeOf([] { InvertedIndex({{1, Ints({2, 2})}}); }) ==
        ErrorCode::kInvalidIndex);
  CHECK(CodeOf([] { InvertedIndex({{1, Ints({2, 9})}}, Ints({2, 3})); }) ==
        ErrorCode::kInvalidIndex);
  CHECK(CodeOf([&] { index.list(7); }) == ErrorCode::kUnknownKeyword);
}

TEST_CASE("TagIndex applies separate permutations") {
  const auto keywords = TagPermutation::FromTable({{10, 1}, {20, 2}});
  const auto documents = TagPermutation::FromTable({{100, 7}, {200, 9}});
  const InvertedIndex index = TagIndex({{10, {100}}, {20, {100, 200}}},
                                       keywords, documents);
  CHECK(index.list(1) == Ints({7}));
  CHECK(index.list(2) == Ints({7, 9}));
}

TEST_CASE("Index polynomials of the worked example") {
  const IndexPolynomials polys =
      BuildIndexPolynomials(WorkedIndex(), Toy().pk.modulus(), 1);
  CHECK(polys.list_length == 2);
  REQUIRE(polys.polys.size() == 3);
  CHECK(polys.polys[0].signed_coeffs() == Ints({1, -7, 6}));
  CHECK(polys.polys[1].signed_coeffs() == Ints({1, -5, 6}));
  CHECK(polys.polys[2].signed_coeffs() == Ints({1, -3, 2}));
  for (const auto& padding : polys.padding_roots) CHECK(padding.empty());
}

TEST_CASE("Single linear list") {
  const IndexPolynomials polys =
      BuildIndexPolynomials(InvertedIndex({{4, Ints({5})}}), Modulus(143), 1);
  CHECK(polys.list_length == 1);
  CHECK(polys.polys[0].signed_coeffs() == Ints({1, -5}));
}

TEST_CASE("Short lists are padded outside every tag") {
  const InvertedIndex index({{1, Ints({7})}, {3, Ints({2, 9})}});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const IndexPolynomials polys =
        BuildIndexPolynomials(index, Toy().pk.modulus(), seed);
    REQUIRE(polys.padding_roots[0].size() == 1);
    CHECK(polys.padding_roots[1].empty());
    const Residue& pad = polys.padding_roots[0][0];
    for (long tag : {7, 2, 9, 1, 3}) CHECK(pad != tag);
    CHECK(IsUnit(pad, 143));
    CHECK(polys.polys[0].degree() == 2);
    CHECK(polys.polys[1].degree() == 2);
    CHECK(PolyEval(polys.polys[0], 7) == 0);
    CHECK(PolyEval(polys.polys[0], pad) == 0);
  }
}

TEST_CASE("Padding and L override") {
  const IndexPolynomials polys = BuildIndexPolynomials(
      InvertedIndex({{1, Ints({7})}}), Toy().pk.modulus(), 3, 3);
  CHECK(polys.list_length == 3);
  CHECK(polys.padding_roots[0].size() == 2);
  CHECK(polys.padding_roots[0][0] != polys.padding_roots[0][1]);
  CHECK(CodeOf([] {
          BuildIndexPolynomials(InvertedIndex({{1, Ints({7, 8})}}),
                                Modulus(143), 3, 1);
        }) == ErrorCode::kInvalidIndex);
}

TEST_CASE("Tags must be units below n") {
  CHECK(CodeOf([] {
          BuildIndexPolynomials(InvertedIndex({{1, Ints({11})}}), Modulus(143),
                                1);
        }) == ErrorCode::kInvalidTag);
  CHECK(CodeOf([] {
          BuildIndexPolynomials(InvertedIndex({{150, Ints({2})}}),
                                Modulus(143), 1);
        }) == ErrorCode::kInvalidTag);
}

TEST_CASE("Encrypted index round trip") {
  const IndexPolynomials polys =
      BuildIndexPolynomials(WorkedIndex(), Toy().pk.modulus(), 1);
  const EncryptedIndex enc = EncryptIndex(polys, Toy().pk, 5);
  REQUIRE(enc.rows.size() == 3);
  for (const auto& row : enc.rows) CHECK(row.size() == 3);
  CHECK(enc.keyword_tags == Ints({1, 2, 3}));
  const auto decrypted = DecryptIndex(enc, Toy());
  for (std::size_t k = 0; k < 3; ++k) CHECK(decrypted[k] == polys.polys[k]);
}

TEST_CASE("Dictionary matrix") {
  const Modulus m(143);
  const MatZn dictionary = BuildDictionaryMatrix(Ints({1, 2, 3}), 2, m);
  REQUIRE(dictionary.rows() == 3);
  REQUIRE(dictionary.cols() == 3);
  const long expected[3][3] = {{1, 8, 27}, {1, 4, 9}, {1, 2, 3}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(dictionary(r, c) == expected[r][c]);
  }
  const MatZn single = BuildDictionaryMatrix(Ints({1}), 0, m);
  CHECK(single.rows() == 1);
  CHECK(single(0, 0) == 1);

  CHECK(CodeOf([&] { BuildDictionaryMatrix(Ints({2, 2}), 1, m); }) ==
        ErrorCode::kDuplicateTag);
  CHECK(CodeOf([&] { BuildDictionaryMatrix(Ints({143}), 1, m); }) ==
        ErrorCode::kInvalidTag);
}

TEST_CASE("Dictionary columns are power columns") {
  const Modulus m(mpz_class("4294967291"), mpz_class("4294967279"));
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    std::vector<Tag> tags;
    for (int k = 0; k < 4; ++k) tags.push_back(rng.InRange(1 + k * 1000, 1000 + k * 1000));
    const MatZn d = BuildDictionaryMatrix(tags, 2, m);
    for (int k = 0; k < 4; ++k) {
      const mpz_class& t = tags[k];
      CHECK(d(0, k) == m.Reduce(t * t * t));
      CHECK(d(1, k) == m.Reduce(t * t));
      CHECK(d(2, k) == m.Reduce(t));
    }
  }
}

TEST_CASE("Masking cancels") {
  const Modulus m(143);
  const MatZn dictionary = BuildDictionaryMatrix(Ints({1, 2, 3}), 2, m);
  CHECK(MaskDictionary(MatZn::Identity(3, m), dictionary) == dictionary);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const InvertiblePair mask = MatRandomInvertible(3, m, seed);
    CHECK(MatMul(mask.inverse, MaskDictionary(mask.matrix, dictionary)) ==
          dictionary);
  }
  CHECK_THROWS_AS(MaskDictionary(MatZn::Identity(2, m), dictionary), Error);
}

}  // namespace
}  // namespace pkse
