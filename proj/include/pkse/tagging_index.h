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

#ifndef PKSE_TAGGING_INDEX_H_
#define PKSE_TAGGING_INDEX_H_

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pkse/paillier.h"
#include "pkse/residue_math.h"

namespace pkse {

using Identifier = std::uint64_t;
using Tag = mpz_class;

// Pseudorandom permutation from identifiers to tags: a 4-round balanced
// Feistel network over `domain_bits` (even) bits, round function keyed by
// SplitMix64. Tags are the permutation output plus one, so zero never
// occurs. An explicit table replaces the network for fixtures whose tag
// assignment is given up front.
class TagPermutation {
 public:
  TagPermutation(std::uint64_t key, unsigned domain_bits);
  static TagPermutation FromTable(std::map<Identifier, Tag> table);

  // Throws kOutOfDomain for an identifier outside the domain or table.
  Tag tag(Identifier id) const;

  const std::optional<std::map<Identifier, Tag>>& table() const {
    return table_;
  }
  std::uint64_t key() const { return key_; }
  unsigned domain_bits() const { return domain_bits_; }

 private:
  TagPermutation() = default;

  std::uint64_t key_ = 0;
  unsigned domain_bits_ = 0;
  std::optional<std::map<Identifier, Tag>> table_;
};

// Keyword tag -> document tags. Keywords are kept in ascending tag order,
// which is also the column order of the dictionary matrix.
class InvertedIndex {
 public:
  using List = std::vector<Tag>;

  // Throws kDuplicateTag for repeated keyword tags and kInvalidIndex for
  // empty lists, repeated documents within a list, or documents missing
  // from `document_universe`. The universe defaults to the union of lists.
  explicit InvertedIndex(std::vector<std::pair<Tag, List>> lists,
                         std::optional<std::vector<Tag>> document_universe =
                             std::nullopt);

  const std::map<Tag, List>& entries() const { return entries_; }
  const List& list(const Tag& keyword) const;
  std::vector<Tag> keyword_tags() const;
  const std::vector<Tag>& document_universe() const { return documents_; }
  std::size_t max_list_length() const;

 private:
  std::map<Tag, List> entries_;
  std::vector<Tag> documents_;
};

// Applies separate keyword and document permutations to an index written
// with raw identifiers.
InvertedIndex TagIndex(
    const std::vector<std::pair<Identifier, std::vector<Identifier>>>& lists,
    const TagPermutation& keywords, const TagPermutation& documents);

struct IndexPolynomials {
  std::size_t list_length = 0;  // L
  std::vector<Tag> keyword_tags;
  std::vector<PolyZn> polys;  // parallel to keyword_tags, monic degree L
  std::vector<std::vector<Residue>> padding_roots;
};

// One monic degree-L polynomial per keyword whose roots are the list's
// document tags, topped up with random padding roots from Z_n^* that avoid
// every keyword and document tag. `list_length` may raise L above the
// longest list. Throws kInvalidTag for tags that are not units of Z_n or
// collide mod n.
IndexPolynomials BuildIndexPolynomials(
    const InvertedIndex& index, const Modulus& modulus, std::uint64_t seed,
    std::optional<std::size_t> list_length = std::nullopt);

struct EncryptedIndex {
  std::vector<Tag> keyword_tags;
  // rows[k] holds the L+1 encrypted coefficients of keyword k, highest
  // degree first.
  std::vector<std::vector<Ciphertext>> rows;
};

EncryptedIndex EncryptIndex(const IndexPolynomials& polys, const PublicKey& pk,
                            std::uint64_t seed);

// Coefficient-wise decryption back to polynomials.
std::vector<PolyZn> DecryptIndex(const EncryptedIndex& index,
                                 const Keypair& key);

// (L+1) x m matrix; column k is (t^(L+1), ..., t^1) for keyword tag t_k.
// Throws kDuplicateTag or kInvalidTag (zero mod n).
MatZn BuildDictionaryMatrix(std::span<const Tag> keyword_tags,
                            std::size_t list_length, const Modulus& modulus);

// M * M_D, with M required square of matching size.
MatZn MaskDictionary(const MatZn& mask, const MatZn& dictionary);

}  // namespace pkse

#endif  // PKSE_TAGGING_INDEX_H_
