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

#include <algorithm>
#include <set>
#include <string>

#include "pkse/error.h"
#include "pkse/random.h"

namespace pkse {

namespace {

constexpr int kFeistelRounds = 4;
constexpr int kPaddingAttempts = 1000;

void CheckTagRange(const Tag& tag, const Modulus& modulus) {
  if (tag <= 0 || tag >= modulus.n() || !IsUnit(tag, modulus.n())) {
    throw Error(ErrorCode::kInvalidTag,
                "tag " + tag.get_str() + " is not a unit of Z_" +
                    modulus.n().get_str());
  }
}

}  // namespace

TagPermutation::TagPermutation(std::uint64_t key, unsigned domain_bits)
    : key_(key), domain_bits_(domain_bits) {
  if (domain_bits < 2 || domain_bits > 62 || domain_bits % 2 != 0) {
    throw Error(ErrorCode::kOutOfDomain,
                "domain width must be even and in [2, 62], got " +
                    std::to_string(domain_bits));
  }
}

TagPermutation TagPermutation::FromTable(std::map<Identifier, Tag> table) {
  std::set<Tag> seen;
  for (const auto& [id, tag] : table) {
    if (tag <= 0) {
      throw Error(ErrorCode::kInvalidTag,
                  "tag for identifier " + std::to_string(id) +
                      " must be positive");
    }
    if (!seen.insert(tag).second) {
      throw Error(ErrorCode::kDuplicateTag,
                  "tag " + tag.get_str() + " assigned twice");
    }
  }
  TagPermutation perm;
  perm.table_ = std::move(table);
  return perm;
}

Tag TagPermutation::tag(Identifier id) const {
  if (table_) {
    auto it = table_->find(id);
    if (it == table_->end()) {
      throw Error(ErrorCode::kOutOfDomain,
                  "identifier " + std::to_string(id) + " not in tag table");
    }
    return it->second;
  }
  if (id >> domain_bits_ != 0) {
    throw Error(ErrorCode::kOutOfDomain,
                "identifier " + std::to_string(id) + " exceeds " +
                    std::to_string(domain_bits_) + " bits");
  }
  const unsigned half = domain_bits_ / 2;
  const std::uint64_t mask = (std::uint64_t{1} << half) - 1;
  std::uint64_t left = id >> half;
  std::uint64_t right = id & mask;
  for (int round = 0; round < kFeistelRounds; ++round) {
    const std::uint64_t f =
        Mix64(key_ ^ Mix64(right ^ (std::uint64_t(round) << 56))) & mask;
    const std::uint64_t next = left ^ f;
    left = right;
    right = next;
  }
  const std::uint64_t out = (left << half) | right;
  return Tag(static_cast<unsigned long>(out)) + 1;
}

InvertedIndex::InvertedIndex(std::vector<std::pair<Tag, List>> lists,
                             std::optional<std::vector<Tag>> document_universe) {
  std::set<Tag> union_docs;
  for (auto& [keyword, docs] : lists) {
    if (docs.empty()) {
      throw Error(ErrorCode::kInvalidIndex,
                  "keyword " + keyword.get_str() + " has an empty list");
    }
    std::set<Tag> distinct(docs.begin(), docs.end());
    if (distinct.size() != docs.size()) {
      throw Error(ErrorCode::kInvalidIndex,
                  "keyword " + keyword.get_str() + " repeats a document");
    }
    union_docs.insert(distinct.begin(), distinct.end());
    if (!entries_.emplace(keyword, std::move(docs)).second) {
      throw Error(ErrorCode::kDuplicateTag,
                  "keyword tag " + keyword.get_str() + " appears twice");
    }
  }
  if (document_universe) {
    std::set<Tag> universe(document_universe->begin(),
                           document_universe->end());
    if (universe.size() != document_universe->size()) {
      throw Error(ErrorCode::kDuplicateTag, "document universe repeats a tag");
    }
    for (const auto& doc : union_docs) {
      if (!universe.count(doc)) {
        throw Error(ErrorCode::kInvalidIndex,
                    "document " + doc.get_str() + " outside the universe");
      }
    }
    documents_.assign(universe.begin(), universe.end());
  } else {
    documents_.assign(union_docs.begin(), union_docs.end());
  }
}

const InvertedIndex::List& InvertedIndex::list(const Tag& keyword) const {
  auto it = entries_.find(keyword);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kUnknownKeyword,
                "keyword tag " + keyword.get_str() + " not in index");
  }
  return it->second;
}

std::vector<Tag> InvertedIndex::keyword_tags() const {
  std::vector<Tag> out;
  out.reserve(entries_.size());
  for (const auto& [keyword, docs] : entries_) out.push_back(keyword);
  return out;
}

std::size_t InvertedIndex::max_list_length() const {
  std::size_t longest = 0;
  for (const auto& [keyword, docs] : entries_) {
    longest = std::max(longest, docs.size());
  }
  return longest;
}

InvertedIndex TagIndex(
    const std::vector<std::pair<Identifier, std::vector<Identifier>>>& lists,
    const TagPermutation& keywords, const TagPermutation& documents) {
  std::vector<std::pair<Tag, InvertedIndex::List>> tagged;
  tagged.reserve(lists.size());
  for (const auto& [keyword, docs] : lists) {
    InvertedIndex::List doc_tags;
    doc_tags.reserve(docs.size());
    for (Identifier doc : docs) doc_tags.push_back(documents.tag(doc));
    tagged.emplace_back(keywords.tag(keyword), std::move(doc_tags));
  }
  return InvertedIndex(std::move(tagged));
}

IndexPolynomials BuildIndexPolynomials(const InvertedIndex& index,
                                       const Modulus& modulus,
                                       std::uint64_t seed,
                                       std::optional<std::size_t> list_length) {
  const std::size_t longest = index.max_list_length();
  IndexPolynomials out;
  out.list_length = list_length.value_or(longest);
  if (out.list_length < longest) {
    throw Error(ErrorCode::kInvalidIndex,
                "list length " + std::to_string(out.list_length) +
                    " below longest list " + std::to_string(longest));
  }

  std::set<Residue> all_tags;
  for (const auto& keyword : index.keyword_tags()) {
    CheckTagRange(keyword, modulus);
    all_tags.insert(keyword);
  }
  for (const auto& doc : index.document_universe()) {
    CheckTagRange(doc, modulus);
    all_tags.insert(doc);
  }

  Rng rng(seed);
  for (const auto& [keyword, docs] : index.entries()) {
    std::vector<Residue> roots(docs.begin(), docs.end());
    std::vector<Residue> padding;
    while (roots.size() < out.list_length) {
      int attempt = 0;
      Residue candidate;
      do {
        if (++attempt > kPaddingAttempts) {
          throw Error(ErrorCode::kRandomnessExhausted,
                      "no admissible padding root for keyword " +
                          keyword.get_str());
        }
        candidate = rng.InRange(1, modulus.n() - 1);
      } while (!IsUnit(candidate, modulus.n()) || all_tags.count(candidate) ||
               std::find(padding.begin(), padding.end(), candidate) !=
                   padding.end());
      padding.push_back(candidate);
      roots.push_back(candidate);
    }
    out.keyword_tags.push_back(keyword);
    out.polys.push_back(PolyFromRoots(roots, modulus));
    out.padding_roots.push_back(std::move(padding));
  }
  return out;
}

EncryptedIndex EncryptIndex(const IndexPolynomials& polys, const PublicKey& pk,
                            std::uint64_t seed) {
  Rng rng(seed);
  EncryptedIndex out;
  out.keyword_tags = polys.keyword_tags;
  for (const auto& poly : polys.polys) {
    std::vector<Ciphertext> row;
    row.reserve(poly.coeffs().size());
    for (const auto& c : poly.coeffs()) row.push_back(Encrypt(pk, c, rng));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<PolyZn> DecryptIndex(const EncryptedIndex& index,
                                 const Keypair& key) {
  std::vector<PolyZn> out;
  out.reserve(index.rows.size());
  for (const auto& row : index.rows) {
    std::vector<mpz_class> coeffs;
    coeffs.reserve(row.size());
    for (const auto& c : row) coeffs.push_back(Decrypt(key, c));
    out.emplace_back(std::move(coeffs), key.pk.modulus());
  }
  return out;
}

MatZn BuildDictionaryMatrix(std::span<const Tag> keyword_tags,
                            std::size_t list_length, const Modulus& modulus) {
  std::set<Residue> seen;
  for (const auto& t : keyword_tags) {
    const Residue r = modulus.Reduce(t);
    if (r == 0) {
      throw Error(ErrorCode::kInvalidTag,
                  "keyword tag " + t.get_str() + " is zero mod n");
    }
    if (!seen.insert(r).second) {
      throw Error(ErrorCode::kDuplicateTag,
                  "keyword tag " + t.get_str() + " repeated");
    }
  }
  const auto rows = static_cast<Eigen::Index>(list_length + 1);
  const auto cols = static_cast<Eigen::Index>(keyword_tags.size());
  ResidueMatrix entries(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    // Fill bottom-up: t^1 in the last row, t^(L+1) in the first.
    Residue power = modulus.Reduce(keyword_tags[k]);
    const Residue base = power;
    for (Eigen::Index i = rows - 1; i >= 0; --i) {
      entries(i, k) = power;
      power = modulus.Reduce(power * base);
    }
  }
  return MatZn(std::move(entries), modulus);
}

MatZn MaskDictionary(const MatZn& mask, const MatZn& dictionary) {
  if (mask.rows() != mask.cols() || mask.cols() != dictionary.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask must be square with side " +
                    std::to_string(dictionary.rows()));
  }
  return MatMul(mask, dictionary);
}

}  // namespace pkse
