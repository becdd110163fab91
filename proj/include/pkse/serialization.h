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

#ifndef PKSE_SERIALIZATION_H_
#define PKSE_SERIALIZATION_H_

// JSON file formats. Big integers travel as decimal strings, every document
// carries "schema_version" and "kind", and unknown fields are rejected with
// a kInvalidFormat error naming the field.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pkse/experiments.h"
#include "pkse/paillier.h"
#include "pkse/protocol.h"
#include "pkse/tagging_index.h"

namespace pkse {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

// Either an explicit identifier -> tag table or PRP parameters.
struct TagSource {
  std::optional<std::map<Identifier, Tag>> table;
  std::uint64_t prp_key = 0;
  unsigned prp_bits = 0;

  TagPermutation Permutation() const;
  friend bool operator==(const TagSource&, const TagSource&) = default;
};

struct FixtureFile {
  std::optional<RingMode> mode;
  std::optional<std::pair<mpz_class, mpz_class>> primes;
  std::optional<unsigned> bits;
  TagSource keywords;
  TagSource documents;
  std::vector<std::pair<Identifier, std::vector<Identifier>>> lists;
  std::optional<std::size_t> list_length;

  InvertedIndex Index() const;
  friend bool operator==(const FixtureFile&, const FixtureFile&) = default;
};

// The worked three-keyword example with identity tag tables.
FixtureFile WorkedFixtureFile(RingMode mode);

json FixtureToJson(const FixtureFile& fixture);
FixtureFile FixtureFromJson(const json& j);

json KeypairToJson(const Keypair& key);
Keypair KeypairFromJson(const json& j);

// Owner-side secrets plus what the authorized user needs to query.
struct OwnerFile {
  Keypair key;
  RingMode mode = RingMode::kNoWrap;
  std::map<Identifier, Tag> keyword_table;
  UserState user;
  std::vector<PolyZn> index_polys;
  std::vector<std::vector<Residue>> padding_roots;
  MatZn mask;
};

json OwnerToJson(const OwnerFile& owner);
OwnerFile OwnerFromJson(const json& j);

json CloudToJson(const CloudState& cloud);
CloudState CloudFromJson(const json& j);

json QueryRunToJson(const QueryRun& run, const Modulus& modulus);
json ReproToJson(const ReproRecord& record);
json SweepToJson(const SweepReport& report);
json RepairToJson(const RepairReport& report);

// Reads and parses a JSON file; kInvalidFormat on I/O or syntax errors.
json ReadJsonFile(const std::string& path);
// Writes `j.dump(2)` plus a trailing newline.
void WriteJsonFile(const std::string& path, const json& j);

}  // namespace pkse

#endif  // PKSE_SERIALIZATION_H_
