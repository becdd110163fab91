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

#ifndef PKSE_PROTOCOL_H_
#define PKSE_PROTOCOL_H_

// The online phases of the scheme between three parties: the data owner
// (setup), the search user (trapdoor generation and decoding) and the cloud
// (query evaluation). The cloud cannot multiply two Paillier ciphertexts, so
// it returns the blended weights V' together with the encrypted index and
// the user assembles the result polynomial in plaintext.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pkse/paillier.h"
#include "pkse/residue_math.h"
#include "pkse/tagging_index.h"

namespace pkse {

// kFaithfulSmallN runs the toy primes, where coefficient arithmetic wraps
// mod n. kNoWrap uses primes large enough that every intermediate value of
// the small worked examples stays below n, so Z_n algebra agrees with
// integer algebra.
enum class RingMode { kFaithfulSmallN, kNoWrap };

std::string_view RingModeName(RingMode mode);
std::optional<RingMode> ParseRingMode(std::string_view name);

// Candidate set the decoder tests for roots.
struct ScanDomain {
  enum class Kind { kDocumentUniverse, kRange, kWholeRing };

  Kind kind = Kind::kDocumentUniverse;
  mpz_class lo = 0;
  mpz_class hi = 0;

  static ScanDomain Documents() { return {}; }
  static ScanDomain Range(mpz_class lo, mpz_class hi);
  static ScanDomain WholeRing() { return {Kind::kWholeRing, 0, 0}; }

  // kWholeRing refuses moduli above kMaxWholeRingScan.
  std::vector<Residue> Materialize(const Modulus& modulus,
                                   std::span<const Tag> documents) const;
  // "documents", "ring" or "lo..hi".
  std::string Describe() const;
  static ScanDomain Parse(std::string_view text);

  friend bool operator==(const ScanDomain&, const ScanDomain&) = default;
};

inline const mpz_class kMaxWholeRingScan = mpz_class(1) << 20;

struct QuerySpec {
  std::vector<Tag> keywords;       // Q, ascending
  std::vector<Residue> randomness;  // r_1, r_2, ...
};

struct Trapdoor {
  // (top L+1 coefficients of the query polynomial) * M^-1.
  ResidueRowVector masked_vector;
  Ciphertext enc_constant;
};

struct TrapdoorResult {
  Trapdoor trapdoor;
  QuerySpec spec;
  PolyZn query_poly;
};

// Builds P'_Q = prod over non-queried keyword tags (x - t) * prod (x - r_j)
// of degree L+1 and masks its coefficients. Needs (L+1) - |f(Omega) \ Q|
// random roots: taken from `explicit_randomness` when given (each must be a
// unit of Z_n and not a keyword tag), otherwise drawn from Z_n^* avoiding
// all keyword tags and `excluded_tags`.
// Throws kEmptyQuery, kUnknownKeyword, kTooManyKeywords or
// kInvalidRandomness.
TrapdoorResult GenTrapdoor(
    std::span<const Tag> query, std::span<const Tag> all_keyword_tags,
    std::size_t list_length, const MatZn& mask_inverse, const PublicKey& pk,
    std::uint64_t seed,
    const std::optional<std::vector<Residue>>& explicit_randomness =
        std::nullopt,
    std::span<const Tag> excluded_tags = {});

struct ServerResponse {
  std::vector<Ciphertext> v_prime;  // one per keyword, column order of M_D
  EncryptedIndex enc_index;
};

// V = masked_vector * M_D', the plaintext the cloud computes before
// encrypting.
ResidueRowVector MaskedEvaluation(const Trapdoor& trapdoor,
                                  const MatZn& masked_dictionary);

ServerResponse ServerQuery(const Trapdoor& trapdoor,
                           const MatZn& masked_dictionary,
                           const EncryptedIndex& enc_index,
                           const PublicKey& pk, std::uint64_t seed);

struct QueryOutcome {
  PolyZn result_poly;            // P_R' = sum_k Dec(v'_k) * P_k
  std::vector<Residue> weights;  // Dec(v'_k)
  std::vector<Residue> accepted_roots;
  ScanDomain scan;
  RingMode mode = RingMode::kNoWrap;
};

// Decrypts V' and the index, assembles P_R' and keeps every root found in
// the scan domain. No filtering: the user cannot tell a spurious root from a
// real one.
QueryOutcome OtDecode(const ServerResponse& response, const Keypair& key,
                      const ScanDomain& scan, std::span<const Tag> documents,
                      RingMode mode);

// Second root (2 r1 r2 - 6) / (r1 + r2 - 4) of the worked query {1, 3} on
// the three-keyword example; nullopt when the denominator is not a unit.
std::optional<Residue> SpuriousRootFormula(const mpz_class& r1,
                                           const mpz_class& r2,
                                           const Modulus& modulus);

// Unencrypted recomputation of P_R' for cross-checking the encrypted path.
PolyZn PlaintextResultPolynomial(const IndexPolynomials& polys,
                                 const PolyZn& query_poly);

struct OwnerState {
  Keypair key;
  InvertedIndex index;
  IndexPolynomials polys;
  MatZn dictionary;
  MatZn mask;
  MatZn mask_inverse;
};

struct CloudState {
  PublicKey pk;
  MatZn masked_dictionary;
  EncryptedIndex enc_index;
};

// What the owner hands an authorized search user.
struct UserState {
  Keypair key;
  MatZn mask_inverse;
  std::vector<Tag> keyword_tags;
  std::vector<Tag> document_tags;
  std::size_t list_length = 0;
  RingMode mode = RingMode::kNoWrap;
};

struct SetupOptions {
  std::uint64_t seed = 0;
  bool identity_mask = false;
  std::optional<std::size_t> list_length;
  RingMode mode = RingMode::kNoWrap;
};

struct Deployment {
  OwnerState owner;
  CloudState cloud;
  UserState user;
};

// Setup and IndexGen: polynomials, mask, dictionary, encryption.
Deployment SetupDeployment(const InvertedIndex& index, const Keypair& key,
                           const SetupOptions& options);

struct UserQuery {
  std::vector<Tag> keywords;
  std::optional<std::vector<Residue>> randomness;
  std::uint64_t seed = 0;
  ScanDomain scan;
};

struct TranscriptRecord {
  std::string phase;
  std::string sender;
  std::string receiver;
  std::string digest;  // FNV-1a 64 of the serialized payload, hex
  nlohmann::json payload;
};

struct QueryRun {
  TrapdoorResult trapdoor;
  ServerResponse response;
  QueryOutcome outcome;
  std::vector<TranscriptRecord> transcript;
};

QueryRun RunFullQuery(const UserState& user, const UserQuery& query,
                      const CloudState& cloud);

// Payload helpers shared with the file formats: big integers as decimal
// strings.
nlohmann::json ToJson(const std::vector<mpz_class>& values);
nlohmann::json ToJson(const ResidueMatrix& m);
nlohmann::json ToJson(const std::vector<Ciphertext>& row);
std::string Fnv1a64Hex(std::string_view bytes);

}  // namespace pkse

#endif  // PKSE_PROTOCOL_H_
