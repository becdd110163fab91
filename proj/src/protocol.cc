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
#include <cstdio>
#include <set>

#include "pkse/error.h"
#include "pkse/random.h"

namespace pkse {

namespace {

constexpr int kRandomnessAttempts = 10000;

std::vector<Tag> SortedUnique(std::span<const Tag> tags) {
  std::vector<Tag> out(tags.begin(), tags.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Contains(std::span<const Tag> sorted, const Tag& t) {
  return std::binary_search(sorted.begin(), sorted.end(), t);
}

TranscriptRecord MakeRecord(std::string phase, std::string sender,
                            std::string receiver, nlohmann::json payload) {
  TranscriptRecord record;
  record.phase = std::move(phase);
  record.sender = std::move(sender);
  record.receiver = std::move(receiver);
  record.digest = Fnv1a64Hex(payload.dump());
  record.payload = std::move(payload);
  return record;
}

}  // namespace

std::string_view RingModeName(RingMode mode) {
  switch (mode) {
    case RingMode::kFaithfulSmallN: return "faithful";
    case RingMode::kNoWrap: return "no-wrap";
  }
  return "unknown";
}

std::optional<RingMode> ParseRingMode(std::string_view name) {
  if (name == "faithful") return RingMode::kFaithfulSmallN;
  if (name == "no-wrap") return RingMode::kNoWrap;
  return std::nullopt;
}

ScanDomain ScanDomain::Range(mpz_class lo, mpz_class hi) {
  if (lo > hi) {
    throw Error(ErrorCode::kInvalidScanDomain,
                "empty range " + lo.get_str() + ".." + hi.get_str());
  }
  return {Kind::kRange, std::move(lo), std::move(hi)};
}

std::vector<Residue> ScanDomain::Materialize(
    const Modulus& modulus, std::span<const Tag> documents) const {
  std::vector<Residue> out;
  switch (kind) {
    case Kind::kDocumentUniverse:
      out.assign(documents.begin(), documents.end());
      break;
    case Kind::kRange:
      for (mpz_class t = lo; t <= hi; ++t) out.push_back(t);
      break;
    case Kind::kWholeRing:
      if (modulus.n() > kMaxWholeRingScan) {
        throw Error(ErrorCode::kInvalidScanDomain,
                    "whole-ring scan refused for n = " +
                        modulus.n().get_str());
      }
      for (mpz_class t = 0; t < modulus.n(); ++t) out.push_back(t);
      break;
  }
  return out;
}

std::string ScanDomain::Describe() const {
  switch (kind) {
    case Kind::kDocumentUniverse: return "documents";
    case Kind::kWholeRing: return "ring";
    case Kind::kRange: return lo.get_str() + ".." + hi.get_str();
  }
  return "";
}

ScanDomain ScanDomain::Parse(std::string_view text) {
  if (text == "documents") return Documents();
  if (text == "ring") return WholeRing();
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidScanDomain,
                "expected 'documents', 'ring' or 'lo..hi', got '" +
                    std::string(text) + "'");
  }
  mpz_class lo, hi;
  if (lo.set_str(std::string(text.substr(0, dots)), 10) != 0 ||
      hi.set_str(std::string(text.substr(dots + 2)), 10) != 0) {
    throw Error(ErrorCode::kInvalidScanDomain,
                "bad range '" + std::string(text) + "'");
  }
  return Range(lo, hi);
}

TrapdoorResult GenTrapdoor(
    std::span<const Tag> query, std::span<const Tag> all_keyword_tags,
    std::size_t list_length, const MatZn& mask_inverse, const PublicKey& pk,
    std::uint64_t seed,
    const std::optional<std::vector<Residue>>& explicit_randomness,
    std::span<const Tag> excluded_tags) {
  const Modulus modulus = pk.modulus();
  if (query.empty()) throw Error(ErrorCode::kEmptyQuery, "no keywords given");
  const std::vector<Tag> keywords = SortedUnique(all_keyword_tags);
  const std::vector<Tag> queried = SortedUnique(query);
  for (const auto& q : queried) {
    if (!Contains(keywords, q)) {
      throw Error(ErrorCode::kUnknownKeyword,
                  "keyword tag " + q.get_str() + " not in the dictionary");
    }
  }
  std::vector<Residue> roots;
  for (const auto& t : keywords) {
    if (!Contains(queried, t)) roots.push_back(t);
  }
  if (roots.size() > list_length + 1) {
    throw Error(ErrorCode::kTooManyKeywords,
                std::to_string(roots.size()) +
                    " non-queried keywords exceed query degree " +
                    std::to_string(list_length + 1));
  }
  const std::size_t needed = list_length + 1 - roots.size();

  Rng rng(seed);
  std::vector<Residue> randomness;
  if (explicit_randomness) {
    if (explicit_randomness->size() != needed) {
      throw Error(ErrorCode::kInvalidRandomness,
                  "query needs " + std::to_string(needed) +
                      " random roots, got " +
                      std::to_string(explicit_randomness->size()));
    }
    for (const auto& r : *explicit_randomness) {
      const Residue reduced = modulus.Reduce(r);
      if (!IsUnit(reduced, modulus.n()) || Contains(keywords, reduced)) {
        throw Error(ErrorCode::kInvalidRandomness,
                    r.get_str() + " is a keyword tag or not in Z_n^*");
      }
      randomness.push_back(reduced);
    }
  } else {
    const std::vector<Tag> excluded = SortedUnique(excluded_tags);
    while (randomness.size() < needed) {
      int attempt = 0;
      Residue r;
      do {
        if (++attempt > kRandomnessAttempts) {
          throw Error(ErrorCode::kRandomnessExhausted,
                      "no admissible query randomness");
        }
        r = rng.InRange(1, modulus.n() - 1);
      } while (!IsUnit(r, modulus.n()) || Contains(keywords, r) ||
               Contains(excluded, r) ||
               std::find(randomness.begin(), randomness.end(), r) !=
                   randomness.end());
      randomness.push_back(r);
    }
  }
  roots.insert(roots.end(), randomness.begin(), randomness.end());

  PolyZn query_poly = PolyFromRoots(roots, modulus);
  const auto& coeffs = query_poly.coeffs();
  ResidueRowVector top(static_cast<Eigen::Index>(list_length + 1));
  for (std::size_t i = 0; i <= list_length; ++i) {
    top(static_cast<Eigen::Index>(i)) = coeffs[i];
  }
  Trapdoor trapdoor{VecMatMul(top, mask_inverse),
                    Encrypt(pk, coeffs.back(), rng)};
  return {std::move(trapdoor), QuerySpec{queried, std::move(randomness)},
          std::move(query_poly)};
}

ResidueRowVector MaskedEvaluation(const Trapdoor& trapdoor,
                                  const MatZn& masked_dictionary) {
  return VecMatMul(trapdoor.masked_vector, masked_dictionary);
}

ServerResponse ServerQuery(const Trapdoor& trapdoor,
                           const MatZn& masked_dictionary,
                           const EncryptedIndex& enc_index,
                           const PublicKey& pk, std::uint64_t seed) {
  if (static_cast<std::size_t>(masked_dictionary.cols()) !=
      enc_index.rows.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dictionary has " + std::to_string(masked_dictionary.cols()) +
                    " keyword columns, index has " +
                    std::to_string(enc_index.rows.size()) + " rows");
  }
  const ResidueRowVector v = MaskedEvaluation(trapdoor, masked_dictionary);
  Rng rng(seed);
  ServerResponse response;
  response.v_prime.reserve(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    response.v_prime.push_back(
        HomAdd(Encrypt(pk, v(k), rng), trapdoor.enc_constant));
  }
  response.enc_index = enc_index;
  return response;
}

QueryOutcome OtDecode(const ServerResponse& response, const Keypair& key,
                      const ScanDomain& scan, std::span<const Tag> documents,
                      RingMode mode) {
  const Modulus modulus = key.pk.modulus();
  if (response.v_prime.size() != response.enc_index.rows.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "response weights and index rows disagree");
  }
  const std::vector<PolyZn> polys = DecryptIndex(response.enc_index, key);
  QueryOutcome outcome{PolyZn::Zero(modulus), {}, {}, scan, mode};
  for (std::size_t k = 0; k < polys.size(); ++k) {
    Residue weight = Decrypt(key, response.v_prime[k]);
    outcome.result_poly =
        PolyAdd(outcome.result_poly, PolyScale(polys[k], weight));
    outcome.weights.push_back(std::move(weight));
  }
  outcome.accepted_roots = FindRoots(outcome.result_poly,
                                     scan.Materialize(modulus, documents));
  return outcome;
}

std::optional<Residue> SpuriousRootFormula(const mpz_class& r1,
                                           const mpz_class& r2,
                                           const Modulus& modulus) {
  const Residue denominator = modulus.Reduce(r1 + r2 - 4);
  if (!IsUnit(denominator, modulus.n())) return std::nullopt;
  return modulus.Reduce((2 * r1 * r2 - 6) * ModInv(denominator, modulus));
}

PolyZn PlaintextResultPolynomial(const IndexPolynomials& polys,
                                 const PolyZn& query_poly) {
  PolyZn result = PolyZn::Zero(query_poly.modulus());
  for (std::size_t k = 0; k < polys.polys.size(); ++k) {
    const Residue weight = PolyEval(query_poly, polys.keyword_tags[k]);
    result = PolyAdd(result, PolyScale(polys.polys[k], weight));
  }
  return result;
}

Deployment SetupDeployment(const InvertedIndex& index, const Keypair& key,
                           const SetupOptions& options) {
  const Modulus modulus = key.pk.modulus();
  IndexPolynomials polys = BuildIndexPolynomials(
      index, modulus, DeriveSeed(options.seed, 0), options.list_length);
  const auto dim = static_cast<Eigen::Index>(polys.list_length + 1);
  InvertiblePair mask =
      options.identity_mask
          ? InvertiblePair{MatZn::Identity(dim, modulus),
                           MatZn::Identity(dim, modulus)}
          : MatRandomInvertible(dim, modulus, DeriveSeed(options.seed, 1));
  MatZn dictionary =
      BuildDictionaryMatrix(polys.keyword_tags, polys.list_length, modulus);
  MatZn masked = MaskDictionary(mask.matrix, dictionary);
  EncryptedIndex enc_index =
      EncryptIndex(polys, key.pk, DeriveSeed(options.seed, 2));

  UserState user{key,
                 mask.inverse,
                 polys.keyword_tags,
                 index.document_universe(),
                 polys.list_length,
                 options.mode};
  CloudState cloud{key.pk, std::move(masked), std::move(enc_index)};
  OwnerState owner{key,
                   index,
                   std::move(polys),
                   std::move(dictionary),
                   std::move(mask.matrix),
                   std::move(mask.inverse)};
  return {std::move(owner), std::move(cloud), std::move(user)};
}

QueryRun RunFullQuery(const UserState& user, const UserQuery& query,
                      const CloudState& cloud) {
  std::vector<Tag> excluded = user.keyword_tags;
  excluded.insert(excluded.end(), user.document_tags.begin(),
                  user.document_tags.end());

  TrapdoorResult trapdoor = GenTrapdoor(
      query.keywords, user.keyword_tags, user.list_length, user.mask_inverse,
      user.key.pk, DeriveSeed(query.seed, 0), query.randomness, excluded);
  ServerResponse response =
      ServerQuery(trapdoor.trapdoor, cloud.masked_dictionary, cloud.enc_index,
                  cloud.pk, DeriveSeed(query.seed, 1));
  QueryOutcome outcome = OtDecode(response, user.key, query.scan,
                                  user.document_tags, user.mode);

  std::vector<TranscriptRecord> transcript;
  std::vector<nlohmann::json> enc_rows;
  for (const auto& row : cloud.enc_index.rows) enc_rows.push_back(ToJson(row));
  transcript.push_back(MakeRecord(
      "IndexGen", "owner", "cloud",
      {{"masked_dictionary", ToJson(cloud.masked_dictionary.entries())},
       {"encrypted_index", enc_rows}}));
  transcript.push_back(MakeRecord(
      "TrapdoorGen", "user", "cloud",
      {{"masked_vector",
        ToJson(std::vector<mpz_class>(
            trapdoor.trapdoor.masked_vector.begin(),
            trapdoor.trapdoor.masked_vector.end()))},
       {"enc_constant", trapdoor.trapdoor.enc_constant.value().get_str()}}));
  transcript.push_back(
      MakeRecord("Query", "cloud", "user",
                 {{"v_prime", ToJson(response.v_prime)},
                  {"encrypted_index", enc_rows}}));
  transcript.push_back(MakeRecord(
      "OT", "user", "user",
      {{"weights", ToJson(outcome.weights)},
       {"result_poly", ToJson(outcome.result_poly.coeffs())},
       {"accepted_roots", ToJson(outcome.accepted_roots)},
       {"scan", outcome.scan.Describe()}}));

  return {std::move(trapdoor), std::move(response), std::move(outcome),
          std::move(transcript)};
}

nlohmann::json ToJson(const std::vector<mpz_class>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(v.get_str());
  return out;
}

nlohmann::json ToJson(const ResidueMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c).get_str());
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json ToJson(const std::vector<Ciphertext>& row) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : row) out.push_back(c.value().get_str());
  return out;
}

std::string Fnv1a64Hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace pkse
