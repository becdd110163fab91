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

#include "pkse/serialization.h"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>

#include "pkse/error.h"

namespace pkse {

namespace {

[[noreturn]] void Fail(const std::string& what) {
  throw Error(ErrorCode::kInvalidFormat, what);
}

// Requires an object whose keys are all in `allowed` and that contains every
// key in `required`.
void CheckFields(const json& j, std::string_view context,
                 std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) Fail(std::string(context) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto name : required) known = known || key == name;
    for (auto name : optional) known = known || key == name;
    if (!known) Fail(std::string(context) + ": unknown field '" + key + "'");
  }
  for (auto name : required) {
    if (!j.contains(name)) {
      Fail(std::string(context) + ": missing field '" + std::string(name) +
           "'");
    }
  }
}

void CheckHeader(const json& j, std::string_view kind) {
  if (j.at("schema_version") != kSchemaVersion) {
    Fail("unsupported schema_version " + j.at("schema_version").dump());
  }
  if (j.at("kind") != kind) {
    Fail("expected kind '" + std::string(kind) + "', got " +
         j.at("kind").dump());
  }
}

json Header(std::string_view kind) {
  return {{"schema_version", kSchemaVersion}, {"kind", kind}};
}

mpz_class Big(const json& j, std::string_view context) {
  if (!j.is_string()) {
    Fail(std::string(context) + ": big integers are decimal strings");
  }
  mpz_class out;
  if (out.set_str(j.get<std::string>(), 10) != 0) {
    Fail(std::string(context) + ": bad integer '" + j.get<std::string>() +
         "'");
  }
  return out;
}

std::vector<mpz_class> BigVector(const json& j, std::string_view context) {
  if (!j.is_array()) Fail(std::string(context) + ": expected an array");
  std::vector<mpz_class> out;
  for (const auto& v : j) out.push_back(Big(v, context));
  return out;
}

std::vector<std::vector<mpz_class>> BigRows(const json& j,
                                            std::string_view context) {
  if (!j.is_array()) Fail(std::string(context) + ": expected an array");
  std::vector<std::vector<mpz_class>> out;
  for (const auto& row : j) out.push_back(BigVector(row, context));
  return out;
}

ResidueMatrix MatrixFromJson(const json& j, std::string_view context) {
  const auto rows = BigRows(j, context);
  const auto cols = rows.empty() ? 0 : rows.front().size();
  ResidueMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) Fail(std::string(context) + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return m;
}

std::uint64_t Unsigned(const json& j, std::string_view context) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    Fail(std::string(context) + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

RingMode ModeFromJson(const json& j) {
  if (!j.is_string()) Fail("ring_mode: expected a string");
  auto mode = ParseRingMode(j.get<std::string>());
  if (!mode) Fail("ring_mode: unknown mode '" + j.get<std::string>() + "'");
  return *mode;
}

json TableToJson(const std::map<Identifier, Tag>& table) {
  json out = json::object();
  for (const auto& [id, tag] : table) out[std::to_string(id)] = tag.get_str();
  return out;
}

std::map<Identifier, Tag> TableFromJson(const json& j,
                                        std::string_view context) {
  if (!j.is_object()) Fail(std::string(context) + ": expected an object");
  std::map<Identifier, Tag> out;
  for (const auto& [key, value] : j.items()) {
    std::size_t used = 0;
    Identifier id = 0;
    try {
      id = std::stoull(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty()) {
      Fail(std::string(context) + ": identifier '" + key + "' not an integer");
    }
    out.emplace(id, Big(value, context));
  }
  return out;
}

json TagSourceToJson(const TagSource& source) {
  if (source.table) return {{"table", TableToJson(*source.table)}};
  return {{"prp", {{"key", source.prp_key}, {"bits", source.prp_bits}}}};
}

TagSource TagSourceFromJson(const json& j, std::string_view context) {
  CheckFields(j, context, {}, {"table", "prp"});
  TagSource source;
  if (j.contains("table") == j.contains("prp")) {
    Fail(std::string(context) + ": exactly one of 'table' or 'prp' required");
  }
  if (j.contains("table")) {
    source.table = TableFromJson(j.at("table"), context);
  } else {
    const json& prp = j.at("prp");
    CheckFields(prp, std::string(context) + ".prp", {"key", "bits"});
    source.prp_key = Unsigned(prp.at("key"), "prp.key");
    source.prp_bits = static_cast<unsigned>(Unsigned(prp.at("bits"), "prp.bits"));
  }
  return source;
}

json PolyToJson(const PolyZn& p) {
  return {{"coefficients", ToJson(p.coeffs())},
          {"signed", ToJson(p.signed_coeffs())},
          {"display", FormatPoly(p)}};
}

json ScanToJson(const ScanDomain& scan) { return scan.Describe(); }

}  // namespace

TagPermutation TagSource::Permutation() const {
  if (table) return TagPermutation::FromTable(*table);
  return TagPermutation(prp_key, prp_bits);
}

InvertedIndex FixtureFile::Index() const {
  const TagPermutation keyword_perm = keywords.Permutation();
  const TagPermutation document_perm = documents.Permutation();
  // With an explicit document table its tags form the universe f(Sigma).
  if (documents.table) {
    std::vector<std::pair<Tag, InvertedIndex::List>> tagged;
    for (const auto& [keyword, docs] : lists) {
      InvertedIndex::List doc_tags;
      for (Identifier d : docs) doc_tags.push_back(document_perm.tag(d));
      tagged.emplace_back(keyword_perm.tag(keyword), std::move(doc_tags));
    }
    std::vector<Tag> universe;
    for (const auto& [id, tag] : *documents.table) universe.push_back(tag);
    return InvertedIndex(std::move(tagged), std::move(universe));
  }
  return TagIndex(lists, keyword_perm, document_perm);
}

FixtureFile WorkedFixtureFile(RingMode mode) {
  FixtureFile f;
  f.mode = mode;
  if (mode == RingMode::kFaithfulSmallN) {
    f.primes = std::make_pair(mpz_class(11), mpz_class(13));
  } else {
    f.bits = kDefaultNoWrapBits;
  }
  f.keywords.table = std::map<Identifier, Tag>{{1, 1}, {2, 2}, {3, 3}};
  f.documents.table =
      std::map<Identifier, Tag>{{1, 1}, {2, 2}, {3, 3}, {6, 6}};
  f.lists = {{1, {6, 1}}, {2, {2, 3}}, {3, {1, 2}}};
  return f;
}

json FixtureToJson(const FixtureFile& f) {
  json j = Header("fixture");
  if (f.mode) j["ring_mode"] = RingModeName(*f.mode);
  if (f.primes) j["primes"] = {f.primes->first.get_str(), f.primes->second.get_str()};
  if (f.bits) j["bits"] = *f.bits;
  if (f.list_length) j["list_length"] = *f.list_length;
  j["keywords"] = TagSourceToJson(f.keywords);
  j["documents"] = TagSourceToJson(f.documents);
  json lists = json::array();
  for (const auto& [keyword, docs] : f.lists) {
    lists.push_back({{"keyword", keyword}, {"documents", docs}});
  }
  j["lists"] = std::move(lists);
  return j;
}

FixtureFile FixtureFromJson(const json& j) {
  CheckFields(j, "fixture",
              {"schema_version", "kind", "keywords", "documents", "lists"},
              {"ring_mode", "primes", "bits", "list_length"});
  CheckHeader(j, "fixture");
  FixtureFile f;
  if (j.contains("ring_mode")) f.mode = ModeFromJson(j.at("ring_mode"));
  if (j.contains("primes")) {
    const auto primes = BigVector(j.at("primes"), "fixture.primes");
    if (primes.size() != 2) Fail("fixture.primes: expected two primes");
    f.primes = std::make_pair(primes[0], primes[1]);
  }
  if (j.contains("bits")) {
    f.bits = static_cast<unsigned>(Unsigned(j.at("bits"), "fixture.bits"));
  }
  if (j.contains("list_length")) {
    f.list_length = Unsigned(j.at("list_length"), "fixture.list_length");
  }
  f.keywords = TagSourceFromJson(j.at("keywords"), "fixture.keywords");
  f.documents = TagSourceFromJson(j.at("documents"), "fixture.documents");
  if (!j.at("lists").is_array()) Fail("fixture.lists: expected an array");
  for (const auto& entry : j.at("lists")) {
    CheckFields(entry, "fixture.lists[]", {"keyword", "documents"});
    std::vector<Identifier> docs;
    if (!entry.at("documents").is_array()) {
      Fail("fixture.lists[].documents: expected an array");
    }
    for (const auto& d : entry.at("documents")) {
      docs.push_back(Unsigned(d, "fixture.lists[].documents"));
    }
    f.lists.emplace_back(Unsigned(entry.at("keyword"), "fixture.lists[].keyword"),
                         std::move(docs));
  }
  return f;
}

json KeypairToJson(const Keypair& key) {
  json j = Header("keypair");
  j["secret"] = true;
  j["bits"] = key.bits;
  j["p"] = key.sk.p.get_str();
  j["q"] = key.sk.q.get_str();
  j["n"] = key.pk.n.get_str();
  j["g"] = key.pk.g.get_str();
  j["lambda"] = key.sk.lambda.get_str();
  j["mu"] = key.sk.mu.get_str();
  return j;
}

Keypair KeypairFromJson(const json& j) {
  CheckFields(j, "keypair",
              {"schema_version", "kind", "secret", "bits", "p", "q", "n", "g",
               "lambda", "mu"});
  CheckHeader(j, "keypair");
  Keypair key = KeyFromPrimes(Big(j.at("p"), "keypair.p"),
                              Big(j.at("q"), "keypair.q"));
  key.bits = static_cast<unsigned>(Unsigned(j.at("bits"), "keypair.bits"));
  if (key.pk.n != Big(j.at("n"), "keypair.n") ||
      key.pk.g != Big(j.at("g"), "keypair.g") ||
      key.sk.lambda != Big(j.at("lambda"), "keypair.lambda") ||
      key.sk.mu != Big(j.at("mu"), "keypair.mu")) {
    Fail("keypair: derived values disagree with p and q");
  }
  return key;
}

json OwnerToJson(const OwnerFile& owner) {
  json j = Header("owner");
  j["secret"] = true;
  j["ring_mode"] = RingModeName(owner.mode);
  j["key"] = KeypairToJson(owner.key);
  j["keyword_table"] = TableToJson(owner.keyword_table);
  j["keyword_tags"] = ToJson(owner.user.keyword_tags);
  j["document_tags"] = ToJson(owner.user.document_tags);
  j["list_length"] = owner.user.list_length;
  j["mask"] = ToJson(owner.mask.entries());
  j["mask_inverse"] = ToJson(owner.user.mask_inverse.entries());
  json polys = json::array();
  for (const auto& p : owner.index_polys) polys.push_back(ToJson(p.coeffs()));
  j["index_polynomials"] = std::move(polys);
  json padding = json::array();
  for (const auto& roots : owner.padding_roots) padding.push_back(ToJson(roots));
  j["padding_roots"] = std::move(padding);
  return j;
}

OwnerFile OwnerFromJson(const json& j) {
  CheckFields(j, "owner",
              {"schema_version", "kind", "secret", "ring_mode", "key",
               "keyword_table", "keyword_tags", "document_tags", "list_length",
               "mask", "mask_inverse", "index_polynomials", "padding_roots"});
  CheckHeader(j, "owner");
  const Keypair key = KeypairFromJson(j.at("key"));
  const Modulus modulus = key.pk.modulus();
  const RingMode mode = ModeFromJson(j.at("ring_mode"));
  MatZn mask(MatrixFromJson(j.at("mask"), "owner.mask"), modulus);
  MatZn mask_inverse(MatrixFromJson(j.at("mask_inverse"), "owner.mask_inverse"),
                     modulus);
  if (!(MatMul(mask, mask_inverse) == MatZn::Identity(mask.rows(), modulus))) {
    Fail("owner: mask_inverse is not the inverse of mask");
  }
  UserState user{key,
                 std::move(mask_inverse),
                 BigVector(j.at("keyword_tags"), "owner.keyword_tags"),
                 BigVector(j.at("document_tags"), "owner.document_tags"),
                 Unsigned(j.at("list_length"), "owner.list_length"),
                 mode};
  if (static_cast<std::size_t>(mask.rows()) != user.list_length + 1) {
    Fail("owner: mask size disagrees with list_length");
  }
  std::vector<PolyZn> polys;
  for (const auto& row : BigRows(j.at("index_polynomials"), "owner.index_polynomials")) {
    polys.emplace_back(row, modulus);
  }
  return {key,
          mode,
          TableFromJson(j.at("keyword_table"), "owner.keyword_table"),
          std::move(user),
          std::move(polys),
          BigRows(j.at("padding_roots"), "owner.padding_roots"),
          std::move(mask)};
}

json CloudToJson(const CloudState& cloud) {
  json j = Header("cloud");
  j["n"] = cloud.pk.n.get_str();
  j["g"] = cloud.pk.g.get_str();
  j["keyword_tags"] = ToJson(cloud.enc_index.keyword_tags);
  j["masked_dictionary"] = ToJson(cloud.masked_dictionary.entries());
  json rows = json::array();
  for (const auto& row : cloud.enc_index.rows) rows.push_back(ToJson(row));
  j["encrypted_index"] = std::move(rows);
  return j;
}

CloudState CloudFromJson(const json& j) {
  CheckFields(j, "cloud",
              {"schema_version", "kind", "n", "g", "keyword_tags",
               "masked_dictionary", "encrypted_index"});
  CheckHeader(j, "cloud");
  PublicKey pk;
  pk.n = Big(j.at("n"), "cloud.n");
  pk.g = Big(j.at("g"), "cloud.g");
  pk.n_squared = pk.n * pk.n;
  if (pk.g != pk.n + 1) Fail("cloud: only g = n + 1 keys are supported");
  MatZn masked(MatrixFromJson(j.at("masked_dictionary"), "cloud.masked_dictionary"),
               pk.modulus());
  EncryptedIndex index;
  index.keyword_tags = BigVector(j.at("keyword_tags"), "cloud.keyword_tags");
  for (const auto& row : BigRows(j.at("encrypted_index"), "cloud.encrypted_index")) {
    std::vector<Ciphertext> cts;
    for (const auto& v : row) cts.emplace_back(v, pk.n);
    index.rows.push_back(std::move(cts));
  }
  if (index.rows.size() != index.keyword_tags.size() ||
      static_cast<std::size_t>(masked.cols()) != index.rows.size()) {
    Fail("cloud: keyword count disagrees across fields");
  }
  return {std::move(pk), std::move(masked), std::move(index)};
}

json QueryRunToJson(const QueryRun& run, const Modulus& modulus) {
  json j = Header("query_outcome");
  j["n"] = modulus.n().get_str();
  j["ring_mode"] = RingModeName(run.outcome.mode);
  j["scan"] = ScanToJson(run.outcome.scan);
  j["keywords"] = ToJson(run.trapdoor.spec.keywords);
  j["randomness"] = ToJson(run.trapdoor.spec.randomness);
  j["query_polynomial"] = PolyToJson(run.trapdoor.query_poly);
  j["weights"] = ToJson(run.outcome.weights);
  j["result_polynomial"] = PolyToJson(run.outcome.result_poly);
  j["accepted_roots"] = ToJson(run.outcome.accepted_roots);
  json transcript = json::array();
  for (const auto& record : run.transcript) {
    transcript.push_back({{"phase", record.phase},
                          {"sender", record.sender},
                          {"receiver", record.receiver},
                          {"digest", record.digest},
                          {"payload", record.payload}});
  }
  j["transcript"] = std::move(transcript);
  return j;
}

json ReproToJson(const ReproRecord& record) {
  json j = Header("repro_report");
  j["config"] = {{"ring_mode", RingModeName(record.mode)},
                 {"scan", ScanToJson(record.scan)},
                 {"seed", record.seed},
                 {"n", record.n.get_str()}};
  json rows = json::array();
  for (const auto& row : record.rows) {
    rows.push_back({{"r1", row.r1.get_str()},
                    {"r2", row.r2.get_str()},
                    {"expected_roots", ToJson(row.expected)},
                    {"decoded_roots", ToJson(row.decoded)},
                    {"spurious_roots", ToJson(row.spurious)},
                    {"formula_root",
                     row.formula ? json(row.formula->get_str()) : json(nullptr)},
                    {"roots_match", row.roots_match},
                    {"spurious_outside_lists", row.spurious_outside_lists},
                    {"pass", row.pass}});
  }
  j["rows"] = std::move(rows);
  j["all_pass"] = record.all_pass;
  return j;
}

json SweepToJson(const SweepReport& report) {
  json j = Header("sweep_report");
  const auto& c = report.config;
  j["config"] = {
      {"ring_mode", RingModeName(c.mode)},
      {"range", c.lo.get_str() + ".." + c.hi.get_str()},
      {"scan", ScanToJson(c.scan)},
      {"pair_source",
       c.source == SweepConfig::PairSource::kExhaustive ? "exhaustive"
                                                        : "sampled"},
      {"samples", c.samples},
      {"seed", c.seed},
      {"n", report.n.get_str()}};
  j["query"] = ToJson(report.query);
  j["oracle_intersection"] = ToJson(report.oracle);
  j["total_pairs"] = report.total_pairs;
  j["pairs_with_spurious"] = report.pairs_with_spurious;
  j["completeness_held"] = report.completeness_held;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"r1", row.r1.get_str()},
                    {"r2", row.r2.get_str()},
                    {"accepted_roots", ToJson(row.accepted)},
                    {"spurious_roots", ToJson(row.spurious)},
                    {"complete", row.complete}});
  }
  j["rows"] = std::move(rows);
  return j;
}

json RepairToJson(const RepairReport& report) {
  json j = Header("repair_report");
  const auto& c = report.config;
  j["config"] = {{"ring_mode", RingModeName(c.mode)},
                 {"max_repetitions", c.max_repetitions},
                 {"trials", c.trials},
                 {"scan", ScanToJson(c.scan)},
                 {"seed", c.seed},
                 {"n", report.n.get_str()}};
  j["query"] = ToJson(report.query);
  j["oracle_intersection"] = ToJson(report.oracle);
  json histogram = json::object();
  for (const auto& [rounds, count] : report.rounds_histogram) {
    histogram[std::to_string(rounds)] = count;
  }
  j["rounds_to_clean_histogram"] = std::move(histogram);
  j["never_clean"] = report.never_clean;
  j["all_monotone"] = report.all_monotone;
  j["all_complete"] = report.all_complete;
  json trials = json::array();
  for (const auto& t : report.trials) {
    json rounds = json::array();
    for (std::size_t i = 0; i < t.round_roots.size(); ++i) {
      rounds.push_back({{"roots", ToJson(t.round_roots[i])},
                        {"running_intersection", ToJson(t.running[i])},
                        {"residual_spurious", ToJson(t.residual_spurious[i])}});
    }
    trials.push_back(
        {{"rounds", std::move(rounds)},
         {"rounds_to_clean",
          t.rounds_to_clean ? json(*t.rounds_to_clean) : json(nullptr)},
         {"monotone", t.monotone},
         {"complete", t.complete}});
  }
  j["trials"] = std::move(trials);
  return j;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    Fail("'" + path + "': " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) Fail("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace pkse
