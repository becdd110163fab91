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

#include "pkse/cli.h"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "pkse/error.h"
#include "pkse/experiments.h"
#include "pkse/serialization.h"

namespace pkse {

namespace {

constexpr std::string_view kSeedEnv = "PKSE_SEED";

std::uint64_t DefaultSeed() {
  if (const char* env = std::getenv(kSeedEnv.data())) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidFormat,
                  std::string(kSeedEnv) + " is not an unsigned integer");
    }
  }
  return 0;
}

std::vector<mpz_class> ParseIntegerList(const std::string& text,
                                        std::string_view flag) {
  std::vector<mpz_class> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    mpz_class v;
    if (item.empty() || v.set_str(item, 10) != 0) {
      throw Error(ErrorCode::kInvalidFormat,
                  std::string(flag) + ": bad integer '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidFormat, std::string(flag) + ": empty list");
  }
  return out;
}

std::string JoinResidues(const std::vector<Residue>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i].get_str();
  }
  return out.empty() ? "(none)" : out;
}

RingMode ModeOrThrow(const std::string& name) {
  auto mode = ParseRingMode(name);
  if (!mode) {
    throw Error(ErrorCode::kInvalidFormat,
                "--mode must be 'faithful' or 'no-wrap', got '" + name + "'");
  }
  return *mode;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyQuery:
    case ErrorCode::kUnknownKeyword:
    case ErrorCode::kTooManyKeywords:
    case ErrorCode::kInvalidRandomness:
    case ErrorCode::kInvalidCiphertext:
      return kExitProtocol;
    default:
      return kExitParameter;
  }
}

void PrintRootTable(std::ostream& out,
                          const std::vector<std::array<std::string, 3>>& rows) {
  out << "| r1 | r2 | roots of P_R'(x) |\n";
  out << "|----|----|------------------|\n";
  for (const auto& row : rows) {
    out << "| " << row[0] << " | " << row[1] << " | " << row[2] << " |\n";
  }
}

struct KeygenArgs {
  std::optional<unsigned> bits;
  std::string primes;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int CmdKeygen(const KeygenArgs& a, std::ostream& out) {
  Keypair key;
  if (!a.primes.empty()) {
    const auto primes = ParseIntegerList(a.primes, "--primes");
    if (primes.size() != 2) {
      throw Error(ErrorCode::kInvalidFormat, "--primes takes exactly p,q");
    }
    key = KeyFromPrimes(primes[0], primes[1]);
  } else {
    key = KeyGen(*a.bits, a.seed.value_or(DefaultSeed()));
  }
  WriteJsonFile(a.out, KeypairToJson(key));
  out << "n = " << key.pk.n.get_str() << " (" << key.bits
      << "-bit primes); secret key written to " << a.out << "\n";
  return kExitOk;
}

struct IndexGenArgs {
  std::string fixture;
  std::string key;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int CmdIndexGen(const IndexGenArgs& a, std::ostream& out) {
  const FixtureFile fixture = FixtureFromJson(ReadJsonFile(a.fixture));
  const Keypair key = KeypairFromJson(ReadJsonFile(a.key));
  if (fixture.primes) {
    const auto& [p, q] = *fixture.primes;
    if (p * q != key.pk.n) {
      throw Error(ErrorCode::kInvalidFormat,
                  "fixture primes do not match the key's modulus");
    }
  }
  if (fixture.bits && *fixture.bits != key.bits) {
    throw Error(ErrorCode::kInvalidFormat,
                "fixture asks for " + std::to_string(*fixture.bits) +
                    "-bit primes, key has " + std::to_string(key.bits));
  }
  const RingMode mode = fixture.mode.value_or(
      key.bits >= kDefaultNoWrapBits ? RingMode::kNoWrap
                                     : RingMode::kFaithfulSmallN);
  const InvertedIndex index = fixture.Index();
  const Deployment d = SetupDeployment(
      index, key,
      {a.seed.value_or(DefaultSeed()), false, fixture.list_length, mode});

  const TagPermutation keyword_perm = fixture.keywords.Permutation();
  std::map<Identifier, Tag> keyword_table;
  for (const auto& [keyword, docs] : fixture.lists) {
    keyword_table.emplace(keyword, keyword_perm.tag(keyword));
  }
  const OwnerFile owner{key,           mode,
                        keyword_table, d.user,
                        d.owner.polys.polys, d.owner.polys.padding_roots,
                        d.owner.mask};
  const std::string owner_path = a.out + ".owner.json";
  const std::string cloud_path = a.out + ".cloud.json";
  WriteJsonFile(owner_path, OwnerToJson(owner));
  WriteJsonFile(cloud_path, CloudToJson(d.cloud));
  for (std::size_t k = 0; k < d.owner.polys.polys.size(); ++k) {
    out << "P_" << d.owner.polys.keyword_tags[k].get_str() << "(x) = "
        << FormatPoly(d.owner.polys.polys[k]) << "\n";
  }
  out << "owner file: " << owner_path << "\ncloud file: " << cloud_path
      << "\n";
  return kExitOk;
}

struct QueryArgs {
  std::string cloud_file;
  std::string owner_file;
  std::string keywords;
  std::string r_values;
  std::optional<std::uint64_t> seed;
  std::string scan = "documents";
  std::string out;
};

int CmdQuery(const QueryArgs& a, std::ostream& out) {
  const CloudState cloud = CloudFromJson(ReadJsonFile(a.cloud_file));
  const OwnerFile owner = OwnerFromJson(ReadJsonFile(a.owner_file));
  if (cloud.pk.n != owner.key.pk.n) {
    throw Error(ErrorCode::kInvalidFormat,
                "owner and cloud files use different moduli");
  }
  UserQuery query;
  for (const auto& id : ParseIntegerList(a.keywords, "--keywords")) {
    if (id < 0 || !id.fits_ulong_p() ||
        !owner.keyword_table.count(id.get_ui())) {
      throw Error(ErrorCode::kUnknownKeyword,
                  "keyword " + id.get_str() + " not in the owner's table");
    }
    query.keywords.push_back(owner.keyword_table.at(id.get_ui()));
  }
  if (!a.r_values.empty()) {
    query.randomness = ParseIntegerList(a.r_values, "--r-values");
  }
  query.seed = a.seed.value_or(DefaultSeed());
  query.scan = ScanDomain::Parse(a.scan);

  const QueryRun run = RunFullQuery(owner.user, query, cloud);
  if (!a.out.empty()) {
    WriteJsonFile(a.out, QueryRunToJson(run, owner.key.pk.modulus()));
  }
  out << "query polynomial: " << FormatPoly(run.trapdoor.query_poly) << "\n";
  out << "result polynomial: " << FormatPoly(run.outcome.result_poly) << "\n";
  out << "accepted roots: " << JoinResidues(run.outcome.accepted_roots)
      << "\n";
  return kExitOk;
}

int CmdRepro(std::uint64_t seed, const std::string& path, std::ostream& out) {
  const ReproRecord record = ReproCounterexample(seed);
  if (!path.empty()) WriteJsonFile(path, ReproToJson(record));
  std::vector<std::array<std::string, 3>> rows;
  for (const auto& row : record.rows) {
    rows.push_back({row.r1.get_str(), row.r2.get_str(),
                    JoinResidues(row.decoded) + (row.pass ? "" : "  MISMATCH")});
  }
  PrintRootTable(out, rows);
  out << (record.all_pass ? "all rows verified" : "verification FAILED")
      << " (n = " << record.n.get_str() << ", scan " << record.scan.Describe()
      << ")\n";
  return record.all_pass ? kExitOk : kExitVerificationFailed;
}

struct SweepArgs {
  std::string range = "4..50";
  std::string mode = "no-wrap";
  std::string scan = "0..100";
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t key_seed = kDefaultNoWrapKeySeed;
  std::size_t max_rows = 20;
  std::string out;
};

int CmdSweep(const SweepArgs& a, std::ostream& out) {
  const ScanDomain range = ScanDomain::Parse(a.range);
  if (range.kind != ScanDomain::Kind::kRange) {
    throw Error(ErrorCode::kInvalidFormat, "--range must be lo..hi");
  }
  SweepConfig config;
  config.mode = ModeOrThrow(a.mode);
  config.lo = range.lo;
  config.hi = range.hi;
  config.scan = ScanDomain::Parse(a.scan);
  config.source = a.samples ? SweepConfig::PairSource::kSampled
                            : SweepConfig::PairSource::kExhaustive;
  config.samples = a.samples;
  config.seed = a.seed.value_or(DefaultSeed());
  const SweepReport report =
      SweepRandomness(WorkedFixture(config.mode, a.key_seed), config);
  if (!a.out.empty()) WriteJsonFile(a.out, SweepToJson(report));

  std::vector<std::array<std::string, 3>> rows;
  std::size_t shown = 0;
  for (const auto& row : report.rows) {
    if (row.spurious.empty()) continue;
    if (shown++ == a.max_rows) break;
    rows.push_back({row.r1.get_str(), row.r2.get_str(),
                    JoinResidues(row.accepted)});
  }
  PrintRootTable(out, rows);
  out << report.pairs_with_spurious << " of " << report.total_pairs
      << " pairs admit spurious roots (n = " << report.n.get_str()
      << ", scan " << config.scan.Describe() << ")\n";
  return report.completeness_held ? kExitOk : kExitVerificationFailed;
}

struct RepairArgs {
  std::size_t reps = 5;
  std::size_t trials = 1000;
  std::string mode = "faithful";
  std::string scan = "0..100";
  std::optional<std::uint64_t> seed;
  std::uint64_t key_seed = kDefaultNoWrapKeySeed;
  std::string out;
};

int CmdRepair(const RepairArgs& a, std::ostream& out) {
  RepairConfig config;
  config.mode = ModeOrThrow(a.mode);
  config.max_repetitions = a.reps;
  config.trials = a.trials;
  config.scan = ScanDomain::Parse(a.scan);
  config.seed = a.seed.value_or(DefaultSeed());
  const RepairReport report =
      RepairStudy(WorkedFixture(config.mode, a.key_seed), config);
  if (!a.out.empty()) WriteJsonFile(a.out, RepairToJson(report));
  out << "rounds to clean intersection over " << config.trials
      << " trials (n = " << report.n.get_str() << ", scan "
      << config.scan.Describe() << "):\n";
  for (const auto& [rounds, count] : report.rounds_histogram) {
    out << "  " << rounds << ": " << count << "\n";
  }
  out << "  not clean after " << config.max_repetitions
      << ": " << report.never_clean << "\n";
  out << "monotone: " << (report.all_monotone ? "yes" : "NO")
      << ", complete: " << (report.all_complete ? "yes" : "NO") << "\n";
  return report.all_monotone && report.all_complete ? kExitOk
                                                    : kExitVerificationFailed;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Inverted-index public-key searchable encryption toolkit", "pkse"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a Paillier key");
  auto* bits_opt = keygen_cmd->add_option("--bits", keygen.bits,
                                          "Bit length of each prime");
  auto* primes_opt =
      keygen_cmd->add_option("--primes", keygen.primes, "Explicit primes p,q");
  bits_opt->excludes(primes_opt);
  keygen_cmd->add_option("--seed", keygen.seed);
  keygen_cmd->add_option("--out", keygen.out)->required();

  IndexGenArgs index_gen;
  auto* index_cmd = app.add_subcommand(
      "index-gen", "Build owner-side and cloud-side index files");
  index_cmd->add_option("--fixture", index_gen.fixture)->required();
  index_cmd->add_option("--key", index_gen.key)->required();
  index_cmd->add_option("--seed", index_gen.seed);
  index_cmd->add_option("--out", index_gen.out,
                        "Prefix for <out>.owner.json and <out>.cloud.json")
      ->required();

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Run one search end to end");
  query_cmd->add_option("--cloud-file", query.cloud_file)->required();
  query_cmd->add_option("--owner-file", query.owner_file)->required();
  query_cmd->add_option("--keywords", query.keywords,
                        "Comma-separated keyword identifiers")
      ->required();
  query_cmd->add_option("--r-values", query.r_values,
                        "Comma-separated query randomness");
  query_cmd->add_option("--seed", query.seed);
  query_cmd->add_option("--scan", query.scan,
                        "documents | ring | lo..hi")
      ->capture_default_str();
  query_cmd->add_option("--out", query.out);

  std::optional<std::uint64_t> repro_seed;
  std::string repro_out;
  auto* repro_cmd =
      app.add_subcommand("repro", "Reproduce the spurious-root table");
  repro_cmd->add_option("--seed", repro_seed);
  repro_cmd->add_option("--out", repro_out);

  SweepArgs sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Classify roots over many (r1, r2) pairs");
  sweep_cmd->add_option("--range", sweep.range)->capture_default_str();
  sweep_cmd->add_option("--mode", sweep.mode)->capture_default_str();
  sweep_cmd->add_option("--scan", sweep.scan)->capture_default_str();
  sweep_cmd->add_option("--samples", sweep.samples,
                        "Draw this many pairs instead of enumerating");
  sweep_cmd->add_option("--seed", sweep.seed);
  sweep_cmd->add_option("--key-seed", sweep.key_seed)->capture_default_str();
  sweep_cmd->add_option("--max-rows", sweep.max_rows)->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out);

  RepairArgs repair;
  auto* repair_cmd = app.add_subcommand(
      "repair", "Repeat-and-intersect study of the multi-keyword query");
  repair_cmd->add_option("--reps", repair.reps)->capture_default_str();
  repair_cmd->add_option("--trials", repair.trials)->capture_default_str();
  repair_cmd->add_option("--mode", repair.mode)->capture_default_str();
  repair_cmd->add_option("--scan", repair.scan)->capture_default_str();
  repair_cmd->add_option("--seed", repair.seed);
  repair_cmd->add_option("--key-seed", repair.key_seed)->capture_default_str();
  repair_cmd->add_option("--out", repair.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (keygen_cmd->parsed() && !keygen.bits && keygen.primes.empty()) {
      throw CLI::ValidationError("keygen needs --bits or --primes");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (keygen_cmd->parsed()) return CmdKeygen(keygen, out);
    if (index_cmd->parsed()) return CmdIndexGen(index_gen, out);
    if (query_cmd->parsed()) return CmdQuery(query, out);
    if (repro_cmd->parsed()) {
      return CmdRepro(repro_seed.value_or(1), repro_out, out);
    }
    if (sweep_cmd->parsed()) return CmdSweep(sweep, out);
    if (repair_cmd->parsed()) return CmdRepair(repair, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitUsage;
}

}  // namespace pkse
