// Command-line front end: reduction equivalence checks, protocol simulation,
// adversarial instance generation, and certificate production/verification.
// Every command emits a single JSON document (stdout or --out) and uses the
// exit codes 0 = success, 1 = parse/parameter error, 2 = no result,
// 3 = verification failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "sumlab/adversary.hpp"
#include "sumlab/butterfly.hpp"
#include "sumlab/butterfly_reduction.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/group.hpp"
#include "sumlab/json_io.hpp"
#include "sumlab/lsd.hpp"
#include "sumlab/prng.hpp"
#include "sumlab/refuter.hpp"
#include "sumlab/threesum.hpp"

namespace {

using sumlab::Json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNoResult = 2;
constexpr int kExitVerifyFailed = 3;

// Accepts "cyclic:M", "xor:K", "xor_bits:K", or a JSON object.
sumlab::GroupSpec parse_group_flag(const std::string& text) {
  if (!text.empty() && text.front() == '{')
    return sumlab::parse_group(Json::parse(text));
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument(
        "group must look like cyclic:M, xor:K, or {\"cyclic\": M}");
  std::string kind = text.substr(0, colon);
  std::uint64_t value = std::stoull(text.substr(colon + 1));
  if (kind == "cyclic") return sumlab::GroupSpec::cyclic(value);
  if (kind == "xor" || kind == "xor_bits")
    return sumlab::GroupSpec::xor_bits(value);
  throw std::invalid_argument("unknown group kind: " + kind);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return Json::parse(in);
}

void emit(const Json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write " + out_path);
  out << doc.dump(2) << "\n";
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// ----------------------------------------------------------------------------

int run_butterfly_check(std::uint64_t degree, std::uint64_t depth,
                        const std::string& group_kind, std::uint32_t trials,
                        std::uint64_t seed, const std::string& out_path) {
  Stopwatch timer;
  sumlab::ButterflySpec spec(degree, depth);
  sumlab::GroupKind kind = group_kind == "cyclic" ? sumlab::GroupKind::cyclic
                                                  : sumlab::GroupKind::xor_bits;
  sumlab::SplitMix64 rng(seed);

  sumlab::RunReport report;
  report.command = "butterfly-check";
  report.parameters = {{"B", degree},
                       {"d", depth},
                       {"group", group_kind},
                       {"trials", trials},
                       {"seed", seed}};

  std::vector<sumlab::EdgeSet> edge_sets;
  edge_sets.push_back(sumlab::EdgeSet::all(spec));
  edge_sets.push_back(sumlab::EdgeSet::none(spec));
  for (std::uint32_t i = 0; i < trials; ++i)
    edge_sets.push_back(sumlab::random_edge_subset(spec, 0.5, rng.next()));

  std::uint64_t pairs_checked = 0;
  for (std::size_t set_index = 0; set_index < edge_sets.size(); ++set_index) {
    const sumlab::EdgeSet& edges = edge_sets[set_index];
    sumlab::ReducedInstance reduced = sumlab::reduce(spec, edges, kind);
    std::unordered_set<std::uint64_t> sums;
    for (std::uint64_t v : sumlab::sumset(reduced.instance)) sums.insert(v);
    for (std::uint64_t s = 0; s < spec.nodes_per_layer(); ++s)
      for (std::uint64_t t = 0; t < spec.nodes_per_layer(); ++t) {
        ++pairs_checked;
        bool answer = sums.contains(reduced.query(s, t));
        bool expected = !sumlab::reachable(spec, edges, s, t);
        report.record(answer == expected, Json{{"edge_set", set_index},
                                               {"s", s},
                                               {"t", t},
                                               {"answer", answer},
                                               {"expected", expected}});
      }
  }

  report.extras["pairs_checked"] = pairs_checked;
  report.extras["mismatches"] = report.failures;
  report.wall_time_seconds = timer.seconds();
  emit(sumlab::report_to_json(report), out_path);
  return report.checks_failed == 0 ? kExitOk : kExitVerifyFailed;
}

// ----------------------------------------------------------------------------

sumlab::LsdInstance instance_from_codes(std::uint32_t index_count,
                                        std::uint32_t block_width,
                                        std::uint64_t data_mask,
                                        std::uint64_t query_code) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> data;
  for (std::uint32_t j = 0; j < index_count; ++j)
    for (std::uint32_t b = 0; b < block_width; ++b)
      if ((data_mask >> (j * block_width + b)) & 1) data.push_back({j, b});
  std::vector<std::uint32_t> query(index_count);
  for (std::uint32_t j = 0; j < index_count; ++j) {
    query[j] = query_code % block_width;
    query_code /= block_width;
  }
  return sumlab::LsdInstance(index_count, block_width, std::move(data),
                             std::move(query));
}

int run_lsd_check(std::uint32_t index_count, std::uint32_t block_width,
                  std::uint32_t ell, bool exhaustive, std::uint32_t trials,
                  std::uint64_t seed, const std::string& out_path) {
  Stopwatch timer;
  sumlab::BlockParams params =
      sumlab::minimal_block_params(index_count, block_width, ell);

  sumlab::RunReport report;
  report.command = "lsd-check";
  report.parameters = {{"N", index_count},
                       {"B", block_width},
                       {"ell", ell},
                       {"mode", exhaustive ? "exhaustive" : "sampled"},
                       {"trials", trials},
                       {"seed", seed},
                       {"delta", params.delta}};

  auto check_case = [&](std::uint64_t data_mask, std::uint64_t query_code) {
    sumlab::LsdInstance inst =
        instance_from_codes(index_count, block_width, data_mask, query_code);
    bool brute = sumlab::brute_force_disjoint(inst);
    bool reduced = sumlab::disjoint_via_reduction(inst, params);
    report.record(brute == reduced, Json{{"data_mask", data_mask},
                                         {"query_code", query_code},
                                         {"brute", brute},
                                         {"reduced", reduced}});
  };

  if (exhaustive) {
    std::uint32_t universe_bits = index_count * block_width;
    std::uint64_t vectors = 1;
    for (std::uint32_t j = 0; j < index_count; ++j) vectors *= block_width;
    if (universe_bits > 20 || vectors > (1u << 20))
      throw std::invalid_argument(
          "exhaustive mode is limited to N*B <= 20 and B^N <= 2^20");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe_bits);
         ++mask)
      for (std::uint64_t code = 0; code < vectors; ++code)
        check_case(mask, code);
  } else {
    sumlab::SplitMix64 rng(seed);
    std::uint32_t universe_bits = index_count * block_width;
    for (std::uint32_t i = 0; i < trials; ++i) {
      std::uint64_t mask = 0;
      for (std::uint32_t b = 0; b < universe_bits; ++b)
        mask |= std::uint64_t{rng.flip()} << b;
      std::uint64_t code = 0, place = 1;
      for (std::uint32_t j = 0; j < index_count; ++j) {
        code += place * rng.below(block_width);
        place *= block_width;
      }
      check_case(mask, code);
    }
  }

  report.wall_time_seconds = timer.seconds();
  emit(sumlab::report_to_json(report), out_path);
  return report.checks_failed == 0 ? kExitOk : kExitVerifyFailed;
}

int run_lsd_protocol(const std::string& structure_kind,
                     std::uint32_t index_count, std::uint32_t block_width,
                     std::uint32_t ell, std::uint64_t seed,
                     const std::string& out_path) {
  sumlab::BlockParams params =
      sumlab::minimal_block_params(index_count, block_width, ell);
  sumlab::SplitMix64 rng(seed);
  std::uint32_t universe_bits = index_count * block_width;
  if (universe_bits > 63)
    throw std::invalid_argument("protocol demo is limited to N*B <= 63");
  std::uint64_t mask = 0;
  for (std::uint32_t b = 0; b < universe_bits; ++b)
    mask |= std::uint64_t{rng.flip()} << b;
  std::uint64_t code = 0, place = 1;
  for (std::uint32_t j = 0; j < index_count; ++j) {
    code += place * rng.below(block_width);
    place *= block_width;
  }
  sumlab::LsdInstance inst =
      instance_from_codes(index_count, block_width, mask, code);
  sumlab::ThreeSumInstance reduced = sumlab::lsd_reduce(inst, params);
  std::vector<std::uint64_t> queries = sumlab::lsd_build_queries(inst, params);

  sumlab::ProtocolTranscript transcript;
  if (structure_kind == "bitvector") {
    auto structure = sumlab::BitvectorStructure::build(reduced);
    transcript =
        sumlab::simulate_protocol(structure, queries, structure.max_probes());
  } else if (structure_kind == "sorted") {
    auto structure = sumlab::SortedSumsetStructure::build(reduced);
    transcript =
        sumlab::simulate_protocol(structure, queries, structure.max_probes());
  } else {
    throw std::invalid_argument("structure must be bitvector or sorted");
  }

  emit(sumlab::transcript_to_json(transcript), out_path);
  return kExitOk;
}

// ----------------------------------------------------------------------------

int run_adversary_build(const std::string& group_text,
                        const std::string& query_text,
                        const std::string& pattern_text, std::uint64_t n,
                        std::uint64_t seed, const std::string& out_path) {
  sumlab::GroupSpec group = parse_group_flag(group_text);
  std::vector<std::uint64_t> queries;
  std::stringstream stream(query_text);
  std::string item;
  while (std::getline(stream, item, ','))
    if (!item.empty()) queries.push_back(std::stoull(item));
  if (pattern_text.size() != queries.size())
    throw std::invalid_argument(
        "pattern bitmask must have exactly one 0/1 character per query");
  std::vector<bool> pattern;
  for (char c : pattern_text) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("pattern bitmask may only contain 0 and 1");
    pattern.push_back(c == '1');
  }
  sumlab::ConstructedInput built =
      sumlab::construct_input(group, queries, pattern, n, seed);
  sumlab::ThreeSumInstance instance(group, built.a1, built.a2);
  emit(sumlab::instance_to_json(instance), out_path);
  return kExitOk;
}

// ----------------------------------------------------------------------------

int run_refute(const std::string& scheme_path, const std::string& group_text,
               const std::string& out_path) {
  sumlab::GroupSpec group = parse_group_flag(group_text);
  sumlab::NonAdaptiveScheme raw = sumlab::parse_scheme(load_json(scheme_path));
  raw.validate(group);
  sumlab::TwoProbeScheme scheme = sumlab::TwoProbeScheme::from_scheme(raw);

  auto weakness = sumlab::find_weakness(scheme);
  if (!weakness) {
    Json doc = Json::object();
    doc["result"] = "NoWeaknessFound";
    emit(doc, out_path);
    return kExitNoResult;
  }
  try {
    sumlab::RefutationCertificate cert =
        sumlab::build_certificate(scheme, group, *weakness);
    emit(sumlab::certificate_to_json(cert), out_path);
    return kExitOk;
  } catch (const sumlab::GroupTooSmall& e) {
    std::cerr << "error: cannot build a witness: " << e.what() << "\n";
    return kExitNoResult;
  }
}

int run_verify_cert(const std::string& scheme_path,
                    const std::string& cert_path,
                    const std::string& group_text,
                    const std::string& out_path) {
  sumlab::NonAdaptiveScheme raw = sumlab::parse_scheme(load_json(scheme_path));
  sumlab::TwoProbeScheme scheme = sumlab::TwoProbeScheme::from_scheme(raw);
  sumlab::RefutationCertificate cert =
      sumlab::parse_certificate(load_json(cert_path));

  bool verified = true;
  if (!group_text.empty() &&
      !(parse_group_flag(group_text) == cert.witness_group))
    verified = false;
  verified =
      verified && sumlab::verify_certificate(scheme, cert.witness_group, cert);

  Json doc = Json::object();
  doc["verified"] = verified;
  emit(doc, out_path);
  return verified ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"executable laboratory for sumset-membership reductions"};
  app.require_subcommand(1);

  std::function<int()> runner;

  // butterfly-check
  {
    auto* cmd = app.add_subcommand(
        "butterfly-check",
        "check the layered-graph reduction against path reachability");
    auto degree = std::make_shared<std::uint64_t>(2);
    auto depth = std::make_shared<std::uint64_t>(2);
    auto group = std::make_shared<std::string>("cyclic");
    auto trials = std::make_shared<std::uint32_t>(20);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--B", *degree, "branching degree (>= 2)")->required();
    cmd->add_option("--d", *depth, "depth (>= 1)")->required();
    cmd->add_option("--group", *group, "cyclic or xor")
        ->check(CLI::IsMember({"cyclic", "xor"}));
    cmd->add_option("--trials", *trials, "random edge subsets to test");
    cmd->add_option("--seed", *seed, "PRNG seed");
    cmd->add_option("--out", *out, "write the report here instead of stdout");
    cmd->callback([=, &runner] {
      runner = [=] {
        return run_butterfly_check(*degree, *depth, *group, *trials, *seed,
                                   *out);
      };
    });
  }

  // lsd-check
  {
    auto* cmd = app.add_subcommand(
        "lsd-check", "check the blocked-disjointness reduction");
    auto n = std::make_shared<std::uint32_t>(0);
    auto b = std::make_shared<std::uint32_t>(0);
    auto ell = std::make_shared<std::uint32_t>(1);
    auto exhaustive = std::make_shared<bool>(false);
    auto trials = std::make_shared<std::uint32_t>(32);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--N", *n, "index count")->required();
    cmd->add_option("--B", *b, "block width")->required();
    cmd->add_option("--ell", *ell, "block length (must divide N)")->required();
    cmd->add_flag("--exhaustive", *exhaustive,
                  "enumerate every data set and query vector");
    cmd->add_option("--trials", *trials, "sampled cases when not exhaustive");
    cmd->add_option("--seed", *seed, "PRNG seed");
    cmd->add_option("--out", *out, "write the report here instead of stdout");
    cmd->callback([=, &runner] {
      runner = [=] {
        return run_lsd_check(*n, *b, *ell, *exhaustive, *trials, *seed, *out);
      };
    });
  }

  // lsd-protocol
  {
    auto* cmd = app.add_subcommand(
        "lsd-protocol",
        "simulate the two-party protocol over a seeded random instance");
    auto structure = std::make_shared<std::string>("bitvector");
    auto n = std::make_shared<std::uint32_t>(0);
    auto b = std::make_shared<std::uint32_t>(0);
    auto ell = std::make_shared<std::uint32_t>(1);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--structure", *structure, "bitvector or sorted")
        ->check(CLI::IsMember({"bitvector", "sorted"}));
    cmd->add_option("--N", *n, "index count")->required();
    cmd->add_option("--B", *b, "block width")->required();
    cmd->add_option("--ell", *ell, "block length (must divide N)")->required();
    cmd->add_option("--seed", *seed, "PRNG seed for the instance");
    cmd->add_option("--out", *out, "write the transcript here");
    cmd->callback([=, &runner] {
      runner = [=] {
        return run_lsd_protocol(*structure, *n, *b, *ell, *seed, *out);
      };
    });
  }

  // adversary-build
  {
    auto* cmd = app.add_subcommand(
        "adversary-build",
        "build an input pair realizing a target membership pattern");
    auto group = std::make_shared<std::string>();
    auto queries = std::make_shared<std::string>();
    auto pattern = std::make_shared<std::string>();
    auto n = std::make_shared<std::uint64_t>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--group", *group, "cyclic:M, xor:K, or JSON")->required();
    cmd->add_option("--q", *queries, "comma-separated query values")
        ->required();
    cmd->add_option("--pattern", *pattern,
                    "0/1 mask, one character per query (leftmost = first)")
        ->required();
    cmd->add_option("--n", *n, "output set size")->required();
    cmd->add_option("--seed", *seed, "PRNG seed");
    cmd->add_option("--out", *out, "write the instance here");
    cmd->callback([=, &runner] {
      runner = [=] {
        return run_adversary_build(*group, *queries, *pattern, *n, *seed,
                                   *out);
      };
    });
  }

  // refute
  {
    auto* cmd = app.add_subcommand(
        "refute", "find a structural weakness and emit a certificate");
    auto scheme = std::make_shared<std::string>();
    auto group = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--scheme", *scheme, "scheme JSON file")->required();
    cmd->add_option("--group", *group, "cyclic:M, xor:K, or JSON")->required();
    cmd->add_option("--out", *out, "write the certificate here");
    cmd->callback([=, &runner] {
      runner = [=] { return run_refute(*scheme, *group, *out); };
    });
  }

  // verify-cert
  {
    auto* cmd = app.add_subcommand(
        "verify-cert", "re-check a refutation certificate by enumeration");
    auto scheme = std::make_shared<std::string>();
    auto cert = std::make_shared<std::string>();
    auto group = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--scheme", *scheme, "scheme JSON file")->required();
    cmd->add_option("--cert", *cert, "certificate JSON file")->required();
    cmd->add_option("--group", *group,
                    "optional cross-check against the witness group");
    cmd->add_option("--out", *out, "write the verdict here");
    cmd->callback([=, &runner] {
      runner = [=] { return run_verify_cert(*scheme, *cert, *group, *out); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    return runner ? runner() : kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
