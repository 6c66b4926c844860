#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumlab/butterfly.hpp"
#include "sumlab/group.hpp"
#include "sumlab/lsd.hpp"
#include "sumlab/prng.hpp"
#include "sumlab/refuter.hpp"
#include "sumlab/threesum.hpp"

// JSON encodings for every object that crosses the CLI boundary.  Key order
// is fixed (ordered_json) so serialize -> parse -> serialize is the identity.

namespace sumlab {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require_field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("missing field: ") + key);
  return *it;
}

inline std::vector<std::uint64_t> u64_list(const Json& j, const char* key) {
  const Json& field = require_field(j, key);
  if (!field.is_array())
    throw std::invalid_argument(std::string(key) + " must be an array");
  std::vector<std::uint64_t> out;
  out.reserve(field.size());
  for (const auto& v : field) {
    if (!v.is_number_unsigned())
      throw std::invalid_argument(std::string(key) +
                                  " must hold non-negative integers");
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Groups: {"cyclic": m} or {"xor_bits": k}.

inline Json group_to_json(const GroupSpec& group) {
  Json j = Json::object();
  if (group.kind() == GroupKind::cyclic)
    j["cyclic"] = group.parameter();
  else
    j["xor_bits"] = group.parameter();
  return j;
}

inline GroupSpec parse_group(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    throw std::invalid_argument(
        "group must be exactly one of {\"cyclic\": m} or {\"xor_bits\": k}");
  if (auto it = j.find("cyclic"); it != j.end())
    return GroupSpec::cyclic(it->get<std::uint64_t>());
  if (auto it = j.find("xor_bits"); it != j.end())
    return GroupSpec::xor_bits(it->get<std::uint64_t>());
  throw std::invalid_argument("unknown group kind");
}

// ----------------------------------------------------------------------------
// Instances: {"group": ..., "a1": [...], "a2": [...]}.

inline Json instance_to_json(const ThreeSumInstance& instance) {
  Json j = Json::object();
  j["group"] = group_to_json(instance.group());
  j["a1"] = instance.a1();
  j["a2"] = instance.a2();
  return j;
}

inline ThreeSumInstance parse_instance(const Json& j) {
  GroupSpec group = parse_group(detail::require_field(j, "group"));
  return ThreeSumInstance(group, detail::u64_list(j, "a1"),
                          detail::u64_list(j, "a2"));
}

// ----------------------------------------------------------------------------
// Schemes: {"s": cells, "t": probes per query,
//           "probes": [[c, ...], ...], "tables": [int, ...]},
// both lists indexed by query value.

inline Json scheme_to_json(const NonAdaptiveScheme& scheme) {
  Json j = Json::object();
  j["s"] = scheme.cell_count;
  j["t"] = scheme.probes_per_query;
  j["probes"] = scheme.probes;
  j["tables"] = scheme.tables;
  return j;
}

inline NonAdaptiveScheme parse_scheme(const Json& j) {
  NonAdaptiveScheme scheme;
  scheme.cell_count = detail::require_field(j, "s").get<std::uint64_t>();
  scheme.probes_per_query = detail::require_field(j, "t").get<std::uint32_t>();
  const Json& probes = detail::require_field(j, "probes");
  if (!probes.is_array()) throw std::invalid_argument("probes must be an array");
  for (const auto& row : probes) {
    if (!row.is_array())
      throw std::invalid_argument("each probe entry must be an array");
    scheme.probes.push_back(row.get<std::vector<std::uint32_t>>());
  }
  scheme.tables = detail::u64_list(j, "tables");
  return scheme;
}

// ----------------------------------------------------------------------------
// Edge sets: {"B": ..., "d": ..., "edges": [dense indices]}.

inline Json edge_set_to_json(const EdgeSet& edges) {
  Json j = Json::object();
  j["B"] = edges.spec().degree;
  j["d"] = edges.spec().depth;
  j["edges"] = edges.indices();
  return j;
}

inline EdgeSet parse_edge_set(const Json& j) {
  ButterflySpec spec(detail::require_field(j, "B").get<std::uint64_t>(),
                     detail::require_field(j, "d").get<std::uint64_t>());
  EdgeSet out = EdgeSet::none(spec);
  for (std::uint64_t index : detail::u64_list(j, "edges")) {
    if (index >= spec.edge_count())
      throw std::invalid_argument("edge index out of range");
    out.insert(edge_at(spec, index));
  }
  return out;
}

// ----------------------------------------------------------------------------
// Certificates: {"queries": [...], "cells": [...], "pattern": [0/1, ...],
//                "witness": instance JSON, "n": witness size}.
// The witness embeds its group so a certificate can be checked stand-alone.

inline Json certificate_to_json(const RefutationCertificate& cert) {
  Json j = Json::object();
  j["queries"] = cert.queries;
  j["cells"] = cert.cells;
  j["pattern"] = cert.pattern;
  Json witness = Json::object();
  witness["group"] = group_to_json(cert.witness_group);
  witness["a1"] = cert.witness_a1;
  witness["a2"] = cert.witness_a2;
  j["witness"] = std::move(witness);
  j["n"] = cert.witness_n;
  return j;
}

inline RefutationCertificate parse_certificate(const Json& j) {
  const Json& witness = detail::require_field(j, "witness");
  GroupSpec group = parse_group(detail::require_field(witness, "group"));
  RefutationCertificate cert{
      detail::u64_list(j, "queries"),
      {},
      {},
      group,
      detail::u64_list(witness, "a1"),
      detail::u64_list(witness, "a2"),
      detail::require_field(j, "n").get<std::uint64_t>()};
  for (std::uint64_t c : detail::u64_list(j, "cells")) {
    if (c > 0xffffffffull)
      throw std::invalid_argument("cell index out of range");
    cert.cells.push_back(static_cast<std::uint32_t>(c));
  }
  for (std::uint64_t bit : detail::u64_list(j, "pattern")) {
    if (bit > 1) throw std::invalid_argument("pattern bits must be 0 or 1");
    cert.pattern.push_back(static_cast<std::uint8_t>(bit));
  }
  return cert;
}

// ----------------------------------------------------------------------------
// Protocol transcripts.

inline Json transcript_to_json(const ProtocolTranscript& transcript) {
  Json j = Json::object();
  j["rounds"] = transcript.rounds;
  j["alice_bits"] = transcript.alice_bits;
  j["bob_bits"] = transcript.bob_bits;
  Json rounds = Json::array();
  for (const auto& r : transcript.round_details) {
    Json row = Json::object();
    row["cells_requested"] = r.cells_requested;
    row["alice_bits"] = r.alice_bits;
    row["bob_bits"] = r.bob_bits;
    rounds.push_back(std::move(row));
  }
  j["round_details"] = std::move(rounds);
  j["answer"] = transcript.answer;
  return j;
}

inline ProtocolTranscript parse_transcript(const Json& j) {
  ProtocolTranscript out;
  out.rounds = detail::require_field(j, "rounds").get<std::uint64_t>();
  out.alice_bits = detail::require_field(j, "alice_bits").get<std::uint64_t>();
  out.bob_bits = detail::require_field(j, "bob_bits").get<std::uint64_t>();
  for (const auto& row : detail::require_field(j, "round_details")) {
    RoundRecord r;
    r.cells_requested =
        detail::require_field(row, "cells_requested").get<std::uint64_t>();
    r.alice_bits = detail::require_field(row, "alice_bits").get<std::uint64_t>();
    r.bob_bits = detail::require_field(row, "bob_bits").get<std::uint64_t>();
    out.round_details.push_back(r);
  }
  out.answer = detail::require_field(j, "answer").get<bool>();
  return out;
}

// ----------------------------------------------------------------------------
// Run reports: the uniform envelope every CLI command prints.

struct RunReport {
  std::string command;
  Json parameters = Json::object();
  Json extras = Json::object();  // command-specific fields, emitted top-level
  std::uint64_t checks_passed = 0;
  std::uint64_t checks_failed = 0;
  std::vector<Json> failures;
  double wall_time_seconds = 0.0;
  std::string prng = kPrngName;

  void record(bool ok, Json failure_detail) {
    if (ok) {
      ++checks_passed;
    } else {
      ++checks_failed;
      failures.push_back(std::move(failure_detail));
    }
  }
};

inline Json report_to_json(const RunReport& report) {
  if (report.checks_failed != report.failures.size())
    throw std::logic_error("failure count out of sync with failure list");
  Json j = Json::object();
  j["command"] = report.command;
  j["parameters"] = report.parameters;
  for (const auto& [key, value] : report.extras.items()) j[key] = value;
  j["checks_passed"] = report.checks_passed;
  j["checks_failed"] = report.checks_failed;
  j["failures"] = report.failures;
  j["wall_time_seconds"] = report.wall_time_seconds;
  j["prng"] = report.prng;
  return j;
}

inline RunReport parse_report(const Json& j) {
  RunReport report;
  report.command = detail::require_field(j, "command").get<std::string>();
  report.parameters = detail::require_field(j, "parameters");
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"command",       "parameters", "checks_passed",
                                  "checks_failed", "failures",   "wall_time_seconds",
                                  "prng"};
    bool reserved = false;
    for (const char* k : known) reserved = reserved || key == k;
    if (!reserved) report.extras[key] = value;
  }
  report.checks_passed =
      detail::require_field(j, "checks_passed").get<std::uint64_t>();
  report.checks_failed =
      detail::require_field(j, "checks_failed").get<std::uint64_t>();
  for (const auto& f : detail::require_field(j, "failures"))
    report.failures.push_back(f);
  report.wall_time_seconds =
      detail::require_field(j, "wall_time_seconds").get<double>();
  report.prng = detail::require_field(j, "prng").get<std::string>();
  if (report.checks_failed != report.failures.size())
    throw std::invalid_argument("failure count out of sync with failure list");
  return report;
}

}  // namespace sumlab
