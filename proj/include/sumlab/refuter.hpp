#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sumlab/adversary.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/group.hpp"
#include "sumlab/threesum.hpp"

// Refutation machinery for non-adaptive 2-bit-probe schemes.  Viewing cells
// as nodes and each query's probe pair as an edge labeled by its 4-entry
// truth table, four local shapes are impossible to serve correctly:
//
//   * an edge whose answer ignores the probed bits entirely,
//   * three parallel edges (8 wanted answer patterns, 4 reachable),
//   * two edges that both just forward one node's bit (4 wanted, 2 reachable),
//   * a cycle of all-AND-family or all-XOR-family edges (a parity or
//     rare-output constraint kills at least one pattern).
//
// For any of these the certificate names the queries Q, the cells C they
// read, an answer pattern p no memory can produce, and a witness input that
// demands exactly p; checking the certificate is a finite enumeration.

namespace sumlab {

enum class FunctionType { copy, constant, and_type, xor_type };

// Truth tables are 4-bit integers; bit (2x + y) is the answer when the first
// probe reads x and the second reads y.
inline FunctionType classify(unsigned table) {
  if (table > 15) throw std::domain_error("truth table must be in [0, 15]");
  switch (std::popcount(table)) {
    case 0:
    case 4:
      return FunctionType::constant;
    case 1:
    case 3:
      return FunctionType::and_type;
    default:
      // popcount 2: x, !x, y, !y forward one input; the other two are parity.
      return table == 6 || table == 9 ? FunctionType::xor_type
                                      : FunctionType::copy;
  }
}

struct TwoProbeScheme {
  std::size_t cell_count = 0;
  std::vector<std::array<std::uint32_t, 2>> probes;  // (u, v) per query value
  std::vector<std::uint8_t> tables;                  // 4-bit per query value

  static TwoProbeScheme from_scheme(const NonAdaptiveScheme& scheme) {
    if (scheme.probes_per_query != 2)
      throw std::invalid_argument("refuter handles exactly two probes per query");
    if (scheme.tables.size() != scheme.probes.size())
      throw std::invalid_argument("need one truth table per query");
    TwoProbeScheme out;
    out.cell_count = scheme.cell_count;
    out.probes.reserve(scheme.probes.size());
    out.tables.reserve(scheme.tables.size());
    for (std::size_t q = 0; q < scheme.probes.size(); ++q) {
      if (scheme.probes[q].size() != 2)
        throw std::invalid_argument("every query must probe exactly two cells");
      out.probes.push_back({scheme.probes[q][0], scheme.probes[q][1]});
      if (scheme.tables[q] > 15)
        throw std::invalid_argument("truth table must be in [0, 15]");
      out.tables.push_back(static_cast<std::uint8_t>(scheme.tables[q]));
    }
    return out;
  }

  NonAdaptiveScheme to_scheme() const {
    NonAdaptiveScheme out;
    out.cell_count = cell_count;
    out.probes_per_query = 2;
    for (const auto& p : probes) out.probes.push_back({p[0], p[1]});
    out.tables.assign(tables.begin(), tables.end());
    return out;
  }

  std::size_t query_count() const { return probes.size(); }

  bool answer(std::span<const std::uint8_t> memory, std::uint64_t q) const {
    unsigned idx = ((memory[probes[q][0]] & 1u) << 1) | (memory[probes[q][1]] & 1u);
    return (tables[q] >> idx) & 1;
  }

  void validate(const GroupSpec& group) const {
    if (probes.size() != group.cardinality() || tables.size() != probes.size())
      throw std::invalid_argument("scheme must cover every query value once");
    for (const auto& p : probes)
      if (p[0] >= cell_count || p[1] >= cell_count)
        throw std::invalid_argument("probe addresses a cell out of range");
  }
};

// f(x, y) restricted to the diagonal x == y, which is what a self-loop reads.
inline bool diagonal_constant(std::uint8_t table) {
  return ((table >> 0) & 1) == ((table >> 3) & 1);
}

// The single node whose bit fully determines this query's answer, if any.
inline std::optional<std::uint32_t> single_reader_node(const TwoProbeScheme& s,
                                                       std::uint64_t q) {
  std::uint32_t u = s.probes[q][0], v = s.probes[q][1];
  std::uint8_t t = s.tables[q];
  if (u == v) return diagonal_constant(t) ? std::nullopt : std::optional{u};
  if (classify(t) != FunctionType::copy) return std::nullopt;
  return (t == 12 || t == 3) ? u : v;  // x or !x reads u; y or !y reads v
}

// ----------------------------------------------------------------------------
// Probe multigraph.

struct ProbeGraph {
  struct Edge {
    std::uint32_t u, v;
    std::uint64_t query = 0;
    std::uint8_t table = 0;
  };

  std::size_t node_count = 0;
  std::vector<Edge> edges;
};

inline ProbeGraph build_graph(const TwoProbeScheme& scheme) {
  ProbeGraph g;
  g.node_count = scheme.cell_count;
  for (std::uint64_t q = 0; q < scheme.query_count(); ++q)
    g.edges.push_back(
        {scheme.probes[q][0], scheme.probes[q][1], q, scheme.tables[q]});
  return g;
}

namespace detail {

// Shortest cycle through simple edges only; assumes no self-loops or
// parallel edges in `adjacency`.  Removes each edge in turn and measures the
// shortest remaining path between its endpoints.
inline std::optional<std::vector<std::uint32_t>> shortest_simple_cycle(
    std::size_t node_count,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::vector<std::uint32_t>> adj(node_count);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  std::optional<std::vector<std::uint32_t>> best;
  for (auto [eu, ev] : edges) {
    // BFS from eu to ev that may not cross the removed edge (eu, ev).
    std::vector<std::int64_t> parent(node_count, -2);
    parent[eu] = -1;
    std::deque<std::uint32_t> frontier{eu};
    while (!frontier.empty()) {
      std::uint32_t x = frontier.front();
      frontier.pop_front();
      if (x == ev) break;
      for (std::uint32_t y : adj[x]) {
        if (parent[y] != -2) continue;
        if ((x == eu && y == ev) || (x == ev && y == eu)) continue;
        parent[y] = x;
        frontier.push_back(y);
      }
    }
    if (parent[ev] == -2) continue;
    std::vector<std::uint32_t> cycle;
    for (std::int64_t x = ev; x != -1; x = parent[x])
      cycle.push_back(static_cast<std::uint32_t>(x));
    std::reverse(cycle.begin(), cycle.end());  // eu ... ev, closed by (ev, eu)
    if (!best || cycle.size() < best->size()) best = std::move(cycle);
  }
  return best;
}

}  // namespace detail

// Multigraph girth: a self-loop is a 1-cycle and a parallel pair a 2-cycle.
inline std::optional<std::size_t> girth(const ProbeGraph& graph) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> multiplicity;
  bool parallel = false;
  for (const auto& e : graph.edges) {
    if (e.u == e.v) return 1;
    auto key = std::minmax(e.u, e.v);
    if (++multiplicity[{key.first, key.second}] >= 2) parallel = true;
  }
  if (parallel) return 2;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> simple;
  simple.reserve(graph.edges.size());
  for (const auto& e : graph.edges) simple.push_back(std::minmax(e.u, e.v));
  auto cycle = detail::shortest_simple_cycle(graph.node_count, simple);
  if (!cycle) return std::nullopt;
  return cycle->size();
}

// Moore-style lower bound: a graph with n nodes, average degree d > 2 and
// girth r satisfies n >= 2 * (d - 2)^(r/2 - 2).
inline bool girth_bound_check(std::size_t node_count, double avg_degree,
                              std::size_t girth_value) {
  if (avg_degree <= 2.0)
    throw std::invalid_argument("bound needs average degree > 2");
  double bound =
      2.0 * std::pow(avg_degree - 2.0,
                     static_cast<double>(girth_value) / 2.0 - 2.0);
  return static_cast<double>(node_count) >= bound;
}

// ----------------------------------------------------------------------------
// Weakness search, in a fixed order so results are reproducible.

enum class WeaknessKind {
  constant_edge,
  triple_parallel,
  copy_fan,
  monochromatic_cycle,
};

struct Weakness {
  WeaknessKind kind;
  std::vector<std::uint64_t> queries;  // cycle queries are in traversal order
  std::uint32_t fan_node = 0;
  FunctionType cycle_type = FunctionType::and_type;
};

inline std::optional<Weakness> find_weakness(const TwoProbeScheme& scheme) {
  std::uint64_t count = scheme.query_count();

  // 1: an answer that ignores memory.  A self-loop only ever reads the
  // diagonal of its table, so a constant diagonal counts.
  for (std::uint64_t q = 0; q < count; ++q) {
    bool fixed = classify(scheme.tables[q]) == FunctionType::constant ||
                 (scheme.probes[q][0] == scheme.probes[q][1] &&
                  diagonal_constant(scheme.tables[q]));
    if (fixed)
      return Weakness{WeaknessKind::constant_edge, {q}};
  }

  // 2: three edges on one unordered cell pair.
  {
    std::map<std::pair<std::uint32_t, std::uint32_t>,
             std::vector<std::uint64_t>> by_pair;
    for (std::uint64_t q = 0; q < count; ++q) {
      auto key = std::minmax(scheme.probes[q][0], scheme.probes[q][1]);
      auto& list = by_pair[{key.first, key.second}];
      list.push_back(q);
      if (list.size() == 3)
        return Weakness{WeaknessKind::triple_parallel, list};
    }
  }

  // 3: two queries that both just forward one node's bit.
  {
    std::map<std::uint32_t, std::vector<std::uint64_t>> readers;
    for (std::uint64_t q = 0; q < count; ++q) {
      auto node = single_reader_node(scheme, q);
      if (!node) continue;
      auto& list = readers[*node];
      list.push_back(q);
      if (list.size() == 2)
        return Weakness{WeaknessKind::copy_fan, list, *node};
    }
  }

  // 4: a cycle within one function family, AND family first.  Self-loops are
  // excluded: an AND-family self-loop acts as a copy and a XOR-family one as
  // a constant, so they belong to the earlier cases.
  for (FunctionType type : {FunctionType::and_type, FunctionType::xor_type}) {
    std::map<std::pair<std::uint32_t, std::uint32_t>,
             std::vector<std::uint64_t>> by_pair;
    for (std::uint64_t q = 0; q < count; ++q) {
      if (scheme.probes[q][0] == scheme.probes[q][1]) continue;
      if (classify(scheme.tables[q]) != type) continue;
      auto key = std::minmax(scheme.probes[q][0], scheme.probes[q][1]);
      auto& list = by_pair[{key.first, key.second}];
      list.push_back(q);
      if (list.size() == 2)  // same-family parallel pair closes a 2-cycle
        return Weakness{WeaknessKind::monochromatic_cycle, list, 0, type};
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> simple;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> representative;
    for (const auto& [pair, list] : by_pair) {
      simple.push_back(pair);
      representative[pair] = list.front();
    }
    auto cycle = detail::shortest_simple_cycle(scheme.cell_count, simple);
    if (!cycle) continue;
    std::vector<std::uint64_t> queries;
    for (std::size_t i = 0; i < cycle->size(); ++i) {
      std::uint32_t a = (*cycle)[i], b = (*cycle)[(i + 1) % cycle->size()];
      auto key = std::minmax(a, b);
      queries.push_back(representative.at({key.first, key.second}));
    }
    return Weakness{WeaknessKind::monochromatic_cycle, queries, 0, type};
  }

  return std::nullopt;
}

// ----------------------------------------------------------------------------
// Certificates.

struct RefutationCertificate {
  std::vector<std::uint64_t> queries;
  std::vector<std::uint32_t> cells;    // sorted, unique
  std::vector<std::uint8_t> pattern;   // target answer per query
  GroupSpec witness_group;
  std::vector<std::uint64_t> witness_a1, witness_a2;
  std::uint64_t witness_n = 0;
};

namespace detail {

inline constexpr unsigned kMaxEnumeratedCells = 26;

// Answer masks reachable by varying only the given cells (others are fixed
// to zero, which is irrelevant because every probe lands inside `cells`).
inline std::vector<bool> achievable_patterns(
    const TwoProbeScheme& scheme, std::span<const std::uint64_t> queries,
    std::span<const std::uint32_t> cells) {
  if (cells.size() > kMaxEnumeratedCells)
    throw std::length_error("too many cells to enumerate");
  std::vector<std::uint32_t> slot(scheme.cell_count, 0);
  for (std::size_t i = 0; i < cells.size(); ++i) slot[cells[i]] = i;
  std::vector<bool> achievable(std::size_t{1} << queries.size(), false);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells.size()); ++m) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      std::uint64_t q = queries[i];
      unsigned x = (m >> slot[scheme.probes[q][0]]) & 1;
      unsigned y = (m >> slot[scheme.probes[q][1]]) & 1;
      mask |= static_cast<std::uint64_t>((scheme.tables[q] >> (2 * x + y)) & 1)
              << i;
    }
    achievable[mask] = true;
  }
  return achievable;
}

}  // namespace detail

inline RefutationCertificate build_certificate(const TwoProbeScheme& scheme,
                                               const GroupSpec& group,
                                               const Weakness& weakness,
                                               std::uint64_t seed = 0) {
  const std::vector<std::uint64_t>& queries = weakness.queries;
  if (queries.empty()) throw std::invalid_argument("weakness names no queries");
  std::vector<std::uint32_t> cells;
  for (std::uint64_t q : queries) {
    cells.push_back(scheme.probes[q][0]);
    cells.push_back(scheme.probes[q][1]);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  std::vector<bool> achievable =
      detail::achievable_patterns(scheme, queries, cells);
  std::uint64_t target = achievable.size();
  for (std::uint64_t mask = 0; mask < achievable.size(); ++mask)
    if (!achievable[mask]) {
      target = mask;
      break;
    }
  if (target == achievable.size())
    throw std::logic_error(
        "every answer pattern is achievable; the weakness is not real");

  std::vector<bool> pattern_bits(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    pattern_bits[i] = (target >> i) & 1;
  ConstructedInput witness =
      construct_input(group, queries, pattern_bits, queries.size(), seed);

  RefutationCertificate cert{
      queries,
      std::move(cells),
      std::vector<std::uint8_t>(pattern_bits.begin(), pattern_bits.end()),
      group,
      std::move(witness.a1),
      std::move(witness.a2),
      queries.size()};
  return cert;
}

// A certificate stands only if (i) the named queries probe only the named
// cells, (ii) the witness input really demands the target pattern, and
// (iii) no assignment of the named cells produces the pattern.  Malformed
// certificates simply fail.
inline bool verify_certificate(const TwoProbeScheme& scheme,
                               const GroupSpec& group,
                               const RefutationCertificate& cert) {
  try {
    if (cert.queries.empty() || cert.pattern.size() != cert.queries.size())
      return false;
    if (!(cert.witness_group == group)) return false;
    if (scheme.query_count() != group.cardinality()) return false;
    for (std::uint32_t c : cert.cells)
      if (c >= scheme.cell_count) return false;
    std::vector<std::uint32_t> cells(cert.cells);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    if (cells.size() != cert.cells.size()) return false;

    for (std::uint64_t q : cert.queries) {
      if (q >= scheme.query_count()) return false;
      if (!std::binary_search(cells.begin(), cells.end(), scheme.probes[q][0]) ||
          !std::binary_search(cells.begin(), cells.end(), scheme.probes[q][1]))
        return false;
    }

    if (cert.witness_a1.size() != cert.witness_n ||
        cert.witness_a2.size() != cert.witness_n)
      return false;
    ThreeSumInstance witness(group, cert.witness_a1, cert.witness_a2);
    for (std::size_t i = 0; i < cert.queries.size(); ++i)
      if (brute_force_answer(witness, cert.queries[i]) !=
          static_cast<bool>(cert.pattern[i]))
        return false;

    std::vector<bool> achievable =
        detail::achievable_patterns(scheme, cert.queries, cells);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < cert.pattern.size(); ++i)
      mask |= static_cast<std::uint64_t>(cert.pattern[i] & 1) << i;
    return !achievable[mask];
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace sumlab
