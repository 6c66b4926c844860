#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "sumlab/butterfly.hpp"
#include "sumlab/prng.hpp"

using namespace sumlab;

TEST_CASE("butterfly dimensions") {
  REQUIRE_THROWS_AS(ButterflySpec(1, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(ButterflySpec(2, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(ButterflySpec(2, 23), std::length_error);

  ButterflySpec spec(2, 2);
  REQUIRE(spec.nodes_per_layer() == 4);
  REQUIRE(spec.edges_per_layer() == 8);
  REQUIRE(spec.edge_count() == 16);

  ButterflySpec wide(3, 2);
  REQUIRE(wide.nodes_per_layer() == 9);
  REQUIRE(wide.edge_count() == 2 * 27);
}

TEST_CASE("digit access works in base B") {
  ButterflySpec spec(3, 3);
  std::uint64_t label = 2 * 9 + 1 * 3 + 0;  // digits (msd..lsd) = 2,1,0
  REQUIRE(spec.digit(label, 0) == 0);
  REQUIRE(spec.digit(label, 1) == 1);
  REQUIRE(spec.digit(label, 2) == 2);
  REQUIRE(spec.with_digit(label, 0, 2) == 2 * 9 + 1 * 3 + 2);
  REQUIRE(spec.with_digit(label, 2, 0) == 1 * 3 + 0);
}

TEST_CASE("edges must agree off their layer digit") {
  ButterflySpec spec(2, 2);
  REQUIRE_NOTHROW(require_edge(spec, {0, 0b00, 0b01}));   // layer 0 flips bit 0
  REQUIRE_NOTHROW(require_edge(spec, {1, 0b01, 0b11}));   // layer 1 flips bit 1
  REQUIRE_NOTHROW(require_edge(spec, {1, 0b01, 0b01}));   // staying put is fine
  REQUIRE_THROWS_AS(require_edge(spec, {0, 0b00, 0b10}), std::domain_error);
  REQUIRE_THROWS_AS(require_edge(spec, {2, 0, 0}), std::domain_error);
  REQUIRE_THROWS_AS(require_edge(spec, {0, 4, 0}), std::domain_error);
}

TEST_CASE("edge indexing is a bijection") {
  for (auto [b, d] : std::vector<std::pair<std::uint64_t, std::uint32_t>>{
           {2, 2}, {3, 2}, {2, 3}}) {
    ButterflySpec spec(b, d);
    std::set<std::uint64_t> seen;
    for (const ButterflyEdge& e : all_edges(spec)) {
      std::uint64_t idx = edge_index(spec, e);
      REQUIRE(idx < spec.edge_count());
      REQUIRE(seen.insert(idx).second);
      ButterflyEdge back = edge_at(spec, idx);
      REQUIRE(back.layer == e.layer);
      REQUIRE(back.from == e.from);
      REQUIRE(back.to == e.to);
    }
    REQUIRE(seen.size() == spec.edge_count());
  }
}

TEST_CASE("the source-sink path is unique and rewrites one digit per layer") {
  ButterflySpec spec(2, 2);
  auto path = path_edges(spec, 0, 3);
  REQUIRE(path.size() == 2);
  REQUIRE(path[0].layer == 0);
  REQUIRE(path[0].from == 0);
  REQUIRE(path[0].to == 1);
  REQUIRE(path[1].layer == 1);
  REQUIRE(path[1].from == 1);
  REQUIRE(path[1].to == 3);

  for (std::uint64_t s = 0; s < spec.nodes_per_layer(); ++s)
    for (std::uint64_t t = 0; t < spec.nodes_per_layer(); ++t) {
      auto edges = path_edges(spec, s, t);
      REQUIRE(edges.size() == spec.depth);
      REQUIRE(edges.front().from == s);
      REQUIRE(edges.back().to == t);
      for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        REQUIRE(edges[i].to == edges[i + 1].from);
      for (const auto& e : edges) REQUIRE_NOTHROW(require_edge(spec, e));
    }
}

TEST_CASE("reachability means the whole path is present") {
  ButterflySpec spec(2, 2);
  EdgeSet full = EdgeSet::all(spec);
  EdgeSet empty = EdgeSet::none(spec);
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t t = 0; t < 4; ++t) {
      REQUIRE(reachable(spec, full, s, t));
      REQUIRE_FALSE(reachable(spec, empty, s, t));
    }

  // Exactly the path 0 -> 3: its endpoints connect, nothing else does.
  EdgeSet partial = EdgeSet::none(spec);
  for (const auto& e : path_edges(spec, 0, 3)) partial.insert(e);
  REQUIRE(reachable(spec, partial, 0, 3));
  REQUIRE_FALSE(reachable(spec, partial, 0, 0));
  REQUIRE_FALSE(reachable(spec, partial, 3, 0));
  REQUIRE_FALSE(reachable(spec, partial, 1, 3));
}

TEST_CASE("edge sets store membership by canonical index") {
  ButterflySpec spec(2, 2);
  EdgeSet set = EdgeSet::none(spec);
  ButterflyEdge e{0, 0, 1};
  REQUIRE_FALSE(set.contains(e));
  set.insert(e);
  REQUIRE(set.contains(e));
  REQUIRE(set.contains(edge_index(spec, e)));
  REQUIRE(set.count() == 1);
  REQUIRE(set.indices() == std::vector<std::uint64_t>{edge_index(spec, e)});
  set.erase(e);
  REQUIRE(set.count() == 0);
}

TEST_CASE("random subsets are seeded and honor the density parameter") {
  ButterflySpec spec(2, 3);
  EdgeSet a = random_edge_subset(spec, 0.5, 42);
  EdgeSet b = random_edge_subset(spec, 0.5, 42);
  EdgeSet c = random_edge_subset(spec, 0.5, 7);
  REQUIRE(a.indices() == b.indices());
  REQUIRE(a.indices() != c.indices());

  REQUIRE(random_edge_subset(spec, 0.0, 1).count() == 0);
  REQUIRE(random_edge_subset(spec, 1.0, 1).count() == spec.edge_count());
  REQUIRE_THROWS_AS(random_edge_subset(spec, 1.5, 1), std::invalid_argument);
}
