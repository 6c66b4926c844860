#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "sumlab/butterfly_reduction.hpp"
#include "sumlab/prng.hpp"

using namespace sumlab;

namespace {

bool reduction_answer(const ReducedInstance& reduced, std::uint64_t s,
                      std::uint64_t t) {
  return brute_force_answer(reduced.instance, reduced.query(s, t));
}

// Exhaustive oracle comparison over every (s, t) pair of one edge set.
void require_equivalent(const ButterflySpec& spec, const EdgeSet& edges,
                        GroupKind kind) {
  ReducedInstance reduced = reduce(spec, edges, kind);
  for (std::uint64_t s = 0; s < spec.nodes_per_layer(); ++s)
    for (std::uint64_t t = 0; t < spec.nodes_per_layer(); ++t) {
      INFO("s=" << s << " t=" << t);
      REQUIRE(reduction_answer(reduced, s, t) ==
              !reachable(spec, edges, s, t));
    }
}

}  // namespace

TEST_CASE("layout digits: selector, presence, then label digits") {
  ButterflySpec spec(2, 2);
  ReductionLayout layout(spec, GroupKind::cyclic);
  REQUIRE(layout.digit_count() == 8);
  REQUIRE(layout.group() == GroupSpec::cyclic(12 * 2 * (1u << 6)));

  // Edge e_0(0, 1), present: only the presence digit and the sink's digit 0.
  REQUIRE(layout.encode_edge({0, 0, 1}, true) == 68);
  REQUIRE(layout.encode_edge({0, 0, 1}, false) == 4);
  REQUIRE(layout.encode_query(3, 3) == 60);
  REQUIRE(layout.decode(68) ==
          std::vector<std::uint64_t>{0, 1, 0, 0, 0, 1, 0, 0});
}

TEST_CASE("cyclic modulus matches the closed form") {
  for (auto [b, d] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {2, 1}, {2, 2}, {3, 2}, {2, 3}}) {
    ButterflySpec spec(b, d);
    ReductionLayout layout(spec, GroupKind::cyclic);
    std::uint64_t expect = 12 * std::uint64_t{d};
    for (std::uint32_t i = 0; i < 2 * d + 2; ++i) expect *= b;
    REQUIRE(layout.group().parameter() == expect);
  }
}

TEST_CASE("xor layout packs into the closed-form width") {
  ButterflySpec spec(2, 3);
  ReductionLayout layout(spec, GroupKind::xor_bits);
  REQUIRE(layout.xor_bit_width() == ceil_log2(4 * 3) + 1 + (2 * 3 + 2));
  REQUIRE_THROWS_AS(ReductionLayout(ButterflySpec(3, 2), GroupKind::xor_bits),
                    std::invalid_argument);
}

TEST_CASE("both sides have one element per edge") {
  ButterflySpec spec(2, 2);
  ReductionLayout layout(spec, GroupKind::cyclic);
  EdgeSet half = EdgeSet::none(spec);
  for (std::uint64_t i = 0; i < spec.edge_count(); i += 2)
    half.insert(edge_at(spec, i));

  auto a1 = layout.build_a1(half);
  auto a2 = layout.build_a2();
  REQUIRE(a1.size() == spec.edge_count());
  REQUIRE(a2.size() == spec.edge_count());
  REQUIRE(a1.size() == 2 * (1u << 3));

  // Distinctness: the reduced instance constructor enforces it.
  REQUIRE_NOTHROW(ThreeSumInstance(layout.group(), a1, a2));
}

TEST_CASE("reduction equals negated reachability, exhaustively at (2,1)") {
  ButterflySpec spec(2, 1);
  for (GroupKind kind : {GroupKind::cyclic, GroupKind::xor_bits})
    for (std::uint64_t mask = 0; mask < (1u << 4); ++mask) {
      EdgeSet edges = EdgeSet::none(spec);
      for (std::uint64_t i = 0; i < 4; ++i)
        if ((mask >> i) & 1) edges.insert(edge_at(spec, i));
      require_equivalent(spec, edges, kind);
    }
}

TEST_CASE("reduction equals negated reachability on sampled (2,2) sets") {
  ButterflySpec spec(2, 2);
  SplitMix64 rng(11);
  for (GroupKind kind : {GroupKind::cyclic, GroupKind::xor_bits}) {
    require_equivalent(spec, EdgeSet::all(spec), kind);
    require_equivalent(spec, EdgeSet::none(spec), kind);
    for (int i = 0; i < 6; ++i)
      require_equivalent(spec, random_edge_subset(spec, 0.5, rng.next()), kind);
  }
}

TEST_CASE("reduction handles a non-power-of-two degree") {
  ButterflySpec spec(3, 1);
  SplitMix64 rng(5);
  require_equivalent(spec, EdgeSet::all(spec), GroupKind::cyclic);
  for (int i = 0; i < 4; ++i)
    require_equivalent(spec, random_edge_subset(spec, 0.4, rng.next()),
                       GroupKind::cyclic);
}

TEST_CASE("cyclic and xor reductions give identical answer tables") {
  ButterflySpec spec(2, 2);
  SplitMix64 rng(99);
  for (int i = 0; i < 5; ++i) {
    EdgeSet edges = random_edge_subset(spec, 0.5, rng.next());
    ReducedInstance cyc = reduce(spec, edges, GroupKind::cyclic);
    ReducedInstance xr = reduce(spec, edges, GroupKind::xor_bits);
    for (std::uint64_t s = 0; s < 4; ++s)
      for (std::uint64_t t = 0; t < 4; ++t)
        REQUIRE(reduction_answer(cyc, s, t) == reduction_answer(xr, s, t));
  }
}

TEST_CASE("digit audits come back clean") {
  SplitMix64 rng(3);
  for (auto kind : {GroupKind::cyclic, GroupKind::xor_bits}) {
    ButterflySpec spec(2, 2);
    EdgeSet edges = random_edge_subset(spec, 0.5, rng.next());
    ReductionLayout layout(spec, kind);
    ReductionAudit audit = audit_reduction_pairs(
        layout, layout.build_a1(edges), layout.build_a2());
    REQUIRE(audit.clean());
    REQUIRE(audit.pairs_checked ==
            spec.edge_count() * spec.edge_count());
    REQUIRE(audit.matched_pairs > 0);
  }
}

TEST_CASE("rejecting foreign edge sets") {
  ReductionLayout layout(ButterflySpec(2, 2), GroupKind::cyclic);
  EdgeSet other = EdgeSet::all(ButterflySpec(2, 3));
  REQUIRE_THROWS_AS(layout.build_a1(other), std::invalid_argument);
}

TEST_CASE("suggested degree balances cells against input size") {
  REQUIRE(suggested_degree(1024, 16, 4096) == 64);
  REQUIRE(suggested_degree(1, 1, 1000000) == 2);
  REQUIRE_THROWS_AS(suggested_degree(0, 1, 1), std::invalid_argument);
}
