#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "sumlab/group.hpp"

using namespace sumlab;

TEST_CASE("group factories validate their parameter") {
  REQUIRE_THROWS_AS(GroupSpec::cyclic(0), std::invalid_argument);
  REQUIRE_THROWS_AS(GroupSpec::cyclic(1), std::invalid_argument);
  REQUIRE_THROWS_AS(GroupSpec::xor_bits(0), std::invalid_argument);
  REQUIRE_THROWS_AS(GroupSpec::xor_bits(64), std::invalid_argument);

  GroupSpec c = GroupSpec::cyclic(11);
  REQUIRE(c.kind() == GroupKind::cyclic);
  REQUIRE(c.parameter() == 11);
  REQUIRE(c.cardinality() == 11);

  GroupSpec x = GroupSpec::xor_bits(5);
  REQUIRE(x.cardinality() == 32);
  REQUIRE(x.contains(31));
  REQUIRE_FALSE(x.contains(32));

  REQUIRE(GroupSpec::cyclic(11) == GroupSpec::cyclic(11));
  REQUIRE_FALSE(GroupSpec::cyclic(11) == GroupSpec::cyclic(12));
  REQUIRE_FALSE(GroupSpec::cyclic(4) == GroupSpec::xor_bits(2));
}

TEST_CASE("cyclic arithmetic wraps and inverts") {
  GroupSpec g = GroupSpec::cyclic(11);
  REQUIRE(add(g, 7, 8) == 4);
  REQUIRE(add(g, 0, 10) == 10);
  REQUIRE(negate(g, 0) == 0);
  REQUIRE(negate(g, 3) == 8);
  REQUIRE(sub(g, 2, 5) == 8);
  for (std::uint64_t a = 0; a < 11; ++a)
    for (std::uint64_t b = 0; b < 11; ++b)
      REQUIRE(sub(g, add(g, a, b), b) == a);
  REQUIRE_THROWS_AS(add(g, 11, 0), std::domain_error);
}

TEST_CASE("cyclic addition survives moduli near 2^64") {
  GroupSpec g = GroupSpec::cyclic(UINT64_MAX);
  REQUIRE(add(g, UINT64_MAX - 1, UINT64_MAX - 1) == UINT64_MAX - 2);
  REQUIRE(sub(g, 0, UINT64_MAX - 1) == 1);
}

TEST_CASE("xor arithmetic is bitwise and self-inverse") {
  GroupSpec g = GroupSpec::xor_bits(4);
  REQUIRE(add(g, 0b1010, 0b0110) == 0b1100);
  for (std::uint64_t a = 0; a < 16; ++a) {
    REQUIRE(negate(g, a) == a);
    REQUIRE(add(g, a, a) == 0);
  }
}

TEST_CASE("mixed-radix layout encodes most significant digit first") {
  MixedRadixLayout layout({3, 2, 2});
  REQUIRE(layout.modulus() == 12);
  REQUIRE(layout.group() == GroupSpec::cyclic(12));
  REQUIRE(layout.encode(std::vector<std::uint64_t>{1, 0, 1}) == 5);
  REQUIRE(layout.decode(5) == std::vector<std::uint64_t>{1, 0, 1});
  for (std::uint64_t v = 0; v < 12; ++v)
    REQUIRE(layout.encode(layout.decode(v)) == v);

  REQUIRE_THROWS_AS(layout.encode(std::vector<std::uint64_t>{3, 0, 0}),
                    std::domain_error);
  REQUIRE_THROWS_AS(layout.encode(std::vector<std::uint64_t>{1, 0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(MixedRadixLayout({1, 2}), std::invalid_argument);
  REQUIRE_THROWS_AS(MixedRadixLayout(std::vector<std::uint64_t>(9, std::uint64_t{1} << 62)),
                    std::overflow_error);
}

TEST_CASE("digit-wise sums without overflow add carry-free") {
  MixedRadixLayout layout({3, 3});
  GroupSpec g = layout.group();
  for (std::uint64_t xa = 0; xa < 3; ++xa)
    for (std::uint64_t xb = 0; xb < 3; ++xb)
      for (std::uint64_t ya = 0; ya < 3; ++ya)
        for (std::uint64_t yb = 0; yb < 3; ++yb) {
          if (xa + ya >= 3 || xb + yb >= 3) continue;
          std::uint64_t lhs =
              add(g, layout.encode(std::vector<std::uint64_t>{xa, xb}),
                  layout.encode(std::vector<std::uint64_t>{ya, yb}));
          REQUIRE(lhs == layout.encode(
                             std::vector<std::uint64_t>{xa + ya, xb + yb}));
        }
}

TEST_CASE("ceil_log2 rounds up") {
  REQUIRE(ceil_log2(1) == 0);
  REQUIRE(ceil_log2(2) == 1);
  REQUIRE(ceil_log2(3) == 2);
  REQUIRE(ceil_log2(4) == 2);
  REQUIRE(ceil_log2(5) == 3);
  REQUIRE(ceil_log2(std::uint64_t{1} << 63) == 63);
}

TEST_CASE("xor field packing concatenates fixed-width fields") {
  XorFieldLayout layout({4, 2, 2});
  REQUIRE(layout.bit_width() == 4);
  REQUIRE(layout.group() == GroupSpec::xor_bits(4));
  REQUIRE(layout.pack(std::vector<std::uint64_t>{2, 1, 0}) == 0b1010);
  REQUIRE(layout.unpack(0b1010) == std::vector<std::uint64_t>{2, 1, 0});
  REQUIRE(xor_pack(layout, std::vector<std::uint64_t>{2, 1, 0}) == 0b1010);

  // Non-leading fields must be powers of two; the leading one may not be.
  REQUIRE_NOTHROW(XorFieldLayout({12, 2}));
  REQUIRE_THROWS_AS(XorFieldLayout({4, 3}), std::invalid_argument);
  REQUIRE_THROWS_AS(XorFieldLayout(std::vector<std::uint64_t>(64, 2)),
                    std::overflow_error);
}

TEST_CASE("packing turns field-wise xor into group xor") {
  XorFieldLayout layout({4, 2});
  GroupSpec g = layout.group();
  for (std::uint64_t xa = 0; xa < 4; ++xa)
    for (std::uint64_t xb = 0; xb < 2; ++xb)
      for (std::uint64_t ya = 0; ya < 4; ++ya)
        for (std::uint64_t yb = 0; yb < 2; ++yb) {
          std::uint64_t lhs =
              add(g, layout.pack(std::vector<std::uint64_t>{xa, xb}),
                  layout.pack(std::vector<std::uint64_t>{ya, yb}));
          REQUIRE(lhs == layout.pack(
                             std::vector<std::uint64_t>{xa ^ ya, xb ^ yb}));
        }
}

TEST_CASE("disjoint-support packing adds like digit-wise sum") {
  XorFieldLayout layout({4, 2, 2});
  GroupSpec g = layout.group();
  // When at most one side is nonzero per field, xor equals the field sum.
  std::vector<std::uint64_t> x{3, 1, 0}, y{0, 0, 1};
  REQUIRE(add(g, layout.pack(x), layout.pack(y)) ==
          layout.pack(std::vector<std::uint64_t>{3, 1, 1}));
}
