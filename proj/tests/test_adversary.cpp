#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <numeric>
#include <vector>

#include "sumlab/adversary.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/threesum.hpp"

using namespace sumlab;

namespace {

// Independent check via subset enumeration: the expected number of queries a
// random delta-subset of the cells still covers, when every query reads the
// same fixed probe cells.
Rational brute_sampling_count(std::uint64_t group_size, std::uint64_t cells,
                              std::uint64_t subset_size, std::uint64_t probes) {
  std::uint64_t containing = 0, total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    if (static_cast<std::uint64_t>(__builtin_popcountll(mask)) != subset_size)
      continue;
    ++total;
    std::uint64_t fixed = (std::uint64_t{1} << probes) - 1;
    if ((mask & fixed) == fixed) ++containing;
  }
  std::uint64_t num = group_size * containing, den = total;
  std::uint64_t g = std::gcd(num, den);  // den >= 1, so g >= 1
  return Rational{num / g, den / g};
}

}  // namespace

TEST_CASE("one query can be forced in or out") {
  GroupSpec g = GroupSpec::cyclic(23);
  std::vector<std::uint64_t> q{5};

  ConstructedInput yes = construct_input(g, q, {true}, 1, 7);
  REQUIRE(yes.a1.size() == 1);
  REQUIRE(yes.a2.size() == 1);
  REQUIRE(add(g, yes.a1[0], yes.a2[0]) == 5);
  REQUIRE(verify_pattern(g, q, {true}, yes.a1, yes.a2));

  ConstructedInput no = construct_input(g, q, {false}, 1, 7);
  REQUIRE(add(g, no.a1[0], no.a2[0]) != 5);
  REQUIRE(verify_pattern(g, q, {false}, no.a1, no.a2));
}

TEST_CASE("all four patterns over two queries match a brute-force recheck") {
  GroupSpec g = GroupSpec::cyclic(41);
  std::vector<std::uint64_t> q{5, 9};
  for (unsigned bits = 0; bits < 4; ++bits) {
    std::vector<bool> pattern{(bits & 1) != 0, (bits & 2) != 0};
    ConstructedInput in = construct_input(g, q, pattern, 2, bits);
    REQUIRE(verify_pattern(g, q, pattern, in.a1, in.a2));
    ThreeSumInstance inst(g, in.a1, in.a2);
    REQUIRE(brute_force_answer(inst, 5) == pattern[0]);
    REQUIRE(brute_force_answer(inst, 9) == pattern[1]);
  }
}

TEST_CASE("every pattern over four queries fits in the smallest legal group") {
  // n = 4 demands strictly more than 2*16 + 8 = 40 elements.
  GroupSpec g = GroupSpec::cyclic(41);
  std::vector<std::uint64_t> q{1, 7, 19, 33};
  for (unsigned bits = 0; bits < 16; ++bits) {
    std::vector<bool> pattern;
    for (unsigned i = 0; i < 4; ++i) pattern.push_back((bits >> i) & 1);
    ConstructedInput in = construct_input(g, q, pattern, 4, 123 + bits);
    REQUIRE(verify_pattern(g, q, pattern, in.a1, in.a2));
  }
}

TEST_CASE("the cardinality bound is sharp") {
  std::vector<std::uint64_t> q{3, 5};
  std::vector<bool> pattern{true, false};
  REQUIRE_THROWS_AS(
      construct_input(GroupSpec::cyclic(12), q, pattern, 2, 0),
      GroupTooSmall);
  REQUIRE_THROWS_WITH(
      construct_input(GroupSpec::cyclic(12), q, pattern, 2, 0),
      "group must have more than 2n^2 + 2n elements");
  REQUIRE_NOTHROW(construct_input(GroupSpec::cyclic(13), q, pattern, 2, 0));
  // GroupTooSmall is a kind of invalid_argument.
  REQUIRE_THROWS_AS(
      construct_input(GroupSpec::cyclic(12), q, pattern, 2, 0),
      std::invalid_argument);
}

TEST_CASE("argument validation") {
  GroupSpec g = GroupSpec::cyclic(101);
  std::vector<std::uint64_t> dup{4, 4}, two{4, 9}, oob{4, 200};
  REQUIRE_THROWS_AS(construct_input(g, dup, {true, false}, 3, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(construct_input(g, two, {true}, 3, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(construct_input(g, two, {true, false}, 1, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(construct_input(g, oob, {true, false}, 3, 0),
                    std::domain_error);
}

TEST_CASE("construction is a pure function of the seed") {
  GroupSpec g = GroupSpec::cyclic(1009);
  std::vector<std::uint64_t> q{10, 20, 30};
  std::vector<bool> pattern{true, false, true};
  ConstructedInput a = construct_input(g, q, pattern, 3, 42);
  ConstructedInput b = construct_input(g, q, pattern, 3, 42);
  REQUIRE(a.a1 == b.a1);
  REQUIRE(a.a2 == b.a2);
  ConstructedInput c = construct_input(g, q, pattern, 3, 43);
  REQUIRE((a.a1 != c.a1 || a.a2 != c.a2));
}

TEST_CASE("verify_pattern really rechecks the sums") {
  GroupSpec g = GroupSpec::cyclic(23);
  std::vector<std::uint64_t> q{5};
  std::vector<std::uint64_t> a1{3}, a2{2};  // 3 + 2 = 5, a hit
  REQUIRE(verify_pattern(g, q, {true}, a1, a2));
  REQUIRE_FALSE(verify_pattern(g, q, {false}, a1, a2));
}

TEST_CASE("sampling flips a fair coin per query and always verifies") {
  GroupSpec g = GroupSpec::cyclic(211);
  std::vector<std::uint64_t> q{3, 50};
  SampledInput once = sample_distribution(g, q, 4, 5);
  SampledInput again = sample_distribution(g, q, 4, 5);
  REQUIRE(once.pattern == again.pattern);
  REQUIRE(once.input.a1 == again.input.a1);
  REQUIRE(once.input.a2 == again.input.a2);

  std::size_t trials = 500, first = 0, second = 0;
  for (std::size_t seed = 0; seed < trials; ++seed) {
    SampledInput s = sample_distribution(g, q, 4, seed);
    REQUIRE(verify_pattern(g, q, s.pattern, s.input.a1, s.input.a2));
    first += s.pattern[0];
    second += s.pattern[1];
  }
  REQUIRE(first > trials * 2 / 5);
  REQUIRE(first < trials * 3 / 5);
  REQUIRE(second > trials * 2 / 5);
  REQUIRE(second < trials * 3 / 5);
}

TEST_CASE("cell sampling counts are pinned at small parameters") {
  REQUIRE(cell_sampling_count(16, 4, 2, 1) == Rational{8, 1});
  REQUIRE(cell_sampling_count(16, 8, 4, 2) == Rational{24, 7});
  REQUIRE(cell_sampling_count(100, 6, 3, 0) == Rational{100, 1});
  REQUIRE(cell_sampling_count(100, 6, 6, 4) == Rational{100, 1});
  REQUIRE_THROWS_AS(cell_sampling_count(16, 0, 0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(cell_sampling_count(16, 4, 5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(cell_sampling_count(16, 4, 2, 3), std::invalid_argument);
}

TEST_CASE("cell sampling counts match subset enumeration and stay reduced") {
  for (std::uint64_t cells = 1; cells <= 6; ++cells)
    for (std::uint64_t subset = 0; subset <= cells; ++subset)
      for (std::uint64_t probes = 0; probes <= subset; ++probes) {
        Rational got = cell_sampling_count(100, cells, subset, probes);
        INFO("S=" << cells << " delta=" << subset << " T=" << probes);
        REQUIRE(got == brute_sampling_count(100, cells, subset, probes));
        REQUIRE(got.den >= 1);
        if (got.num == 0)
          REQUIRE(got.den == 1);
        else
          REQUIRE(std::gcd(got.num, got.den) == 1);
      }
}
