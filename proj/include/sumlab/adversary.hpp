#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "sumlab/errors.hpp"
#include "sumlab/group.hpp"
#include "sumlab/prng.hpp"

// Inputs whose sums hit a watched set exactly where an adversary wants.
// Given queries Q and a target subset P of Q, construct_input builds sets
// A1, A2 of size n with (A1 + A2) intersect Q == P.  Each wanted p gets a
// dedicated pair (p - t, t) where t dodges every value that would create an
// unwanted query hit or a duplicate; at most 2n^2 + 2n values are ever
// blocked, so any group with more elements than that always has a choice.
// Sampling P uniformly therefore turns membership of each q into an
// independent fair coin, which is what makes the distribution adversarial.

namespace sumlab {

struct ConstructedInput {
  std::vector<std::uint64_t> a1, a2;
};

namespace detail {

inline void require_queries(const GroupSpec& group,
                            std::span<const std::uint64_t> queries) {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t q : queries) {
    require_element(group, q);
    if (!seen.insert(q).second)
      throw std::invalid_argument("query set contains duplicates");
  }
}

// Smallest non-blocked value at or cyclically after a random starting point.
inline std::uint64_t pick_avoiding(const GroupSpec& group,
                                   const std::unordered_set<std::uint64_t>& blocked,
                                   SplitMix64& rng) {
  std::uint64_t card = group.cardinality();
  std::uint64_t offset = rng.below(card);
  for (std::uint64_t step = 0; step < card; ++step) {
    std::uint64_t candidate = offset + step >= card ? offset + step - card
                                                    : offset + step;
    if (!blocked.contains(candidate)) return candidate;
  }
  throw GroupTooSmall("every group element is blocked");
}

inline ConstructedInput construct_input_with(
    const GroupSpec& group, std::span<const std::uint64_t> queries,
    const std::vector<bool>& pattern, std::size_t n, SplitMix64& rng) {
  require_queries(group, queries);
  if (pattern.size() != queries.size())
    throw std::invalid_argument("pattern must assign one bit per query");
  if (queries.size() > n)
    throw std::invalid_argument("need n >= |Q| to cover every wanted query");
  std::uint64_t card = group.cardinality();
  unsigned __int128 needed =
      2 * static_cast<unsigned __int128>(n) * n + 2 * static_cast<unsigned __int128>(n);
  if (card <= needed)
    throw GroupTooSmall("group must have more than 2n^2 + 2n elements");

  std::vector<std::uint64_t> unwanted;  // Q \ P
  for (std::size_t i = 0; i < queries.size(); ++i)
    if (!pattern[i]) unwanted.push_back(queries[i]);
  std::unordered_set<std::uint64_t> unwanted_set(unwanted.begin(),
                                                 unwanted.end());

  ConstructedInput out;
  std::unordered_set<std::uint64_t> a1_set, a2_set;

  auto covered = [&](std::uint64_t p) {
    for (std::uint64_t a1 : out.a1)
      if (a2_set.contains(sub(group, p, a1))) return true;
    return false;
  };

  // t may not recreate an unwanted query through either existing set, may not
  // duplicate an element, and p - t must not duplicate one either.
  auto add_pair_summing_to = [&](std::uint64_t p) {
    std::unordered_set<std::uint64_t> blocked;
    for (std::uint64_t q : unwanted) {
      for (std::uint64_t a2 : out.a2) blocked.insert(sub(group, add(group, p, a2), q));
      for (std::uint64_t a1 : out.a1) blocked.insert(sub(group, q, a1));
    }
    for (std::uint64_t a1 : out.a1) blocked.insert(sub(group, p, a1));
    for (std::uint64_t a2 : out.a2) blocked.insert(a2);
    std::uint64_t t = pick_avoiding(group, blocked, rng);
    out.a1.push_back(sub(group, p, t));
    out.a2.push_back(t);
    a1_set.insert(out.a1.back());
    a2_set.insert(t);
  };

  for (std::size_t i = 0; i < queries.size(); ++i)
    if (pattern[i] && !covered(queries[i])) add_pair_summing_to(queries[i]);

  // Pad to exactly n pairs; each pad sums to a fresh value outside Q.
  std::unordered_set<std::uint64_t> query_set(queries.begin(), queries.end());
  while (out.a1.size() < n) {
    std::uint64_t target = pick_avoiding(group, query_set, rng);
    add_pair_summing_to(target);
  }
  return out;
}

}  // namespace detail

inline ConstructedInput construct_input(const GroupSpec& group,
                                        std::span<const std::uint64_t> queries,
                                        const std::vector<bool>& pattern,
                                        std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return detail::construct_input_with(group, queries, pattern, n, rng);
}

// Checks (A1 + A2) intersect Q == P, with P given as a bit per query.
inline bool verify_pattern(const GroupSpec& group,
                           std::span<const std::uint64_t> queries,
                           const std::vector<bool>& pattern,
                           std::span<const std::uint64_t> a1,
                           std::span<const std::uint64_t> a2) {
  if (pattern.size() != queries.size())
    throw std::invalid_argument("pattern must assign one bit per query");
  std::unordered_set<std::uint64_t> a2_set(a2.begin(), a2.end());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    bool hit = false;
    for (std::uint64_t x : a1)
      if (a2_set.contains(sub(group, queries[i], x))) {
        hit = true;
        break;
      }
    if (hit != pattern[i]) return false;
  }
  return true;
}

struct SampledInput {
  std::vector<bool> pattern;
  ConstructedInput input;
};

// P uniform over subsets of Q, then a matching input; every query's
// membership is an independent fair coin.
inline SampledInput sample_distribution(const GroupSpec& group,
                                        std::span<const std::uint64_t> queries,
                                        std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SampledInput out;
  out.pattern.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    out.pattern.push_back(rng.flip());
  out.input =
      detail::construct_input_with(group, queries, out.pattern, n, rng);
  return out;
}

// ----------------------------------------------------------------------------
// Expected number of queries a uniformly random delta-subset of S cells can
// still answer when every query reads T fixed cells:
//   |G| * C(S-T, delta-T) / C(S, delta) = |G| * prod_i (delta-i)/(S-i).
// Kept as an exact reduced fraction.

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

inline Rational cell_sampling_count(std::uint64_t group_size, std::uint64_t cells,
                                    std::uint64_t subset_size,
                                    std::uint64_t probes) {
  if (cells == 0 || subset_size > cells || probes > subset_size)
    throw std::invalid_argument("need T <= delta <= S with S > 0");
  auto gcd128 = [](unsigned __int128 a, unsigned __int128 b) {
    while (b) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  };
  unsigned __int128 num = group_size, den = 1;
  for (std::uint64_t i = 0; i < probes; ++i) {
    unsigned __int128 nf = subset_size - i, df = cells - i;
    unsigned __int128 cap = ~static_cast<unsigned __int128>(0);
    if (num > cap / nf || den > cap / df)
      throw std::overflow_error("fraction exceeds 128 bits");
    num *= nf;
    den *= df;
    unsigned __int128 g = gcd128(num == 0 ? den : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  if (num > UINT64_MAX || den > UINT64_MAX)
    throw std::overflow_error("reduced fraction exceeds 64 bits");
  return Rational{static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

}  // namespace sumlab
