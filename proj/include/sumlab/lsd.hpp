#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sumlab/errors.hpp"
#include "sumlab/group.hpp"
#include "sumlab/threesum.hpp"

// Set disjointness with a lopsided split, phrased over the universe
// [N] x [B]: one side holds an arbitrary subset (the data), the other holds
// exactly one pair per index (the query vector).  Indices are grouped into
// N/ell blocks of ell.  Writing numbers in base 2B+1, a data pair (j, b) in
// block i becomes  i*base^(ell+1) + (b+1)*base^(j-i*ell),  and block i of the
// query vector becomes  z_i = i*base^(ell+1) + sum_j (b_j+1)*base^j.  A2 holds
// every vector of ell digits in [0, B] with exactly one zero, so a1 + a2 can
// reproduce the full digit string of z_i exactly when the data pair matching
// the query vector at some index of block i exists.  Digits stay below B+B+1,
// so no sums carry, and the group Z_delta with delta > N*base^(ell+2) is big
// enough that distinct digit strings stay distinct.
//
// Both sets are padded to exactly n = N*B elements with dummies
// (N+1+counter)*base^(ell+1); the A1 side uses counters [0, NB), the A2 side
// counters [NB, 2NB-1) plus a marker digit base^ell.  The marker keeps every
// wrapped sum involving a dummy visibly different from any z_i (the position-
// ell digit of z_i is always 0), which matters once ell = 1.

namespace sumlab {

struct BlockParams {
  std::uint32_t ell;    // block length, >= 1, divides N
  std::uint64_t base;   // 2B + 1
  std::uint64_t delta;  // group modulus, > N * base^(ell+2)

  GroupSpec group() const { return GroupSpec::cyclic(delta); }
};

namespace detail {
inline std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
  unsigned __int128 v = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    v *= base;
    if (v > UINT64_MAX) throw std::overflow_error("power exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(v);
}
}  // namespace detail

// The smallest group that gives every value computed by the reduction a
// unique representative.
inline BlockParams minimal_block_params(std::uint32_t index_count,
                                        std::uint32_t block_width,
                                        std::uint32_t ell) {
  if (index_count < 1 || block_width < 1 || ell < 1)
    throw std::invalid_argument("N, B, ell must all be >= 1");
  if (index_count % ell != 0)
    throw std::invalid_argument("ell must divide N; partial blocks are not supported");
  std::uint64_t base = 2 * std::uint64_t{block_width} + 1;
  unsigned __int128 bound =
      static_cast<unsigned __int128>(index_count) * detail::checked_pow(base, ell + 2);
  if (bound + 1 > UINT64_MAX)
    throw std::overflow_error("group modulus exceeds 64 bits");
  return BlockParams{ell, base, static_cast<std::uint64_t>(bound) + 1};
}

class LsdInstance {
 public:
  LsdInstance(std::uint32_t index_count, std::uint32_t block_width,
              std::vector<std::pair<std::uint32_t, std::uint32_t>> data,
              std::vector<std::uint32_t> query_vector)
      : index_count_(index_count),
        block_width_(block_width),
        data_(std::move(data)),
        query_vector_(std::move(query_vector)) {
    if (index_count_ < 1 || block_width_ < 1)
      throw std::invalid_argument("N and B must be >= 1");
    for (auto [j, b] : data_)
      if (j >= index_count_ || b >= block_width_)
        throw std::domain_error("data pair outside the universe");
    std::sort(data_.begin(), data_.end());
    if (std::adjacent_find(data_.begin(), data_.end()) != data_.end())
      throw std::invalid_argument("duplicate data pair");
    if (query_vector_.size() != index_count_)
      throw std::invalid_argument("query vector must have one entry per index");
    for (std::uint32_t b : query_vector_)
      if (b >= block_width_) throw std::domain_error("query entry outside [0, B)");
  }

  std::uint32_t index_count() const { return index_count_; }
  std::uint32_t block_width() const { return block_width_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& data() const {
    return data_;
  }
  const std::vector<std::uint32_t>& query_vector() const { return query_vector_; }

  // n = N * B, the padded size of both sets.
  std::uint64_t padded_size() const {
    return std::uint64_t{index_count_} * block_width_;
  }

 private:
  std::uint32_t index_count_, block_width_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> data_;
  std::vector<std::uint32_t> query_vector_;
};

inline bool brute_force_disjoint(const LsdInstance& inst) {
  for (std::uint32_t j = 0; j < inst.index_count(); ++j)
    if (std::binary_search(
            inst.data().begin(), inst.data().end(),
            std::make_pair(j, inst.query_vector()[j])))
      return false;
  return true;
}

inline std::vector<std::uint64_t> lsd_build_a1(
    const LsdInstance& inst, const BlockParams& params) {
  std::uint64_t base = params.base;
  std::uint64_t high = detail::checked_pow(base, params.ell + 1);
  std::vector<std::uint64_t> out;
  out.reserve(inst.padded_size());
  for (auto [j, b] : inst.data()) {
    std::uint32_t block = j / params.ell;
    out.push_back(block * high +
                  (b + 1) * detail::checked_pow(base, j - block * params.ell));
  }
  std::uint64_t n = inst.padded_size();
  for (std::uint64_t c = 0; out.size() < n; ++c)
    out.push_back((inst.index_count() + 1 + c) * high);
  return out;
}

inline std::vector<std::uint64_t> lsd_build_a2(
    const LsdInstance& inst, const BlockParams& params) {
  std::uint32_t ell = params.ell;
  std::uint32_t width = inst.block_width();
  std::uint64_t n = inst.padded_size();
  std::vector<std::uint64_t> out;

  // All digit vectors in [0, B]^ell with exactly one zero: pick the zero
  // position, then run an odometer over the other digits, low position first.
  std::vector<std::uint64_t> place(ell);
  for (std::uint32_t j = 0; j < ell; ++j)
    place[j] = detail::checked_pow(params.base, j);
  for (std::uint32_t zero_pos = 0; zero_pos < ell; ++zero_pos) {
    std::vector<std::uint32_t> digits(ell, 1);
    digits[zero_pos] = 0;
    while (true) {
      std::uint64_t v = 0;
      for (std::uint32_t j = 0; j < ell; ++j) v += digits[j] * place[j];
      out.push_back(v);
      std::uint32_t j = 0;
      for (; j < ell; ++j) {
        if (j == zero_pos) continue;
        if (++digits[j] <= width) break;
        digits[j] = 1;
      }
      if (j == ell) break;
    }
  }
  if (out.size() > n)
    throw std::invalid_argument(
        "ell too large for n: the structured side alone exceeds N*B");

  std::uint64_t high = detail::checked_pow(params.base, ell + 1);
  std::uint64_t marker = detail::checked_pow(params.base, ell);
  std::uint64_t nb = inst.padded_size();
  for (std::uint64_t c = nb; out.size() < n; ++c)
    out.push_back((inst.index_count() + 1 + c) * high + marker);
  return out;
}

inline std::vector<std::uint64_t> lsd_build_queries(
    const LsdInstance& inst, const BlockParams& params) {
  std::uint64_t high = detail::checked_pow(params.base, params.ell + 1);
  std::uint32_t blocks = inst.index_count() / params.ell;
  std::vector<std::uint64_t> out;
  out.reserve(blocks);
  for (std::uint32_t i = 0; i < blocks; ++i) {
    std::uint64_t z = i * high;
    std::uint64_t place = 1;
    for (std::uint32_t j = 0; j < params.ell; ++j) {
      z += (inst.query_vector()[i * params.ell + j] + 1) * place;
      place *= params.base;
    }
    out.push_back(z);
  }
  return out;
}

inline ThreeSumInstance lsd_reduce(const LsdInstance& inst,
                                   const BlockParams& params) {
  return ThreeSumInstance(params.group(), lsd_build_a1(inst, params),
                          lsd_build_a2(inst, params));
}

inline bool disjoint_via_reduction(const LsdInstance& inst,
                                   const BlockParams& params) {
  ThreeSumInstance reduced = lsd_reduce(inst, params);
  std::unordered_set<std::uint64_t> sums;
  for (std::uint64_t v : sumset(reduced)) sums.insert(v);
  for (std::uint64_t z : lsd_build_queries(inst, params))
    if (sums.contains(z)) return false;
  return true;
}

// Largest block length whose structured side stays near n^delta_exponent.
inline std::uint32_t choose_ell(std::uint64_t n, std::uint64_t block_width,
                                double delta_exponent) {
  if (n < 2 || block_width < 2)
    throw std::invalid_argument("choose_ell needs n >= 2 and B >= 2");
  if (delta_exponent <= 0.0 || delta_exponent >= 1.0)
    throw std::invalid_argument("delta exponent must be in (0, 1)");
  double raw = delta_exponent * std::log2(static_cast<double>(n)) /
               std::log2(static_cast<double>(2 * block_width + 1));
  double ell = std::floor(raw) - 2.0;
  return ell < 1.0 ? 1u : static_cast<std::uint32_t>(ell);
}

// ----------------------------------------------------------------------------
// Digit audit over every summing pair: a1 + a2 = z_i must come from a real
// data element of block i, with A2's zero digit aligned to A1's payload digit,
// the payload matching the query vector, and no digit sum reaching the base.

struct LsdAudit {
  std::uint64_t summing_pairs = 0;
  std::uint64_t violations = 0;

  bool clean() const { return violations == 0; }
};

inline LsdAudit audit_lsd_pairs(const LsdInstance& inst,
                                const BlockParams& params) {
  GroupSpec g = params.group();
  std::vector<std::uint64_t> a1 = lsd_build_a1(inst, params);
  std::vector<std::uint64_t> a2 = lsd_build_a2(inst, params);
  std::vector<std::uint64_t> queries = lsd_build_queries(inst, params);
  std::uint64_t high = detail::checked_pow(params.base, params.ell + 1);
  std::uint64_t low_span = detail::checked_pow(params.base, params.ell);
  LsdAudit audit;
  for (std::uint64_t x : a1)
    for (std::uint64_t y : a2)
      for (std::uint32_t i = 0; i < queries.size(); ++i) {
        if (add(g, x, y) != queries[i]) continue;
        ++audit.summing_pairs;
        bool ok = x / high == i && y < low_span;
        if (ok) {
          std::uint64_t xl = x % high, yl = y;
          for (std::uint32_t j = 0; j < params.ell && ok; ++j) {
            std::uint64_t xd = xl % params.base, yd = yl % params.base;
            xl /= params.base;
            yl /= params.base;
            bool payload = xd != 0;
            if (payload &&
                (yd != 0 ||
                 xd != inst.query_vector()[i * params.ell + j] + 1))
              ok = false;
            if (!payload && yd == 0) ok = false;  // zero digits must align
            if (xd + yd >= params.base) ok = false;
          }
          if (xl != 0) ok = false;  // position ell must be clean
        }
        if (!ok) ++audit.violations;
      }
  return audit;
}

// ----------------------------------------------------------------------------
// Communication protocol simulation.  Alice holds the queries, Bob holds the
// structure's memory.  In round r Alice announces the set of cells her still
// unfinished queries probe at step r (encoded by its lexicographic rank among
// all q_r-subsets of [S], plus a count prefix), and Bob returns those cells'
// contents.  The length bookkeeping is exact; only lengths are recorded.

inline unsigned __int128 binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    unsigned __int128 next = result * (n - k + i);
    if (next / (n - k + i) != result)
      throw std::overflow_error("binomial exceeds 128 bits");
    result = next / i;
  }
  return result;
}

inline unsigned ceil_log2_u128(unsigned __int128 x) {
  if (x == 0) throw std::invalid_argument("ceil_log2(0)");
  unsigned bits = 0;
  unsigned __int128 v = x - 1;
  while (v) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

// Lexicographic rank of a sorted subset among all |cells|-subsets of [n].
inline unsigned __int128 subset_lex_rank(std::span<const std::uint64_t> cells,
                                         std::uint64_t n) {
  unsigned __int128 rank = 0;
  std::uint64_t prev = 0;
  std::uint64_t k = cells.size();
  for (std::uint64_t idx = 0; idx < k; ++idx) {
    for (std::uint64_t c = prev; c < cells[idx]; ++c)
      rank += binomial(n - c - 1, k - idx - 1);
    prev = cells[idx] + 1;
  }
  return rank;
}

struct RoundRecord {
  std::uint64_t cells_requested = 0;
  std::uint64_t alice_bits = 0;
  std::uint64_t bob_bits = 0;
};

struct ProtocolTranscript {
  unsigned rounds = 0;
  std::uint64_t alice_bits = 0;
  std::uint64_t bob_bits = 0;
  std::vector<RoundRecord> round_details;
  bool answer = true;
};

template <class Structure>
ProtocolTranscript simulate_protocol(const Structure& structure,
                                     std::span<const std::uint64_t> queries,
                                     unsigned max_rounds) {
  std::vector<std::vector<std::uint64_t>> traces;
  bool any_hit = false;
  for (std::uint64_t z : queries) {
    ProbeBudget budget{structure.cell_count(), structure.cell_width()};
    std::vector<std::uint64_t> trace;
    if (structure.query(z, budget, &trace)) any_hit = true;
    if (trace.size() > max_rounds)
      throw ProtocolError("structure exceeded the allowed probe count");
    traces.push_back(std::move(trace));
  }

  ProtocolTranscript transcript;
  transcript.rounds = max_rounds;
  transcript.answer = !any_hit;
  for (unsigned r = 0; r < max_rounds; ++r) {
    std::set<std::uint64_t> cells;
    for (const auto& trace : traces)
      if (trace.size() > r) cells.insert(trace[r]);
    std::vector<std::uint64_t> sorted(cells.begin(), cells.end());
    unsigned __int128 combinations = binomial(structure.cell_count(), sorted.size());
    unsigned __int128 rank = subset_lex_rank(sorted, structure.cell_count());
    if (rank >= combinations)
      throw std::logic_error("subset rank out of range");
    RoundRecord record;
    record.cells_requested = sorted.size();
    record.alice_bits =
        ceil_log2_u128(combinations) + ceil_log2(sorted.size() + 1);
    record.bob_bits = sorted.size() * structure.cell_width();
    transcript.alice_bits += record.alice_bits;
    transcript.bob_bits += record.bob_bits;
    transcript.round_details.push_back(record);
  }
  return transcript;
}

}  // namespace sumlab
