#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sumlab/butterfly.hpp"
#include "sumlab/group.hpp"
#include "sumlab/threesum.hpp"

// Encodes butterfly reachability as a 3SUM-indexing instance.  Every group
// element is a digit string with 2(d+2) digits, most significant first:
//
//   [ layer selector | presence | d label digits | d label digits | 2 spare ]
//
// A1 holds one element per edge e_k(i, j): selector k, presence bit, the
// digits of i at positions >= k, then the digits of j at positions <= k,
// zeros elsewhere.  A2 holds, for each layer k, every way to fill the digit
// positions that A1 leaves blank (selector -k so the pair cancels).  The
// query for (s, t) has zero selector, zero presence, the digits of s, and
// the digits of t.  Then z_(s,t) is a sum exactly when some edge of the
// unique (s, t) path has presence 0, i.e. exactly when t is unreachable.
//
// Digit sums stay below their radix on every pair that matters (the presence
// digit has radix 3 so a stray carry cannot reach the selector), which makes
// the same digit strings work verbatim in the xor group: there the selector
// field stores k on both sides, cancelling by self-inverse instead of by
// wrapping, and the presence field narrows to one bit.

namespace sumlab {

class ReductionLayout {
 public:
  ReductionLayout(ButterflySpec spec, GroupKind kind)
      : spec_(spec), kind_(kind) {
    std::uint64_t b = spec_.degree, d = spec_.depth;
    std::vector<std::uint64_t> radices;
    radices.push_back(4 * d);
    radices.push_back(kind == GroupKind::cyclic ? 3 : 2);
    for (std::uint64_t i = 0; i < 2 * d + 2; ++i) radices.push_back(b);
    if (kind == GroupKind::cyclic) {
      mixed_.emplace(radices);
    } else {
      xor_.emplace(radices);  // rejects degrees that are not powers of two
    }
  }

  const ButterflySpec& spec() const { return spec_; }
  GroupKind kind() const { return kind_; }
  std::size_t digit_count() const { return 2 * (spec_.depth + 2); }

  GroupSpec group() const {
    return kind_ == GroupKind::cyclic ? mixed_->group() : xor_->group();
  }

  unsigned xor_bit_width() const {
    if (kind_ != GroupKind::xor_bits)
      throw std::logic_error("layout is not over an xor group");
    return xor_->bit_width();
  }

  std::uint64_t encode_edge(const ButterflyEdge& e, bool present) const {
    require_edge(spec_, e);
    std::uint32_t d = spec_.depth, k = e.layer;
    std::vector<std::uint64_t> digits(digit_count(), 0);
    digits[0] = k;
    digits[1] = present ? 1 : 0;
    for (std::uint32_t q = 0; q < d; ++q) {
      std::uint32_t pos = d - 1 - q;
      if (pos >= k) digits[2 + q] = spec_.digit(e.from, pos);
      if (pos <= k) digits[2 + d + q] = spec_.digit(e.to, pos);
    }
    return encode(digits);
  }

  std::uint64_t encode_query(std::uint64_t source, std::uint64_t sink) const {
    if (source >= spec_.nodes_per_layer() || sink >= spec_.nodes_per_layer())
      throw std::domain_error("node label out of range");
    std::uint32_t d = spec_.depth;
    std::vector<std::uint64_t> digits(digit_count(), 0);
    for (std::uint32_t q = 0; q < d; ++q) {
      digits[2 + q] = spec_.digit(source, d - 1 - q);
      digits[2 + d + q] = spec_.digit(sink, d - 1 - q);
    }
    return encode(digits);
  }

  // One element per edge of the full butterfly; membership in `edges` only
  // moves the presence digit, so |A1| = d * B^(d+1) for every edge set.
  std::vector<std::uint64_t> build_a1(const EdgeSet& edges) const {
    if (!(edges.spec() == spec_))
      throw std::invalid_argument("edge set built for a different butterfly");
    std::vector<std::uint64_t> out;
    out.reserve(spec_.edge_count());
    for (std::uint64_t idx = 0; idx < spec_.edge_count(); ++idx) {
      ButterflyEdge e = edge_at(spec_, idx);
      out.push_back(encode_edge(e, edges.contains(idx)));
    }
    return out;
  }

  // For each layer k: selector that cancels k, zero presence, and every
  // assignment (enumerated lexicographically, most significant slot first)
  // of the d+1 digit positions complementary to an A1 element of layer k.
  std::vector<std::uint64_t> build_a2() const {
    std::uint32_t d = spec_.depth;
    std::uint64_t b = spec_.degree;
    std::vector<std::uint64_t> out;
    out.reserve(spec_.edge_count());
    for (std::uint32_t k = 0; k < d; ++k) {
      std::vector<std::size_t> slots;  // wildcard positions, msd first
      for (std::uint32_t q = 0; q < d; ++q)
        if (d - 1 - q < k) slots.push_back(2 + q);
      for (std::uint32_t q = 0; q < d; ++q)
        if (d - 1 - q > k) slots.push_back(2 + d + q);
      slots.push_back(2 + 2 * d);
      slots.push_back(2 + 2 * d + 1);

      std::vector<std::uint64_t> digits(digit_count(), 0);
      digits[0] = kind_ == GroupKind::cyclic ? (4 * d - k) % (4 * d)
                                             : std::uint64_t{k};
      std::vector<std::uint64_t> values(slots.size(), 0);  // slot odometer
      while (true) {
        for (std::size_t i = 0; i < slots.size(); ++i)
          digits[slots[i]] = values[i];
        out.push_back(encode(digits));
        std::size_t i = slots.size();
        while (i > 0 && ++values[i - 1] == b) values[--i] = 0;
        if (i == 0) break;
      }
    }
    return out;
  }

  std::vector<std::uint64_t> decode(std::uint64_t value) const {
    return kind_ == GroupKind::cyclic ? mixed_->decode(value)
                                      : xor_->unpack(value);
  }

 private:
  std::uint64_t encode(std::span<const std::uint64_t> digits) const {
    return kind_ == GroupKind::cyclic ? mixed_->encode(digits)
                                      : xor_->pack(digits);
  }

  ButterflySpec spec_;
  GroupKind kind_;
  std::optional<MixedRadixLayout> mixed_;
  std::optional<XorFieldLayout> xor_;
};

struct ReducedInstance {
  ReductionLayout layout;
  ThreeSumInstance instance;

  std::uint64_t query(std::uint64_t source, std::uint64_t sink) const {
    return layout.encode_query(source, sink);
  }
};

inline ReducedInstance reduce(const ButterflySpec& spec, const EdgeSet& edges,
                              GroupKind kind) {
  ReductionLayout layout(spec, kind);
  ThreeSumInstance inst(layout.group(), layout.build_a1(edges),
                        layout.build_a2());
  return ReducedInstance{std::move(layout), std::move(inst)};
}

// Degree that balances the reduction against a structure with S cells of w
// bits serving n elements; tiny parameters are clamped up to a real butterfly.
inline std::uint64_t suggested_degree(std::uint64_t cells, std::uint64_t width,
                                      std::uint64_t n) {
  if (cells == 0 || width == 0 || n == 0)
    throw std::invalid_argument("suggested_degree needs positive arguments");
  unsigned __int128 num = static_cast<unsigned __int128>(cells) * width * width;
  unsigned __int128 q = (num + n - 1) / n;
  if (q > UINT64_MAX) throw std::overflow_error("suggested degree overflows");
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(q));
}

// ----------------------------------------------------------------------------
// Digit audit over all A1 x A2 pairs.  For cyclic layouts, every pair whose
// sum has selector digit 0 must pair layer k with selector -k and must be
// carry-free in every other digit.  For xor layouts the analogue is equal
// selector fields and disjoint nonzero digit support.

struct ReductionAudit {
  std::uint64_t pairs_checked = 0;
  std::uint64_t matched_pairs = 0;         // pairs whose sum has selector 0
  std::uint64_t selector_violations = 0;   // matched but selectors don't cancel
  std::uint64_t carry_violations = 0;      // matched but some digit overflows

  bool clean() const { return selector_violations == 0 && carry_violations == 0; }
};

inline ReductionAudit audit_reduction_pairs(const ReductionLayout& layout,
                                            std::span<const std::uint64_t> a1,
                                            std::span<const std::uint64_t> a2) {
  GroupSpec g = layout.group();
  std::uint64_t selector_radix = 4 * std::uint64_t{layout.spec().depth};
  ReductionAudit audit;
  for (std::uint64_t x : a1) {
    std::vector<std::uint64_t> xd = layout.decode(x);
    for (std::uint64_t y : a2) {
      std::vector<std::uint64_t> yd = layout.decode(y);
      ++audit.pairs_checked;
      if (layout.decode(add(g, x, y))[0] != 0) continue;
      ++audit.matched_pairs;
      if (layout.kind() == GroupKind::cyclic) {
        if ((xd[0] + yd[0]) % selector_radix != 0) ++audit.selector_violations;
        for (std::size_t i = 1; i < xd.size(); ++i) {
          std::uint64_t radix = i == 1 ? 3 : layout.spec().degree;
          if (xd[i] + yd[i] >= radix) {
            ++audit.carry_violations;
            break;
          }
        }
      } else {
        if (xd[0] != yd[0]) ++audit.selector_violations;
        for (std::size_t i = 1; i < xd.size(); ++i) {
          if (xd[i] != 0 && yd[i] != 0) {
            ++audit.carry_violations;
            break;
          }
        }
      }
    }
  }
  return audit;
}

}  // namespace sumlab
