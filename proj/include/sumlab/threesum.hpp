#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "sumlab/errors.hpp"
#include "sumlab/group.hpp"

// The query problem at the center of the library: preprocess two equal-size
// sets A1, A2 of group elements so that "is z = a1 + a2 solvable?" can be
// answered by probing few memory cells.  This header holds the instance type,
// the exact reference answer, two honest probe-counting structures
// (bit vector and sorted sum list), and the table-driven non-adaptive scheme
// representation that the refuter analyzes.

namespace sumlab {

class ThreeSumInstance {
 public:
  ThreeSumInstance(GroupSpec group, std::vector<std::uint64_t> a1,
                   std::vector<std::uint64_t> a2)
      : group_(group), a1_(std::move(a1)), a2_(std::move(a2)) {
    if (a1_.size() != a2_.size())
      throw std::invalid_argument("a1 and a2 must have equal size");
    normalize(a1_);
    normalize(a2_);
  }

  const GroupSpec& group() const { return group_; }
  const std::vector<std::uint64_t>& a1() const { return a1_; }
  const std::vector<std::uint64_t>& a2() const { return a2_; }
  std::size_t n() const { return a1_.size(); }

 private:
  void normalize(std::vector<std::uint64_t>& v) {
    for (std::uint64_t x : v) require_element(group_, x);
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      throw std::invalid_argument("sets must not contain duplicates");
  }

  GroupSpec group_;
  std::vector<std::uint64_t> a1_, a2_;
};

// Exact answer by enumerating one side: z in A1 + A2  iff  z - a1 hits A2.
inline bool brute_force_answer(const ThreeSumInstance& inst, std::uint64_t z) {
  require_element(inst.group(), z);
  std::unordered_set<std::uint64_t> a2(inst.a2().begin(), inst.a2().end());
  for (std::uint64_t a1 : inst.a1())
    if (a2.contains(sub(inst.group(), z, a1))) return true;
  return false;
}

inline std::vector<std::uint64_t> sumset(const ThreeSumInstance& inst) {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t a1 : inst.a1())
    for (std::uint64_t a2 : inst.a2()) seen.insert(add(inst.group(), a1, a2));
  std::vector<std::uint64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ----------------------------------------------------------------------------
// Probe accounting shared by the query structures.  The cap is advisory: when
// set, exceeding it throws, but nothing truncates a query midway.

struct ProbeBudget {
  std::size_t cell_count = 0;
  unsigned cell_width = 1;
  std::size_t probes_made = 0;
  std::optional<std::size_t> cap;

  void charge(std::size_t probes = 1) {
    probes_made += probes;
    if (cap && probes_made > *cap)
      throw ProbeCapExceeded("probe cap exceeded: " +
                             std::to_string(probes_made) + " > " +
                             std::to_string(*cap));
  }
};

// One bit per group element; a query reads exactly the bit at index z.
class BitvectorStructure {
 public:
  static constexpr std::size_t kDefaultCellLimit = std::size_t{1} << 26;

  static BitvectorStructure build(const ThreeSumInstance& inst,
                                  std::size_t max_cells = kDefaultCellLimit) {
    std::uint64_t card = inst.group().cardinality();
    if (card > max_cells)
      throw std::length_error("group too large to materialize a bit vector");
    BitvectorStructure s;
    s.group_ = inst.group();
    s.bits_.assign(card, false);
    for (std::uint64_t v : sumset(inst)) s.bits_[v] = true;
    return s;
  }

  std::size_t cell_count() const { return bits_.size(); }
  unsigned cell_width() const { return 1; }
  unsigned max_probes() const { return 1; }

  bool query(std::uint64_t z, ProbeBudget& budget,
             std::vector<std::uint64_t>* trace = nullptr) const {
    require_element(*group_, z);
    budget.charge();
    if (trace) trace->push_back(z);
    return bits_[z];
  }

 private:
  BitvectorStructure() = default;
  std::optional<GroupSpec> group_;
  std::vector<bool> bits_;
};

// Sorted list of the distinct sums, one value per w-bit cell; a query is a
// binary search, so it costs at most ceil(log2 |sums|) + 1 probes.
class SortedSumsetStructure {
 public:
  static SortedSumsetStructure build(const ThreeSumInstance& inst) {
    SortedSumsetStructure s;
    s.group_ = inst.group();
    s.values_ = sumset(inst);
    s.width_ = std::max(1u, ceil_log2(inst.group().cardinality()));
    return s;
  }

  std::size_t cell_count() const { return values_.size(); }
  unsigned cell_width() const { return width_; }

  unsigned max_probes() const {
    return values_.empty() ? 0 : ceil_log2(values_.size()) + 1;
  }

  bool query(std::uint64_t z, ProbeBudget& budget,
             std::vector<std::uint64_t>* trace = nullptr) const {
    require_element(*group_, z);
    std::size_t lo = 0, hi = values_.size();
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      budget.charge();
      if (trace) trace->push_back(mid);
      if (values_[mid] == z) return true;
      if (values_[mid] < z)
        lo = mid + 1;
      else
        hi = mid;
    }
    return false;
  }

 private:
  SortedSumsetStructure() = default;
  std::optional<GroupSpec> group_;
  std::vector<std::uint64_t> values_;
  unsigned width_ = 1;
};

// ----------------------------------------------------------------------------
// Non-adaptive bit-probe scheme: query z always reads the same T cells, and a
// per-query truth table maps the probed bits to the answer.  Table index is
// the probed bits read most significant first in probe order, so with T = 2
// the answer for bits (x, y) is bit (2x + y) of the table.

struct NonAdaptiveScheme {
  std::size_t cell_count = 0;                      // S
  unsigned probes_per_query = 0;                   // T
  std::vector<std::vector<std::uint32_t>> probes;  // one entry per query value
  std::vector<std::uint64_t> tables;               // 2^T-bit truth tables

  void validate(const GroupSpec& group) const {
    if (probes_per_query == 0 || probes_per_query > 6)
      throw std::invalid_argument("probes per query must be in [1, 6]");
    std::uint64_t card = group.cardinality();
    if (probes.size() != card || tables.size() != card)
      throw std::invalid_argument(
          "scheme must list probes and a table for every query value");
    std::uint64_t table_bits = std::uint64_t{1} << probes_per_query;
    for (std::uint64_t q = 0; q < card; ++q) {
      if (probes[q].size() != probes_per_query)
        throw std::invalid_argument("wrong probe count for a query");
      for (std::uint32_t cell : probes[q])
        if (cell >= cell_count)
          throw std::invalid_argument("probe addresses a cell out of range");
      if (table_bits < 64 && (tables[q] >> table_bits))
        throw std::invalid_argument("truth table wider than 2^T bits");
    }
  }
};

// memory is one bit per cell, memory.size() == scheme.cell_count.
inline bool scheme_answer(const NonAdaptiveScheme& scheme,
                          std::span<const std::uint8_t> memory,
                          std::uint64_t z) {
  if (memory.size() != scheme.cell_count)
    throw std::invalid_argument("memory size does not match cell count");
  if (z >= scheme.probes.size())
    throw std::domain_error("query value out of range for scheme");
  std::uint64_t index = 0;
  for (std::uint32_t cell : scheme.probes[z])
    index = (index << 1) | (memory[cell] & 1);
  return (scheme.tables[z] >> index) & 1;
}

inline bool scheme_correct_on(const NonAdaptiveScheme& scheme,
                              std::span<const std::uint8_t> memory,
                              const ThreeSumInstance& inst) {
  std::unordered_set<std::uint64_t> sums;
  for (std::uint64_t v : sumset(inst)) sums.insert(v);
  for (std::uint64_t z = 0; z < inst.group().cardinality(); ++z)
    if (scheme_answer(scheme, memory, z) != sums.contains(z)) return false;
  return true;
}

}  // namespace sumlab
