#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/prng.hpp"

// Butterfly graphs of degree B and depth d: d+1 layers of B^d nodes, where a
// node is labeled by d base-B digits.  Layer k is joined to layer k+1 by the
// edges e_k(i, j) whose endpoint labels agree on every digit except digit k,
// so each (source, sink) pair is connected by exactly one candidate path.

namespace sumlab {

struct ButterflySpec {
  std::uint32_t degree;  // B >= 2
  std::uint32_t depth;   // d >= 1

  static constexpr std::uint64_t kMaxLayerNodes = std::uint64_t{1} << 22;

  ButterflySpec(std::uint32_t b, std::uint32_t d) : degree(b), depth(d) {
    if (b < 2) throw std::invalid_argument("degree must be >= 2");
    if (d < 1) throw std::invalid_argument("depth must be >= 1");
    std::uint64_t nodes = 1;
    for (std::uint32_t h = 0; h < d; ++h) {
      nodes *= b;
      if (nodes > kMaxLayerNodes)
        throw std::length_error("B^d exceeds the supported layer size");
    }
    layer_nodes_ = nodes;
  }

  std::uint64_t nodes_per_layer() const { return layer_nodes_; }
  std::uint64_t edges_per_layer() const { return layer_nodes_ * degree; }
  std::uint64_t edge_count() const { return edges_per_layer() * depth; }

  // Base-B digit `pos` of a node label (digit 0 is least significant).
  std::uint64_t digit(std::uint64_t label, std::uint32_t pos) const {
    for (std::uint32_t h = 0; h < pos; ++h) label /= degree;
    return label % degree;
  }

  std::uint64_t with_digit(std::uint64_t label, std::uint32_t pos,
                           std::uint64_t value) const {
    std::uint64_t place = 1;
    for (std::uint32_t h = 0; h < pos; ++h) place *= degree;
    std::uint64_t old = (label / place) % degree;
    return label + (value - old) * place;
  }

  friend bool operator==(const ButterflySpec&, const ButterflySpec&) = default;

 private:
  std::uint64_t layer_nodes_;
};

// e_k(i, j): from node i of layer k to node j of layer k+1; labels i and j
// agree on every digit except digit k.
struct ButterflyEdge {
  std::uint32_t layer;
  std::uint64_t from;
  std::uint64_t to;

  friend bool operator==(const ButterflyEdge&, const ButterflyEdge&) = default;
};

inline void require_edge(const ButterflySpec& spec, const ButterflyEdge& e) {
  if (e.layer >= spec.depth) throw std::domain_error("edge layer out of range");
  if (e.from >= spec.nodes_per_layer() || e.to >= spec.nodes_per_layer())
    throw std::domain_error("edge endpoint label out of range");
  for (std::uint32_t h = 0; h < spec.depth; ++h)
    if (h != e.layer && spec.digit(e.from, h) != spec.digit(e.to, h))
      throw std::domain_error("endpoints disagree off the layer digit");
}

// Dense index ((k * B^d) + i) * B + j[k]; a bijection onto [0, edge_count).
inline std::uint64_t edge_index(const ButterflySpec& spec,
                                const ButterflyEdge& e) {
  require_edge(spec, e);
  return (std::uint64_t{e.layer} * spec.nodes_per_layer() + e.from) *
             spec.degree +
         spec.digit(e.to, e.layer);
}

inline ButterflyEdge edge_at(const ButterflySpec& spec, std::uint64_t index) {
  if (index >= spec.edge_count()) throw std::domain_error("edge index out of range");
  std::uint64_t jk = index % spec.degree;
  std::uint64_t rest = index / spec.degree;
  std::uint64_t from = rest % spec.nodes_per_layer();
  std::uint32_t layer = static_cast<std::uint32_t>(rest / spec.nodes_per_layer());
  return ButterflyEdge{layer, from, spec.with_digit(from, layer, jk)};
}

// Subset of the butterfly's edges, stored as one bit per dense edge index.
class EdgeSet {
 public:
  explicit EdgeSet(const ButterflySpec& spec, bool filled = false)
      : spec_(spec), bits_(spec.edge_count(), filled) {}

  static EdgeSet all(const ButterflySpec& spec) { return EdgeSet(spec, true); }
  static EdgeSet none(const ButterflySpec& spec) { return EdgeSet(spec, false); }

  const ButterflySpec& spec() const { return spec_; }

  bool contains(std::uint64_t index) const { return bits_.at(index); }
  bool contains(const ButterflyEdge& e) const {
    return bits_[edge_index(spec_, e)];
  }

  void insert(const ButterflyEdge& e) { bits_[edge_index(spec_, e)] = true; }
  void erase(const ButterflyEdge& e) { bits_[edge_index(spec_, e)] = false; }

  std::size_t count() const {
    std::size_t c = 0;
    for (bool b : bits_) c += b;
    return c;
  }

  std::vector<std::uint64_t> indices() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(i);
    return out;
  }

 private:
  ButterflySpec spec_;
  std::vector<bool> bits_;
};

inline std::vector<ButterflyEdge> all_edges(const ButterflySpec& spec) {
  std::vector<ButterflyEdge> edges;
  edges.reserve(spec.edge_count());
  for (std::uint64_t idx = 0; idx < spec.edge_count(); ++idx)
    edges.push_back(edge_at(spec, idx));
  return edges;
}

// The unique source-to-sink candidate path: by the time layer k is crossed,
// digits >= k still match the source while digits < k already match the sink,
// and crossing layer k rewrites digit k.
inline std::vector<ButterflyEdge> path_edges(const ButterflySpec& spec,
                                             std::uint64_t source,
                                             std::uint64_t sink) {
  if (source >= spec.nodes_per_layer() || sink >= spec.nodes_per_layer())
    throw std::domain_error("node label out of range");
  std::vector<ButterflyEdge> edges;
  edges.reserve(spec.depth);
  std::uint64_t current = source;
  for (std::uint32_t k = 0; k < spec.depth; ++k) {
    std::uint64_t next = spec.with_digit(current, k, spec.digit(sink, k));
    edges.push_back(ButterflyEdge{k, current, next});
    current = next;
  }
  return edges;
}

inline bool reachable(const ButterflySpec& spec, const EdgeSet& edges,
                      std::uint64_t source, std::uint64_t sink) {
  for (const ButterflyEdge& e : path_edges(spec, source, sink))
    if (!edges.contains(e)) return false;
  return true;
}

inline EdgeSet random_edge_subset(const ButterflySpec& spec,
                                  double keep_probability, std::uint64_t seed) {
  if (keep_probability < 0.0 || keep_probability > 1.0)
    throw std::invalid_argument("keep probability must be in [0, 1]");
  EdgeSet set(spec);
  SplitMix64 rng(seed);
  for (std::uint64_t idx = 0; idx < spec.edge_count(); ++idx)
    if (rng.unit() < keep_probability)
      set.insert(edge_at(spec, idx));
  return set;
}

}  // namespace sumlab
