#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Finite abelian groups over a single machine word: Z_m ("cyclic") and
// Z_2^k ("xor_bits").  Elements are canonical representatives in
// [0, cardinality).  Also provides the two digit codecs used by the
// reductions: a mixed-radix positional encoding into Z_m and a fixed-width
// bit-field packing into Z_2^k.

namespace sumlab {

enum class GroupKind { cyclic, xor_bits };

class GroupSpec {
 public:
  static GroupSpec cyclic(std::uint64_t modulus) {
    if (modulus < 2) throw std::invalid_argument("cyclic modulus must be >= 2");
    return GroupSpec(GroupKind::cyclic, modulus);
  }

  static GroupSpec xor_bits(std::uint64_t width) {
    if (width < 1 || width > 63)
      throw std::invalid_argument("xor width must be in [1, 63]");
    return GroupSpec(GroupKind::xor_bits, width);
  }

  GroupKind kind() const { return kind_; }

  // m for cyclic groups, k for xor groups.
  std::uint64_t parameter() const { return param_; }

  std::uint64_t cardinality() const {
    return kind_ == GroupKind::cyclic ? param_ : (std::uint64_t{1} << param_);
  }

  bool contains(std::uint64_t v) const { return v < cardinality(); }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(GroupKind kind, std::uint64_t param) : kind_(kind), param_(param) {}

  GroupKind kind_;
  std::uint64_t param_;
};

inline void require_element(const GroupSpec& g, std::uint64_t v) {
  if (!g.contains(v))
    throw std::domain_error("value " + std::to_string(v) +
                            " is not a canonical element of the group");
}

inline std::uint64_t add(const GroupSpec& g, std::uint64_t a, std::uint64_t b) {
  require_element(g, a);
  require_element(g, b);
  if (g.kind() == GroupKind::xor_bits) return a ^ b;
  std::uint64_t m = g.cardinality();
  unsigned __int128 s = static_cast<unsigned __int128>(a) + b;
  return static_cast<std::uint64_t>(s >= m ? s - m : s);
}

inline std::uint64_t negate(const GroupSpec& g, std::uint64_t a) {
  require_element(g, a);
  if (g.kind() == GroupKind::xor_bits) return a;
  return a == 0 ? 0 : g.cardinality() - a;
}

inline std::uint64_t sub(const GroupSpec& g, std::uint64_t a, std::uint64_t b) {
  return add(g, a, negate(g, b));
}

// ----------------------------------------------------------------------------
// Mixed-radix positional encoding, most significant digit first.
// The value of digit i is multiplied by the product of all radices after i,
// so the full digit space covers Z_modulus exactly.

class MixedRadixLayout {
 public:
  explicit MixedRadixLayout(std::vector<std::uint64_t> radices)
      : radices_(std::move(radices)) {
    if (radices_.empty())
      throw std::invalid_argument("mixed radix layout needs >= 1 radix");
    unsigned __int128 prod = 1;
    for (std::uint64_t r : radices_) {
      if (r < 2) throw std::invalid_argument("every radix must be >= 2");
      prod *= r;
      if (prod > UINT64_MAX)
        throw std::overflow_error("radix product exceeds 64 bits");
    }
    modulus_ = static_cast<std::uint64_t>(prod);
  }

  const std::vector<std::uint64_t>& radices() const { return radices_; }
  std::size_t digit_count() const { return radices_.size(); }
  std::uint64_t modulus() const { return modulus_; }
  GroupSpec group() const { return GroupSpec::cyclic(modulus_); }

  std::uint64_t encode(std::span<const std::uint64_t> digits) const {
    if (digits.size() != radices_.size())
      throw std::invalid_argument("digit count does not match layout");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= radices_[i])
        throw std::domain_error("digit " + std::to_string(digits[i]) +
                                " out of range for radix " +
                                std::to_string(radices_[i]));
      v = v * radices_[i] + digits[i];
    }
    return v;
  }

  std::vector<std::uint64_t> decode(std::uint64_t value) const {
    if (value >= modulus_)
      throw std::domain_error("value out of range for layout");
    std::vector<std::uint64_t> digits(radices_.size());
    for (std::size_t i = radices_.size(); i-- > 0;) {
      digits[i] = value % radices_[i];
      value /= radices_[i];
    }
    return digits;
  }

 private:
  std::vector<std::uint64_t> radices_;
  std::uint64_t modulus_;
};

// ----------------------------------------------------------------------------
// Fixed-width bit-field packing for xor groups.  Field i holds digit i in
// ceil(log2 radix_i) bits, most significant field first.  Non-leading radices
// must be powers of two so that fields tile the word with no slack; the
// leading radix may be arbitrary.

inline unsigned ceil_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("ceil_log2(0)");
  return x == 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

class XorFieldLayout {
 public:
  explicit XorFieldLayout(std::vector<std::uint64_t> radices)
      : radices_(std::move(radices)) {
    if (radices_.empty())
      throw std::invalid_argument("xor field layout needs >= 1 radix");
    total_width_ = 0;
    for (std::size_t i = 0; i < radices_.size(); ++i) {
      std::uint64_t r = radices_[i];
      if (r < 2) throw std::invalid_argument("every radix must be >= 2");
      if (i > 0 && !std::has_single_bit(r))
        throw std::invalid_argument(
            "non-leading radix " + std::to_string(r) +
            " is not a power of two; fields would not tile");
      widths_.push_back(ceil_log2(r));
      total_width_ += widths_.back();
    }
    if (total_width_ < 1 || total_width_ > 63)
      throw std::overflow_error("packed width must fit in [1, 63] bits");
  }

  const std::vector<std::uint64_t>& radices() const { return radices_; }
  const std::vector<unsigned>& field_widths() const { return widths_; }
  unsigned bit_width() const { return total_width_; }
  GroupSpec group() const { return GroupSpec::xor_bits(total_width_); }

  std::uint64_t pack(std::span<const std::uint64_t> digits) const {
    if (digits.size() != radices_.size())
      throw std::invalid_argument("digit count does not match layout");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= radices_[i])
        throw std::domain_error("digit out of range for radix");
      v = (v << widths_[i]) | digits[i];
    }
    return v;
  }

  std::vector<std::uint64_t> unpack(std::uint64_t value) const {
    if (value >> total_width_)
      throw std::domain_error("value out of range for layout");
    std::vector<std::uint64_t> digits(radices_.size());
    for (std::size_t i = radices_.size(); i-- > 0;) {
      digits[i] = value & ((std::uint64_t{1} << widths_[i]) - 1);
      value >>= widths_[i];
    }
    return digits;
  }

 private:
  std::vector<std::uint64_t> radices_;
  std::vector<unsigned> widths_;
  unsigned total_width_;
};

inline std::uint64_t xor_pack(const XorFieldLayout& layout,
                              std::span<const std::uint64_t> digits) {
  return layout.pack(digits);
}

}  // namespace sumlab
