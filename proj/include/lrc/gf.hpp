#pragma once

// Two-level field tower: a binary base field F_q = GF(2^s) and an extension
// F_{q^m} = F_q[x]/(p(x)) in the polynomial basis 1, x, ..., x^{m-1}.
//
// The basis choice is ours. Coordinates of an extension element are its
// coefficients in that basis, lowest power first.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lrc::gf {

inline constexpr int kMaxBaseBits = 8;
inline constexpr int kMaxExtDegree = 64;

using BaseElem = std::uint8_t;

/// GF(2^s), 1 <= s <= 8, with a full multiplication table.
class BaseField {
 public:
  /// Uses the lexicographically smallest irreducible binary polynomial of degree `bits`.
  explicit BaseField(int bits);
  /// `irreducible` is bit-encoded including the x^bits term; validated.
  BaseField(int bits, std::uint32_t irreducible);

  int bits() const noexcept { return bits_; }
  unsigned order() const noexcept { return order_; }
  std::uint32_t irreducible() const noexcept { return poly_; }

  BaseElem mul(BaseElem a, BaseElem b) const noexcept { return table_[a * order_ + b]; }
  const BaseElem* mul_row(BaseElem a) const noexcept { return &table_[a * order_]; }
  BaseElem inv(BaseElem a) const;
  bool contains(unsigned value) const noexcept { return value < order_; }

  friend bool operator==(const BaseField& a, const BaseField& b) noexcept {
    return a.bits_ == b.bits_ && a.poly_ == b.poly_;
  }

 private:
  void build_tables();

  int bits_;
  unsigned order_;
  std::uint32_t poly_;
  std::vector<BaseElem> table_;
  std::vector<BaseElem> inv_;
};

/// An element of F_{q^m} as its m coordinates over F_q. Value type; unused
/// trailing slots are always zero so defaulted equality is exact.
class FieldElem {
 public:
  FieldElem() = default;
  explicit FieldElem(int degree);

  int degree() const noexcept { return degree_; }
  BaseElem operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  BaseElem& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  std::span<const BaseElem> coords() const noexcept { return {c_.data(), degree_}; }
  bool is_zero() const noexcept;

  friend bool operator==(const FieldElem&, const FieldElem&) = default;

 private:
  std::array<BaseElem, kMaxExtDegree> c_{};
  std::uint8_t degree_ = 0;
};

class ExtField {
 public:
  /// Extension of degree m over `base` using the lexicographically smallest
  /// monic irreducible (tail coefficients read as a base-q integer).
  ExtField(BaseField base, int degree);
  /// `modulus` is monic, lowest coefficient first, length degree + 1; validated.
  ExtField(BaseField base, std::vector<BaseElem> modulus);

  const BaseField& base() const noexcept { return base_; }
  int degree() const noexcept { return degree_; }
  std::span<const BaseElem> modulus() const noexcept { return modulus_; }
  int bits_per_element() const noexcept { return base_.bits() * degree_; }
  std::size_t bytes_per_element() const noexcept {
    return static_cast<std::size_t>((bits_per_element() + 7) / 8);
  }

  FieldElem zero() const { return FieldElem(degree_); }
  FieldElem one() const;
  /// The i-th polynomial basis element x^i.
  FieldElem basis(int i) const;
  FieldElem embed(BaseElem c) const;
  FieldElem from_coords(std::span<const BaseElem> coords) const;
  bool contains(const FieldElem& a) const noexcept;

  FieldElem add(const FieldElem& a, const FieldElem& b) const;
  FieldElem mul(const FieldElem& a, const FieldElem& b) const;
  FieldElem inv(const FieldElem& a) const;
  /// F_q action: coordinate-wise scaling.
  FieldElem scale(BaseElem c, const FieldElem& a) const;
  /// acc += c * a without range checks on the hot path.
  void add_scaled(FieldElem& acc, BaseElem c, const FieldElem& a) const noexcept;
  /// a^(q^i).
  FieldElem frobenius(const FieldElem& a, int i = 1) const;

  /// Rank over F_q of the m x N matrix whose columns are the coordinate vectors.
  int rank_over_base(std::span<const FieldElem> v) const;
  /// Same value; for callers reasoning about spans of evaluation points.
  int span_dim_over_base(std::span<const FieldElem> v) const { return rank_over_base(v); }

  /// Packs coordinates little-endian into bytes_per_element() bytes, s bits each.
  void write(const FieldElem& a, std::span<std::uint8_t> out) const;
  FieldElem read(std::span<const std::uint8_t> in) const;

  friend bool operator==(const ExtField& a, const ExtField& b) noexcept {
    return a.base_ == b.base_ && a.modulus_ == b.modulus_;
  }

 private:
  void check(const FieldElem& a) const;
  FieldElem frobenius_once(const FieldElem& a) const noexcept;
  void init();

  BaseField base_;
  int degree_;
  std::vector<BaseElem> modulus_;
  // Nonzero (index, coefficient) pairs of the modulus below x^m.
  std::vector<std::pair<int, BaseElem>> tail_;
  // frobenius_cols_[j] = (x^j)^q.
  std::vector<FieldElem> frobenius_cols_;
};

/// Incrementally maintained F_q-span of extension elements viewed as m-vectors.
class BaseSpan {
 public:
  explicit BaseSpan(const ExtField& field) : field_(&field) {}

  /// Adds v; returns true iff the span grew.
  bool insert(const FieldElem& v);
  bool contains(const FieldElem& v) const;
  int dim() const noexcept { return static_cast<int>(rows_.size()); }

 private:
  FieldElem reduce(FieldElem v) const;

  const ExtField* field_;
  std::vector<FieldElem> rows_;
  std::vector<int> pivots_;
};

FieldElem random_element(const ExtField& field, std::mt19937_64& rng);

/// Monic irreducibility over `base` (Rabin's test); poly lowest coefficient first.
bool is_irreducible(const BaseField& base, std::span<const BaseElem> poly);
std::vector<BaseElem> smallest_irreducible(const BaseField& base, int degree);
std::uint32_t smallest_binary_irreducible(int degree);

}  // namespace lrc::gf
