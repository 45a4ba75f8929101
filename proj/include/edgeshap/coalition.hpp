#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>

namespace edgeshap {

/// Largest player count representable in a coalition mask.
inline constexpr std::size_t kMaxPlayers = 63;

/// A set of players, stored as a bitmask over canonical node indices.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static constexpr Coalition full(std::size_t n) {
    return Coalition(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr Coalition singleton(std::size_t i) { return Coalition(std::uint64_t{1} << i); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr bool is_subset_of(Coalition other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(Coalition other) const { return (bits_ & other.bits_) != 0; }

  constexpr Coalition with(std::size_t i) const { return Coalition(bits_ | (std::uint64_t{1} << i)); }
  constexpr Coalition without(std::size_t i) const { return Coalition(bits_ & ~(std::uint64_t{1} << i)); }

  /// Calls f(i) for every member, in ascending index order.
  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
      f(static_cast<std::size_t>(std::countr_zero(rest)));
    }
  }

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return Coalition(a.bits_ | b.bits_); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return Coalition(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr Coalition operator-(Coalition a, Coalition b) { return Coalition(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace edgeshap
