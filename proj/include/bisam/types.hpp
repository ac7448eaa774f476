#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace bisam {

using ItemId = std::uint32_t;
using Count = std::uint64_t;

/// An unordered item pair stored in canonical order: `first` has the smaller
/// support, ties broken by the smaller id.
struct PairKey {
  ItemId first = 0;
  ItemId second = 0;

  [[nodiscard]] constexpr std::uint64_t packed() const noexcept {
    return (static_cast<std::uint64_t>(first) << 32) | second;
  }
  [[nodiscard]] static constexpr PairKey unpack(std::uint64_t key) noexcept {
    return {static_cast<ItemId>(key >> 32), static_cast<ItemId>(key & 0xFFFFFFFFu)};
  }

  friend constexpr auto operator<=>(const PairKey&, const PairKey&) = default;
};

/// Order-insensitive comparison, used where the canonical orientation of two
/// pairs may have been computed under different support tables.
[[nodiscard]] constexpr bool same_items(const PairKey& a, const PairKey& b) noexcept {
  return (a.first == b.first && a.second == b.second) ||
         (a.first == b.second && a.second == b.first);
}

}  // namespace bisam

template <>
struct std::hash<bisam::PairKey> {
  std::size_t operator()(const bisam::PairKey& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.packed());
  }
};
