#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mrk {

// Slack on the unit-mass bound; absorbs accumulation over ~1e5 pixel weights.
inline constexpr double kMassTolerance = 1e-9;

// Element of the finite component space, e.g. one of 512 quantized colors.
struct ComponentIndex {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(ComponentIndex, ComponentIndex) = default;
};

struct MassEntry {
  ComponentIndex index;
  double mass = 0.0;

  friend constexpr bool operator==(const MassEntry&, const MassEntry&) = default;
};

/// Sparse nonnegative histogram over [0, spaceSize) with total mass <= 1.
///
/// Stored in canonical form: indices strictly increasing, all masses strictly
/// positive. Instances are immutable once built.
class SubMeasure {
 public:
  SubMeasure() = default;
  explicit SubMeasure(std::uint32_t spaceSize) : spaceSize_(spaceSize) {}

  /// Canonicalizes arbitrary (index, mass) pairs: duplicates are merged in
  /// input order, zeros dropped, result sorted by index.
  /// Throws IndexOutOfRange, NegativeMass, MassExceedsOne, InvalidArgument
  /// (non-finite mass).
  static SubMeasure from_entries(std::uint32_t spaceSize,
                                 std::span<const MassEntry> entries);
  static SubMeasure from_entries(std::uint32_t spaceSize,
                                 std::initializer_list<MassEntry> entries) {
    return from_entries(spaceSize,
                        std::span<const MassEntry>(entries.begin(), entries.size()));
  }

  std::uint32_t space_size() const noexcept { return spaceSize_; }
  std::span<const MassEntry> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Total mass, summed once in index order at construction.
  double mass() const noexcept { return mass_; }

  /// Mass at `index`, 0 when absent. O(log n).
  double at(ComponentIndex index) const noexcept;

  friend bool operator==(const SubMeasure& a, const SubMeasure& b) {
    return a.spaceSize_ == b.spaceSize_ && a.entries_ == b.entries_;
  }

 private:
  friend SubMeasure add(const SubMeasure& a, const SubMeasure& b);

  // Takes already canonical entries; checks only the mass bound.
  SubMeasure(std::uint32_t spaceSize, std::vector<MassEntry> canonical);

  std::uint32_t spaceSize_ = 0;
  std::vector<MassEntry> entries_;
  double mass_ = 0.0;
};

/// Pointwise sum. Throws SpaceMismatch, MassExceedsOne.
SubMeasure add(const SubMeasure& a, const SubMeasure& b);

inline double mass(const SubMeasure& m) noexcept { return m.mass(); }

/// Shannon entropy -sum m_i ln m_i with 0 ln 0 = 0. Not renormalized.
double entropy(const SubMeasure& m) noexcept;

}  // namespace mrk
