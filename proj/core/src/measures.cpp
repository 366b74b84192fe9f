#include "mrk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrk/error.hpp"

namespace mrk {
namespace {

double sum_masses(std::span<const MassEntry> entries) {
  double total = 0.0;
  for (const auto& e : entries) total += e.mass;
  return total;
}

void check_mass_bound(double total) {
  if (total > 1.0 + kMassTolerance) {
    throw Error(ErrorCode::MassExceedsOne,
                "total mass " + std::to_string(total) + " exceeds 1");
  }
}

}  // namespace

SubMeasure::SubMeasure(std::uint32_t spaceSize, std::vector<MassEntry> canonical)
    : spaceSize_(spaceSize), entries_(std::move(canonical)) {
  mass_ = sum_masses(entries_);
  check_mass_bound(mass_);
}

SubMeasure SubMeasure::from_entries(std::uint32_t spaceSize,
                                    std::span<const MassEntry> entries) {
  for (const auto& e : entries) {
    if (!std::isfinite(e.mass)) {
      throw Error(ErrorCode::InvalidArgument, "non-finite mass");
    }
    if (e.mass < 0.0) {
      throw Error(ErrorCode::NegativeMass,
                  "negative mass at index " + std::to_string(e.index.value));
    }
    if (e.index.value >= spaceSize) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(e.index.value) +
                      " out of range for space size " + std::to_string(spaceSize));
    }
  }

  std::vector<MassEntry> sorted(entries.begin(), entries.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MassEntry& a, const MassEntry& b) { return a.index < b.index; });

  std::vector<MassEntry> merged;
  merged.reserve(sorted.size());
  for (const auto& e : sorted) {
    if (!merged.empty() && merged.back().index == e.index) {
      merged.back().mass += e.mass;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const MassEntry& e) { return e.mass == 0.0; });
  return SubMeasure(spaceSize, std::move(merged));
}

double SubMeasure::at(ComponentIndex index) const noexcept {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const MassEntry& e, ComponentIndex i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->mass : 0.0;
}

SubMeasure add(const SubMeasure& a, const SubMeasure& b) {
  if (a.space_size() != b.space_size()) {
    throw Error(ErrorCode::SpaceMismatch,
                "space sizes differ: " + std::to_string(a.space_size()) + " vs " +
                    std::to_string(b.space_size()));
  }
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::vector<MassEntry> out;
  out.reserve(ea.size() + eb.size());

  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index < eb[j].index) {
      out.push_back(ea[i++]);
    } else if (eb[j].index < ea[i].index) {
      out.push_back(eb[j++]);
    } else {
      out.push_back({ea[i].index, ea[i].mass + eb[j].mass});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), ea.begin() + static_cast<std::ptrdiff_t>(i), ea.end());
  out.insert(out.end(), eb.begin() + static_cast<std::ptrdiff_t>(j), eb.end());
  return SubMeasure(a.space_size(), std::move(out));
}

double entropy(const SubMeasure& m) noexcept {
  double h = 0.0;
  for (const auto& e : m.entries()) h -= e.mass * std::log(e.mass);
  return h;
}

}  // namespace mrk
