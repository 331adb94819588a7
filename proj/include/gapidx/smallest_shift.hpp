#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gapidx/set_core.hpp"

namespace gapidx {

// Build comparisons never exceed this many times N ceil(sqrt(N)).
inline constexpr std::uint64_t kShiftBuildFactor = 2;

struct ShiftQueryStats {
  // Successor or predecessor searches.
  std::uint64_t probes = 0;
  std::uint64_t table_lookups = 0;
};

// Smallest nonnegative shift between two sets. Sets with more than
// ceil(sqrt(N)) elements are large; every pair of large sets is tabulated.
class SmallestShiftIndex {
 public:
  explicit SmallestShiftIndex(std::shared_ptr<const SetCollection> sets);

  const SetCollection& sets() const { return *sets_; }
  std::size_t threshold() const { return threshold_; }
  bool is_large(SetId id) const { return large_slot_.at(id) != kSmall; }
  const std::vector<SetId>& large_sets() const { return large_; }
  std::uint64_t build_comparisons() const { return comparisons_; }
  std::size_t memory_bytes() const;

  // Entry for large sets (x, y) given as positions in large_sets().
  std::optional<Element> table_entry(std::size_t x, std::size_t y) const;

  // min { b - a >= 0 : a in S_i, b in S_j }, absent when max(S_j) < min(S_i).
  std::optional<Element> query(SetId i, SetId j, ShiftQueryStats* stats = nullptr) const;

 private:
  static constexpr std::size_t kSmall = static_cast<std::size_t>(-1);
  static constexpr Element kAbsent = -1;

  std::shared_ptr<const SetCollection> sets_;
  std::size_t threshold_ = 0;
  std::vector<SetId> large_;
  std::vector<std::size_t> large_slot_;
  std::vector<Element> table_;  // l x l, row-major, kAbsent for none
  std::uint64_t comparisons_ = 0;
};

// Brute-force minimum over all pairs.
std::optional<Element> brute_force_smallest_shift(const SetCollection& sets, SetId i, SetId j);

}  // namespace gapidx
