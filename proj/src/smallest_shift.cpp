#include "gapidx/smallest_shift.hpp"

#include <algorithm>
#include <stdexcept>

namespace gapidx {

SmallestShiftIndex::SmallestShiftIndex(std::shared_ptr<const SetCollection> sets)
    : sets_(std::move(sets)) {
  threshold_ = ceil_sqrt(sets_->total_size());
  large_slot_.assign(sets_->size(), kSmall);
  for (const auto& s : *sets_) {
    if (s.size() > threshold_) {
      large_slot_[s.id()] = large_.size();
      large_.push_back(s.id());
    }
  }
  const std::size_t l = large_.size();
  table_.assign(l * l, kAbsent);
  for (std::size_t x = 0; x < l; ++x) {
    const auto a = (*sets_)[large_[x]].elements();
    for (std::size_t y = 0; y < l; ++y) {
      const auto b = (*sets_)[large_[y]].elements();
      // For each b, the largest a <= b; both pointers only move forward.
      Element best = kAbsent;
      std::size_t p = 0;
      for (std::size_t q = 0; q < b.size(); ++q) {
        while (p < a.size() && a[p] <= b[q]) {
          ++comparisons_;
          ++p;
        }
        ++comparisons_;
        if (p > 0 && (best == kAbsent || b[q] - a[p - 1] < best)) best = b[q] - a[p - 1];
      }
      table_[x * l + y] = best;
    }
  }
}

std::size_t SmallestShiftIndex::memory_bytes() const {
  return table_.size() * sizeof(Element) + large_slot_.size() * sizeof(std::size_t) +
         large_.size() * sizeof(SetId);
}

std::optional<Element> SmallestShiftIndex::table_entry(std::size_t x, std::size_t y) const {
  const Element v = table_.at(x * large_.size() + y);
  if (v == kAbsent) return std::nullopt;
  return v;
}

std::optional<Element> SmallestShiftIndex::query(SetId i, SetId j, ShiftQueryStats* stats) const {
  const IntSet& si = sets_->at(i);
  const IntSet& sj = sets_->at(j);
  if (is_large(i) && is_large(j)) {
    if (stats) ++stats->table_lookups;
    return table_entry(large_slot_[i], large_slot_[j]);
  }
  const auto a = si.elements();
  const auto b = sj.elements();
  Element best = kAbsent;
  std::uint64_t probes = 0;
  if (a.size() <= b.size()) {
    for (Element x : a) {
      ++probes;
      auto it = std::lower_bound(b.begin(), b.end(), x);
      if (it == b.end()) break;
      if (best == kAbsent || *it - x < best) best = *it - x;
    }
  } else {
    for (Element y : b) {
      ++probes;
      auto it = std::upper_bound(a.begin(), a.end(), y);
      if (it == a.begin()) continue;
      if (best == kAbsent || y - *(it - 1) < best) best = y - *(it - 1);
    }
  }
  if (stats) stats->probes += probes;
  if (best == kAbsent) return std::nullopt;
  return best;
}

std::optional<Element> brute_force_smallest_shift(const SetCollection& sets, SetId i, SetId j) {
  std::optional<Element> best;
  for (Element a : sets.at(i).elements()) {
    for (Element b : sets.at(j).elements()) {
      if (b >= a && (!best || b - a < *best)) best = b - a;
    }
  }
  return best;
}

}  // namespace gapidx
