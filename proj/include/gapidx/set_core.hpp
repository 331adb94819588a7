#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gapidx/common.hpp"

namespace gapidx {

// Largest universe accepted from user input. Keeps every quantity derived
// by the reductions (offsets up to O(k^2 u)) inside signed 64-bit range.
inline constexpr Element kMaxInputUniverse = Element{1} << 40;
// Largest universe for collections built internally by reductions.
inline constexpr Element kMaxInternalUniverse = Element{1} << 61;

// A strictly increasing sequence of integers.
class IntSet {
 public:
  IntSet() = default;
  IntSet(SetId id, std::vector<Element> sorted_elements);

  SetId id() const { return id_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  Element min() const { return elements_.front(); }
  Element max() const { return elements_.back(); }
  std::span<const Element> elements() const { return elements_; }

  // Element of 1-based rank r.
  Element at_rank(std::size_t r) const { return elements_[r - 1]; }

  // Number of elements strictly smaller than v.
  std::size_t count_below(Element v) const;
  // Number of elements smaller than or equal to v.
  std::size_t count_at_most(Element v) const;
  bool contains(Element v) const;

 private:
  SetId id_ = 0;
  std::vector<Element> elements_;
};

// k sets over the universe {1..u}.
class SetCollection {
 public:
  SetCollection() = default;

  // Takes ownership of sets that are already sorted and deduplicated.
  // Throws FormatError when a set is empty, unsorted or leaves [1, u].
  SetCollection(std::vector<std::vector<Element>> sorted_sets, Element universe,
                Element max_universe = kMaxInternalUniverse);

  std::size_t size() const { return sets_.size(); }
  Element universe() const { return universe_; }
  std::size_t total_size() const { return total_size_; }

  const IntSet& operator[](SetId id) const { return sets_[id]; }
  const IntSet& at(SetId id) const { return sets_.at(id); }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  friend bool operator==(const SetCollection& a, const SetCollection& b);

 private:
  std::vector<IntSet> sets_;
  Element universe_ = 1;
  std::size_t total_size_ = 0;
};

// Sorts and deduplicates raw lists. Rejects empty sets, values outside
// [1, u] (naming the 1-based set index and value) and u above
// kMaxInputUniverse.
SetCollection ingest_collection(const std::vector<std::vector<Element>>& raw, Element universe);

// Text format: first line `u k`, then one line per set with space
// separated integers. Trailing tokens are rejected.
SetCollection parse_collection(std::istream& in);
void write_collection(std::ostream& out, const SetCollection& c);

// Elements of one set whose 1-based ranks form [first_rank, last_rank] with
// first_rank = block * 2^level + 1 and last_rank = (block + 1) * 2^level.
struct DyadicSubset {
  SetId parent = 0;
  unsigned level = 0;
  std::size_t block = 0;
  std::size_t first_rank = 0;
  std::size_t last_rank = 0;
  Element min = 0;
  Element max = 0;

  std::size_t size() const { return last_rank - first_rank + 1; }
  std::span<const Element> view(const IntSet& parent_set) const {
    return parent_set.elements().subspan(first_rank - 1, size());
  }

  friend bool operator==(const DyadicSubset&, const DyadicSubset&) = default;
};

// Positions [lo, hi] with hi - lo + 1 = 2^level and lo = block * 2^level + 1.
struct DyadicInterval {
  std::size_t lo = 0;
  std::size_t hi = 0;
  unsigned level = 0;
  std::size_t block = 0;

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

// All dyadic intervals of [1, n], ordered by level then block.
std::vector<DyadicInterval> dyadic_intervals(std::size_t n);

// Greedy left-to-right cover of [lo, hi] by aligned dyadic intervals: at
// each position take the largest aligned block that still fits.
std::vector<DyadicInterval> cover_positions(std::size_t lo, std::size_t hi);

// Total element count over all dyadic subsets of an m-element set.
std::size_t dyadic_element_count(std::size_t m);
// Number of dyadic subsets of an m-element set.
std::size_t dyadic_subset_count(std::size_t m);

std::vector<DyadicSubset> dyadic_subsets(const IntSet& s);

// Throws std::invalid_argument unless 1 <= lo <= hi <= |s|.
std::vector<DyadicSubset> cover_rank_range(const IntSet& s, std::size_t lo, std::size_t hi);

// Cover of {x in s : a <= x <= b}; empty when nothing lies in range.
std::vector<DyadicSubset> cover_value_range(const IntSet& s, Element a, Element b);

}  // namespace gapidx
