#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gapidx/gapped.hpp"
#include "gapidx/set_core.hpp"

namespace gapidx {

// Suffix array with 1-based text positions. lcp[0] = 0 and lcp[r] is the
// longest common prefix of the suffixes at ranks r - 1 and r (0-based
// ranks). A virtual sentinel smaller than every byte ends the text.
class SuffixArray {
 public:
  SuffixArray() = default;
  // Prefix doubling with radix sorting, then a Kasai pass for the LCP.
  explicit SuffixArray(std::string_view text);
  // Adopts a stored array; throws FormatError if it is not a permutation.
  SuffixArray(std::string_view text, std::vector<std::uint32_t> positions);

  std::size_t size() const { return sa_.size(); }
  std::span<const std::uint32_t> positions() const { return sa_; }
  std::span<const std::uint32_t> lcp() const { return lcp_; }
  std::uint32_t operator[](std::size_t rank) const { return sa_[rank]; }

 private:
  void compute_lcp(std::string_view text);

  std::vector<std::uint32_t> sa_;
  std::vector<std::uint32_t> lcp_;
};

// Half-open range [begin, end) of 0-based suffix-array ranks.
struct PatternInterval {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return begin == end; }
  std::size_t size() const { return end - begin; }
};

// Binary search with the lcp(lo), lcp(hi) skip; O(|P| log n) comparisons.
// Empty patterns and patterns longer than the text give an empty interval.
PatternInterval pattern_interval(std::string_view text, const SuffixArray& sa,
                                 std::string_view pattern);

struct StringQueryStats {
  GappedStats gapped;
  std::uint64_t set_pairs = 0;
};

// Sorted text positions of every suffix array slice over a dyadic interval
// of [1, n], preprocessed into a GappedIndex.
class GappedStringIndex {
 public:
  GappedStringIndex(std::string text, const BackendConfig& config);
  GappedStringIndex(std::string text, SuffixArray sa, const BackendConfig& config);

  const std::string& text() const { return text_; }
  const SuffixArray& suffix_array() const { return sa_; }
  const SetCollection& sets() const { return index_->sets(); }
  const GappedIndex& gapped() const { return *index_; }
  const std::vector<DyadicInterval>& intervals() const { return intervals_; }

  // Set holding SA[iv.lo .. iv.hi] (1-based ranks).
  SetId set_for(const DyadicInterval& iv) const;

  std::size_t set_elements() const { return sets().total_size(); }
  // n (floor(log2 n) + 1).
  std::size_t set_element_bound() const;

  // Dyadic cover of the suffix-array ranks of a pattern's occurrences.
  std::vector<SetId> cover(std::string_view pattern) const;

  // Pairs (i, j), 1-based, with P1 at i, P2 at j and j - i in [alpha, beta].
  std::vector<ElementPair> report(std::string_view p1, std::string_view p2, Element alpha,
                                  Element beta, StringQueryStats* stats = nullptr) const;
  std::optional<ElementPair> exists(std::string_view p1, std::string_view p2, Element alpha,
                                    Element beta, StringQueryStats* stats = nullptr) const;

 private:
  void build(const BackendConfig& config);

  std::string text_;
  SuffixArray sa_;
  std::vector<DyadicInterval> intervals_;
  // level_base_[j] = set id of block 0 at level j.
  std::vector<SetId> level_base_;
  std::unique_ptr<GappedIndex> index_;
};

// Sorted 1-based occurrences of pattern in text (Knuth-Morris-Pratt).
std::vector<Element> kmp_occurrences(std::string_view text, std::string_view pattern);

struct ScanStats {
  std::uint64_t text_steps = 0;
  std::uint64_t positions_scanned = 0;
};

// Linear-space baseline: two KMP passes and a two-finger merge.
std::vector<ElementPair> baseline_linear_scan(std::string_view text, std::string_view p1,
                                              std::string_view p2, Element alpha, Element beta,
                                              ScanStats* stats = nullptr);

// Near-quadratic baseline: for every pair of dyadic suffix-array slices
// (A, B) and every distance d >= 0, the pairs (a, b) in A x B with b - a = d.
class QuadraticBaseline {
 public:
  // Throws GuardError when the pair count would exceed budget_bytes.
  QuadraticBaseline(std::string text, std::uint64_t budget_bytes = std::uint64_t{1} << 30);

  std::vector<ElementPair> report(std::string_view p1, std::string_view p2, Element alpha,
                                  Element beta) const;

  std::uint64_t stored_pairs() const { return stored_pairs_; }
  // Every stored (a, b) at distance d, across all slice pairs.
  std::vector<ElementPair> pairs_at_distance(Element d) const;

 private:
  struct SlicePairs {
    // (d << 32) | a, sorted.
    std::vector<std::uint64_t> entries;
  };

  std::vector<SetId> cover(std::string_view pattern) const;

  std::string text_;
  SuffixArray sa_;
  std::vector<DyadicInterval> intervals_;
  std::vector<SetId> level_base_;
  std::vector<std::vector<Element>> slices_;
  std::vector<SlicePairs> pairs_;  // indexed by a * slices + b
  std::uint64_t stored_pairs_ = 0;
};

}  // namespace gapidx
