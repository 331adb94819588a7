#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapidx/set_core.hpp"
#include "gapidx/ssi.hpp"

namespace gapidx {

// Index pair into the two decompositions handed to matching_pairs.
struct MatchPair {
  std::size_t a = 0;
  std::size_t b = 0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

// Pairs (A', B') whose shifted range [a_min + s, a_max + s] meets
// [b_min, b_max]. `b_blocks` must be rank-ordered blocks of one set (so
// their value ranges are disjoint and increasing). At most
// 2 |a_blocks| + |b_blocks| pairs.
std::vector<MatchPair> matching_pairs(std::span<const DyadicSubset> a_blocks,
                                      std::span<const DyadicSubset> b_blocks, Element s);

struct ReportStats {
  QueryStats base;
  std::uint64_t nodes = 0;
  std::uint64_t matching_pairs = 0;
};

// One recursion step: the certificate found for (A, B) and the covers of
// the four sides it splits into.
struct SplitEvent {
  DyadicSubset a_block;
  DyadicSubset b_block;
  ShiftCertificate certificate;
  std::vector<DyadicSubset> a_below;
  std::vector<DyadicSubset> a_above;
  std::vector<DyadicSubset> b_below;
  std::vector<DyadicSubset> b_above;
};

using SplitObserver = std::function<void(const SplitEvent&)>;

// A collection plus every dyadic subset of every set, all preprocessed into
// one existence backend. Base sets keep ids 0..k-1; the subsets of set p at
// level j get consecutive ids starting at block_base(p, j).
class AugmentedInstance {
 public:
  AugmentedInstance(const SetCollection& base, const BackendConfig& config);

  std::size_t base_size() const { return base_size_; }
  const SetCollection& sets() const { return backend_->sets(); }
  const SsiBackend& backend() const { return *backend_; }

  // Backend set id of a dyadic subset of base set `parent`.
  SetId block_id(const DyadicSubset& d) const;
  // The whole base set as a (rank-range) block.
  DyadicSubset whole(SetId base_set) const;

  std::size_t base_elements() const { return base_elements_; }
  std::size_t dyadic_elements() const { return sets().total_size() - base_elements_; }
  std::size_t total_elements() const { return sets().total_size(); }
  // N + sum_i m_i (floor(log2 m_i) + 1); total_elements() never exceeds it.
  std::size_t element_bound() const;

  std::optional<ShiftCertificate> exists(const ShiftQuery& q, QueryStats* stats = nullptr) const;

  // All (a, b) in S_i x S_j with a + s = b, sorted by a, each once.
  std::vector<ShiftCertificate> report(const ShiftQuery& q, ReportStats* stats = nullptr,
                                       const SplitObserver& observer = {}) const;

 private:
  SetId node_id(const DyadicSubset& d) const;

  std::size_t base_size_ = 0;
  std::size_t base_elements_ = 0;
  // level_base_[p][j] = id of block 0 at level j of base set p.
  std::vector<std::vector<SetId>> level_base_;
  std::unique_ptr<SsiBackend> backend_;
};

// report_shift budget on backend existence calls.
std::uint64_t report_call_budget(std::uint64_t occ, std::size_t total_size);

// 3SUM Indexing with Reporting via the one-set reduction and an augmented
// reporting index.
class ThreeSumReporter {
 public:
  ThreeSumReporter(std::span<const Element> values, const BackendConfig& config);

  // Unordered pairs {x, y} (x <= y) from the input with x + y = c, sorted.
  std::vector<std::pair<Element, Element>> report(Element c, ReportStats* stats = nullptr) const;
  std::optional<std::pair<Element, Element>> find(Element c, QueryStats* stats = nullptr) const;

  const AugmentedInstance& index() const { return index_; }

 private:
  ThreeSumAsSsi reduction_;
  AugmentedInstance index_;
};

}  // namespace gapidx
