#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gapidx/reporting.hpp"
#include "gapidx/set_core.hpp"
#include "gapidx/ssi.hpp"

namespace gapidx {

// A 2^level-approximate query centered at `center`. It covers
// [center - 2^(level-1), center + 2^(level-1)] and may answer YES for any
// gap in the open interval (center - 2^level, center + 2^level).
struct ApproxQuery {
  unsigned level = 1;
  Element center = 0;

  Element half() const { return Element{1} << (level - 1); }
  Element covered_lo() const { return center - half(); }
  Element covered_hi() const { return center + half(); }
  // Closed bounds of the uncertain interval.
  Element uncertain_lo() const { return center - 2 * half() + 1; }
  Element uncertain_hi() const { return center + 2 * half() - 1; }

  friend bool operator==(const ApproxQuery&, const ApproxQuery&) = default;
};

// Exact shifts plus approximate queries that together cover [alpha, beta]
// while keeping every uncertain gap inside it.
struct CoverPlan {
  Element alpha = 0;
  Element beta = 0;
  std::vector<Element> point_shifts;  // distinct, in planning order
  std::vector<ApproxQuery> approx;    // distinct, in planning order
  std::size_t forward_approx = 0;
  std::size_t backward_approx = 0;
  std::size_t forward_phases = 0;
  std::size_t backward_phases = 0;

  // Existence queries issued against base structures: one per point shift,
  // three per approximate query.
  std::size_t base_query_count() const { return point_shifts.size() + 3 * approx.size(); }
  std::size_t size() const { return point_shifts.size() + approx.size(); }
};

// Throws std::invalid_argument when alpha > beta.
CoverPlan plan_cover(Element alpha, Element beta);

void write_plan(std::ostream& out, const CoverPlan& plan);

// Quotient sets S'_i = { floor(a / 2^(level-1)) + 1 } with the original
// values grouped per quotient, and a reporting index over the quotients.
// The +1 keeps quotients inside the universe and leaves differences alone.
class LevelIndex {
 public:
  LevelIndex(std::shared_ptr<const SetCollection> sets, unsigned level,
             const BackendConfig& config);

  unsigned level() const { return level_; }
  Element quotient(Element a) const { return (a >> (level_ - 1)) + 1; }
  const AugmentedInstance& index() const { return index_; }
  const SetCollection& quotients() const { return quotients_; }

  // Original values of set `set` whose quotient is q.
  std::span<const Element> values(SetId set, Element q) const;

 private:
  static SetCollection build_quotients(const SetCollection& sets, unsigned level,
                                       std::vector<std::vector<std::size_t>>& runs);

  unsigned level_;
  std::shared_ptr<const SetCollection> base_;
  std::vector<std::vector<std::size_t>> runs_;
  SetCollection quotients_;
  AugmentedInstance index_;
};

struct GappedStats {
  ReportStats report;
  std::uint64_t plan_queries = 0;
  std::uint64_t raw_pairs = 0;
  // Largest number of times a single pair was produced before dedup.
  std::uint64_t max_multiplicity = 0;
  std::uint64_t fallbacks = 0;
};

// Gapped Set Intersection: exact reporting index at level 0 plus one
// approximate level for every l in [1, ceil(log2 u)].
class GappedIndex {
 public:
  GappedIndex(const SetCollection& sets, const BackendConfig& config);

  const SetCollection& sets() const { return *sets_; }
  std::size_t level_count() const { return levels_.size(); }
  const LevelIndex& level(unsigned l) const { return *levels_.at(l - 1); }
  const AugmentedInstance& exact() const { return exact_; }

  std::size_t total_elements() const;
  std::size_t element_bound() const;

  // Throws std::invalid_argument unless center = kappa 2^level, kappa >= 1.
  bool approx_exists(SetId i, SetId j, const ApproxQuery& q, QueryStats* stats = nullptr) const;
  std::vector<ShiftCertificate> approx_report(SetId i, SetId j, const ApproxQuery& q,
                                              ReportStats* stats = nullptr) const;

  // Some (a, b) with b - a in [alpha, beta]; 0 <= alpha required.
  std::optional<ShiftCertificate> exists(SetId i, SetId j, Element alpha, Element beta,
                                         GappedStats* stats = nullptr) const;
  // Every (a, b) with b - a in [alpha, beta], sorted and deduplicated.
  std::vector<ShiftCertificate> report(SetId i, SetId j, Element alpha, Element beta,
                                       GappedStats* stats = nullptr) const;

  // The plan executed for a query, after clamping beta to u - 1.
  std::optional<CoverPlan> plan_for(Element alpha, Element beta) const;

 private:
  void check_query(SetId i, SetId j, Element alpha, Element beta) const;
  std::optional<ShiftCertificate> approx_witness(SetId i, SetId j, const ApproxQuery& q,
                                                 QueryStats* stats) const;

  std::shared_ptr<const SetCollection> sets_;
  AugmentedInstance exact_;
  std::vector<std::unique_ptr<LevelIndex>> levels_;
};

}  // namespace gapidx
