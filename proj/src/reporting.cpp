#include "gapidx/reporting.hpp"

#include <algorithm>

namespace gapidx {

std::vector<MatchPair> matching_pairs(std::span<const DyadicSubset> a_blocks,
                                      std::span<const DyadicSubset> b_blocks, Element s) {
  std::vector<MatchPair> out;
  for (std::size_t x = 0; x < a_blocks.size(); ++x) {
    const Element lo = a_blocks[x].min + s;
    const Element hi = a_blocks[x].max + s;
    // First block whose maximum reaches lo; blocks are disjoint and sorted.
    auto it = std::partition_point(b_blocks.begin(), b_blocks.end(),
                                   [lo](const DyadicSubset& b) { return b.max < lo; });
    for (; it != b_blocks.end() && it->min <= hi; ++it) {
      out.push_back({x, static_cast<std::size_t>(it - b_blocks.begin())});
    }
  }
  return out;
}

std::uint64_t report_call_budget(std::uint64_t occ, std::size_t total_size) {
  return (occ + 1) * 12 * (ceil_log2(std::max<std::size_t>(total_size, 1)) + 1);
}

AugmentedInstance::AugmentedInstance(const SetCollection& base, const BackendConfig& config)
    : base_size_(base.size()), base_elements_(base.total_size()) {
  std::vector<std::vector<Element>> all;
  all.reserve(base.size() * 3);
  for (const auto& s : base) all.emplace_back(s.elements().begin(), s.elements().end());
  level_base_.resize(base.size());
  for (const auto& s : base) {
    const std::size_t m = s.size();
    for (unsigned j = 0; j <= floor_log2(m); ++j) {
      level_base_[s.id()].push_back(static_cast<SetId>(all.size()));
      const std::size_t width = std::size_t{1} << j;
      for (std::size_t block = 0; block < m / width; ++block) {
        auto slice = s.elements().subspan(block * width, width);
        all.emplace_back(slice.begin(), slice.end());
      }
    }
  }
  auto sets = std::make_shared<const SetCollection>(std::move(all), base.universe());
  backend_ = build_backend(std::move(sets), config);
}

std::size_t AugmentedInstance::element_bound() const {
  std::size_t bound = base_elements_;
  for (SetId p = 0; p < base_size_; ++p) {
    const std::size_t m = sets()[p].size();
    bound += m * (floor_log2(m) + 1);
  }
  return bound;
}

SetId AugmentedInstance::block_id(const DyadicSubset& d) const {
  return level_base_.at(d.parent).at(d.level) + static_cast<SetId>(d.block);
}

DyadicSubset AugmentedInstance::whole(SetId base_set) const {
  const IntSet& s = sets().at(base_set);
  return {base_set, 0, 0, 1, s.size(), s.min(), s.max()};
}

SetId AugmentedInstance::node_id(const DyadicSubset& d) const {
  if (d.first_rank == 1 && d.last_rank == sets()[d.parent].size()) return d.parent;
  return block_id(d);
}

std::optional<ShiftCertificate> AugmentedInstance::exists(const ShiftQuery& q,
                                                          QueryStats* stats) const {
  if (q.i >= base_size_ || q.j >= base_size_) throw std::out_of_range("set id out of range");
  return backend_->exists(q, stats);
}

std::vector<ShiftCertificate> AugmentedInstance::report(const ShiftQuery& q, ReportStats* stats,
                                                        const SplitObserver& observer) const {
  if (q.i >= base_size_ || q.j >= base_size_) throw std::out_of_range("set id out of range");
  std::vector<ShiftCertificate> out;
  std::vector<std::pair<DyadicSubset, DyadicSubset>> work{{whole(q.i), whole(q.j)}};
  QueryStats local;
  std::uint64_t nodes = 0;
  std::uint64_t matches = 0;
  while (!work.empty()) {
    auto [a_block, b_block] = work.back();
    work.pop_back();
    ++nodes;
    auto cert = backend_->exists({node_id(a_block), node_id(b_block), q.s}, &local);
    if (!cert) continue;
    out.push_back(*cert);

    const IntSet& pa = sets()[a_block.parent];
    const IntSet& pb = sets()[b_block.parent];
    auto a_below = cover_value_range(pa, a_block.min, cert->a - 1);
    auto a_above = cover_value_range(pa, cert->a + 1, a_block.max);
    auto b_below = cover_value_range(pb, b_block.min, cert->b - 1);
    auto b_above = cover_value_range(pb, cert->b + 1, b_block.max);

    for (const auto& m : matching_pairs(a_below, b_below, q.s)) {
      work.emplace_back(a_below[m.a], b_below[m.b]);
      ++matches;
    }
    for (const auto& m : matching_pairs(a_above, b_above, q.s)) {
      work.emplace_back(a_above[m.a], b_above[m.b]);
      ++matches;
    }
    if (observer) {
      observer(SplitEvent{a_block, b_block, *cert, std::move(a_below), std::move(a_above),
                          std::move(b_below), std::move(b_above)});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (stats) {
    stats->base += local;
    stats->nodes += nodes;
    stats->matching_pairs += matches;
  }
  return out;
}

ThreeSumReporter::ThreeSumReporter(std::span<const Element> values, const BackendConfig& config)
    : reduction_(values), index_(reduction_.collection(), config) {}

std::vector<std::pair<Element, Element>> ThreeSumReporter::report(Element c,
                                                                  ReportStats* stats) const {
  std::vector<std::pair<Element, Element>> out;
  for (const auto& cert : index_.report(reduction_.map_query(c), stats)) {
    auto [x, y] = reduction_.decode(cert);
    out.emplace_back(std::min(x, y), std::max(x, y));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::pair<Element, Element>> ThreeSumReporter::find(Element c,
                                                                  QueryStats* stats) const {
  auto cert = index_.exists(reduction_.map_query(c), stats);
  if (!cert) return std::nullopt;
  return reduction_.decode(*cert);
}

}  // namespace gapidx
