#include "gapidx/text_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gapidx {

namespace {

// Stable counting sort of `order` by key(i) in [0, buckets).
template <typename Key>
void counting_sort(std::vector<std::uint32_t>& order, std::size_t buckets, Key key) {
  std::vector<std::uint32_t> count(buckets + 1, 0);
  for (std::uint32_t i : order) ++count[key(i) + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::uint32_t> out(order.size());
  for (std::uint32_t i : order) out[count[key(i)]++] = i;
  order.swap(out);
}

}  // namespace

SuffixArray::SuffixArray(std::string_view text) {
  const std::size_t n = text.size();
  if (n >= (std::size_t{1} << 31)) throw GuardError("text too long for 32-bit suffix array");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  // Ranks start at 1; 0 stands for the sentinel past the end.
  std::vector<std::uint32_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = static_cast<unsigned char>(text[i]) + 1U;
  std::size_t buckets = std::max<std::size_t>(n, 256) + 1;
  std::vector<std::uint32_t> next(n);
  for (std::size_t k = 1; n > 0; k <<= 1) {
    auto second = [&](std::uint32_t i) { return i + k < n ? rank[i + k] : 0U; };
    counting_sort(order, buckets, second);
    counting_sort(order, buckets, [&](std::uint32_t i) { return rank[i]; });
    std::uint32_t r = 1;
    next[order[0]] = r;
    for (std::size_t x = 1; x < n; ++x) {
      const std::uint32_t p = order[x - 1];
      const std::uint32_t q = order[x];
      if (rank[p] != rank[q] || second(p) != second(q)) ++r;
      next[q] = r;
    }
    rank.swap(next);
    if (r == n || k >= n) break;
  }
  sa_.resize(n);
  for (std::size_t x = 0; x < n; ++x) sa_[x] = order[x] + 1;
  compute_lcp(text);
}

SuffixArray::SuffixArray(std::string_view text, std::vector<std::uint32_t> positions)
    : sa_(std::move(positions)) {
  if (sa_.size() != text.size()) throw FormatError("suffix array length differs from text");
  std::vector<bool> seen(sa_.size() + 1, false);
  for (std::uint32_t p : sa_) {
    if (p < 1 || p > sa_.size() || seen[p]) throw FormatError("suffix array is not a permutation");
    seen[p] = true;
  }
  compute_lcp(text);
}

void SuffixArray::compute_lcp(std::string_view text) {
  const std::size_t n = sa_.size();
  lcp_.assign(n, 0);
  std::vector<std::uint32_t> inverse(n);
  for (std::size_t r = 0; r < n; ++r) inverse[sa_[r] - 1] = static_cast<std::uint32_t>(r);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t r = inverse[i];
    if (r == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa_[r - 1] - 1;
    while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
    lcp_[r] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
}

namespace {

// Compares the |P|-prefix of the suffix at `pos` (0-based) with P, skipping
// `skip` characters known to match. Sets `matched` to the common length.
int compare_prefix(std::string_view text, std::size_t pos, std::string_view p, std::size_t skip,
                   std::size_t& matched) {
  std::size_t m = skip;
  while (m < p.size() && pos + m < text.size() && text[pos + m] == p[m]) ++m;
  matched = m;
  if (m == p.size()) return 0;
  if (pos + m == text.size()) return -1;
  return static_cast<unsigned char>(text[pos + m]) < static_cast<unsigned char>(p[m]) ? -1 : 1;
}

// First rank whose suffix compares >= P (strict: > P).
std::size_t search_bound(std::string_view text, const SuffixArray& sa, std::string_view p,
                         bool strict) {
  std::ptrdiff_t lo = -1;
  auto hi = static_cast<std::ptrdiff_t>(sa.size());
  std::size_t lcp_lo = 0;
  std::size_t lcp_hi = 0;
  while (hi - lo > 1) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    std::size_t matched = 0;
    const int c = compare_prefix(text, sa[static_cast<std::size_t>(mid)] - 1, p,
                                 std::min(lcp_lo, lcp_hi), matched);
    if (strict ? c > 0 : c >= 0) {
      hi = mid;
      lcp_hi = matched;
    } else {
      lo = mid;
      lcp_lo = matched;
    }
  }
  return static_cast<std::size_t>(hi);
}

}  // namespace

PatternInterval pattern_interval(std::string_view text, const SuffixArray& sa,
                                 std::string_view pattern) {
  if (pattern.empty() || pattern.size() > text.size()) return {};
  const std::size_t begin = search_bound(text, sa, pattern, false);
  const std::size_t end = search_bound(text, sa, pattern, true);
  return {begin, std::max(begin, end)};
}

// --- GappedStringIndex ------------------------------------------------------

GappedStringIndex::GappedStringIndex(std::string text, const BackendConfig& config)
    : text_(std::move(text)), sa_(text_) {
  build(config);
}

GappedStringIndex::GappedStringIndex(std::string text, SuffixArray sa, const BackendConfig& config)
    : text_(std::move(text)), sa_(std::move(sa)) {
  if (sa_.size() != text_.size()) throw FormatError("suffix array length differs from text");
  build(config);
}

void GappedStringIndex::build(const BackendConfig& config) {
  const std::size_t n = text_.size();
  if (n == 0) throw std::invalid_argument("text must be nonempty");
  intervals_ = dyadic_intervals(n);
  std::vector<std::vector<Element>> sets;
  sets.reserve(intervals_.size());
  for (std::size_t x = 0; x < intervals_.size(); ++x) {
    const auto& iv = intervals_[x];
    if (iv.block == 0) level_base_.push_back(static_cast<SetId>(x));
    std::vector<Element> s;
    s.reserve(iv.hi - iv.lo + 1);
    for (std::size_t r = iv.lo; r <= iv.hi; ++r) s.push_back(sa_[r - 1]);
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  SetCollection collection(std::move(sets), static_cast<Element>(n));
  index_ = std::make_unique<GappedIndex>(collection, config);
}

SetId GappedStringIndex::set_for(const DyadicInterval& iv) const {
  return level_base_.at(iv.level) + static_cast<SetId>(iv.block);
}

std::size_t GappedStringIndex::set_element_bound() const {
  return text_.size() * (floor_log2(text_.size()) + 1);
}

std::vector<SetId> GappedStringIndex::cover(std::string_view pattern) const {
  const PatternInterval range = pattern_interval(text_, sa_, pattern);
  std::vector<SetId> out;
  if (range.empty()) return out;
  for (const auto& iv : cover_positions(range.begin + 1, range.end)) out.push_back(set_for(iv));
  return out;
}

namespace {

void check_gap(Element alpha, Element beta) {
  if (alpha < 0 || alpha > beta) {
    throw std::invalid_argument("gap range must satisfy 0 <= alpha <= beta");
  }
}

}  // namespace

std::vector<ElementPair> GappedStringIndex::report(std::string_view p1, std::string_view p2,
                                                   Element alpha, Element beta,
                                                   StringQueryStats* stats) const {
  check_gap(alpha, beta);
  std::vector<ElementPair> out;
  const auto a_sets = cover(p1);
  const auto b_sets = cover(p2);
  for (SetId a : a_sets) {
    for (SetId b : b_sets) {
      for (const auto& c : index_->report(a, b, alpha, beta, stats ? &stats->gapped : nullptr)) {
        out.push_back({c.a, c.b});
      }
    }
  }
  if (stats) stats->set_pairs += a_sets.size() * b_sets.size();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<ElementPair> GappedStringIndex::exists(std::string_view p1, std::string_view p2,
                                                     Element alpha, Element beta,
                                                     StringQueryStats* stats) const {
  check_gap(alpha, beta);
  const auto a_sets = cover(p1);
  const auto b_sets = cover(p2);
  for (SetId a : a_sets) {
    for (SetId b : b_sets) {
      if (stats) ++stats->set_pairs;
      if (auto c = index_->exists(a, b, alpha, beta, stats ? &stats->gapped : nullptr)) {
        return ElementPair{c->a, c->b};
      }
    }
  }
  return std::nullopt;
}

// --- Baselines --------------------------------------------------------------

std::vector<Element> kmp_occurrences(std::string_view text, std::string_view pattern,
                                     std::uint64_t* steps) {
  std::vector<Element> out;
  const std::size_t m = pattern.size();
  if (m == 0 || m > text.size()) return out;
  std::vector<std::size_t> fail(m, 0);
  for (std::size_t i = 1, k = 0; i < m; ++i) {
    while (k > 0 && pattern[i] != pattern[k]) k = fail[k - 1];
    if (pattern[i] == pattern[k]) ++k;
    fail[i] = k;
  }
  std::uint64_t count = 0;
  for (std::size_t i = 0, k = 0; i < text.size(); ++i) {
    ++count;
    while (k > 0 && text[i] != pattern[k]) k = fail[k - 1];
    if (text[i] == pattern[k]) ++k;
    if (k == m) {
      out.push_back(static_cast<Element>(i + 2 - m));
      k = fail[k - 1];
    }
  }
  if (steps) *steps += count;
  return out;
}

std::vector<Element> kmp_occurrences(std::string_view text, std::string_view pattern) {
  return kmp_occurrences(text, pattern, nullptr);
}

std::vector<ElementPair> baseline_linear_scan(std::string_view text, std::string_view p1,
                                              std::string_view p2, Element alpha, Element beta,
                                              ScanStats* stats) {
  check_gap(alpha, beta);
  std::uint64_t steps = 0;
  const auto first = kmp_occurrences(text, p1, &steps);
  const auto second = kmp_occurrences(text, p2, &steps);
  std::vector<ElementPair> out;
  std::uint64_t scanned = 0;
  std::size_t finger = 0;
  for (Element i : first) {
    while (finger > 0 && second[finger - 1] >= i + alpha) {
      --finger;
      ++scanned;
    }
    while (finger < second.size() && second[finger] < i + alpha) {
      ++finger;
      ++scanned;
    }
    for (std::size_t q = finger; q < second.size() && second[q] <= i + beta; ++q) {
      ++scanned;
      out.push_back({i, second[q]});
    }
  }
  if (stats) {
    stats->text_steps += steps;
    stats->positions_scanned += scanned;
  }
  return out;
}

QuadraticBaseline::QuadraticBaseline(std::string text, std::uint64_t budget_bytes)
    : text_(std::move(text)), sa_(text_) {
  const std::size_t n = text_.size();
  if (n == 0) throw std::invalid_argument("text must be nonempty");
  intervals_ = dyadic_intervals(n);
  std::uint64_t total = 0;
  for (std::size_t x = 0; x < intervals_.size(); ++x) {
    const auto& iv = intervals_[x];
    if (iv.block == 0) level_base_.push_back(static_cast<SetId>(x));
    std::vector<Element> s;
    for (std::size_t r = iv.lo; r <= iv.hi; ++r) s.push_back(sa_[r - 1]);
    std::sort(s.begin(), s.end());
    total += s.size();
    slices_.push_back(std::move(s));
  }
  const std::uint64_t bound_bytes = total * total * sizeof(std::uint64_t);
  if (bound_bytes > budget_bytes) {
    throw GuardError("quadratic baseline needs up to " + std::to_string(bound_bytes) +
                     " bytes, budget is " + std::to_string(budget_bytes));
  }
  const std::size_t k = slices_.size();
  pairs_.resize(k * k);
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      auto& entries = pairs_[x * k + y].entries;
      for (Element a : slices_[x]) {
        for (Element b : slices_[y]) {
          if (b < a) continue;
          entries.push_back((static_cast<std::uint64_t>(b - a) << 32) |
                            static_cast<std::uint64_t>(a));
        }
      }
      std::sort(entries.begin(), entries.end());
      stored_pairs_ += entries.size();
    }
  }
}

std::vector<SetId> QuadraticBaseline::cover(std::string_view pattern) const {
  const PatternInterval range = pattern_interval(text_, sa_, pattern);
  std::vector<SetId> out;
  if (range.empty()) return out;
  for (const auto& iv : cover_positions(range.begin + 1, range.end)) {
    out.push_back(level_base_.at(iv.level) + static_cast<SetId>(iv.block));
  }
  return out;
}

std::vector<ElementPair> QuadraticBaseline::report(std::string_view p1, std::string_view p2,
                                                   Element alpha, Element beta) const {
  check_gap(alpha, beta);
  const auto top = static_cast<std::uint64_t>(std::min<Element>(beta, static_cast<Element>(text_.size())));
  const auto lo_key = static_cast<std::uint64_t>(alpha) << 32;
  const std::uint64_t hi_key = (top << 32) | 0xffffffffULL;
  std::vector<ElementPair> out;
  const std::size_t k = slices_.size();
  for (SetId x : cover(p1)) {
    for (SetId y : cover(p2)) {
      const auto& entries = pairs_[x * k + y].entries;
      auto it = std::lower_bound(entries.begin(), entries.end(), lo_key);
      for (; it != entries.end() && *it <= hi_key; ++it) {
        const auto d = static_cast<Element>(*it >> 32);
        const auto a = static_cast<Element>(*it & 0xffffffffULL);
        out.push_back({a, a + d});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ElementPair> QuadraticBaseline::pairs_at_distance(Element d) const {
  std::vector<ElementPair> out;
  if (d < 0) return out;
  const auto lo_key = static_cast<std::uint64_t>(d) << 32;
  const std::uint64_t hi_key = lo_key | 0xffffffffULL;
  for (const auto& p : pairs_) {
    auto it = std::lower_bound(p.entries.begin(), p.entries.end(), lo_key);
    for (; it != p.entries.end() && *it <= hi_key; ++it) {
      const auto a = static_cast<Element>(*it & 0xffffffffULL);
      out.push_back({a, a + d});
    }
  }
  return out;
}

}  // namespace gapidx
