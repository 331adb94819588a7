#include "gapidx/set_core.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace gapidx {

IntSet::IntSet(SetId id, std::vector<Element> sorted_elements)
    : id_(id), elements_(std::move(sorted_elements)) {
  for (std::size_t r = 1; r < elements_.size(); ++r) {
    if (elements_[r - 1] >= elements_[r]) {
      throw FormatError("set " + std::to_string(id + 1) + " is not strictly increasing");
    }
  }
}

std::size_t IntSet::count_below(Element v) const {
  return static_cast<std::size_t>(std::lower_bound(elements_.begin(), elements_.end(), v) -
                                  elements_.begin());
}

std::size_t IntSet::count_at_most(Element v) const {
  return static_cast<std::size_t>(std::upper_bound(elements_.begin(), elements_.end(), v) -
                                  elements_.begin());
}

bool IntSet::contains(Element v) const {
  return std::binary_search(elements_.begin(), elements_.end(), v);
}

SetCollection::SetCollection(std::vector<std::vector<Element>> sorted_sets, Element universe,
                             Element max_universe)
    : universe_(universe) {
  if (universe < 1) throw FormatError("universe must be at least 1");
  if (universe > max_universe) {
    throw GuardError("universe " + std::to_string(universe) + " exceeds the supported maximum " +
                     std::to_string(max_universe));
  }
  sets_.reserve(sorted_sets.size());
  for (std::size_t i = 0; i < sorted_sets.size(); ++i) {
    auto& elems = sorted_sets[i];
    if (elems.empty()) throw FormatError("set " + std::to_string(i + 1) + " is empty");
    if (elems.front() < 1 || elems.back() > universe) {
      const Element bad = elems.front() < 1 ? elems.front() : elems.back();
      throw FormatError("set " + std::to_string(i + 1) + ": value " + std::to_string(bad) +
                        " outside universe [1, " + std::to_string(universe) + "]");
    }
    total_size_ += elems.size();
    sets_.emplace_back(static_cast<SetId>(i), std::move(elems));
  }
}

bool operator==(const SetCollection& a, const SetCollection& b) {
  if (a.universe_ != b.universe_ || a.sets_.size() != b.sets_.size()) return false;
  for (std::size_t i = 0; i < a.sets_.size(); ++i) {
    auto x = a.sets_[i].elements();
    auto y = b.sets_[i].elements();
    if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
  }
  return true;
}

SetCollection ingest_collection(const std::vector<std::vector<Element>>& raw, Element universe) {
  if (universe > kMaxInputUniverse) {
    throw GuardError("universe " + std::to_string(universe) + " exceeds 2^40");
  }
  std::vector<std::vector<Element>> sets;
  sets.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].empty()) throw FormatError("set " + std::to_string(i + 1) + " is empty");
    for (Element v : raw[i]) {
      if (v < 1 || v > universe) {
        throw FormatError("set " + std::to_string(i + 1) + ": value " + std::to_string(v) +
                          " outside universe [1, " + std::to_string(universe) + "]");
      }
    }
    std::vector<Element> s = raw[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    sets.push_back(std::move(s));
  }
  return SetCollection(std::move(sets), universe, kMaxInputUniverse);
}

namespace {

Element parse_integer(const std::string& token, std::size_t line_no) {
  std::size_t used = 0;
  Element v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) {
    throw FormatError("line " + std::to_string(line_no) + ": not an integer: '" + token + "'");
  }
  return v;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

SetCollection parse_collection(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError("empty collection input");
  auto header = split_tokens(line);
  if (header.size() != 2) throw FormatError("line 1: expected `u k`");
  const Element u = parse_integer(header[0], 1);
  const Element k = parse_integer(header[1], 1);
  if (k < 0) throw FormatError("line 1: negative set count");
  std::vector<std::vector<Element>> raw;
  raw.reserve(static_cast<std::size_t>(k));
  while (static_cast<Element>(raw.size()) < k) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw FormatError("expected " + std::to_string(k) + " sets, found " +
                        std::to_string(raw.size()));
    }
    std::vector<Element> set;
    for (const auto& tok : split_tokens(line)) set.push_back(parse_integer(tok, line_no));
    raw.push_back(std::move(set));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_tokens(line).empty()) {
      throw FormatError("line " + std::to_string(line_no) + ": trailing content after last set");
    }
  }
  return ingest_collection(raw, u);
}

void write_collection(std::ostream& out, const SetCollection& c) {
  out << c.universe() << ' ' << c.size() << '\n';
  for (const auto& s : c) {
    bool first = true;
    for (Element v : s.elements()) {
      if (!first) out << ' ';
      out << v;
      first = false;
    }
    out << '\n';
  }
}

std::vector<DyadicInterval> dyadic_intervals(std::size_t n) {
  std::vector<DyadicInterval> out;
  if (n == 0) return out;
  for (unsigned j = 0; j <= floor_log2(n); ++j) {
    const std::size_t width = std::size_t{1} << j;
    for (std::size_t block = 0; block < n / width; ++block) {
      out.push_back({block * width + 1, (block + 1) * width, j, block});
    }
  }
  return out;
}

std::vector<DyadicInterval> cover_positions(std::size_t lo, std::size_t hi) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("cover_positions: invalid range");
  std::vector<DyadicInterval> out;
  std::size_t r = lo;
  while (r <= hi) {
    const std::size_t offset = r - 1;
    unsigned j = 0;
    while (true) {
      const std::size_t next = std::size_t{1} << (j + 1);
      if (offset % next != 0 || offset + next > hi) break;
      ++j;
    }
    const std::size_t width = std::size_t{1} << j;
    out.push_back({r, r + width - 1, j, offset / width});
    r += width;
  }
  return out;
}

std::size_t dyadic_element_count(std::size_t m) {
  if (m == 0) return 0;
  std::size_t total = 0;
  for (unsigned j = 0; j <= floor_log2(m); ++j) {
    const std::size_t width = std::size_t{1} << j;
    total += (m / width) * width;
  }
  return total;
}

std::size_t dyadic_subset_count(std::size_t m) {
  if (m == 0) return 0;
  std::size_t total = 0;
  for (unsigned j = 0; j <= floor_log2(m); ++j) total += m >> j;
  return total;
}

namespace {

DyadicSubset make_subset(const IntSet& s, const DyadicInterval& iv) {
  return {s.id(), iv.level, iv.block, iv.lo, iv.hi, s.at_rank(iv.lo), s.at_rank(iv.hi)};
}

}  // namespace

std::vector<DyadicSubset> dyadic_subsets(const IntSet& s) {
  std::vector<DyadicSubset> out;
  for (const auto& iv : dyadic_intervals(s.size())) out.push_back(make_subset(s, iv));
  return out;
}

std::vector<DyadicSubset> cover_rank_range(const IntSet& s, std::size_t lo, std::size_t hi) {
  if (lo < 1 || lo > hi || hi > s.size()) {
    throw std::invalid_argument("cover_rank_range: need 1 <= lo <= hi <= |S|");
  }
  std::vector<DyadicSubset> out;
  for (const auto& iv : cover_positions(lo, hi)) out.push_back(make_subset(s, iv));
  return out;
}

std::vector<DyadicSubset> cover_value_range(const IntSet& s, Element a, Element b) {
  if (a > b) return {};
  const std::size_t lo = s.count_below(a) + 1;
  const std::size_t hi = s.count_at_most(b);
  if (lo > hi) return {};
  return cover_rank_range(s, lo, hi);
}

}  // namespace gapidx
