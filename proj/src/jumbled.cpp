#include "gapidx/jumbled.hpp"

#include <algorithm>
#include <stdexcept>

namespace gapidx {

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
  std::sort(letters_.begin(), letters_.end());
  letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
}

Alphabet Alphabet::of(std::string_view text) { return Alphabet(text); }

std::optional<std::size_t> Alphabet::index(char c) const {
  auto it = std::lower_bound(letters_.begin(), letters_.end(), c);
  if (it == letters_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - letters_.begin());
}

Histogram histogram(std::string_view s, const Alphabet& alphabet) {
  Histogram h(alphabet.size(), 0);
  for (char c : s) {
    auto x = alphabet.index(c);
    if (!x) {
      throw std::invalid_argument("letter " + std::to_string(static_cast<unsigned char>(c)) +
                                  " is not in the alphabet");
    }
    ++h[*x];
  }
  return h;
}

namespace {

void check_encoding_bits(std::size_t dim, Element base) {
  if (base < 2) throw std::invalid_argument("encoding base must be at least 2");
  const std::uint64_t bits = dim * ceil_log2(static_cast<std::uint64_t>(base));
  if (bits > kEncodeBits) {
    throw GuardError("histogram encoding needs " + std::to_string(bits) + " bits, limit is " +
                     std::to_string(kEncodeBits));
  }
}

}  // namespace

WideScalar encode_vector(std::span<const Element> v, Element base) {
  check_encoding_bits(v.size(), base);
  WideScalar x = 0;
  for (std::size_t t = v.size(); t-- > 0;) {
    if (v[t] < 0 || v[t] >= base) {
      throw std::invalid_argument("coordinate " + std::to_string(v[t]) + " outside [0, " +
                                  std::to_string(base) + ")");
    }
    x = x * static_cast<WideScalar>(base) + static_cast<WideScalar>(v[t]);
  }
  return x;
}

Histogram decode_vector(WideScalar x, Element base, std::size_t dim) {
  check_encoding_bits(dim, base);
  Histogram v(dim, 0);
  for (std::size_t t = 0; t < dim; ++t) {
    v[t] = static_cast<Element>(x % static_cast<WideScalar>(base));
    x /= static_cast<WideScalar>(base);
  }
  if (x != 0) throw std::invalid_argument("scalar has more digits than dimensions");
  return v;
}

std::string to_string(WideScalar x) {
  if (x == 0) return "0";
  std::string out;
  while (x != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

JumbledIndex::JumbledIndex(std::string text, Alphabet alphabet, const BackendConfig& config)
    : text_(std::move(text)), alphabet_(std::move(alphabet)) {
  const std::size_t n = text_.size();
  if (n == 0) throw std::invalid_argument("text must be nonempty");
  if (alphabet_.size() == 0) throw std::invalid_argument("alphabet must be nonempty");
  if (alphabet_.size() > kMaxAlphabet) {
    throw GuardError("alphabet of " + std::to_string(alphabet_.size()) +
                     " letters exceeds the limit of " + std::to_string(kMaxAlphabet) +
                     "; the encoded universe grows as (n+1)^sigma");
  }
  base_ = static_cast<Element>(n) + 1;
  total_ = histogram(text_, alphabet_);
  const WideScalar top = encode_vector(total_, base_);
  // Merged values reach 3u' and the reductions below double that again.
  const auto limit = static_cast<WideScalar>(kMaxInternalUniverse / 4);
  if (top + 1 > limit) {
    throw GuardError("encoded histogram " + to_string(top) + " exceeds the 64-bit pipeline limit " +
                     to_string(limit));
  }
  universe_ = static_cast<Element>(top) + 1;

  const std::size_t sigma = alphabet_.size();
  Histogram h(sigma, 0);
  prefix_codes_.reserve(n + 1);
  for (std::size_t p = 0;; ++p) {
    const auto code = static_cast<Element>(encode_vector(h, base_)) + 1;
    prefix_codes_.push_back(code);
    prefix_of_.emplace(code, p);
    if (p == n) break;
    ++h[*alphabet_.index(text_[p])];
  }
  std::fill(h.begin(), h.end(), 0);
  suffix_codes_.assign(n + 1, 0);
  for (std::size_t q = n + 1; q >= 1; --q) {
    if (q <= n) ++h[*alphabet_.index(text_[q - 1])];
    const auto code = static_cast<Element>(encode_vector(h, base_)) + 1;
    suffix_codes_[q - 1] = code;
    suffix_of_.emplace(code, q);
  }
  if (prefix_of_.size() != n + 1 || suffix_of_.size() != n + 1) {
    throw std::logic_error("affix histogram encodings collide");
  }
  merged_ = merge_two_set_3sum(prefix_codes_, suffix_codes_, universe_);
  reporter_ = std::make_unique<ThreeSumReporter>(merged_.elements, config);
}

std::optional<std::size_t> JumbledIndex::prefix_length(Element code) const {
  auto it = prefix_of_.find(code);
  if (it == prefix_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> JumbledIndex::suffix_start(Element code) const {
  auto it = suffix_of_.find(code);
  if (it == suffix_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<Element> JumbledIndex::query_value(std::span<const Element> pattern) const {
  if (pattern.size() != alphabet_.size()) {
    throw std::invalid_argument("pattern has " + std::to_string(pattern.size()) +
                                " counts, alphabet has " + std::to_string(alphabet_.size()));
  }
  Histogram rest(pattern.size());
  Element norm = 0;
  for (std::size_t t = 0; t < pattern.size(); ++t) {
    if (pattern[t] < 0) throw std::invalid_argument("pattern counts must be nonnegative");
    norm += pattern[t];
    rest[t] = total_[t] - pattern[t];
    if (rest[t] < 0) return std::nullopt;
  }
  if (norm == 0) return std::nullopt;
  return merged_.map_query(static_cast<Element>(encode_vector(rest, base_)) + 2);
}

ElementPair JumbledIndex::decode(Element x, Element y, Element norm) const {
  const Element a = std::min(x, y);
  const Element b = std::max(x, y);
  if (merged_.from_b(a) || !merged_.from_b(b)) {
    throw std::logic_error("3SUM witness does not pair a prefix with a suffix");
  }
  const auto p = prefix_length(a);
  const auto q = suffix_start(merged_.original(b));
  if (!p || !q) throw std::logic_error("3SUM witness does not decode");
  const auto n = static_cast<Element>(text_.size());
  const auto pe = static_cast<Element>(*p);
  const auto qe = static_cast<Element>(*q);
  if (pe + norm + (n - qe + 1) != n) throw std::logic_error("decoded affixes overlap");
  return {pe + 1, qe - 1};
}

std::vector<ElementPair> JumbledIndex::report(std::span<const Element> pattern,
                                              ReportStats* stats) const {
  std::vector<ElementPair> out;
  const auto c = query_value(pattern);
  if (!c) return out;
  Element norm = 0;
  for (Element v : pattern) norm += v;
  for (const auto& [x, y] : reporter_->report(*c, stats)) out.push_back(decode(x, y, norm));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<ElementPair> JumbledIndex::exists(std::span<const Element> pattern,
                                                QueryStats* stats) const {
  const auto c = query_value(pattern);
  if (!c) return std::nullopt;
  Element norm = 0;
  for (Element v : pattern) norm += v;
  auto hit = reporter_->find(*c, stats);
  if (!hit) return std::nullopt;
  return decode(hit->first, hit->second, norm);
}

}  // namespace gapidx
