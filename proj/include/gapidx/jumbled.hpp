#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gapidx/common.hpp"
#include "gapidx/reporting.hpp"

namespace gapidx {

using Histogram = std::vector<Element>;
using WideScalar = unsigned __int128;

inline constexpr std::size_t kMaxAlphabet = 8;
inline constexpr unsigned kEncodeBits = 120;

// Sorted distinct letters.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view letters);
  // The letters occurring in text.
  static Alphabet of(std::string_view text);

  std::size_t size() const { return letters_.size(); }
  const std::string& letters() const { return letters_; }
  std::optional<std::size_t> index(char c) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string letters_;
};

// Throws std::invalid_argument on a letter outside the alphabet.
Histogram histogram(std::string_view s, const Alphabet& alphabet);

// sum_t v[t] base^t. Throws GuardError when dim * log2(base) exceeds 120
// bits, and std::invalid_argument when a coordinate is outside [0, base).
WideScalar encode_vector(std::span<const Element> v, Element base);
Histogram decode_vector(WideScalar x, Element base, std::size_t dim);

std::string to_string(WideScalar x);

// Substrings with a given histogram, found as 3SUM witnesses over encoded
// prefix and suffix histograms (both including the empty affix).
class JumbledIndex {
 public:
  JumbledIndex(std::string text, Alphabet alphabet, const BackendConfig& config);

  const std::string& text() const { return text_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const Histogram& total() const { return total_; }
  Element base() const { return base_; }
  // u' = enc(h(S)) + 1; every stored value lies in [1, u'].
  Element merged_universe() const { return universe_; }
  std::span<const Element> prefix_codes() const { return prefix_codes_; }
  std::span<const Element> suffix_codes() const { return suffix_codes_; }
  const ThreeSumReporter& reporter() const { return *reporter_; }

  // Prefix length p (0..n) for an encoded prefix histogram.
  std::optional<std::size_t> prefix_length(Element code) const;
  // Suffix start q (1..n+1) for an encoded suffix histogram.
  std::optional<std::size_t> suffix_start(Element code) const;

  // 1-based (i, j) with histogram(S[i..j]) = P, sorted.
  std::vector<ElementPair> report(std::span<const Element> pattern,
                                  ReportStats* stats = nullptr) const;
  std::optional<ElementPair> exists(std::span<const Element> pattern,
                                    QueryStats* stats = nullptr) const;

 private:
  // Query value for P, or nullopt when h(S) - P has a negative coordinate
  // or P is zero.
  std::optional<Element> query_value(std::span<const Element> pattern) const;
  ElementPair decode(Element x, Element y, Element norm) const;

  std::string text_;
  Alphabet alphabet_;
  Histogram total_;
  Element base_ = 1;
  Element universe_ = 1;
  std::vector<Element> prefix_codes_;
  std::vector<Element> suffix_codes_;
  std::unordered_map<Element, std::size_t> prefix_of_;
  std::unordered_map<Element, std::size_t> suffix_of_;
  MergedThreeSum merged_;
  std::unique_ptr<ThreeSumReporter> reporter_;
};

}  // namespace gapidx
