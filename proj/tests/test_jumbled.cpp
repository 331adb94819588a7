#include <map>

#include "doctest.h"
#include "gapidx/jumbled.hpp"
#include "oracles.hpp"

using namespace gapidx;

namespace {

oracle::Pairs as_pairs(const std::vector<ElementPair>& v) {
  oracle::Pairs out;
  for (const auto& p : v) out.emplace_back(p.first, p.second);
  return out;
}

std::map<char, Element> as_map(const Alphabet& a, const Histogram& h) {
  std::map<char, Element> out;
  for (std::size_t x = 0; x < h.size(); ++x) out[a.letters()[x]] = h[x];
  return out;
}

}  // namespace

TEST_CASE("histograms") {
  const Alphabet abcd("dcba");
  CHECK(abcd.letters() == "abcd");
  CHECK(histogram("acaacabd", abcd) == Histogram{4, 1, 2, 1});
  CHECK(histogram("", abcd) == Histogram{0, 0, 0, 0});
  CHECK_THROWS_AS(histogram("abx", abcd), std::invalid_argument);
  Rng rng(67);
  const std::string s = oracle::random_string(rng, 77, 4);
  const auto h = histogram(s, abcd);
  CHECK(h[0] + h[1] + h[2] + h[3] == 77);
}

TEST_CASE("vector encoding") {
  const Histogram v{1, 2};
  CHECK(encode_vector(v, 10) == 21);
  const Histogram w{3, 4};
  CHECK(encode_vector(v, 10) + encode_vector(w, 10) == encode_vector(Histogram{4, 6}, 10));
  CHECK_THROWS_AS(encode_vector(Histogram{10}, 10), std::invalid_argument);
  CHECK_THROWS_AS(encode_vector(Histogram(9, 0), Element{1} << 14), GuardError);
  CHECK(to_string(encode_vector(Histogram{0, 0, 0, 0, 0, 0, 0, 1}, 1000)) == "1000000000000000000000");
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dim = static_cast<std::size_t>(rng.uniform(1, 8));
    const Element base = rng.uniform(2, 1000);
    Histogram x(dim);
    for (Element& c : x) c = rng.uniform(0, base - 1);
    CHECK(decode_vector(encode_vector(x, base), base, dim) == x);
  }
}

TEST_CASE("jumbled index examples") {
  JumbledIndex ab("ab", Alphabet("ab"), BackendConfig{});
  CHECK(ab.prefix_codes().size() == 3);
  CHECK(ab.suffix_codes().size() == 3);
  CHECK(as_pairs(ab.report(Histogram{1, 1})) == oracle::Pairs{{1, 2}});
  CHECK(as_pairs(ab.report(Histogram{1, 0})) == oracle::Pairs{{1, 1}});
  CHECK(ab.report(Histogram{0, 0}).empty());
  CHECK(ab.report(Histogram{2, 0}).empty());
  CHECK_THROWS_AS(ab.report(Histogram{1}), std::invalid_argument);

  JumbledIndex s("acaacabd", Alphabet("abcd"), BackendConfig{});
  CHECK(s.total() == Histogram{4, 1, 2, 1});
  CHECK(as_pairs(s.report(Histogram{4, 1, 2, 1})) == oracle::Pairs{{1, 8}});
  auto hit = s.exists(Histogram{4, 1, 2, 1});
  REQUIRE(hit);
  CHECK(*hit == ElementPair{1, 8});
  for (std::size_t p = 0; p < s.prefix_codes().size(); ++p) {
    CHECK(s.prefix_length(s.prefix_codes()[p]) == p);
    CHECK(s.suffix_start(s.suffix_codes()[p]) == p + 1);
  }
}

TEST_CASE("alphabet guard") {
  CHECK_THROWS_AS(JumbledIndex("abcdefghi", Alphabet("abcdefghi"), BackendConfig{}), GuardError);
  CHECK_THROWS_AS(JumbledIndex(std::string(5000, 'a') + "bcdefgh", Alphabet("abcdefgh"),
                               BackendConfig{}),
                  GuardError);
}

TEST_CASE("jumbled queries equal the recount oracle") {
  Rng rng(73);
  for (int trial = 0; trial < 15; ++trial) {
    const auto sigma = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto n = static_cast<std::size_t>(rng.uniform(1, 60));
    const std::string text = oracle::random_string(rng, n, sigma);
    const Alphabet alphabet(std::string("abcd").substr(0, sigma));
    JumbledIndex index(text, alphabet, BackendConfig{static_cast<BackendKind>(rng.uniform(0, 2)), 0.5});
    for (int x = 0; x < 30; ++x) {
      Histogram p(sigma);
      if (rng.coin()) {
        const auto len = static_cast<std::size_t>(rng.uniform(1, static_cast<Element>(n)));
        const auto at = static_cast<std::size_t>(rng.uniform(0, static_cast<Element>(n - len)));
        p = histogram(std::string_view(text).substr(at, len), alphabet);
      } else {
        for (Element& c : p) c = rng.uniform(0, 3);
      }
      const auto want = oracle::jumbled_matches(text, as_map(alphabet, p));
      REQUIRE(as_pairs(index.report(p)) == want);
      REQUIRE(index.exists(p).has_value() == !want.empty());
    }
  }
}
